#include <doctest.h>

#include <cmath>

#include "crsma/errors.hpp"
#include "crsma/model.hpp"
#include "crsma/zones.hpp"

using namespace crsma;

TEST_CASE("region corners") {
    const auto absent = region_corners(0.0, 7.0);
    CHECK(absent.a0 == 0.0);
    CHECK(absent.b0 == 0.0);
    CHECK(absent.ak == doctest::Approx(3.0));
    CHECK(absent.bk == doctest::Approx(3.0));
    CHECK(absent.s == doctest::Approx(3.0));

    const auto c = region_corners(std::pow(10.0, 0.8), std::pow(10.0, 1.5));
    CHECK(c.s == doctest::Approx(5.283).epsilon(1e-3));

    CHECK_THROWS_AS(region_corners(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(region_corners(1.0, NAN), DomainError);
}

TEST_CASE("sum-rate identity") {
    RandomStream rng(21);
    for (int i = 0; i < 10000; ++i) {
        const double p0 = std::exp(10.0 * rng.uniform() - 3.0);
        const double ps = std::exp(10.0 * rng.uniform() - 3.0);
        const auto c = region_corners(p0, ps);
        REQUIRE(c.b0 + c.ak == doctest::Approx(c.s).epsilon(1e-12));
        REQUIRE(c.a0 + c.bk == doctest::Approx(c.s).epsilon(1e-12));
    }
}

TEST_CASE("rate pair classification") {
    const double p0 = std::pow(10.0, 0.8);
    const double ps = std::pow(10.0, 1.5);
    const auto c = region_corners(p0, ps);
    CHECK(is_noma_feasible(classify_rate_pair(c, c.b0, c.ak)));
    CHECK(classify_rate_pair(c, c.b0, c.ak) == ZoneLabel::NomaOrder_x0_first);
    CHECK(classify_rate_pair(c, c.a0, c.bk) == ZoneLabel::NomaOrder_xK_first);
    CHECK(classify_rate_pair(c, 0.1, 0.1) == ZoneLabel::NomaEither);

    const double r0 = 0.5 * (c.a0 + c.b0);
    const double rs = c.s - r0;
    CHECK_FALSE(rs > c.ak);
    CHECK(classify_rate_pair(p0, ps, r0, rs) == ZoneLabel::RsmaOnly);

    CHECK(classify_rate_pair(c, c.a0 * 1.001, 0.01) == ZoneLabel::Outage);
    CHECK(classify_rate_pair(c, r0, rs + 0.01) == ZoneLabel::Outage);
    CHECK(to_string(ZoneLabel::RsmaOnly) == "RsmaOnly");
}

TEST_CASE("NOMA zones sit inside the RSMA zone") {
    RandomStream rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const double p0 = std::exp(6.0 * rng.uniform());
        const double ps = std::exp(6.0 * rng.uniform());
        const auto grid = classify_grid(p0, ps, 200);
        REQUIRE(grid.cells.size() == 40000);
        std::size_t rsma_only = 0;
        for (const auto& cell : grid.cells) {
            const auto& c = grid.corners;
            const bool mac = cell.target_gbu <= c.a0 && cell.target_gfu <= c.ak &&
                             cell.target_gbu + cell.target_gfu <= c.s;
            if (is_noma_feasible(cell.label)) {
                REQUIRE(mac);
            }
            rsma_only += cell.label == ZoneLabel::RsmaOnly ? 1 : 0;
        }
        CHECK(rsma_only > 0);
    }
}

TEST_CASE("raising a target never leaves the outage zone") {
    const auto c = region_corners(6.0, 30.0);
    for (int i = 1; i <= 60; ++i) {
        for (int j = 1; j <= 60; ++j) {
            const double r0 = 0.1 * i;
            const double rs = 0.1 * j;
            if (classify_rate_pair(c, r0, rs) == ZoneLabel::Outage) {
                REQUIRE(classify_rate_pair(c, r0 + 0.1, rs) == ZoneLabel::Outage);
                REQUIRE(classify_rate_pair(c, r0, rs + 0.1) == ZoneLabel::Outage);
            }
        }
    }
}

TEST_CASE("grid arguments") {
    CHECK_THROWS_AS(classify_grid(1.0, 1.0, 0), InvalidArgument);
    CHECK_THROWS_AS(classify_grid(0.0, 1.0, 10), DomainError);
    const auto g = classify_grid(2.0, 3.0, 4);
    CHECK(g.cells.size() == 16);
    CHECK(g.cells.front().target_gbu == doctest::Approx(g.step_gbu));
    CHECK(g.cells.back().target_gfu == doctest::Approx(1.25 * g.corners.ak));
}
