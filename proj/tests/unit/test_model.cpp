#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "crsma/errors.hpp"
#include "crsma/model.hpp"

using namespace crsma;

TEST_CASE("SystemConfig derives thresholds") {
    const auto c = SystemConfig::make(3, 10.0, 20.0, 1.0, 2.0);
    CHECK(c.num_gfus() == 3);
    CHECK(c.eps0() == doctest::Approx(1.0));
    CHECK(c.eps_s() == doctest::Approx(3.0));
    CHECK(c.eta0() == doctest::Approx(0.1));
    CHECK(c.eta_s() == doctest::Approx(0.15));
}

TEST_CASE("SystemConfig from dB and copies") {
    const auto c = SystemConfig::from_db(2, 20.0, 10.0, 1.0, 1.0);
    CHECK(c.power_gbu() == doctest::Approx(100.0));
    CHECK(c.power_gfu() == doctest::Approx(10.0));
    CHECK(c.with_num_gfus(5).num_gfus() == 5);
    CHECK(c.with_powers(1.0, 2.0).power_gfu() == 2.0);
    CHECK(c.with_target_rates(2.0, 3.0).eps_s() == doctest::Approx(7.0));
    CHECK(c == SystemConfig::from_db(2, 20.0, 10.0, 1.0, 1.0));
}

TEST_CASE("SystemConfig rejects invalid parameters") {
    CHECK_THROWS_AS(SystemConfig::make(0, 1.0, 1.0, 1.0, 1.0), InvalidConfiguration);
    CHECK_THROWS_AS(SystemConfig::make(1, 0.0, 1.0, 1.0, 1.0), InvalidConfiguration);
    CHECK_THROWS_AS(SystemConfig::make(1, 1.0, -1.0, 1.0, 1.0), InvalidConfiguration);
    CHECK_THROWS_AS(SystemConfig::make(1, 1.0, 1.0, 0.0, 1.0), InvalidConfiguration);
    CHECK_THROWS_AS(SystemConfig::make(1, 1.0, 1.0, 1.0, NAN), InvalidConfiguration);
    CHECK_THROWS_AS(SystemConfig::make(1, INFINITY, 1.0, 1.0, 1.0), InvalidConfiguration);
}

TEST_CASE("sinr_triplet examples") {
    const auto c = SystemConfig::make(1, 10.0, 10.0, 1.0, 1.0);
    SUBCASE("alpha = 0 collapses the first stream") {
        const auto s = sinr_triplet(c, 1.0, 2.0, 0.0);
        CHECK(s.gfu_stream1 == 0.0);
        CHECK(s.gbu == doctest::Approx(10.0 / 21.0));
        CHECK(s.gfu_stream2 == doctest::Approx(20.0));
    }
    SUBCASE("alpha = 1 with no GBU gain") {
        const auto s = sinr_triplet(c, 0.0, 2.0, 1.0);
        CHECK(s.gfu_stream1 == doctest::Approx(20.0));
        CHECK(s.gbu == 0.0);
        CHECK(s.gfu_stream2 == 0.0);
    }
    SUBCASE("half split") {
        const auto s = sinr_triplet(c, 1.0, 2.0, 0.5);
        CHECK(s.gfu_stream1 == doctest::Approx(10.0 / 21.0));
        CHECK(s.gbu == doctest::Approx(10.0 / 11.0));
        CHECK(s.gfu_stream2 == doctest::Approx(10.0));
    }
    CHECK_THROWS_AS(sinr_triplet(c, 1.0, 1.0, 1.5), DomainError);
    CHECK_THROWS_AS(sinr_triplet(c, -1.0, 1.0, 0.5), DomainError);
}

TEST_CASE("achievable_rates examples") {
    const auto zero = achievable_rates({0.0, 0.0, 0.0});
    CHECK(zero.gfu_stream1 == 0.0);
    CHECK(zero.gbu == 0.0);
    CHECK(zero.gfu_stream2 == 0.0);
    const auto r = achievable_rates({1.0, 3.0, 7.0});
    CHECK(r.gfu_stream1 == doctest::Approx(1.0));
    CHECK(r.gbu == doctest::Approx(2.0));
    CHECK(r.gfu_stream2 == doctest::Approx(3.0));
    CHECK(r.gfu_total() == doctest::Approx(4.0));
    const auto d = achievable_rates({10.0 / 21.0, 10.0 / 11.0, 10.0});
    CHECK(d.gfu_stream1 == doctest::Approx(std::log2(31.0 / 21.0)));
    CHECK(d.gbu == doctest::Approx(std::log2(21.0 / 11.0)));
    CHECK(d.gfu_stream2 == doctest::Approx(std::log2(11.0)));
    CHECK_THROWS_AS(rate_from_sinr(-0.1), DomainError);
}

TEST_CASE("SIC chain conserves the sum rate") {
    RandomStream rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double p0 = std::exp(6.0 * rng.uniform());
        const double ps = std::exp(6.0 * rng.uniform());
        const auto c = SystemConfig::make(1, p0, ps, 1.0, 1.0);
        const double g0 = rng.exponential();
        const double gk = rng.exponential();
        const double alpha = rng.uniform();
        const auto r = achievable_rates(sinr_triplet(c, g0, gk, alpha));
        const double expected = std::log2(1.0 + p0 * g0 + ps * gk);
        CHECK(r.gfu_stream1 + r.gbu + r.gfu_stream2 == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("RandomStream is reproducible and stream-separated") {
    RandomStream a(5, 3);
    RandomStream b(5, 3);
    RandomStream c(5, 4);
    RandomStream d(6, 3);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
    RandomStream u(1);
    for (int i = 0; i < 100000; ++i) {
        const double v = u.uniform();
        REQUIRE(v > 0.0);
        REQUIRE(v <= 1.0);
    }
}

TEST_CASE("channel realizations are sorted and admit the strongest user") {
    RandomStream rng(1);
    const auto r = sample_channel_realization(3, rng);
    CHECK(r.num_gfus() == 3);
    CHECK(std::is_sorted(r.gains_gfu.begin(), r.gains_gfu.end()));
    CHECK(std::all_of(r.gains_gfu.begin(), r.gains_gfu.end(), [](double g) { return g >= 0.0; }));
    CHECK(r.admitted_user < 3);
    CHECK(r.best_gain() == r.gains_gfu.back());
    CHECK_NOTHROW(r.validate());
    CHECK_THROWS_AS(sample_channel_realization(0, rng), InvalidConfiguration);

    ChannelRealization bad;
    bad.gains_gfu = {2.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("channel gain moments") {
    constexpr int kDraws = 1'000'000;
    double sum_gbu = 0.0;
    double sum_max = 0.0;
    ChannelRealization r;
    for (int i = 0; i < kDraws; ++i) {
        RandomStream rng(2024, static_cast<std::uint64_t>(i));
        sample_channel_realization_into(5, rng, r);
        sum_gbu += r.gain_gbu;
        sum_max += r.best_gain();
    }
    CHECK(sum_gbu / kDraws == doctest::Approx(1.0).epsilon(0.005));
    const double harmonic5 = 1.0 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5;
    CHECK(std::abs(sum_max / kDraws - harmonic5) < 0.01);
}
