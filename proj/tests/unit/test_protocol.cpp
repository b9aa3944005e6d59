#include <doctest.h>

#include <cmath>

#include "crsma/errors.hpp"
#include "crsma/protocol.hpp"

using namespace crsma;

namespace {

/// Realization with P0 g0 and Ps g_k given directly (P0 = Ps = 1).
ChannelRealization realization(double p0g0, std::vector<double> psg) {
    ChannelRealization r;
    r.gain_gbu = p0g0;
    r.gains_gfu = std::move(psg);
    r.admitted_user = r.gains_gfu.size() - 1;
    return r;
}

SystemConfig unit_config(std::size_t k, double r0, double rs) {
    return SystemConfig::make(k, 1.0, 1.0, r0, rs);
}

}  // namespace

TEST_CASE("interference threshold") {
    const auto c = unit_config(1, 1.0, 1.0);
    auto t = interference_threshold(c, 4.0);
    CHECK(t.tau_hat == doctest::Approx(3.0));
    CHECK(t.tau == doctest::Approx(3.0));
    t = interference_threshold(c, 0.5);
    CHECK(t.tau_hat == doctest::Approx(-0.5));
    CHECK(t.tau == 0.0);
    const auto c3 = unit_config(1, 2.0, 1.0);
    t = interference_threshold(c3, 3.0);
    CHECK(t.tau_hat == 0.0);
    CHECK(t.tau == 0.0);
}

TEST_CASE("case classification") {
    const auto c = unit_config(3, 1.0, 1.0);
    CHECK(classify_case(c, realization(0.5, {0.1, 0.2, 0.3})) == CaseLabel::CaseIII);
    CHECK(classify_case(c, realization(4.0, {0.5, 1.0, 2.0})) == CaseLabel::CaseI);
    CHECK(classify_case(c, realization(4.0, {0.5, 1.0, 5.0})) == CaseLabel::CaseII);
    CHECK(classify_case(c, realization(4.0, {0.5, 1.0, 3.0})) == CaseLabel::CaseI);
    CHECK(to_string(CaseLabel::CaseII) == "CaseII");
}

TEST_CASE("allocation") {
    const auto c = unit_config(1, 1.0, 4.0);
    const auto r2 = realization(4.0, {10.0});
    const auto a = allocate(c, r2, CaseLabel::CaseII);
    CHECK(a.alpha == doctest::Approx(0.7));
    CHECK(a.beta == doctest::Approx(0.5));

    const auto r1 = realization(4.0, {2.0});
    const auto a1 = allocate(c, r1, CaseLabel::CaseI);
    CHECK(a1.alpha == 0.0);
    CHECK(a1.beta == 0.0);

    const auto r3 = realization(0.5, {2.0});
    const auto a3 = allocate(c, r3, CaseLabel::CaseIII);
    CHECK(a3.alpha == 1.0);
    CHECK(a3.beta == 1.0);

    CHECK_THROWS_AS(allocate(c, r1, CaseLabel::CaseII), ConsistencyError);

    // tau_hat = 7 with Rs = 2 gives a raw beta of -0.5.
    const auto clamp_cfg = unit_config(1, 1.0, 2.0);
    const auto rc = realization(8.0, {20.0});
    const auto ac = allocate(clamp_cfg, rc, CaseLabel::CaseII);
    CHECK(ac.beta == 0.0);
    const auto outcome = evaluate_transmission(clamp_cfg, rc);
    CHECK(outcome.rate_gfu_total >= 2.0);
    CHECK_FALSE(outcome.gfu_outage);
}

TEST_CASE("evaluate_transmission Case II example") {
    const auto c = unit_config(1, 1.0, 1.0);
    const auto out = evaluate_transmission(c, realization(4.0, {10.0}));
    CHECK(out.case_label == CaseLabel::CaseII);
    CHECK(out.rate_gfu_s2 == doctest::Approx(2.0));
    CHECK(out.rate_gfu_s1 == doctest::Approx(std::log2(15.0 / 8.0)));
    CHECK(out.rate_gfu_total == doctest::Approx(2.0 + std::log2(15.0 / 8.0)));
    CHECK(out.rate_gbu == doctest::Approx(1.0));
    CHECK_FALSE(out.gfu_outage);
    CHECK_FALSE(out.gbu_outage);
    CHECK_FALSE(out.gfu_silent);
    // Sum rate of the three SIC stages.
    CHECK(out.rate_gfu_total + out.rate_gbu == doctest::Approx(std::log2(15.0)));
}

TEST_CASE("evaluate_transmission Case I and III") {
    const auto c = unit_config(1, 1.0, 1.0);
    const auto one = evaluate_transmission(c, realization(4.0, {0.5}));
    CHECK(one.case_label == CaseLabel::CaseI);
    CHECK(one.rate_gfu_total == doctest::Approx(std::log2(1.5)));
    CHECK(one.gfu_outage);
    CHECK_FALSE(one.gbu_outage);
    CHECK_FALSE(one.gfu_silent);

    const auto three = evaluate_transmission(c, realization(0.5, {3.0}));
    CHECK(three.case_label == CaseLabel::CaseIII);
    CHECK(three.rate_gfu_total == doctest::Approx(std::log2(1.0 + 3.0 / 1.5)));
    CHECK(three.gbu_outage);
    CHECK_FALSE(three.gfu_outage);
}

TEST_CASE("silence in Case II") {
    // tau_hat = 0.5 and Ps gK barely above it: the split cannot reach Rs = 3.
    const auto c = unit_config(1, 1.0, 3.0);
    const auto out = evaluate_transmission(c, realization(1.5, {0.6}));
    CHECK(out.case_label == CaseLabel::CaseII);
    CHECK(out.gfu_outage);
    CHECK(out.gfu_silent);
}

TEST_CASE("GBU outage matches orthogonal access") {
    const auto c = unit_config(1, 1.0, 1.0);
    CHECK(gbu_oma_outage(c, 0.5));
    CHECK_FALSE(gbu_oma_outage(c, 1.0));
    RandomStream rng(3);
    const auto cfg = SystemConfig::from_db(4, 12.0, 18.0, 2.0, 1.0);
    for (int i = 0; i < 100000; ++i) {
        const auto r = sample_channel_realization(4, rng);
        REQUIRE(evaluate_transmission(cfg, r).gbu_outage == gbu_oma_outage(cfg, r.gain_gbu));
    }
}

TEST_CASE("rates are consistent with the SINR chain") {
    RandomStream rng(4);
    const auto cfg = SystemConfig::from_db(3, 15.0, 20.0, 2.0, 2.0);
    for (int i = 0; i < 10000; ++i) {
        const auto r = sample_channel_realization(3, rng);
        const auto out = evaluate_transmission(cfg, r);
        const auto rates = achievable_rates(sinr_triplet(cfg, r.gain_gbu, r.best_gain(), out.alpha));
        REQUIRE(rates.gfu_stream1 == doctest::Approx(out.rate_gfu_s1).epsilon(1e-9));
        REQUIRE(rates.gbu == doctest::Approx(out.rate_gbu).epsilon(1e-9));
        REQUIRE(rates.gfu_stream2 == doctest::Approx(out.rate_gfu_s2).epsilon(1e-9));
    }
}
