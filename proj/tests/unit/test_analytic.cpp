#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "crsma/analytic.hpp"
#include "crsma/errors.hpp"
#include "crsma/montecarlo.hpp"

using namespace crsma;

namespace {

/// Direct quadrature of the nu integral.
double nu_quadrature(std::size_t n, double mu, const SystemConfig& c) {
    const double rate = static_cast<double>(n) / (c.power_gfu() * c.eta0()) + mu + 1.0;
    auto f = [rate](double x) { return std::exp(-rate * x); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, c.eta0(), c.eta0() * (1.0 + c.eps_s()), 10, 1e-14);
}

void check_breakdown_close(const OutageBreakdown& a, const OutageBreakdown& b, double tol) {
    CHECK(std::abs(a.p_case1 - b.p_case1) <= tol);
    CHECK(std::abs(a.p_case3 - b.p_case3) <= tol);
    REQUIRE(a.p_case2_terms.size() == b.p_case2_terms.size());
    for (std::size_t k = 0; k < a.p_case2_terms.size(); ++k) {
        CHECK(std::abs(a.p_case2_terms[k] - b.p_case2_terms[k]) <= tol);
    }
    CHECK(std::abs(a.total - b.total) <= tol);
}

double relative_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("nu kernel") {
    const auto c = SystemConfig::make(2, 10.0, 10.0, 1.0, 1.0);
    SUBCASE("plain exponential integral") {
        const double expected = std::exp(-0.1) - std::exp(-0.2);
        CHECK(nu_kernel(0, 0.0, c) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::abs(nu_kernel(0, 0.0, c) - nu_quadrature(0, 0.0, c)) < 1e-9);
    }
    SUBCASE("degenerate rate integrates a constant") {
        CHECK(nu_kernel(0, -1.0, c) == doctest::Approx(c.eps_s() * c.eta0()).epsilon(1e-14));
        const double mu = -1.0 - 2.0 / (c.power_gfu() * c.eta0()) + 1e-13;
        CHECK(nu_kernel(2, mu, c) == doctest::Approx(c.eps_s() * c.eta0()).epsilon(1e-6));
    }
    SUBCASE("agrees with quadrature for mixed arguments") {
        const auto c2 = SystemConfig::from_db(3, 20.0, 15.0, 2.0, 1.5);
        for (std::size_t n = 0; n < 4; ++n) {
            for (double mu : {-3.0, -0.5, 0.0, 2.0, 10.0}) {
                CHECK(nu_kernel(n, mu, c2) ==
                      doctest::Approx(nu_quadrature(n, mu, c2)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("AnalyticTerms coefficients") {
    const auto c = SystemConfig::make(5, 10.0, 20.0, 1.0, 1.0);
    const AnalyticTerms t(c);
    CHECK(t.phi0() == doctest::Approx(20.0));
    CHECK(t.phi(1) == doctest::Approx(5.0));
    CHECK(t.phi(2) == doctest::Approx(10.0));
    CHECK(t.phi(3) == doctest::Approx(10.0));
}

TEST_CASE("outage_exact matches the quadrature oracle") {
    for (std::size_t k : {2, 3, 5}) {
        for (const auto& [p0, ps, r0, rs] :
             {std::tuple{20.0, 8.24, 2.5, 1.5}, std::tuple{15.0, 30.0, 3.0, 3.0},
              std::tuple{5.0, 5.0, 0.7, 0.6}, std::tuple{35.0, 10.0, 1.2, 3.5}}) {
            CAPTURE(k);
            CAPTURE(p0);
            const auto c = SystemConfig::from_db(k, p0, ps, r0, rs);
            const auto closed = outage_exact(c);
            const auto oracle = outage_exact_quadrature_oracle(c);
            check_breakdown_close(closed, oracle, 1e-9);
            CHECK(relative_diff(closed.total, oracle.total) <= 1e-6);
            CHECK(closed.total >= 0.0);
            CHECK(closed.total <= 1.0);
            CHECK(closed.p_case2_terms.size() == k);
        }
    }
}

TEST_CASE("outage_exact examples") {
    const auto c = SystemConfig::make(2, 1e3, 1e3, 1.0, 1.0);
    const double total = outage_exact(c).total;
    CHECK(total > 0.5e-6);
    CHECK(total < 2e-6);

    // eps0 * eps_s > 1 still yields a valid probability.
    const auto high = SystemConfig::from_db(5, 15.0, 20.0, 3.0, 3.0);
    const auto breakdown = outage_exact(high);
    CHECK(breakdown.total > 0.0);
    CHECK(breakdown.total < 1.0);
    CHECK(breakdown.total ==
          doctest::Approx(breakdown.p_case1 + breakdown.p_case2() + breakdown.p_case3));

    CHECK_THROWS_AS(outage_exact(SystemConfig::make(1, 10.0, 10.0, 1.0, 1.0)), DispatchError);
    CHECK_THROWS_AS(outage_exact_quadrature_oracle(SystemConfig::make(1, 10.0, 10.0, 1.0, 1.0)),
                    DispatchError);
}

TEST_CASE("outage_exact limits") {
    // Vanishing GFU power: always in outage.
    const auto weak = SystemConfig::make(2, 10.0, 1e-6, 1.0, 1.0);
    CHECK(outage_exact(weak).total == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(outage_exact_quadrature_oracle(weak).total == doctest::Approx(1.0).epsilon(1e-4));
    // Vanishing GFU target: almost never in outage.
    const auto easy = SystemConfig::make(3, 10.0, 10.0, 1.0, 1e-6);
    CHECK(outage_exact(easy).total < 1e-5);
}

TEST_CASE("outage_exact decreases with GFU power") {
    double previous = 1.0;
    for (double ps_db = 0.0; ps_db <= 50.0; ps_db += 5.0) {
        const double p = outage_exact(SystemConfig::from_db(4, 20.0, ps_db, 2.0, 1.5)).total;
        CHECK(p <= previous);
        previous = p;
    }
}

TEST_CASE("closed form stays accurate at high SNR and large K") {
    for (std::size_t k : {2, 3, 4, 5, 6, 8, 12, 20}) {
        for (double db : {30.0, 45.0}) {
            const auto c = SystemConfig::from_db(k, db, db, 2.0, 1.5);
            const auto b = outage_exact(c);
            CAPTURE(k);
            CAPTURE(db);
            CHECK(b.total > 0.0);
            CHECK(relative_diff(b.total, outage_highsnr(c)) <= 0.1);
            CHECK_FALSE(b.conditioning_warning);
            CHECK(b.relative_error_estimate <= 1e-10);
        }
    }
}

TEST_CASE("high-SNR approximation") {
    const auto k2 = SystemConfig::from_db(2, 40.0, 40.0, 2.0, 1.5);
    CHECK(outage_highsnr_terms(k2).case2_middle == 0.0);
    const auto terms = outage_highsnr_terms(SystemConfig::from_db(4, 40.0, 40.0, 2.0, 1.5));
    CHECK(terms.total == doctest::Approx(terms.case2_first + terms.case2_middle +
                                         terms.case2_last + terms.case1 + terms.case3));
    for (std::size_t k : {2, 3}) {
        const auto c = SystemConfig::from_db(k, 55.0, 55.0, 2.0, 1.5);
        CHECK(relative_diff(outage_highsnr(c), outage_diversity_asymptote(c)) <= 0.01);
    }
}

TEST_CASE("diversity asymptote") {
    CHECK(relative_diff(outage_diversity_asymptote(SystemConfig::make(2, 1.0, 100.0, 1.0, 1.0)),
                        1e-4) <= 1e-12);
    CHECK(relative_diff(outage_diversity_asymptote(SystemConfig::make(3, 1.0, 1e3, 1.0, 2.0)),
                        2.7e-8) <= 1e-12);
    const double a = outage_diversity_asymptote(SystemConfig::make(3, 1.0, 1e3, 1.0, 2.0));
    const double b = outage_diversity_asymptote(SystemConfig::make(3, 1.0, 1e4, 1.0, 2.0));
    CHECK(std::log10(b / a) == doctest::Approx(-3.0));
}

TEST_CASE("single-user outage") {
    const auto c = SystemConfig::make(1, 10.0, 10.0, 1.0, 1.0);
    const auto s = outage_single_user(c);
    CHECK(s.exact == doctest::Approx(0.10309).epsilon(1e-4));
    CHECK(s.approx == doctest::Approx(0.1));
    CHECK(outage(c) == s.exact);

    const auto high = SystemConfig::make(1, 10.0, 1e4, 1.0, 1.0);
    const auto h = outage_single_user(high);
    CHECK(relative_diff(h.approx, 1e-4) <= 1e-12);
    CHECK(h.exact / h.approx >= 0.8);
    CHECK(h.exact / h.approx <= 1.2);

    CHECK(outage_single_user(SystemConfig::make(1, 10.0, 1e12, 1.0, 1.0)).exact < 1e-11);
    CHECK_THROWS_AS(outage_single_user(SystemConfig::make(2, 10.0, 10.0, 1.0, 1.0)), DispatchError);
}

TEST_CASE("single-user outage matches Monte Carlo") {
    const auto c = SystemConfig::make(1, 10.0, 10.0, 1.0, 1.0);
    const auto mc = estimate_outage(c, Scheme::CrRsmaSgf, 2'000'000, 99, 1);
    CHECK(std::abs(mc.gfu_outage_prob - outage_single_user(c).exact) <= 3.0 * mc.std_err_gfu);
}
