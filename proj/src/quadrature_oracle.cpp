// Reference evaluation of the outage terms by numerical integration over the
// GBU gain. Each conditional probability is written directly from the joint
// CDF of the ordered exponential gains: given g0, the event "exactly k gains
// below a, the remaining K-k in (a, b)" has probability
// C(K,k) F(a)^k (F(b) - F(a))^(K-k) with F(x) = 1 - exp(-x).

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "crsma/analytic.hpp"
#include "crsma/errors.hpp"

namespace crsma {

namespace {

constexpr double kAbsTolerance = 1e-10;
constexpr unsigned kMaxDepth = 15;

/// 1 - exp(-x) for x >= 0, zero otherwise.
double exp_cdf(double x) { return x > 0.0 ? -std::expm1(-x) : 0.0; }

/// exp(-lo) - exp(-hi), zero when the interval is empty.
double exp_mass(double lo, double hi) {
    lo = std::max(lo, 0.0);
    if (hi <= lo) {
        return 0.0;
    }
    return std::exp(-lo) * -std::expm1(-(hi - lo));
}

double binomial(std::size_t n, std::size_t k) {
    double result = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(result);
}

template <typename F>
double integrate(F&& integrand, double lo, double hi, const char* what) {
    if (!(hi > lo)) {
        return 0.0;
    }
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, lo, hi, kMaxDepth, 1e-13, &error, &l1);
    if (!std::isfinite(value) || error > kAbsTolerance) {
        throw QuadratureError(std::string("quadrature did not converge for ") + what +
                                  ", achieved error " + std::to_string(error),
                              error);
    }
    return value;
}

}  // namespace

OutageBreakdown outage_exact_quadrature_oracle(const SystemConfig& config) {
    if (config.num_gfus() < 2) {
        throw DispatchError("quadrature oracle requires K >= 2");
    }
    const std::size_t K = config.num_gfus();
    const double p0 = config.power_gbu();
    const double ps = config.power_gfu();
    const double eps0 = config.eps0();
    const double eps_s = config.eps_s();
    const double eta0 = config.eta0();
    const double eta_s = config.eta_s();
    const double kink = eta0 * (1.0 + eps_s);

    // Normalized threshold tau / Ps and outage bound on |h_K|^2 given g0.
    auto threshold = [=](double g0) { return (p0 * g0 / eps0 - 1.0) / ps; };
    auto outage_bound = [=](double g0) {
        return ((1.0 + eps0) * (1.0 + eps_s) - 1.0 - p0 * g0) / ps;
    };

    OutageBreakdown out;

    // Case I: g0 > eta0, |h_K|^2 <= tau/Ps and |h_K|^2 < eta_s.
    auto case1 = [=](double g0) {
        const double bound = std::min(threshold(g0), eta_s);
        return std::pow(exp_cdf(bound), static_cast<double>(K)) * std::exp(-g0);
    };
    out.p_case1 = integrate(case1, eta0, kink, "case I") +
                  integrate(case1, kink, std::numeric_limits<double>::infinity(), "case I tail");

    // Case II with exactly k gains below tau/Ps. The outage bound exceeds the
    // threshold only for g0 < eta0 (1 + eps_s).
    out.p_case2_terms.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double weight = binomial(K, k);
        auto integrand = [=](double g0) {
            const double a = threshold(g0);
            const double below = k == 0 ? 1.0 : std::pow(exp_cdf(a), static_cast<double>(k));
            const double between = std::pow(exp_mass(a, outage_bound(g0)), static_cast<double>(K - k));
            return weight * below * between * std::exp(-g0);
        };
        out.p_case2_terms[k] = integrate(integrand, eta0, kink, "case II");
    }

    // Case III: g0 < eta0 and |h_K|^2 < eps_s (P0 g0 + 1) / Ps.
    auto case3 = [=](double g0) {
        return std::pow(exp_cdf(eta_s * (p0 * g0 + 1.0)), static_cast<double>(K)) * std::exp(-g0);
    };
    out.p_case3 = integrate(case3, 0.0, eta0, "case III");

    out.total = out.p_case1 + out.p_case2() + out.p_case3;
    return out;
}

}  // namespace crsma
