#include "crsma/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/expm1.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "crsma/errors.hpp"

namespace crsma {

namespace {

namespace mp = boost::multiprecision;

using Real = long double;
using Real50 = mp::cpp_bin_float_50;
using Real100 = mp::cpp_bin_float_100;
using Real200 = mp::number<mp::cpp_bin_float<200>>;

constexpr double kExcursionBound = 1e-9;
constexpr double kConditioningThreshold = 1e-10;

template <typename T>
T ln2() {
    return boost::math::constants::ln_two<T>();
}

template <typename T>
T binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return T(0);
    }
    k = std::min(k, n - k);
    T result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        result = result * T(n - k + i) / T(i);
    }
    using std::round;
    return round(result);
}

template <typename T>
T alternating_sign(std::size_t i) {
    return (i % 2 == 0) ? T(1) : T(-1);
}

/// Neumaier summation that also tracks the sum of magnitudes for an error estimate.
template <typename T>
class CompensatedSum {
public:
    void add(const T& term) {
        using std::fabs;
        const T t = sum_ + term;
        if (fabs(sum_) >= fabs(term)) {
            correction_ += (sum_ - t) + term;
        } else {
            correction_ += (term - t) + sum_;
        }
        sum_ = t;
        magnitude_ += fabs(term);
    }

    T value() const { return sum_ + correction_; }
    T magnitude() const { return magnitude_; }

private:
    T sum_ = 0;
    T correction_ = 0;
    T magnitude_ = 0;
};

/// System constants in the working precision.
template <typename T>
struct Constants {
    explicit Constants(const SystemConfig& config)
        : num_gfus(config.num_gfus()),
          p0(config.power_gbu()),
          ps(config.power_gfu()),
          eps0(boost::math::expm1(T(config.target_rate_gbu()) * ln2<T>())),
          eps_s(boost::math::expm1(T(config.target_rate_gfu()) * ln2<T>())),
          eta0(eps0 / p0),
          eta_s(eps_s / ps),
          lower(eta0),
          upper(eta0 * (1 + eps_s)),
          width(eta0 * eps_s) {}

    std::size_t num_gfus;
    T p0;
    T ps;
    T eps0;
    T eps_s;
    T eta0;
    T eta_s;
    T lower;
    T upper;
    T width;

    /// eps0 + eps_s + eps0 eps_s = (1 + eps0)(1 + eps_s) - 1.
    T joint_eps() const { return eps0 + eps_s + eps0 * eps_s; }
};

/// exp(log_scale) * nu(n, mu), i.e. the integral of
/// exp(log_scale - (n/(Ps eta0) + mu + 1) x) over [eta0, eta0 (1 + eps_s)].
/// The exponential is anchored at whichever end point carries the larger
/// exponent, so the result stays finite whenever the integral is.
template <typename T>
T scaled_nu(const Constants<T>& c, std::size_t n, const T& mu, const T& log_scale) {
    using std::exp;
    using std::fabs;
    const T rate = T(n) / (c.ps * c.eta0) + mu + 1;
    if (fabs(rate) < T(1e-10) * (1 + fabs(mu))) {
        return exp(log_scale) * c.width;
    }
    if (rate > 0) {
        return exp(log_scale - rate * c.lower) * -boost::math::expm1(T(-rate * c.width)) / rate;
    }
    return exp(log_scale - rate * c.upper) * -boost::math::expm1(T(rate * c.width)) / -rate;
}

template <typename T>
double checked_probability(const T& value, const char* what) {
    const auto v = static_cast<long double>(value);
    if (!std::isfinite(v)) {
        throw NumericalRangeError(std::string("non-finite value in ") + what);
    }
    if (v < -kExcursionBound || v > 1.0L + kExcursionBound) {
        throw NumericalRangeError(std::string(what) + " left [0, 1] by more than 1e-9: " +
                                  std::to_string(static_cast<double>(v)));
    }
    return std::clamp(static_cast<double>(v), 0.0, 1.0);
}

void require_multi_user(const SystemConfig& config, const char* what) {
    if (config.num_gfus() < 2) {
        throw DispatchError(std::string(what) +
                            " requires K >= 2; use outage_single_user for K = 1");
    }
}

template <typename T>
T power(const T& base, std::size_t exponent) {
    T result = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        result *= base;
    }
    return result;
}

/// Closed-form terms in precision T, before clipping.
template <typename T>
struct ExactTerms {
    T p_case1 = 0;
    std::vector<T> p_case2;
    T p_case3 = 0;
    T total = 0;
    /// Estimated relative rounding error of `total`.
    double relative_error = 0.0;
};

template <typename T>
ExactTerms<T> evaluate_exact(const SystemConfig& config) {
    using std::exp;
    const Constants<T> c(config);
    const std::size_t K = c.num_gfus;
    const T Kr = T(K);
    const T ps = c.ps;
    const T p0 = c.p0;
    const T ps_eta0 = ps * c.eta0;
    const T joint_plus_one = (1 + c.eps0) * (1 + c.eps_s);

    T magnitude = 0;
    auto finish = [&magnitude](const CompensatedSum<T>& sum) {
        magnitude += sum.magnitude();
        return sum.value();
    };

    ExactTerms<T> out;
    out.p_case2.assign(K, T(0));

    // No GFU below tau; the prefactor phi0 / (K (K-1)) is 1.
    CompensatedSum<T> first;
    for (std::size_t n = 0; n <= K; ++n) {
        const T dn = T(n);
        const T log_mu1 = (Kr - dn * joint_plus_one) / ps;
        const T mu2 = (Kr - dn) / ps_eta0 - dn * p0 / ps;
        first.add(binomial<T>(K, n) * alternating_sign<T>(n) * scaled_nu(c, 0, mu2, log_mu1));
    }
    out.p_case2[0] = finish(first);

    for (std::size_t k = 1; k + 2 <= K; ++k) {
        CompensatedSum<T> middle;
        const std::size_t above = K - k;
        for (std::size_t m = 0; m <= above; ++m) {
            const T dm = T(m);
            const T log_mu3 = (T(above) - dm * joint_plus_one) / ps;
            const T mu4 = T(above - m) / ps_eta0 - dm * p0 / ps;
            const T outer = binomial<T>(above, m) * alternating_sign<T>(m);
            for (std::size_t n = 0; n <= k; ++n) {
                const T dn = T(n);
                middle.add(outer * binomial<T>(k, n) * alternating_sign<T>(n) *
                           scaled_nu(c, n, mu4, T(dn / ps + log_mu3)));
            }
        }
        out.p_case2[k] = binomial<T>(K, k) * finish(middle);
    }

    {
        // K-1 GFUs below tau; phi0 / (K-1) = K.
        CompensatedSum<T> last;
        const T mu5 = 1 / ps_eta0;
        const T mu6 = -p0 / ps;
        for (std::size_t n = 0; n + 1 <= K; ++n) {
            const T dn = T(n);
            const T weight = binomial<T>(K - 1, n) * alternating_sign<T>(n);
            last.add(weight * scaled_nu(c, n, mu5, T((dn + 1) / ps)));
            last.add(-weight * scaled_nu(c, n, mu6, T((dn - c.joint_eps()) / ps)));
        }
        out.p_case2[K - 1] = Kr * finish(last);
    }

    CompensatedSum<T> case1;
    for (std::size_t n = 0; n <= K; ++n) {
        const T dn = T(n);
        case1.add(binomial<T>(K, n) * alternating_sign<T>(n) * scaled_nu(c, n, T(0), T(dn / ps)));
    }
    case1.add(power(T(-boost::math::expm1(T(-c.eta_s))), K) * exp(-c.upper));

    CompensatedSum<T> case3;
    for (std::size_t n = 0; n <= K; ++n) {
        const T dn = T(n);
        const T rate = 1 + dn * c.eta_s * p0;
        case3.add(binomial<T>(K, n) * alternating_sign<T>(n) * exp(-dn * c.eta_s) *
                  -boost::math::expm1(T(-rate * c.eta0)) / rate);
    }

    out.p_case1 = finish(case1);
    out.p_case3 = finish(case3);
    CompensatedSum<T> total;
    total.add(out.p_case1);
    for (const T& term : out.p_case2) {
        total.add(term);
    }
    total.add(out.p_case3);
    out.total = total.value();

    // Each term carries a handful of roundings in exp/expm1/division.
    using std::fabs;
    const T abs_error = 16 * std::numeric_limits<T>::epsilon() * magnitude;
    const T denom = std::max(T(fabs(out.total)), T(std::numeric_limits<double>::min()));
    out.relative_error = static_cast<double>(abs_error / denom);
    return out;
}

template <typename T>
OutageBreakdown to_breakdown(const ExactTerms<T>& terms) {
    OutageBreakdown out;
    out.p_case1 = checked_probability(terms.p_case1, "case I outage term");
    out.p_case2_terms.reserve(terms.p_case2.size());
    for (const T& term : terms.p_case2) {
        out.p_case2_terms.push_back(checked_probability(term, "case II outage term"));
    }
    out.p_case3 = checked_probability(terms.p_case3, "case III outage term");
    out.total = checked_probability(terms.total, "total outage");
    out.relative_error_estimate = terms.relative_error;
    out.conditioning_warning = terms.relative_error > kConditioningThreshold;
    return out;
}

}  // namespace

double AnalyticTerms::phi0() const {
    const auto k = static_cast<double>(config_.num_gfus());
    return k * (k - 1.0);
}

double AnalyticTerms::phi(std::size_t k) const {
    return static_cast<double>(binomial<Real>(config_.num_gfus(), k));
}

double AnalyticTerms::mu1(std::size_t n) const {
    const double K = static_cast<double>(config_.num_gfus());
    return std::exp((K - static_cast<double>(n) * (1.0 + config_.eps0()) * (1.0 + config_.eps_s())) /
                    config_.power_gfu());
}

double AnalyticTerms::mu2(std::size_t n) const {
    const double K = static_cast<double>(config_.num_gfus());
    const double dn = static_cast<double>(n);
    return (K - dn) / (config_.power_gfu() * config_.eta0()) -
           dn * config_.power_gbu() / config_.power_gfu();
}

double AnalyticTerms::mu3(std::size_t k, std::size_t m) const {
    const double above = static_cast<double>(config_.num_gfus() - k);
    const double dm = static_cast<double>(m);
    return std::exp((above - dm * (1.0 + config_.eps0()) * (1.0 + config_.eps_s())) /
                    config_.power_gfu());
}

double AnalyticTerms::mu4(std::size_t k, std::size_t m) const {
    const double above = static_cast<double>(config_.num_gfus() - k);
    const double dm = static_cast<double>(m);
    return (above - dm) / (config_.power_gfu() * config_.eta0()) -
           dm * config_.power_gbu() / config_.power_gfu();
}

double AnalyticTerms::mu5() const { return 1.0 / (config_.power_gfu() * config_.eta0()); }

double AnalyticTerms::mu6() const { return -config_.power_gbu() / config_.power_gfu(); }

double AnalyticTerms::tilde_mu5(std::size_t k) const {
    const double above = static_cast<double>(config_.num_gfus() - k);
    const double joint = config_.eps0() + config_.eps_s() + config_.eps0() * config_.eps_s();
    return std::exp(-above * joint / config_.power_gfu());
}

double AnalyticTerms::tilde_mu6(std::size_t k) const {
    const double above = static_cast<double>(config_.num_gfus() - k);
    return -above * config_.power_gbu() / config_.power_gfu();
}

double OutageBreakdown::p_case2() const {
    return std::accumulate(p_case2_terms.begin(), p_case2_terms.end(), 0.0);
}

double nu_kernel(std::size_t n, double mu, const SystemConfig& config) {
    return static_cast<double>(scaled_nu(Constants<Real>(config), n, Real(mu), Real(0)));
}

OutageBreakdown outage_exact(const SystemConfig& config) {
    require_multi_user(config, "outage_exact");
    // Cancellation in the alternating sums grows with K and SNR; redo the
    // sums at higher precision until the error estimate is acceptable.
    const auto fast = evaluate_exact<Real>(config);
    if (fast.relative_error <= kConditioningThreshold) {
        return to_breakdown(fast);
    }
    const auto wide = evaluate_exact<Real50>(config);
    if (wide.relative_error <= kConditioningThreshold) {
        return to_breakdown(wide);
    }
    const auto wider = evaluate_exact<Real100>(config);
    if (wider.relative_error <= kConditioningThreshold) {
        return to_breakdown(wider);
    }
    return to_breakdown(evaluate_exact<Real200>(config));
}

HighSnrTerms outage_highsnr_terms(const SystemConfig& config) {
    require_multi_user(config, "outage_highsnr");
    const Constants<Real> c(config);
    const std::size_t K = c.num_gfus;
    const Real Kr = static_cast<Real>(K);
    const Real e0 = c.eps0;
    const Real es = c.eps_s;
    const Real phi0 = Kr * (Kr - 1.0L);
    const Real ps_k = power(c.ps, K);
    const Real ps_k1 = ps_k * c.ps;
    const Real ps_k2 = ps_k1 * c.ps;
    const Real es_k = power(es, K);

    HighSnrTerms t;

    Real first = 0.0L;
    for (std::size_t n = 0; n <= K; ++n) {
        first += binomial<Real>(K, n) * alternating_sign<Real>(n) / static_cast<Real>(n + 1) *
                 (power<Real>(1.0L + es, K + 1) - power<Real>(1.0L + es, K - n));
    }
    t.case2_first = static_cast<double>(phi0 * e0 * power<Real>(1.0L + e0, K) / (ps_k1 * Kr * (Kr - 1.0L)) *
                                        first);

    Real middle = 0.0L;
    for (std::size_t k = 1; k + 2 <= K; ++k) {
        const std::size_t above = K - k;
        Real outer = 0.0L;
        for (std::size_t m = 0; m <= above; ++m) {
            Real inner = 0.0L;
            for (std::size_t n = 0; n <= k; ++n) {
                const std::size_t order = m + n + 1;
                inner += binomial<Real>(k, n) * alternating_sign<Real>(n) *
                         (power<Real>(1.0L + es, order) - 1.0L) / static_cast<Real>(order);
            }
            outer += binomial<Real>(above, m) * alternating_sign<Real>(m) * power<Real>(1.0L + es, above - m) * inner;
        }
        middle += binomial<Real>(K, k) * e0 * power<Real>(1.0L + e0, above) * alternating_sign<Real>(k) / ps_k1 * outer;
    }
    t.case2_middle = static_cast<double>(middle);

    t.case2_last = static_cast<double>(
        phi0 * e0 * es_k * (1.0L + e0) * (1.0L + es) / (ps_k1 * Kr * (Kr - 1.0L)) -
        phi0 * es_k * (1.0L / e0 + 1.0L) * (Kr * (1.0L + es) + 1.0L) /
            (ps_k1 * Kr * (Kr - 1.0L) * (Kr + 1.0L)));

    t.case1 = static_cast<double>(e0 * es_k * es / ((Kr + 1.0L) * ps_k1) + es_k / ps_k -
                                  e0 * es_k * (1.0L + es) / ps_k1);

    t.case3 = static_cast<double>(
        es_k * (power<Real>(1.0L + e0, K + 1) - 1.0L) / (ps_k1 * (Kr + 1.0L)) -
        es_k * ((e0 * (Kr + 1.0L) - 1.0L) * power<Real>(1.0L + e0, K + 1) + 1.0L) /
            (ps_k2 * (Kr + 2.0L) * (Kr + 1.0L)));

    t.total = t.case2_first + t.case2_middle + t.case2_last + t.case1 + t.case3;
    return t;
}

double outage_highsnr(const SystemConfig& config) { return outage_highsnr_terms(config).total; }

double outage_diversity_asymptote(const SystemConfig& config) {
    require_multi_user(config, "outage_diversity_asymptote");
    return std::pow(config.eps_s() / config.power_gfu(), static_cast<double>(config.num_gfus()));
}

SingleUserOutage outage_single_user(const SystemConfig& config) {
    if (config.num_gfus() != 1) {
        throw DispatchError("outage_single_user requires K = 1; use outage_exact for K >= 2");
    }
    const Constants<Real> c(config);
    const Real mu6 = -c.p0 / c.ps;
    CompensatedSum<Real> sum;
    sum.add(1.0L);
    sum.add(-scaled_nu(c, 0, mu6, -c.joint_eps() / c.ps));
    sum.add(-std::exp(-c.eta_s - c.upper));
    sum.add(-std::exp(-c.eta_s) * -std::expm1(-c.eta0 - c.eps0 * c.eta_s) /
            (1.0L + c.p0 * c.eta_s));
    return SingleUserOutage{
        .exact = checked_probability(sum.value(), "single-user outage"),
        .approx = config.eps_s() / config.power_gfu(),
    };
}

double outage(const SystemConfig& config) {
    if (config.num_gfus() == 1) {
        return outage_single_user(config).exact;
    }
    return outage_exact(config).total;
}

}  // namespace crsma
