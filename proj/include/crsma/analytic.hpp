#pragma once

#include <cstddef>
#include <vector>

#include "crsma/model.hpp"

namespace crsma {

/// Coefficients of the closed-form outage expression.
///
/// Index conventions: n runs over the binomial expansion of the outer order
/// statistic, k is the number of GFUs below the threshold tau, m runs over the
/// expansion of the users between tau and the outage bound.
class AnalyticTerms {
public:
    explicit AnalyticTerms(const SystemConfig& config) : config_(config) {}

    /// K! / (K-2)! = K (K-1).
    double phi0() const;
    /// K! / (k! (K-k)!), 1 <= k <= K-2.
    double phi(std::size_t k) const;

    double mu1(std::size_t n) const;
    double mu2(std::size_t n) const;
    double mu3(std::size_t k, std::size_t m) const;
    double mu4(std::size_t k, std::size_t m) const;
    double mu5() const;
    double mu6() const;
    double tilde_mu5(std::size_t k) const;
    double tilde_mu6(std::size_t k) const;

private:
    SystemConfig config_;
};

/// Outage probability of the admitted GFU split by operating case.
struct OutageBreakdown {
    double p_case1 = 0.0;
    /// Entry k is the probability that exactly k GFUs sit below tau and U_K is in outage.
    std::vector<double> p_case2_terms;
    double p_case3 = 0.0;
    double total = 0.0;

    /// Estimated relative rounding error of `total` from cancellation in the
    /// alternating sums (zero for the quadrature oracle).
    double relative_error_estimate = 0.0;
    /// Set when relative_error_estimate exceeds 1e-10.
    bool conditioning_warning = false;

    double p_case2() const;
};

/// Integral of exp(-(n/(Ps eta0) + mu + 1) x) over [eta0, eta0 (1 + eps_s)].
double nu_kernel(std::size_t n, double mu, const SystemConfig& config);

/// Closed-form outage probability for K >= 2, one entry per case.
///
/// The alternating binomial sums are evaluated in long double with
/// compensated summation and every exp(c) * nu(n, mu) product is folded into
/// a single exponent, so no intermediate overflows even at small Ps. Terms
/// are clipped to [0, 1] after checking that the excursion is below 1e-9.
/// When the rounding estimate exceeds 1e-10 the sums are redone with 50, 100
/// and then 200 decimal digits. `conditioning_warning` is set only if even the
/// widest pass could not reach that bound.
OutageBreakdown outage_exact(const SystemConfig& config);

/// Same probabilities by adaptive Gauss-Kronrod integration over |h_0|^2 of
/// the order-statistic CDFs, without any binomial-sum algebra.
OutageBreakdown outage_exact_quadrature_oracle(const SystemConfig& config);

/// High-SNR components of the approximation, K >= 2.
struct HighSnrTerms {
    double case2_first = 0.0;  ///< no GFU below tau
    double case2_middle = 0.0; ///< summed over 1 <= k <= K-2
    double case2_last = 0.0;   ///< K-1 GFUs below tau
    double case1 = 0.0;
    double case3 = 0.0;
    double total = 0.0;
};

HighSnrTerms outage_highsnr_terms(const SystemConfig& config);

/// High-SNR approximation (not clipped). K >= 2.
double outage_highsnr(const SystemConfig& config);

/// Leading term eps_s^K / Ps^K; its log-log slope is the diversity order K.
double outage_diversity_asymptote(const SystemConfig& config);

struct SingleUserOutage {
    double exact = 0.0;
    double approx = 0.0;
};

/// Exact and high-SNR outage for a single GFU (K = 1).
SingleUserOutage outage_single_user(const SystemConfig& config);

/// Exact outage probability for any K: single-user form for K = 1, closed form otherwise.
double outage(const SystemConfig& config);

}  // namespace crsma
