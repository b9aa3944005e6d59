#include "crsma/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "crsma/errors.hpp"

namespace crsma {

namespace {

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

constexpr double kRateTolerance = 1e-12;

}  // namespace

std::string_view to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::CaseI:
            return "CaseI";
        case CaseLabel::CaseII:
            return "CaseII";
        case CaseLabel::CaseIII:
            return "CaseIII";
    }
    return "unknown";
}

InterferenceThreshold interference_threshold(const SystemConfig& config, double gain_gbu) {
    const double tau_hat = config.power_gbu() * gain_gbu / config.eps0() - 1.0;
    return {tau_hat, std::max(0.0, tau_hat)};
}

CaseLabel classify_case(const SystemConfig& config, const ChannelRealization& realization) {
    const auto [tau_hat, tau] = interference_threshold(config, realization.gain_gbu);
    if (tau <= 0.0) {
        return CaseLabel::CaseIII;
    }
    if (config.power_gfu() * realization.best_gain() <= tau) {
        return CaseLabel::CaseI;
    }
    return CaseLabel::CaseII;
}

Allocation allocate(const SystemConfig& config, const ChannelRealization& realization,
                    CaseLabel label) {
    if (classify_case(config, realization) != label) {
        throw ConsistencyError("case label " + std::string(to_string(label)) +
                               " does not match the channel realization");
    }
    switch (label) {
        case CaseLabel::CaseI:
            return {0.0, 0.0};
        case CaseLabel::CaseIII:
            return {1.0, 1.0};
        case CaseLabel::CaseII:
            break;
    }
    const double tau_hat = interference_threshold(config, realization.gain_gbu).tau_hat;
    const double received = config.power_gfu() * realization.best_gain();
    const double alpha = std::clamp(1.0 - tau_hat / received, 0.0, 1.0);
    const double beta = std::clamp(1.0 - log2_1p(tau_hat) / config.target_rate_gfu(), 0.0, 1.0);
    return {alpha, beta};
}

TransmissionOutcome evaluate_transmission(const SystemConfig& config,
                                          const ChannelRealization& realization) {
    TransmissionOutcome out;
    const auto threshold = interference_threshold(config, realization.gain_gbu);
    out.tau = threshold.tau;
    out.tau_hat = threshold.tau_hat;
    out.case_label = classify_case(config, realization);
    const auto allocation = allocate(config, realization, out.case_label);
    out.alpha = allocation.alpha;
    out.beta = allocation.beta;

    const double gbu_rx = config.power_gbu() * realization.gain_gbu;
    const double gfu_rx = config.power_gfu() * realization.best_gain();
    const double target = config.target_rate_gfu();

    switch (out.case_label) {
        case CaseLabel::CaseI:
            // x_0 -> x_K: the GFU is decoded interference-free last.
            out.rate_gfu_s1 = 0.0;
            out.rate_gfu_s2 = log2_1p(gfu_rx);
            out.rate_gbu = log2_1p(gbu_rx / (gfu_rx + 1.0));
            break;
        case CaseLabel::CaseII: {
            const double tau_hat = threshold.tau_hat;
            out.rate_gfu_s2 = log2_1p(tau_hat);
            out.rate_gfu_s1 = log2_1p((gfu_rx - tau_hat) / (gbu_rx + tau_hat + 1.0));
            out.rate_gbu = log2_1p(gbu_rx / (tau_hat + 1.0));
            break;
        }
        case CaseLabel::CaseIII:
            // x_K -> x_0: the GFU sees the GBU as interference.
            out.rate_gfu_s1 = log2_1p(gfu_rx / (gbu_rx + 1.0));
            out.rate_gfu_s2 = 0.0;
            out.rate_gbu = log2_1p(gbu_rx);
            break;
    }
    out.rate_gfu_total = out.rate_gfu_s1 + out.rate_gfu_s2;
    // In Case II the GBU rate equals its target exactly, so rounding alone
    // must not count as an outage.
    const double gbu_target = config.target_rate_gbu();
    out.gbu_outage = out.rate_gbu < gbu_target - kRateTolerance * std::max(1.0, gbu_target);
    out.gfu_outage = out.rate_gfu_total < target;
    // Comparing the total against the full target is the same test as
    // R_{K,1} < beta* Rs with the unclamped beta*, and is immune to the clamp.
    out.gfu_silent = out.case_label == CaseLabel::CaseII && out.gfu_outage;
    return out;
}

bool gbu_oma_outage(const SystemConfig& config, double gain_gbu) {
    return config.power_gbu() * gain_gbu < config.eps0();
}

}  // namespace crsma
