#include "crsma/baselines.hpp"

#include <cmath>
#include <numbers>

#include "crsma/protocol.hpp"

namespace crsma {

namespace {

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

}  // namespace

NomaRate cr_noma_rate(const SystemConfig& config, const ChannelRealization& realization) {
    const std::size_t K = realization.num_gfus();
    const double gbu_rx = config.power_gbu() * realization.gain_gbu;
    const double ps = config.power_gfu();
    const double best_rx = ps * realization.best_gain();
    const double rate_gfu_first = log2_1p(best_rx / (gbu_rx + 1.0));

    switch (classify_case(config, realization)) {
        case CaseLabel::CaseI:
            return {log2_1p(best_rx), K};
        case CaseLabel::CaseIII:
            return {rate_gfu_first, K};
        case CaseLabel::CaseII:
            break;
    }

    // Largest ordered index whose received power stays under tau (0 if none).
    const double tau = interference_threshold(config, realization.gain_gbu).tau;
    std::size_t below = 0;
    while (below < K && ps * realization.gains_gfu[below] <= tau) {
        ++below;
    }
    if (below == 0) {
        return {rate_gfu_first, K};
    }
    const double rate_weak_last = log2_1p(ps * realization.gains_gfu[below - 1]);
    if (rate_weak_last > rate_gfu_first) {
        return {rate_weak_last, below};
    }
    return {rate_gfu_first, K};
}

bool cr_noma_outage_sample(const SystemConfig& config, const ChannelRealization& realization) {
    return cr_noma_rate(config, realization).rate < config.target_rate_gfu();
}

}  // namespace crsma
