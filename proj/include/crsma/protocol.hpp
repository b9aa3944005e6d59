#pragma once

#include <string_view>

#include "crsma/model.hpp"

namespace crsma {

/// Operating regime of one block, decided by the broadcast threshold tau.
enum class CaseLabel {
    CaseI,    ///< 0 < Ps|h_K|^2 <= tau: the strongest GFU fits under the threshold.
    CaseII,   ///< tau > 0 and Ps|h_K|^2 > tau: rate-splitting at the admitted GFU.
    CaseIII,  ///< tau = 0: the GBU cannot be decoded, the GFU is decoded first.
};

std::string_view to_string(CaseLabel label);

struct InterferenceThreshold {
    double tau_hat = 0.0;  ///< P0 g0 / eps0 - 1, may be negative
    double tau = 0.0;      ///< max(0, tau_hat)
};

struct Allocation {
    double alpha = 0.0;  ///< transmit power split
    double beta = 0.0;   ///< target rate split
};

struct TransmissionOutcome {
    CaseLabel case_label = CaseLabel::CaseIII;
    double tau = 0.0;
    double tau_hat = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double rate_gbu = 0.0;
    double rate_gfu_total = 0.0;
    double rate_gfu_s1 = 0.0;
    double rate_gfu_s2 = 0.0;
    /// Case II only: the admitted GFU holds back because its first stream
    /// would fail, which would propagate errors through SIC. The rate fields
    /// still report what the split would have achieved.
    bool gfu_silent = false;
    bool gbu_outage = false;
    bool gfu_outage = false;
};

InterferenceThreshold interference_threshold(const SystemConfig& config, double gain_gbu);

CaseLabel classify_case(const SystemConfig& config, const ChannelRealization& realization);

/// Optimal (alpha*, beta*) for the admitted user U_K. Throws ConsistencyError
/// when `label` is not the case of `realization`.
Allocation allocate(const SystemConfig& config, const ChannelRealization& realization,
                    CaseLabel label);

TransmissionOutcome evaluate_transmission(const SystemConfig& config,
                                          const ChannelRealization& realization);

/// GBU outage under orthogonal access: log2(1 + P0 g0) < R0.
bool gbu_oma_outage(const SystemConfig& config, double gain_gbu);

}  // namespace crsma
