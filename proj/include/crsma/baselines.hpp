#pragma once

#include <cstddef>

#include "crsma/model.hpp"

namespace crsma {

/// Rate of the GFU admitted by cognitive-radio NOMA (no rate-splitting).
struct NomaRate {
    double rate = 0.0;
    /// 1-based ordered index of the admitted user (K is the strongest).
    std::size_t admitted_index = 0;
};

/// CR-NOMA-SGF achievable rate with the same tau and case boundaries as CR-RSMA.
///
/// Cases I and III coincide with CR-RSMA. In Case II the BS either decodes
/// U_K first (treating the GBU as noise) or admits the strongest user U_k
/// that still fits under tau and decodes it last; the better option wins,
/// with U_K preferred on ties.
NomaRate cr_noma_rate(const SystemConfig& config, const ChannelRealization& realization);

/// True when the CR-NOMA rate misses the GFU target rate.
bool cr_noma_outage_sample(const SystemConfig& config, const ChannelRealization& realization);

}  // namespace crsma
