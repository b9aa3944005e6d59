#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace crsma {

enum class ZoneLabel {
    NomaOrder_x0_first,  ///< only the order that decodes the GBU first supports the pair
    NomaOrder_xK_first,  ///< only the order that decodes the GFU first supports the pair
    NomaEither,
    RsmaOnly,            ///< inside the two-user MAC region but outside both NOMA rectangles
    Outage,
};

std::string_view to_string(ZoneLabel label);

/// Characteristic rates of the two-user MAC region for fixed received powers.
struct RegionCorners {
    double a0 = 0.0;  ///< log2(1 + P0 g0)
    double ak = 0.0;  ///< log2(1 + Ps gK)
    double b0 = 0.0;  ///< log2(1 + P0 g0 / (Ps gK + 1))
    double bk = 0.0;  ///< log2(1 + Ps gK / (P0 g0 + 1))
    double s = 0.0;   ///< log2(1 + P0 g0 + Ps gK)
};

/// Throws DomainError on negative or non-finite powers.
RegionCorners region_corners(double p0g0, double psgk);

/// Boundaries are inclusive.
ZoneLabel classify_rate_pair(const RegionCorners& corners, double target_gbu, double target_gfu);
ZoneLabel classify_rate_pair(double p0g0, double psgk, double target_gbu, double target_gfu);

inline bool is_noma_feasible(ZoneLabel label) {
    return label == ZoneLabel::NomaOrder_x0_first || label == ZoneLabel::NomaOrder_xK_first ||
           label == ZoneLabel::NomaEither;
}

inline bool is_rsma_feasible(ZoneLabel label) { return label != ZoneLabel::Outage; }

struct ZoneCell {
    double target_gbu = 0.0;
    double target_gfu = 0.0;
    ZoneLabel label = ZoneLabel::Outage;
};

/// N x N grid of target pairs i * step for i = 1..N on each axis, with the
/// step chosen so the grid spans 1.25x the single-user rate. Row-major with
/// the GBU target varying slowest.
struct ZoneGrid {
    RegionCorners corners;
    std::size_t resolution = 0;
    double step_gbu = 0.0;
    double step_gfu = 0.0;
    std::vector<ZoneCell> cells;
};

/// Throws InvalidArgument when resolution is 0 and DomainError when a
/// power is not positive.
ZoneGrid classify_grid(double p0g0, double psgk, std::size_t resolution);

}  // namespace crsma
