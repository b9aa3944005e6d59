#include "crsma/zones.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "crsma/errors.hpp"

namespace crsma {

namespace {

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

}  // namespace

std::string_view to_string(ZoneLabel label) {
    switch (label) {
        case ZoneLabel::NomaOrder_x0_first:
            return "NomaOrder_x0_first";
        case ZoneLabel::NomaOrder_xK_first:
            return "NomaOrder_xK_first";
        case ZoneLabel::NomaEither:
            return "NomaEither";
        case ZoneLabel::RsmaOnly:
            return "RsmaOnly";
        case ZoneLabel::Outage:
            return "Outage";
    }
    return "Unknown";
}

RegionCorners region_corners(double p0g0, double psgk) {
    if (!(p0g0 >= 0.0) || !(psgk >= 0.0) || !std::isfinite(p0g0) || !std::isfinite(psgk)) {
        throw DomainError("received powers must be finite and >= 0");
    }
    RegionCorners c;
    c.a0 = log2_1p(p0g0);
    c.ak = log2_1p(psgk);
    c.b0 = log2_1p(p0g0 / (psgk + 1.0));
    c.bk = log2_1p(psgk / (p0g0 + 1.0));
    c.s = log2_1p(p0g0 + psgk);
    return c;
}

ZoneLabel classify_rate_pair(const RegionCorners& c, double target_gbu, double target_gfu) {
    const bool gbu_first = target_gbu <= c.b0 && target_gfu <= c.ak;
    const bool gfu_first = target_gbu <= c.a0 && target_gfu <= c.bk;
    if (gbu_first && gfu_first) {
        return ZoneLabel::NomaEither;
    }
    if (gbu_first) {
        return ZoneLabel::NomaOrder_x0_first;
    }
    if (gfu_first) {
        return ZoneLabel::NomaOrder_xK_first;
    }
    // Rate-splitting reaches the whole dominant face, so the test is the MAC
    // region itself.
    const bool rsma =
        target_gbu <= c.a0 && target_gfu <= c.ak && target_gfu <= c.s - target_gbu;
    return rsma ? ZoneLabel::RsmaOnly : ZoneLabel::Outage;
}

ZoneLabel classify_rate_pair(double p0g0, double psgk, double target_gbu, double target_gfu) {
    return classify_rate_pair(region_corners(p0g0, psgk), target_gbu, target_gfu);
}

ZoneGrid classify_grid(double p0g0, double psgk, std::size_t resolution) {
    if (resolution == 0) {
        throw InvalidArgument("zone grid resolution must be >= 1");
    }
    if (!(p0g0 > 0.0) || !(psgk > 0.0)) {
        throw DomainError("zone grid needs positive received powers");
    }
    ZoneGrid grid;
    grid.corners = region_corners(p0g0, psgk);
    grid.resolution = resolution;
    const double n = static_cast<double>(resolution);
    grid.step_gbu = 1.25 * grid.corners.a0 / n;
    grid.step_gfu = 1.25 * grid.corners.ak / n;
    grid.cells.reserve(resolution * resolution);
    for (std::size_t i = 1; i <= resolution; ++i) {
        const double r0 = static_cast<double>(i) * grid.step_gbu;
        for (std::size_t j = 1; j <= resolution; ++j) {
            const double rs = static_cast<double>(j) * grid.step_gfu;
            grid.cells.push_back({r0, rs, classify_rate_pair(grid.corners, r0, rs)});
        }
    }
    return grid;
}

}  // namespace crsma
