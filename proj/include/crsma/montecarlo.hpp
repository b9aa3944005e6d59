#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crsma/model.hpp"
#include "crsma/protocol.hpp"

namespace crsma {

enum class Scheme {
    CrRsmaSgf,
    CrNomaSgf,
};

std::string_view to_string(Scheme scheme);
/// Accepts "cr-rsma-sgf" / "cr-noma-sgf" (also "rsma" / "noma").
Scheme scheme_from_string(std::string_view name);

struct CaseTallies {
    /// Indexed by CaseLabel: blocks that fell into each case.
    std::array<std::uint64_t, 3> occurrences{};
    /// GFU outages that happened in each case.
    std::array<std::uint64_t, 3> outages{};
};

struct OutageEstimate {
    double gfu_outage_prob = 0.0;
    double gbu_outage_prob = 0.0;
    std::uint64_t trials = 0;
    double std_err_gfu = 0.0;
    double std_err_gbu = 0.0;
    std::uint64_t gfu_outages = 0;
    std::uint64_t gbu_outages = 0;
    CaseTallies case_tallies;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::CrRsmaSgf;

    double case_fraction(CaseLabel label) const;
    /// Joint probability of being in `label` and in GFU outage.
    double case_outage_prob(CaseLabel label) const;
    double case_outage_std_err(CaseLabel label) const;

    /// False when fewer than 10 outages were observed, so the estimate is too
    /// noisy to compare against anything.
    bool resolved() const;
};

bool operator==(const CaseTallies& a, const CaseTallies& b);
bool operator==(const OutageEstimate& a, const OutageEstimate& b);

/// sqrt(p (1 - p) / trials).
double binomial_std_err(double p, std::uint64_t trials);

/// Worker count from the CRSMA_WORKERS environment variable, otherwise the
/// hardware concurrency (at least 1).
unsigned default_worker_count();

/// Monte Carlo outage estimate. Trial i draws its channel from
/// RandomStream(seed, i), and the tallies are integers, so the result is
/// identical for every worker count. `workers == 0` means default_worker_count().
OutageEstimate estimate_outage(const SystemConfig& config, Scheme scheme, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers = 0);

enum class SweepAxis {
    GbuPowerDb,
    GfuPowerDb,
    TargetRate,
    NumGfus,
};

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);

enum class TargetRateMode {
    Both,
    Gbu,
    Gfu,
};

std::string_view to_string(TargetRateMode mode);
TargetRateMode target_rate_mode_from_string(std::string_view name);

struct SweepOptions {
    /// For power axes: when set, the other user's power follows the swept one
    /// with this dB offset (Ps = P0 / 15 is an offset of -11.76 dB).
    std::optional<double> coupled_power_offset_db;
    TargetRateMode target_rate_mode = TargetRateMode::Both;
};

struct AnalyticValues {
    std::optional<double> exact;
    std::optional<double> highsnr;
    std::optional<double> asymptote;
};

struct SweepRow {
    double axis_value = 0.0;
    std::optional<SystemConfig> config;
    /// One estimate per requested scheme, in request order.
    std::vector<OutageEstimate> estimates;
    /// Closed-form values for CR-RSMA; single-user forms when K = 1.
    AnalyticValues analytic;
    /// Non-empty when the grid value was invalid or an evaluation failed.
    std::string error;
};

/// Applies one grid value to `base`; throws InvalidConfiguration on bad values.
SystemConfig apply_axis_value(const SystemConfig& base, SweepAxis axis, double value,
                              const SweepOptions& options);

AnalyticValues analytic_values(const SystemConfig& config);

/// One row per grid value, in grid order. Every row uses the same seed, so
/// neighbouring rows share random numbers. Invalid grid values produce a row
/// with `error` set instead of aborting the sweep.
std::vector<SweepRow> sweep(const SystemConfig& base, SweepAxis axis,
                            const std::vector<double>& grid, const std::vector<Scheme>& schemes,
                            std::uint64_t trials, std::uint64_t seed,
                            const SweepOptions& options = {}, unsigned workers = 0);

}  // namespace crsma
