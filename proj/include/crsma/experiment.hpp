#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crsma/model.hpp"
#include "crsma/montecarlo.hpp"
#include "crsma/zones.hpp"

namespace crsma {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr std::uint64_t kDefaultTrials = 1'000'000;

enum class OutputFormat {
    Csv,
    Json,
};

OutputFormat output_format_from_string(std::string_view name);

/// One line of the metadata block written ahead of the results.
struct MetadataEntry {
    std::string key;
    std::string value;
    /// "published" for parameters given with the scheme, "choice" for values picked here,
    /// "config" for values read from a user config file.
    std::string source;
};

struct SeriesSpec {
    std::string label;
    SystemConfig base;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::GbuPowerDb;
    std::vector<double> grid;
    SweepOptions options;
    std::vector<SeriesSpec> series;
    std::vector<Scheme> schemes{Scheme::CrRsmaSgf, Scheme::CrNomaSgf};
};

struct ZoneSpec {
    double p0g0_db = 8.0;
    double psgk_db = 15.0;
    std::size_t resolution = 200;
};

struct ExperimentSpec {
    std::string name;
    std::variant<SweepSpec, ZoneSpec> body;
    std::uint64_t trials = kDefaultTrials;
    std::uint64_t seed = kDefaultSeed;
    std::vector<MetadataEntry> metadata;

    bool is_zone() const { return std::holds_alternative<ZoneSpec>(body); }

    /// Throws UsageError on an empty grid, no series, no schemes or zero trials.
    void validate() const;
};

std::vector<std::string> preset_names();

/// Throws UsageError for unknown names.
ExperimentSpec make_preset(std::string_view name);

/// Parses an INI-style experiment description:
///
///   [run]     name, trials, seed
///   [system]  num_gfus (comma list gives one series each), gbu_power_db,
///             gfu_power_db, target_rate_gbu, target_rate_gfu
///   [sweep]   axis, values (comma list) or start/stop/step,
///             coupled_power_offset_db, target_rate_mode, schemes
///   [zone]    p0g0_db, psgk_db, grid
///
/// A [zone] section selects a zone run; otherwise [sweep] is required.
/// Throws UsageError on any parse or validation failure.
ExperimentSpec parse_config(std::istream& in, std::string_view origin = "<config>");
ExperimentSpec load_config(const std::string& path);

/// Inclusive arithmetic grid; the end point is kept when it is within
/// 1e-9 * step of a grid value.
std::vector<double> linear_grid(double start, double stop, double step);

struct SeriesResult {
    std::string label;
    std::vector<SweepRow> rows;
};

struct ExperimentResult {
    std::variant<std::vector<SeriesResult>, ZoneGrid> body;
};

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers = 0);

struct RenderOptions {
    OutputFormat format = OutputFormat::Csv;
    bool timestamp = true;
};

std::vector<std::string> sweep_csv_columns();
std::vector<std::string> zone_csv_columns();

/// Serialises the result. Apart from the optional timestamp line the output
/// depends only on the spec and seed.
std::string render(const ExperimentSpec& spec, const ExperimentResult& result,
                   const RenderOptions& options);

/// Shortest round-trip-safe decimal form used in every output file.
std::string format_number(double value);

}  // namespace crsma
