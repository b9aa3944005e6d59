#include "crsma/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "crsma/errors.hpp"

namespace crsma {

namespace {

namespace pt = boost::property_tree;

const std::string kPublished = "published";
const std::string kChoice = "choice";
const std::string kConfig = "config";

/// Ps = P0 / 15.
const double kFifteenthDb = -10.0 * std::log10(15.0);

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_number(values[i]);
    }
    return out;
}

std::string grid_description(double start, double stop, double step) {
    return format_number(start) + ":" + format_number(step) + ":" + format_number(stop);
}

std::vector<SeriesSpec> series_over_k(const std::vector<std::size_t>& ks, double p0_db,
                                      double ps_db, double r0, double rs) {
    std::vector<SeriesSpec> series;
    for (std::size_t k : ks) {
        series.push_back({"K=" + std::to_string(k), SystemConfig::from_db(k, p0_db, ps_db, r0, rs)});
    }
    return series;
}

ExperimentSpec preset_fig3() {
    ExperimentSpec spec;
    spec.name = "fig3";
    SweepSpec sweep;
    sweep.axis = SweepAxis::GbuPowerDb;
    sweep.grid = linear_grid(20.0, 50.0, 2.5);
    sweep.options.coupled_power_offset_db = kFifteenthDb;
    sweep.series = series_over_k({1, 5}, 20.0, 20.0 + kFifteenthDb, 2.5, 1.5);
    spec.body = sweep;
    spec.metadata = {
        {"target_rate_gbu", "2.5", kPublished},
        {"target_rate_gfu", "1.5", kPublished},
        {"gfu_power", "P0/15", kPublished},
        {"num_gfus", "1,5", kPublished},
        {"axis", "gbu_power_db", kPublished},
        {"grid", grid_description(20.0, 50.0, 2.5), kChoice},
    };
    return spec;
}

ExperimentSpec preset_fig4() {
    ExperimentSpec spec;
    spec.name = "fig4";
    SweepSpec sweep;
    sweep.axis = SweepAxis::GfuPowerDb;
    sweep.grid = linear_grid(0.0, 45.0, 2.5);
    sweep.series = series_over_k({1, 5}, 15.0, 0.0, 3.0, 3.0);
    spec.body = sweep;
    spec.metadata = {
        {"target_rate_gbu", "3", kPublished},
        {"target_rate_gfu", "3", kPublished},
        {"gbu_power_db", "15", kPublished},
        {"num_gfus", "1,5", kPublished},
        {"axis", "gfu_power_db", kPublished},
        {"grid_range", "0..45", kPublished},
        {"grid_step", "2.5", kChoice},
    };
    return spec;
}

ExperimentSpec preset_fig5() {
    ExperimentSpec spec;
    spec.name = "fig5";
    SweepSpec sweep;
    sweep.axis = SweepAxis::GbuPowerDb;
    sweep.grid = linear_grid(20.0, 50.0, 2.5);
    sweep.options.coupled_power_offset_db = kFifteenthDb;
    sweep.series = series_over_k({1, 2, 4}, 20.0, 20.0 + kFifteenthDb, 2.0, 1.5);
    sweep.schemes = {Scheme::CrRsmaSgf};
    spec.body = sweep;
    spec.metadata = {
        {"target_rate_gbu", "2", kPublished},
        {"target_rate_gfu", "1.5", kPublished},
        {"gfu_power", "P0/15", kPublished},
        {"num_gfus", "1,2,4", kChoice},
        {"axis", "gbu_power_db", kChoice},
        {"grid", grid_description(20.0, 50.0, 2.5), kChoice},
    };
    return spec;
}

ExperimentSpec preset_fig6() {
    ExperimentSpec spec;
    spec.name = "fig6";
    SweepSpec sweep;
    sweep.axis = SweepAxis::TargetRate;
    sweep.grid = linear_grid(0.5, 5.0, 0.25);
    sweep.options.target_rate_mode = TargetRateMode::Both;
    sweep.series = series_over_k({1, 5}, 10.0, 15.0, 0.5, 0.5);
    spec.body = sweep;
    spec.metadata = {
        {"gbu_power_db", "10", kPublished},
        {"gfu_power_db", "15", kPublished},
        {"target_rates", "equal", kPublished},
        {"num_gfus", "1,5", kChoice},
        {"axis", "target_rate", kPublished},
        {"grid", grid_description(0.5, 5.0, 0.25), kChoice},
    };
    return spec;
}

ExperimentSpec preset_fig7() {
    ExperimentSpec spec;
    spec.name = "fig7";
    SweepSpec sweep;
    sweep.axis = SweepAxis::NumGfus;
    sweep.grid = linear_grid(1.0, 10.0, 1.0);
    sweep.series = {
        {"A:P0=20dB,Ps=10dB", SystemConfig::from_db(1, 20.0, 10.0, 1.5, 2.0)},
        {"B:P0=10dB,Ps=20dB", SystemConfig::from_db(1, 10.0, 20.0, 1.5, 2.0)},
    };
    spec.body = sweep;
    spec.metadata = {
        {"target_rate_gbu", "1.5", kPublished},
        {"target_rate_gfu", "2", kPublished},
        {"setting_a", "P0=20dB,Ps=10dB", kPublished},
        {"setting_b", "P0=10dB,Ps=20dB", kChoice},
        {"axis", "num_gfus", kPublished},
        {"grid", "1:1:10", kChoice},
    };
    return spec;
}

ExperimentSpec preset_zone(double p0g0_db, double psgk_db, std::string name) {
    ExperimentSpec spec;
    spec.name = std::move(name);
    spec.body = ZoneSpec{p0g0_db, psgk_db, 200};
    spec.metadata = {
        {"p0g0_db", format_number(p0g0_db), kPublished},
        {"psgk_db", format_number(psgk_db), kPublished},
        {"grid", "200", kChoice},
    };
    return spec;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) {
            items.push_back(item.substr(first, last - first + 1));
        }
    }
    return items;
}

template <typename T>
T parse_value(const std::string& text, const std::string& key) {
    T value{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw UsageError("invalid value '" + text + "' for " + key);
    }
    return value;
}

template <typename T>
T required(const pt::ptree& tree, const std::string& key) {
    const auto text = tree.get_optional<std::string>(key);
    if (!text) {
        throw UsageError("missing required key " + key);
    }
    return parse_value<T>(*text, key);
}

template <typename T>
std::optional<T> optional_value(const pt::ptree& tree, const std::string& key) {
    const auto text = tree.get_optional<std::string>(key);
    if (!text) {
        return std::nullopt;
    }
    return parse_value<T>(*text, key);
}

ExperimentSpec spec_from_tree(const pt::ptree& tree) {
    ExperimentSpec spec;
    spec.name = tree.get<std::string>("run.name", "custom");
    if (auto trials = optional_value<std::uint64_t>(tree, "run.trials")) {
        spec.trials = *trials;
    }
    if (auto seed = optional_value<std::uint64_t>(tree, "run.seed")) {
        spec.seed = *seed;
    }

    if (tree.get_child_optional("zone")) {
        ZoneSpec zone;
        zone.p0g0_db = required<double>(tree, "zone.p0g0_db");
        zone.psgk_db = required<double>(tree, "zone.psgk_db");
        zone.resolution = optional_value<std::size_t>(tree, "zone.grid").value_or(200);
        spec.body = zone;
        spec.metadata = {
            {"p0g0_db", format_number(zone.p0g0_db), kConfig},
            {"psgk_db", format_number(zone.psgk_db), kConfig},
            {"grid", std::to_string(zone.resolution), kConfig},
        };
        return spec;
    }

    if (!tree.get_child_optional("sweep")) {
        throw UsageError("config needs a [sweep] or [zone] section");
    }
    SweepSpec sweep;
    const auto axis_name = tree.get_optional<std::string>("sweep.axis");
    if (!axis_name) {
        throw UsageError("missing required key sweep.axis");
    }
    try {
        sweep.axis = sweep_axis_from_string(*axis_name);
        if (auto mode = tree.get_optional<std::string>("sweep.target_rate_mode")) {
            sweep.options.target_rate_mode = target_rate_mode_from_string(*mode);
        }
        if (auto schemes = tree.get_optional<std::string>("sweep.schemes")) {
            sweep.schemes.clear();
            for (const auto& name : split_list(*schemes)) {
                sweep.schemes.push_back(scheme_from_string(name));
            }
        }
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    sweep.options.coupled_power_offset_db =
        optional_value<double>(tree, "sweep.coupled_power_offset_db");

    if (auto values = tree.get_optional<std::string>("sweep.values")) {
        for (const auto& item : split_list(*values)) {
            sweep.grid.push_back(parse_value<double>(item, "sweep.values"));
        }
    } else {
        const double start = required<double>(tree, "sweep.start");
        const double stop = required<double>(tree, "sweep.stop");
        const double step = required<double>(tree, "sweep.step");
        if (!(step > 0.0) || stop < start) {
            throw UsageError("sweep range needs step > 0 and stop >= start");
        }
        sweep.grid = linear_grid(start, stop, step);
    }

    const double p0_db = required<double>(tree, "system.gbu_power_db");
    const double ps_db = required<double>(tree, "system.gfu_power_db");
    const double r0 = required<double>(tree, "system.target_rate_gbu");
    const double rs = required<double>(tree, "system.target_rate_gfu");
    const auto k_text = tree.get<std::string>("system.num_gfus", "1");
    try {
        for (const auto& item : split_list(k_text)) {
            const auto k = parse_value<std::size_t>(item, "system.num_gfus");
            sweep.series.push_back(
                {"K=" + std::to_string(k), SystemConfig::from_db(k, p0_db, ps_db, r0, rs)});
        }
    } catch (const InvalidConfiguration& e) {
        throw UsageError(e.what());
    }
    spec.metadata = {
        {"num_gfus", k_text, kConfig},
        {"gbu_power_db", format_number(p0_db), kConfig},
        {"gfu_power_db", format_number(ps_db), kConfig},
        {"target_rate_gbu", format_number(r0), kConfig},
        {"target_rate_gfu", format_number(rs), kConfig},
        {"axis", std::string(to_string(sweep.axis)), kConfig},
        {"grid", join_numbers(sweep.grid), kConfig},
    };
    spec.body = std::move(sweep);
    return spec;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    return quoted + "\"";
}

std::string optional_number(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

/// One output record per (series, grid value, scheme).
struct SweepRecord {
    std::vector<std::string> fields;
};

std::vector<SweepRecord> sweep_records(const ExperimentSpec& spec,
                                       const std::vector<SeriesResult>& results) {
    const auto& sweep = std::get<SweepSpec>(spec.body);
    std::vector<SweepRecord> records;
    for (const auto& series : results) {
        for (const auto& row : series.rows) {
            for (std::size_t s = 0; s < sweep.schemes.size(); ++s) {
                const Scheme scheme = sweep.schemes[s];
                std::vector<std::string> f(sweep_csv_columns().size());
                f[0] = format_number(row.axis_value);
                f[1] = std::string(to_string(scheme));
                f[8] = std::to_string(spec.trials);
                f[9] = std::to_string(spec.seed);
                f[13] = series.label;
                if (row.error.empty() && s < row.estimates.size()) {
                    const auto& est = row.estimates[s];
                    f[2] = format_number(est.gfu_outage_prob);
                    f[3] = format_number(est.std_err_gfu);
                    f[4] = format_number(est.gbu_outage_prob);
                    if (scheme == Scheme::CrRsmaSgf) {
                        f[5] = optional_number(row.analytic.exact);
                        f[6] = optional_number(row.analytic.highsnr);
                        f[7] = optional_number(row.analytic.asymptote);
                    }
                    f[10] = format_number(est.case_fraction(CaseLabel::CaseI));
                    f[11] = format_number(est.case_fraction(CaseLabel::CaseII));
                    f[12] = format_number(est.case_fraction(CaseLabel::CaseIII));
                    f[14] = est.resolved() ? "0" : "1";
                } else {
                    f[15] = row.error;
                }
                records.push_back({std::move(f)});
            }
        }
    }
    return records;
}

std::string render_csv(const ExperimentSpec& spec, const ExperimentResult& result,
                       const RenderOptions& options) {
    std::ostringstream out;
    if (options.timestamp) {
        out << "# generated=" << utc_timestamp() << '\n';
    }
    out << "# experiment=" << spec.name << '\n';
    for (const auto& entry : spec.metadata) {
        out << "# " << entry.key << '=' << entry.value << " source=" << entry.source << '\n';
    }
    if (!spec.is_zone()) {
        out << "# trials=" << spec.trials << " source=choice\n";
        out << "# seed=" << spec.seed << " source=choice\n";
    }

    auto write_row = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            out << csv_field(fields[i]);
        }
        out << '\n';
    };

    if (const auto* grid = std::get_if<ZoneGrid>(&result.body)) {
        write_row(zone_csv_columns());
        for (const auto& cell : grid->cells) {
            write_row({format_number(cell.target_gbu), format_number(cell.target_gfu),
                       std::string(to_string(cell.label))});
        }
    } else {
        write_row(sweep_csv_columns());
        for (const auto& record :
             sweep_records(spec, std::get<std::vector<SeriesResult>>(result.body))) {
            write_row(record.fields);
        }
    }
    return out.str();
}

std::string render_json(const ExperimentSpec& spec, const ExperimentResult& result,
                        const RenderOptions& options) {
    using nlohmann::ordered_json;
    ordered_json doc;
    if (options.timestamp) {
        doc["generated"] = utc_timestamp();
    }
    doc["experiment"] = spec.name;
    ordered_json metadata = ordered_json::array();
    for (const auto& entry : spec.metadata) {
        metadata.push_back({{"key", entry.key}, {"value", entry.value}, {"source", entry.source}});
    }
    doc["metadata"] = metadata;

    ordered_json rows = ordered_json::array();
    if (const auto* grid = std::get_if<ZoneGrid>(&result.body)) {
        doc["columns"] = zone_csv_columns();
        for (const auto& cell : grid->cells) {
            rows.push_back({{"target_gbu", cell.target_gbu},
                            {"target_gfu", cell.target_gfu},
                            {"zone_label", std::string(to_string(cell.label))}});
        }
    } else {
        doc["trials"] = spec.trials;
        doc["seed"] = spec.seed;
        const auto columns = sweep_csv_columns();
        doc["columns"] = columns;
        for (const auto& record :
             sweep_records(spec, std::get<std::vector<SeriesResult>>(result.body))) {
            ordered_json row;
            for (std::size_t i = 0; i < columns.size(); ++i) {
                const auto& text = record.fields[i];
                const bool textual = i == 1 || i == 13 || i == 15;
                if (textual) {
                    row[columns[i]] = text;
                } else if (text.empty()) {
                    row[columns[i]] = nullptr;
                } else {
                    row[columns[i]] = std::stod(text);
                }
            }
            rows.push_back(std::move(row));
        }
    }
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

}  // namespace

OutputFormat output_format_from_string(std::string_view name) {
    if (name == "csv") {
        return OutputFormat::Csv;
    }
    if (name == "json") {
        return OutputFormat::Json;
    }
    throw UsageError("unknown output format '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
    if (trials == 0) {
        throw UsageError("number of trials must be >= 1");
    }
    if (const auto* sweep = std::get_if<SweepSpec>(&body)) {
        if (sweep->grid.empty()) {
            throw UsageError("sweep grid is empty");
        }
        if (sweep->series.empty()) {
            throw UsageError("sweep has no series");
        }
        if (sweep->schemes.empty()) {
            throw UsageError("sweep has no schemes");
        }
    } else {
        const auto& zone = std::get<ZoneSpec>(body);
        if (zone.resolution == 0) {
            throw UsageError("zone grid resolution must be >= 1");
        }
        if (!std::isfinite(zone.p0g0_db) || !std::isfinite(zone.psgk_db)) {
            throw UsageError("zone powers must be finite");
        }
    }
}

std::vector<std::string> preset_names() {
    return {"fig3", "fig4", "fig5", "fig6", "fig7", "zone", "zone-fig2"};
}

ExperimentSpec make_preset(std::string_view name) {
    if (name == "fig3") {
        return preset_fig3();
    }
    if (name == "fig4") {
        return preset_fig4();
    }
    if (name == "fig5") {
        return preset_fig5();
    }
    if (name == "fig6") {
        return preset_fig6();
    }
    if (name == "fig7") {
        return preset_fig7();
    }
    if (name == "zone") {
        return preset_zone(8.0, 15.0, "zone");
    }
    if (name == "zone-fig2") {
        return preset_zone(5.0, 4.0, "zone-fig2");
    }
    throw UsageError("unknown preset '" + std::string(name) + "'");
}

ExperimentSpec parse_config(std::istream& in, std::string_view origin) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw UsageError(std::string(origin) + ": " + e.message() + " (line " +
                         std::to_string(e.line()) + ")");
    }
    ExperimentSpec spec;
    try {
        spec = spec_from_tree(tree);
    } catch (const UsageError& e) {
        throw UsageError(std::string(origin) + ": " + e.what());
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file " + path);
    }
    return parse_config(in, path);
}

std::vector<double> linear_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw InvalidArgument("grid needs finite start <= stop and step > 0");
    }
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid.push_back(start + static_cast<double>(i) * step);
    }
    return grid;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers) {
    spec.validate();
    ExperimentResult result;
    if (const auto* zone = std::get_if<ZoneSpec>(&spec.body)) {
        result.body = classify_grid(db_to_linear(zone->p0g0_db), db_to_linear(zone->psgk_db),
                                    zone->resolution);
        return result;
    }
    const auto& sweep_spec = std::get<SweepSpec>(spec.body);
    std::vector<SeriesResult> series_results;
    for (const auto& series : sweep_spec.series) {
        series_results.push_back(
            {series.label, sweep(series.base, sweep_spec.axis, sweep_spec.grid, sweep_spec.schemes,
                                 spec.trials, spec.seed, sweep_spec.options, workers)});
    }
    result.body = std::move(series_results);
    return result;
}

std::vector<std::string> sweep_csv_columns() {
    return {"axis_value",       "scheme",         "mc_gfu_outage",      "mc_std_err",
            "mc_gbu_outage",    "analytic_exact", "analytic_highsnr",   "analytic_asymptote",
            "trials",           "seed",           "case1_frac",         "case2_frac",
            "case3_frac",       "series",         "unresolved",         "error"};
}

std::vector<std::string> zone_csv_columns() { return {"target_gbu", "target_gfu", "zone_label"}; }

std::string render(const ExperimentSpec& spec, const ExperimentResult& result,
                   const RenderOptions& options) {
    return options.format == OutputFormat::Json ? render_json(spec, result, options)
                                                : render_csv(spec, result, options);
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

}  // namespace crsma
