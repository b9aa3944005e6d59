#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crsma/acceptance.hpp"
#include "crsma/errors.hpp"
#include "crsma/experiment.hpp"

namespace {

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw crsma::UsageError("cannot open output file " + path);
    }
    out << text;
    if (!out) {
        throw crsma::UsageError("failed writing " + path);
    }
}

std::string preset_list() {
    std::string names;
    for (const auto& name : crsma::preset_names()) {
        names += (names.empty() ? "" : ", ") + name;
    }
    return names;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage simulator for cognitive-radio rate-splitting semi-grant-free uplink"};
    app.require_subcommand(1);

    std::string preset_positional;
    std::string preset_flag;
    std::string config_path;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string json_mirror_path;
    std::string format = "csv";
    bool no_timestamp = false;
    std::optional<double> p0g0_db;
    std::optional<double> psgk_db;
    std::optional<std::size_t> grid;

    auto* run = app.add_subcommand("run", "Run a preset or a config-file experiment");
    run->add_option("name", preset_positional, "Preset name (" + preset_list() + ")")
        ->option_text("PRESET");
    auto* preset_opt = run->add_option("--preset", preset_flag, "Preset name");
    auto* config_opt = run->add_option("--config", config_path, "INI experiment description")
                           ->check(CLI::ExistingFile);
    preset_opt->excludes(config_opt);
    run->add_option("--trials", trials, "Monte Carlo trials per point")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Random seed");
    run->add_option("--out", out_path, "Output file (stdout when omitted)");
    run->add_option("--json", json_mirror_path, "Also write the result as JSON to this file");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    run->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp header line");
    run->add_option("--p0g0-db", p0g0_db, "Zone run: received GBU power in dB");
    run->add_option("--psgk-db", psgk_db, "Zone run: received GFU power in dB");
    run->add_option("--grid", grid, "Zone run: grid resolution per axis")
        ->check(CLI::PositiveNumber);

    std::string validate_out;
    std::uint64_t validate_seed = crsma::kDefaultSeed;
    std::vector<int> only;
    auto* validate = app.add_subcommand("validate", "Run the acceptance suite");
    validate->add_option("--out", validate_out, "Report file (stdout when omitted)");
    validate->add_option("--seed", validate_seed, "Random seed");
    validate->add_option("--only", only, "Run only these criteria")
        ->check(CLI::Range(1, crsma::kNumCriteria));

    app.add_subcommand("presets", "List preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("presets")) {
            for (const auto& name : crsma::preset_names()) {
                std::cout << name << '\n';
            }
            return 0;
        }

        if (app.got_subcommand(validate)) {
            crsma::AcceptanceOptions options;
            options.seed = validate_seed;
            options.only = only;
            const auto results = crsma::run_acceptance(options);
            const auto report = crsma::render_report(results);
            write_output(report, validate_out);
            if (!validate_out.empty()) {
                std::cout << report;
            }
            return crsma::all_passed(results) ? 0 : 1;
        }

        if (!preset_positional.empty() && !preset_flag.empty() && preset_positional != preset_flag) {
            throw crsma::UsageError("conflicting presets '" + preset_positional + "' and '" +
                                    preset_flag + "'");
        }
        const std::string preset = preset_flag.empty() ? preset_positional : preset_flag;
        if (preset.empty() == config_path.empty()) {
            throw crsma::UsageError("give exactly one of a preset name or --config");
        }
        auto spec = config_path.empty() ? crsma::make_preset(preset)
                                         : crsma::load_config(config_path);
        if (trials) {
            spec.trials = *trials;
        }
        if (seed) {
            spec.seed = *seed;
        }
        if (p0g0_db || psgk_db || grid) {
            auto* zone = std::get_if<crsma::ZoneSpec>(&spec.body);
            if (zone == nullptr) {
                throw crsma::UsageError("--p0g0-db, --psgk-db and --grid apply to zone runs only");
            }
            for (auto& entry : spec.metadata) {
                if (entry.key == "p0g0_db" && p0g0_db && *p0g0_db != zone->p0g0_db) {
                    entry = {"p0g0_db", crsma::format_number(*p0g0_db), "choice"};
                } else if (entry.key == "psgk_db" && psgk_db && *psgk_db != zone->psgk_db) {
                    entry = {"psgk_db", crsma::format_number(*psgk_db), "choice"};
                } else if (entry.key == "grid" && grid && *grid != zone->resolution) {
                    entry = {"grid", std::to_string(*grid), "choice"};
                }
            }
            zone->p0g0_db = p0g0_db.value_or(zone->p0g0_db);
            zone->psgk_db = psgk_db.value_or(zone->psgk_db);
            zone->resolution = grid.value_or(zone->resolution);
        }
        spec.validate();

        const auto result = crsma::run_experiment(spec);
        crsma::RenderOptions options;
        options.format = crsma::output_format_from_string(format);
        options.timestamp = !no_timestamp;
        write_output(crsma::render(spec, result, options), out_path);
        if (!json_mirror_path.empty()) {
            options.format = crsma::OutputFormat::Json;
            write_output(crsma::render(spec, result, options), json_mirror_path);
        }
        return 0;
    } catch (const crsma::UsageError& e) {
        std::cerr << "crsma: usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "crsma: error: " << e.what() << '\n';
        return 1;
    }
}
