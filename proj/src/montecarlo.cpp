#include "crsma/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "crsma/analytic.hpp"
#include "crsma/baselines.hpp"
#include "crsma/errors.hpp"

namespace crsma {

namespace {

std::size_t index_of(CaseLabel label) { return static_cast<std::size_t>(label); }

struct Partial {
    std::uint64_t gfu_outages = 0;
    std::uint64_t gbu_outages = 0;
    CaseTallies tallies;

    void merge(const Partial& other) {
        gfu_outages += other.gfu_outages;
        gbu_outages += other.gbu_outages;
        for (std::size_t c = 0; c < 3; ++c) {
            tallies.occurrences[c] += other.tallies.occurrences[c];
            tallies.outages[c] += other.tallies.outages[c];
        }
    }
};

Partial run_trials(const SystemConfig& config, Scheme scheme, std::uint64_t seed,
                   std::uint64_t begin, std::uint64_t end) {
    Partial partial;
    ChannelRealization realization;
    const std::size_t K = config.num_gfus();
    for (std::uint64_t trial = begin; trial < end; ++trial) {
        RandomStream rng(seed, trial);
        sample_channel_realization_into(K, rng, realization);

        CaseLabel label;
        bool gfu_outage;
        bool gbu_outage;
        if (scheme == Scheme::CrRsmaSgf) {
            const auto outcome = evaluate_transmission(config, realization);
            label = outcome.case_label;
            gfu_outage = outcome.gfu_outage;
            gbu_outage = outcome.gbu_outage;
        } else {
            label = classify_case(config, realization);
            gfu_outage = cr_noma_outage_sample(config, realization);
            gbu_outage = gbu_oma_outage(config, realization.gain_gbu);
        }
        const std::size_t c = index_of(label);
        ++partial.tallies.occurrences[c];
        if (gfu_outage) {
            ++partial.tallies.outages[c];
            ++partial.gfu_outages;
        }
        if (gbu_outage) {
            ++partial.gbu_outages;
        }
    }
    return partial;
}

bool iequals_any(std::string_view name, std::initializer_list<std::string_view> options) {
    return std::any_of(options.begin(), options.end(), [&](std::string_view option) {
        return option.size() == name.size() &&
               std::equal(option.begin(), option.end(), name.begin(), [](char a, char b) {
                   return std::tolower(static_cast<unsigned char>(a)) ==
                          std::tolower(static_cast<unsigned char>(b));
               });
    });
}

}  // namespace

std::string_view to_string(Scheme scheme) {
    return scheme == Scheme::CrRsmaSgf ? "cr-rsma-sgf" : "cr-noma-sgf";
}

Scheme scheme_from_string(std::string_view name) {
    if (iequals_any(name, {"cr-rsma-sgf", "rsma", "cr-rsma"})) {
        return Scheme::CrRsmaSgf;
    }
    if (iequals_any(name, {"cr-noma-sgf", "noma", "cr-noma"})) {
        return Scheme::CrNomaSgf;
    }
    throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

double binomial_std_err(double p, std::uint64_t trials) {
    if (trials == 0) {
        return 0.0;
    }
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double OutageEstimate::case_fraction(CaseLabel label) const {
    return static_cast<double>(case_tallies.occurrences[index_of(label)]) /
           static_cast<double>(trials);
}

double OutageEstimate::case_outage_prob(CaseLabel label) const {
    return static_cast<double>(case_tallies.outages[index_of(label)]) /
           static_cast<double>(trials);
}

double OutageEstimate::case_outage_std_err(CaseLabel label) const {
    return binomial_std_err(case_outage_prob(label), trials);
}

bool OutageEstimate::resolved() const { return gfu_outages >= 10; }

bool operator==(const CaseTallies& a, const CaseTallies& b) {
    return a.occurrences == b.occurrences && a.outages == b.outages;
}

bool operator==(const OutageEstimate& a, const OutageEstimate& b) {
    return a.trials == b.trials && a.seed == b.seed && a.scheme == b.scheme &&
           a.gfu_outages == b.gfu_outages && a.gbu_outages == b.gbu_outages &&
           a.case_tallies == b.case_tallies;
}

unsigned default_worker_count() {
    if (const char* env = std::getenv("CRSMA_WORKERS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            return static_cast<unsigned>(value);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

OutageEstimate estimate_outage(const SystemConfig& config, Scheme scheme, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers) {
    if (trials == 0) {
        throw InvalidArgument("number of Monte Carlo trials must be >= 1");
    }
    if (workers == 0) {
        workers = default_worker_count();
    }
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));

    Partial total;
    if (workers == 1) {
        total = run_trials(config, scheme, seed, 0, trials);
    } else {
        std::vector<Partial> partials(workers);
        {
            std::vector<std::jthread> threads;
            threads.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                const std::uint64_t begin = trials * w / workers;
                const std::uint64_t end = trials * (w + 1) / workers;
                threads.emplace_back([&, w, begin, end] {
                    partials[w] = run_trials(config, scheme, seed, begin, end);
                });
            }
        }
        for (const auto& partial : partials) {
            total.merge(partial);
        }
    }

    OutageEstimate estimate;
    estimate.trials = trials;
    estimate.seed = seed;
    estimate.scheme = scheme;
    estimate.gfu_outages = total.gfu_outages;
    estimate.gbu_outages = total.gbu_outages;
    estimate.case_tallies = total.tallies;
    const double n = static_cast<double>(trials);
    estimate.gfu_outage_prob = static_cast<double>(total.gfu_outages) / n;
    estimate.gbu_outage_prob = static_cast<double>(total.gbu_outages) / n;
    estimate.std_err_gfu = binomial_std_err(estimate.gfu_outage_prob, trials);
    estimate.std_err_gbu = binomial_std_err(estimate.gbu_outage_prob, trials);
    return estimate;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::GbuPowerDb:
            return "gbu_power_db";
        case SweepAxis::GfuPowerDb:
            return "gfu_power_db";
        case SweepAxis::TargetRate:
            return "target_rate";
        case SweepAxis::NumGfus:
            return "num_gfus";
    }
    return "unknown";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
    for (auto axis : {SweepAxis::GbuPowerDb, SweepAxis::GfuPowerDb, SweepAxis::TargetRate,
                      SweepAxis::NumGfus}) {
        if (iequals_any(name, {to_string(axis)})) {
            return axis;
        }
    }
    throw InvalidArgument("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view to_string(TargetRateMode mode) {
    switch (mode) {
        case TargetRateMode::Both:
            return "both";
        case TargetRateMode::Gbu:
            return "gbu";
        case TargetRateMode::Gfu:
            return "gfu";
    }
    return "unknown";
}

TargetRateMode target_rate_mode_from_string(std::string_view name) {
    for (auto mode : {TargetRateMode::Both, TargetRateMode::Gbu, TargetRateMode::Gfu}) {
        if (iequals_any(name, {to_string(mode)})) {
            return mode;
        }
    }
    throw InvalidArgument("unknown target rate mode '" + std::string(name) + "'");
}

SystemConfig apply_axis_value(const SystemConfig& base, SweepAxis axis, double value,
                              const SweepOptions& options) {
    switch (axis) {
        case SweepAxis::GbuPowerDb: {
            const double ps = options.coupled_power_offset_db
                                  ? db_to_linear(value + *options.coupled_power_offset_db)
                                  : base.power_gfu();
            return base.with_powers(db_to_linear(value), ps);
        }
        case SweepAxis::GfuPowerDb: {
            const double p0 = options.coupled_power_offset_db
                                  ? db_to_linear(value + *options.coupled_power_offset_db)
                                  : base.power_gbu();
            return base.with_powers(p0, db_to_linear(value));
        }
        case SweepAxis::TargetRate:
            switch (options.target_rate_mode) {
                case TargetRateMode::Both:
                    return base.with_target_rates(value, value);
                case TargetRateMode::Gbu:
                    return base.with_target_rates(value, base.target_rate_gfu());
                case TargetRateMode::Gfu:
                    return base.with_target_rates(base.target_rate_gbu(), value);
            }
            break;
        case SweepAxis::NumGfus:
            if (!(value >= 1.0) || std::floor(value) != value) {
                throw InvalidConfiguration("number of GFUs must be a positive integer, got " +
                                           std::to_string(value));
            }
            return base.with_num_gfus(static_cast<std::size_t>(value));
    }
    throw InvalidArgument("unsupported sweep axis");
}

AnalyticValues analytic_values(const SystemConfig& config) {
    AnalyticValues values;
    if (config.num_gfus() == 1) {
        const auto single = outage_single_user(config);
        values.exact = single.exact;
        values.highsnr = single.approx;
        values.asymptote = single.approx;
    } else {
        values.exact = outage_exact(config).total;
        values.highsnr = outage_highsnr(config);
        values.asymptote = outage_diversity_asymptote(config);
    }
    return values;
}

std::vector<SweepRow> sweep(const SystemConfig& base, SweepAxis axis,
                            const std::vector<double>& grid, const std::vector<Scheme>& schemes,
                            std::uint64_t trials, std::uint64_t seed, const SweepOptions& options,
                            unsigned workers) {
    if (grid.empty()) {
        throw InvalidArgument("sweep grid must not be empty");
    }
    if (trials == 0) {
        throw InvalidArgument("number of Monte Carlo trials must be >= 1");
    }
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double value : grid) {
        SweepRow row;
        row.axis_value = value;
        try {
            row.config = apply_axis_value(base, axis, value, options);
            for (Scheme scheme : schemes) {
                row.estimates.push_back(estimate_outage(*row.config, scheme, trials, seed, workers));
            }
            row.analytic = analytic_values(*row.config);
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace crsma
