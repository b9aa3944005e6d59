#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crsma/acceptance.hpp"
#include "crsma/analytic.hpp"
#include "crsma/errors.hpp"
#include "crsma/experiment.hpp"
#include "crsma/model.hpp"
#include "crsma/montecarlo.hpp"
#include "crsma/zones.hpp"

namespace py = pybind11;
using namespace crsma;

PYBIND11_MODULE(_crsma, m) {
    m.doc() = "Outage analysis of rate-splitting grant-free uplink access";

    auto base = py::register_exception<Error>(m, "CrsmaError", PyExc_ValueError);
    py::register_exception<InvalidConfiguration>(m, "InvalidConfiguration", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<DispatchError>(m, "DispatchError", base.ptr());
    py::register_exception<NumericalRangeError>(m, "NumericalRangeError", base.ptr());
    py::register_exception<UsageError>(m, "UsageError", base.ptr());

    m.def("db_to_linear", &db_to_linear, py::arg("db"));

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init(&SystemConfig::make), py::arg("num_gfus"), py::arg("power_gbu"),
             py::arg("power_gfu"), py::arg("target_rate_gbu"), py::arg("target_rate_gfu"))
        .def_static("from_db", &SystemConfig::from_db, py::arg("num_gfus"),
                    py::arg("power_gbu_db"), py::arg("power_gfu_db"), py::arg("target_rate_gbu"),
                    py::arg("target_rate_gfu"))
        .def_property_readonly("num_gfus", &SystemConfig::num_gfus)
        .def_property_readonly("power_gbu", &SystemConfig::power_gbu)
        .def_property_readonly("power_gfu", &SystemConfig::power_gfu)
        .def_property_readonly("target_rate_gbu", &SystemConfig::target_rate_gbu)
        .def_property_readonly("target_rate_gfu", &SystemConfig::target_rate_gfu)
        .def_property_readonly("eps0", &SystemConfig::eps0)
        .def_property_readonly("eps_s", &SystemConfig::eps_s)
        .def_property_readonly("eta0", &SystemConfig::eta0)
        .def_property_readonly("eta_s", &SystemConfig::eta_s)
        .def("__eq__", [](const SystemConfig& a, const SystemConfig& b) { return a == b; })
        .def("__repr__", [](const SystemConfig& c) {
            return "SystemConfig(num_gfus=" + std::to_string(c.num_gfus()) +
                   ", power_gbu=" + format_number(c.power_gbu()) +
                   ", power_gfu=" + format_number(c.power_gfu()) +
                   ", target_rate_gbu=" + format_number(c.target_rate_gbu()) +
                   ", target_rate_gfu=" + format_number(c.target_rate_gfu()) + ")";
        });

    py::class_<OutageBreakdown>(m, "OutageBreakdown")
        .def_readonly("p_case1", &OutageBreakdown::p_case1)
        .def_readonly("p_case2_terms", &OutageBreakdown::p_case2_terms)
        .def_readonly("p_case3", &OutageBreakdown::p_case3)
        .def_readonly("total", &OutageBreakdown::total)
        .def_readonly("relative_error_estimate", &OutageBreakdown::relative_error_estimate)
        .def_readonly("conditioning_warning", &OutageBreakdown::conditioning_warning)
        .def_property_readonly("p_case2", &OutageBreakdown::p_case2);

    py::class_<SingleUserOutage>(m, "SingleUserOutage")
        .def_readonly("exact", &SingleUserOutage::exact)
        .def_readonly("approx", &SingleUserOutage::approx);

    m.def("outage_exact", &outage_exact, py::arg("config"));
    m.def("outage_exact_quadrature_oracle", &outage_exact_quadrature_oracle, py::arg("config"));
    m.def("outage_highsnr", &outage_highsnr, py::arg("config"));
    m.def("outage_diversity_asymptote", &outage_diversity_asymptote, py::arg("config"));
    m.def("outage_single_user", &outage_single_user, py::arg("config"));
    m.def("outage", &outage, py::arg("config"));

    py::enum_<Scheme>(m, "Scheme")
        .value("CR_RSMA_SGF", Scheme::CrRsmaSgf)
        .value("CR_NOMA_SGF", Scheme::CrNomaSgf);

    py::class_<OutageEstimate>(m, "OutageEstimate")
        .def_readonly("gfu_outage_prob", &OutageEstimate::gfu_outage_prob)
        .def_readonly("gbu_outage_prob", &OutageEstimate::gbu_outage_prob)
        .def_readonly("trials", &OutageEstimate::trials)
        .def_readonly("std_err_gfu", &OutageEstimate::std_err_gfu)
        .def_readonly("std_err_gbu", &OutageEstimate::std_err_gbu)
        .def_readonly("gfu_outages", &OutageEstimate::gfu_outages)
        .def_readonly("gbu_outages", &OutageEstimate::gbu_outages)
        .def_readonly("seed", &OutageEstimate::seed)
        .def_readonly("scheme", &OutageEstimate::scheme)
        .def("resolved", &OutageEstimate::resolved)
        .def("__eq__", [](const OutageEstimate& a, const OutageEstimate& b) { return a == b; });

    m.def(
        "estimate_outage",
        [](const SystemConfig& config, Scheme scheme, std::uint64_t trials, std::uint64_t seed,
           unsigned workers) {
            py::gil_scoped_release release;
            return estimate_outage(config, scheme, trials, seed, workers);
        },
        py::arg("config"), py::arg("scheme") = Scheme::CrRsmaSgf,
        py::arg("trials") = kDefaultTrials, py::arg("seed") = kDefaultSeed,
        py::arg("workers") = 0u);

    py::enum_<ZoneLabel>(m, "ZoneLabel")
        .value("NOMA_X0_FIRST", ZoneLabel::NomaOrder_x0_first)
        .value("NOMA_XK_FIRST", ZoneLabel::NomaOrder_xK_first)
        .value("NOMA_EITHER", ZoneLabel::NomaEither)
        .value("RSMA_ONLY", ZoneLabel::RsmaOnly)
        .value("OUTAGE", ZoneLabel::Outage);

    py::class_<RegionCorners>(m, "RegionCorners")
        .def_readonly("a0", &RegionCorners::a0)
        .def_readonly("ak", &RegionCorners::ak)
        .def_readonly("b0", &RegionCorners::b0)
        .def_readonly("bk", &RegionCorners::bk)
        .def_readonly("s", &RegionCorners::s);

    m.def("region_corners", &region_corners, py::arg("p0g0"), py::arg("psgk"));
    m.def("classify_rate_pair",
          py::overload_cast<double, double, double, double>(&classify_rate_pair),
          py::arg("p0g0"), py::arg("psgk"), py::arg("target_gbu"), py::arg("target_gfu"));

    m.def("preset_names", &preset_names);
    m.def(
        "run_preset",
        [](const std::string& name, std::optional<std::uint64_t> trials,
           std::optional<std::uint64_t> seed, const std::string& format, unsigned workers) {
            auto spec = make_preset(name);
            if (trials) {
                spec.trials = *trials;
            }
            if (seed) {
                spec.seed = *seed;
            }
            const RenderOptions options{output_format_from_string(format), false};
            py::gil_scoped_release release;
            return render(spec, run_experiment(spec, workers), options);
        },
        py::arg("name"), py::arg("trials") = py::none(), py::arg("seed") = py::none(),
        py::arg("format") = "csv", py::arg("workers") = 0u,
        "Runs a named experiment and returns the rendered CSV or JSON text.");

    py::class_<CriterionResult>(m, "CriterionResult")
        .def_readonly("id", &CriterionResult::id)
        .def_readonly("name", &CriterionResult::name)
        .def_readonly("passed", &CriterionResult::passed)
        .def_readonly("detail", &CriterionResult::detail);

    m.def(
        "run_acceptance",
        [](std::vector<int> only, std::uint64_t seed, unsigned workers) {
            AcceptanceOptions options;
            options.seed = seed;
            options.workers = workers;
            options.only = std::move(only);
            py::gil_scoped_release release;
            return run_acceptance(options);
        },
        py::arg("only") = std::vector<int>{}, py::arg("seed") = kDefaultSeed,
        py::arg("workers") = 0u);

    m.attr("DEFAULT_SEED") = kDefaultSeed;
}
