// Python bindings. Numeric kernels are vectorized over numpy arrays; models,
// index laws and rank pairs travel as the same spec strings the CLI accepts.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gosx/distributions.hpp"
#include "gosx/errors.hpp"
#include "gosx/gos.hpp"
#include "gosx/limit_laws.hpp"
#include "gosx/montecarlo.hpp"
#include "gosx/random_index.hpp"
#include "gosx/ranges.hpp"
#include "gosx/selftest.hpp"
#include "gosx/specfun.hpp"

namespace py = pybind11;
using namespace gosx;

namespace {

RankPair ranks(const std::string& regime, int r, int s) {
    RankPair pair{r, s, parse_regime(regime)};
    pair.validate();
    return pair;
}

double mixture_value(double m, double k, const std::string& regime, int r, int s, double first, double second,
                     const std::string& law, const std::string& lu_form) {
    const MixtureQuery q{make_params(m, k, 2), ranks(regime, r, s), LimitPoint{first, second}, IndexLaw::parse(law)};
    if (q.ranks.regime == Regime::lower_upper && lu_form == "joint") return mixture_lu_joint(q);
    if (lu_form != "product" && lu_form != "joint") throw DomainError("lu_form must be product or joint");
    return mixture(q);
}

py::dict report_dict(const SimulationReport& report) {
    return py::module_::import("json").attr("loads")(report.to_json());
}

}  // namespace

PYBIND11_MODULE(_gosx, mod) {
    mod.doc() = "Extreme generalized order statistics under random sample size";

    py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
    py::register_exception<RegimeError>(mod, "RegimeError", PyExc_ValueError);
    py::register_exception<NoAttractionError>(mod, "NoAttractionError", PyExc_ValueError);
    py::register_exception<UnsupportedCaseError>(mod, "UnsupportedCaseError", PyExc_ValueError);
    py::register_exception<QuadratureError>(mod, "QuadratureError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(mod, "ConvergenceError", PyExc_ArithmeticError);

    mod.def("reg_inc_gamma", py::vectorize([](double a, double x) { return specfun::reg_inc_gamma(a, x); }), py::arg("a"), py::arg("x"));
    mod.def("reg_inc_gamma_upper", py::vectorize([](double a, double x) { return specfun::reg_inc_gamma_upper(a, x); }),
            py::arg("a"), py::arg("x"));
    mod.def("reg_inc_beta", py::vectorize([](double x, double a, double b) { return specfun::reg_inc_beta(x, a, b); }),
            py::arg("x"), py::arg("a"), py::arg("b"));
    mod.def("parse_real", [](const std::string& text) { return parse_real(text); }, py::arg("text"));

    py::class_<DistributionModel>(mod, "Model")
        .def(py::init([](const std::string& spec) { return DistributionModel::parse(spec); }), py::arg("spec"))
        .def_property_readonly("spec", &DistributionModel::spec)
        .def("cdf", [](const DistributionModel& d, py::array_t<double> v) {
            return py::vectorize([&](double x) { return d.cdf(x); })(v);
        })
        .def("survival", [](const DistributionModel& d, py::array_t<double> v) {
            return py::vectorize([&](double x) { return d.survival(x); })(v);
        })
        .def("quantile", [](const DistributionModel& d, py::array_t<double> v) {
            return py::vectorize([&](double p) { return d.quantile(p); })(v);
        })
        .def("norming_constants", [](const DistributionModel& d, double m, double k, int n) {
            const auto nc = norming_constants(d, make_params(m, k, n));
            return py::dict(py::arg("a") = nc.a, py::arg("b") = nc.b, py::arg("c") = nc.c, py::arg("d") = nc.d);
        }, py::arg("m"), py::arg("k"), py::arg("n"))
        .def("__repr__", [](const DistributionModel& d) { return "Model('" + d.spec() + "')"; });
    mod.def("model_families", &DistributionModel::family_names);

    mod.def("joint_upper_df", [](const DistributionModel& d, double m, double k, int n, int r, int s, py::array_t<double> x,
                                 py::array_t<double> y) {
        const GosParams p = make_params(m, k, n);
        const RankPair pair = ranks("uu", r, s);
        return py::vectorize([&](double a, double b) { return joint_upper_df(p, d, pair, a, b); })(x, y);
    }, py::arg("model"), py::arg("m"), py::arg("k"), py::arg("n"), py::arg("r"), py::arg("s"), py::arg("x"), py::arg("y"));
    mod.def("joint_df_direct", [](const DistributionModel& d, double m, double k, int n, int r, int s, double x, double y) {
        return joint_df_direct(make_params(m, k, n), d, r, s, x, y);
    }, py::arg("model"), py::arg("m"), py::arg("k"), py::arg("n"), py::arg("r"), py::arg("s"), py::arg("x"), py::arg("y"));
    mod.def("marginal_df", [](const DistributionModel& d, double m, double k, int n, int r, const std::string& side,
                              py::array_t<double> x) {
        const GosParams p = make_params(m, k, n);
        if (side != "upper" && side != "lower") throw DomainError("side must be upper or lower");
        const bool upper = side == "upper";
        return py::vectorize([&](double v) { return upper ? marginal_upper_df(p, d, r, v) : marginal_lower_df(p, d, r, v); })(x);
    }, py::arg("model"), py::arg("m"), py::arg("k"), py::arg("n"), py::arg("r"), py::arg("side"), py::arg("x"));

    mod.def("omega_uu", py::vectorize([](double m, double k, int r, int s, double k1, double k2) {
        return omega_uu(make_params(m, k, 2), r, s, k1, k2);
    }), py::arg("m"), py::arg("k"), py::arg("r"), py::arg("s"), py::arg("kappa1"), py::arg("kappa2"));
    mod.def("omega_ll", py::vectorize([](int r, int s, double r1, double r2) { return omega_ll(r, s, r1, r2); }),
            py::arg("r"), py::arg("s"), py::arg("rho1"), py::arg("rho2"));
    mod.def("omega_lu", py::vectorize([](double m, double k, int r, int s, double r1, double k2) {
        return omega_lu_product(make_params(m, k, 2), r, s, r1, k2);
    }), py::arg("m"), py::arg("k"), py::arg("r"), py::arg("s"), py::arg("rho1"), py::arg("kappa2"));

    mod.def("mixture", &mixture_value, py::arg("m"), py::arg("k"), py::arg("regime"), py::arg("r"), py::arg("s"),
            py::arg("first"), py::arg("second"), py::arg("law") = "exponential", py::arg("lu_form") = "product");
    mod.def("index_law_cdf", [](const std::string& law, double z) { return IndexLaw::parse(law).cdf(z); },
            py::arg("law"), py::arg("z"));

    mod.def("range_df", [](const DistributionModel& d, double m, double k, const std::string& statistic,
                           py::array_t<double> t, const std::string& law, const std::string& route) {
        const RangeQuery q = make_range_query(d, make_params(m, k, 500), IndexLaw::parse(law),
                                              parse_range_statistic(statistic), parse_range_route(route));
        return py::vectorize([&](double v) { return range_statistic_df(q, v); })(t);
    }, py::arg("model"), py::arg("m"), py::arg("k"), py::arg("statistic"), py::arg("t"), py::arg("law") = "exponential",
       py::arg("route") = "published");

    mod.def("simulate", [](const DistributionModel& d, double m, double k, int n, const std::string& statistic,
                           const std::string& regime, int r, int s, const std::string& index, int reps, std::uint64_t seed,
                           std::vector<std::pair<double, double>> grid, int threads) {
        SimConfig cfg;
        cfg.params = make_params(m, k, n);
        cfg.model = d;
        cfg.statistic = parse_sim_statistic(statistic);
        cfg.ranks = RankPair{r, s, parse_regime(regime)};
        cfg.index = IndexSpec::parse(index);
        cfg.replications = reps;
        cfg.seed = seed;
        cfg.threads = threads;
        for (auto [x, y] : grid) cfg.grid.push_back({x, y});
        SimulationReport report;
        {
            py::gil_scoped_release release;
            report = run_bivariate_sim(cfg);
        }
        return report_dict(report);
    }, py::arg("model"), py::arg("m"), py::arg("k"), py::arg("n"), py::arg("statistic") = "pair", py::arg("regime") = "uu",
       py::arg("r") = 2, py::arg("s") = 1, py::arg("index") = "geometric", py::arg("reps") = 20000, py::arg("seed") = 1,
       py::arg("grid") = std::vector<std::pair<double, double>>{}, py::arg("threads") = 0);

    mod.def("selftest", [](bool quick, std::vector<std::string> modules, std::uint64_t seed) {
        SelftestOptions opts;
        opts.quick = quick;
        opts.modules = std::move(modules);
        opts.seed = seed;
        SelftestReport report;
        {
            py::gil_scoped_release release;
            report = run_selftest(opts);
        }
        py::list out;
        for (const auto& c : report.checks) {
            out.append(py::dict(py::arg("module") = c.module, py::arg("name") = c.name, py::arg("passed") = c.passed,
                                py::arg("measure") = c.measure, py::arg("tolerance") = c.tolerance,
                                py::arg("detail") = c.detail));
        }
        return out;
    }, py::arg("quick") = true, py::arg("modules") = std::vector<std::string>{}, py::arg("seed") = 2024);
}
