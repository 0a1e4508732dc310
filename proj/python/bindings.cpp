#include "solitonchain/analytic.hpp"
#include "solitonchain/chain_json.hpp"
#include "solitonchain/cli.hpp"
#include "solitonchain/disorder.hpp"
#include "solitonchain/entanglement.hpp"
#include "solitonchain/error.hpp"
#include "solitonchain/protocols.hpp"

#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace solitonchain;

namespace {

py::dict trace_dict(const ProtocolTrace &t) {
    py::dict d;
    d["t"]                = t.t;
    d["fidelity_initial"] = t.fidelity_initial;
    if(!t.fidelity_reference.empty()) d["fidelity_reference"] = t.fidelity_reference;
    d["eof"]            = t.eof;
    d["pair"]           = py::make_tuple(t.pair_first, t.pair_second);
    d["mirroring_time"] = t.mirroring_time;
    if(t.quench_index) d["quench_index"] = *t.quench_index;
    return d;
}

py::dict ensemble_dict(const EnsembleStats &s) {
    py::list levels;
    for(const auto &l : s.levels) {
        py::dict d;
        d["level"]   = l.level;
        d["count"]   = l.count;
        d["aborted"] = l.aborted;
        d["mean"]    = l.mean;
        d["std"]     = l.std;
        d["sem"]     = l.sem;
        levels.append(d);
    }
    py::dict d;
    d["scenario"] = s.scenario;
    d["kind"]     = std::string(to_string(s.kind));
    d["levels"]   = levels;
    d["samples"]  = s.samples;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dimerized spin-chain entanglement simulator";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());

    py::class_<ChainSpec>(m, "ChainSpec")
        .def(py::init<>())
        .def_readwrite("n_sites", &ChainSpec::n_sites)
        .def_readwrite("couplings", &ChainSpec::couplings)
        .def_readwrite("onsite", &ChainSpec::onsite)
        .def_readwrite("site_a", &ChainSpec::site_a)
        .def_readwrite("site_b", &ChainSpec::site_b)
        .def_readwrite("site_c", &ChainSpec::site_c)
        .def("validate", &ChainSpec::validate)
        .def("to_json", [](const ChainSpec &s) { return chain_to_json(s); })
        .def_static("from_json", [](const std::string &text) { return chain_from_json(text); })
        .def(py::self == py::self)
        .def("__repr__", [](const ChainSpec &s) { return "ChainSpec(" + chain_to_json(s) + ")"; });

    m.def("build_abc_chain", &build_abc_chain, py::arg("extension_m") = 0, py::arg("delta") = 0.1, py::arg("big_delta") = 1.0);
    m.def("build_storage_chain", &build_storage_chain, py::arg("delta") = 0.1, py::arg("big_delta") = 1.0);
    m.def("build_trimer_chain", &build_trimer_chain, py::arg("eta"));
    m.def("decouple_site", &decouple_site);
    m.def("sub_chain", &sub_chain);
    m.def("mirror", &mirror);
    m.def("disordered_chain",
          [](const ChainSpec &clean, const std::string &kind, double e, double weak, std::uint64_t seed, std::uint64_t r) {
              return disordered_chain(clean, parse_disorder_kind(kind), e, weak, seed, r);
          },
          py::arg("clean"), py::arg("kind"), py::arg("scale_E"), py::arg("weak_coupling"), py::arg("base_seed"), py::arg("realization"));
    m.def("hamiltonian", [](const ChainSpec &spec, std::size_t max_excitations) {
        return build_hamiltonian(spec, build_basis(spec.n_sites, max_excitations)).matrix;
    }, py::arg("spec"), py::arg("max_excitations") = 2);
    m.def("spectrum", [](const ChainSpec &spec, std::size_t max_excitations) {
        return diagonalize(build_hamiltonian(spec, build_basis(spec.n_sites, max_excitations))).eigenvalues;
    }, py::arg("spec"), py::arg("max_excitations") = 2);

    m.def("effective_eta", &analytic::effective_eta, py::arg("big_delta"), py::arg("delta"));
    m.def("mirroring_time", &analytic::mirroring_time, py::arg("eta"));
    m.def("nominal_mirroring_time", &nominal_mirroring_time);
    m.def("analytic_eof_profile", &analytic::analytic_eof_profile, py::arg("eta"), py::arg("t"));
    m.def("trimer_rho_ac", &analytic::trimer_rho_ac, py::arg("eta"), py::arg("t"));
    m.def("noisy_trimer_eigenvalues", &analytic::noisy_trimer_eigenvalues, py::arg("eta"), py::arg("d"), py::arg("e"));

    m.def("concurrence", [](const Eigen::Matrix4cd &rho) { return concurrence(TwoQubitDensity(rho)); }, py::arg("rho"));
    m.def("eof", [](const Eigen::Matrix4cd &rho) { return eof(TwoQubitDensity(rho)); }, py::arg("rho"));
    m.def("eof_from_concurrence", &eof_from_concurrence);

    m.def("run_entangling", [](const ChainSpec &spec, double t_max, double dt, std::optional<double> t_m) {
        return trace_dict(run_entangling(spec, t_max, dt, t_m ? *t_m : nominal_mirroring_time(spec)));
    }, py::arg("spec"), py::arg("t_max"), py::arg("dt") = 0.25, py::arg("mirroring_time") = py::none());
    m.def("run_storage", [](const ChainSpec &spec, double t_max_after, double dt, std::optional<double> t_m) {
        return trace_dict(run_storage(spec, t_max_after, dt, t_m ? *t_m : nominal_mirroring_time(spec)));
    }, py::arg("spec"), py::arg("t_max_after") = 500.0, py::arg("dt") = 0.25, py::arg("mirroring_time") = py::none());
    m.def("run_async_sweep", [](const ChainSpec &spec, const std::vector<double> &delays, std::optional<double> t_m, const std::string &end) {
        if(end != "c" && end != "a") throw ParameterError("delayed end must be 'a' or 'c'");
        std::vector<std::pair<double, double>> out;
        for(const auto &p : run_async_sweep(spec, delays, t_m ? *t_m : nominal_mirroring_time(spec), end == "c" ? DelayedEnd::c : DelayedEnd::a))
            out.emplace_back(p.delay, p.eof);
        return out;
    }, py::arg("spec"), py::arg("delays"), py::arg("mirroring_time") = py::none(), py::arg("delayed") = "c");
    m.def("run_disorder", [](const ChainSpec &clean, const std::string &kind, const std::vector<double> &levels, std::size_t n,
                             double window, double dt, std::uint64_t seed, unsigned threads) {
        DisorderConfig cfg;
        cfg.kind           = parse_disorder_kind(kind);
        cfg.levels         = levels;
        cfg.n_realizations = n;
        cfg.window         = window;
        cfg.dt             = dt;
        cfg.base_seed      = seed;
        cfg.threads        = threads;
        std::pair<EnsembleStats, EnsembleStats> result;
        {
            py::gil_scoped_release release;
            result = run_scenarios(clean, cfg);
        }
        return py::make_tuple(ensemble_dict(result.first), ensemble_dict(result.second));
    }, py::arg("clean"), py::arg("kind"), py::arg("levels"), py::arg("n_realizations") = 200, py::arg("window") = 500.0,
       py::arg("dt") = 0.25, py::arg("base_seed") = 20170401, py::arg("threads") = 1);
    m.def("spectrum_statistics", [](const ChainSpec &clean, const std::string &kind, double e, std::size_t n, std::uint64_t seed, unsigned threads) {
        const auto s = spectrum_statistics(clean, parse_disorder_kind(kind), e, n, seed, threads);
        py::dict   d;
        d["mean"]                    = s.mean;
        d["std"]                     = s.std;
        d["zero_count"]              = s.zero_count;
        d["realization_zero_counts"] = s.realization_zero_counts;
        return d;
    }, py::arg("clean"), py::arg("kind"), py::arg("scale_E"), py::arg("n_realizations") = 100, py::arg("base_seed") = 20170401,
       py::arg("threads") = 1);
    m.def("localized_mode_report", [](const ChainSpec &half) {
        const auto r = localized_mode_report(half);
        py::dict   d;
        d["energies"]    = r.energies;
        d["occupations"] = r.occupations;
        d["zero_mode"]   = r.zero_mode;
        d["centre"]      = r.centre;
        return d;
    });

    m.def("run_cli", [](const std::vector<std::string> &args) {
        std::ostringstream out, err;
        const int          rc = cli::run(args, out, err);
        return py::make_tuple(rc, out.str(), err.str());
    }, py::arg("args"));
    m.attr("__version__") = std::string(cli::version);
}
