#include "rsf/config.hpp"
#include "rsf/errors.hpp"
#include "rsf/fock.hpp"
#include "rsf/integrator.hpp"
#include "rsf/thermo.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rsf;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const CArray& a) {
    if (a.ndim() != 2) throw DimensionError("expected a 2-d array");
    const auto v = a.unchecked<2>();
    Matrix m(static_cast<std::size_t>(v.shape(0)), static_cast<std::size_t>(v.shape(1)));
    for (py::ssize_t i = 0; i < v.shape(0); ++i)
        for (py::ssize_t j = 0; j < v.shape(1); ++j) m(i, j) = v(i, j);
    return m;
}

HermitianMatrix to_hermitian(const CArray& a) { return HermitianMatrix::checked(to_matrix(a)); }

ComplexVector to_vector(const CArray& a) {
    if (a.ndim() != 1) throw DimensionError("expected a 1-d array");
    const auto v = a.unchecked<1>();
    ComplexVector out(static_cast<std::size_t>(v.shape(0)));
    for (py::ssize_t i = 0; i < v.shape(0); ++i) out[i] = v(i);
    return out;
}

CArray from_matrix(const Matrix& m) {
    CArray out({m.rows(), m.cols()});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v(i, j) = m(i, j);
    return out;
}

CArray from_vector(const ComplexVector& x) {
    CArray out(static_cast<py::ssize_t>(x.size()));
    auto v = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < x.size(); ++i) v(i) = x[i];
    return out;
}

py::dict sample_dict(const ThermoSample& s) {
    py::dict d;
    d["t"] = s.t;
    d["S"] = s.S;
    d["U"] = s.U;
    d["heat_rate"] = s.heat_rate;
    d["entropy_rate"] = s.entropy_rate;
    d["F"] = s.F;
    d["F_eq"] = s.F_eq;
    d["F_neq"] = s.F_neq;
    d["N"] = s.N;
    d["alpha_norm2"] = s.alpha_norm2;
    return d;
}

GeneratorSpec make_generator(const ModeSet& m, const CArray& zeta, std::optional<BathSpec> bath,
                             const std::vector<std::pair<double, CArray>>& scattering) {
    std::vector<ScatteringChannel> channels;
    for (const auto& [w, u] : scattering) channels.push_back({w, to_matrix(u)});
    return GeneratorSpec(m, to_vector(zeta), std::move(bath), ScatteringSpec(std::move(channels)));
}

SimulationConfig make_sim(double dt, double t_final, int stride) {
    SimulationConfig cfg;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.output_stride = stride;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reduced state of the field: (r, alpha) dynamics, thermodynamics and a Fock-space oracle";

    auto base = py::register_exception<std::runtime_error>(m, "RsfError", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<StateConsistencyError>(m, "StateConsistencyError", base.ptr());
    py::register_exception<UnsupportedRegimeError>(m, "UnsupportedRegimeError", base.ptr());
    py::register_exception<config::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<fock::InvalidComparisonError>(m, "InvalidComparisonError", base.ptr());

    py::class_<ModeSet>(m, "ModeSet")
        .def(py::init([](std::vector<double> omega, double hbar, double kB) {
                 return ModeSet(std::move(omega), Units{hbar, kB});
             }),
             py::arg("omega"), py::arg("hbar") = 1.0, py::arg("kB") = 1.0)
        .def_property_readonly("omega", &ModeSet::omegas)
        .def_property_readonly("n_modes", &ModeSet::n_modes)
        .def_property_readonly("hbar", &ModeSet::hbar)
        .def_property_readonly("kB", &ModeSet::kB)
        .def("__repr__", [](const ModeSet& s) { return "ModeSet(n_modes=" + std::to_string(s.n_modes()) + ")"; });

    py::class_<ReducedState>(m, "ReducedState")
        .def(py::init([](const CArray& r, const CArray& alpha) { return ReducedState(to_hermitian(r), to_vector(alpha)); }),
             py::arg("r"), py::arg("alpha"))
        .def_static("vacuum", &ReducedState::vacuum, py::arg("n_modes"))
        .def_static("coherent", [](const CArray& alpha) { return ReducedState::coherent(to_vector(alpha)); },
                    py::arg("alpha"))
        .def_property_readonly("r", [](const ReducedState& s) { return from_matrix(s.r().matrix()); })
        .def_property_readonly("alpha", [](const ReducedState& s) { return from_vector(s.alpha()); })
        .def_property_readonly("n_modes", &ReducedState::n_modes);

    py::class_<BathSpec>(m, "BathSpec")
        .def_static("thermal", &BathSpec::thermal, py::arg("gamma_down"), py::arg("beta"))
        .def_static("general",
                    [](const CArray& up, const CArray& down) { return BathSpec::general(to_hermitian(up), to_hermitian(down)); },
                    py::arg("gamma_up"), py::arg("gamma_down"))
        .def_property_readonly("is_thermal", &BathSpec::is_thermal)
        .def_property_readonly("beta", &BathSpec::beta);

    py::class_<GeneratorSpec>(m, "GeneratorSpec")
        .def(py::init(&make_generator), py::arg("modes"), py::arg("zeta"), py::arg("bath") = std::nullopt,
             py::arg("scattering") = std::vector<std::pair<double, CArray>>{})
        .def_property_readonly("modes", &GeneratorSpec::modes)
        .def_property_readonly("zeta", [](const GeneratorSpec& g) { return from_vector(g.zeta()); })
        .def_property_readonly("gamma_up", [](const GeneratorSpec& g) { return from_matrix(g.gamma_up().matrix()); })
        .def_property_readonly("gamma_down", [](const GeneratorSpec& g) { return from_matrix(g.gamma_down().matrix()); })
        .def("with_zeta", [](const GeneratorSpec& g, const CArray& z) { return g.with_zeta(to_vector(z)); });

    // generators
    m.def("rhs_r", [](const ReducedState& s, const GeneratorSpec& g) { return from_matrix(rhs_r(s, g).matrix()); });
    m.def("rhs_alpha", [](const ReducedState& s, const GeneratorSpec& g) { return from_vector(rhs_alpha(s, g)); });
    m.def("rhs_correlation",
          [](const ReducedState& s, const GeneratorSpec& g) { return from_matrix(rhs_correlation(s, g).matrix()); });

    // integrator
    m.def("step_rk4", &step_rk4, py::arg("state"), py::arg("generator"), py::arg("dt"));
    m.def(
        "evolve",
        [](const ReducedState& s0, const GeneratorSpec& g, double dt, double t_final, int stride) {
            Trajectory tr = evolve(s0, g, make_sim(dt, t_final, stride));
            annotate(tr, g);
            py::list states, samples;
            for (const auto& s : tr.states) states.append(s);
            for (const auto& s : tr.samples) samples.append(sample_dict(s));
            py::dict out;
            out["times"] = tr.times;
            out["states"] = states;
            out["samples"] = samples;
            out["warnings"] = tr.warnings;
            return out;
        },
        py::arg("state"), py::arg("generator"), py::arg("dt") = 1e-3, py::arg("t_final") = 1.0,
        py::arg("output_stride") = 1);
    m.def("closed_form_free", &closed_form_free, py::arg("state"), py::arg("modes"), py::arg("t"));
    m.def(
        "closed_form_coherent",
        [](const ReducedState& s, const ModeSet& ms, const CArray& z, double t) {
            return closed_form_coherent(s, ms, to_vector(z), t);
        },
        py::arg("state"), py::arg("modes"), py::arg("zeta"), py::arg("t"));
    m.def("closed_form_thermal", &closed_form_thermal, py::arg("state"), py::arg("generator"), py::arg("t"));
    m.def("steady_state", &steady_state, py::arg("generator"));
    m.def(
        "steady_correlation",
        [](const GeneratorSpec& g) { return from_matrix(steady_correlation(g).matrix().matrix()); },
        py::arg("generator"));
    m.def("partition_factor", &partition_factor, py::arg("beta"), py::arg("hbar"), py::arg("omega"));

    // thermodynamics
    m.def(
        "correlation_matrix",
        [](const ReducedState& s) { return from_matrix(correlation_matrix(s).matrix().matrix()); }, py::arg("state"));
    m.def(
        "entropy",
        [](const CArray& c, double kB) { return entropy(CorrelationMatrix::from_matrix(to_hermitian(c)), kB); },
        py::arg("correlation"), py::arg("kB") = 1.0);
    m.def(
        "state_entropy", [](const ReducedState& s, double kB) { return entropy(correlation_matrix(s), kB); },
        py::arg("state"), py::arg("kB") = 1.0);
    m.def("internal_energy", &internal_energy, py::arg("state"), py::arg("modes"));
    m.def("heat_rate", &heat_rate, py::arg("state"), py::arg("generator"), py::arg("modes"));
    m.def(
        "entropy_rate",
        [](const ReducedState& s, const GeneratorSpec& g) {
            const EntropyRate r = entropy_rate(s, g);
            return py::make_tuple(r.value, r.singular);
        },
        py::arg("state"), py::arg("generator"));
    m.def(
        "thermal_correlation",
        [](double beta, const ModeSet& ms) { return from_matrix(thermal_correlation(beta, ms).matrix().matrix()); },
        py::arg("beta"), py::arg("modes"));
    m.def(
        "thermal_state",
        [](double beta, const ModeSet& ms, std::optional<CArray> alpha) {
            return thermal_state(beta, ms, alpha ? to_vector(*alpha) : ComplexVector(ms.n_modes()));
        },
        py::arg("beta"), py::arg("modes"), py::arg("alpha") = std::nullopt);
    m.def(
        "free_energies",
        [](const ReducedState& s, double beta, const ModeSet& ms) {
            const FreeEnergies f = free_energies(s, beta, ms);
            py::dict d;
            d["F"] = f.F;
            d["F_eq"] = f.F_eq;
            d["F_neq"] = f.F_neq;
            return d;
        },
        py::arg("state"), py::arg("beta"), py::arg("modes"));
    m.def("steady_entropy_vs_beta", &steady_entropy_vs_beta, py::arg("beta"), py::arg("modes"));

    // Fock-space oracle
    m.def(
        "oracle_compare",
        [](const ReducedState& s0, const GeneratorSpec& g, std::size_t cutoff, double dt, double t_final, int stride) {
            const fock::FockSpec spec{g.n_modes(), cutoff};
            const auto rep = fock::compare_trajectories(s0, g, spec, make_sim(dt, t_final, stride));
            py::dict d;
            d["max_r_deviation"] = rep.max_r_deviation;
            d["max_alpha_deviation"] = rep.max_alpha_deviation;
            d["max_trace_drift"] = rep.max_trace_drift;
            d["min_rho_eigenvalue"] = rep.min_rho_eigenvalue;
            d["max_top_population"] = rep.max_top_population;
            d["samples"] = rep.samples;
            d["final_rsf"] = rep.final_rsf;
            d["final_oracle"] = rep.final_oracle;
            return d;
        },
        py::arg("state"), py::arg("generator"), py::arg("cutoff"), py::arg("dt") = 1e-3, py::arg("t_final") = 1.0,
        py::arg("output_stride") = 1);

    // scenario files
    py::class_<config::ScenarioConfig>(m, "ScenarioConfig")
        .def_property_readonly("scenario", [](const config::ScenarioConfig& c) { return config::to_string(c.scenario); })
        .def_readonly("generator", &config::ScenarioConfig::generator)
        .def_readonly("initial", &config::ScenarioConfig::initial)
        .def_property_readonly("dt", [](const config::ScenarioConfig& c) { return c.simulation.dt; })
        .def_property_readonly("t_final", [](const config::ScenarioConfig& c) { return c.simulation.t_final; })
        .def_property_readonly("output_stride",
                               [](const config::ScenarioConfig& c) { return c.simulation.output_stride; });
    m.def("parse_config", &config::parse_config, py::arg("text"), py::arg("source") = "<string>");
    m.def("load_config", &config::load_config, py::arg("path"));
}
