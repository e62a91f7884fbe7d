#pragma once

#include "rsf/generators.hpp"
#include "rsf/sample.hpp"
#include "rsf/state.hpp"

#include <string>
#include <vector>

namespace rsf {

struct SimulationConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    int output_stride = 1;
    double hbar = 1.0;
    double kB = 1.0;

    // Throws DomainError for non-positive dt/stride, negative t_final or dt > t_final.
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ReducedState> states;
    std::vector<ThermoSample> samples;  // filled by annotate() in thermo.hpp
    std::vector<std::string> warnings;
};

// dt * max(omega_k, Gamma_down^k / Z_k (or ||gamma_down - gamma_up||), sum_j w_j).
// Values above 0.1 trigger a stability warning in evolve().
double stability_number(const GeneratorSpec& g, double dt);

// One classical RK4 step of the coupled system.  The stepper works in
// (r^alpha, alpha) coordinates, so a drive never touches the correlation
// matrix; r is rebuilt as r^alpha + |alpha><alpha| and hermitized.
// Throws NumericalError if the new correlation matrix has an eigenvalue below -1e-9.
ReducedState step_rk4(const ReducedState& s, const GeneratorSpec& g, double dt);

// Fixed-step RK4 from s0 to cfg.t_final, recording every cfg.output_stride
// steps and always the final step.  Trajectory::samples is left empty.
Trajectory evolve(const ReducedState& s0, const GeneratorSpec& g, const SimulationConfig& cfg);

// Closed-form propagators for the three solvable regimes.

// Pure Hamiltonian evolution.
ReducedState closed_form_free(const ReducedState& s0, const ModeSet& m, double t);

// Hamiltonian plus coherent source.
ReducedState closed_form_coherent(const ReducedState& s0, const ModeSet& m, const ComplexVector& zeta, double t);

// Hamiltonian, coherent source and a diagonal thermal bath; uses the complex
// frequencies omega_k - i Gamma_down^k / (2 Z_k).  Throws UnsupportedRegimeError
// when the bath is missing/general or scattering is present.
ReducedState closed_form_thermal(const ReducedState& s0, const GeneratorSpec& g, double t);

// Fixed point of the thermal regime.  Throws UnsupportedRegimeError without a
// thermal bath or with scattering, DomainError("no steady state") if some Gamma_down^k = 0.
ReducedState steady_state(const GeneratorSpec& g);

// Fixed point of the correlation equation, diag(nbar_k).  Computed directly
// rather than as r - |alpha><alpha|, so it carries no zeta-dependent rounding.
// Same errors as steady_state.
CorrelationMatrix steady_correlation(const GeneratorSpec& g);

// Z_k = 1 / (1 - exp(-beta hbar omega_k))
double partition_factor(double beta, double hbar, double omega);

// omega_k - i Gamma_down^k / (2 Z_k) for a thermal generator.
std::vector<Complex> complex_frequencies(const GeneratorSpec& g);

} // namespace rsf
