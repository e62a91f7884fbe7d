// thermo.hpp: thermodynamic functionals of the reduced state.
//
// All of them depend on the state only through the correlation matrix
// r^alpha = r - |alpha><alpha|.  Entropy is reported in units of kB (times
// the kB stored in the ModeSet), energies in units of hbar * omega.

#pragma once

#include "rsf/generators.hpp"
#include "rsf/integrator.hpp"
#include "rsf/sample.hpp"
#include "rsf/state.hpp"

#include <optional>

namespace rsf {

// S = kB tr[(c + 1) ln(c + 1) - c ln c], evaluated on the spectrum.
double entropy(const CorrelationMatrix& c, double kB = 1.0);

// U = tr[h r^alpha] = tr[h r] - <alpha|h|alpha>
double internal_energy(const ReducedState& s, const ModeSet& m);

// dQ/dt = tr[h d r^alpha / dt] for scattering-free generators.
// Throws UnsupportedRegimeError when scattering channels are present.
double heat_rate(const ReducedState& s, const GeneratorSpec& g, const ModeSet& m);

struct EntropyRate {
    double value = 0.0;     // kB / time; +-inf when singular
    bool singular = false;  // a zero eigenvalue of r^alpha has a nonzero derivative component
};

// dS/dt = kB tr[(d r^alpha/dt) ln((r^alpha + 1) / r^alpha)].  Zero eigenvalues
// contribute nothing when their derivative component vanishes; otherwise the
// rate is flagged singular.
EntropyRate entropy_rate(const ReducedState& s, const GeneratorSpec& g);

// 1 / (exp(beta h) - 1).  Throws DomainError unless beta > 0.
CorrelationMatrix thermal_correlation(double beta, const ModeSet& m);

// State with r^alpha = thermal_correlation(beta, m) and the given amplitudes.
ReducedState thermal_state(double beta, const ModeSet& m, const ComplexVector& alpha);

struct FreeEnergies {
    double F = 0.0;      // U - S / (kB beta)
    double F_eq = 0.0;   // -(1/beta) sum_k ln Z_k
    double F_neq = 0.0;  // tr[r^alpha (h - (1/beta) ln((r^alpha + 1) / r^alpha))]
};

// Throws DomainError unless beta > 0.  F = F_neq + F_eq holds when r^alpha is
// the thermal matrix at beta; in general F = F_neq - (1/beta) tr ln(r^alpha + 1).
FreeEnergies free_energies(const ReducedState& s, double beta, const ModeSet& m);

// Entropy of the thermal steady state as a function of beta:
// S = kB (beta U + tr ln(r^alpha + 1)).
double steady_entropy_vs_beta(double beta, const ModeSet& m);

// Fills traj.samples.  Free energies use the bath temperature when the bath is
// thermal (NaN otherwise); heat_rate is NaN when scattering is present.
void annotate(Trajectory& traj, const GeneratorSpec& g);

ThermoSample sample_state(double t, const ReducedState& s, const GeneratorSpec& g);

} // namespace rsf
