#pragma once

namespace rsf {

// One row of thermodynamic diagnostics along a trajectory.  Quantities that
// are undefined for the generator at hand (heat with scattering, free
// energies without a thermal bath) are NaN; a singular entropy rate is +-inf.
struct ThermoSample {
    double t = 0.0;
    double S = 0.0;             // units of kB
    double U = 0.0;             // energy
    double heat_rate = 0.0;     // energy / time
    double entropy_rate = 0.0;  // kB / time
    double F = 0.0;
    double F_eq = 0.0;
    double F_neq = 0.0;
    double N = 0.0;             // tr r
    double alpha_norm2 = 0.0;   // <alpha|alpha>
};

} // namespace rsf
