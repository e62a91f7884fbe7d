#pragma once

#include "rsf/config.hpp"

#include <iosfwd>
#include <vector>

namespace rsf::commands {

// Fixed CSV header of `simulate`, without the optional state columns.
inline constexpr const char* kSimulationHeader = "t,S,U,heat_rate,entropy_rate,F,F_eq,F_neq,N,alpha_norm2";

// Integrates the scenario and writes one CSV row per recorded step.  With
// dump_state, appends r_re_i_j, r_im_i_j (row-major) and alpha_re_k, alpha_im_k.
// Returns integrator warnings.
std::vector<std::string> write_simulation_csv(const config::ScenarioConfig& cfg, std::ostream& out, bool dump_state);

// One row per beta (linearly spaced, inclusive), one column per omega sorted ascending.
// Throws DomainError unless 0 < beta_min <= beta_max, steps >= 2 and every omega > 0.
void write_entropy_sweep_csv(double beta_min, double beta_max, int steps, std::vector<double> omegas,
                             std::ostream& out);

// Steady alpha, r, correlation matrix, S, U and F_eq of a thermal scenario.
void write_steady_summary(const config::ScenarioConfig& cfg, std::ostream& out);

// Runs the Fock-space comparison and prints the deviation report; returns pass/fail.
bool write_oracle_report(const config::ScenarioConfig& cfg, std::ostream& out);

// Entry point shared by the `rsf` executable.  Exit codes: 0 ok, 1 oracle
// comparison failed, 2 config/domain error, 3 numerical error.
int run(int argc, char** argv);

} // namespace rsf::commands
