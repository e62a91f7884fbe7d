// fock.hpp: brute-force reference model on a truncated multimode Fock space.
//
// The full master equation for rho is integrated with the same fixed-step RK4
// policy as the reduced model and then reduced to (r, alpha), so any
// discrepancy is due to truncation rather than to the stepper.

#pragma once

#include "rsf/generators.hpp"
#include "rsf/integrator.hpp"
#include "rsf/state.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rsf::fock {

inline constexpr std::size_t kMaxDimension = 4096;
inline constexpr double kOverflowPopulation = 1e-6;

// Raised when the truncated space can no longer represent the dynamics.
class InvalidComparisonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FockSpec {
    std::size_t n_modes = 1;
    std::size_t cutoff = 10;  // max occupation per mode

    // (cutoff + 1)^n_modes; throws DomainError above kMaxDimension.
    std::size_t dimension() const;
    // Occupation of mode k in basis state `index` (mode 0 is the most significant digit).
    std::size_t occupation(std::size_t index, std::size_t k) const;
};

struct LadderPair {
    Matrix a;
    Matrix a_dag;
};

// Truncated a_k, a_k^dagger for every mode.
std::vector<LadderPair> build_ladder_operators(const FockSpec& spec);

class FockState {
public:
    // Throws DomainError if rho is not Hermitian within 1e-10 or its trace is not 1 within 1e-8.
    FockState(const FockSpec& spec, Matrix rho);
    static FockState vacuum(const FockSpec& spec);

    const Matrix& rho() const noexcept { return rho_; }

private:
    Matrix rho_;
};

// Sparse a_k: column j maps to row target[j] (or nothing) with weight sqrt(n_k).
struct SparseLadder {
    std::vector<std::ptrdiff_t> target;
    std::vector<double> value;
};

struct SparseEntry {
    std::size_t row;
    std::size_t col;
    Complex value;
};
using SparseMatrix = std::vector<SparseEntry>;

// Right-hand side of the full master equation: free Hamiltonian, coherent
// source, gamma_down / gamma_up dissipators with the 1/2-anticommutator
// convention, and sum_j w_j (U_j rho U_j^dagger - rho) where U_j = exp(i B_j)
// lifts u_j = exp(i b_j) through B_j = sum b_kk' a_k^dagger a_k'.
class MasterEquation {
public:
    MasterEquation(const GeneratorSpec& g, const FockSpec& spec);

    const FockSpec& spec() const noexcept { return spec_; }
    std::size_t dimension() const noexcept { return dim_; }
    Matrix rhs(const Matrix& rho) const;
    // Multiplicative lifts of the scattering unitaries.
    const std::vector<Matrix>& lifted_unitaries() const noexcept { return lifts_; }

private:
    FockSpec spec_;
    std::size_t dim_;
    std::vector<double> energy_;  // sum_k omega_k n_k per basis state
    std::vector<SparseLadder> ladders_;
    SparseMatrix drive_;  // sum_k zeta_k a_k^dagger - conj(zeta_k) a_k
    SparseMatrix anti_;   // sum_kk' G_down^{k'k} a_k'^dagger a_k + G_up^{k'k} a_k a_k'^dagger
    Matrix gamma_down_;
    Matrix gamma_up_;
    std::vector<double> weights_;
    std::vector<Matrix> lifts_;
    std::vector<SparseMatrix> lifts_sparse_;
};

Matrix rhs_master(const FockState& rho, const GeneratorSpec& g, const FockSpec& spec);

// r_kk' = Tr[rho a_k'^dagger a_k], alpha_k = Tr[rho a_k].  No PSD check beyond
// Hermitization, since truncation can leave tiny negative eigenvalues.
ReducedState reduce(const FockState& rho, const FockSpec& spec);
ReducedState reduce(const Matrix& rho, const FockSpec& spec);

// Largest marginal probability of any mode sitting at the cutoff.
double top_level_population(const Matrix& rho, const FockSpec& spec);

// Principal logarithm: the Hermitian b with u = exp(i b).
Matrix unitary_log(const Matrix& u);

struct DeviationReport {
    double max_r_deviation = 0.0;      // max_t ||r_rsf - r_oracle||_F
    double max_alpha_deviation = 0.0;  // max_t ||alpha_rsf - alpha_oracle||
    double max_trace_drift = 0.0;      // max_t |Tr rho - 1|
    double min_rho_eigenvalue = 0.0;   // at the final time
    double max_top_population = 0.0;
    std::size_t samples = 0;
    ReducedState final_rsf = ReducedState::vacuum(1);
    ReducedState final_oracle = ReducedState::vacuum(1);

    bool passed(double tolerance) const {
        return max_r_deviation <= tolerance && max_alpha_deviation <= tolerance;
    }
};

// Integrates both pictures from the vacuum and compares them every
// cfg.output_stride steps.  Throws InvalidComparisonError when the top Fock
// level carries more than 1e-6 population.
DeviationReport compare_trajectories(const ReducedState& s0, const GeneratorSpec& g, const FockSpec& spec,
                                     const SimulationConfig& cfg);

} // namespace rsf::fock
