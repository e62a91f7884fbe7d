#pragma once

#include "rsf/numkernel.hpp"

#include <vector>

namespace rsf {

// hbar and kB are carried symbolically; natural units by default.
struct Units {
    double hbar = 1.0;
    double kB = 1.0;
};

// The fixed single-particle basis {|k>} with angular frequencies omega_k.
// h = hbar * sum_k omega_k |k><k| is diagonal in it by construction.
class ModeSet {
public:
    // Throws DomainError unless every omega is finite and strictly positive.
    explicit ModeSet(std::vector<double> omega, Units units = {});

    std::size_t n_modes() const noexcept { return omega_.size(); }
    double omega(std::size_t k) const { return omega_.at(k); }
    const std::vector<double>& omegas() const noexcept { return omega_; }
    const Units& units() const noexcept { return units_; }
    double hbar() const noexcept { return units_.hbar; }
    double kB() const noexcept { return units_.kB; }

    // Single-particle Hamiltonian h (energy units).
    HermitianMatrix hamiltonian() const;

private:
    std::vector<double> omega_;
    Units units_;
};

// The couple (r, |alpha>): mean occupations/coherences plus field amplitudes.
class ReducedState {
public:
    // Throws DimensionError on size mismatch and StateConsistencyError if r or
    // r - |alpha><alpha| has an eigenvalue below -1e-9.
    ReducedState(HermitianMatrix r, ComplexVector alpha);

    static ReducedState vacuum(std::size_t n_modes);
    // r = |alpha><alpha|
    static ReducedState coherent(ComplexVector alpha);

    std::size_t n_modes() const noexcept { return alpha_.size(); }
    const HermitianMatrix& r() const noexcept { return r_; }
    const ComplexVector& alpha() const noexcept { return alpha_; }

private:
    struct Unchecked {};
    ReducedState(HermitianMatrix r, ComplexVector alpha, Unchecked) : r_(std::move(r)), alpha_(std::move(alpha)) {}
    friend ReducedState make_state_unchecked(HermitianMatrix r, ComplexVector alpha);

    HermitianMatrix r_;
    ComplexVector alpha_;
};

// Skips the PSD checks; for integrator internals that guard states themselves.
ReducedState make_state_unchecked(HermitianMatrix r, ComplexVector alpha);

// r^alpha = r - |alpha><alpha| with its spectrum.  Eigenvalues in [-1e-9, 0)
// are clipped to zero; anything lower is rejected.
class CorrelationMatrix {
public:
    // Throws StateConsistencyError if lambda_min(m) < -1e-9.
    static CorrelationMatrix from_matrix(const HermitianMatrix& m);

    std::size_t dim() const noexcept { return m_.dim(); }
    const HermitianMatrix& matrix() const noexcept { return m_; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    // Ascending, clipped at zero.
    const std::vector<double>& eigenvalues() const noexcept { return eig_.values; }
    const Matrix& eigenvectors() const noexcept { return eig_.vectors; }

private:
    CorrelationMatrix(HermitianMatrix m, EigenSystem eig) : m_(std::move(m)), eig_(std::move(eig)) {}
    HermitianMatrix m_;
    EigenSystem eig_;
};

CorrelationMatrix correlation_matrix(const ReducedState& s);

// tr r = N
double total_particle_number(const ReducedState& s);

// tr[r b], the single-particle image of the additive observable B.
double additive_expectation(const ReducedState& s, const HermitianMatrix& b);

} // namespace rsf
