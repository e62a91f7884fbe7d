#include "rsf/state.hpp"

#include "rsf/errors.hpp"

#include <cmath>
#include <sstream>

namespace rsf {

ModeSet::ModeSet(std::vector<double> omega, Units units) : omega_(std::move(omega)), units_(units) {
    if (omega_.empty()) throw DomainError("ModeSet: at least one mode is required");
    for (std::size_t k = 0; k < omega_.size(); ++k) {
        if (!std::isfinite(omega_[k]) || omega_[k] <= 0.0) {
            std::ostringstream os;
            os << "ModeSet: omega[" << k << "] = " << omega_[k] << " must be finite and > 0";
            throw DomainError(os.str());
        }
    }
    if (!(units_.hbar > 0.0) || !(units_.kB > 0.0)) throw DomainError("ModeSet: hbar and kB must be positive");
}

HermitianMatrix ModeSet::hamiltonian() const {
    std::vector<double> e(omega_.size());
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = units_.hbar * omega_[k];
    return HermitianMatrix::diagonal(e);
}

ReducedState make_state_unchecked(HermitianMatrix r, ComplexVector alpha) {
    return ReducedState(std::move(r), std::move(alpha), ReducedState::Unchecked{});
}

ReducedState::ReducedState(HermitianMatrix r, ComplexVector alpha) : r_(std::move(r)), alpha_(std::move(alpha)) {
    if (r_.dim() != alpha_.size() || r_.dim() == 0) {
        std::ostringstream os;
        os << "ReducedState: r is " << r_.dim() << "x" << r_.dim() << " but alpha has " << alpha_.size()
           << " entries";
        throw DimensionError(os.str());
    }
    const double rmin = min_eigenvalue(r_);
    if (rmin < -kPsdTol) {
        std::ostringstream os;
        os << "ReducedState: r is not positive semi-definite (min eigenvalue " << rmin << ")";
        throw StateConsistencyError(os.str());
    }
    (void)correlation_matrix(*this);
}

ReducedState ReducedState::vacuum(std::size_t n_modes) {
    return make_state_unchecked(HermitianMatrix::zeros(n_modes), ComplexVector(n_modes));
}

ReducedState ReducedState::coherent(ComplexVector alpha) {
    auto r = hermitize(Matrix::outer(alpha, alpha));
    return make_state_unchecked(std::move(r), std::move(alpha));
}

CorrelationMatrix CorrelationMatrix::from_matrix(const HermitianMatrix& m) {
    EigenSystem eig = eig_hermitian(m);
    if (eig.values.empty()) return CorrelationMatrix(m, std::move(eig));
    const double lmin = eig.values.front();
    if (lmin < -kPsdTol) {
        std::ostringstream os;
        os << "correlation matrix is not positive semi-definite: eigenvalue " << lmin << " < -" << kPsdTol;
        throw StateConsistencyError(os.str());
    }
    if (lmin >= 0.0) return CorrelationMatrix(m, std::move(eig));
    for (auto& l : eig.values) l = std::max(l, 0.0);
    auto clipped = matrix_function(eig, [](double x) { return x; });
    return CorrelationMatrix(std::move(clipped), std::move(eig));
}

CorrelationMatrix correlation_matrix(const ReducedState& s) {
    return CorrelationMatrix::from_matrix(hermitize(s.r().matrix() - Matrix::outer(s.alpha(), s.alpha())));
}

double total_particle_number(const ReducedState& s) { return s.r().trace(); }

double additive_expectation(const ReducedState& s, const HermitianMatrix& b) {
    if (b.dim() != s.n_modes()) throw DimensionError("additive_expectation: observable and state dimensions differ");
    // tr[r b] = sum_ij r_ij b_ji
    Complex acc{};
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) acc += s.r()(i, j) * b(j, i);
    return acc.real();
}

} // namespace rsf
