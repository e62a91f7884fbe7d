#include "rsf/thermo.hpp"

#include "rsf/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rsf {

namespace {

// Eigenvalues below this are treated as exact zeros of r^alpha.
constexpr double kZeroEigenvalue = 1e-13;

void require_beta(double beta, const char* what) {
    if (!(beta > 0.0) || std::isnan(beta)) {
        std::ostringstream os;
        os << what << ": beta must be > 0 (got " << beta << ")";
        throw DomainError(os.str());
    }
}

// (x + 1) ln(x + 1) - x ln x
double mode_entropy(double x) { return (x + 1.0) * std::log1p(x) - xlogx(x); }

// ln((x + 1) / x) for x > 0
double log_ratio(double x) { return std::log1p(1.0 / x); }

} // namespace

double entropy(const CorrelationMatrix& c, double kB) {
    double s = 0.0;
    for (double l : c.eigenvalues()) s += mode_entropy(l);
    return kB * s;
}

double internal_energy(const ReducedState& s, const ModeSet& m) {
    if (s.n_modes() != m.n_modes()) throw DimensionError("internal_energy: state and modes differ in size");
    double u = 0.0;
    for (std::size_t k = 0; k < m.n_modes(); ++k)
        u += m.hbar() * m.omega(k) * (s.r()(k, k).real() - std::norm(s.alpha()[k]));
    return u;
}

double heat_rate(const ReducedState& s, const GeneratorSpec& g, const ModeSet& m) {
    if (!g.scattering().empty()) {
        throw UnsupportedRegimeError("heat_rate: undefined with random scattering channels");
    }
    if (s.n_modes() != m.n_modes() || g.n_modes() != m.n_modes())
        throw DimensionError("heat_rate: state, generator and modes differ in size");
    const CorrelationMatrix c = correlation_matrix(s);
    const std::size_t n = m.n_modes();
    const HermitianMatrix& up = g.gamma_up();
    const HermitianMatrix& down = g.gamma_down();
    Complex q{};
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t kp = 0; kp < n; ++kp)
            q += 0.5 * (m.omega(k) + m.omega(kp)) * c(k, kp) * (up(kp, k) - down(kp, k));
    double spont = 0.0;
    for (std::size_t k = 0; k < n; ++k) spont += m.omega(k) * up(k, k).real();
    return m.hbar() * (q.real() + spont);
}

EntropyRate entropy_rate(const ReducedState& s, const GeneratorSpec& g) {
    const CorrelationMatrix c = correlation_matrix(s);
    const HermitianMatrix dc = rhs_correlation(s, g);
    const Matrix& v = c.eigenvectors();
    const std::size_t n = c.dim();
    // Derivative scale for deciding whether a component "vanishes".
    const double tol = 1e-12 * std::max(1.0, frobenius_norm(dc.matrix()));

    EntropyRate out;
    double acc = 0.0;
    bool rising = false;
    for (std::size_t i = 0; i < n; ++i) {
        // (V^dagger dc V)_ii
        Complex d{};
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) d += std::conj(v(a, i)) * dc(a, b) * v(b, i);
        const double lambda = c.eigenvalues()[i];
        if (lambda <= kZeroEigenvalue) {
            if (std::abs(d.real()) > tol) {
                out.singular = true;
                rising = rising || d.real() > 0.0;
            }
            continue;
        }
        acc += d.real() * log_ratio(lambda);
    }
    const double kB = g.modes().kB();
    if (out.singular) {
        out.value = rising ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    } else {
        out.value = kB * acc;
    }
    return out;
}

CorrelationMatrix thermal_correlation(double beta, const ModeSet& m) {
    require_beta(beta, "thermal_correlation");
    std::vector<double> nbar(m.n_modes());
    for (std::size_t k = 0; k < nbar.size(); ++k) nbar[k] = 1.0 / std::expm1(beta * m.hbar() * m.omega(k));
    return CorrelationMatrix::from_matrix(HermitianMatrix::diagonal(nbar));
}

ReducedState thermal_state(double beta, const ModeSet& m, const ComplexVector& alpha) {
    if (alpha.size() != m.n_modes()) throw DimensionError("thermal_state: alpha size != n_modes");
    const auto c = thermal_correlation(beta, m);
    return ReducedState(hermitize(c.matrix().matrix() + Matrix::outer(alpha, alpha)), alpha);
}

FreeEnergies free_energies(const ReducedState& s, double beta, const ModeSet& m) {
    require_beta(beta, "free_energies");
    if (s.n_modes() != m.n_modes()) throw DimensionError("free_energies: state and modes differ in size");
    const CorrelationMatrix c = correlation_matrix(s);
    const double u = internal_energy(s, m);
    const double S = entropy(c, m.kB());

    FreeEnergies f;
    f.F = u - S / (m.kB() * beta);
    for (std::size_t k = 0; k < m.n_modes(); ++k) {
        // -(1/beta) ln Z_k = (1/beta) ln(1 - e^{-beta hbar omega})
        f.F_eq += std::log(-std::expm1(-beta * m.hbar() * m.omega(k))) / beta;
    }
    // x ln((x+1)/x) -> 0 as x -> 0
    double tail = 0.0;
    for (double l : c.eigenvalues())
        if (l > 0.0) tail += l * log_ratio(l);
    f.F_neq = u - tail / beta;
    return f;
}

double steady_entropy_vs_beta(double beta, const ModeSet& m) {
    require_beta(beta, "steady_entropy_vs_beta");
    double bu = 0.0;
    double log_terms = 0.0;
    for (std::size_t k = 0; k < m.n_modes(); ++k) {
        const double x = beta * m.hbar() * m.omega(k);
        const double nbar = 1.0 / std::expm1(x);
        bu += x * nbar;
        log_terms += -std::log(-std::expm1(-x));  // ln(nbar + 1) = ln Z_k
    }
    return m.kB() * (bu + log_terms);
}

ThermoSample sample_state(double t, const ReducedState& s, const GeneratorSpec& g) {
    const ModeSet& m = g.modes();
    const CorrelationMatrix c = correlation_matrix(s);
    ThermoSample out;
    out.t = t;
    out.S = entropy(c, m.kB());
    out.U = internal_energy(s, m);
    out.heat_rate = g.scattering().empty() ? heat_rate(s, g, m) : std::numeric_limits<double>::quiet_NaN();
    out.entropy_rate = entropy_rate(s, g).value;
    if (g.has_thermal_bath()) {
        const auto f = free_energies(s, g.bath()->beta(), m);
        out.F = f.F;
        out.F_eq = f.F_eq;
        out.F_neq = f.F_neq;
    } else {
        out.F = out.F_eq = out.F_neq = std::numeric_limits<double>::quiet_NaN();
    }
    out.N = total_particle_number(s);
    out.alpha_norm2 = s.alpha().norm2();
    return out;
}

void annotate(Trajectory& traj, const GeneratorSpec& g) {
    traj.samples.clear();
    traj.samples.reserve(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i)
        traj.samples.push_back(sample_state(traj.times[i], traj.states[i], g));
}

} // namespace rsf
