#include "rsf/integrator.hpp"

#include "rsf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rsf {

void SimulationConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("simulation: dt must be finite and > 0");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw DomainError("simulation: t_final must be finite and >= 0");
    if (t_final > 0.0 && dt > t_final) throw DomainError("simulation: dt must not exceed t_final");
    if (output_stride < 1) throw DomainError("simulation: output_stride must be >= 1");
    if (!(hbar > 0.0) || !(kB > 0.0)) throw DomainError("simulation: hbar and kB must be > 0");
}

double partition_factor(double beta, double hbar, double omega) {
    return -1.0 / std::expm1(-beta * hbar * omega);
}

double stability_number(const GeneratorSpec& g, double dt) {
    double rate = 0.0;
    for (double w : g.modes().omegas()) rate = std::max(rate, w);
    // For a thermal bath the eigenvalues of gamma_down - gamma_up are Gamma_down^k / Z_k.
    const auto relax = eig_hermitian(hermitize(g.gamma_down().matrix() - g.gamma_up().matrix()));
    for (double l : relax.values) rate = std::max(rate, std::abs(l));
    rate = std::max(rate, g.scattering().total_weight());
    return dt * rate;
}

namespace {

struct Coords {
    Matrix c;  // r^alpha
    ComplexVector a;
};

Coords derivative(const Coords& y, const GeneratorSpec& g) {
    return {detail::rhs_correlation_raw(y.c, y.a, g), detail::rhs_alpha_raw(y.a, g)};
}

Coords axpy(const Coords& y, double h, const Coords& k) {
    Coords out = y;
    const Complex hc{h};
    auto oc = out.c.entries();
    auto kc = k.c.entries();
    for (std::size_t i = 0; i < oc.size(); ++i) oc[i] += hc * kc[i];
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += hc * k.a[i];
    return out;
}

void rk4_in_place(Coords& y, const GeneratorSpec& g, double dt) {
    const Coords k1 = derivative(y, g);
    const Coords k2 = derivative(axpy(y, 0.5 * dt, k1), g);
    const Coords k3 = derivative(axpy(y, 0.5 * dt, k2), g);
    const Coords k4 = derivative(axpy(y, dt, k3), g);
    const Complex w{dt / 6.0};
    auto c = y.c.entries();
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] += w * (k1.c.entries()[i] + 2.0 * k2.c.entries()[i] + 2.0 * k3.c.entries()[i] + k4.c.entries()[i]);
    for (std::size_t i = 0; i < y.a.size(); ++i) y.a[i] += w * (k1.a[i] + 2.0 * k2.a[i] + 2.0 * k3.a[i] + k4.a[i]);
    y.c = hermitize(y.c).matrix();
}

void guard_psd(const Matrix& c, double dt, double t) {
    if (cholesky_psd(c, kPsdTol)) return;
    const double lmin = min_eigenvalue(hermitize(c));
    if (lmin >= -kPsdTol) return;
    std::ostringstream os;
    os << "integration left the valid state set at t = " << t << ": correlation matrix eigenvalue " << lmin
       << " < -" << kPsdTol << "; reduce dt (currently " << dt << ")";
    throw NumericalError(os.str());
}

Coords to_coords(const ReducedState& s) {
    return {s.r().matrix() - Matrix::outer(s.alpha(), s.alpha()), s.alpha()};
}

ReducedState from_coords(const Coords& y) {
    return make_state_unchecked(hermitize(y.c + Matrix::outer(y.a, y.a)), y.a);
}

void require_match(const ReducedState& s, std::size_t n, const char* what) {
    if (s.n_modes() != n) {
        std::ostringstream os;
        os << what << ": state has " << s.n_modes() << " modes, expected " << n;
        throw DimensionError(os.str());
    }
}

} // namespace

ReducedState step_rk4(const ReducedState& s, const GeneratorSpec& g, double dt) {
    require_match(s, g.n_modes(), "step_rk4");
    Coords y = to_coords(s);
    rk4_in_place(y, g, dt);
    guard_psd(y.c, dt, dt);
    return from_coords(y);
}

Trajectory evolve(const ReducedState& s0, const GeneratorSpec& g, const SimulationConfig& cfg) {
    cfg.validate();
    require_match(s0, g.n_modes(), "evolve");

    Trajectory traj;
    const double sn = stability_number(g, cfg.dt);
    if (sn > 0.1) {
        std::ostringstream os;
        os << "dt * max rate = " << sn << " exceeds the stability guard 0.1; consider a smaller dt";
        traj.warnings.push_back(os.str());
    }

    const long long n_steps = cfg.t_final > 0.0 ? std::max(1LL, std::llround(cfg.t_final / cfg.dt)) : 0LL;
    traj.times.push_back(0.0);
    traj.states.push_back(s0);

    Coords y = to_coords(s0);
    for (long long step = 1; step <= n_steps; ++step) {
        rk4_in_place(y, g, cfg.dt);
        const double t = static_cast<double>(step) * cfg.dt;
        guard_psd(y.c, cfg.dt, t);
        if (step % cfg.output_stride == 0 || step == n_steps) {
            traj.times.push_back(t);
            traj.states.push_back(from_coords(y));
        }
    }
    return traj;
}

// ---------------------------------------------------------------- closed forms

namespace {

// Solution of
//   d alpha_k / dt = -i w_k alpha_k + zeta_k
//   d r_kk' / dt   = -i (w_k - conj(w_k')) r_kk' + delta_kk' gamma_up_k + alpha_k conj(zeta_k') + conj(alpha_k') zeta_k
// with complex frequencies w_k.  gamma_up_k enters through its steady
// population nbar_k = gamma_up_k / (-2 Im w_k) and the relaxation rate -2 Im w_k.
ReducedState driven_solution(const ReducedState& s0, const std::vector<Complex>& w, const ComplexVector& zeta,
                             const std::vector<double>& nbar, double t) {
    const std::size_t n = w.size();
    const ComplexVector& a0 = s0.alpha();

    ComplexVector alpha(n);
    std::vector<Complex> phase(n);  // e^{-i w_k t}
    for (std::size_t k = 0; k < n; ++k) {
        phase[k] = std::exp(-I * w[k] * t);
        alpha[k] = phase[k] * a0[k] - I * (zeta[k] / w[k]) * (1.0 - phase[k]);
    }

    Matrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t kp = 0; kp < n; ++kp) {
            const Complex wkp_c = std::conj(w[kp]);
            const Complex e_kk = std::exp(-I * (w[k] - wkp_c) * t);   // e^{-i(w_k - w_k'^*)t}
            const Complex e_kp = std::conj(phase[kp]);                // e^{i w_k'^* t}
            const Complex zz = zeta[k] * std::conj(zeta[kp]) / (w[k] * wkp_c);
            const Complex cross_k = a0[k] * std::conj(zeta[kp]) / wkp_c;
            const Complex cross_kp = std::conj(a0[kp]) * zeta[k] / w[k];

            Complex v = e_kk * (s0.r()(k, kp) + zz - I * cross_k + I * cross_kp);
            v += zz * (1.0 - phase[k] - e_kp);
            v += I * (cross_k * phase[k] - cross_kp * e_kp);
            if (k == kp && !nbar.empty()) v += nbar[k] * (1.0 - std::exp(2.0 * w[k].imag() * t));
            r(k, kp) = v;
        }
    }
    return make_state_unchecked(hermitize(r), std::move(alpha));
}

} // namespace

ReducedState closed_form_free(const ReducedState& s0, const ModeSet& m, double t) {
    require_match(s0, m.n_modes(), "closed_form_free");
    const std::size_t n = m.n_modes();
    Matrix r(n, n);
    ComplexVector alpha(n);
    for (std::size_t k = 0; k < n; ++k) {
        alpha[k] = std::exp(-I * m.omega(k) * t) * s0.alpha()[k];
        for (std::size_t kp = 0; kp < n; ++kp)
            r(k, kp) = std::exp(-I * (m.omega(k) - m.omega(kp)) * t) * s0.r()(k, kp);
    }
    return make_state_unchecked(hermitize(r), std::move(alpha));
}

ReducedState closed_form_coherent(const ReducedState& s0, const ModeSet& m, const ComplexVector& zeta, double t) {
    require_match(s0, m.n_modes(), "closed_form_coherent");
    if (zeta.size() != m.n_modes()) throw DimensionError("closed_form_coherent: zeta size != n_modes");
    std::vector<Complex> w(m.omegas().begin(), m.omegas().end());
    return driven_solution(s0, w, zeta, {}, t);
}

namespace {

void require_thermal_regime(const GeneratorSpec& g, const char* what) {
    if (!g.has_thermal_bath()) {
        throw UnsupportedRegimeError(std::string(what) + ": requires a thermal (diagonal) bath");
    }
    if (!g.scattering().empty()) {
        throw UnsupportedRegimeError(std::string(what) + ": closed forms exclude random scattering");
    }
}

std::vector<double> thermal_occupations(const GeneratorSpec& g) {
    const auto& m = g.modes();
    const double beta = g.bath()->beta();
    std::vector<double> nbar(m.n_modes());
    for (std::size_t k = 0; k < nbar.size(); ++k) nbar[k] = 1.0 / std::expm1(beta * m.hbar() * m.omega(k));
    return nbar;
}

} // namespace

std::vector<Complex> complex_frequencies(const GeneratorSpec& g) {
    require_thermal_regime(g, "complex_frequencies");
    const auto& m = g.modes();
    const double beta = g.bath()->beta();
    const auto& down = g.bath()->thermal_gamma_down();
    std::vector<Complex> w(m.n_modes());
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double z = partition_factor(beta, m.hbar(), m.omega(k));
        w[k] = Complex{m.omega(k), -down[k] / (2.0 * z)};
    }
    return w;
}

ReducedState closed_form_thermal(const ReducedState& s0, const GeneratorSpec& g, double t) {
    require_thermal_regime(g, "closed_form_thermal");
    require_match(s0, g.n_modes(), "closed_form_thermal");
    return driven_solution(s0, complex_frequencies(g), g.zeta(), thermal_occupations(g), t);
}

namespace {

void require_steady(const GeneratorSpec& g, const char* who) {
    require_thermal_regime(g, who);
    const auto& down = g.bath()->thermal_gamma_down();
    for (std::size_t k = 0; k < down.size(); ++k) {
        if (!(down[k] > 0.0)) {
            std::ostringstream os;
            os << who << ": no steady state, Gamma_down[" << k << "] = 0";
            throw DomainError(os.str());
        }
    }
}

} // namespace

ReducedState steady_state(const GeneratorSpec& g) {
    require_steady(g, "steady_state");
    const auto w = complex_frequencies(g);
    const auto nbar = thermal_occupations(g);
    const std::size_t n = g.n_modes();
    ComplexVector alpha(n);
    for (std::size_t k = 0; k < n; ++k) alpha[k] = -I * g.zeta()[k] / w[k];
    Matrix r = Matrix::outer(alpha, alpha);
    for (std::size_t k = 0; k < n; ++k) r(k, k) += nbar[k];
    return make_state_unchecked(hermitize(r), std::move(alpha));
}

CorrelationMatrix steady_correlation(const GeneratorSpec& g) {
    require_steady(g, "steady_correlation");
    const auto nbar = thermal_occupations(g);
    Matrix c = Matrix::zeros(g.n_modes());
    for (std::size_t k = 0; k < nbar.size(); ++k) c(k, k) = nbar[k];
    return CorrelationMatrix::from_matrix(hermitize(c));
}

} // namespace rsf
