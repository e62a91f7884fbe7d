#include "rsf/generators.hpp"

#include "rsf/errors.hpp"

#include <cmath>
#include <sstream>

namespace rsf {

BathSpec BathSpec::general(HermitianMatrix gamma_up, HermitianMatrix gamma_down) {
    if (gamma_up.dim() != gamma_down.dim()) throw DimensionError("BathSpec: gamma_up and gamma_down differ in size");
    if (min_eigenvalue(gamma_up) < -kPsdTol) throw DomainError("BathSpec: gamma_up is not positive semi-definite");
    if (min_eigenvalue(gamma_down) < -kPsdTol) throw DomainError("BathSpec: gamma_down is not positive semi-definite");
    BathSpec b;
    b.kind_ = Kind::general;
    b.gamma_up_ = std::move(gamma_up);
    b.gamma_down_ = std::move(gamma_down);
    return b;
}

BathSpec BathSpec::thermal(std::vector<double> gamma_down, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("BathSpec: thermal bath needs finite beta > 0");
    for (double g : gamma_down)
        if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("BathSpec: gamma_down rates must be finite and >= 0");
    BathSpec b;
    b.kind_ = Kind::thermal;
    b.gamma_down_diag_ = std::move(gamma_down);
    b.beta_ = beta;
    return b;
}

HermitianMatrix BathSpec::gamma_down(const ModeSet& modes) const {
    if (kind_ == Kind::general) return *gamma_down_;
    if (gamma_down_diag_.size() != modes.n_modes()) throw DimensionError("BathSpec: gamma_down size != n_modes");
    return HermitianMatrix::diagonal(gamma_down_diag_);
}

HermitianMatrix BathSpec::gamma_up(const ModeSet& modes) const {
    if (kind_ == Kind::general) return *gamma_up_;
    if (gamma_down_diag_.size() != modes.n_modes()) throw DimensionError("BathSpec: gamma_down size != n_modes");
    // detailed balance
    std::vector<double> up(gamma_down_diag_.size());
    for (std::size_t k = 0; k < up.size(); ++k)
        up[k] = gamma_down_diag_[k] * std::exp(-beta_ * modes.hbar() * modes.omega(k));
    return HermitianMatrix::diagonal(up);
}

ScatteringSpec::ScatteringSpec(std::vector<ScatteringChannel> channels) : channels_(std::move(channels)) {
    for (std::size_t j = 0; j < channels_.size(); ++j) {
        const auto& ch = channels_[j];
        if (!(ch.weight >= 0.0) || !std::isfinite(ch.weight)) {
            std::ostringstream os;
            os << "ScatteringSpec: channel " << j << " has invalid weight " << ch.weight;
            throw DomainError(os.str());
        }
        if (!ch.u.square()) throw DimensionError("ScatteringSpec: unitary must be square");
        const double defect = unitarity_defect(ch.u);
        if (defect > kUnitaryTol) {
            std::ostringstream os;
            os << "ScatteringSpec: channel " << j << " is not unitary (||u^dagger u - 1||_F = " << defect << ")";
            throw DomainError(os.str());
        }
    }
}

double ScatteringSpec::total_weight() const noexcept {
    double s = 0.0;
    for (const auto& ch : channels_) s += ch.weight;
    return s;
}

GeneratorSpec::GeneratorSpec(ModeSet modes, ComplexVector zeta, std::optional<BathSpec> bath,
                             ScatteringSpec scattering)
    : modes_(std::move(modes)), zeta_(std::move(zeta)), bath_(std::move(bath)), scattering_(std::move(scattering)) {
    const std::size_t n = modes_.n_modes();
    if (zeta_.size() != n) {
        std::ostringstream os;
        os << "GeneratorSpec: zeta has " << zeta_.size() << " entries, expected " << n;
        throw DimensionError(os.str());
    }
    for (const auto& ch : scattering_.channels())
        if (ch.u.rows() != n) throw DimensionError("GeneratorSpec: scattering unitary size != n_modes");
    if (bath_) {
        gamma_up_ = bath_->gamma_up(modes_);
        gamma_down_ = bath_->gamma_down(modes_);
        if (gamma_up_.dim() != n) throw DimensionError("GeneratorSpec: bath rate matrices size != n_modes");
    } else {
        gamma_up_ = HermitianMatrix::zeros(n);
        gamma_down_ = HermitianMatrix::zeros(n);
    }
    half_gain_ = Complex{0.5} * (gamma_up_.matrix() - gamma_down_.matrix());
}

GeneratorSpec GeneratorSpec::with_zeta(ComplexVector zeta) const {
    return GeneratorSpec(modes_, std::move(zeta), bath_, scattering_);
}

namespace detail {

namespace {

// -(i/hbar)[h, m] + 1/2{gamma_up - gamma_down, m}, with h diagonal.
Matrix hamiltonian_and_anticommutator(const Matrix& m, const GeneratorSpec& g) {
    const std::size_t n = g.n_modes();
    const auto& w = g.modes().omegas();
    const Matrix& k = g.half_gain();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc = -I * (w[i] - w[j]) * m(i, j);
            for (std::size_t l = 0; l < n; ++l) acc += k(i, l) * m(l, j) + m(i, l) * k(l, j);
            out(i, j) = acc;
        }
    return out;
}

void add_gamma_up(Matrix& out, const GeneratorSpec& g) {
    const std::size_t n = g.n_modes();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) += g.gamma_up()(i, j);
}

// sum_j w_j (u m u^dagger - m)
void add_scattering(Matrix& out, const Matrix& m, const GeneratorSpec& g) {
    for (const auto& ch : g.scattering().channels()) {
        Matrix t = ch.u * m * ch.u.adjoint();
        t -= m;
        t *= ch.weight;
        out += t;
    }
}

} // namespace

Matrix rhs_r_raw(const Matrix& r, const ComplexVector& alpha, const GeneratorSpec& g) {
    const std::size_t n = g.n_modes();
    Matrix out = hamiltonian_and_anticommutator(r, g);
    const auto& z = g.zeta();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) += z[i] * std::conj(alpha[j]) + alpha[i] * std::conj(z[j]);
    add_gamma_up(out, g);
    add_scattering(out, r, g);
    return out;
}

ComplexVector rhs_alpha_raw(const ComplexVector& alpha, const GeneratorSpec& g) {
    const std::size_t n = g.n_modes();
    const auto& w = g.modes().omegas();
    const Matrix& k = g.half_gain();
    ComplexVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = -I * w[i] * alpha[i] + g.zeta()[i];
        for (std::size_t l = 0; l < n; ++l) acc += k(i, l) * alpha[l];
        out[i] = acc;
    }
    for (const auto& ch : g.scattering().channels()) {
        ComplexVector ua = ch.u * alpha;
        ua -= alpha;
        out += Complex{ch.weight} * ua;
    }
    return out;
}

Matrix rhs_correlation_raw(const Matrix& c, const ComplexVector& alpha, const GeneratorSpec& g) {
    Matrix out = hamiltonian_and_anticommutator(c, g);
    add_gamma_up(out, g);
    add_scattering(out, c, g);
    // sum_j w_j (u_j - 1)|alpha><alpha|(u_j^dagger - 1)
    for (const auto& ch : g.scattering().channels()) {
        ComplexVector d = ch.u * alpha;
        d -= alpha;
        Matrix t = Matrix::outer(d, d);
        t *= ch.weight;
        out += t;
    }
    return out;
}

} // namespace detail

namespace {

void require_match(const ReducedState& s, const GeneratorSpec& g, const char* what) {
    if (s.n_modes() != g.n_modes()) {
        std::ostringstream os;
        os << what << ": state has " << s.n_modes() << " modes, generator has " << g.n_modes();
        throw DimensionError(os.str());
    }
}

} // namespace

HermitianMatrix rhs_r(const ReducedState& s, const GeneratorSpec& g) {
    require_match(s, g, "rhs_r");
    return hermitize(detail::rhs_r_raw(s.r().matrix(), s.alpha(), g));
}

ComplexVector rhs_alpha(const ReducedState& s, const GeneratorSpec& g) {
    require_match(s, g, "rhs_alpha");
    return detail::rhs_alpha_raw(s.alpha(), g);
}

HermitianMatrix rhs_correlation(const ReducedState& s, const GeneratorSpec& g) {
    require_match(s, g, "rhs_correlation");
    const Matrix c = s.r().matrix() - Matrix::outer(s.alpha(), s.alpha());
    return hermitize(detail::rhs_correlation_raw(c, s.alpha(), g));
}

} // namespace rsf
