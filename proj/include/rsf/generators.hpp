// generators.hpp: channels driving (r, alpha). Free Hamiltonian,
// coherent source zeta, bath (gamma_up / gamma_down), random scattering.

#pragma once

#include "rsf/numkernel.hpp"
#include "rsf/state.hpp"

#include <optional>
#include <vector>

namespace rsf {

class BathSpec {
public:
    enum class Kind { general, thermal };

    // Arbitrary PSD rate matrices (1/time).  Throws DomainError if either is not PSD.
    static BathSpec general(HermitianMatrix gamma_up, HermitianMatrix gamma_down);
    // Diagonal rates; Gamma_up^k = Gamma_down^k exp(-beta hbar omega_k) is derived
    // once the modes are known.  Throws DomainError unless beta > 0 and rates >= 0.
    static BathSpec thermal(std::vector<double> gamma_down, double beta);

    Kind kind() const noexcept { return kind_; }
    bool is_thermal() const noexcept { return kind_ == Kind::thermal; }
    // Only meaningful for thermal baths.
    double beta() const noexcept { return beta_; }
    const std::vector<double>& thermal_gamma_down() const noexcept { return gamma_down_diag_; }

    HermitianMatrix gamma_up(const ModeSet& modes) const;
    HermitianMatrix gamma_down(const ModeSet& modes) const;

private:
    BathSpec() = default;
    Kind kind_ = Kind::general;
    std::optional<HermitianMatrix> gamma_up_;
    std::optional<HermitianMatrix> gamma_down_;
    std::vector<double> gamma_down_diag_;
    double beta_ = 0.0;
};

struct ScatteringChannel {
    double weight = 0.0;  // 1/time
    Matrix u;             // single-particle unitary
};

// Finite mixture sum_j w_j (.) standing in for the measure mu(du).
class ScatteringSpec {
public:
    ScatteringSpec() = default;
    // Throws DomainError for negative weights or non-unitary matrices.
    explicit ScatteringSpec(std::vector<ScatteringChannel> channels);

    bool empty() const noexcept { return channels_.empty(); }
    const std::vector<ScatteringChannel>& channels() const noexcept { return channels_; }
    double total_weight() const noexcept;

private:
    std::vector<ScatteringChannel> channels_;
};

class GeneratorSpec {
public:
    // Throws DimensionError if zeta, the bath or a scattering unitary does not
    // match modes.n_modes().
    GeneratorSpec(ModeSet modes, ComplexVector zeta, std::optional<BathSpec> bath = std::nullopt,
                  ScatteringSpec scattering = {});

    const ModeSet& modes() const noexcept { return modes_; }
    std::size_t n_modes() const noexcept { return modes_.n_modes(); }
    const ComplexVector& zeta() const noexcept { return zeta_; }
    const std::optional<BathSpec>& bath() const noexcept { return bath_; }
    const ScatteringSpec& scattering() const noexcept { return scattering_; }

    // Zero matrices when there is no bath.
    const HermitianMatrix& gamma_up() const noexcept { return gamma_up_; }
    const HermitianMatrix& gamma_down() const noexcept { return gamma_down_; }
    // (gamma_up - gamma_down) / 2
    const Matrix& half_gain() const noexcept { return half_gain_; }

    bool has_thermal_bath() const noexcept { return bath_ && bath_->is_thermal(); }

    // Same generator with a different coherent source.
    GeneratorSpec with_zeta(ComplexVector zeta) const;

private:
    ModeSet modes_;
    ComplexVector zeta_;
    std::optional<BathSpec> bath_;
    ScatteringSpec scattering_;
    HermitianMatrix gamma_up_;
    HermitianMatrix gamma_down_;
    Matrix half_gain_;
};

// dr/dt = -(i/hbar)[h, r] + |zeta><alpha| + |alpha><zeta| + 1/2 {gamma_up - gamma_down, r}
//         + gamma_up + sum_j w_j (u_j r u_j^dagger - r)
HermitianMatrix rhs_r(const ReducedState& s, const GeneratorSpec& g);

// d|alpha>/dt = -(i/hbar) h|alpha> + |zeta> + 1/2 (gamma_up - gamma_down)|alpha> + sum_j w_j (u_j - 1)|alpha>
ComplexVector rhs_alpha(const ReducedState& s, const GeneratorSpec& g);

// Time derivative of r^alpha.  zeta never enters.
HermitianMatrix rhs_correlation(const ReducedState& s, const GeneratorSpec& g);

namespace detail {

// Unsymmetrized right-hand sides on raw matrices; the integrator works in
// (r^alpha, alpha) coordinates and calls these directly.
Matrix rhs_r_raw(const Matrix& r, const ComplexVector& alpha, const GeneratorSpec& g);
ComplexVector rhs_alpha_raw(const ComplexVector& alpha, const GeneratorSpec& g);
Matrix rhs_correlation_raw(const Matrix& c, const ComplexVector& alpha, const GeneratorSpec& g);

} // namespace detail

} // namespace rsf
