#include "rsf/fock.hpp"

#include "rsf/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rsf::fock {

std::size_t FockSpec::dimension() const {
    if (n_modes == 0) throw DomainError("FockSpec: n_modes must be >= 1");
    std::size_t dim = 1;
    for (std::size_t k = 0; k < n_modes; ++k) {
        dim *= cutoff + 1;
        if (dim > kMaxDimension) {
            std::ostringstream os;
            os << "FockSpec: (cutoff + 1)^n_modes = (" << cutoff + 1 << ")^" << n_modes << " exceeds the limit "
               << kMaxDimension;
            throw DomainError(os.str());
        }
    }
    return dim;
}

std::size_t FockSpec::occupation(std::size_t index, std::size_t k) const {
    const std::size_t base = cutoff + 1;
    for (std::size_t j = n_modes - 1; j > k; --j) index /= base;
    return index % base;
}

namespace {

std::vector<SparseLadder> sparse_ladders(const FockSpec& spec) {
    const std::size_t dim = spec.dimension();
    std::vector<SparseLadder> out(spec.n_modes);
    for (std::size_t k = 0; k < spec.n_modes; ++k) {
        std::size_t stride = 1;
        for (std::size_t j = k + 1; j < spec.n_modes; ++j) stride *= spec.cutoff + 1;
        auto& l = out[k];
        l.target.assign(dim, -1);
        l.value.assign(dim, 0.0);
        for (std::size_t col = 0; col < dim; ++col) {
            const std::size_t nk = spec.occupation(col, k);
            if (nk == 0) continue;
            l.target[col] = static_cast<std::ptrdiff_t>(col - stride);
            l.value[col] = std::sqrt(static_cast<double>(nk));
        }
    }
    return out;
}

Matrix dense(const SparseLadder& l) {
    const std::size_t dim = l.target.size();
    Matrix m(dim, dim);
    for (std::size_t col = 0; col < dim; ++col)
        if (l.target[col] >= 0) m(static_cast<std::size_t>(l.target[col]), col) = l.value[col];
    return m;
}

// a rho
void add_left(Matrix& out, const SparseLadder& a, const Matrix& rho, Complex w) {
    const std::size_t dim = rho.rows();
    for (std::size_t l = 0; l < dim; ++l) {
        if (a.target[l] < 0) continue;
        const auto row = static_cast<std::size_t>(a.target[l]);
        const Complex f = w * a.value[l];
        for (std::size_t j = 0; j < dim; ++j) out(row, j) += f * rho(l, j);
    }
}

// a^dagger rho
void add_left_dag(Matrix& out, const SparseLadder& a, const Matrix& rho, Complex w) {
    const std::size_t dim = rho.rows();
    for (std::size_t i = 0; i < dim; ++i) {
        if (a.target[i] < 0) continue;
        const auto src = static_cast<std::size_t>(a.target[i]);
        const Complex f = w * a.value[i];
        for (std::size_t j = 0; j < dim; ++j) out(i, j) += f * rho(src, j);
    }
}

// rho a
void add_right(Matrix& out, const Matrix& x, const SparseLadder& a, Complex w) {
    const std::size_t dim = x.rows();
    for (std::size_t j = 0; j < dim; ++j) {
        if (a.target[j] < 0) continue;
        const auto src = static_cast<std::size_t>(a.target[j]);
        const Complex f = w * a.value[j];
        for (std::size_t i = 0; i < dim; ++i) out(i, j) += f * x(i, src);
    }
}

SparseMatrix sparsify(const Matrix& m) {
    SparseMatrix out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != Complex{}) out.push_back({i, j, m(i, j)});
    return out;
}

// out += w S rho
void add_product(Matrix& out, const SparseMatrix& s, const Matrix& rho, Complex w) {
    const std::size_t dim = rho.cols();
    for (const auto& e : s) {
        const Complex f = w * e.value;
        for (std::size_t j = 0; j < dim; ++j) out(e.row, j) += f * rho(e.col, j);
    }
}

// out += w rho S
void add_product(Matrix& out, const Matrix& rho, const SparseMatrix& s, Complex w) {
    const std::size_t dim = rho.rows();
    for (const auto& e : s) {
        const Complex f = w * e.value;
        for (std::size_t i = 0; i < dim; ++i) out(i, e.col) += rho(i, e.row) * f;
    }
}

// rho a^dagger
void add_right_dag(Matrix& out, const Matrix& x, const SparseLadder& a, Complex w) {
    const std::size_t dim = x.rows();
    for (std::size_t l = 0; l < dim; ++l) {
        if (a.target[l] < 0) continue;
        const auto col = static_cast<std::size_t>(a.target[l]);
        const Complex f = w * a.value[l];
        for (std::size_t i = 0; i < dim; ++i) out(i, col) += f * x(i, l);
    }
}

} // namespace

std::vector<LadderPair> build_ladder_operators(const FockSpec& spec) {
    std::vector<LadderPair> out;
    for (const auto& l : sparse_ladders(spec)) {
        Matrix a = dense(l);
        Matrix ad = a.adjoint();
        out.push_back({std::move(a), std::move(ad)});
    }
    return out;
}

FockState::FockState(const FockSpec& spec, Matrix rho) : rho_(std::move(rho)) {
    const std::size_t dim = spec.dimension();
    if (rho_.rows() != dim || rho_.cols() != dim) throw DimensionError("FockState: rho does not match the Fock space");
    if (hermiticity_defect(rho_) > kHermitianTol) throw DomainError("FockState: rho is not Hermitian");
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "FockState: trace " << tr << " differs from 1";
        throw DomainError(os.str());
    }
}

FockState FockState::vacuum(const FockSpec& spec) {
    Matrix rho = Matrix::zeros(spec.dimension());
    rho(0, 0) = 1.0;
    return FockState(spec, std::move(rho));
}

Matrix unitary_log(const Matrix& u) {
    const auto n = static_cast<Eigen::Index>(u.rows());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = u(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    // u is normal, so its Schur form is diagonal: u = Q diag(e^{i theta}) Q^dagger.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m);
    const Eigen::MatrixXcd& q = schur.matrixU();
    const Eigen::MatrixXcd& t = schur.matrixT();
    Eigen::VectorXcd theta(n);
    for (Eigen::Index k = 0; k < n; ++k) theta(k) = std::arg(t(k, k));
    const Eigen::MatrixXcd b = q * theta.asDiagonal() * q.adjoint();
    Matrix out(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = b(i, j);
    return hermitize(out).matrix();
}

MasterEquation::MasterEquation(const GeneratorSpec& g, const FockSpec& spec)
    : spec_(spec), dim_(spec.dimension()), ladders_(sparse_ladders(spec)) {
    if (g.n_modes() != spec.n_modes) {
        std::ostringstream os;
        os << "MasterEquation: generator has " << g.n_modes() << " modes, Fock space has " << spec.n_modes;
        throw DimensionError(os.str());
    }
    const std::size_t n = spec.n_modes;
    energy_.assign(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < n; ++k) energy_[i] += g.modes().omega(k) * static_cast<double>(spec.occupation(i, k));

    std::vector<Matrix> a(n), ad(n);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = dense(ladders_[k]);
        ad[k] = a[k].adjoint();
    }

    Matrix drive = Matrix::zeros(dim_);
    for (std::size_t k = 0; k < n; ++k) {
        drive += g.zeta()[k] * ad[k];
        drive -= std::conj(g.zeta()[k]) * a[k];
    }
    drive_ = sparsify(drive);

    gamma_down_ = g.gamma_down().matrix();
    gamma_up_ = g.gamma_up().matrix();
    Matrix anti = Matrix::zeros(dim_);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t kp = 0; kp < n; ++kp) {
            if (gamma_down_(kp, k) != Complex{}) anti += gamma_down_(kp, k) * (ad[kp] * a[k]);
            if (gamma_up_(kp, k) != Complex{}) anti += gamma_up_(kp, k) * (a[k] * ad[kp]);
        }
    anti_ = sparsify(anti);

    std::vector<std::size_t> total(dim_, 0);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < n; ++k) total[i] += spec.occupation(i, k);

    for (const auto& ch : g.scattering().channels()) {
        const Matrix b = unitary_log(ch.u);
        Matrix lift_gen = Matrix::zeros(dim_);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t kp = 0; kp < n; ++kp)
                if (b(k, kp) != Complex{}) lift_gen += b(k, kp) * (ad[k] * a[kp]);
        const EigenSystem es = eig_hermitian(hermitize(lift_gen));
        Matrix lift = spectral_map(es, [](double x) { return std::exp(I * x); });
        // B conserves the total number, so U is block diagonal; drop the rounding noise between blocks.
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                if (total[i] != total[j]) lift(i, j) = 0.0;
        lifts_sparse_.push_back(sparsify(lift));
        lifts_.push_back(std::move(lift));
        weights_.push_back(ch.weight);
    }
}

Matrix MasterEquation::rhs(const Matrix& rho) const {
    const std::size_t n = spec_.n_modes;
    Matrix out(dim_, dim_);
    // -i [H, rho] / hbar with H diagonal
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(i, j) = -I * (energy_[i] - energy_[j]) * rho(i, j);

    // [D, rho]
    add_product(out, drive_, rho, 1.0);
    add_product(out, rho, drive_, -1.0);
    // -1/2 {A, rho}
    add_product(out, anti_, rho, -0.5);
    add_product(out, rho, anti_, -0.5);

    Matrix x(dim_, dim_);
    for (std::size_t k = 0; k < n; ++k) {
        // sum_k' G_down^{k'k} a_k rho a_k'^dagger
        bool any_down = false;
        for (std::size_t kp = 0; kp < n; ++kp) any_down = any_down || gamma_down_(kp, k) != Complex{};
        if (any_down) {
            x = Matrix::zeros(dim_);
            add_left(x, ladders_[k], rho, 1.0);
            for (std::size_t kp = 0; kp < n; ++kp)
                if (gamma_down_(kp, k) != Complex{}) add_right_dag(out, x, ladders_[kp], gamma_down_(kp, k));
        }
        // sum_k' G_up^{k k'} a_k^dagger rho a_k'   (relabelled from G_up^{k'k} a_k'^dagger rho a_k)
        bool any_up = false;
        for (std::size_t kp = 0; kp < n; ++kp) any_up = any_up || gamma_up_(k, kp) != Complex{};
        if (any_up) {
            x = Matrix::zeros(dim_);
            add_left_dag(x, ladders_[k], rho, 1.0);
            for (std::size_t kp = 0; kp < n; ++kp)
                if (gamma_up_(k, kp) != Complex{}) add_right(out, x, ladders_[kp], gamma_up_(k, kp));
        }
    }

    for (std::size_t j = 0; j < lifts_.size(); ++j) {
        Matrix ur(dim_, dim_);
        add_product(ur, lifts_sparse_[j], rho, 1.0);
        // (U rho) U^dagger: column c of U^dagger is the conjugate of row c of U.
        Matrix t(dim_, dim_);
        for (const SparseEntry& e : lifts_sparse_[j]) {
            const Complex v = std::conj(e.value);
            for (std::size_t i = 0; i < dim_; ++i) t(i, e.row) += ur(i, e.col) * v;
        }
        t -= rho;
        t *= weights_[j];
        out += t;
    }
    return out;
}

Matrix rhs_master(const FockState& rho, const GeneratorSpec& g, const FockSpec& spec) {
    return MasterEquation(g, spec).rhs(rho.rho());
}

ReducedState reduce(const Matrix& rho, const FockSpec& spec) {
    const auto ladders = sparse_ladders(spec);
    const std::size_t n = spec.n_modes;
    const std::size_t dim = rho.rows();
    ComplexVector alpha(n);
    for (std::size_t k = 0; k < n; ++k) {
        // Tr[rho a] = sum_j rho_{j, t(j)} a_{t(j), j}
        Complex s{};
        for (std::size_t j = 0; j < dim; ++j) {
            if (ladders[k].target[j] < 0) continue;
            s += ladders[k].value[j] * rho(j, static_cast<std::size_t>(ladders[k].target[j]));
        }
        alpha[k] = s;
    }
    Matrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        Matrix a_rho(dim, dim);  // a_k rho
        add_left(a_rho, ladders[k], rho, 1.0);
        for (std::size_t kp = 0; kp < n; ++kp) {
            // Tr[rho a_k'^dagger a_k] = Tr[a_k rho a_k'^dagger]
            Complex s{};
            for (std::size_t l = 0; l < dim; ++l) {
                if (ladders[kp].target[l] < 0) continue;
                const auto t = static_cast<std::size_t>(ladders[kp].target[l]);
                s += a_rho(t, l) * ladders[kp].value[l];
            }
            r(k, kp) = s;
        }
    }
    return make_state_unchecked(hermitize(r), std::move(alpha));
}

ReducedState reduce(const FockState& rho, const FockSpec& spec) { return reduce(rho.rho(), spec); }

double top_level_population(const Matrix& rho, const FockSpec& spec) {
    double worst = 0.0;
    for (std::size_t k = 0; k < spec.n_modes; ++k) {
        double p = 0.0;
        for (std::size_t i = 0; i < rho.rows(); ++i)
            if (spec.occupation(i, k) == spec.cutoff) p += rho(i, i).real();
        worst = std::max(worst, p);
    }
    return worst;
}

namespace {

Matrix rk4_step(const MasterEquation& eq, const Matrix& rho, double dt) {
    const Matrix k1 = eq.rhs(rho);
    const Matrix k2 = eq.rhs(rho + Complex{0.5 * dt} * k1);
    const Matrix k3 = eq.rhs(rho + Complex{0.5 * dt} * k2);
    const Matrix k4 = eq.rhs(rho + Complex{dt} * k3);
    Matrix next = rho;
    next += Complex{dt / 6.0} * (k1 + Complex{2.0} * k2 + Complex{2.0} * k3 + k4);
    return hermitize(next).matrix();
}

double deviation(const ReducedState& a, const ReducedState& b) {
    return frobenius_norm(a.r().matrix() - b.r().matrix());
}

} // namespace

DeviationReport compare_trajectories(const ReducedState& s0, const GeneratorSpec& g, const FockSpec& spec,
                                     const SimulationConfig& cfg) {
    cfg.validate();
    if (frobenius_norm(s0.r().matrix()) != 0.0 || s0.alpha().norm2() != 0.0) {
        throw DomainError("compare_trajectories: the initial state must be the vacuum");
    }
    if (spec.n_modes != g.n_modes()) throw DimensionError("compare_trajectories: Fock space and generator differ in modes");

    const Trajectory rsf_traj = evolve(s0, g, cfg);
    const MasterEquation eq(g, spec);
    Matrix rho = FockState::vacuum(spec).rho();

    DeviationReport rep;
    const long long n_steps = cfg.t_final > 0.0 ? std::max(1LL, std::llround(cfg.t_final / cfg.dt)) : 0LL;
    std::size_t record = 0;
    auto check = [&](double t) {
        const double top = top_level_population(rho, spec);
        rep.max_top_population = std::max(rep.max_top_population, top);
        if (top > kOverflowPopulation) {
            std::ostringstream os;
            os << "cutoff overflow at t = " << t << ": population " << top << " at occupation " << spec.cutoff
               << " exceeds " << kOverflowPopulation << "; raise the cutoff or weaken the drive";
            throw InvalidComparisonError(os.str());
        }
        rep.max_trace_drift = std::max(rep.max_trace_drift, std::abs(rho.trace().real() - 1.0));
        const ReducedState oracle = reduce(rho, spec);
        const ReducedState& model = rsf_traj.states.at(record);
        rep.max_r_deviation = std::max(rep.max_r_deviation, deviation(model, oracle));
        rep.max_alpha_deviation = std::max(rep.max_alpha_deviation, norm(model.alpha() - oracle.alpha()));
        ++rep.samples;
        ++record;
    };

    check(0.0);
    for (long long step = 1; step <= n_steps; ++step) {
        rho = rk4_step(eq, rho, cfg.dt);
        if (step % cfg.output_stride == 0 || step == n_steps) check(static_cast<double>(step) * cfg.dt);
    }
    rep.final_rsf = rsf_traj.states.back();
    rep.final_oracle = reduce(rho, spec);
    rep.min_rho_eigenvalue = min_eigenvalue(hermitize(rho));
    return rep;
}

} // namespace rsf::fock
