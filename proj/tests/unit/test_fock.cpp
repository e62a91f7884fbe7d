#include "rsf/errors.hpp"
#include "rsf/fock.hpp"
#include "rsf/integrator.hpp"
#include "testing.hpp"

#include <doctest.h>

#include <cmath>

using namespace rsf;
using namespace rsf::testing;
using namespace rsf::fock;

namespace {

Matrix random_density(std::size_t dim) {
    Matrix rho = random_psd(dim).matrix();
    rho *= Complex{1.0 / rho.trace().real()};
    return rho;
}

Matrix rk4(const MasterEquation& eq, Matrix rho, double dt, int steps) {
    for (int i = 0; i < steps; ++i) {
        const Matrix k1 = eq.rhs(rho);
        const Matrix k2 = eq.rhs(rho + Complex{0.5 * dt} * k1);
        const Matrix k3 = eq.rhs(rho + Complex{0.5 * dt} * k2);
        const Matrix k4 = eq.rhs(rho + Complex{dt} * k3);
        rho += Complex{dt / 6.0} * (k1 + Complex{2.0} * k2 + Complex{2.0} * k3 + k4);
    }
    return rho;
}

SimulationConfig sim(double dt, double t_final, int stride) {
    SimulationConfig c;
    c.dt = dt;
    c.t_final = t_final;
    c.output_stride = stride;
    return c;
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("dimension and occupation digits") {
    const FockSpec s{2, 3};
    CHECK(s.dimension() == 16);
    // index = n0 * 4 + n1
    CHECK(s.occupation(9, 0) == 2);
    CHECK(s.occupation(9, 1) == 1);
    CHECK_THROWS_AS((FockSpec{3, 20}.dimension()), DomainError);
    CHECK((FockSpec{2, 63}.dimension()) == 4096);
}

TEST_CASE("ladder operators for one mode at cutoff 2") {
    const auto lad = build_ladder_operators(FockSpec{1, 2});
    REQUIRE(lad.size() == 1);
    const Matrix expected{{0.0, 1.0, 0.0}, {0.0, 0.0, std::sqrt(2.0)}, {0.0, 0.0, 0.0}};
    CHECK(max_abs(lad[0].a - expected) == 0.0);
    CHECK(max_abs(lad[0].a_dag - expected.adjoint()) == 0.0);
}

TEST_CASE("number operator and truncated commutator") {
    const std::size_t cutoff = 6;
    const auto lad = build_ladder_operators(FockSpec{1, cutoff});
    const Matrix n = lad[0].a_dag * lad[0].a;
    for (std::size_t i = 0; i <= cutoff; ++i) CHECK(n(i, i).real() == doctest::Approx(static_cast<double>(i)));
    const Matrix comm = lad[0].a * lad[0].a_dag - lad[0].a_dag * lad[0].a;
    Matrix expected = Matrix::identity(cutoff + 1);
    expected(cutoff, cutoff) = -static_cast<double>(cutoff);
    CHECK(max_abs(comm - expected) <= 1e-14);
}

TEST_CASE("ladder operators on different modes commute") {
    const auto lad = build_ladder_operators(FockSpec{2, 3});
    CHECK(max_abs(lad[0].a * lad[1].a_dag - lad[1].a_dag * lad[0].a) <= 1e-14);
    CHECK(max_abs(lad[0].a * lad[1].a - lad[1].a * lad[0].a) <= 1e-14);
}

TEST_CASE("FockState validation") {
    const FockSpec s{1, 3};
    CHECK_NOTHROW(FockState::vacuum(s));
    CHECK_THROWS_AS(FockState(s, Matrix::identity(4)), DomainError);
    Matrix nonherm = Matrix::zeros(4);
    nonherm(0, 0) = 1.0;
    nonherm(0, 1) = 0.5;
    CHECK_THROWS_AS(FockState(s, nonherm), DomainError);
    CHECK_THROWS_AS(FockState(s, Matrix::identity(3)), DimensionError);
}

TEST_CASE("master equation: Hamiltonian leaves the vacuum alone") {
    const FockSpec s{2, 3};
    const GeneratorSpec g(ModeSet({1.0, 2.0}), ComplexVector(2));
    CHECK(max_abs(rhs_master(FockState::vacuum(s), g, s)) == 0.0);
}

TEST_CASE("master equation: a warm bath populates |1> at rate Gamma_up") {
    const FockSpec s{1, 4};
    const GeneratorSpec g(ModeSet({1.0}), ComplexVector(1), BathSpec::thermal({0.5}, 1.0));
    const Matrix d = rhs_master(FockState::vacuum(s), g, s);
    const double up = 0.5 * std::exp(-1.0);
    CHECK(d(1, 1).real() == doctest::Approx(up).epsilon(1e-15));
    CHECK(d(0, 0).real() == doctest::Approx(-up).epsilon(1e-15));
}

TEST_CASE("master equation preserves the trace for every channel") {
    const FockSpec s{2, 3};
    const ModeSet m({0.8, 1.7});
    const GeneratorSpec g(m, random_vector(2, 0.3), BathSpec::general(random_psd(2, 0.3), random_psd(2, 0.5)),
                          ScatteringSpec({{0.3, random_unitary(2)}, {0.1, random_unitary(2)}}));
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix rho = random_density(s.dimension());
        const Matrix d = rhs_master(FockState(s, rho), g, s);
        CHECK(std::abs(d.trace()) <= 1e-13);
        CHECK(hermiticity_defect(d) <= 1e-13);
    }
}

TEST_CASE("reduce: vacuum and one-quantum states") {
    const FockSpec s{1, 4};
    const auto v = reduce(FockState::vacuum(s), s);
    CHECK(max_abs(v.r().matrix()) == 0.0);
    CHECK(v.alpha().norm2() == 0.0);
    Matrix one = Matrix::zeros(5);
    one(1, 1) = 1.0;
    const auto r1 = reduce(FockState(s, one), s);
    CHECK(r1.r()(0, 0).real() == doctest::Approx(1.0));
    CHECK(r1.alpha().norm2() == 0.0);

    // Two modes: |n0 = 0, n1 = 2> has r = diag(0, 2).
    const FockSpec s2{2, 3};
    Matrix two = Matrix::zeros(16);
    two(2, 2) = 1.0;
    const auto r2 = reduce(FockState(s2, two), s2);
    CHECK(r2.r()(0, 0).real() == doctest::Approx(0.0));
    CHECK(r2.r()(1, 1).real() == doctest::Approx(2.0));
}

TEST_CASE("a short drive displaces the vacuum along the closed-form amplitude") {
    const FockSpec s{1, 10};
    const ModeSet m({1.0});
    const ComplexVector zeta{Complex{0.05, 0.03}};
    const GeneratorSpec g(m, zeta);
    const Matrix rho = rk4(MasterEquation(g, s), FockState::vacuum(s).rho(), 0.01, 150);
    const auto red = reduce(rho, s);
    const auto cf = closed_form_coherent(ReducedState::vacuum(1), m, zeta, 1.5);
    CHECK(distance(red.alpha(), cf.alpha()) <= 1e-4);
    CHECK(distance(red.r().matrix(), cf.r().matrix()) <= 1e-4);
}

TEST_CASE("reduced moments of the oracle obey the reduced equations") {
    const FockSpec s{2, 8};
    const ModeSet m({1.0, 1.4});
    const Matrix bs{{std::sqrt(0.5), std::sqrt(0.5)}, {-std::sqrt(0.5), std::sqrt(0.5)}};
    const GeneratorSpec g(m, ComplexVector{Complex{0.05, 0.0}, Complex{0.0, 0.04}},
                          BathSpec::general(HermitianMatrix::diagonal(std::vector<double>{0.02, 0.01}),
                                            HermitianMatrix::diagonal(std::vector<double>{0.3, 0.4})),
                          ScatteringSpec({{0.2, bs}}));
    const MasterEquation eq(g, s);
    const double dt = 0.01;
    const Matrix rho0 = rk4(eq, FockState::vacuum(s).rho(), dt, 100);
    const double h = 1e-3;
    const Matrix rho_p = rk4(eq, rho0, h, 1);
    const Matrix rho_m = rk4(eq, rho0, -h, 1);
    const auto r0 = reduce(rho0, s);
    const auto rp = reduce(rho_p, s);
    const auto rm = reduce(rho_m, s);
    Matrix fd_r = rp.r().matrix() - rm.r().matrix();
    fd_r *= Complex{1.0 / (2.0 * h)};
    ComplexVector fd_a = rp.alpha() - rm.alpha();
    fd_a *= Complex{1.0 / (2.0 * h)};
    CHECK(frobenius_norm(fd_r - rhs_r(r0, g).matrix()) <= 1e-6);
    CHECK(norm(fd_a - rhs_alpha(r0, g)) <= 1e-6);
}

TEST_CASE("unitary logarithm inverts the exponential") {
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix u = random_unitary(3);
        const Matrix b = unitary_log(u);
        CHECK(hermiticity_defect(b) <= 1e-12);
        const auto es = eig_hermitian(hermitize(b));
        CHECK(es.values.front() > -M_PI - 1e-12);
        CHECK(es.values.back() <= M_PI + 1e-12);
        const Matrix back = spectral_map(es, [](double x) { return std::exp(I * x); });
        CHECK(frobenius_norm(back - u) <= 1e-12);
    }
}

TEST_CASE("lifted unitaries act as u on the one-particle sector") {
    const FockSpec s{2, 3};
    const Matrix u = random_unitary(2);
    const GeneratorSpec g(ModeSet({1.0, 2.0}), ComplexVector(2), std::nullopt, ScatteringSpec({{0.1, u}}));
    const MasterEquation eq(g, s);
    const Matrix& U = eq.lifted_unitaries().at(0);
    CHECK(unitarity_defect(U) <= 1e-12);
    // |k> = a_k^dagger |0>; index of |1,0> is 4, of |0,1> is 1.
    const std::size_t idx[2] = {4, 1};
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t kp = 0; kp < 2; ++kp) CHECK(std::abs(U(idx[k], idx[kp]) - u(k, kp)) <= 1e-12);
    CHECK(std::abs(U(0, 0) - 1.0) <= 1e-12);
}

TEST_CASE("top-level population and overflow guard") {
    const FockSpec s{1, 3};
    Matrix rho = Matrix::zeros(4);
    rho(0, 0) = 0.9;
    rho(3, 3) = 0.1;
    CHECK(top_level_population(rho, s) == doctest::Approx(0.1));
    const GeneratorSpec strong(ModeSet({1.0}), ComplexVector{2.0});
    CHECK_THROWS_AS(compare_trajectories(ReducedState::vacuum(1), strong, s, sim(0.01, 3.0, 10)),
                    InvalidComparisonError);
}

TEST_CASE("comparison requires a vacuum start and matching modes") {
    const GeneratorSpec g(ModeSet({1.0}), ComplexVector(1));
    CHECK_THROWS_AS(compare_trajectories(ReducedState::coherent(ComplexVector{0.1}), g, FockSpec{1, 4}, sim(0.1, 1.0, 1)),
                    DomainError);
    CHECK_THROWS_AS(compare_trajectories(ReducedState::vacuum(1), g, FockSpec{2, 4}, sim(0.1, 1.0, 1)),
                    DimensionError);
}

TEST_CASE("Hamiltonian-only comparison stays identically zero") {
    const GeneratorSpec g(ModeSet({1.0, 2.0}), ComplexVector(2));
    const auto rep = compare_trajectories(ReducedState::vacuum(2), g, FockSpec{2, 3}, sim(0.05, 2.0, 4));
    CHECK(rep.max_r_deviation == 0.0);
    CHECK(rep.max_alpha_deviation == 0.0);
    CHECK(rep.samples == 11);
    CHECK(rep.passed(1e-15));
}

TEST_CASE("weak drive: oracle and reduced model agree to 1e-6") {
    const GeneratorSpec g(ModeSet({1.0}), ComplexVector{0.1});
    const auto rep = compare_trajectories(ReducedState::vacuum(1), g, FockSpec{1, 10}, sim(1e-3, 5.0, 50));
    CHECK(rep.max_r_deviation <= 1e-6);
    CHECK(rep.max_alpha_deviation <= 1e-6);
    CHECK(rep.max_trace_drift <= 1e-8);
    CHECK(rep.min_rho_eigenvalue >= -1e-8);
}

TEST_CASE("thermal bath: steady occupation matches Bose-Einstein") {
    const GeneratorSpec g(ModeSet({1.0}), ComplexVector(1), BathSpec::thermal({0.5}, 2.0));
    const auto rep = compare_trajectories(ReducedState::vacuum(1), g, FockSpec{1, 10}, sim(0.01, 30.0, 100));
    const double nbar = 0.15651764274966565;
    CHECK(std::abs(rep.final_rsf.r()(0, 0).real() - nbar) <= 1e-4);
    CHECK(std::abs(rep.final_oracle.r()(0, 0).real() - nbar) <= 1e-4);
    CHECK(rep.max_r_deviation <= 1e-4);
    CHECK(rep.max_trace_drift <= 1e-8);
    CHECK(rep.min_rho_eigenvalue >= -1e-8);
}

}  // TEST_SUITE
