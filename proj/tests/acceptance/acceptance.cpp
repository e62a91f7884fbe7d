// Acceptance suite: one PASS/FAIL line per criterion, runtime budget included.
// Usage: rsf_acceptance <path to rsf binary>

#include "rsf/fock.hpp"
#include "rsf/integrator.hpp"
#include "rsf/thermo.hpp"
#include "testing.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace rsf;
using namespace rsf::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// (n + 1) ln(n + 1) - n ln n in long double, n = 1 / (exp(beta omega) - 1).
long double mode_entropy_ld(long double beta, long double omega) {
    const long double n = 1.0L / std::expm1(beta * omega);
    return (n + 1.0L) * std::log1p(n) - n * std::log(n);
}

GeneratorSpec thermal_generator(const std::vector<double>& omega, ComplexVector zeta, std::vector<double> down,
                                double beta) {
    const ModeSet m(omega);
    return GeneratorSpec(m, std::move(zeta), BathSpec::thermal(std::move(down), beta));
}

// ---------------------------------------------------------------------------

Outcome entropy_axioms() {
    Outcome out;
    double worst_invariance = 0.0, worst_additivity = 0.0;
    int negatives = 0, zero_mismatch = 0;
    const int total = 1000;
    for (int trial = 0; trial < total; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
        HermitianMatrix m = hermitize(Matrix::zeros(n));
        bool is_zero = false;
        if (trial % 10 == 0) {
            // exact zeros: either literally or the correlation matrix of a coherent state
            is_zero = true;
            if (trial % 20 != 0) m = correlation_matrix(ReducedState::coherent(random_vector(n))).matrix();
        } else {
            const double scale = std::pow(10.0, uniform(-6.0, 2.0));
            const std::size_t rank = 1 + static_cast<std::size_t>(trial % static_cast<int>(n));
            m = random_psd(n, scale, rank);
        }
        const CorrelationMatrix c = CorrelationMatrix::from_matrix(m);
        const double s = entropy(c);
        if (!(s >= 0.0)) ++negatives;
        const bool zero_norm = frobenius_norm(c.matrix().matrix()) == 0.0;
        if ((s <= 1e-12) != zero_norm || zero_norm != is_zero) ++zero_mismatch;

        const Matrix u = random_unitary(n);
        const double su = entropy(CorrelationMatrix::from_matrix(hermitize(u * m.matrix() * u.adjoint())));
        worst_invariance = std::max(worst_invariance, std::abs(su - s));

        const std::size_t n2 = 1 + static_cast<std::size_t>(trial % static_cast<int>(9 - n > 0 ? 9 - n : 1));
        if (n + n2 <= 8) {
            const HermitianMatrix m2 = random_psd(n2, std::pow(10.0, uniform(-3.0, 1.0)));
            Matrix block = Matrix::zeros(n + n2);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) block(i, j) = m(i, j);
            for (std::size_t i = 0; i < n2; ++i)
                for (std::size_t j = 0; j < n2; ++j) block(n + i, n + j) = m2(i, j);
            const double joint = entropy(CorrelationMatrix::from_matrix(hermitize(block)));
            const double parts = s + entropy(CorrelationMatrix::from_matrix(m2));
            worst_additivity = std::max(worst_additivity, std::abs(joint - parts));
        }
    }
    out.ok = negatives == 0 && zero_mismatch == 0 && worst_invariance <= 1e-10 && worst_additivity <= 1e-10;
    out.detail = std::to_string(total) + " matrices, negative S: " + std::to_string(negatives) +
                 ", zero-iff violations: " + std::to_string(zero_mismatch) +
                 ", unitary invariance " + fmt(worst_invariance) + ", block additivity " + fmt(worst_additivity);
    return out;
}

// ---------------------------------------------------------------------------

struct Draw {
    ReducedState s0;
    GeneratorSpec g;
    std::function<ReducedState(double)> exact;
    double period;
};

Draw draw_regime(int regime) {
    const std::vector<double> w = random_omegas(2, 1.5, 4.0);
    const ModeSet m(w);
    const ReducedState s0 = random_state(2, 0.5);
    const double period = 2.0 * kPi / std::min(w[0], w[1]);
    if (regime == 0) {
        GeneratorSpec g(m, ComplexVector(2));
        return {s0, g, [s0, m](double t) { return closed_form_free(s0, m, t); }, period};
    }
    const ComplexVector zeta = random_vector(2, 0.4);
    if (regime == 1) {
        GeneratorSpec g(m, zeta);
        return {s0, g, [s0, m, zeta](double t) { return closed_form_coherent(s0, m, zeta, t); }, period};
    }
    GeneratorSpec g = thermal_generator(w, zeta, {uniform(0.1, 1.0), uniform(0.1, 1.0)}, uniform(0.5, 2.0));
    return {s0, g, [s0, g](double t) { return closed_form_thermal(s0, g, t); }, period};
}

ReducedState run_to(const ReducedState& s0, const GeneratorSpec& g, double dt, double t) {
    SimulationConfig cfg;
    cfg.dt = dt;
    cfg.t_final = t;
    cfg.output_stride = 1 << 30;
    return evolve(s0, g, cfg).states.back();
}

Outcome closed_forms() {
    Outcome out;
    const char* names[] = {"free", "coherent", "thermal"};
    double worst = 0.0, ratio_lo = 1e300, ratio_hi = 0.0;
    std::ostringstream os;
    for (int regime = 0; regime < 3; ++regime) {
        double worst_regime = 0.0;
        for (int d = 0; d < 10; ++d) {
            const Draw dr = draw_regime(regime);
            // ten slow periods, rounded up so that both coarse steps land on the horizon exactly
            const double t_final = std::ceil(10.0 * dr.period / 0.05) * 0.05;
            SimulationConfig cfg;
            cfg.dt = 1e-4;
            cfg.t_final = t_final;
            cfg.output_stride = static_cast<int>(std::ceil(t_final / cfg.dt / 20.0));
            const Trajectory tr = evolve(dr.s0, dr.g, cfg);
            for (std::size_t i = 0; i < tr.states.size(); ++i)
                worst_regime = std::max(worst_regime, distance(tr.states[i], dr.exact(tr.times[i])));

            const ReducedState exact = dr.exact(tr.times.back());
            const double e1 = distance(run_to(dr.s0, dr.g, 0.05, t_final), exact);
            const double e2 = distance(run_to(dr.s0, dr.g, 0.025, t_final), exact);
            const double ratio = e1 / e2;
            ratio_lo = std::min(ratio_lo, ratio);
            ratio_hi = std::max(ratio_hi, ratio);
        }
        worst = std::max(worst, worst_regime);
        os << names[regime] << " " << fmt(worst_regime) << ", ";
    }
    out.ok = worst <= 1e-7 && ratio_lo >= 12.0 && ratio_hi <= 20.0;
    out.detail = "max deviation at dt 1e-4: " + os.str() + "order factor in [" + fmt(ratio_lo) + ", " +
                 fmt(ratio_hi) + "]";
    return out;
}

// ---------------------------------------------------------------------------

Outcome steady_states() {
    Outcome out;
    double worst_alpha = 0.0, worst_c = 0.0, worst_zeta = 0.0;
    for (int d = 0; d < 5; ++d) {
        const std::vector<double> w = random_omegas(2, 0.5, 3.0);
        const double beta = uniform(0.5, 2.0);
        const std::vector<double> down{uniform(0.5, 1.5), uniform(0.5, 1.5)};
        const GeneratorSpec g = thermal_generator(w, random_vector(2, 0.5), down, beta);
        // amplitudes relax at Gamma_down / 2Z, the slowest of which sets the horizon
        double slowest = 0.0;
        for (std::size_t k = 0; k < 2; ++k)
            slowest = std::max(slowest, 2.0 * partition_factor(beta, 1.0, w[k]) / down[k]);
        const ReducedState s = run_to(random_state(2, 0.5), g, 0.02, 40.0 * slowest);

        const auto wt = complex_frequencies(g);
        ComplexVector alpha(2);
        for (std::size_t k = 0; k < 2; ++k) alpha[k] = -I * g.zeta()[k] / wt[k];
        worst_alpha = std::max(worst_alpha, norm(s.alpha() - alpha));
        Matrix be = Matrix::zeros(2);
        for (std::size_t k = 0; k < 2; ++k) be(k, k) = 1.0 / std::expm1(beta * w[k]);
        worst_c = std::max(worst_c, frobenius_norm(correlation_matrix(s).matrix().matrix() - be));

        // the matrix the steady command reports, swept over zeta from 1e-2 to 1e2
        const Matrix c0 = steady_correlation(g).matrix().matrix();
        for (int z = 0; z < 5; ++z) {
            const GeneratorSpec other = g.with_zeta(random_vector(2, std::pow(10.0, z - 2.0)));
            worst_zeta = std::max(worst_zeta, max_abs(steady_correlation(other).matrix().matrix() - c0));
        }
    }
    out.ok = worst_alpha <= 1e-6 && worst_c <= 1e-6 && worst_zeta <= 1e-12;
    out.detail = "alpha " + fmt(worst_alpha) + ", correlation " + fmt(worst_c) + ", zeta dependence " +
                 fmt(worst_zeta);
    return out;
}

// ---------------------------------------------------------------------------

Outcome quasi_static() {
    Outcome out;
    const double betas[] = {0.5, 1.0, 2.0, 4.0};
    const double omegas[] = {0.5, 1.0, 2.0, 3.0, 5.0};
    const double downs[] = {0.1, 0.5, 1.0, 2.0};
    double worst = 0.0, smallest_heat = 1e300;
    int count = 0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            const double beta = betas[i], omega = omegas[j], down = downs[(i + j) % 4];
            // the bath sits at another temperature so that heat actually flows
            const GeneratorSpec g = thermal_generator({omega}, random_vector(1, 0.3), {down}, 0.6 * beta);
            const ModeSet& m = g.modes();
            const ReducedState s = thermal_state(beta, m, random_vector(1, 0.5));
            const double q = heat_rate(s, g, m);
            const EntropyRate ds = entropy_rate(s, g);
            worst = std::max(worst, ds.singular ? 1e300 : std::abs(ds.value - m.kB() * beta * q));
            smallest_heat = std::min(smallest_heat, std::abs(q));
            ++count;
        }
    out.ok = count == 20 && worst <= 1e-10;
    out.detail = std::to_string(count) + " triples, max |dS/dt - kB beta dQ/dt| " + fmt(worst) +
                 ", smallest |dQ/dt| " + fmt(smallest_heat);
    return out;
}

// ---------------------------------------------------------------------------

Outcome first_law() {
    Outcome out;
    double worst = 0.0;
    int points = 0;
    for (int d = 0; d < 10; ++d) {
        const std::vector<double> w = random_omegas(2);
        std::optional<BathSpec> bath;
        if (d % 2 == 0) {
            bath = BathSpec::thermal({uniform(0.1, 1.0), uniform(0.1, 1.0)}, uniform(0.5, 2.0));
        } else {
            bath = BathSpec::general(random_psd(2, 0.3), random_psd(2, 0.8));
        }
        const GeneratorSpec g(ModeSet(w), ComplexVector(2), bath);
        SimulationConfig cfg;
        cfg.dt = 2.5e-4;
        cfg.t_final = 5.0;
        cfg.output_stride = 1;
        const Trajectory tr = evolve(random_state(2), g, cfg);
        for (std::size_t i = 1; i + 1 < tr.states.size(); i += 29) {
            const double du = (internal_energy(tr.states[i + 1], g.modes()) -
                               internal_energy(tr.states[i - 1], g.modes())) /
                              (tr.times[i + 1] - tr.times[i - 1]);
            worst = std::max(worst, std::abs(du - heat_rate(tr.states[i], g, g.modes())));
            ++points;
        }
    }
    out.ok = worst <= 1e-6;
    out.detail = "10 trajectories (thermal and general baths), " + std::to_string(points) +
                 " points, max |dU/dt - dQ/dt| " + fmt(worst);
    return out;
}

// ---------------------------------------------------------------------------

Outcome drive_independence() {
    Outcome out;
    double worst_s = 0.0, worst_c = 0.0;
    for (int d = 0; d < 10; ++d) {
        const ModeSet m(random_omegas(3));
        const ReducedState s0 = random_state(3, 0.5);
        const GeneratorSpec g1(m, random_vector(3, uniform(0.0, 0.4)));
        const GeneratorSpec g2 = g1.with_zeta(random_vector(3, uniform(0.0, 0.4)));
        SimulationConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_final = 10.0;
        cfg.output_stride = 100;
        const Trajectory a = evolve(s0, g1, cfg);
        const Trajectory b = evolve(s0, g2, cfg);
        const double s_ref = entropy(correlation_matrix(s0));
        for (std::size_t i = 0; i < a.states.size(); ++i) {
            const CorrelationMatrix ca = correlation_matrix(a.states[i]);
            worst_s = std::max(worst_s, std::abs(entropy(ca) - s_ref));
            worst_c = std::max(worst_c, frobenius_norm(ca.matrix().matrix() -
                                                       correlation_matrix(b.states[i]).matrix().matrix()));
        }
    }
    out.ok = worst_s <= 1e-9 && worst_c <= 1e-14;
    out.detail = "max |S(t) - S(0)| " + fmt(worst_s) + ", max correlation difference under zeta swap " + fmt(worst_c);
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> read_csv(const std::filesystem::path& p, std::vector<std::string>& header) {
    std::ifstream in(p);
    std::string line;
    std::vector<std::vector<double>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) {
            if (first) header.push_back(cell);
            else row.push_back(std::stod(cell));
        }
        if (!first) rows.push_back(row);
        first = false;
    }
    return rows;
}

Outcome figure_sweep(const std::string& binary) {
    Outcome out;
    const auto csv = std::filesystem::temp_directory_path() / "rsf_acceptance_sweep.csv";
    std::filesystem::remove(csv);
    const std::string cmd = "\"" + binary + "\" sweep-entropy --beta-min 0.1 --beta-max 5 --steps 50 --omega 0.5,1,2,4 --output \"" +
                            csv.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (status != 0) return {false, "sweep-entropy exited with status " + std::to_string(status)};
    std::vector<std::string> header;
    const auto rows = read_csv(csv, header);
    if (rows.size() != 50 || header.size() != 5) return {false, "unexpected CSV shape"};

    int violations = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 2; j < 5; ++j)
            if (!(rows[i][j] < rows[i][j - 1])) ++violations;
        if (i > 0)
            for (std::size_t j = 1; j < 5; ++j)
                if (!(rows[i][j] < rows[i - 1][j])) ++violations;
    }
    // beta = 1 sits at index 9 of the inclusive linspace; omega = 1 is column 2
    const double beta = rows[9][0];
    const double spot = rows[9][2];
    const double oracle = static_cast<double>(mode_entropy_ld(beta, 1.0L));
    const double dev = std::abs(spot - oracle);
    out.ok = violations == 0 && std::abs(beta - 1.0) <= 1e-12 && dev <= 1e-5;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "monotonicity violations: %d, S(beta=1, omega=1) = %.10f, oracle %.10f, |diff| %s "
                  "(quoted 1.040605 differs from the oracle by %.2g)",
                  violations, spot, oracle, fmt(dev).c_str(), std::abs(1.040605 - oracle));
    out.detail = buf;
    std::filesystem::remove(csv);
    return out;
}

// ---------------------------------------------------------------------------

Outcome fock_oracle() {
    Outcome out;
    std::ostringstream os;
    bool ok = true;

    {  // weak drive
        const GeneratorSpec g(ModeSet({1.0}), ComplexVector{Complex{0.1, 0.0}});
        SimulationConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_final = 5.0;
        cfg.output_stride = 100;
        const auto rep = fock::compare_trajectories(ReducedState::vacuum(1), g, fock::FockSpec{1, 10}, cfg);
        const double dev = std::max(rep.max_r_deviation, rep.max_alpha_deviation);
        ok = ok && dev <= 1e-6;
        os << "weak drive " << fmt(dev);
    }
    {  // thermal relaxation to Bose-Einstein
        const GeneratorSpec g = thermal_generator({1.0}, ComplexVector(1), {0.5}, 2.0);
        SimulationConfig cfg;
        cfg.dt = 1e-2;
        cfg.t_final = 30.0;
        cfg.output_stride = 100;
        const auto rep = fock::compare_trajectories(ReducedState::vacuum(1), g, fock::FockSpec{1, 10}, cfg);
        const double nbar = 1.0 / std::expm1(2.0);
        const double occ = rep.final_oracle.r()(0, 0).real();
        const double dev_be = std::abs(occ - nbar);
        const double dev = std::max(rep.max_r_deviation, rep.max_alpha_deviation);
        ok = ok && dev_be <= 1e-4 && dev <= 1e-4;
        os << ", thermal occupation " << occ << " vs 1/(e^2-1) " << fmt(dev_be) << " (trajectory " << fmt(dev) << ")";
    }
    {  // two modes with a beam-splitter scattering channel
        const ModeSet m({1.0, 1.5});
        const double h = 1.0 / std::sqrt(2.0);
        Matrix u(2, 2);
        u(0, 0) = h;
        u(0, 1) = Complex{0.0, h};
        u(1, 0) = Complex{0.0, h};
        u(1, 1) = h;
        const BathSpec bath = BathSpec::general(hermitize(Matrix::zeros(2)),
                                                hermitize(0.4 * Matrix::identity(2)));
        const GeneratorSpec g(m, ComplexVector{Complex{0.1, 0.0}, Complex{}}, bath, ScatteringSpec({{0.3, u}}));
        SimulationConfig cfg;
        cfg.dt = 1e-2;
        cfg.t_final = 10.0;
        cfg.output_stride = 20;
        const auto rep = fock::compare_trajectories(ReducedState::vacuum(2), g, fock::FockSpec{2, 6}, cfg);
        const double dev = std::max(rep.max_r_deviation, rep.max_alpha_deviation);
        ok = ok && dev <= 1e-3;
        os << ", beam splitter (cutoff 6) " << fmt(dev);
    }
    out.ok = ok;
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------------------

Outcome scattering_contraction() {
    Outcome out;
    double worst_rise = 0.0;
    long steps = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        std::vector<ScatteringChannel> channels;
        const int count = 1 + trial % 3;
        for (int j = 0; j < count; ++j) channels.push_back({uniform(0.1, 2.0), random_unitary(n)});
        const GeneratorSpec g(ModeSet(random_omegas(n)), ComplexVector(n), std::nullopt,
                              ScatteringSpec(std::move(channels)));
        ReducedState s = random_state(n);
        double prev = norm(s.alpha());
        for (int k = 0; k < 500; ++k) {
            s = step_rk4(s, g, 1e-2);
            const double now = norm(s.alpha());
            worst_rise = std::max(worst_rise, now - prev);
            prev = now;
            ++steps;
        }
    }
    out.ok = worst_rise <= 1e-10;
    out.detail = "100 mixtures, " + std::to_string(steps) + " steps, largest per-step rise of ||alpha|| " +
                 fmt(worst_rise);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path to rsf binary>\n", argv[0]);
        return 2;
    }
    const std::string binary = argv[1];

    struct Criterion {
        const char* name;
        double budget;  // seconds
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"entropy axioms", 5.0, entropy_axioms},
        {"closed forms vs RK4", 30.0, closed_forms},
        {"thermal steady state", 10.0, steady_states},
        {"quasi-static identity", 1.0, quasi_static},
        {"first law with zero work", 5.0, first_law},
        {"drive independence of entropy", 5.0, drive_independence},
        {"entropy sweep", 2.0, [&] { return figure_sweep(binary); }},
        {"Fock-space oracle", 60.0, fock_oracle},
        {"scattering contraction", 5.0, scattering_contraction},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < criteria[i].budget;
        const bool pass = o.ok && in_time;
        if (!pass) ++failed;
        std::printf("[%s] %zu. %s: %s; %.2f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str(), secs, criteria[i].budget, in_time ? "" : " over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
