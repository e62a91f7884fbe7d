#include "rsf/commands.hpp"

#include "rsf/errors.hpp"
#include "rsf/fock.hpp"
#include "rsf/thermo.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rsf::commands {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string cnum(Complex z) { return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i"; }

void print_matrix(std::ostream& out, const Matrix& m, const std::string& indent) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << indent << "[";
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << cnum(m(i, j));
        out << "]\n";
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config::ConfigError(path + ": cannot open output file");
    return f;
}

} // namespace

std::vector<std::string> write_simulation_csv(const config::ScenarioConfig& cfg, std::ostream& out, bool dump_state) {
    Trajectory traj = evolve(cfg.initial, cfg.generator, cfg.simulation);
    annotate(traj, cfg.generator);
    const std::size_t n = cfg.generator.n_modes();

    out << kSimulationHeader;
    if (dump_state) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out << ",r_re_" << i << "_" << j << ",r_im_" << i << "_" << j;
        for (std::size_t k = 0; k < n; ++k) out << ",alpha_re_" << k << ",alpha_im_" << k;
    }
    out << "\n";
    for (std::size_t row = 0; row < traj.samples.size(); ++row) {
        const ThermoSample& s = traj.samples[row];
        out << num(s.t) << ',' << num(s.S) << ',' << num(s.U) << ',' << num(s.heat_rate) << ','
            << num(s.entropy_rate) << ',' << num(s.F) << ',' << num(s.F_eq) << ',' << num(s.F_neq) << ','
            << num(s.N) << ',' << num(s.alpha_norm2);
        if (dump_state) {
            const ReducedState& st = traj.states[row];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) out << ',' << num(st.r()(i, j).real()) << ',' << num(st.r()(i, j).imag());
            for (std::size_t k = 0; k < n; ++k) out << ',' << num(st.alpha()[k].real()) << ',' << num(st.alpha()[k].imag());
        }
        out << "\n";
    }
    return traj.warnings;
}

void write_entropy_sweep_csv(double beta_min, double beta_max, int steps, std::vector<double> omegas,
                             std::ostream& out) {
    if (!(beta_min > 0.0) || !(beta_max >= beta_min) || !std::isfinite(beta_max)) {
        throw DomainError("sweep-entropy: need 0 < beta-min <= beta-max");
    }
    if (steps < 2) throw DomainError("sweep-entropy: steps must be >= 2");
    if (omegas.empty()) throw DomainError("sweep-entropy: at least one omega is required");
    std::sort(omegas.begin(), omegas.end());
    std::vector<ModeSet> single;
    for (double w : omegas) single.emplace_back(std::vector<double>{w});

    out << "beta";
    for (double w : omegas) out << ",S_omega_" << num(w);
    out << "\n";
    for (int i = 0; i < steps; ++i) {
        const double beta = beta_min + (beta_max - beta_min) * static_cast<double>(i) / (steps - 1);
        out << num(beta);
        for (const auto& m : single) out << ',' << num(steady_entropy_vs_beta(beta, m));
        out << "\n";
    }
}

void write_steady_summary(const config::ScenarioConfig& cfg, std::ostream& out) {
    if (cfg.scenario != config::Scenario::thermal) {
        throw config::ConfigError(std::string("steady: requires a thermal scenario, got '") +
                                  config::to_string(cfg.scenario) + "'");
    }
    const GeneratorSpec& g = cfg.generator;
    const ModeSet& m = g.modes();
    const double beta = g.bath()->beta();
    const ReducedState s = steady_state(g);
    const CorrelationMatrix c = steady_correlation(g);
    const CorrelationMatrix be = thermal_correlation(beta, m);

    out << "steady state of thermal scenario (beta = " << num(beta) << ", " << m.n_modes() << " modes)\n";
    out << "alpha_steady:\n";
    for (std::size_t k = 0; k < m.n_modes(); ++k) out << "  [" << cnum(s.alpha()[k]) << "]\n";
    out << "r_steady:\n";
    print_matrix(out, s.r().matrix(), "  ");
    out << "correlation_matrix:\n";
    print_matrix(out, c.matrix().matrix(), "  ");
    out << "bose_einstein_diagonal:";
    for (std::size_t k = 0; k < m.n_modes(); ++k) out << ' ' << num(be(k, k).real());
    out << "\n";
    out << "max_abs_deviation_from_bose_einstein: "
        << num(frobenius_norm(c.matrix().matrix() - be.matrix().matrix())) << "\n";
    out << "S: " << num(entropy(c, m.kB())) << "\n";
    out << "U: " << num(internal_energy(s, m)) << "\n";
    out << "F_eq: " << num(free_energies(s, beta, m).F_eq) << "\n";
}

bool write_oracle_report(const config::ScenarioConfig& cfg, std::ostream& out) {
    if (!cfg.oracle) throw config::ConfigError("oracle-compare: the config has no 'oracle' section");
    const auto& o = *cfg.oracle;
    if (o.fock.n_modes > 2) throw config::ConfigError("oracle-compare: at most 2 modes are supported");
    const fock::DeviationReport rep = fock::compare_trajectories(cfg.initial, cfg.generator, o.fock, cfg.simulation);
    const bool ok = rep.passed(o.tolerance);
    out << "oracle comparison: " << o.fock.n_modes << " mode(s), cutoff " << o.fock.cutoff << ", dimension "
        << o.fock.dimension() << "\n";
    out << "samples: " << rep.samples << "\n";
    out << "max_r_deviation: " << num(rep.max_r_deviation) << "\n";
    out << "max_alpha_deviation: " << num(rep.max_alpha_deviation) << "\n";
    out << "max_trace_drift: " << num(rep.max_trace_drift) << "\n";
    out << "min_rho_eigenvalue: " << num(rep.min_rho_eigenvalue) << "\n";
    out << "max_top_level_population: " << num(rep.max_top_population) << "\n";
    out << "final_occupations_rsf:";
    for (std::size_t k = 0; k < rep.final_rsf.n_modes(); ++k) out << ' ' << num(rep.final_rsf.r()(k, k).real());
    out << "\nfinal_occupations_oracle:";
    for (std::size_t k = 0; k < rep.final_oracle.n_modes(); ++k) out << ' ' << num(rep.final_oracle.r()(k, k).real());
    out << "\ntolerance: " << num(o.tolerance) << "\n";
    out << "result: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok;
}

int run(int argc, char** argv) {
    CLI::App app{"Reduced-state-of-the-field simulator"};
    app.require_subcommand(1);

    std::string config_path, output_path;
    bool dump_state = false;
    auto* simulate = app.add_subcommand("simulate", "integrate a scenario and write a CSV time series");
    simulate->add_option("--config", config_path, "scenario file")->required();
    simulate->add_option("--output", output_path, "CSV output file")->required();
    simulate->add_flag("--dump-state", dump_state, "append flattened r and alpha columns");

    double beta_min = 0.0, beta_max = 0.0;
    int steps = 0;
    std::vector<double> omegas;
    auto* sweep = app.add_subcommand("sweep-entropy", "steady-state entropy over a beta grid");
    sweep->add_option("--beta-min", beta_min)->required();
    sweep->add_option("--beta-max", beta_max)->required();
    sweep->add_option("--steps", steps)->required();
    sweep->add_option("--omega", omegas, "comma-separated frequencies")->required()->delimiter(',');
    sweep->add_option("--output", output_path, "CSV output file")->required();

    auto* steady = app.add_subcommand("steady", "print the steady state of a thermal scenario");
    steady->add_option("--config", config_path, "scenario file")->required();
    steady->add_option("--output", output_path, "write the summary here instead of stdout");

    auto* oracle = app.add_subcommand("oracle-compare", "compare against the truncated Fock-space master equation");
    oracle->add_option("--config", config_path, "scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return 2;
    }

    try {
        if (*simulate) {
            const auto cfg = config::load_config(config_path);
            std::ostringstream buf;
            for (const auto& w : write_simulation_csv(cfg, buf, dump_state)) std::cerr << "warning: " << w << "\n";
            auto f = open_output(output_path);
            f << buf.str();
            std::cerr << "wrote " << output_path << "\n";
        } else if (*sweep) {
            std::ostringstream buf;
            write_entropy_sweep_csv(beta_min, beta_max, steps, omegas, buf);
            auto f = open_output(output_path);
            f << buf.str();
            std::cerr << "wrote " << output_path << "\n";
        } else if (*steady) {
            const auto cfg = config::load_config(config_path);
            if (output_path.empty()) {
                write_steady_summary(cfg, std::cout);
            } else {
                auto f = open_output(output_path);
                write_steady_summary(cfg, f);
            }
        } else if (*oracle) {
            const auto cfg = config::load_config(config_path);
            return write_oracle_report(cfg, std::cout) ? 0 : 1;
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const StateConsistencyError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace rsf::commands
