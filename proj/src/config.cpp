#include "rsf/config.hpp"

#include "rsf/errors.hpp"
#include "rsf/thermo.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rsf::config {

const char* to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::free: return "free";
    case Scenario::coherent: return "coherent";
    case Scenario::thermal: return "thermal";
    case Scenario::custom: return "custom";
    }
    return "?";
}

namespace {

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
        std::ostringstream os;
        os << source_ << ":";
        if (at && at.Mark().line >= 0) os << at.Mark().line + 1 << ":";
        os << " " << msg;
        throw ConfigError(os.str());
    }

    [[noreturn]] void fail_line(int line, const std::string& msg) const {
        std::ostringstream os;
        os << source_ << ":" << line + 1 << ": " << msg;
        throw ConfigError(os.str());
    }

    // Runs f and re-throws library errors anchored at `at`.
    template <class F>
    auto anchored(const YAML::Node& at, F&& f) const -> decltype(f()) {
        try {
            return f();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(at, e.what());
        }
    }

    double real(const YAML::Node& n, const std::string& what) const {
        if (!n || !n.IsScalar()) fail(n, what + ": expected a number");
        try {
            return n.as<double>();
        } catch (const YAML::Exception&) {
            fail(n, what + ": '" + n.Scalar() + "' is not a number");
        }
    }

    long long integer(const YAML::Node& n, const std::string& what) const {
        if (!n || !n.IsScalar()) fail(n, what + ": expected an integer");
        try {
            return n.as<long long>();
        } catch (const YAML::Exception&) {
            fail(n, what + ": '" + n.Scalar() + "' is not an integer");
        }
    }

    // A number (real) or a [re, im] pair.
    Complex complex(const YAML::Node& n, const std::string& what) const {
        if (n && n.IsScalar()) return {real(n, what), 0.0};
        if (!n || !n.IsSequence() || n.size() != 2) fail(n, what + ": expected a number or [re, im]");
        return {real(n[0], what + " (re)"), real(n[1], what + " (im)")};
    }

    std::vector<double> reals(const YAML::Node& n, const std::string& what) const {
        if (!n || !n.IsSequence()) fail(n, what + ": expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i) out.push_back(real(n[i], what + "[" + std::to_string(i) + "]"));
        return out;
    }

    ComplexVector vector(const YAML::Node& n, std::size_t dim, const std::string& what) const {
        if (!n || !n.IsSequence()) fail(n, what + ": expected a list of complex entries");
        if (n.size() != dim) {
            fail(n, what + ": expected " + std::to_string(dim) + " entries, got " + std::to_string(n.size()));
        }
        ComplexVector v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = complex(n[i], what + "[" + std::to_string(i) + "]");
        return v;
    }

    // Either a list of rows or a flat row-major list of dim*dim entries.
    Matrix matrix(const YAML::Node& n, std::size_t dim, const std::string& what) const {
        if (!n || !n.IsSequence()) fail(n, what + ": expected a matrix");
        Matrix m(dim, dim);
        const bool nested = n.size() == dim && n[0].IsSequence() && n[0].size() == dim;
        if (nested) {
            for (std::size_t i = 0; i < dim; ++i) {
                if (!n[i].IsSequence() || n[i].size() != dim)
                    fail(n[i], what + ": row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
                for (std::size_t j = 0; j < dim; ++j)
                    m(i, j) = complex(n[i][j], what + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
            }
        } else {
            if (n.size() != dim * dim) {
                fail(n, what + ": expected " + std::to_string(dim) + " rows or " + std::to_string(dim * dim) +
                            " row-major entries");
            }
            for (std::size_t i = 0; i < dim * dim; ++i)
                m(i / dim, i % dim) = complex(n[i], what + "[" + std::to_string(i) + "]");
        }
        return m;
    }

    void only_keys(const YAML::Node& n, std::set<std::string> allowed, const std::string& section) const {
        if (!n.IsMap()) fail(n, section + ": expected a mapping");
        for (auto it = n.begin(); it != n.end(); ++it) {
            const auto key = it->first.as<std::string>();
            if (!allowed.count(key)) fail(it->first, section + ": unknown key '" + key + "'");
        }
    }

private:
    std::string source_;
};

Scenario parse_scenario(const Reader& rd, const YAML::Node& n) {
    if (!n) rd.fail_line(0, "missing 'scenario' (free | coherent | thermal | custom)");
    const auto s = n.as<std::string>();
    if (s == "free") return Scenario::free;
    if (s == "coherent") return Scenario::coherent;
    if (s == "thermal") return Scenario::thermal;
    if (s == "custom") return Scenario::custom;
    rd.fail(n, "unknown scenario '" + s + "' (free | coherent | thermal | custom)");
}

SimulationConfig parse_simulation(const Reader& rd, const YAML::Node& n) {
    SimulationConfig sim;
    if (!n) return sim;
    rd.only_keys(n, {"dt", "t_final", "output_stride", "hbar", "kB"}, "simulation");
    if (n["dt"]) sim.dt = rd.real(n["dt"], "simulation.dt");
    if (n["t_final"]) sim.t_final = rd.real(n["t_final"], "simulation.t_final");
    if (n["output_stride"]) sim.output_stride = static_cast<int>(rd.integer(n["output_stride"], "simulation.output_stride"));
    if (n["hbar"]) sim.hbar = rd.real(n["hbar"], "simulation.hbar");
    if (n["kB"]) sim.kB = rd.real(n["kB"], "simulation.kB");
    rd.anchored(n, [&] {
        sim.validate();
        return 0;
    });
    return sim;
}

std::optional<BathSpec> parse_bath(const Reader& rd, const YAML::Node& n, std::size_t dim) {
    if (!n || n.IsNull()) return std::nullopt;
    rd.only_keys(n, {"type", "beta", "gamma_down", "gamma_up"}, "bath");
    const auto type = n["type"] ? n["type"].as<std::string>() : std::string("thermal");
    if (type == "thermal") {
        if (n["gamma_up"]) rd.fail(n["gamma_up"], "bath: gamma_up is derived by detailed balance for thermal baths");
        const double beta = rd.real(n["beta"], "bath.beta");
        auto down = rd.reals(n["gamma_down"], "bath.gamma_down");
        if (down.size() != dim) {
            rd.fail(n["gamma_down"], "bath.gamma_down: expected " + std::to_string(dim) + " rates, got " +
                                         std::to_string(down.size()));
        }
        return rd.anchored(n, [&] { return BathSpec::thermal(std::move(down), beta); });
    }
    if (type == "general") {
        if (n["beta"]) rd.fail(n["beta"], "bath: beta only applies to thermal baths");
        const Matrix up = rd.matrix(n["gamma_up"], dim, "bath.gamma_up");
        const Matrix down = rd.matrix(n["gamma_down"], dim, "bath.gamma_down");
        auto up_h = rd.anchored(n["gamma_up"], [&] { return HermitianMatrix::checked(up); });
        auto down_h = rd.anchored(n["gamma_down"], [&] { return HermitianMatrix::checked(down); });
        return rd.anchored(n, [&] { return BathSpec::general(std::move(up_h), std::move(down_h)); });
    }
    rd.fail(n["type"], "bath.type must be 'thermal' or 'general'");
}

ScatteringSpec parse_scattering(const Reader& rd, const YAML::Node& n, std::size_t dim) {
    if (!n || n.IsNull()) return {};
    if (!n.IsSequence()) rd.fail(n, "scattering: expected a list of {weight, unitary}");
    std::vector<ScatteringChannel> channels;
    for (std::size_t j = 0; j < n.size(); ++j) {
        const auto& ch = n[j];
        const std::string what = "scattering[" + std::to_string(j) + "]";
        rd.only_keys(ch, {"weight", "unitary"}, what);
        const double w = rd.real(ch["weight"], what + ".weight");
        Matrix u = rd.matrix(ch["unitary"], dim, what + ".unitary");
        // validate the weight and the unitary each at its own line
        rd.anchored(ch["weight"], [&] { return ScatteringSpec({{w, Matrix::identity(dim)}}); });
        rd.anchored(ch["unitary"], [&] { return ScatteringSpec({{w, u}}); });
        channels.push_back({w, std::move(u)});
    }
    return ScatteringSpec(std::move(channels));
}

ReducedState parse_initial(const Reader& rd, const YAML::Node& n, const ModeSet& modes,
                           const std::optional<BathSpec>& bath) {
    const std::size_t dim = modes.n_modes();
    if (!n || (n.IsScalar() && n.as<std::string>() == "vacuum")) return ReducedState::vacuum(dim);
    if (n.IsScalar()) {
        if (n.as<std::string>() == "thermal") {
            if (!bath || !bath->is_thermal()) rd.fail(n, "initial: 'thermal' needs a thermal bath (or give initial.beta)");
            return rd.anchored(n, [&] { return thermal_state(bath->beta(), modes, ComplexVector(dim)); });
        }
        rd.fail(n, "initial: expected 'vacuum', 'thermal' or a mapping with r/alpha");
    }
    rd.only_keys(n, {"state", "beta", "r", "alpha"}, "initial");
    const std::string kind = n["state"] ? n["state"].as<std::string>() : std::string("explicit");
    const ComplexVector alpha = n["alpha"] ? rd.vector(n["alpha"], dim, "initial.alpha") : ComplexVector(dim);
    if (kind == "vacuum") {
        if (n["r"] || n["alpha"]) rd.fail(n, "initial: vacuum takes no r/alpha");
        return ReducedState::vacuum(dim);
    }
    if (kind == "thermal") {
        if (n["r"]) rd.fail(n["r"], "initial: thermal state derives r from beta");
        double beta = 0.0;
        if (n["beta"]) {
            beta = rd.real(n["beta"], "initial.beta");
        } else if (bath && bath->is_thermal()) {
            beta = bath->beta();
        } else {
            rd.fail(n, "initial: thermal state needs initial.beta or a thermal bath");
        }
        return rd.anchored(n, [&] { return thermal_state(beta, modes, alpha); });
    }
    if (kind == "explicit") {
        if (!n["r"]) rd.fail(n, "initial: explicit state needs 'r'");
        const Matrix r = rd.matrix(n["r"], dim, "initial.r");
        auto rh = rd.anchored(n["r"], [&] { return HermitianMatrix::checked(r); });
        return rd.anchored(n, [&] { return ReducedState(std::move(rh), alpha); });
    }
    rd.fail(n["state"], "initial.state must be vacuum, thermal or explicit");
}

std::optional<OracleSettings> parse_oracle(const Reader& rd, const YAML::Node& n, std::size_t dim) {
    if (!n || n.IsNull()) return std::nullopt;
    rd.only_keys(n, {"cutoff", "tolerance"}, "oracle");
    OracleSettings o;
    o.fock.n_modes = dim;
    const long long cutoff = rd.integer(n["cutoff"], "oracle.cutoff");
    if (cutoff < 1) rd.fail(n["cutoff"], "oracle.cutoff must be >= 1");
    o.fock.cutoff = static_cast<std::size_t>(cutoff);
    if (n["tolerance"]) o.tolerance = rd.real(n["tolerance"], "oracle.tolerance");
    if (!(o.tolerance > 0.0)) rd.fail(n["tolerance"], "oracle.tolerance must be > 0");
    rd.anchored(n, [&] { return o.fock.dimension(); });
    return o;
}

bool zeta_is_zero(const ComplexVector& z) {
    for (const auto& v : z.entries())
        if (v != Complex{}) return false;
    return true;
}

} // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
    const Reader rd(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        rd.fail_line(e.mark.line, std::string("syntax error: ") + e.msg);
    }
    if (!root.IsMap()) rd.fail_line(0, "expected a mapping at the top level");
    rd.only_keys(root, {"scenario", "modes", "zeta", "bath", "scattering", "initial", "simulation", "oracle"},
                 "top level");

    try {
        const Scenario scenario = parse_scenario(rd, root["scenario"]);
        const SimulationConfig sim = parse_simulation(rd, root["simulation"]);

        const YAML::Node modes_node = root["modes"];
        if (!modes_node) rd.fail_line(0, "missing 'modes'");
        std::vector<double> omega;
        if (modes_node.IsMap()) {
            rd.only_keys(modes_node, {"count", "omega"}, "modes");
            omega = rd.reals(modes_node["omega"], "modes.omega");
            if (modes_node["count"] &&
                rd.integer(modes_node["count"], "modes.count") != static_cast<long long>(omega.size())) {
                rd.fail(modes_node["count"], "modes.count does not match the length of modes.omega");
            }
        } else {
            omega = rd.reals(modes_node, "modes");
        }
        ModeSet modes = rd.anchored(modes_node, [&] { return ModeSet(omega, Units{sim.hbar, sim.kB}); });
        const std::size_t dim = modes.n_modes();

        const ComplexVector zeta = root["zeta"] ? rd.vector(root["zeta"], dim, "zeta") : ComplexVector(dim);
        auto bath = parse_bath(rd, root["bath"], dim);
        auto scattering = parse_scattering(rd, root["scattering"], dim);

        switch (scenario) {
        case Scenario::free:
            if (!zeta_is_zero(zeta)) rd.fail(root["zeta"], "free scenario: zeta must be absent or zero");
            [[fallthrough]];
        case Scenario::coherent:
            if (bath) rd.fail(root["bath"], std::string(to_string(scenario)) + " scenario: no bath allowed");
            if (!scattering.empty()) {
                rd.fail(root["scattering"], std::string(to_string(scenario)) + " scenario: no scattering allowed");
            }
            break;
        case Scenario::thermal:
            if (!bath || !bath->is_thermal()) rd.fail(root["scenario"], "thermal scenario: needs a thermal bath");
            if (!scattering.empty()) rd.fail(root["scattering"], "thermal scenario: no scattering allowed");
            break;
        case Scenario::custom: break;
        }

        GeneratorSpec gen = rd.anchored(root, [&] { return GeneratorSpec(modes, zeta, bath, scattering); });
        ReducedState initial = parse_initial(rd, root["initial"], modes, bath);
        auto oracle = parse_oracle(rd, root["oracle"], dim);
        return ScenarioConfig{scenario, std::move(gen), std::move(initial), sim, std::move(oracle)};
    } catch (const YAML::Exception& e) {
        rd.fail_line(e.mark.line, e.msg);
    }
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

} // namespace rsf::config
