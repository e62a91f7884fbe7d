// config.hpp: scenario files for the command-line runner.
//
// A scenario is a YAML document; see README.md for the schema.  Every
// validation failure is reported as "<source>:<line>: <message>".

#pragma once

#include "rsf/fock.hpp"
#include "rsf/generators.hpp"
#include "rsf/integrator.hpp"
#include "rsf/state.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace rsf::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scenario { free, coherent, thermal, custom };

const char* to_string(Scenario s) noexcept;

struct OracleSettings {
    fock::FockSpec fock;
    double tolerance = 1e-4;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::custom;
    GeneratorSpec generator;
    ReducedState initial;
    SimulationConfig simulation;
    std::optional<OracleSettings> oracle;
};

// Throws ConfigError (syntax, schema and invariant violations, all with line numbers).
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<string>");
ScenarioConfig load_config(const std::string& path);

} // namespace rsf::config
