#pragma once

#include <nlohmann/json.hpp>

#include "supercal/closed_form.hpp"
#include "supercal/integrability.hpp"
#include "supercal/obstacle.hpp"

namespace supercal {

/// JSON-config entry points behind the C API and the CLI. Every runner
/// validates its config (BadConfig on malformed input), executes, writes any
/// requested CSV/JSON artifacts, and returns the report as JSON.
nlohmann::json run_exponents(const nlohmann::json& cfg);
nlohmann::json run_moser(const nlohmann::json& cfg);
nlohmann::json run_eval(const nlohmann::json& cfg);
nlohmann::json run_solve(const nlohmann::json& cfg);
nlohmann::json run_obstacle(const nlohmann::json& cfg);
nlohmann::json run_scan(const nlohmann::json& cfg);
nlohmann::json run_classify(const nlohmann::json& cfg);
nlohmann::json run_harnack(const nlohmann::json& cfg);

/// Dispatch by command name (the CLI subcommand set).
nlohmann::json run_command(const std::string& command, const nlohmann::json& cfg);

/// Shared config parsers.
Medium medium_from_json(const nlohmann::json& cfg);
SolutionFamily family_from_json(const nlohmann::json& cfg);
SolverConfig solver_config_from_json(const nlohmann::json& cfg);
SourcePtr source_from_json(const nlohmann::json& cfg);

}  // namespace supercal
