#pragma once

#include <iosfwd>
#include <memory>

#include <json.hpp>

#include "robtrade/models.hpp"
#include "run_config.hpp"

namespace robtrade::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitOptimizer = 3;
inline constexpr int kExitStationarity = 4;
inline constexpr int kExitPrecondition = 5;

void cmd_gen(RunConfig cfg, std::ostream& log);
void cmd_curve(RunConfig cfg, std::ostream& log);
void cmd_ifa(RunConfig cfg, std::ostream& log);
void cmd_linreg_check(RunConfig cfg, std::ostream& log);

/// Artifact wrapper: tool, tool_version, command, generator, seed, config,
/// result, created_at (the only field that changes between identical runs).
nlohmann::ordered_json envelope(const RunConfig& cfg, nlohmann::ordered_json result);

std::shared_ptr<const LossModel> make_model(const RunConfig& cfg, Index input_dim);

/// Parses arguments, runs the subcommand and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robtrade::cli
