#pragma once

#include "solitonchain/error.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace solitonchain::cli {

inline constexpr int exit_ok        = 0;
inline constexpr int exit_config    = 2;
inline constexpr int exit_numerical = 3;

inline constexpr std::string_view version = "0.1.0";

/// A configuration problem; the message names the offending field.
class ConfigError : public ParameterError {
  public:
    using ParameterError::ParameterError;
};

/// Experiments accepted as subcommands and as the "experiment" field.
const std::vector<std::string> &experiments();

/// Sets a dot-path such as "params.levels=[0.1,0.5]". The value is parsed as
/// JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json &config, std::string_view assignment);

/// Fills defaults and validates. Unknown keys are rejected. A manifest written
/// by a previous run is accepted and its resolved config reused.
nlohmann::json resolve_config(const nlohmann::json &user);

struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files; // file name, contents
};

/// Runs a resolved config and renders every output file in memory, the
/// manifest included.
Artifacts execute(const nlohmann::json &resolved, unsigned threads);

/// Worker cap from SOLITONCHAIN_THREADS (unset or 0 = hardware concurrency).
unsigned threads_from_env();

/// Full command line: solitonchain <experiment|run> [--config F] [--seed N]
/// [--out DIR] [key=value ...]. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace solitonchain::cli
