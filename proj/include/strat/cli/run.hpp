#pragma once

#include <iosfwd>

#include "strat/cli/config.hpp"
#include "strat/cli/output.hpp"

namespace strat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

/// Computes the result tables of a validated configuration. Solver failures
/// propagate as strat::Error, input problems as ConfigError or IoError.
[[nodiscard]] Document execute(const RunConfig& cfg);

/// execute() plus output, with errors mapped to exit codes and reported on `err`.
[[nodiscard]] int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line: `stratscat <scatter|design|xcheck|figure> --config PATH [flags]`.
[[nodiscard]] int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace strat::cli
