#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "dgpe/config.hpp"

namespace dgpe {

enum ExitStatus : int {
  kExitOk = 0,
  kExitError = 1,    // bad input, I/O, resolution
  kExitRefused = 2,  // unstable regime where a ground state is required
  kExitAborted = 3,  // numerical blow-up during propagation
};

struct RunOptions {
  /// evolve: initial datum; stability: ground state. Computed when absent.
  std::optional<std::filesystem::path> initial;
  int snapshot_stride = 0;
  int monitor_stride = 10;
};

/// Runs one of classify, ground, witness, evolve, stability. Artifacts go to
/// config.output_dir; human-readable lines go to out, diagnostics to err.
int run(std::string_view subcommand, const RunConfig& config, std::ostream& out,
        std::ostream& err, const RunOptions& options = {});

}  // namespace dgpe
