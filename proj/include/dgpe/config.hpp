#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dgpe/dynamics.hpp"
#include "dgpe/energy.hpp"
#include "dgpe/groundstate.hpp"
#include "dgpe/spectral.hpp"

namespace dgpe {

/// Everything a CLI run needs. Parsed from `key = value` lines.
///
///   key           default                   constraint
///   lambda1       (required)                finite
///   lambda2       (required)                finite
///   mass_c        1                         > 0
///   dims          64 64 64                  even, >= 8 (one value applies to all axes)
///   box           8 8 8                     > 0 (half-lengths; one value applies to all)
///   tol_residual  1e-8                      > 0
///   max_iters     5000                      >= 1
///   dt            1e-3                      > 0
///   t_final       10                        >= dt
///   delta         1e-2                      >= 0
///   epsilons      0.5 0.25 0.125 0.0625     > 0, strictly decreasing
///   seed          1                         integer >= 0
///   output_dir    .                         path
struct RunConfig {
  PhysicsParams physics;
  Dims3 dims{64, 64, 64};
  Vec3 box{8.0, 8.0, 8.0};
  SolverOptions solver;
  DynamicsOptions dynamics;
  double delta = 1e-2;
  std::vector<double> epsilons{0.5, 0.25, 0.125, 0.0625};
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";

  Grid3D grid() const { return Grid3D(dims, box); }
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "config line " + std::to_string(line) + ": " + what : "config: " + what),
        line_(line) {}
  /// 1-based line number, 0 when the problem is not tied to one line.
  int line() const { return line_; }

 private:
  int line_;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace dgpe
