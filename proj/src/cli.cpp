#include "dgpe/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "dgpe/dynamics.hpp"
#include "dgpe/groundstate.hpp"
#include "dgpe/regimes.hpp"
#include "dgpe/snapshot.hpp"

namespace dgpe {

namespace {

namespace fs = std::filesystem;

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void write_summary(const fs::path& path,
                   const std::vector<std::pair<std::string, std::string>>& entries,
                   std::ostream& out) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& [k, v] : entries) {
    f << k << '=' << v << '\n';
    out << k << '=' << v << '\n';
  }
  if (!f) throw Error("write failed: " + path.string());
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

SnapshotSink snapshot_sink(const fs::path& dir, const std::string& stem) {
  return [dir, stem](long long step, double, const ComplexField& psi) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%08lld.gpe", stem.c_str(), step);
    write_snapshot(dir / name, psi);
  };
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const Regime r = classify(cfg.physics.lambda1, cfg.physics.lambda2);
  out << to_string(r.tag) << " margin=" << fixed4(r.margin) << '\n';
  return kExitOk;
}

int cmd_ground(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const GroundStateResult gs = minimize(cfg.physics, cfg.grid(), cfg.solver);
  check_boundary_decay(gs.state);
  write_snapshot(cfg.output_dir / "ground_state.gpe", gs.state);
  write_summary(cfg.output_dir / "ground_summary.txt",
                {{"energy", format_double(gs.energy)},
                 {"mu", format_double(gs.mu)},
                 {"residual", format_double(gs.residual)},
                 {"iterations", std::to_string(gs.iterations)},
                 {"converged", bool_str(gs.converged)}},
                out);
  if (!gs.converged) err << "warning: residual tolerance not reached within max_iters\n";
  return kExitOk;
}

int cmd_witness(const RunConfig& cfg, std::ostream& out) {
  const CollapseWitnessReport rep = witness_report(cfg.physics, cfg.grid(), cfg.epsilons);
  write_csv(cfg.output_dir / "witness.csv", {"epsilon", "h", "energy", "mass"},
            {rep.epsilons, rep.h_values, rep.energies, rep.masses});
  write_summary(cfg.output_dir / "witness_summary.txt",
                {{"regime", to_string(classify(cfg.physics.lambda1, cfg.physics.lambda2).tag)},
                 {"verdict", bool_str(rep.verdict)}},
                out);
  return kExitOk;
}

ComplexField load_initial(const fs::path& path, const Grid3D& grid) {
  ComplexField f = read_snapshot(path);
  if (!(f.grid() == grid)) throw Error("snapshot " + path.string() + " does not match the configured grid");
  return f;
}

int report_blowup(const BlowUpError& e, const fs::path& csv, bool with_orbit, std::ostream& out,
                  std::ostream& err) {
  const StabilityReport& r = e.partial();
  std::vector<std::string> header{"t", "mass", "energy"};
  std::vector<std::vector<double>> cols{r.times, r.mass_series, r.energy_series};
  if (with_orbit) {
    header.push_back("orbit_distance");
    cols.push_back(r.orbit_distance_series);
  }
  // The sample that tripped the detector is recorded only in some series.
  std::size_t rows = r.times.size();
  for (const auto& c : cols) rows = std::min(rows, c.size());
  for (auto& c : cols) c.resize(rows);
  write_csv(csv, header, cols);
  err << "aborted: " << e.what() << '\n';
  out << "blowup_time=" << format_double(e.time()) << '\n';
  return kExitAborted;
}

int cmd_evolve(const RunConfig& cfg, const RunOptions& opt, std::ostream& out, std::ostream& err) {
  const Grid3D grid = cfg.grid();
  ComplexField psi0 = [&] {
    if (opt.initial) return load_initial(*opt.initial, grid);
    if (classify(cfg.physics.lambda1, cfg.physics.lambda2).stable()) {
      return minimize(cfg.physics, grid, cfg.solver).state;
    }
    return gaussian_state(grid, cfg.physics.mass_c);
  }();
  DynamicsOptions dyn = cfg.dynamics;
  dyn.snapshot_stride = opt.snapshot_stride;
  dyn.monitor_stride = opt.monitor_stride;
  const fs::path csv = cfg.output_dir / "evolve.csv";
  try {
    const StabilityReport r = propagate(psi0, cfg.physics, dyn, nullptr,
                                        snapshot_sink(cfg.output_dir, "evolve"));
    write_csv(csv, {"t", "mass", "energy"}, {r.times, r.mass_series, r.energy_series});
    write_summary(cfg.output_dir / "evolve_summary.txt",
                  {{"steps", std::to_string(dyn.steps())},
                   {"mass_drift", format_double(r.mass_drift)},
                   {"energy_drift", format_double(r.energy_drift)}},
                  out);
  } catch (const BlowUpError& e) {
    return report_blowup(e, csv, false, out, err);
  }
  return kExitOk;
}

int cmd_stability(const RunConfig& cfg, const RunOptions& opt, std::ostream& out,
                  std::ostream& err) {
  const Grid3D grid = cfg.grid();
  const Regime regime = classify(cfg.physics.lambda1, cfg.physics.lambda2);
  if (!regime.stable()) {
    throw UnstableRegimeError("stability: unstable regime, no ground-state orbit", regime.margin);
  }
  const ComplexField w =
      opt.initial ? load_initial(*opt.initial, grid) : minimize(cfg.physics, grid, cfg.solver).state;
  DynamicsOptions dyn = cfg.dynamics;
  dyn.snapshot_stride = 0;
  dyn.monitor_stride = opt.monitor_stride;
  const fs::path csv = cfg.output_dir / "stability.csv";
  try {
    const StabilityReport r = stability_experiment(w, cfg.physics, cfg.delta, dyn, cfg.seed);
    write_csv(csv, {"t", "mass", "energy", "orbit_distance"},
              {r.times, r.mass_series, r.energy_series, r.orbit_distance_series});
    write_summary(cfg.output_dir / "stability_summary.txt",
                  {{"delta", format_double(cfg.delta)},
                   {"initial_sigma_distance", format_double(r.initial_sigma_distance)},
                   {"sup_orbit_distance", format_double(r.sup_orbit_distance)},
                   {"mass_drift", format_double(r.mass_drift)},
                   {"energy_drift", format_double(r.energy_drift)}},
                  out);
  } catch (const BlowUpError& e) {
    return report_blowup(e, csv, true, out, err);
  }
  return kExitOk;
}

}  // namespace

int run(std::string_view subcommand, const RunConfig& config, std::ostream& out,
        std::ostream& err, const RunOptions& options) {
  try {
    if (subcommand == "classify") return cmd_classify(config, out);
    fs::create_directories(config.output_dir);
    if (subcommand == "ground") return cmd_ground(config, out, err);
    if (subcommand == "witness") return cmd_witness(config, out);
    if (subcommand == "evolve") return cmd_evolve(config, options, out, err);
    if (subcommand == "stability") return cmd_stability(config, options, out, err);
    err << "unknown subcommand '" << subcommand << "'\n";
    return kExitError;
  } catch (const UnstableRegimeError& e) {
    err << "refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace dgpe
