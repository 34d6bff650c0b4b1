#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dgpe/energy.hpp"
#include "dgpe/groundstate.hpp"
#include "dgpe/spectral.hpp"

namespace dgpe {

struct DynamicsOptions {
  double dt = 1e-3;
  double t_final = 10.0;
  /// Emit a snapshot every this many steps (0 disables snapshots).
  int snapshot_stride = 0;
  /// Sample the monitors every this many steps; t = 0 and t_final always sampled.
  int monitor_stride = 10;
  bool monitor_mass = true;
  bool monitor_energy = true;
  bool monitor_orbit_distance = false;
  /// Blow-up triggers: max |psi| above this multiple of its initial value, or
  /// the fraction of L2 mass in the outer third of the spectrum grown by more
  /// than this amount over its initial value.
  double blowup_amplitude_factor = 1e6;
  double resolution_loss_fraction = 1e-2;

  void validate() const;
  long long steps() const;
};

struct StabilityReport {
  std::vector<double> times;
  std::vector<double> mass_series;
  std::vector<double> energy_series;
  std::vector<double> orbit_distance_series;
  double sup_orbit_distance = 0.0;
  /// Orbit distance of the initial datum: the delta of the stability definition.
  double initial_sigma_distance = std::numeric_limits<double>::quiet_NaN();
  /// max_t |E(t) - E(0)| over the energy samples.
  double energy_drift = 0.0;
  /// max_t |M(t) - M(0)| / M(0) over the mass samples.
  double mass_drift = 0.0;
};

/// Propagation aborted on a non-finite value or a blow-up trigger.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time, StabilityReport partial)
      : Error(what), time_(time), partial_(std::move(partial)) {}
  double time() const { return time_; }
  const StabilityReport& partial() const { return partial_; }

 private:
  double time_;
  StabilityReport partial_;
};

/// Strang splitting for i psi_t + 1/2 Lap psi = W(|psi|^2) psi:
/// half step exp(-i dt/2 W), exact kinetic step exp(-i dt |xi|^2 / 2) in
/// Fourier space, half step exp(-i dt/2 W). Each substep is an isometry.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid3D& grid, const PhysicsParams& p, double dt);

  double dt() const { return dt_; }
  const EnergyFunctional& functional() const { return functional_; }

  /// Advances psi by n steps in place. Between two steps the closing half
  /// kick and the next opening one share the same mean field, so they are
  /// applied as one full kick.
  void advance(ComplexField& psi, long long n) const;

 private:
  struct Workspace {
    explicit Workspace(const Grid3D& g);
    RealField rho;
    RealField w;
    std::vector<double> cos;
    std::vector<double> sin;
  };
  void kick(ComplexField& psi, Workspace& ws, double tau) const;

  EnergyFunctional functional_;
  double dt_;
  FourierMultiplier kinetic_;
};

ComplexField strang_step(const ComplexField& psi, double dt, const PhysicsParams& p);

/// Closed-form phase theta* = arg <psi, w>_Sigma minimizing ||psi - e^{i theta} w||_Sigma.
double orbit_phase(const ComplexField& psi, const ComplexField& w);
/// inf_theta ||psi - e^{i theta} w||_Sigma, evaluated at theta*.
double orbit_distance(const ComplexField& psi, const ComplexField& w);

/// Orbit distance to a fixed w, with w's transform cached.
class OrbitDistance {
 public:
  explicit OrbitDistance(const ComplexField& w);
  double operator()(const ComplexField& psi) const;
  double phase(const ComplexField& psi) const;

 private:
  struct Terms {
    cplx cross;
    ComplexField spectrum;
  };
  Terms terms(const ComplexField& psi) const;

  ComplexField w_;
  ComplexField w_hat_;
  std::vector<double> weight_;  // 1 + |x|^2
  std::vector<double> k2_;
};

using SnapshotSink = std::function<void(long long step, double t, const ComplexField& psi)>;

/// Propagates psi0 to t_final, sampling mass, energy and (when a reference is
/// given) the orbit distance. Throws BlowUpError carrying the samples so far.
StabilityReport propagate(const ComplexField& psi0, const PhysicsParams& p,
                          const DynamicsOptions& opts,
                          const ComplexField* orbit_reference = nullptr,
                          const SnapshotSink& sink = {});

/// Smooth seeded complex perturbation, L2-orthogonal to w and of unit Sigma norm.
ComplexField stability_perturbation(const ComplexField& w, std::uint64_t seed);

/// Propagates w + delta * stability_perturbation(w, seed) and records the
/// distance to the orbit {e^{i theta} w}.
StabilityReport stability_experiment(const ComplexField& ground_state, const PhysicsParams& p,
                                     double delta, const DynamicsOptions& opts,
                                     std::uint64_t seed = 1);

/// As above, computing the ground state first. Refuses the unstable regime.
StabilityReport stability_experiment(const PhysicsParams& p, const Grid3D& grid, double delta,
                                     const DynamicsOptions& opts, const SolverOptions& solver,
                                     std::uint64_t seed = 1);

}  // namespace dgpe
