#include "dgpe/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dgpe/regimes.hpp"
#include "phase_rotation.hpp"

namespace dgpe {

void DynamicsOptions::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("dynamics: dt must be > 0");
  if (!(t_final >= dt) || !std::isfinite(t_final)) throw Error("dynamics: t_final must be >= dt");
  if (snapshot_stride < 0) throw Error("dynamics: snapshot_stride must be >= 0");
  if (monitor_stride < 1) throw Error("dynamics: monitor_stride must be >= 1");
  if (!(blowup_amplitude_factor > 1.0)) throw Error("dynamics: blowup_amplitude_factor must be > 1");
  if (!(resolution_loss_fraction > 0.0)) throw Error("dynamics: resolution_loss_fraction must be > 0");
}

long long DynamicsOptions::steps() const {
  return std::max(1LL, std::llround(t_final / dt));
}

// ---------------------------------------------------------------- stepping

namespace {

std::vector<cplx> kinetic_phases(const Grid3D& grid, double dt) {
  std::vector<cplx> out(grid.size());
  const std::vector<double> k2 = grid.frequency_sq_table();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::polar(1.0, -0.5 * dt * k2[i]);
  return out;
}

}  // namespace

SplitStepPropagator::SplitStepPropagator(const Grid3D& grid, const PhysicsParams& p, double dt)
    : functional_(grid, p),
      dt_(dt),
      kinetic_(grid, std::span<const cplx>(kinetic_phases(grid, dt))) {
  if (!std::isfinite(dt) || dt == 0.0) throw Error("propagator: dt must be finite and nonzero");
}

SplitStepPropagator::Workspace::Workspace(const Grid3D& g)
    : rho(g), w(g), cos(g.size()), sin(g.size()) {}

// psi <- exp(-i tau W(|psi|^2)) psi
void SplitStepPropagator::kick(ComplexField& psi, Workspace& ws, double tau) const {
  for (std::size_t i = 0; i < psi.size(); ++i) ws.rho[i] = std::norm(psi[i]);
  functional_.mean_field(ws.rho, ws.w);
  detail::rotate_phases(psi.values(), ws.w.values(), tau, ws.cos, ws.sin);
}

void SplitStepPropagator::advance(ComplexField& psi, long long n) const {
  require_same_grid(functional_.grid(), psi.grid());
  if (n <= 0) return;
  Workspace ws(psi.grid());
  kick(psi, ws, 0.5 * dt_);
  for (long long k = 0; k < n; ++k) {
    kinetic_.apply(psi.values());
    kick(psi, ws, k + 1 < n ? dt_ : 0.5 * dt_);
  }
}

ComplexField strang_step(const ComplexField& psi, double dt, const PhysicsParams& p) {
  ComplexField out = psi;
  SplitStepPropagator(psi.grid(), p, dt).advance(out, 1);
  return out;
}

// ---------------------------------------------------------------- orbit distance

OrbitDistance::OrbitDistance(const ComplexField& w)
    : w_(w),
      w_hat_(forward_transform(w)),
      weight_(w.grid().radius_sq_table()),
      k2_(w.grid().frequency_sq_table()) {
  for (double& v : weight_) v += 1.0;
  if (!(sigma_norm_sq(w) > 0.0)) throw Error("orbit_distance: reference has zero Sigma norm");
}

OrbitDistance::Terms OrbitDistance::terms(const ComplexField& psi) const {
  require_same_grid(w_.grid(), psi.grid());
  const Grid3D& g = psi.grid();
  ComplexField spec = forward_transform(psi);
  cplx phys = 0.0;
  cplx freq = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    phys += weight_[i] * psi[i] * std::conj(w_[i]);
    freq += k2_[i] * spec[i] * std::conj(w_hat_[i]);
  }
  return {phys * g.cell_volume() + freq / g.box_volume(), std::move(spec)};
}

double OrbitDistance::phase(const ComplexField& psi) const {
  const cplx cross = terms(psi).cross;
  return std::abs(cross) == 0.0 ? 0.0 : std::arg(cross);
}

double OrbitDistance::operator()(const ComplexField& psi) const {
  const Terms t = terms(psi);
  const cplx z = std::abs(t.cross) == 0.0 ? cplx(1.0) : t.cross / std::abs(t.cross);
  const Grid3D& g = psi.grid();
  // Evaluate the difference directly; the expanded quadratic form would lose
  // half the digits near the orbit.
  double phys = 0.0;
  double freq = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    phys += weight_[i] * std::norm(psi[i] - z * w_[i]);
    freq += k2_[i] * std::norm(t.spectrum[i] - z * w_hat_[i]);
  }
  return std::sqrt(phys * g.cell_volume() + freq / g.box_volume());
}

double orbit_phase(const ComplexField& psi, const ComplexField& w) {
  return OrbitDistance(w).phase(psi);
}

double orbit_distance(const ComplexField& psi, const ComplexField& w) {
  return OrbitDistance(w)(psi);
}

// ---------------------------------------------------------------- propagation

namespace {

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const cplx& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

// Fraction of the L2 mass carried by modes in the outer third of any axis.
double spectral_tail_fraction(const ComplexField& psi) {
  const Grid3D& g = psi.grid();
  const ComplexField spec = forward_transform(psi);
  const auto& d = g.dims();
  double tail = 0.0;
  double total = 0.0;
  for (std::size_t idx = 0; idx < spec.size(); ++idx) {
    const auto k = g.unravel(idx);
    const double a = std::norm(spec[idx]);
    total += a;
    bool outer = false;
    for (int j = 0; j < 3; ++j) {
      const auto off = static_cast<long long>(k[j]) - static_cast<long long>(d[j] / 2);
      outer = outer || 3 * std::llabs(off) > static_cast<long long>(d[j]);
    }
    if (outer) tail += a;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

StabilityReport propagate(const ComplexField& psi0, const PhysicsParams& p,
                          const DynamicsOptions& opts, const ComplexField* orbit_reference,
                          const SnapshotSink& sink) {
  opts.validate();
  p.validate();
  if (!psi0.all_finite()) throw Error("propagate: initial field is not finite");
  const long long n = opts.steps();
  const double dt = opts.t_final / static_cast<double>(n);
  const SplitStepPropagator prop(psi0.grid(), p, dt);
  const EnergyFunctional& functional = prop.functional();

  std::optional<OrbitDistance> orbit;
  if (orbit_reference && opts.monitor_orbit_distance) orbit.emplace(*orbit_reference);

  StabilityReport rep;
  const double amp0 = max_abs(psi0);
  const double tail0 = spectral_tail_fraction(psi0);
  double mass0 = 0.0;
  double energy0 = 0.0;

  auto sample = [&](long long step, const ComplexField& psi) {
    const double t = static_cast<double>(step) * dt;
    if (!psi.all_finite()) {
      std::ostringstream msg;
      msg << "non-finite values at t = " << t;
      throw BlowUpError(msg.str(), t, rep);
    }
    rep.times.push_back(t);
    if (opts.monitor_mass) {
      const double m = l2_norm_sq(psi);
      if (step == 0) mass0 = m;
      rep.mass_series.push_back(m);
      rep.mass_drift = std::max(rep.mass_drift, std::abs(m - mass0) / mass0);
    }
    if (opts.monitor_energy) {
      const double e = functional.energy(psi);
      if (step == 0) energy0 = e;
      rep.energy_series.push_back(e);
      rep.energy_drift = std::max(rep.energy_drift, std::abs(e - energy0));
    }
    if (orbit) {
      const double d = (*orbit)(psi);
      if (step == 0) rep.initial_sigma_distance = d;
      rep.orbit_distance_series.push_back(d);
      rep.sup_orbit_distance = std::max(rep.sup_orbit_distance, d);
    }
    const double amp = max_abs(psi);
    const double tail = spectral_tail_fraction(psi);
    if (amp > opts.blowup_amplitude_factor * amp0 || tail > tail0 + opts.resolution_loss_fraction) {
      std::ostringstream msg;
      msg << "blow-up detected at t = " << t << " (max|psi| = " << amp
          << ", spectral tail fraction = " << tail << ")";
      throw BlowUpError(msg.str(), t, rep);
    }
  };

  ComplexField psi = psi0;
  sample(0, psi);
  if (sink && opts.snapshot_stride > 0) sink(0, 0.0, psi);

  auto next_multiple = [](long long step, long long stride) { return (step / stride + 1) * stride; };
  long long step = 0;
  while (step < n) {
    long long next = std::min(n, next_multiple(step, opts.monitor_stride));
    if (opts.snapshot_stride > 0) next = std::min(next, next_multiple(step, opts.snapshot_stride));
    prop.advance(psi, next - step);
    step = next;
    if (step % opts.monitor_stride == 0 || step == n) sample(step, psi);
    if (sink && opts.snapshot_stride > 0 && step % opts.snapshot_stride == 0) {
      sink(step, static_cast<double>(step) * dt, psi);
    }
  }
  return rep;
}

// ---------------------------------------------------------------- stability

ComplexField stability_perturbation(const ComplexField& w, std::uint64_t seed) {
  const Grid3D& g = w.grid();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexField z(g);
  for (cplx& v : z.data()) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = cplx(re, im);
  }
  std::vector<double> smooth = g.frequency_sq_table();
  for (double& v : smooth) v = std::exp(-0.5 * v);
  z = apply_multiplier(z, smooth);
  const std::vector<double> r2 = g.radius_sq_table();
  for (std::size_t i = 0; i < z.size(); ++i) z[i] *= std::exp(-0.25 * r2[i]);

  const double ww = l2_norm_sq(w);
  if (!(ww > 0.0)) throw Error("stability_perturbation: zero reference");
  z = axpy(z, -inner(z, w) / ww, w);
  return scaled(z, 1.0 / std::sqrt(sigma_norm_sq(z)));
}

StabilityReport stability_experiment(const ComplexField& ground_state, const PhysicsParams& p,
                                     double delta, const DynamicsOptions& opts,
                                     std::uint64_t seed) {
  if (!(delta >= 0.0)) throw Error("stability: delta must be >= 0");
  const Regime regime = classify(p.lambda1, p.lambda2);
  if (!regime.stable()) {
    throw UnstableRegimeError("stability: unstable regime, no ground-state orbit", regime.margin);
  }
  ComplexField psi0 = ground_state;
  if (delta > 0.0) psi0 = axpy(ground_state, delta, stability_perturbation(ground_state, seed));
  DynamicsOptions o = opts;
  o.monitor_orbit_distance = true;
  return propagate(psi0, p, o, &ground_state);
}

StabilityReport stability_experiment(const PhysicsParams& p, const Grid3D& grid, double delta,
                                     const DynamicsOptions& opts, const SolverOptions& solver,
                                     std::uint64_t seed) {
  const GroundStateResult gs = minimize(p, grid, solver);
  return stability_experiment(gs.state, p, delta, opts, seed);
}

}  // namespace dgpe
