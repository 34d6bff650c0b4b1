#include "dgpe/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dgpe/regimes.hpp"

namespace dgpe {

void SolverOptions::validate() const {
  if (!(tol_residual > 0.0)) throw Error("solver: tol_residual must be > 0");
  if (max_iters < 1) throw Error("solver: max_iters must be >= 1");
  if (!(step_init > 0.0)) throw Error("solver: step_init must be > 0");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw Error("solver: backtrack_factor must lie in (0, 1)");
  }
  if (initial_guess == InitialGuess::provided && !provided) {
    throw Error("solver: initial_guess = provided but no field given");
  }
}

ComplexField gaussian_state(const Grid3D& grid, double c) {
  ComplexField u(grid);
  const std::vector<double> r2 = grid.radius_sq_table();
  const double a = c * std::pow(std::numbers::pi, -0.75);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = a * std::exp(-0.5 * r2[i]);
  return u;
}

ComplexField project_sphere(const ComplexField& u, double c) {
  const double n2 = l2_norm_sq(u);
  if (!(n2 > 0.0)) throw Error("project_sphere: zero field");
  return scaled(u, c / std::sqrt(n2));
}

ComplexField phase_align(const ComplexField& u) {
  if (!(l2_norm_sq(u) > 0.0)) throw Error("phase_align: zero field");
  cplx s = 0.0;
  for (const cplx& v : u.values()) s += v * std::abs(v);
  if (std::abs(s) == 0.0) return u;
  return scaled(u, std::conj(s) / std::abs(s));
}

namespace {

ComplexField random_initial(const Grid3D& grid, double c, double amplitude, std::uint64_t seed) {
  ComplexField u = gaussian_state(grid, c);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (cplx& v : u.data()) {
    const double re = dist(rng);
    const double im = dist(rng);
    v *= 1.0 + amplitude * cplx(re, im);
  }
  return u;
}

ComplexField initial_state(const Grid3D& grid, const PhysicsParams& p, const SolverOptions& o) {
  switch (o.initial_guess) {
    case InitialGuess::gaussian:
      return gaussian_state(grid, p.mass_c);
    case InitialGuess::random:
      return random_initial(grid, p.mass_c, o.random_amplitude, o.seed);
    case InitialGuess::provided:
      require_same_grid(grid, o.provided->grid());
      return *o.provided;
  }
  throw Error("unknown initial guess");
}

// Symmetric kinetic/trap preconditioner (alpha+V)^-1/2 (alpha - Lap/2)^-1 (alpha+V)^-1/2.
class Preconditioner {
 public:
  explicit Preconditioner(const EnergyFunctional& f) : f_(f) {}

  ComplexField apply(const ComplexField& r, double alpha) const {
    const auto trap = f_.trap_table();
    const auto k2 = f_.frequency_sq();
    ComplexField y(r.grid());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = r[i] / std::sqrt(alpha + trap[i]);
    std::vector<double> mult(k2.size());
    for (std::size_t i = 0; i < mult.size(); ++i) mult[i] = 1.0 / (alpha + 0.5 * k2[i]);
    y = apply_multiplier(y, mult);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] /= std::sqrt(alpha + trap[i]);
    return y;
  }

 private:
  const EnergyFunctional& f_;
};

struct Iterate {
  ComplexField u;
  double energy;
  double mu;
  double residual;
  ComplexField tangent;  // G + mu u
};

Iterate make_iterate(const EnergyFunctional& f, ComplexField u, double c2) {
  auto ev = f.evaluate(u);
  const double mu = -inner(ev.gradient, u).real() / c2;
  ComplexField r = axpy(ev.gradient, mu, u);
  const double res = std::sqrt(l2_norm_sq(r) / c2);
  return {std::move(u), ev.parts.total(), mu, res, std::move(r)};
}

}  // namespace

GroundStateResult minimize(const PhysicsParams& p, const Grid3D& grid, const SolverOptions& opts) {
  p.validate();
  opts.validate();
  const Regime regime = classify(p.lambda1, p.lambda2);
  if (!regime.stable()) {
    throw UnstableRegimeError(
        "unstable regime (margin " + std::to_string(regime.margin) +
            "): the constrained energy is unbounded below, no ground state exists; "
            "see the collapse witness",
        regime.margin);
  }

  const EnergyFunctional functional(grid, p);
  const Preconditioner precond(functional);
  const double c = p.mass_c;
  const double c2 = c * c;
  // Armijo sufficient-decrease constant.
  constexpr double kArmijo = 1e-4;
  // Energy differences below this are roundoff; there descent is judged by the residual.
  constexpr double kRoundoff = 1e-13;
  constexpr int kMaxBacktracks = 60;

  Iterate cur = make_iterate(functional, project_sphere(initial_state(grid, p, opts), c), c2);
  GroundStateResult result{cur.u, cur.energy, cur.mu, cur.residual, 0, false, {cur.energy}};

  double tau = opts.step_init;
  int it = 0;
  while (cur.residual > opts.tol_residual && it < opts.max_iters) {
    const double alpha = std::max(1.0, -cur.mu);
    const ComplexField dir =
        opts.preconditioned ? precond.apply(cur.tangent, alpha) : cur.tangent;
    const double slope = inner(cur.tangent, dir).real();

    bool accepted = false;
    bool first_try = true;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      Iterate trial = make_iterate(functional, project_sphere(axpy(cur.u, -tau, dir), c), c2);
      const bool finite = std::isfinite(trial.energy) && std::isfinite(trial.residual);
      const bool armijo = trial.energy <= cur.energy - 2.0 * kArmijo * tau * slope;
      const bool roundoff = std::abs(trial.energy - cur.energy) <=
                                kRoundoff * std::max(1.0, std::abs(cur.energy)) &&
                            trial.residual < cur.residual;
      if (finite && (armijo || roundoff)) {
        cur = std::move(trial);
        accepted = true;
        break;
      }
      tau *= opts.backtrack_factor;
      first_try = false;
    }
    if (!accepted) break;  // stagnated at roundoff
    ++it;
    result.energy_history.push_back(cur.energy);
    if (first_try) tau /= opts.backtrack_factor;
  }

  result.state = phase_align(cur.u);
  result.energy = cur.energy;
  result.mu = cur.mu;
  result.residual = cur.residual;
  result.iterations = it;
  result.converged = cur.residual <= opts.tol_residual;
  return result;
}

SymmetryReport symmetry_report(const ComplexField& u) {
  const Grid3D& g = u.grid();
  const auto& d = g.dims();
  const auto& len = g.half_lengths();
  if (d[0] != d[1] || len[0] != len[1]) {
    throw Error("symmetry_report: quarter turns need n1 == n2 and L1 == L2");
  }
  auto mirror = [](std::size_t i, std::size_t n) { return (n - i) % n; };
  SymmetryReport rep;
  for (std::size_t i3 = 0; i3 < d[2]; ++i3) {
    for (std::size_t i2 = 0; i2 < d[1]; ++i2) {
      for (std::size_t i1 = 0; i1 < d[0]; ++i1) {
        const cplx v = u[g.index(i1, i2, i3)];
        // (x1, x2) -> (-x2, x1)
        const cplx rot = u[g.index(mirror(i2, d[1]), i1, i3)];
        const cplx par = u[g.index(i1, i2, mirror(i3, d[2]))];
        rep.rotation_defect = std::max(rep.rotation_defect, std::abs(rot - v));
        rep.parity_defect = std::max(rep.parity_defect, std::abs(par - v));
      }
    }
  }
  const std::size_t o1 = d[0] / 2;
  const std::size_t o2 = d[1] / 2;
  const std::size_t o3 = d[2] / 2;
  for (std::size_t k = o1; k + 1 < d[0]; ++k) {
    const double rise = u[g.index(k + 1, o2, o3)].real() - u[g.index(k, o2, o3)].real();
    rep.monotone_violation_x1 = std::max(rep.monotone_violation_x1, rise);
  }
  for (std::size_t k = o3; k + 1 < d[2]; ++k) {
    const double rise = u[g.index(o1, o2, k + 1)].real() - u[g.index(o1, o2, k)].real();
    rep.monotone_violation_x3 = std::max(rep.monotone_violation_x3, rise);
  }
  return rep;
}

}  // namespace dgpe
