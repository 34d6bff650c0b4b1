#include "dgpe/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dgpe {

Regime classify(double lambda1, double lambda2) {
  constexpr double kAttractive = 4.0 * std::numbers::pi / 3.0;
  constexpr double kRepulsive = 8.0 * std::numbers::pi / 3.0;
  Regime r;
  if (lambda2 > 0.0) {
    r.margin = lambda1 - kAttractive * lambda2;
  } else if (lambda2 < 0.0) {
    r.margin = lambda1 + kRepulsive * lambda2;
  } else {
    r.margin = lambda1;
  }
  r.tag = r.margin >= 0.0 ? RegimeTag::Stable : RegimeTag::Unstable;
  return r;
}

std::string to_string(RegimeTag tag) {
  return tag == RegimeTag::Stable ? "Stable" : "Unstable";
}

namespace {

double bump(double s2) { return s2 < 1.0 ? std::exp(-1.0 / (1.0 - s2)) : 0.0; }

struct Widths {
  double transverse;
  double axial;
};

Widths widths(double epsilon, const WitnessOptions& o) {
  const double h = witness_h(epsilon, o);
  if (o.compress_axial) return {h * o.transverse_radius, epsilon * o.axial_radius};
  return {epsilon * o.transverse_radius, h * o.axial_radius};
}

void validate(const WitnessOptions& o) {
  if (!(o.transverse_radius > 0.0) || !(o.axial_radius > 0.0)) {
    throw Error("witness: support radii must be > 0");
  }
  if (!(o.h_exponent > 0.0)) throw Error("witness: h_exponent must be > 0");
  if (!(o.min_points_per_support > 0.0)) throw Error("witness: min_points_per_support must be > 0");
}

}  // namespace

double witness_h(double epsilon, const WitnessOptions& opts) {
  return std::pow(epsilon, opts.h_exponent);
}

double witness_min_epsilon(const Grid3D& grid, const WitnessOptions& o) {
  validate(o);
  const double m = o.min_points_per_support;
  const double dx_t = std::max(grid.spacing(0), grid.spacing(1));
  const double dx_a = grid.spacing(2);
  // Width w(eps) must reach m * dx / 2 in every direction.
  if (o.compress_axial) {
    const double from_axial = m * dx_a / (2.0 * o.axial_radius);
    const double from_trans = std::pow(m * dx_t / (2.0 * o.transverse_radius), 1.0 / o.h_exponent);
    return std::max(from_axial, from_trans);
  }
  const double from_trans = m * dx_t / (2.0 * o.transverse_radius);
  const double from_axial = std::pow(m * dx_a / (2.0 * o.axial_radius), 1.0 / o.h_exponent);
  return std::max(from_trans, from_axial);
}

ComplexField witness_field(double epsilon, double c, const Grid3D& grid, const WitnessOptions& o) {
  validate(o);
  if (!(epsilon > 0.0)) throw Error("witness: epsilon must be > 0");
  if (!(c > 0.0)) throw Error("witness: mass c must be > 0");
  const double eps_min = witness_min_epsilon(grid, o);
  const Widths w = widths(epsilon, o);
  const auto& len = grid.half_lengths();
  if (epsilon < eps_min) {
    std::ostringstream msg;
    msg << "witness: epsilon = " << epsilon << " is under-resolved on this grid; "
        << "the minimal admissible epsilon is " << eps_min;
    throw ResolutionError(msg.str(), eps_min);
  }
  if (w.transverse > std::min(len[0], len[1]) || w.axial > len[2]) {
    std::ostringstream msg;
    msg << "witness: epsilon = " << epsilon << " gives a support (" << w.transverse << ", "
        << w.axial << ") that does not fit in the box";
    throw ResolutionError(msg.str(), eps_min);
  }

  const auto& d = grid.dims();
  std::vector<double> f1(d[0] * d[1]);
  double m1 = 0.0;
  for (std::size_t i2 = 0; i2 < d[1]; ++i2) {
    for (std::size_t i1 = 0; i1 < d[0]; ++i1) {
      const double x1 = grid.node(0, i1) / w.transverse;
      const double x2 = grid.node(1, i2) / w.transverse;
      const double v = bump(x1 * x1 + x2 * x2);
      f1[i1 + d[0] * i2] = v;
      m1 += v * v;
    }
  }
  m1 *= grid.spacing(0) * grid.spacing(1);
  std::vector<double> f2(d[2]);
  double m2 = 0.0;
  for (std::size_t i3 = 0; i3 < d[2]; ++i3) {
    const double x3 = grid.node(2, i3) / w.axial;
    f2[i3] = bump(x3 * x3);
    m2 += f2[i3] * f2[i3];
  }
  m2 *= grid.spacing(2);

  // Each factor carries L2 mass c, so the product carries c^2.
  const double a1 = std::sqrt(c / m1);
  const double a2 = std::sqrt(c / m2);
  ComplexField u(grid);
  for (std::size_t i3 = 0; i3 < d[2]; ++i3) {
    for (std::size_t i2 = 0; i2 < d[1]; ++i2) {
      for (std::size_t i1 = 0; i1 < d[0]; ++i1) {
        u[grid.index(i1, i2, i3)] = a1 * f1[i1 + d[0] * i2] * a2 * f2[i3];
      }
    }
  }
  return u;
}

CollapseWitnessReport witness_report(const PhysicsParams& p, const Grid3D& grid,
                                     const std::vector<double>& epsilons,
                                     const WitnessOptions& opts) {
  p.validate();
  if (epsilons.empty()) throw Error("witness: empty epsilon sweep");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw Error("witness: epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw Error("witness: epsilons must be strictly decreasing");
    }
  }
  const EnergyFunctional functional(grid, p);
  CollapseWitnessReport rep;
  for (double eps : epsilons) {
    const ComplexField u = witness_field(eps, p.mass_c, grid, opts);
    const EnergyParts parts = functional.parts(u);
    const double h = witness_h(eps, opts);
    rep.epsilons.push_back(eps);
    rep.h_values.push_back(h);
    rep.energies.push_back(parts.total());
    rep.masses.push_back(l2_norm_sq(u));
    rep.parts.push_back(parts);
    // parts.interaction() = 1/2 int w |rho^|^2 (with the (2 pi)^-3 factor).
    const double volume_scale = opts.compress_axial ? h * h * eps : eps * eps * h;
    rep.normalized_interaction.push_back(2.0 * parts.interaction() * volume_scale);
  }
  bool decreasing = rep.energies.size() >= 2;
  for (std::size_t i = 1; i < rep.energies.size(); ++i) {
    decreasing = decreasing && rep.energies[i] < rep.energies[i - 1];
  }
  rep.verdict = decreasing && rep.energies.back() < 0.0;
  return rep;
}

}  // namespace dgpe
