#include "dgpe/energy.hpp"

#include <cmath>

namespace dgpe {

void PhysicsParams::validate() const {
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2)) {
    throw Error("physics: lambda1 and lambda2 must be finite");
  }
  if (!(mass_c > 0.0) || !std::isfinite(mass_c)) throw Error("physics: mass_c must be > 0");
}

namespace {

std::vector<double> tabulate_trap(const Grid3D& grid, const TrapPotential& trap) {
  if (!trap) {
    std::vector<double> t = grid.radius_sq_table();
    for (double& v : t) v *= 0.5;
    return t;
  }
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = trap(grid.node_point(i));
  return t;
}

double zero_field_guard(const ComplexField& u) {
  const double n2 = l2_norm_sq(u);
  if (!(n2 > 0.0)) throw Error("operation undefined for the zero field");
  return n2;
}

}  // namespace

EnergyFunctional::EnergyFunctional(const Grid3D& grid, const PhysicsParams& params,
                                   const TrapPotential& trap)
    : grid_(grid),
      params_(params),
      trap_(tabulate_trap(grid, trap)),
      k2_(grid.frequency_sq_table()),
      dipole_(grid) {
  params_.validate();
}

void EnergyFunctional::check(const ComplexField& u) const { require_same_grid(grid_, u.grid()); }

RealField EnergyFunctional::mean_field(const RealField& rho) const {
  RealField w(grid_);
  mean_field(rho, w);
  return w;
}

void EnergyFunctional::mean_field(const RealField& rho, RealField& w) const {
  require_same_grid(grid_, rho.grid());
  require_same_grid(grid_, w.grid());
  if (params_.lambda2 != 0.0) {
    dipole_.potential(rho, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = trap_[i] + params_.lambda1 * rho[i] + params_.lambda2 * w[i];
    }
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = trap_[i] + params_.lambda1 * rho[i];
  }
}

EnergyFunctional::Evaluation EnergyFunctional::evaluate(const ComplexField& u) const {
  check(u);
  const double dv = grid_.cell_volume();
  const RealField rho = density(u);

  EnergyParts parts;
  ComplexField spec = forward_transform(u);
  double kin = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    kin += k2_[i] * std::norm(spec[i]);
    spec[i] *= 0.5 * k2_[i];
  }
  parts.kinetic = 0.5 * kin / grid_.box_volume();
  ComplexField grad = inverse_transform(spec);

  std::vector<double> phi;
  if (params_.lambda2 != 0.0) phi = dipole_.potential(rho).data();

  double pot = 0.0;
  double quartic = 0.0;
  double dip = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    pot += trap_[i] * rho[i];
    quartic += rho[i] * rho[i];
    double w = trap_[i] + params_.lambda1 * rho[i];
    if (!phi.empty()) {
      dip += phi[i] * rho[i];
      w += params_.lambda2 * phi[i];
    }
    grad[i] += w * u[i];
  }
  parts.potential = pot * dv;
  parts.contact = 0.5 * params_.lambda1 * quartic * dv;
  parts.dipolar = 0.5 * params_.lambda2 * dip * dv;
  return {parts, std::move(grad)};
}

EnergyParts EnergyFunctional::parts(const ComplexField& u) const {
  check(u);
  const double dv = grid_.cell_volume();
  const RealField rho = density(u);
  EnergyParts parts;
  const ComplexField spec = forward_transform(u);
  double kin = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) kin += k2_[i] * std::norm(spec[i]);
  parts.kinetic = 0.5 * kin / grid_.box_volume();

  double pot = 0.0;
  double quartic = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    pot += trap_[i] * rho[i];
    quartic += rho[i] * rho[i];
  }
  parts.potential = pot * dv;
  parts.contact = 0.5 * params_.lambda1 * quartic * dv;
  if (params_.lambda2 != 0.0) {
    const RealField phi = dipole_.potential(rho);
    double dip = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dip += phi[i] * rho[i];
    parts.dipolar = 0.5 * params_.lambda2 * dip * dv;
  }
  return parts;
}

double EnergyFunctional::energy_fourier(const ComplexField& u) const {
  check(u);
  const ComplexField uhat = forward_transform(u);
  const ComplexField rhohat = forward_transform(density(u));
  const auto kh = dipole_.multiplier();
  double kin = 0.0;
  double inter = 0.0;
  for (std::size_t i = 0; i < uhat.size(); ++i) {
    kin += k2_[i] * std::norm(uhat[i]);
    inter += (params_.lambda1 + params_.lambda2 * kh[i]) * std::norm(rhohat[i]);
  }
  double pot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) pot += trap_[i] * std::norm(u[i]);
  return 0.5 * (kin + inter) / grid_.box_volume() + pot * grid_.cell_volume();
}

ComplexField EnergyFunctional::gradient(const ComplexField& u) const {
  return evaluate(u).gradient;
}

double energy_direct(const ComplexField& u, const PhysicsParams& p) {
  return EnergyFunctional(u.grid(), p).energy(u);
}

double energy_fourier(const ComplexField& u, const PhysicsParams& p) {
  return EnergyFunctional(u.grid(), p).energy_fourier(u);
}

ComplexField energy_gradient(const ComplexField& u, const PhysicsParams& p) {
  return EnergyFunctional(u.grid(), p).gradient(u);
}

double chemical_potential(const ComplexField& u, const PhysicsParams& p) {
  const double n2 = zero_field_guard(u);
  return -inner(energy_gradient(u, p), u).real() / n2;
}

double el_residual(const ComplexField& u, double mu, const PhysicsParams& p) {
  const double n2 = zero_field_guard(u);
  const ComplexField r = axpy(energy_gradient(u, p), mu, u);
  return std::sqrt(l2_norm_sq(r) / n2);
}

double weinstein(const ComplexField& v, double lambda1, double lambda2) {
  const RealField rho = density(v);
  double quartic = 0.0;
  for (double r : rho.values()) quartic += r * r;
  quartic *= v.grid().cell_volume();
  const double dip = lambda2 != 0.0 ? dipole_quadratic(rho) : 0.0;
  const double denominator = -lambda1 * quartic - lambda2 * dip;
  if (!(denominator > 0.0)) {
    throw WeinsteinUndefined("weinstein functional undefined: denominator " +
                             std::to_string(denominator) + " is not positive");
  }
  const double g = std::sqrt(grad_norm_sq(v));
  return g * g * g * std::sqrt(l2_norm_sq(v)) / denominator;
}

}  // namespace dgpe
