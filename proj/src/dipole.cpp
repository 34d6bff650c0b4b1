#include "dgpe/dipole.hpp"

#include <cmath>
#include <numbers>

namespace dgpe {

double khat(const Vec3& xi) {
  const double t1 = xi[0] * xi[0];
  const double t2 = xi[1] * xi[1];
  const double t3 = xi[2] * xi[2];
  const double r2 = t1 + t2 + t3;
  if (r2 == 0.0) return 0.0;
  return (4.0 * std::numbers::pi / 3.0) * (2.0 * t3 - t1 - t2) / r2;
}

std::vector<double> khat_table(const Grid3D& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = khat(grid.frequency_point(i));
  return out;
}

DipoleOperator::DipoleOperator(const Grid3D& grid)
    : grid_(grid), table_(khat_table(grid)), conv_(grid, table_) {}

RealField DipoleOperator::potential(const RealField& rho) const {
  require_same_grid(grid_, rho.grid());
  RealField out(grid_);
  conv_.apply(rho.values(), out.values());
  return out;
}

void DipoleOperator::potential(const RealField& rho, RealField& out) const {
  require_same_grid(grid_, rho.grid());
  require_same_grid(grid_, out.grid());
  conv_.apply(rho.values(), out.values());
}

double DipoleOperator::quadratic(const RealField& rho) const {
  require_same_grid(grid_, rho.grid());
  return conv_.quadratic(rho.values());
}

RealField dipole_potential(const RealField& rho) { return DipoleOperator(rho.grid()).potential(rho); }

double dipole_quadratic(const RealField& rho) { return DipoleOperator(rho.grid()).quadratic(rho); }

}  // namespace dgpe
