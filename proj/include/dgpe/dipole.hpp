#pragma once

#include "dgpe/spectral.hpp"

namespace dgpe {

/// Fourier multiplier of the dipole kernel (1 - 3 cos^2 theta) / |x|^3 for
/// dipoles along e3: (4 pi / 3)(2 xi3^2 - xi1^2 - xi2^2) / |xi|^2.
/// The value at xi = 0 is 0.
double khat(const Vec3& xi);

inline constexpr double kKhatMin = -4.0 * 3.14159265358979323846 / 3.0;
inline constexpr double kKhatMax = 8.0 * 3.14159265358979323846 / 3.0;

/// khat tabulated on the spectral layout of a grid.
std::vector<double> khat_table(const Grid3D& grid);

/// Convolution rho -> K * rho evaluated through khat; reuses one multiplier table.
class DipoleOperator {
 public:
  explicit DipoleOperator(const Grid3D& grid);

  const Grid3D& grid() const { return grid_; }
  std::span<const double> multiplier() const { return table_; }

  RealField potential(const RealField& rho) const;
  /// Into a preallocated field; out may alias rho.
  void potential(const RealField& rho, RealField& out) const;
  /// (2 pi)^-3 times the frequency quadrature of khat |rho^|^2.
  double quadratic(const RealField& rho) const;

 private:
  Grid3D grid_;
  std::vector<double> table_;
  RealFourierMultiplier conv_;
};

RealField dipole_potential(const RealField& rho);
double dipole_quadratic(const RealField& rho);

}  // namespace dgpe
