#pragma once

#include <string>
#include <vector>

#include "dgpe/energy.hpp"
#include "dgpe/spectral.hpp"

namespace dgpe {

enum class RegimeTag { Stable, Unstable };

struct Regime {
  RegimeTag tag = RegimeTag::Stable;
  /// Signed distance of lambda1 from its threshold: (4 pi / 3) lambda2 when
  /// lambda2 >= 0, -(8 pi / 3) lambda2 when lambda2 < 0. Stable iff >= 0.
  double margin = 0.0;

  bool stable() const { return tag == RegimeTag::Stable; }
};

/// Stable iff lambda1 >= (4 pi/3) lambda2 for lambda2 > 0, lambda1 >= -(8 pi/3)
/// lambda2 for lambda2 < 0, lambda1 >= 0 for lambda2 = 0. The boundary counts
/// as stable. In the unstable regime the constrained infimum is -inf.
Regime classify(double lambda1, double lambda2);

std::string to_string(RegimeTag tag);

/// Anisotropic trial family u_eps(x) = eps^-1 f1(x1/eps, x2/eps) h^-1/2 f2(x3/h)
/// with h = eps^h_exponent. f1 and f2 are mollifier bumps exp(-1/(1-s^2))
/// of the given support radii, each normalized to L2 mass c on the grid.
struct WitnessOptions {
  double transverse_radius = 0.25;
  double axial_radius = 0.25;
  double h_exponent = 0.5;
  /// Experimental, for lambda2 < 0: compress along x3 at rate eps and let the
  /// (x1, x2) width be h, which drives khat toward 8 pi / 3 instead.
  bool compress_axial = false;
  /// Minimum number of grid spacings across each support diameter.
  double min_points_per_support = 8.0;
};

/// Raised when the scaled bumps are not resolved by the grid or do not fit in the box.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double min_epsilon)
      : Error(what), min_epsilon_(min_epsilon) {}
  double min_epsilon() const { return min_epsilon_; }

 private:
  double min_epsilon_;
};

double witness_h(double epsilon, const WitnessOptions& opts = {});
/// Smallest epsilon whose bumps are resolved on this grid.
double witness_min_epsilon(const Grid3D& grid, const WitnessOptions& opts = {});
ComplexField witness_field(double epsilon, double c, const Grid3D& grid,
                           const WitnessOptions& opts = {});

struct CollapseWitnessReport {
  std::vector<double> epsilons;
  std::vector<double> h_values;
  std::vector<double> energies;
  std::vector<double> masses;
  std::vector<EnergyParts> parts;
  /// int (l1 + l2 khat)|rho^|^2 scaled by eps^2 h (h^2 eps when compressing
  /// along x3); tends to a negative
  /// multiple of l1 - (4 pi/3) l2 along the family when that is negative.
  std::vector<double> normalized_interaction;
  bool verdict = false;  // energies strictly decreasing and the last one < 0
};

/// Energies of the trial family along a strictly decreasing epsilon sweep.
CollapseWitnessReport witness_report(const PhysicsParams& p, const Grid3D& grid,
                                     const std::vector<double>& epsilons,
                                     const WitnessOptions& opts = {});

}  // namespace dgpe
