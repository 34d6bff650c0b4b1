#pragma once

#include <functional>
#include <optional>

#include "dgpe/dipole.hpp"
#include "dgpe/spectral.hpp"

namespace dgpe {

struct PhysicsParams {
  double lambda1 = 0.0;  // contact strength
  double lambda2 = 0.0;  // dipole strength
  double mass_c = 1.0;   // constraint ||u||_2^2 = mass_c^2

  void validate() const;
};

struct EnergyParts {
  double kinetic = 0.0;    // 1/2 ||grad u||^2
  double potential = 0.0;  // 1/2 int |x|^2 |u|^2
  double contact = 0.0;    // lambda1/2 ||u||_4^4
  double dipolar = 0.0;    // lambda2/2 int (K * |u|^2) |u|^2

  double interaction() const { return contact + dipolar; }
  double total() const { return kinetic + potential + contact + dipolar; }
};

/// Trap potential V(x). The harmonic |x|^2/2 is the only one exercised.
using TrapPotential = std::function<double(const Vec3&)>;

/// Energy of the dipolar GPE on one grid, with the kinetic, trap and dipole
/// tables built once.
class EnergyFunctional {
 public:
  EnergyFunctional(const Grid3D& grid, const PhysicsParams& params,
                   const TrapPotential& trap = {});

  const Grid3D& grid() const { return grid_; }
  const PhysicsParams& params() const { return params_; }
  std::span<const double> trap_table() const { return trap_; }
  /// |xi|^2 in the spectral layout.
  std::span<const double> frequency_sq() const { return k2_; }
  const DipoleOperator& dipole() const { return dipole_; }

  /// Real-space form: quartic and dipole terms integrated against rho.
  EnergyParts parts(const ComplexField& u) const;
  double energy(const ComplexField& u) const { return parts(u).total(); }
  /// Frequency-space form: the interaction as (2 pi)^-3 int (l1 + l2 khat)|rho^|^2.
  double energy_fourier(const ComplexField& u) const;

  /// G(u) = -1/2 Lap u + V u + l1 |u|^2 u + l2 (K * |u|^2) u, so that
  /// dE(u + t v)/dt at t = 0 equals 2 Re <G(u), v>.
  ComplexField gradient(const ComplexField& u) const;

  struct Evaluation {
    EnergyParts parts;
    ComplexField gradient;
  };
  Evaluation evaluate(const ComplexField& u) const;

  /// W(rho) = V + l1 rho + l2 K * rho, the multiplicative part of G.
  RealField mean_field(const RealField& rho) const;
  /// As above into a preallocated field distinct from rho.
  void mean_field(const RealField& rho, RealField& out) const;

 private:
  void check(const ComplexField& u) const;

  Grid3D grid_;
  PhysicsParams params_;
  std::vector<double> trap_;
  std::vector<double> k2_;
  DipoleOperator dipole_;
};

double energy_direct(const ComplexField& u, const PhysicsParams& p);
double energy_fourier(const ComplexField& u, const PhysicsParams& p);
ComplexField energy_gradient(const ComplexField& u, const PhysicsParams& p);

/// mu = -Re <G(u), u> / ||u||^2, the frequency of the standing wave e^{i mu t} u.
double chemical_potential(const ComplexField& u, const PhysicsParams& p);
/// ||G(u) + mu u|| / ||u||.
double el_residual(const ComplexField& u, double mu, const PhysicsParams& p);

class WeinsteinUndefined : public Error {
 public:
  using Error::Error;
};

/// ||grad v||^3 ||v|| / (-l1 ||v||_4^4 - l2 <K * |v|^2, |v|^2>).
/// Throws WeinsteinUndefined when the denominator is not positive.
double weinstein(const ComplexField& v, double lambda1, double lambda2);

}  // namespace dgpe
