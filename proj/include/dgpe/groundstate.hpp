#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dgpe/energy.hpp"
#include "dgpe/spectral.hpp"

namespace dgpe {

enum class InitialGuess { gaussian, random, provided };

struct SolverOptions {
  InitialGuess initial_guess = InitialGuess::gaussian;
  std::optional<ComplexField> provided;  // used when initial_guess == provided
  double step_init = 0.5;
  double tol_residual = 1e-8;
  int max_iters = 5000;
  double backtrack_factor = 0.5;
  std::uint64_t seed = 1;
  /// Relative amplitude of the seeded perturbation for InitialGuess::random.
  double random_amplitude = 0.3;
  /// Descend along the kinetic/trap-preconditioned gradient instead of the
  /// plain L2 gradient.
  bool preconditioned = true;

  void validate() const;
};

struct GroundStateResult {
  ComplexField state;
  double energy = 0.0;
  double mu = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;
};

/// Raised by minimize() outside the stable regime, where the infimum is -inf.
class UnstableRegimeError : public Error {
 public:
  UnstableRegimeError(const std::string& what, double margin) : Error(what), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

/// c pi^{-3/4} exp(-|x|^2 / 2): the mass-c oscillator ground state.
ComplexField gaussian_state(const Grid3D& grid, double c);

/// Rescales u onto the sphere ||u||_2^2 = c^2.
ComplexField project_sphere(const ComplexField& u, double c);

/// Multiplies u by the unimodular constant that makes <u, |u|> real and >= 0.
ComplexField phase_align(const ComplexField& u);

/// Minimizes E over the mass sphere by projected gradient descent with
/// Armijo backtracking; stops when el_residual <= tol_residual.
/// A run that hits max_iters returns its last iterate with converged = false.
GroundStateResult minimize(const PhysicsParams& p, const Grid3D& grid, const SolverOptions& opts);

/// Defects of the symmetry expected of the minimizer: quarter turns about the
/// x3-axis, x3 -> -x3, and monotone decay from the origin along +x1 and +x3.
struct SymmetryReport {
  double rotation_defect = 0.0;      // max |u(R x) - u(x)|
  double parity_defect = 0.0;        // max |u(x1,x2,-x3) - u(x)|
  double monotone_violation_x1 = 0.0;  // largest increase along +x1 from the origin
  double monotone_violation_x3 = 0.0;
};
SymmetryReport symmetry_report(const ComplexField& u);

}  // namespace dgpe
