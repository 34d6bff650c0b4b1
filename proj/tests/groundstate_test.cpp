#include "dgpe/groundstate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dgpe/regimes.hpp"
#include "test_support.hpp"

namespace dgpe {
namespace {

constexpr double kPi = std::numbers::pi;

const Grid3D& grid48() {
  static const Grid3D g = make_grid({48, 48, 48}, {8, 8, 8});
  return g;
}

const Grid3D& grid64() {
  static const Grid3D g = make_grid({64, 64, 64}, {8, 8, 8});
  return g;
}

const GroundStateResult& stable_ground(InitialGuess init) {
  static const GroundStateResult gauss = [] {
    SolverOptions o;
    return minimize({5, 1, 1}, grid64(), o);
  }();
  static const GroundStateResult random = [] {
    SolverOptions o;
    o.initial_guess = InitialGuess::random;
    o.seed = 7;
    return minimize({5, 1, 1}, grid64(), o);
  }();
  return init == InitialGuess::random ? random : gauss;
}

TEST(ProjectSphere, Examples) {
  const ComplexField w = testing::oscillator_ground(grid48(), 1.0);
  const ComplexField u = scaled(w, 2.0);
  EXPECT_LT(testing::max_abs_diff(project_sphere(u, 1.0), w), 1e-14);
  EXPECT_LT(testing::max_abs_diff(project_sphere(w, 1.0), w), 1e-14);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ComplexField r = testing::random_smooth_field(grid48(), seed);
    for (double c : {0.3, 1.0, 4.0}) {
      const ComplexField p = project_sphere(r, c);
      EXPECT_NEAR(l2_norm_sq(p), c * c, 1e-12 * c * c);
      // Parallel to r: |<p, r>| = ||p|| ||r||.
      EXPECT_NEAR(std::abs(inner(p, r)), std::sqrt(l2_norm_sq(p) * l2_norm_sq(r)),
                  1e-12 * std::sqrt(l2_norm_sq(p) * l2_norm_sq(r)));
    }
  }
  EXPECT_THROW(project_sphere(ComplexField(grid48()), 1.0), Error);
}

TEST(PhaseAlign, Examples) {
  const ComplexField w = testing::oscillator_ground(grid48(), 1.0);
  EXPECT_LT(testing::max_abs_diff(phase_align(w), w), 1e-15);
  EXPECT_LT(testing::max_abs_diff(phase_align(scaled(w, std::polar(1.0, kPi / 3.0))), w), 1e-12);
  EXPECT_LT(testing::max_abs_diff(phase_align(scaled(w, -1.0)), w), 1e-12);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ComplexField r = testing::random_smooth_field(grid48(), seed);
    const ComplexField a = phase_align(r);
    EXPECT_NEAR(l2_norm_sq(a), l2_norm_sq(r), 1e-13 * l2_norm_sq(r));
    ComplexField modulus(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) modulus[i] = std::abs(a[i]);
    const cplx z = inner(a, modulus);
    EXPECT_GE(z.real(), 0.0);
    EXPECT_NEAR(z.imag(), 0.0, 1e-13 * z.real());
    // a = e^{i t} r for a single constant t.
    const cplx ratio = inner(a, r) / l2_norm_sq(r);
    EXPECT_NEAR(std::abs(ratio), 1.0, 1e-13);
  }
  EXPECT_THROW(phase_align(ComplexField(grid48())), Error);
}

TEST(SolverOptions, Validation) {
  SolverOptions o;
  EXPECT_NO_THROW(o.validate());
  o.tol_residual = 0;
  EXPECT_THROW(o.validate(), Error);
  o = {};
  o.max_iters = 0;
  EXPECT_THROW(o.validate(), Error);
  o = {};
  o.backtrack_factor = 1.0;
  EXPECT_THROW(o.validate(), Error);
  o = {};
  o.initial_guess = InitialGuess::provided;
  EXPECT_THROW(o.validate(), Error);
}

TEST(Minimize, OscillatorLimitFromRandomStart) {
  SolverOptions o;
  o.initial_guess = InitialGuess::random;
  o.seed = 3;
  const GroundStateResult r = minimize({0, 0, 1}, grid48(), o);
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.iterations, 0);
  EXPECT_NEAR(r.energy, 1.5, 1e-5);
  EXPECT_NEAR(r.mu, -1.5, 1e-5);
  EXPECT_LE(r.residual, 1e-6);
  const ComplexField w = testing::oscillator_ground(grid48(), 1.0);
  EXPECT_LT(std::sqrt(sigma_norm_sq(axpy(r.state, -1.0, w))), 1e-5);
}

TEST(Minimize, StableGroundStateCertificates) {
  const GroundStateResult& r = stable_ground(InitialGuess::gaussian);
  const PhysicsParams p{5, 1, 1};
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.residual, 1e-6);
  EXPECT_GE(r.energy, 0.0);
  EXPECT_NEAR(l2_norm_sq(r.state), 1.0, 1e-10);
  EXPECT_NEAR(r.residual, el_residual(r.state, r.mu, p), 1e-12);
  EXPECT_NEAR(r.mu, chemical_potential(r.state, p), 1e-12);
  EXPECT_NEAR(r.energy, energy_direct(r.state, p), 1e-12);
  // Above the oscillator (repulsive net interaction).
  EXPECT_GT(r.energy, 1.5);
  EXPECT_LE(boundary_max_abs(r.state), 1e-10);
  for (const cplx& v : r.state.values()) {
    EXPECT_GE(v.real(), -1e-10);
    EXPECT_NEAR(v.imag(), 0.0, 1e-10);
  }
}

TEST(Minimize, EnergyHistoryNonincreasingAndNonnegative) {
  const GroundStateResult& r = stable_ground(InitialGuess::random);
  ASSERT_GE(r.energy_history.size(), 2u);
  for (std::size_t i = 1; i < r.energy_history.size(); ++i) {
    // Steps within the roundoff band of the energy are judged by the residual.
    EXPECT_LE(r.energy_history[i], r.energy_history[i - 1] * (1.0 + 1e-13)) << i;
    EXPECT_GE(r.energy_history[i], 0.0);
  }
}

TEST(Minimize, ChemicalPotentialTwoEstimators) {
  const GroundStateResult& r = stable_ground(InitialGuess::gaussian);
  const ComplexField g = energy_gradient(r.state, {5, 1, 1});
  // Least-squares fit of G = -mu u over the bulk of the condensate.
  const double cut = 0.1 * testing::max_abs(r.state);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(r.state[i]) <= cut) continue;
    num += (g[i] * std::conj(r.state[i])).real();
    den += std::norm(r.state[i]);
  }
  EXPECT_NEAR(-num / den, r.mu, 1e-5);
}

TEST(Minimize, UniquenessProbe) {
  const ComplexField& a = stable_ground(InitialGuess::gaussian).state;
  const ComplexField& b = stable_ground(InitialGuess::random).state;
  EXPECT_LE(std::sqrt(sigma_norm_sq(axpy(a, -1.0, b))), 1e-5);
}

TEST(Minimize, SymmetryProbes) {
  for (InitialGuess init : {InitialGuess::gaussian, InitialGuess::random}) {
    const SymmetryReport s = symmetry_report(stable_ground(init).state);
    EXPECT_LE(s.rotation_defect, 1e-5);
    EXPECT_LE(s.parity_defect, 1e-5);
    EXPECT_LE(s.monotone_violation_x1, 1e-7);
    EXPECT_LE(s.monotone_violation_x3, 1e-7);
  }
}

TEST(Minimize, DipolarElongationAlongAxis) {
  // Attractive head-to-tail dipoles stretch the cloud along x3.
  const ComplexField& u = stable_ground(InitialGuess::gaussian).state;
  double x1 = 0.0;
  double x3 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vec3 x = u.grid().node_point(i);
    x1 += x[0] * x[0] * std::norm(u[i]);
    x3 += x[2] * x[2] * std::norm(u[i]);
  }
  EXPECT_GT(x3, x1);
}

TEST(Minimize, EnergyStableUnderGridRefinement) {
  const double coarse = stable_ground(InitialGuess::gaussian).energy;
  const GroundStateResult fine = minimize({5, 1, 1}, make_grid({96, 96, 96}, {8, 8, 8}), {});
  ASSERT_TRUE(fine.converged);
  EXPECT_LT(testing::rel_diff(coarse, fine.energy), 1e-4);
}

TEST(Minimize, PlainGradientAgreesWithPreconditioned) {
  const Grid3D g = make_grid({32, 32, 32}, {7, 7, 7});
  SolverOptions o;
  o.preconditioned = false;
  o.tol_residual = 1e-7;
  const GroundStateResult plain = minimize({3, 0.5, 1}, g, o);
  o.preconditioned = true;
  const GroundStateResult pre = minimize({3, 0.5, 1}, g, o);
  ASSERT_TRUE(plain.converged);
  ASSERT_TRUE(pre.converged);
  EXPECT_NEAR(plain.energy, pre.energy, 1e-10);
  EXPECT_LE(std::sqrt(sigma_norm_sq(axpy(plain.state, -1.0, pre.state))), 1e-5);
}

TEST(Minimize, AttractiveDipolesInNegativeBranch) {
  const Grid3D g = make_grid({32, 32, 32}, {7, 7, 7});
  // (9, -1) is stable: 9 >= 8 pi / 3.
  const GroundStateResult r = minimize({9, -1, 1}, g, {});
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.energy, 0.0);
}

TEST(Minimize, ProvidedInitialGuess) {
  SolverOptions o;
  o.initial_guess = InitialGuess::provided;
  o.provided = scaled(testing::oscillator_ground(grid48(), 1.0), cplx(0.0, 3.0));
  const GroundStateResult r = minimize({0, 0, 1}, grid48(), o);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.energy, 1.5, 1e-8);
  EXPECT_NEAR(r.state[grid48().index(24, 24, 24)].imag(), 0.0, 1e-12);

  o.provided = ComplexField(grid64());
  EXPECT_THROW(minimize({0, 0, 1}, grid48(), o), Error);
}

TEST(Minimize, NonConvergenceIsFlagged) {
  SolverOptions o;
  o.initial_guess = InitialGuess::random;
  o.max_iters = 2;
  const GroundStateResult r = minimize({5, 1, 1}, grid48(), o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_GT(r.residual, o.tol_residual);
  EXPECT_NEAR(l2_norm_sq(r.state), 1.0, 1e-10);
}

TEST(Minimize, RefusesUnstableRegime) {
  try {
    minimize({0, 1, 1}, grid48(), {});
    FAIL() << "expected refusal";
  } catch (const UnstableRegimeError& e) {
    EXPECT_NEAR(e.margin(), -4.0 * kPi / 3.0, 1e-14);
    EXPECT_NE(std::string(e.what()).find("nstable"), std::string::npos);
  }
  EXPECT_THROW(minimize({8, -1, 1}, grid48(), {}), UnstableRegimeError);
}

TEST(Minimize, RegimeBoundaryAccepted) {
  const Grid3D g = make_grid({32, 32, 32}, {7, 7, 7});
  EXPECT_NO_THROW(minimize({4.0 * kPi / 3.0, 1.0, 1.0}, g, {}));
}

TEST(SymmetryReport, DetectsBrokenSymmetry) {
  const ComplexField u = testing::random_smooth_field(grid48(), 11);
  const SymmetryReport s = symmetry_report(u);
  EXPECT_GT(s.rotation_defect, 1e-3);
  EXPECT_GT(s.parity_defect, 1e-3);
  EXPECT_THROW(symmetry_report(ComplexField(make_grid({16, 16, 16}, {4, 5, 4}))), Error);
}

}  // namespace
}  // namespace dgpe
