#include "dgpe/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "test_support.hpp"

namespace dgpe {
namespace {

using testing::max_abs;
using testing::max_abs_diff;
using testing::random_smooth_field;

TEST(Grid, SpacingAndFrequencies) {
  const Grid3D g = make_grid({8, 8, 8}, {4, 4, 4});
  for (int j = 0; j < 3; ++j) {
    EXPECT_DOUBLE_EQ(g.spacing(j), 1.0);
    EXPECT_DOUBLE_EQ(g.frequency_spacing(j), std::numbers::pi / 4.0);
    EXPECT_DOUBLE_EQ(g.node(j, 0), -4.0);
    EXPECT_DOUBLE_EQ(g.node(j, 4), 0.0);
    EXPECT_DOUBLE_EQ(g.frequency(j, 4), 0.0);
    EXPECT_DOUBLE_EQ(g.frequency(j, 0), -std::numbers::pi);
    EXPECT_DOUBLE_EQ(g.frequency(j, 7), 3.0 * std::numbers::pi / 4.0);
  }
  EXPECT_EQ(g.size(), 512u);
}

TEST(Grid, Anisotropic) {
  const Grid3D g = make_grid({16, 8, 8}, {8, 4, 4});
  for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(g.spacing(j), 1.0);
  EXPECT_DOUBLE_EQ(g.frequency_spacing(0), std::numbers::pi / 8.0);
  EXPECT_EQ(g.index(1, 0, 0), 1u);
  EXPECT_EQ(g.index(0, 1, 0), 16u);
  EXPECT_EQ(g.index(0, 0, 1), 128u);
  const auto ijk = g.unravel(g.index(3, 5, 7));
  EXPECT_EQ(ijk[0], 3u);
  EXPECT_EQ(ijk[1], 5u);
  EXPECT_EQ(ijk[2], 7u);
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(make_grid({7, 8, 8}, {4, 4, 4}), Error);
  EXPECT_THROW(make_grid({6, 8, 8}, {4, 4, 4}), Error);
  EXPECT_THROW(make_grid({8, 8, 8}, {4, 0, 4}), Error);
  EXPECT_THROW(make_grid({8, 8, 8}, {4, 4, -1}), Error);
}

TEST(Field, SizeMismatchRejected) {
  const Grid3D g = make_grid({8, 8, 8}, {4, 4, 4});
  EXPECT_THROW(ComplexField(g, std::vector<cplx>(10)), Error);
}

TEST(Transform, SingleModeMapsToOneCoefficient) {
  const Grid3D g = make_grid({8, 16, 8}, {2.0, 3.0, 1.5});
  const std::array<std::size_t, 3> mode{5, 3, 1};  // arbitrary spectral index
  const Vec3 xi0{g.frequency(0, mode[0]), g.frequency(1, mode[1]), g.frequency(2, mode[2])};
  ComplexField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 x = g.node_point(i);
    f[i] = std::polar(1.0, xi0[0] * x[0] + xi0[1] * x[1] + xi0[2] * x[2]);
  }
  const ComplexField spec = forward_transform(f);
  const double expected = g.box_volume();
  const std::size_t target = g.index(mode[0], mode[1], mode[2]);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (i == target) {
      EXPECT_NEAR(spec[i].real(), expected, 1e-12 * expected);
      EXPECT_NEAR(spec[i].imag(), 0.0, 1e-12 * expected);
    } else {
      EXPECT_LT(std::abs(spec[i]), 1e-12 * expected);
    }
  }
}

TEST(Transform, GaussianClosedForm) {
  const Grid3D g = make_grid({64, 64, 64}, {8, 8, 8});
  ComplexField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 x = g.node_point(i);
    f[i] = std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  }
  const ComplexField spec = forward_transform(f);
  const double peak = std::pow(2.0 * std::numbers::pi, 1.5);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Vec3 xi = g.frequency_point(i);
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const double exact = peak * std::exp(-0.5 * k2);
    if (k2 <= 9.0) {  // resolved: exact value well above roundoff
      EXPECT_NEAR(std::abs(spec[i] - exact) / exact, 0.0, 1e-8) << "xi^2 = " << k2;
    }
  }
}

TEST(Transform, RoundTripIsIdentity) {
  const Grid3D g = make_grid({16, 8, 12}, {3, 2, 2.5});
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexField f(g);
  for (cplx& v : f.data()) v = cplx(n(rng), n(rng));
  const ComplexField back = inverse_transform(forward_transform(f));
  EXPECT_LT(max_abs_diff(back, f), 1e-12 * max_abs(f));
}

TEST(Transform, RealFieldIsHermitian) {
  const Grid3D g = make_grid({16, 16, 8}, {4, 4, 4});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  RealField f(g);
  for (double& v : f.data()) v = n(rng);
  const ComplexField spec = forward_transform(f);
  const auto& d = g.dims();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < spec.size(); ++idx) {
    const auto [i1, i2, i3] = g.unravel(idx);
    const std::size_t mirror = g.index((d[0] - i1) % d[0], (d[1] - i2) % d[1], (d[2] - i3) % d[2]);
    worst = std::max(worst, std::abs(spec[mirror] - std::conj(spec[idx])));
  }
  EXPECT_LT(worst, 1e-12 * max_abs(spec));
}

TEST(Norms, Plancherel) {
  const Grid3D g = make_grid({16, 16, 16}, {4, 4, 4});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ComplexField f = random_smooth_field(g, seed);
    const double phys = l2_norm_sq(f);
    const double spec = spectral_l2_norm_sq(forward_transform(f));
    EXPECT_NEAR(spec, phys, 1e-12 * phys);
  }
}

TEST(Norms, GaussianMoments) {
  const Grid3D g = make_grid({64, 64, 64}, {8, 8, 8});
  const double c = 1.7;
  const ComplexField f = testing::oscillator_ground(g, c);
  EXPECT_NEAR(l2_norm_sq(f), c * c, 1e-6 * c * c);
  EXPECT_NEAR(grad_norm_sq(f), 1.5 * c * c, 1e-6 * c * c);
  EXPECT_NEAR(xweighted_norm_sq(f), 1.5 * c * c, 1e-6 * c * c);
  EXPECT_DOUBLE_EQ(sigma_norm_sq(f), xweighted_norm_sq(f) + grad_norm_sq(f) + l2_norm_sq(f));
}

TEST(Norms, ZeroField) {
  const ComplexField z(make_grid({8, 8, 8}, {4, 4, 4}));
  EXPECT_EQ(l2_norm_sq(z), 0.0);
  EXPECT_EQ(grad_norm_sq(z), 0.0);
  EXPECT_EQ(xweighted_norm_sq(z), 0.0);
  EXPECT_EQ(sigma_norm_sq(z), 0.0);
}

// Second-order central differences of the periodic field: the spectral
// gradient norm must agree to O(h^2).
double fd_grad_norm_sq(const ComplexField& f) {
  const Grid3D& g = f.grid();
  const auto& d = g.dims();
  double s = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto k = g.unravel(idx);
    for (int j = 0; j < 3; ++j) {
      auto kp = k;
      auto km = k;
      kp[j] = (k[j] + 1) % d[j];
      km[j] = (k[j] + d[j] - 1) % d[j];
      const cplx df = (f[g.index(kp[0], kp[1], kp[2])] - f[g.index(km[0], km[1], km[2])]) /
                      (2.0 * g.spacing(j));
      s += std::norm(df);
    }
  }
  return s * g.cell_volume();
}

TEST(Norms, GradientMatchesFiniteDifferencesToSecondOrder) {
  std::vector<double> errors;
  for (std::size_t n : {32u, 64u}) {
    const Grid3D g = make_grid({n, n, n}, {6, 6, 6});
    const ComplexField f = random_smooth_field(g, 11);
    const double spec = grad_norm_sq(f);
    errors.push_back(std::abs(fd_grad_norm_sq(f) - spec) / spec);
  }
  EXPECT_LT(errors[1], 5e-2);
  // Halving h should cut the discrepancy by about 4.
  EXPECT_GT(errors[0] / errors[1], 3.0);
  EXPECT_LT(errors[0] / errors[1], 5.0);
}

TEST(Inner, LinearityAndConjugateSymmetry) {
  const Grid3D g = make_grid({16, 16, 16}, {4, 4, 4});
  const ComplexField f = random_smooth_field(g, 1);
  const ComplexField h = random_smooth_field(g, 2);
  const ComplexField k = random_smooth_field(g, 3);
  const cplx a(0.3, -1.2);
  const cplx lhs = inner(axpy(f, a, h), k);
  const cplx rhs = inner(f, k) + a * inner(h, k);
  EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(lhs));
  EXPECT_LT(std::abs(inner(f, h) - std::conj(inner(h, f))), 1e-14);
  const cplx ff = inner(f, f);
  EXPECT_EQ(ff.imag(), 0.0);
  EXPECT_GE(ff.real(), 0.0);
  EXPECT_THROW(inner(f, ComplexField(make_grid({8, 8, 8}, {4, 4, 4}))), Error);
}

TEST(Norms, SigmaInnerMatchesSigmaNorm) {
  const Grid3D g = make_grid({32, 32, 32}, {6, 6, 6});
  const ComplexField f = random_smooth_field(g, 7);
  const cplx s = sigma_inner(f, f);
  EXPECT_NEAR(s.real(), sigma_norm_sq(f), 1e-12 * s.real());
  EXPECT_NEAR(s.imag(), 0.0, 1e-12 * s.real());
}

TEST(Transform, ConcurrentCallsAgree) {
  const Grid3D g = make_grid({32, 32, 32}, {4, 4, 4});
  const ComplexField f = random_smooth_field(g, 9);
  const ComplexField ref = forward_transform(f);
  std::vector<ComplexField> results(4, ComplexField(g));
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] { results[t] = forward_transform(f); });
  }
  for (auto& th : pool) th.join();
  for (const auto& r : results) EXPECT_EQ(max_abs_diff(r, ref), 0.0);
}

TEST(Boundary, DecayCheck) {
  const Grid3D g = make_grid({32, 32, 32}, {8, 8, 8});
  EXPECT_TRUE(check_boundary_decay(testing::oscillator_ground(g, 1.0)));
  ComplexField flat(g);
  for (cplx& v : flat.data()) v = 1.0;
  EXPECT_FALSE(check_boundary_decay(flat));
  EXPECT_DOUBLE_EQ(boundary_max_abs(flat), 1.0);
}

}  // namespace
}  // namespace dgpe
