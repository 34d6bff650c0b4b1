#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "dgpe/spectral.hpp"

namespace dgpe::testing {

/// Random smooth field: a few Gaussian blobs with random centers, widths and
/// complex amplitudes, built pointwise (no transforms involved).
inline ComplexField random_smooth_field(const Grid3D& g, std::uint64_t seed, int blobs = 4,
                                        bool real = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexField f(g);
  for (int b = 0; b < blobs; ++b) {
    const Vec3 c{1.0 * u(rng), 1.0 * u(rng), 1.0 * u(rng)};
    const double width = 0.9 + 0.3 * u(rng);
    const cplx amp(u(rng), real ? 0.0 : u(rng));
    const Vec3 k{0.7 * u(rng), 0.7 * u(rng), 0.7 * u(rng)};
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Vec3 x = g.node_point(i);
      double r2 = 0.0;
      double phase = 0.0;
      for (int j = 0; j < 3; ++j) {
        r2 += (x[j] - c[j]) * (x[j] - c[j]);
        phase += k[j] * x[j];
      }
      const double env = std::exp(-r2 / (2.0 * width * width));
      f[i] += amp * env * (real ? cplx(1.0) : std::polar(1.0, phase));
    }
  }
  return f;
}

inline RealField real_field(const ComplexField& f) {
  RealField r(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i].real();
  return r;
}

/// c pi^{-3/4} exp(-|x|^2/2), built independently of the library helper.
inline ComplexField oscillator_ground(const Grid3D& g, double c) {
  ComplexField f(g);
  const double a = c * std::pow(std::numbers::pi, -0.75);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 x = g.node_point(i);
    f[i] = a * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  }
  return f;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const ComplexField& a) {
  double m = 0.0;
  for (const cplx& v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace dgpe::testing
