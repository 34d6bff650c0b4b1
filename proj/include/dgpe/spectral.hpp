#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgpe {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Dims3 = std::array<std::size_t, 3>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform periodic box prod_j [-L_j, L_j) with n_j nodes per axis.
///
/// Node k on axis j sits at x = -L_j + k h_j. Spectral arrays use the same
/// index range: index k on axis j carries frequency (pi / L_j) (k - n_j / 2),
/// so the zero frequency sits at k = n_j / 2, exactly where the node x = 0 is.
/// Linear storage is x1-fastest: index = i1 + n1 (i2 + n2 i3).
class Grid3D {
 public:
  Grid3D(Dims3 dims, Vec3 half_lengths);

  const Dims3& dims() const { return dims_; }
  const Vec3& half_lengths() const { return half_lengths_; }
  std::size_t size() const { return dims_[0] * dims_[1] * dims_[2]; }

  double spacing(int axis) const { return 2.0 * half_lengths_[axis] / dims_[axis]; }
  double frequency_spacing(int axis) const;
  double node(int axis, std::size_t k) const;
  double frequency(int axis, std::size_t k) const;

  /// Physical-space quadrature weight h1 h2 h3.
  double cell_volume() const;
  /// Box volume 8 L1 L2 L3. The frequency-domain quadrature weight including
  /// the (2 pi)^-3 factor is exactly 1 / box_volume().
  double box_volume() const;

  std::size_t index(std::size_t i1, std::size_t i2, std::size_t i3) const {
    return i1 + dims_[0] * (i2 + dims_[1] * i3);
  }
  std::array<std::size_t, 3> unravel(std::size_t idx) const;

  Vec3 node_point(std::size_t idx) const;
  Vec3 frequency_point(std::size_t idx) const;

  /// Table of |x|^2 over the nodes.
  std::vector<double> radius_sq_table() const;
  /// Table of |xi|^2 over the spectral indices.
  std::vector<double> frequency_sq_table() const;

  friend bool operator==(const Grid3D&, const Grid3D&) = default;

 private:
  Dims3 dims_;
  Vec3 half_lengths_;
};

Grid3D make_grid(Dims3 dims, Vec3 half_lengths);

template <class T>
class Field {
 public:
  explicit Field(Grid3D grid) : grid_(grid), values_(grid.size(), T{}) {}
  Field(Grid3D grid, std::vector<T> values);

  const Grid3D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  std::vector<T>& data() { return values_; }
  const std::vector<T>& data() const { return values_; }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;

 private:
  Grid3D grid_;
  std::vector<T> values_;
};

using ComplexField = Field<cplx>;
using RealField = Field<double>;

extern template class Field<cplx>;
extern template class Field<double>;

void require_same_grid(const Grid3D& a, const Grid3D& b);

ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);
/// Pointwise |f|^2.
RealField density(const ComplexField& f);

/// a + s b
ComplexField axpy(const ComplexField& a, cplx s, const ComplexField& b);
ComplexField scaled(const ComplexField& a, cplx s);

/// Quadrature of F u(xi) = int e^{-i x.xi} u(x) dx: the DFT scaled by h1 h2 h3,
/// returned in the centered spectral layout of Grid3D.
ComplexField forward_transform(const ComplexField& f);
ComplexField forward_transform(const RealField& f);
/// Exact discrete inverse of forward_transform, carrying the (2 pi)^-3 factor.
ComplexField inverse_transform(const ComplexField& spectrum);

/// inverse_transform(multiplier * forward_transform(f)); multiplier indexed in
/// the spectral layout.
ComplexField apply_multiplier(const ComplexField& f, std::span<const double> multiplier);
ComplexField apply_multiplier(const ComplexField& f, std::span<const cplx> multiplier);
/// As above for a real field whose multiplier is even; imaginary residue dropped.
RealField apply_real_multiplier(const RealField& f, std::span<const double> multiplier);

/// A fixed multiplier applied in place: the table is stored in the FFT's
/// native order with 1/N folded in, so each call is two FFTs and one sweep.
class FourierMultiplier {
 public:
  FourierMultiplier(const Grid3D& grid, std::span<const cplx> multiplier);
  FourierMultiplier(const Grid3D& grid, std::span<const double> multiplier);

  const Grid3D& grid() const { return grid_; }
  void apply(std::span<cplx> values) const;

 private:
  Grid3D grid_;
  std::vector<cplx> table_;
};

/// Real even multiplier (m(-xi) = m(xi)) acting on real fields through
/// half-spectrum transforms.
class RealFourierMultiplier {
 public:
  RealFourierMultiplier(const Grid3D& grid, std::span<const double> multiplier);

  const Grid3D& grid() const { return grid_; }
  void apply(std::span<const double> in, std::span<double> out) const;
  /// (2 pi)^-3 times the frequency quadrature of m |F f|^2.
  double quadratic(std::span<const double> f) const;

 private:
  Grid3D grid_;
  std::vector<double> table_;
  std::vector<double> scaled_;  // table_ / N
  std::vector<double> weight_;  // 2 for the modes standing in for their mirror image
};

double l2_norm_sq(const ComplexField& f);
/// int f conj(g) dx; linear in the first argument.
cplx inner(const ComplexField& f, const ComplexField& g);
double grad_norm_sq(const ComplexField& f);
double xweighted_norm_sq(const ComplexField& f);
double sigma_norm_sq(const ComplexField& f);

/// Sum of the L2, gradient and |x|-weighted inner products.
cplx sigma_inner(const ComplexField& f, const ComplexField& g);

/// (2 pi)^-3 times the frequency-domain quadrature of |spectrum|^2.
double spectral_l2_norm_sq(const ComplexField& spectrum);

/// Largest |f| over the faces of the box; states are trustworthy on the
/// periodic box only when this is below ~1e-10.
double boundary_max_abs(const ComplexField& f);
/// Logs a warning to stderr when boundary_max_abs exceeds the threshold.
bool check_boundary_decay(const ComplexField& f, double threshold = 1e-10);

/// Caps the internal FFT thread count. Reads GPE_THREADS when never called.
void set_fft_threads(int n);

}  // namespace dgpe
