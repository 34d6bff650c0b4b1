#include "dgpe/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace dgpe {

// ---------------------------------------------------------------- Grid3D

Grid3D::Grid3D(Dims3 dims, Vec3 half_lengths) : dims_(dims), half_lengths_(half_lengths) {
  for (int j = 0; j < 3; ++j) {
    if (dims_[j] < 8 || dims_[j] % 2 != 0) {
      throw Error("grid: dimension " + std::to_string(j + 1) + " is " +
                  std::to_string(dims_[j]) + "; must be even and >= 8");
    }
    if (!(half_lengths_[j] > 0.0) || !std::isfinite(half_lengths_[j])) {
      throw Error("grid: box half-length " + std::to_string(j + 1) + " must be positive");
    }
  }
}

Grid3D make_grid(Dims3 dims, Vec3 half_lengths) { return Grid3D(dims, half_lengths); }

double Grid3D::frequency_spacing(int axis) const {
  return std::numbers::pi / half_lengths_[axis];
}

double Grid3D::node(int axis, std::size_t k) const {
  return -half_lengths_[axis] + static_cast<double>(k) * spacing(axis);
}

double Grid3D::frequency(int axis, std::size_t k) const {
  const auto shifted = static_cast<long long>(k) - static_cast<long long>(dims_[axis] / 2);
  return frequency_spacing(axis) * static_cast<double>(shifted);
}

double Grid3D::cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }

double Grid3D::box_volume() const {
  return 8.0 * half_lengths_[0] * half_lengths_[1] * half_lengths_[2];
}

std::array<std::size_t, 3> Grid3D::unravel(std::size_t idx) const {
  const std::size_t i1 = idx % dims_[0];
  const std::size_t rest = idx / dims_[0];
  return {i1, rest % dims_[1], rest / dims_[1]};
}

Vec3 Grid3D::node_point(std::size_t idx) const {
  const auto [i1, i2, i3] = unravel(idx);
  return {node(0, i1), node(1, i2), node(2, i3)};
}

Vec3 Grid3D::frequency_point(std::size_t idx) const {
  const auto [i1, i2, i3] = unravel(idx);
  return {frequency(0, i1), frequency(1, i2), frequency(2, i3)};
}

namespace {

template <class Fn>
std::vector<double> separable_sq_table(const Grid3D& g, Fn coord) {
  std::vector<double> out(g.size());
  const auto [n1, n2, n3] = g.dims();
  std::size_t idx = 0;
  for (std::size_t i3 = 0; i3 < n3; ++i3) {
    const double c3 = coord(2, i3);
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      const double c2 = coord(1, i2);
      for (std::size_t i1 = 0; i1 < n1; ++i1, ++idx) {
        const double c1 = coord(0, i1);
        out[idx] = c1 * c1 + c2 * c2 + c3 * c3;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> Grid3D::radius_sq_table() const {
  return separable_sq_table(*this, [this](int a, std::size_t k) { return node(a, k); });
}

std::vector<double> Grid3D::frequency_sq_table() const {
  return separable_sq_table(*this, [this](int a, std::size_t k) { return frequency(a, k); });
}

// ---------------------------------------------------------------- Field

template <class T>
Field<T>::Field(Grid3D grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error("field: value count " + std::to_string(values_.size()) +
                " does not match grid size " + std::to_string(grid_.size()));
  }
}

template <class T>
bool Field<T>::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const T& v) {
    if constexpr (std::is_same_v<T, cplx>) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    } else {
      return std::isfinite(v);
    }
  });
}

template class Field<cplx>;
template class Field<double>;

void require_same_grid(const Grid3D& a, const Grid3D& b) {
  if (!(a == b)) throw Error("fields live on different grids");
}

ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

RealField real_part(const ComplexField& f) {
  RealField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

RealField density(const ComplexField& f) {
  RealField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::norm(f[i]);
  return out;
}

ComplexField axpy(const ComplexField& a, cplx s, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid());
  ComplexField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

ComplexField scaled(const ComplexField& a, cplx s) {
  ComplexField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

// ---------------------------------------------------------------- FFT

namespace {

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

struct RealBufferDeleter {
  void operator()(double* p) const { fftw_free(p); }
};
using FftwRealBuffer = std::unique_ptr<double[], RealBufferDeleter>;

struct PlanSet {
  fftw_plan forward;
  fftw_plan backward;
  fftw_plan r2c;
  fftw_plan c2r;
};

std::size_t half_size(const Dims3& d) { return d[2] * d[1] * (d[0] / 2 + 1); }

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  void set_threads(int n) {
    std::lock_guard lock(mutex_);
    threads_ = std::max(1, n);
  }

  PlanSet get(const Dims3& dims) {
    std::lock_guard lock(mutex_);
    if (threads_ == 0) threads_ = threads_from_env();
    const auto key = std::make_tuple(dims[0], dims[1], dims[2], threads_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    if (!threads_initialized_) {
      fftw_init_threads();
      threads_initialized_ = true;
    }
    fftw_plan_with_nthreads(threads_);
    const std::size_t n = dims[0] * dims[1] * dims[2];
    FftwBuffer scratch(fftw_alloc_complex(n));
    FftwRealBuffer real(fftw_alloc_real(n));
    // Row-major with the last index fastest, so x1 goes last.
    const int n3 = static_cast<int>(dims[2]);
    const int n2 = static_cast<int>(dims[1]);
    const int n1 = static_cast<int>(dims[0]);
    // FFTW_ESTIMATE keeps plan selection (and hence roundoff) reproducible.
    PlanSet set{
        fftw_plan_dft_3d(n3, n2, n1, scratch.get(), scratch.get(), FFTW_FORWARD, FFTW_ESTIMATE),
        fftw_plan_dft_3d(n3, n2, n1, scratch.get(), scratch.get(), FFTW_BACKWARD, FFTW_ESTIMATE),
        fftw_plan_dft_r2c_3d(n3, n2, n1, real.get(), scratch.get(), FFTW_ESTIMATE),
        fftw_plan_dft_c2r_3d(n3, n2, n1, scratch.get(), real.get(), FFTW_ESTIMATE)};
    if (!set.forward || !set.backward || !set.r2c || !set.c2r) {
      throw Error("fft: plan creation failed");
    }
    plans_.emplace(key, set);
    return set;
  }

 private:
  static int threads_from_env() {
    if (const char* env = std::getenv("GPE_THREADS")) {
      const int n = std::atoi(env);
      if (n >= 1) return n;
    }
    return 1;
  }

  std::mutex mutex_;
  int threads_ = 0;
  bool threads_initialized_ = false;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, int>, PlanSet> plans_;
};

fftw_complex* scratch_buffer(std::size_t n) {
  thread_local FftwBuffer buffer;
  thread_local std::size_t capacity = 0;
  if (capacity < n) {
    buffer.reset(fftw_alloc_complex(n));
    capacity = n;
  }
  return buffer.get();
}

double* real_scratch_buffer(std::size_t n) {
  thread_local FftwRealBuffer buffer;
  thread_local std::size_t capacity = 0;
  if (capacity < n) {
    buffer.reset(fftw_alloc_real(n));
    capacity = n;
  }
  return buffer.get();
}

inline double half_dims_sign(const Grid3D& g) {
  const auto& d = g.dims();
  return (((d[0] + d[1] + d[2]) / 2) & 1U) ? -1.0 : 1.0;
}

// (-1)^(i1+i2+i3) on both sides turns the plain DFT into the centered layout.
template <class Load, class Store>
void transform_kernel(const Grid3D& g, bool forward, double scale, Load load, Store store) {
  const std::size_t n = g.size();
  const PlanSet plans = PlanCache::instance().get(g.dims());
  fftw_complex* buf = scratch_buffer(n);
  auto* z = reinterpret_cast<cplx*>(buf);
  const auto [n1, n2, n3] = g.dims();
  std::size_t idx = 0;
  for (std::size_t i3 = 0; i3 < n3; ++i3)
    for (std::size_t i2 = 0; i2 < n2; ++i2)
      for (std::size_t i1 = 0; i1 < n1; ++i1, ++idx)
        z[idx] = ((i1 + i2 + i3) & 1U) ? -load(idx) : load(idx);
  fftw_execute_dft(forward ? plans.forward : plans.backward, buf, buf);
  idx = 0;
  for (std::size_t i3 = 0; i3 < n3; ++i3)
    for (std::size_t i2 = 0; i2 < n2; ++i2)
      for (std::size_t i1 = 0; i1 < n1; ++i1, ++idx)
        store(idx, ((i1 + i2 + i3) & 1U) ? -scale * z[idx] : scale * z[idx]);
}

double forward_scale(const Grid3D& g) { return g.cell_volume() * half_dims_sign(g); }

double inverse_scale(const Grid3D& g) {
  return half_dims_sign(g) / (static_cast<double>(g.size()) * g.cell_volume());
}

}  // namespace

void set_fft_threads(int n) { PlanCache::instance().set_threads(n); }

ComplexField forward_transform(const ComplexField& f) {
  ComplexField out(f.grid());
  transform_kernel(
      f.grid(), true, forward_scale(f.grid()), [&](std::size_t i) { return f[i]; },
      [&](std::size_t i, cplx v) { out[i] = v; });
  return out;
}

ComplexField forward_transform(const RealField& f) {
  ComplexField out(f.grid());
  transform_kernel(
      f.grid(), true, forward_scale(f.grid()), [&](std::size_t i) { return cplx(f[i], 0.0); },
      [&](std::size_t i, cplx v) { out[i] = v; });
  return out;
}

ComplexField inverse_transform(const ComplexField& spectrum) {
  ComplexField out(spectrum.grid());
  transform_kernel(
      spectrum.grid(), false, inverse_scale(spectrum.grid()),
      [&](std::size_t i) { return spectrum[i]; }, [&](std::size_t i, cplx v) { out[i] = v; });
  return out;
}

namespace {

template <class M>
ComplexField apply_multiplier_impl(const ComplexField& f, std::span<const M> multiplier) {
  const Grid3D& g = f.grid();
  if (multiplier.size() != g.size()) throw Error("multiplier size does not match grid");
  // The forward and inverse scales cancel up to 1/N.
  const double scale = 1.0 / static_cast<double>(g.size());
  ComplexField spec(g);
  transform_kernel(
      g, true, 1.0, [&](std::size_t i) { return f[i]; },
      [&](std::size_t i, cplx v) { spec[i] = v * multiplier[i]; });
  ComplexField out(g);
  transform_kernel(
      g, false, scale, [&](std::size_t i) { return spec[i]; },
      [&](std::size_t i, cplx v) { out[i] = v; });
  return out;
}

}  // namespace

ComplexField apply_multiplier(const ComplexField& f, std::span<const double> multiplier) {
  return apply_multiplier_impl(f, multiplier);
}

ComplexField apply_multiplier(const ComplexField& f, std::span<const cplx> multiplier) {
  return apply_multiplier_impl(f, multiplier);
}

RealField apply_real_multiplier(const RealField& f, std::span<const double> multiplier) {
  const Grid3D& g = f.grid();
  if (multiplier.size() != g.size()) throw Error("multiplier size does not match grid");
  const double scale = 1.0 / static_cast<double>(g.size());
  ComplexField spec(g);
  transform_kernel(
      g, true, 1.0, [&](std::size_t i) { return cplx(f[i], 0.0); },
      [&](std::size_t i, cplx v) { spec[i] = v * multiplier[i]; });
  RealField out(g);
  double max_real = 0.0;
  double max_imag = 0.0;
  transform_kernel(
      g, false, scale, [&](std::size_t i) { return spec[i]; },
      [&](std::size_t i, cplx v) {
        out[i] = v.real();
        max_real = std::max(max_real, std::abs(v.real()));
        max_imag = std::max(max_imag, std::abs(v.imag()));
      });
  // An odd multiplier would leave a genuine imaginary part.
  if (max_imag > 1e-10 * std::max(1.0, max_real)) {
    throw Error("real multiplier produced an imaginary residue of " + std::to_string(max_imag));
  }
  return out;
}

// ---------------------------------------------------------------- in-place multipliers

namespace {

// Spectral index k in the centered layout sits at (k + n/2) mod n in the
// FFT's native order; the map is its own inverse.
template <class T, class Out>
void to_native(const Grid3D& g, std::span<const T> centered, std::size_t n1_out, Out out) {
  const auto [n1, n2, n3] = g.dims();
  for (std::size_t m3 = 0; m3 < n3; ++m3) {
    const std::size_t k3 = (m3 + n3 / 2) % n3;
    for (std::size_t m2 = 0; m2 < n2; ++m2) {
      const std::size_t k2 = (m2 + n2 / 2) % n2;
      for (std::size_t m1 = 0; m1 < n1_out; ++m1) {
        const std::size_t k1 = (m1 + n1 / 2) % n1;
        out(m1 + n1_out * (m2 + n2 * m3), centered[g.index(k1, k2, k3)]);
      }
    }
  }
}

template <class T>
std::vector<cplx> native_table(const Grid3D& grid, std::span<const T> multiplier) {
  if (multiplier.size() != grid.size()) throw Error("multiplier size does not match grid");
  std::vector<cplx> table(grid.size());
  const double scale = 1.0 / static_cast<double>(grid.size());
  to_native(grid, multiplier, grid.dims()[0],
            [&](std::size_t i, const T& v) { table[i] = scale * cplx(v); });
  return table;
}

}  // namespace

FourierMultiplier::FourierMultiplier(const Grid3D& grid, std::span<const cplx> multiplier)
    : grid_(grid), table_(native_table(grid, multiplier)) {}

FourierMultiplier::FourierMultiplier(const Grid3D& grid, std::span<const double> multiplier)
    : grid_(grid), table_(native_table(grid, multiplier)) {}

void FourierMultiplier::apply(std::span<cplx> values) const {
  if (values.size() != grid_.size()) throw Error("multiplier: field size does not match grid");
  const PlanSet plans = PlanCache::instance().get(grid_.dims());
  fftw_complex* buf = scratch_buffer(values.size());
  auto* direct = reinterpret_cast<fftw_complex*>(values.data());
  // The plans may be reused on any array with the scratch buffer's alignment.
  if (fftw_alignment_of(reinterpret_cast<double*>(direct)) ==
      fftw_alignment_of(reinterpret_cast<double*>(buf))) {
    fftw_execute_dft(plans.forward, direct, direct);
    for (std::size_t i = 0; i < table_.size(); ++i) values[i] *= table_[i];
    fftw_execute_dft(plans.backward, direct, direct);
    return;
  }
  auto* z = reinterpret_cast<cplx*>(buf);
  std::copy(values.begin(), values.end(), z);
  fftw_execute_dft(plans.forward, buf, buf);
  for (std::size_t i = 0; i < table_.size(); ++i) z[i] *= table_[i];
  fftw_execute_dft(plans.backward, buf, buf);
  std::copy(z, z + values.size(), values.begin());
}

RealFourierMultiplier::RealFourierMultiplier(const Grid3D& grid, std::span<const double> multiplier)
    : grid_(grid), table_(half_size(grid.dims())), weight_(half_size(grid.dims())) {
  if (multiplier.size() != grid.size()) throw Error("multiplier size does not match grid");
  const auto [n1, n2, n3] = grid.dims();
  const std::size_t h1 = n1 / 2 + 1;
  // The half spectrum only represents real outputs when m(-xi) = m(xi).
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [k1, k2, k3] = grid.unravel(i);
    const double mirror = multiplier[grid.index((n1 - k1) % n1, (n2 - k2) % n2, (n3 - k3) % n3)];
    if (std::abs(mirror - multiplier[i]) > 1e-12 * std::max(1.0, std::abs(multiplier[i]))) {
      throw Error("real multiplier must be even in xi");
    }
  }
  const double scale = 1.0 / static_cast<double>(grid.size());
  to_native(grid, multiplier, h1, [&](std::size_t i, double v) { table_[i] = v; });
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    const std::size_t m1 = i % h1;
    weight_[i] = (m1 == 0 || 2 * m1 == n1) ? 1.0 : 2.0;
  }
  scaled_ = table_;
  for (double& v : scaled_) v *= scale;
}

void RealFourierMultiplier::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != grid_.size() || out.size() != grid_.size()) {
    throw Error("multiplier: field size does not match grid");
  }
  const PlanSet plans = PlanCache::instance().get(grid_.dims());
  double* r = real_scratch_buffer(in.size());
  fftw_complex* buf = scratch_buffer(table_.size());
  auto* z = reinterpret_cast<cplx*>(buf);
  std::copy(in.begin(), in.end(), r);
  fftw_execute_dft_r2c(plans.r2c, r, buf);
  for (std::size_t i = 0; i < scaled_.size(); ++i) z[i] *= scaled_[i];
  fftw_execute_dft_c2r(plans.c2r, buf, r);
  std::copy(r, r + in.size(), out.begin());
}

double RealFourierMultiplier::quadratic(std::span<const double> f) const {
  if (f.size() != grid_.size()) throw Error("multiplier: field size does not match grid");
  const PlanSet plans = PlanCache::instance().get(grid_.dims());
  double* r = real_scratch_buffer(f.size());
  fftw_complex* buf = scratch_buffer(table_.size());
  const auto* z = reinterpret_cast<const cplx*>(buf);
  std::copy(f.begin(), f.end(), r);
  fftw_execute_dft_r2c(plans.r2c, r, buf);
  double s = 0.0;
  for (std::size_t i = 0; i < table_.size(); ++i) s += weight_[i] * table_[i] * std::norm(z[i]);
  // |F f|^2 = h^6 |DFT|^2 and the frequency weight is 1 / box volume.
  const double dv = grid_.cell_volume();
  return s * dv * dv / grid_.box_volume();
}

// ---------------------------------------------------------------- norms

double l2_norm_sq(const ComplexField& f) {
  double s = 0.0;
  for (const cplx& v : f.values()) s += std::norm(v);
  return s * f.grid().cell_volume();
}

cplx inner(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid());
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s * f.grid().cell_volume();
}

double spectral_l2_norm_sq(const ComplexField& spectrum) {
  double s = 0.0;
  for (const cplx& v : spectrum.values()) s += std::norm(v);
  return s / spectrum.grid().box_volume();
}

double grad_norm_sq(const ComplexField& f) {
  const ComplexField spec = forward_transform(f);
  const std::vector<double> k2 = f.grid().frequency_sq_table();
  double s = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) s += k2[i] * std::norm(spec[i]);
  return s / f.grid().box_volume();
}

double xweighted_norm_sq(const ComplexField& f) {
  const std::vector<double> r2 = f.grid().radius_sq_table();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += r2[i] * std::norm(f[i]);
  return s * f.grid().cell_volume();
}

double sigma_norm_sq(const ComplexField& f) {
  return xweighted_norm_sq(f) + grad_norm_sq(f) + l2_norm_sq(f);
}

cplx sigma_inner(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid());
  const Grid3D& grid = f.grid();
  const std::vector<double> r2 = grid.radius_sq_table();
  cplx phys = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) phys += (1.0 + r2[i]) * f[i] * std::conj(g[i]);
  const ComplexField fs = forward_transform(f);
  const ComplexField gs = forward_transform(g);
  const std::vector<double> k2 = grid.frequency_sq_table();
  cplx spec = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) spec += k2[i] * fs[i] * std::conj(gs[i]);
  return phys * grid.cell_volume() + spec / grid.box_volume();
}

double boundary_max_abs(const ComplexField& f) {
  const Grid3D& g = f.grid();
  const auto& d = g.dims();
  double m = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto [i1, i2, i3] = g.unravel(idx);
    const bool face = i1 == 0 || i2 == 0 || i3 == 0 || i1 == d[0] - 1 || i2 == d[1] - 1 ||
                      i3 == d[2] - 1;
    if (face) m = std::max(m, std::abs(f[idx]));
  }
  return m;
}

bool check_boundary_decay(const ComplexField& f, double threshold) {
  const double m = boundary_max_abs(f);
  if (m > threshold) {
    std::cerr << "[warning] field reaches " << m << " on the box boundary (threshold "
              << threshold << "); periodic truncation may bias results\n";
    return false;
  }
  return true;
}

}  // namespace dgpe
