#include "phase_rotation.hpp"

#include <cmath>

namespace dgpe::detail {

// Built with vector math enabled (see CMakeLists.txt): the cos/sin loop has no
// dependence between lanes and goes to the SIMD variants of libm.
void rotate_phases(std::span<cplx> psi, std::span<const double> w, double tau,
                   std::span<double> c, std::span<double> s) {
  const std::size_t n = psi.size();
  const double* wp = w.data();
  double* cp = c.data();
  double* sp = s.data();
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    cp[i] = std::cos(tau * wp[i]);
    sp[i] = std::sin(tau * wp[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double re = psi[i].real();
    const double im = psi[i].imag();
    psi[i] = cplx(re * cp[i] + im * sp[i], im * cp[i] - re * sp[i]);
  }
}

}  // namespace dgpe::detail
