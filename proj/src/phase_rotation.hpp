#pragma once

#include <span>

#include "dgpe/spectral.hpp"

namespace dgpe::detail {

/// psi[i] *= exp(-i tau w[i]). c and s are scratch arrays of the same length.
void rotate_phases(std::span<cplx> psi, std::span<const double> w, double tau,
                   std::span<double> c, std::span<double> s);

}  // namespace dgpe::detail
