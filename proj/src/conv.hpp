#pragma once
// Convolution form of the density, shared by the ConvDE method (double) and
// the benchmark reference (long double).

#include <cmath>

#include "gdd/dequad.hpp"

namespace gdd::detail {

inline double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}
inline long double log_gamma(long double x) {
  int sign = 0;
  return ::lgammal_r(x, &sign);
}

/// Density at z > 0 of Gamma(a1, b1) - Gamma(a2, b2):
///   C e^{-b1 z} int_0^inf (u + z)^{a1-1} u^{a2-1} e^{-(b1+b2) u} du.
/// The integrand is evaluated in log space, shifted by its peak.
template <class Real>
quad::BasicQuadResult<Real> conv_pdf_positive(Real a1, Real b1, Real a2, Real b2, Real z, Real eps_r,
                                              int max_level) {
  using std::exp;
  using std::log;
  using std::sqrt;
  const Real b = b1 + b2;
  const Real ln_c = a1 * log(b1) + a2 * log(b2) - log_gamma(a1) - log_gamma(a2) - b1 * z;
  auto g = [&](Real u) { return (a1 - 1) * log(u + z) + (a2 - 1) * log(u) - b * u; };

  // Stationary point of g: b u^2 + (b z - a1 - a2 + 2) u - (a2 - 1) z = 0.
  Real shift = 0;
  const Real B = b * z - a1 - a2 + 2;
  const Real disc = B * B + 4 * b * (a2 - 1) * z;
  if (disc >= 0) {
    const Real u = (-B + sqrt(disc)) / (2 * b);
    if (u > 0 && std::isfinite(static_cast<double>(u))) shift = g(u);
  }

  const quad::BasicDENonOscPlan<Real> plan(Real(0), b, eps_r, max_level);
  auto r = quad::intde_semi<Real>([&](Real u) { return exp(g(u) - shift); }, plan);
  const Real scale = exp(ln_c + shift);
  r.value *= scale;
  r.err_estimate *= scale;
  return r;
}

}  // namespace gdd::detail
