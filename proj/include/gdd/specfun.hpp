#pragma once

#include <span>
#include <string_view>

namespace gdd::sf {

enum class SeriesStatus { Converged, AsymptoticBestTerm, Diverged };

constexpr std::string_view to_string(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::Converged: return "Converged";
    case SeriesStatus::AsymptoticBestTerm: return "AsymptoticBestTerm";
    case SeriesStatus::Diverged: return "Diverged";
  }
  return "Unknown";
}

struct SeriesResult {
  double value = 0.0;
  int terms_used = 0;
  double trunc_error = 0.0;  // absolute
  SeriesStatus status = SeriesStatus::Converged;
};

// Thread-safe log-gamma for x > 0 (std::lgamma writes the global signgam).
double ln_gamma(double x);

// Lower incomplete gamma γ(a, x) and its regularized form P(a, x) = γ(a, x)/Γ(a).
double lower_inc_gamma(double a, double x);
double regularized_lower_gamma(double a, double x);

// Exactly odd: erf(-x) == -erf(x) bit for bit.
double erf(double x);

// pFq partial sums. For p > q + 1 the series is asymptotic and is cut at its
// smallest term once all Pochhammer factors have become positive.
SeriesResult hyp_pfq_series(std::span<const double> upper, std::span<const double> lower, double z,
                            double tol, int max_terms = 2000);

enum class URoute { Auto, Integral, Asymptotic };

// Tricomi U(a, b, z) for a > 0, z > 0. The integral route is the default; the
// 2F0 expansion is used only when its best-term estimate already meets tol.
SeriesResult tricomi_u(double a, double b, double z, double tol, URoute route = URoute::Auto);

// ln U(a, b, z), safe when U itself over/underflows. trunc_error is relative.
SeriesResult tricomi_u_log(double a, double b, double z, double tol, URoute route = URoute::Auto);

// U'(a, b, z) = -a U(a+1, b+1, z).
SeriesResult tricomi_u_deriv(double a, double b, double z, double tol);

// [ln U(a, b, z)]' as a continued fraction evaluated backwards; b must not be an integer.
double u_log_deriv_cf(double a, double b, double z, int max_terms = 200);

// W_{κ,μ}(z) through U. W is even in μ, so the sign of μ giving the larger U
// first parameter is used.
SeriesResult whittaker_w(double kappa, double mu, double z, double tol);

// Gauss 2F1 by direct summation, |z| < 1.
SeriesResult gauss_2f1(double a, double b, double c, double z, double tol);

}  // namespace gdd::sf
