#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "gdd/charfun.hpp"
#include "gdd/dequad.hpp"
#include "gdd/params.hpp"

namespace gdd {

enum class PdfMethod { ClosedU, ClosedW, Closed2F0, ConvDE, CfTrapezoid, CfDE };
enum class CdfMethod { CdfIntegralDE, CfTrapezoid, CfDE };

std::string_view to_string(PdfMethod m);
std::string_view to_string(CdfMethod m);
// CLI spellings: closed-u, closed-w, closed-2f0, conv-de, cf-trapezoid, cf-de, cdf-integral-de.
std::string_view cli_name(PdfMethod m);
std::string_view cli_name(CdfMethod m);
std::optional<PdfMethod> parse_pdf_method(std::string_view s);
std::optional<CdfMethod> parse_cdf_method(std::string_view s);

/// For the CF trapezoid methods eps_r is the modulus cutoff (trunc_tol) of
/// the truncated grid; everywhere else it is the requested relative error.
quad::QuadResult pdf(const GDDParams& p, double x, PdfMethod method = PdfMethod::CfDE, double eps_r = 1e-12);
quad::QuadResult cdf(const GDDParams& p, double x, CdfMethod method = CdfMethod::CfDE, double eps_r = 1e-12);

/// The cdf integral with the lower limit max(0, -(x - theta)). For alpha1 = 1/2
/// the incomplete gamma is replaced by erf unless the fast path is disabled.
quad::QuadResult cdf_integral_de(const GDDParams& p, double x, double eps_r, bool erf_fast_path = true);

/// f(theta): finite for alpha > 1, +inf otherwise.
double pdf_at_location(const GDDParams& p);

/// F(theta) in closed form through 2F1(1, alpha; alpha1 + 1; beta1 / beta).
double cdf_at_zero(const GDDParams& p);
/// F(theta) / f(theta); only defined for alpha > 1.
double cdf_pdf_ratio_at_zero(const GDDParams& p);

struct Moments {
  double mean;
  double variance;
  double skewness;
  double kurtosis;  // not excess
};

Moments moments(const GDDParams& p);

/// f'(x) from the U representation.
double pdf_derivative(const GDDParams& p, double x, double eps_r = 1e-13);

/// Root of f' by safeguarded Newton with bisection fallback.
double mode(const GDDParams& p, double tol = 1e-13);

std::pair<double, double> six_sigma_interval(const GDDParams& p);

struct MMContext {
  int n = 0;
  int k = 0;
  int l = 0;
  double v_norm_sq = 0.0;
  double s0_sq = 0.0;
  double sj_sq = 0.0;
};

/// Law of the method-of-moments variance estimator as a GDD.
GDDParams mm_gdd_params(const MMContext& ctx);

}  // namespace gdd
