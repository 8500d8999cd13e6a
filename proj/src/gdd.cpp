#include "gdd/gdd.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "conv.hpp"
#include "gdd/error.hpp"
#include "gdd/specfun.hpp"

namespace gdd {

namespace {

using quad::QuadResult;
using quad::QuadStatus;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

QuadResult exact(double v) {
  QuadResult r;
  r.value = v;
  r.n_evals = 1;
  return r;
}

QuadResult from_log(double log_value, double rel_err, int n_evals) {
  QuadResult r;
  r.value = std::exp(log_value);
  r.err_estimate = rel_err * r.value;
  r.n_evals = std::max(n_evals, 1);
  return r;
}

// ln(beta1^alpha1 beta2^alpha2)
double log_rate_factor(const GDDParams& p) {
  return p.alpha1() * std::log(p.beta1()) + p.alpha2() * std::log(p.beta2());
}

// All closed forms below are written for z > 0; negative z goes through reflect().
//
// Substituting u = z t in the convolution integral gives
//   f(z) = b1^a1 b2^a2 / G(a1) z^{a-1} e^{-b1 z} U(a2, a, b z),
// which is the Kummer transform of the usual U(1 - a1, 2 - a, b z) form and
// keeps the first U parameter positive for every admissible parameter set.
QuadResult closed_u_pos(const GDDParams& p, double z, double tol) {
  const sf::SeriesResult lu = sf::tricomi_u_log(p.alpha2(), p.alpha(), p.beta() * z, tol);
  const double lf = log_rate_factor(p) - sf::ln_gamma(p.alpha1()) + (p.alpha() - 1.0) * std::log(z) -
                    p.beta1() * z + lu.value;
  return from_log(lf, lu.trunc_error, lu.terms_used);
}

QuadResult closed_w_pos(const GDDParams& p, double z, double tol) {
  const double a = p.alpha(), b = p.beta();
  const sf::SeriesResult w = sf::whittaker_w((p.alpha1() - p.alpha2()) / 2.0, (1.0 - a) / 2.0, z * b, tol);
  if (!(w.value > 0) || !std::isfinite(w.value)) {
    throw Error(ErrorCode::ClosedMethodInapplicable, "Whittaker W out of floating range at z=" + num(z));
  }
  const double lpre = log_rate_factor(p) - (a / 2.0) * std::log(b) - sf::ln_gamma(p.alpha1()) +
                      (a / 2.0 - 1.0) * std::log(z) + z * (p.beta2() - p.beta1()) / 2.0;
  QuadResult r;
  r.value = std::exp(lpre) * w.value;
  r.err_estimate = std::exp(lpre) * w.trunc_error;
  r.n_evals = std::max(w.terms_used, 1);
  return r;
}

QuadResult closed_2f0_pos(const GDDParams& p, double z, double tol) {
  const double upper[2] = {1.0 - p.alpha1(), p.alpha2()};
  const sf::SeriesResult s = sf::hyp_pfq_series(upper, {}, -1.0 / (p.beta() * z), tol);
  if (s.status == sf::SeriesStatus::Diverged || !(s.value > 0) || s.trunc_error > tol * s.value) {
    throw Error(ErrorCode::ClosedMethodInapplicable,
                "2F0 expansion cannot reach the requested accuracy at z=" + num(z));
  }
  const double lf = log_rate_factor(p) - p.alpha2() * std::log(p.beta()) - sf::ln_gamma(p.alpha1()) +
                    (p.alpha1() - 1.0) * std::log(z) - p.beta1() * z + std::log(s.value);
  return from_log(lf, s.trunc_error / s.value, s.terms_used);
}

QuadResult conv_pos(const GDDParams& p, double z, double eps_r) {
  QuadResult r = detail::conv_pdf_positive<double>(p.alpha1(), p.beta1(), p.alpha2(), p.beta2(), z, eps_r, 12);
  if (r.status == QuadStatus::IntegrandNonFinite) {
    throw Error(ErrorCode::IntegrandNonFinite, "convolution integrand non-finite at z=" + num(z));
  }
  return r;
}

template <class F>
QuadResult branch(const GDDParams& p, double z, F&& positive) {
  if (z > 0) return positive(p, z);
  return positive(reflect(p), -z);
}

InversionConfig cf_config(PdfMethod m, double eps_r) {
  InversionConfig cfg;
  cfg.eps_r = eps_r;
  if (m == PdfMethod::CfTrapezoid) {
    cfg.method = InversionMethod::TrapezoidPlain;
    cfg.trunc_tol = eps_r;
  } else {
    cfg.method = InversionMethod::DEOscRealSplit;
  }
  return cfg;
}

// (ln f)'(z) for z > 0 from f = K z^{a-1} e^{-b1 z} U(a2, a, b z) and U' = -a2 U(a2+1, a+1, .).
double log_deriv_pos(const GDDParams& p, double z, double tol) {
  const double y = p.beta() * z;
  const double l0 = sf::tricomi_u_log(p.alpha2(), p.alpha(), y, tol).value;
  const double l1 = sf::tricomi_u_log(p.alpha2() + 1.0, p.alpha() + 1.0, y, tol).value;
  return (p.alpha() - 1.0) / z - p.beta1() - p.beta() * p.alpha2() * std::exp(l1 - l0);
}

double log_deriv(const GDDParams& p, double z, double tol) {
  if (z > 0) return log_deriv_pos(p, z, tol);
  return -log_deriv_pos(reflect(p), -z, tol);
}

double clamp_cdf(const QuadResult& r, double eps_r) {
  const double slack = 10.0 * eps_r;
  if (r.value < -slack || r.value > 1.0 + slack || std::isnan(r.value)) {
    throw Error(ErrorCode::AccuracyNotMet, "cdf value " + num(r.value) + " outside [0, 1] beyond quadrature noise");
  }
  return std::clamp(r.value, 0.0, 1.0);
}

}  // namespace

GDDParams::GDDParams(double alpha1, double beta1, double alpha2, double beta2, double theta)
    : a1_(alpha1), b1_(beta1), a2_(alpha2), b2_(beta2), theta_(theta) {
  for (double v : {alpha1, beta1, alpha2, beta2}) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "GDD shape and rate parameters must be positive and finite, got " + num(v));
    }
  }
  if (!std::isfinite(theta)) throw Error(ErrorCode::InvalidArgument, "GDD location must be finite");
}

GDDParams reflect(const GDDParams& p) { return GDDParams(p.alpha2(), p.beta2(), p.alpha1(), p.beta1(), -p.theta()); }

std::string_view to_string(PdfMethod m) {
  switch (m) {
    case PdfMethod::ClosedU: return "ClosedU";
    case PdfMethod::ClosedW: return "ClosedW";
    case PdfMethod::Closed2F0: return "Closed2F0";
    case PdfMethod::ConvDE: return "ConvDE";
    case PdfMethod::CfTrapezoid: return "CfTrapezoid";
    case PdfMethod::CfDE: return "CfDE";
  }
  return "Unknown";
}

std::string_view to_string(CdfMethod m) {
  switch (m) {
    case CdfMethod::CdfIntegralDE: return "CdfIntegralDE";
    case CdfMethod::CfTrapezoid: return "CfTrapezoid";
    case CdfMethod::CfDE: return "CfDE";
  }
  return "Unknown";
}

std::string_view cli_name(PdfMethod m) {
  switch (m) {
    case PdfMethod::ClosedU: return "closed-u";
    case PdfMethod::ClosedW: return "closed-w";
    case PdfMethod::Closed2F0: return "closed-2f0";
    case PdfMethod::ConvDE: return "conv-de";
    case PdfMethod::CfTrapezoid: return "cf-trapezoid";
    case PdfMethod::CfDE: return "cf-de";
  }
  return "unknown";
}

std::string_view cli_name(CdfMethod m) {
  switch (m) {
    case CdfMethod::CdfIntegralDE: return "cdf-integral-de";
    case CdfMethod::CfTrapezoid: return "cf-trapezoid";
    case CdfMethod::CfDE: return "cf-de";
  }
  return "unknown";
}

std::optional<PdfMethod> parse_pdf_method(std::string_view s) {
  for (PdfMethod m : {PdfMethod::ClosedU, PdfMethod::ClosedW, PdfMethod::Closed2F0, PdfMethod::ConvDE,
                      PdfMethod::CfTrapezoid, PdfMethod::CfDE}) {
    if (s == cli_name(m) || s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<CdfMethod> parse_cdf_method(std::string_view s) {
  for (CdfMethod m : {CdfMethod::CdfIntegralDE, CdfMethod::CfTrapezoid, CdfMethod::CfDE}) {
    if (s == cli_name(m) || s == to_string(m)) return m;
  }
  return std::nullopt;
}

double pdf_at_location(const GDDParams& p) {
  if (p.alpha() <= 1.0) return std::numeric_limits<double>::infinity();
  return std::exp(log_rate_factor(p) - (p.alpha() - 1.0) * std::log(p.beta()) + sf::ln_gamma(p.alpha() - 1.0) -
                  sf::ln_gamma(p.alpha1()) - sf::ln_gamma(p.alpha2()));
}

quad::QuadResult pdf(const GDDParams& p, double x, PdfMethod method, double eps_r) {
  quad::require_eps_r(eps_r);
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "pdf needs a finite x");
  const double z = x - p.theta();
  if (z == 0.0) return exact(pdf_at_location(p));

  QuadResult r;
  switch (method) {
    case PdfMethod::ClosedU:
      r = branch(p, z, [&](const GDDParams& q, double s) { return closed_u_pos(q, s, eps_r); });
      break;
    case PdfMethod::ClosedW:
      r = branch(p, z, [&](const GDDParams& q, double s) { return closed_w_pos(q, s, eps_r); });
      break;
    case PdfMethod::Closed2F0:
      r = branch(p, z, [&](const GDDParams& q, double s) { return closed_2f0_pos(q, s, eps_r); });
      break;
    case PdfMethod::ConvDE:
      r = branch(p, z, [&](const GDDParams& q, double s) { return conv_pos(q, s, eps_r); });
      break;
    case PdfMethod::CfTrapezoid:
    case PdfMethod::CfDE:
      r = invert_pdf(gdd_cf(p), x, cf_config(method, eps_r));
      break;
  }
  r.value = std::max(r.value, 0.0);
  return r;
}

quad::QuadResult cdf_integral_de(const GDDParams& p, double x, double eps_r, bool erf_fast_path) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "cdf needs a finite x");
  const double t = x - p.theta();
  const double a1 = p.alpha1(), b1 = p.beta1(), a2 = p.alpha2(), b2 = p.beta2();
  const double lower = std::max(0.0, -t);
  const double ln_norm = a2 * std::log(b2) - sf::ln_gamma(a2);
  const bool use_erf = erf_fast_path && a1 == 0.5;
  auto integrand = [&](double u) {
    const double y = b1 * (u + t);
    if (!(y > 0)) return 0.0;
    const double pa = use_erf ? sf::erf(std::sqrt(y)) : sf::regularized_lower_gamma(a1, y);
    return std::exp(ln_norm + (a2 - 1.0) * std::log(u) - b2 * u) * pa;
  };
  const quad::DENonOscPlan plan(lower, b2, eps_r);
  QuadResult r = quad::intde_semi(integrand, plan);
  if (r.status == QuadStatus::IntegrandNonFinite) {
    throw Error(ErrorCode::IntegrandNonFinite, "cdf integrand non-finite at x=" + num(x));
  }
  return r;
}

quad::QuadResult cdf(const GDDParams& p, double x, CdfMethod method, double eps_r) {
  quad::require_eps_r(eps_r);
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "cdf needs a finite x");
  QuadResult r;
  switch (method) {
    case CdfMethod::CdfIntegralDE:
      r = cdf_integral_de(p, x, eps_r);
      break;
    case CdfMethod::CfTrapezoid:
      r = invert_cdf(gdd_cf(p), x, cf_config(PdfMethod::CfTrapezoid, eps_r));
      break;
    case CdfMethod::CfDE:
      r = invert_cdf(gdd_cf(p), x, cf_config(PdfMethod::CfDE, eps_r));
      break;
  }
  r.value = clamp_cdf(r, eps_r);
  return r;
}

double cdf_at_zero(const GDDParams& p) {
  // F(theta) = 1 - F_reflected(theta'); use whichever side has the smaller
  // 2F1 argument so the series converges quickly.
  const bool swap = p.beta1() > p.beta2();
  const GDDParams q = swap ? reflect(p) : p;
  const double z = q.beta1() / q.beta();
  const sf::SeriesResult f = sf::gauss_2f1(1.0, q.alpha(), q.alpha1() + 1.0, z, 1e-17);
  const double lpre = log_rate_factor(q) + sf::ln_gamma(q.alpha()) - q.alpha() * std::log(q.beta()) -
                      sf::ln_gamma(q.alpha1() + 1.0) - sf::ln_gamma(q.alpha2());
  const double v = std::exp(lpre) * f.value;
  return swap ? 1.0 - v : v;
}

double cdf_pdf_ratio_at_zero(const GDDParams& p) {
  if (p.alpha() <= 1.0) {
    throw Error(ErrorCode::DomainError, "F(0)/f(0) is only defined for alpha > 1");
  }
  const sf::SeriesResult f = sf::gauss_2f1(1.0, p.alpha(), p.alpha1() + 1.0, p.beta1() / p.beta(), 1e-17);
  // Gamma(alpha) / Gamma(alpha - 1) = alpha - 1 once f(0) is divided out.
  return (p.alpha() - 1.0) / (p.beta() * p.alpha1()) * f.value;
}

Moments moments(const GDDParams& p) {
  const double a1 = p.alpha1(), b1 = p.beta1(), a2 = p.alpha2(), b2 = p.beta2();
  const double s2 = a1 * b2 * b2 + a2 * b1 * b1;  // variance * b1^2 b2^2
  Moments m;
  m.mean = a1 / b1 - a2 / b2 + p.theta();
  m.variance = a1 / (b1 * b1) + a2 / (b2 * b2);
  m.skewness = 2.0 * (a1 * b2 * b2 * b2 - a2 * b1 * b1 * b1) / std::pow(s2, 1.5);
  m.kurtosis = 3.0 + 6.0 * (a1 * std::pow(b2, 4) + a2 * std::pow(b1, 4)) / (s2 * s2);
  return m;
}

double pdf_derivative(const GDDParams& p, double x, double eps_r) {
  quad::require_eps_r(eps_r);
  const double z = x - p.theta();
  if (z == 0.0) {
    if (p.alpha() <= 2.0) {
      throw Error(ErrorCode::DomainError, "f'(theta) is only available for alpha > 2");
    }
    const double a1 = p.alpha1(), b1 = p.beta1(), a2 = p.alpha2(), b2 = p.beta2();
    const double lpre = log_rate_factor(p) - (p.alpha() - 1.0) * std::log(p.beta()) +
                        sf::ln_gamma(p.alpha() - 2.0) - sf::ln_gamma(a1) - sf::ln_gamma(a2);
    return std::exp(lpre) * (b2 * (a1 - 1.0) - (a2 - 1.0) * b1);
  }
  const double f = pdf(p, x, PdfMethod::ClosedU, eps_r).value;
  return f * log_deriv(p, z, eps_r);
}

namespace {

// f'(theta) / f(theta) for alpha > 2.
double seam_log_deriv(const GDDParams& p) {
  return (p.beta2() * (p.alpha1() - 1.0) - p.beta1() * (p.alpha2() - 1.0)) / (p.alpha() - 2.0);
}

}  // namespace

double mode(const GDDParams& p, double tol) {
  if (p.alpha() <= 1.0) {
    throw Error(ErrorCode::ModeUndefined, "the density is unbounded at theta when alpha <= 1");
  }
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "mode tolerance must be positive");
  const Moments m = moments(p);
  const double sd = std::sqrt(m.variance);
  const double utol = std::max(tol, 1e-15);
  // h = (ln f)' is positive left of the mode and negative right of it. Work
  // in centred coordinates; z = 0 is never evaluated (closed value only).
  auto h = [&](double z) {
    if (std::abs(z) < 1e-12 * sd) {
      if (p.alpha() > 2.0) return seam_log_deriv(p);
      z = std::copysign(1e-12 * sd, z);
    }
    return log_deriv(p, z, 1e-14);
  };

  const double mu = m.mean - p.theta();
  double lo = mu - sd, hi = mu + sd;
  double hlo = h(lo), hhi = h(hi);
  for (int k = 0; hlo <= 0; ++k) {
    if (k == 12) throw Error(ErrorCode::NoBracket, "no sign change of f' left of the mean");
    lo -= sd * std::ldexp(1.0, k + 1);
    hlo = h(lo);
  }
  for (int k = 0; hhi >= 0; ++k) {
    if (k == 12) throw Error(ErrorCode::NoBracket, "no sign change of f' right of the mean");
    hi += sd * std::ldexp(1.0, k + 1);
    hhi = h(hi);
  }

  // The seam z = 0 is handled from closed forms: for alpha > 2 f'/f is finite
  // there; for 1 < alpha <= 2 the density has a cusp and only the one-sided
  // signs matter. Afterwards the bracket never straddles the seam.
  const double seam = 1e-12 * sd;
  if (lo < 0.0 && hi > 0.0) {
    double left = 0.0, right = 0.0;
    if (p.alpha() > 2.0) {
      left = right = seam_log_deriv(p);
    } else {
      left = h(-seam);
      right = h(seam);
    }
    if (left >= 0.0 && right <= 0.0) return p.theta();
    if (right > 0.0) {
      lo = 0.0;
    } else {
      hi = 0.0;
    }
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double hz = h(z);
    if (hz == 0.0) break;
    (hz > 0 ? lo : hi) = z;
    const double d = 1e-6 * std::max(std::abs(z), 1e-3 * sd);
    const double slope = (h(z + d) - h(z - d)) / (2.0 * d);
    double next = z - hz / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - z);
    z = next;
    if (step <= utol * std::max(1.0, std::abs(z)) || hi - lo <= utol * std::max(1.0, std::abs(z))) break;
  }
  return z + p.theta();
}

std::pair<double, double> six_sigma_interval(const GDDParams& p) {
  const Moments m = moments(p);
  const double s = std::sqrt(m.variance);
  return {m.mean - 6.0 * s, m.mean + 6.0 * s};
}

GDDParams mm_gdd_params(const MMContext& c) {
  if (c.n <= c.k + c.l || c.k < 0 || c.l < 0) {
    throw Error(ErrorCode::InvalidArgument, "MM mapping needs n > k + l");
  }
  if (!(c.v_norm_sq > 0) || !(c.s0_sq > 0) || !(c.sj_sq >= 0)) {
    throw Error(ErrorCode::InvalidArgument, "MM mapping needs |v|^2 > 0, s0^2 > 0, sj^2 >= 0");
  }
  const double dof = static_cast<double>(c.n - c.k - c.l);
  return GDDParams(0.5, c.v_norm_sq / (2.0 * (c.s0_sq + c.sj_sq * c.v_norm_sq)), dof / 2.0,
                   dof * c.v_norm_sq / (2.0 * c.s0_sq));
}

}  // namespace gdd
