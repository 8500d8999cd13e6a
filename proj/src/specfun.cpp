#include "gdd/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gdd/dequad.hpp"
#include "gdd/error.hpp"

namespace gdd::sf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Series part of P(a, x): x^a e^-x / Γ(a+1) * sum x^n / ((a+1)...(a+n)).
double p_series(double a, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * kEps * 0.5) break;
  }
  return std::exp(a * std::log(x) - x - ln_gamma(a + 1.0)) * sum;
}

// Q(a, x) by the Legendre continued fraction (modified Lentz).
double q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(a * std::log(x) - x - ln_gamma(a)) * h;
}

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw Error(ErrorCode::DomainError, std::string(what) + " must be positive and finite, got " + num(v));
  }
}

// Log-space integrand of U's integral representation, shifted by its peak so
// the quadrature works on O(1) values.
struct UIntegrand {
  double a, b, z, shift;
  double operator()(double t) const {
    return std::exp((a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t) - z * t - shift);
  }
};

double u_log_peak(double a, double b, double z) {
  // Stationary point of (a-1) ln t + (b-a-1) ln(1+t) - z t:
  //   z t^2 - (b - 2 - z) t - (a - 1) = 0.
  const double p = b - 2.0 - z;
  const double disc = p * p + 4.0 * z * (a - 1.0);
  if (disc >= 0) {
    const double t = (p + std::sqrt(disc)) / (2.0 * z);
    if (t > 0 && std::isfinite(t)) {
      return (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t) - z * t;
    }
  }
  return 0.0;
}

// Relative error that exp() of a rounded logarithm carries by itself.
double log_rounding(double log_value) {
  return 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(log_value));
}

bool meets(const SeriesResult& s, double tol) {
  return s.status != SeriesStatus::Diverged && std::isfinite(s.value) &&
         s.trunc_error <= tol * std::abs(s.value);
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0) || std::isnan(x)) {
    throw Error(ErrorCode::DomainError, "ln_gamma needs x > 0, got " + num(x));
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double regularized_lower_gamma(double a, double x) {
  require_positive(a, "incomplete gamma parameter a");
  if (!(x >= 0) || std::isnan(x)) {
    throw Error(ErrorCode::DomainError, "incomplete gamma needs x >= 0, got " + num(x));
  }
  if (x == 0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return p_series(a, x);
  return 1.0 - q_continued_fraction(a, x);
}

double lower_inc_gamma(double a, double x) {
  return regularized_lower_gamma(a, x) * std::exp(ln_gamma(a));
}

double erf(double x) { return std::copysign(std::erf(std::abs(x)), x); }

SeriesResult hyp_pfq_series(std::span<const double> upper, std::span<const double> lower, double z,
                            double tol, int max_terms) {
  const bool asymptotic = upper.size() > lower.size() + 1;
  // Past this index every (a_i + n) and (b_j + n) is positive, so |term| can
  // no longer dip through a sign change of a Pochhammer factor.
  double settle = 0;
  for (double a : upper) settle = std::max(settle, -a);
  for (double b : lower) {
    settle = std::max(settle, -b);
    if (b <= 0 && b == std::floor(b)) {
      throw Error(ErrorCode::DomainError, "pFq lower parameter is a nonpositive integer: " + num(b));
    }
  }

  SeriesResult out;
  quad::CompensatedSum<double> sum;
  double term = 1.0;
  for (int n = 0; n < max_terms; ++n) {
    if (n > 0 && std::abs(term) <= tol * std::abs(sum.value())) {
      sum.add(term);
      out.value = sum.value();
      out.terms_used = n + 1;
      out.trunc_error = std::abs(term);
      // A divergent expansion that happens to meet tol is still asymptotic.
      out.status = asymptotic ? SeriesStatus::AsymptoticBestTerm : SeriesStatus::Converged;
      return out;
    }
    double next = term * z / (n + 1.0);
    for (double a : upper) next *= a + n;
    for (double b : lower) next /= b + n;
    if (asymptotic && n > settle && std::abs(next) >= std::abs(term)) {
      // Smallest term reached: stop before it, it bounds the error.
      out.value = sum.value();
      out.terms_used = n;
      out.trunc_error = std::abs(term);
      out.status = n > 0 ? SeriesStatus::AsymptoticBestTerm : SeriesStatus::Diverged;
      return out;
    }
    sum.add(term);
    if (next == 0) {  // terminating series
      out.value = sum.value();
      out.terms_used = n + 1;
      out.trunc_error = 0;
      out.status = SeriesStatus::Converged;
      return out;
    }
    if (!std::isfinite(next)) break;
    term = next;
  }
  out.value = sum.value();
  out.terms_used = max_terms;
  out.trunc_error = std::abs(term);
  out.status = SeriesStatus::Diverged;
  return out;
}

SeriesResult tricomi_u_log(double a, double b, double z, double tol, URoute route) {
  if (!(a > 0)) throw Error(ErrorCode::DomainError, "tricomi_u needs a > 0, got " + num(a));
  if (!(z > 0)) throw Error(ErrorCode::DomainError, "tricomi_u needs z > 0, got " + num(z));

  if (route != URoute::Integral) {
    const double upper[2] = {a, a - b + 1.0};
    SeriesResult s = hyp_pfq_series(upper, {}, -1.0 / z, tol);
    if (meets(s, tol) && s.value > 0) {
      s.trunc_error /= s.value;
      s.value = std::log(s.value) - a * std::log(z);
      s.trunc_error = std::max(s.trunc_error, log_rounding(s.value));
      return s;
    }
    if (route == URoute::Asymptotic) {
      throw Error(ErrorCode::AccuracyNotMet, "2F0 expansion of U(" + num(a) + "," + num(b) + "," + num(z) +
                                                 ") cannot reach tol " + num(tol));
    }
  }

  const double shift = u_log_peak(a, b, z);
  const UIntegrand f{a, b, z, shift};
  const quad::DENonOscPlan plan(0.0, z, std::max(tol, 1e-16), 14);
  const quad::QuadResult r = quad::intde_semi(f, plan);
  if (r.status == quad::QuadStatus::IntegrandNonFinite || !(r.value > 0)) {
    throw Error(ErrorCode::IntegrandNonFinite, "U integral failed at a=" + num(a) + " b=" + num(b) + " z=" + num(z));
  }
  const double rel = r.err_estimate / r.value;
  if (r.status != quad::QuadStatus::Converged && rel > tol) {
    throw Error(ErrorCode::AccuracyNotMet, "U(" + num(a) + "," + num(b) + "," + num(z) + ") integral route stalled at relative error " + num(rel));
  }
  SeriesResult out;
  out.value = std::log(r.value) + shift - ln_gamma(a);
  out.terms_used = static_cast<int>(r.n_evals);
  out.trunc_error = std::max(rel, log_rounding(out.value));
  out.status = SeriesStatus::Converged;
  return out;
}

SeriesResult tricomi_u(double a, double b, double z, double tol, URoute route) {
  const SeriesResult lg = tricomi_u_log(a, b, z, tol, route);
  SeriesResult out = lg;
  out.value = std::exp(lg.value);
  out.trunc_error = lg.trunc_error * out.value;
  return out;
}

SeriesResult tricomi_u_deriv(double a, double b, double z, double tol) {
  SeriesResult s = tricomi_u(a + 1.0, b + 1.0, z, tol);
  s.value *= -a;
  s.trunc_error *= std::abs(a);
  return s;
}

double u_log_deriv_cf(double a, double b, double z, int max_terms) {
  if (!(z > 0)) throw Error(ErrorCode::DomainError, "u_log_deriv_cf needs z > 0");
  if (b == std::floor(b)) throw Error(ErrorCode::DomainError, "u_log_deriv_cf needs non-integer b");
  if (max_terms < 2) throw Error(ErrorCode::InvalidArgument, "u_log_deriv_cf needs max_terms >= 2");
  auto eval = [&](int n) {
    double tail = 0.0;
    for (int m = n; m >= 1; --m) {
      tail = (a + m) * (b - a - m - 1.0) / (b - 2.0 * a - 2.0 * m - 2.0 - z + tail);
    }
    return -a / z + (a * (1.0 + a - b) / z) / (2.0 * a - b + 2.0 + z - tail);
  };
  const double v = eval(max_terms);
  const double prev = eval(max_terms - 1);
  if (!std::isfinite(v) || std::abs(v - prev) > 1e-12 * std::abs(v)) {
    throw Error(ErrorCode::NoConvergence, "U log-derivative continued fraction not settled after " +
                                              std::to_string(max_terms) + " terms");
  }
  return v;
}

SeriesResult whittaker_w(double kappa, double mu, double z, double tol) {
  if (!(z > 0)) throw Error(ErrorCode::DomainError, "whittaker_w needs z > 0");
  const double m = (-mu - kappa + 0.5 > mu - kappa + 0.5) ? -mu : mu;
  const double a = m - kappa + 0.5;
  if (!(a > 0)) {
    throw Error(ErrorCode::DomainError, "whittaker_w: induced U parameter " + num(a) + " is not positive");
  }
  const SeriesResult lg = tricomi_u_log(a, 2.0 * m + 1.0, z, tol, URoute::Integral);
  SeriesResult out = lg;
  out.value = std::exp(-z / 2.0 + (m + 0.5) * std::log(z) + lg.value);
  out.trunc_error = lg.trunc_error * out.value;
  return out;
}

SeriesResult gauss_2f1(double a, double b, double c, double z, double tol) {
  if (!(std::abs(z) < 1)) throw Error(ErrorCode::DomainError, "gauss_2f1 needs |z| < 1, got " + num(z));
  const double upper[2] = {a, b};
  const double lower[1] = {c};
  SeriesResult s = hyp_pfq_series(upper, lower, z, tol, 100000);
  if (s.status != SeriesStatus::Converged) {
    throw Error(ErrorCode::AccuracyNotMet, "2F1 series did not converge at z=" + num(z));
  }
  return s;
}

}  // namespace gdd::sf
