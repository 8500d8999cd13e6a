#include "gdd/charfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gdd/error.hpp"

namespace gdd {

namespace {

using cplx = std::complex<double>;
using quad::QuadResult;
using quad::QuadStatus;

constexpr double kPi = std::numbers::pi;
// Below this |x - location| the Fourier kernel is treated as non-oscillatory.
constexpr double kSmallX = 1e-8;

// Real and imaginary part of the centred CF, through either route.
struct Parts {
  double re, im;
};

Parts centred_parts(const CharFun& cf, double t, bool use_decomp) {
  if (use_decomp) {
    const ModulusPhase mp = cf.modulus_phase_centred(t);
    const double m = cf.scale_prefactor() * mp.r;
    return {m * std::cos(mp.phi), m * std::sin(mp.phi)};
  }
  const cplx v = cf.eval_centred(t);
  return {v.real(), v.imag()};
}

double mean_of(const CharFun& cf) {
  if (cf.hints().mean) return *cf.hints().mean;
  // Im phi(t) / t -> mean as t -> 0; phi is Hermitian so the central
  // difference collapses to one sample.
  constexpr double h = 1e-6;
  return cf.eval_centred(h).imag() / h;
}

QuadResult combine(const QuadResult& a, const QuadResult& b, double value) {
  QuadResult out;
  out.value = value;
  out.err_estimate = (a.err_estimate + b.err_estimate) / kPi;
  out.n_evals = a.n_evals + b.n_evals;
  out.status = quad::combine(a.status, b.status);
  return out;
}

// Smallest t with |phi(t)| < tol (the modulus is taken as eventually decreasing).
double truncation_point(const CharFun& cf, double tol) {
  auto mod = [&](double t) { return std::abs(cf.eval_centred(t)); };
  double hi = 1.0;
  while (mod(hi) >= tol) {
    hi *= 2.0;
    if (hi > 1e12) throw Error(ErrorCode::NoConvergence, "characteristic function does not decay below trunc_tol");
  }
  double lo = hi / 2.0;
  if (mod(lo) < tol) lo = 0.0;
  for (int i = 0; i < 60 && hi - lo > 1e-3 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mod(mid) < tol ? hi : lo) = mid;
  }
  return hi;
}

struct TrapezoidGrid {
  double h;
  int n;
};

TrapezoidGrid trapezoid_grid(const CharFun& cf, const InversionConfig& cfg) {
  const double T = truncation_point(cf, cfg.trunc_tol);
  // The step fixes the aliasing period 2*pi/h; widen it with the tolerance so
  // the periodic images fall deep enough into the tails.
  const double widen = std::max(1.0, std::log10(1.0 / cfg.trunc_tol) / 4.0);
  const double width = widen * cf.hints().x_range.value_or(16.0);
  const double want = std::max(64.0, std::ceil(T * width / kPi));
  const int n = static_cast<int>(std::min<double>(want, cfg.max_nodes));
  return {T / n, n};
}

QuadResult trapezoid_pdf(const CharFun& cf, double xc, const InversionConfig& cfg) {
  const auto [h, n] = trapezoid_grid(cf, cfg);
  quad::CompensatedSum<double> acc;
  acc.add(0.5);  // Re phi(0) = 1
  for (int k = 1; k <= n; ++k) {
    const double t = k * h;
    const cplx v = std::polar(1.0, -t * xc) * cf.eval_centred(t);
    if (!std::isfinite(v.real())) {
      throw Error(ErrorCode::IntegrandNonFinite, "trapezoid CF sample at t=" + std::to_string(t));
    }
    acc.add(k == n ? 0.5 * v.real() : v.real());
  }
  QuadResult out;
  out.value = h * acc.value() / kPi;
  out.err_estimate = cfg.trunc_tol;
  out.n_evals = n + 1;
  return out;
}

QuadResult trapezoid_cdf(const CharFun& cf, double xc, const InversionConfig& cfg) {
  const auto [h, n] = trapezoid_grid(cf, cfg);
  quad::CompensatedSum<double> acc;
  acc.add(0.5 * (mean_of(cf) - xc));  // removable singularity at t = 0
  for (int k = 1; k <= n; ++k) {
    const double t = k * h;
    const double g = (std::polar(1.0, -t * xc) * cf.eval_centred(t)).imag() / t;
    if (!std::isfinite(g)) {
      throw Error(ErrorCode::IntegrandNonFinite, "trapezoid CF sample at t=" + std::to_string(t));
    }
    acc.add(k == n ? 0.5 * g : g);
  }
  QuadResult out;
  out.value = 0.5 - h * acc.value() / kPi;
  out.err_estimate = cfg.trunc_tol;
  out.n_evals = n + 1;
  return out;
}

QuadResult near_zero(const CharFun& cf, double xc, const InversionConfig& cfg, bool cdf, bool use_decomp) {
  // phi decays on the t-scale given by the hint; the DE rate is its inverse.
  const double scale = cf.hints().decay.value_or(1.0);
  const quad::DENonOscPlan plan(0.0, 1.0 / scale, cfg.eps_r);
  QuadResult r = quad::intde_semi(
      [&](double t) {
        const Parts p = centred_parts(cf, t, use_decomp);
        const double c = std::cos(t * xc), s = std::sin(t * xc);
        // Re / Im of exp(-i t x) phi(t)
        return cdf ? (c * p.im - s * p.re) / t : c * p.re + s * p.im;
      },
      plan);
  r.err_estimate /= kPi;
  r.value = cdf ? 0.5 - r.value / kPi : r.value / kPi;
  return r;
}

QuadResult de_invert(const CharFun& cf, double xc, const InversionConfig& cfg, bool cdf) {
  const bool use_decomp = cfg.method == InversionMethod::DEOscRealSplit;
  if (use_decomp && !cf.has_modulus_phase()) {
    throw Error(ErrorCode::MissingDecomposition, "real-split inversion needs a modulus/phase decomposition");
  }
  if (std::abs(xc) < kSmallX) return near_zero(cf, xc, cfg, cdf, use_decomp);

  const double omega = std::abs(xc);
  const double sgn = xc > 0 ? 1.0 : -1.0;
  const quad::DEOscPlan cos_plan(omega, quad::OscKind::Cosine, cfg.eps_r);
  const quad::DEOscPlan sin_plan(omega, quad::OscKind::Sine, cfg.eps_r);

  if (!cdf) {
    // Re[e^{-ixt} phi] = cos(wt) Re phi + sgn sin(wt) Im phi
    const QuadResult rc = quad::intdeo([&](double t) { return centred_parts(cf, t, use_decomp).re; }, 0.0, cos_plan);
    const QuadResult rs = quad::intdeo([&](double t) { return centred_parts(cf, t, use_decomp).im; }, 0.0, sin_plan);
    return combine(rc, rs, (rc.value + sgn * rs.value) / kPi);
  }
  // Im[e^{-ixt} phi] / t = cos(wt) Im phi / t - sgn sin(wt) Re phi / t
  const QuadResult rc =
      quad::intdeo([&](double t) { return centred_parts(cf, t, use_decomp).im / t; }, 0.0, cos_plan);
  const QuadResult rs =
      quad::intdeo([&](double t) { return centred_parts(cf, t, use_decomp).re / t; }, 0.0, sin_plan);
  return combine(rc, rs, 0.5 - (rc.value - sgn * rs.value) / kPi);
}

void check_result(const QuadResult& r) {
  if (r.status == QuadStatus::IntegrandNonFinite) {
    throw Error(ErrorCode::IntegrandNonFinite, "characteristic function inversion hit a non-finite sample");
  }
}

}  // namespace

CharFun::CharFun(Eval centred, std::optional<Decomp> decomposition, double scale_prefactor, double location,
                 CharFunHints hints)
    : eval_(std::move(centred)),
      decomp_(std::move(decomposition)),
      scale_(scale_prefactor),
      location_(location),
      hints_(hints) {
  if (!eval_) throw Error(ErrorCode::InvalidArgument, "CharFun needs an evaluator");
  if (!(scale_ > 0) || !std::isfinite(scale_)) {
    throw Error(ErrorCode::InvalidArgument, "CharFun scale prefactor must be positive and finite");
  }
  if (!std::isfinite(location_)) throw Error(ErrorCode::InvalidArgument, "CharFun location must be finite");
}

std::complex<double> CharFun::eval(double t) const {
  if (location_ == 0.0) return eval_(t);
  return eval_(t) * std::polar(1.0, t * location_);
}

ModulusPhase CharFun::modulus_phase_centred(double t) const {
  if (!decomp_) throw Error(ErrorCode::MissingDecomposition, "CharFun has no modulus/phase decomposition");
  return (*decomp_)(t);
}

ModulusPhase CharFun::modulus_phase(double t) const {
  ModulusPhase mp = modulus_phase_centred(t);
  mp.phi += t * location_;
  return mp;
}

CharFun gamma_cf(double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "gamma CF needs positive finite shape and rate");
  }
  CharFunHints hints;
  hints.mean = alpha / beta;
  hints.x_range = 12.0 * std::sqrt(alpha) / beta;
  hints.decay = beta;
  return CharFun(
      [alpha, beta](double t) { return std::pow(cplx(1.0, -t / beta), -alpha); },
      CharFun::Decomp([alpha, beta](double t) {
        return ModulusPhase{std::pow(beta * beta + t * t, -alpha / 2.0), alpha * std::atan(t / beta)};
      }),
      std::pow(beta, alpha), 0.0, hints);
}

CharFun gdd_cf(const GDDParams& p) {
  const double a1 = p.alpha1(), b1 = p.beta1(), a2 = p.alpha2(), b2 = p.beta2();
  CharFunHints hints;
  hints.mean = a1 / b1 - a2 / b2;
  hints.x_range = 12.0 * std::sqrt(a1 / (b1 * b1) + a2 / (b2 * b2));
  hints.decay = b1 + b2;
  return CharFun(
      [=](double t) { return std::pow(cplx(1.0, -t / b1), -a1) * std::pow(cplx(1.0, t / b2), -a2); },
      CharFun::Decomp([=](double t) {
        const double r = std::pow(b1 * b1 + t * t, -a1 / 2.0) * std::pow(b2 * b2 + t * t, -a2 / 2.0);
        return ModulusPhase{r, a1 * std::atan(t / b1) - a2 * std::atan(t / b2)};
      }),
      std::pow(b1, a1) * std::pow(b2, a2), p.theta(), hints);
}

CharFun cf_scaled_product(const std::vector<std::pair<CharFun, double>>& components) {
  if (components.empty()) throw Error(ErrorCode::InvalidArgument, "cf_scaled_product needs at least one component");
  bool all_decomp = true;
  bool all_mean = true;
  double scale = 1.0, location = 0.0, mean = 0.0, decay = 0.0, range = 0.0;
  bool all_range = true, all_decay = true;
  for (const auto& [cf, c] : components) {
    all_decomp = all_decomp && cf.has_modulus_phase();
    scale *= cf.scale_prefactor();
    location += c * cf.location();
    if (cf.hints().mean) mean += c * *cf.hints().mean; else all_mean = false;
    if (cf.hints().x_range) range += std::abs(c) * *cf.hints().x_range; else all_range = false;
    if (cf.hints().decay && c != 0.0) decay += *cf.hints().decay / std::abs(c); else all_decay = false;
  }
  CharFunHints hints;
  if (all_mean) hints.mean = mean;
  if (all_range) hints.x_range = range;
  if (all_decay) hints.decay = decay;

  auto parts = components;  // captured by value
  CharFun::Eval eval = [parts](double t) {
    cplx v(1.0, 0.0);
    for (const auto& [cf, c] : parts) v *= cf.eval_centred(c * t);
    return v;
  };
  std::optional<CharFun::Decomp> decomp;
  if (all_decomp) {
    decomp = [parts](double t) {
      ModulusPhase out{1.0, 0.0};
      for (const auto& [cf, c] : parts) {
        const ModulusPhase mp = cf.modulus_phase_centred(c * t);
        out.r *= mp.r;
        out.phi += mp.phi;
      }
      return out;
    };
  }
  return CharFun(std::move(eval), std::move(decomp), scale, location, hints);
}

std::string_view to_string(InversionMethod m) {
  switch (m) {
    case InversionMethod::TrapezoidPlain: return "TrapezoidPlain";
    case InversionMethod::DEOscComplex: return "DEOscComplex";
    case InversionMethod::DEOscRealSplit: return "DEOscRealSplit";
  }
  return "Unknown";
}

void InversionConfig::validate() const {
  quad::require_eps_r(eps_r);
  if (!(trunc_tol > 0 && trunc_tol < 1)) throw Error(ErrorCode::InvalidArgument, "trunc_tol must lie in (0, 1)");
  if (max_nodes < 64) throw Error(ErrorCode::InvalidArgument, "max_nodes must be at least 64");
}

quad::QuadResult invert_pdf(const CharFun& cf, double x, const InversionConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "invert_pdf needs a finite x");
  const double xc = x - cf.location();
  QuadResult r = cfg.method == InversionMethod::TrapezoidPlain ? trapezoid_pdf(cf, xc, cfg)
                                                               : de_invert(cf, xc, cfg, false);
  check_result(r);
  return r;
}

quad::QuadResult invert_cdf(const CharFun& cf, double x, const InversionConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "invert_cdf needs a finite x");
  const double xc = x - cf.location();
  QuadResult r = cfg.method == InversionMethod::TrapezoidPlain ? trapezoid_cdf(cf, xc, cfg)
                                                               : de_invert(cf, xc, cfg, true);
  check_result(r);
  return r;
}

}  // namespace gdd
