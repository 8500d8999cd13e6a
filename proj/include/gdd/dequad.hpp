#pragma once

// Double exponential quadrature on semi-infinite intervals.
//
//   trapezoid_sum  h * sum_{k=-n}^{n} f(kh)
//   intde_semi     int_a^inf f(x) dx,  f decaying like exp(-decay * x),
//                  x = a + exp(t - exp(-t)) / decay
//   intdeo         int_a^inf f(x) sin(wx) dx  or  f(x) cos(wx) dx,
//                  x = a + M phi(t) / w  with the Ooura-Mori robust transform
//                  phi(t) = t / (1 - exp(-2t - alpha(1 - e^-t) - beta(e^t - 1)))
//
// All routines are templates over the floating type so the same code serves
// the double precision library and the long double reference oracle.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "gdd/error.hpp"

namespace gdd::quad {

enum class QuadStatus { Converged, MaxLevelReached, IntegrandNonFinite };

inline const char* to_string(QuadStatus s) {
  switch (s) {
    case QuadStatus::Converged: return "Converged";
    case QuadStatus::MaxLevelReached: return "MaxLevelReached";
    case QuadStatus::IntegrandNonFinite: return "IntegrandNonFinite";
  }
  return "Unknown";
}

template <class Real>
struct BasicQuadResult {
  Real value = 0;
  Real err_estimate = 0;  // absolute
  std::int64_t n_evals = 0;
  QuadStatus status = QuadStatus::Converged;

  bool ok() const { return status != QuadStatus::IntegrandNonFinite; }
};

using QuadResult = BasicQuadResult<double>;

/// Worse of two statuses; used when a value is assembled from several
/// quadratures.
inline QuadStatus combine(QuadStatus a, QuadStatus b) {
  auto rank = [](QuadStatus s) {
    switch (s) {
      case QuadStatus::Converged: return 0;
      case QuadStatus::MaxLevelReached: return 1;
      case QuadStatus::IntegrandNonFinite: return 2;
    }
    return 2;
  };
  return rank(a) >= rank(b) ? a : b;
}

/// Neumaier's compensated summation.
template <class Real>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_ += std::abs(x);
  }
  Real value() const { return sum_ + comp_; }
  Real abs_total() const { return abs_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
  Real abs_ = 0;
};

/// Accepted relative error requests: [1e-15, 1e-1] for the public double
/// API, with headroom below for the reference oracle (1e-16 in double, a few
/// ulps in wider types).
template <class Real>
void require_eps_r(Real eps_r) {
  const Real lo = std::numeric_limits<Real>::epsilon() <= Real(1e-18) ? Real(5e-20) : Real(1e-16);
  if (!(eps_r >= lo && eps_r <= Real(1e-1))) {
    throw Error(ErrorCode::InvalidArgument, "relative error request must lie in [1e-15, 1e-1], got " +
                                                std::to_string(static_cast<double>(eps_r)));
  }
}

// ---------------------------------------------------------------------------
// Plain trapezoid

/// h * sum_{k=-n}^{n} f(k h). Throws IntegrandNonFinite on a non-finite sample.
template <class F>
double trapezoid_sum(F&& f, double h, int n) {
  if (!(h > 0) || n < 0) {
    throw Error(ErrorCode::InvalidArgument, "trapezoid_sum needs h > 0 and n >= 0");
  }
  CompensatedSum<double> acc;
  for (int k = -n; k <= n; ++k) {
    const double v = f(k * h);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::IntegrandNonFinite, "trapezoid_sum sample at x=" + std::to_string(k * h));
    }
    acc.add(v);
  }
  return h * acc.value();
}

// ---------------------------------------------------------------------------
// Non-oscillatory semi-infinite DE

template <class Real>
struct BasicDENonOscPlan {
  Real a = 0;
  Real decay = 1;
  Real eps_r = Real(1e-12);
  int max_level = 12;

  BasicDENonOscPlan() = default;
  BasicDENonOscPlan(Real a_, Real decay_, Real eps_r_, int max_level_ = 12)
      : a(a_), decay(decay_), eps_r(eps_r_), max_level(max_level_) {
    if (!(decay > 0) || !std::isfinite(static_cast<double>(decay))) {
      throw Error(ErrorCode::InvalidArgument, "intde_semi decay rate must be positive");
    }
    require_eps_r(eps_r);
    if (max_level < 1 || max_level > 20) {
      throw Error(ErrorCode::InvalidArgument, "intde_semi max_level must be in [1, 20]");
    }
  }
};

using DENonOscPlan = BasicDENonOscPlan<double>;

namespace detail {

// Level 0 uses a coarse step over roughly |t| <= 6.8; every further level
// halves the step and only evaluates the new (odd) nodes. On the right the
// march may continue past that while the integrand is still significant: the
// map is only single exponential there, so algebraic tails need room.
inline constexpr double kSemiStep0 = 0.5;
inline constexpr double kSemiTmin = -7.0;
inline constexpr double kSemiTmax = 40.0;

template <class Real>
constexpr Real negligible_ratio() {
  return std::numeric_limits<Real>::epsilon() * Real(1e-3);
}

}  // namespace detail

/// int_a^inf f(x) dx by the exp(t - exp(-t)) DE transform. Nodes cluster
/// double exponentially at `a`, so integrable endpoint singularities are fine;
/// f is never evaluated at a itself.
template <class Real, class F>
BasicQuadResult<Real> intde_semi(F&& f, const BasicDENonOscPlan<Real>& plan) {
  using std::exp;
  const Real inv_b = Real(1) / plan.decay;
  BasicQuadResult<Real> out;

  // One sample: returns f(x(t)) x'(t) or NaN when non-finite; `beyond` flags a
  // node that collapsed onto a or whose weight underflowed.
  auto sample = [&](Real t, bool& beyond) -> Real {
    const Real et = exp(-t);
    const Real phi = exp(t - et);
    const Real dx = inv_b * phi;
    const Real w = dx * (Real(1) + et);
    const Real x = plan.a + dx;
    if (!(dx > 0) || x == plan.a || !(w > 0) || !std::isfinite(static_cast<double>(w))) {
      beyond = true;
      return Real(0);
    }
    beyond = false;
    ++out.n_evals;
    const Real v = f(x);
    if (!std::isfinite(static_cast<double>(v))) return std::numeric_limits<Real>::quiet_NaN();
    return v * w;
  };

  const Real h0 = Real(detail::kSemiStep0);
  const Real tiny = detail::negligible_ratio<Real>();

  // Level 0: march outwards to find the effective window [k_lo, k_hi] * h0.
  CompensatedSum<Real> level_sum;
  Real max_term = 0;
  bool beyond = false;
  const Real f0 = sample(Real(0), beyond);
  if (std::isnan(static_cast<double>(f0))) {
    out.status = QuadStatus::IntegrandNonFinite;
    return out;
  }
  level_sum.add(f0);
  max_term = std::abs(f0);

  int k_hi = 0;
  for (int k = 1, quiet = 0; k * h0 <= Real(detail::kSemiTmax); ++k) {
    const Real v = sample(k * h0, beyond);
    if (beyond) break;
    if (std::isnan(static_cast<double>(v))) {
      out.status = QuadStatus::IntegrandNonFinite;
      return out;
    }
    level_sum.add(v);
    k_hi = k;
    max_term = std::max(max_term, std::abs(v));
    // Only count quiet nodes once something non-negligible has been seen: the
    // mass may sit far from x = a.
    quiet = (max_term > 0 && std::abs(v) <= tiny * max_term) ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  int k_lo = 0;
  for (int k = -1, quiet = 0; k * h0 >= Real(detail::kSemiTmin); --k) {
    const Real v = sample(k * h0, beyond);
    if (beyond) break;
    if (std::isnan(static_cast<double>(v))) {
      out.status = QuadStatus::IntegrandNonFinite;
      return out;
    }
    level_sum.add(v);
    k_lo = k;
    max_term = std::max(max_term, std::abs(v));
    quiet = (max_term > 0 && std::abs(v) <= tiny * max_term) ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }

  Real h = h0;
  Real estimate = h * level_sum.value();
  const Real t_lo = (k_lo - 1) * h0;
  const Real t_hi = (k_hi + 1) * h0;

  for (int level = 1; level <= plan.max_level; ++level) {
    h /= 2;
    // New nodes: odd multiples of h strictly inside the window.
    const auto j_lo = static_cast<std::int64_t>(std::ceil(static_cast<double>(t_lo / h)));
    const auto j_hi = static_cast<std::int64_t>(std::floor(static_cast<double>(t_hi / h)));
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
      if ((j & 1) == 0) continue;
      const Real v = sample(static_cast<Real>(j) * h, beyond);
      if (beyond) continue;
      if (std::isnan(static_cast<double>(v))) {
        out.status = QuadStatus::IntegrandNonFinite;
        return out;
      }
      level_sum.add(v);
    }
    const Real next = h * level_sum.value();
    const Real diff = std::abs(next - estimate);
    estimate = next;
    out.value = estimate;
    out.err_estimate = diff;
    const Real noise = std::numeric_limits<Real>::epsilon() * h * level_sum.abs_total();
    // An all-zero sum on a coarse mesh may just have stepped over a narrow peak.
    const bool unseen = level_sum.abs_total() == 0 && level < 4;
    if (!unseen && diff <= std::max(plan.eps_r * std::abs(estimate), noise)) {
      out.status = QuadStatus::Converged;
      return out;
    }
  }
  out.status = QuadStatus::MaxLevelReached;
  return out;
}

// ---------------------------------------------------------------------------
// Oscillatory DE (Fourier sine / cosine integrals)

enum class OscKind { Sine, Cosine };

template <class Real>
struct BasicDEOscPlan {
  Real omega = 1;
  OscKind kind = OscKind::Sine;
  Real eps_r = Real(1e-12);
  Real M = 0;      // level-0 mesh parameter; M * h == pi
  Real h = 0;
  Real alpha = 0;  // level-0 transform constants
  Real beta = Real(0.25);
  int max_level = 6;

  BasicDEOscPlan() = default;

  BasicDEOscPlan(Real omega_, OscKind kind_, Real eps_r_, int max_level_ = 6)
      : omega(omega_), kind(kind_), eps_r(eps_r_), max_level(max_level_) {
    if (!(omega > 0) || !std::isfinite(static_cast<double>(omega))) {
      throw Error(ErrorCode::InvalidFrequency, "oscillation frequency must be positive and finite");
    }
    require_eps_r(eps_r);
    if (max_level < 1 || max_level > 12) {
      throw Error(ErrorCode::InvalidArgument, "intdeo max_level must be in [1, 12]");
    }
    M = initial_mesh(eps_r);
    h = std::numbers::pi_v<Real> / M;
    alpha = alpha_for(M, beta);
  }

  /// Level-0 mesh parameter. The discretisation error of the robust
  /// transform falls roughly like exp(-c M); the level-0 estimate is aimed
  /// just below eps_r so the first refinement can confirm it.
  static Real initial_mesh(Real eps_r) {
    using std::log;
    return Real(kMeshSlope) * -log(eps_r) + Real(kMeshOffset);
  }

  static Real alpha_for(Real M, Real beta) {
    using std::log;
    using std::sqrt;
    return beta / sqrt(Real(1) + M * log(Real(1) + M) / (4 * std::numbers::pi_v<Real>));
  }

  static constexpr double kMeshSlope = 1.0;
  static constexpr double kMeshOffset = 4.0;
};

using DEOscPlan = BasicDEOscPlan<double>;

namespace detail {

// expm1(x) - x without cancellation for small |x|.
template <class Real>
Real expm1_minus_x(Real x) {
  using std::abs;
  if (abs(x) < Real(0.5)) {
    Real term = x * x / 2;
    Real sum = term;
    for (int n = 3; n < 40; ++n) {
      term *= x / n;
      sum += term;
      if (abs(term) <= std::numeric_limits<Real>::epsilon() * abs(sum) / 4) break;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

/// phi(t), phi'(t) and phi(t) - t for the robust oscillatory transform.
template <class Real>
struct OscNode {
  Real phi;
  Real dphi;
  Real excess;  // phi - t
};

template <class Real>
OscNode<Real> osc_node(Real t, Real alpha, Real beta) {
  using std::exp;
  using std::expm1;
  if (t == 0) {
    const Real u1 = 2 + alpha + beta;
    return {1 / u1, (u1 * u1 + alpha - beta) / (2 * u1 * u1), 1 / u1};
  }
  const Real u = 2 * t - alpha * expm1(-t) + beta * expm1(t);
  // expm1(u) - t u'(t), assembled from non-cancelling pieces.
  const Real a_part = alpha * exp(-t) * expm1_minus_x(t) - beta * exp(t) * expm1_minus_x(-t);
  OscNode<Real> n{};
  if (u >= 0) {
    const Real s = exp(-u);
    const Real em = -expm1(-u);  // 1 - e^-u
    const Real se2 = (u > 1) ? (1 - s * (1 + u)) : s * expm1_minus_x(u);
    n.phi = t / em;
    n.dphi = (s * a_part + se2) / (em * em);
    n.excess = t * s / em;
  } else {
    const Real eu = exp(u);
    const Real e1 = expm1(u);  // in (-1, 0)
    n.phi = t * eu / e1;
    n.dphi = eu * (a_part + expm1_minus_x(u)) / (e1 * e1);
    n.excess = t / e1;
  }
  return n;
}

}  // namespace detail

/// int_a^inf f(x) osc(omega x) dx where osc is sin or cos per plan.kind.
/// f must be the smooth, non-oscillatory factor. Late nodes are placed on the
/// zeros of osc(omega x), and the oscillatory factor is evaluated through
/// phi(t) - t so it stays accurate far out.
template <class Real, class F>
BasicQuadResult<Real> intdeo(F&& f, Real a, const BasicDEOscPlan<Real>& plan) {
  using std::abs;
  using std::cos;
  using std::sin;
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real omega = plan.omega;
  const Real psi0 = plan.kind == OscKind::Sine ? Real(0) : -pi / 2;
  const Real tiny = detail::negligible_ratio<Real>();
  constexpr Real t_max = Real(7.0);
  constexpr Real t_min = Real(-9.0);
  constexpr Real kNoiseUlps = Real(16);

  BasicQuadResult<Real> out;
  Real previous = 0;
  bool have_previous = false;

  for (int level = 0; level <= plan.max_level; ++level) {
    const Real M = plan.M * static_cast<Real>(std::int64_t{1} << level);
    const Real h = pi / M;
    const Real alpha = BasicDEOscPlan<Real>::alpha_for(M, plan.beta);
    const Real scale = M / omega;
    // Node k sits at t_k with omega*a + M*t_k = k*pi + psi0.
    const Real base = (psi0 - omega * a) / M;
    const auto k0 = static_cast<std::int64_t>(std::llround(static_cast<double>(-base / h)));

    CompensatedSum<Real> acc;
    Real max_term = 0;
    bool bad = false;

    auto visit = [&](std::int64_t k, bool& stop) -> bool {
      const Real t = base + static_cast<Real>(k) * h;
      const auto node = detail::osc_node(t, alpha, plan.beta);
      const Real dx = scale * node.phi;
      const Real x = a + dx;
      const Real w = scale * h * node.dphi;
      if (!(dx > 0) || x == a || !(w > 0) || !std::isfinite(static_cast<double>(w))) {
        stop = true;
        return false;
      }
      // Near a the excess phi - t is dominated by -t and the tiny phase M*phi
      // would be lost; evaluate the factor directly there.
      const Real osc = (t < 0) ? (plan.kind == OscKind::Sine ? sin(omega * a + M * node.phi)
                                                             : cos(omega * a + M * node.phi))
                               : ((k & 1) ? Real(-1) : Real(1)) * sin(M * node.excess);
      ++out.n_evals;
      const Real v = f(x);
      if (!std::isfinite(static_cast<double>(v))) {
        bad = true;
        stop = true;
        return false;
      }
      const Real term = v * w * osc;
      acc.add(term);
      max_term = std::max(max_term, abs(term));
      return abs(term) <= tiny * max_term;
    };

    int quiet = 0;
    bool stop = false;
    for (std::int64_t k = k0; !stop; ++k) {
      if (base + static_cast<Real>(k) * h > t_max) break;
      quiet = visit(k, stop) ? quiet + 1 : 0;
      if (quiet >= 3) break;
    }
    if (bad) {
      out.status = QuadStatus::IntegrandNonFinite;
      return out;
    }
    quiet = 0;
    stop = false;
    for (std::int64_t k = k0 - 1; !stop; --k) {
      if (base + static_cast<Real>(k) * h < t_min) break;
      quiet = visit(k, stop) ? quiet + 1 : 0;
      if (quiet >= 3) break;
    }
    if (bad) {
      out.status = QuadStatus::IntegrandNonFinite;
      return out;
    }

    const Real value = acc.value();
    out.value = value;
    if (have_previous) {
      const Real diff = abs(value - previous);
      out.err_estimate = diff;
      // Each term carries a few ulps from the integrand and the phase, so two
      // levels cannot agree better than a small multiple of eps * sum|term|.
      const Real noise = kNoiseUlps * std::numeric_limits<Real>::epsilon() * acc.abs_total();
      if (diff <= std::max(plan.eps_r * abs(value), noise)) {
        out.status = QuadStatus::Converged;
        return out;
      }
    }
    previous = value;
    have_previous = true;
  }
  out.status = QuadStatus::MaxLevelReached;
  return out;
}

}  // namespace gdd::quad
