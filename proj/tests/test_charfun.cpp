#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gdd/charfun.hpp"
#include "gdd/error.hpp"
#include "gdd/gdd.hpp"

using namespace gdd;
using cplx = std::complex<double>;

namespace {

const GDDParams kWorked(0.5, 1.0, 8.5, 93.0);

// Convolution-integral density for x > 0 in long double through Boost's exp_sinh.
double conv_oracle(const GDDParams& p, double x) {
  using LD = long double;
  const LD a1 = p.alpha1(), b1 = p.beta1(), a2 = p.alpha2(), b2 = p.beta2(), z = x;
  const LD lc = a1 * std::log(b1) + a2 * std::log(b2) - boost::math::lgamma(a1) - boost::math::lgamma(a2);
  boost::math::quadrature::exp_sinh<LD> q;
  const LD v = q.integrate([&](LD u) {
    if (u == 0) return LD(0);
    return std::exp(lc + (a1 - 1) * std::log(u + z) + (a2 - 1) * std::log(u) - (b1 + b2) * u - b1 * z);
  });
  return static_cast<double>(v);
}

InversionConfig cfg(InversionMethod m, double eps = 1e-12) {
  InversionConfig c;
  c.method = m;
  c.eps_r = eps;
  if (m == InversionMethod::TrapezoidPlain) c.trunc_tol = 1e-4;
  return c;
}

}  // namespace

TEST_SUITE("charfun") {
  TEST_CASE("gdd_cf basics") {
    const CharFun cf = gdd_cf(kWorked);
    CHECK(std::abs(cf.eval(0.0) - cplx(1.0)) < 1e-15);
    const CharFun lap = gdd_cf(GDDParams(1, 1, 1, 1));
    for (double t : {0.1, 1.0, 3.0, 10.0}) {
      const cplx v = lap.eval(t);
      CHECK(std::abs(v.real() - 1 / (1 + t * t)) < 1e-15);
      CHECK(std::abs(v.imag()) < 1e-15);
    }
  }

  TEST_CASE("modulus/phase route equals the complex power route") {
    for (const auto& p : {kWorked, GDDParams(0.5, 1.0, 8.5, 93.0, 0.7), GDDParams(3.0, 2.0, 1.5, 0.5)}) {
      const CharFun cf = gdd_cf(p);
      REQUIRE(cf.has_modulus_phase());
      for (double t : {0.1, 1.0, 10.0, 100.0, 1e4}) {
        const ModulusPhase mp = cf.modulus_phase(t);
        const cplx direct = cf.eval(t);
        CHECK(std::abs(cf.scale_prefactor() * std::polar(mp.r, mp.phi) - direct) <= 1e-13 * std::max(1.0, std::abs(direct)));
      }
    }
  }

  TEST_CASE("Hermitian symmetry") {
    const CharFun cfs[] = {gdd_cf(kWorked), gamma_cf(2.5, 0.3), gdd_cf(GDDParams(1, 2, 3, 4, -1.5)),
                           cf_scaled_product({{gamma_cf(1.0, 1.0), 2.0}, {gamma_cf(0.5, 3.0), -0.5}})};
    for (const auto& cf : cfs) {
      for (double t : {0.1, 1.0, 10.0, 100.0}) CHECK(std::abs(cf.eval(-t) - std::conj(cf.eval(t))) < 1e-15);
    }
  }

  TEST_CASE("scaled products") {
    const CharFun prod = cf_scaled_product({{gamma_cf(0.5, 1.0), 1.0}, {gamma_cf(8.5, 93.0), -1.0}});
    const CharFun ref = gdd_cf(kWorked);
    for (double t : {0.3, 1.0, 7.0, 150.0}) CHECK(std::abs(prod.eval(t) - ref.eval(t)) < 1e-14);

    const CharFun g = gamma_cf(2.0, 3.0);
    const CharFun single = cf_scaled_product({{g, 1.0}});
    CHECK(std::abs(single.eval(1.3) - g.eval(1.3)) < 1e-16);

    const CharFun a = gamma_cf(1.0, 1.0), b = gamma_cf(2.0, 0.5), c = gamma_cf(0.5, 4.0);
    const CharFun mix = cf_scaled_product({{a, 1.0}, {b, -2.0}, {c, 0.5}});
    const double t = 2.0;
    CHECK(std::abs(std::abs(mix.eval(t)) - std::abs(a.eval(t)) * std::abs(b.eval(-2 * t)) * std::abs(c.eval(0.5 * t))) < 1e-15);
  }

  TEST_CASE("Laplace inversion") {
    const CharFun lap(
        [](double t) { return cplx(1 / (1 + t * t), 0.0); }, std::nullopt, 1.0, 0.0, CharFunHints{0.0, 12 * std::sqrt(2.0), 1.0});
    for (auto m : {InversionMethod::DEOscComplex, InversionMethod::TrapezoidPlain}) {
      // The trapezoid cuts 1/(1+t^2) at T = 100, which leaves 1/(pi T) of the integral.
      CHECK(std::abs(invert_pdf(lap, 0.0, cfg(m)).value - 0.5) < (m == InversionMethod::TrapezoidPlain ? 4e-3 : 1e-12));
      CHECK(std::abs(invert_cdf(lap, 0.0, cfg(m)).value - 0.5) < 1e-12);
    }
    CHECK(std::abs(invert_pdf(lap, 1.0, cfg(InversionMethod::DEOscComplex)).value - 0.5 * std::exp(-1.0)) < 1e-12);
    CHECK_THROWS_AS(invert_pdf(lap, 1.0, cfg(InversionMethod::DEOscRealSplit)), Error);
  }

  TEST_CASE("worked-example params against the convolution oracle") {
    const CharFun cf = gdd_cf(kWorked);
    for (double x : {0.41, 1.0, 3.9}) {
      const double ref = conv_oracle(kWorked, x);
      for (auto m : {InversionMethod::DEOscComplex, InversionMethod::DEOscRealSplit}) {
        const double v = invert_pdf(cf, x, cfg(m)).value;
        CHECK_MESSAGE(std::abs(v - ref) <= 1e-12 * std::max(ref, 1e-3), "x=" << x);
      }
    }
    CHECK(invert_pdf(cf, 3.9, cfg(InversionMethod::DEOscRealSplit)).value > 0);
    CHECK(std::abs(invert_cdf(cf, 20.0, cfg(InversionMethod::DEOscRealSplit)).value - 1.0) < 1e-9);
    CHECK(std::abs(invert_cdf(cf, 0.0, cfg(InversionMethod::DEOscRealSplit)).value - cdf_at_zero(kWorked)) < 1e-12);
  }

  TEST_CASE("grid properties: nonnegativity, monotone cdf, method agreement") {
    const CharFun cf = gdd_cf(kWorked);
    double prev_cdf = -1.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = -3.0 + 7.0 * i / 100.0;
      const double split = invert_pdf(cf, x, cfg(InversionMethod::DEOscRealSplit)).value;
      const double complex_route = invert_pdf(cf, x, cfg(InversionMethod::DEOscComplex)).value;
      const double trap = invert_pdf(cf, x, cfg(InversionMethod::TrapezoidPlain)).value;
      CHECK(split >= -5e-12);
      CHECK(std::abs(split - complex_route) <= 10 * 1e-12 * std::max(1.0, split));
      CHECK(std::abs(split - trap) <= 2e-3);
      const double F = invert_cdf(cf, x, cfg(InversionMethod::DEOscRealSplit)).value;
      CHECK(F >= prev_cdf - 5e-12);
      prev_cdf = F;
    }
  }

  TEST_CASE("location handling") {
    const CharFun shifted = gdd_cf(GDDParams(0.5, 1.0, 8.5, 93.0, 1.25));
    const CharFun base = gdd_cf(kWorked);
    const double t = 3.0;
    CHECK(std::abs(shifted.eval(t) - base.eval(t) * std::polar(1.0, 1.25 * t)) < 1e-15);
    const auto c = cfg(InversionMethod::DEOscRealSplit);
    CHECK(std::abs(invert_pdf(shifted, 1.75, c).value - invert_pdf(base, 0.5, c).value) < 1e-13);
    CHECK(std::abs(invert_pdf(shifted, 1.25, c).value - invert_pdf(base, 0.0, c).value) < 1e-13);
  }

  TEST_CASE("config validation") {
    InversionConfig c;
    c.eps_r = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = InversionConfig{};
    c.trunc_tol = 2.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = InversionConfig{};
    c.max_nodes = 0;
    CHECK_THROWS_AS(c.validate(), Error);
  }
}
