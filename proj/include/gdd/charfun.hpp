#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "gdd/dequad.hpp"
#include "gdd/params.hpp"

namespace gdd {

struct ModulusPhase {
  double r = 0.0;
  double phi = 0.0;
};

/// Optional facts about the distribution that the inverters can use.
struct CharFunHints {
  std::optional<double> mean;     // of the centred variable (location excluded)
  std::optional<double> x_range;  // width of the region where the density lives
  std::optional<double> decay;    // scale for the non-oscillatory fallback near x = location
};

/// phi(t) = E exp(itX). Stored centred: eval() multiplies by exp(i t location).
/// When a modulus/phase decomposition is present,
/// phi_centred(t) = scale_prefactor * r(t) * exp(i phase(t)).
class CharFun {
 public:
  using Eval = std::function<std::complex<double>(double)>;
  using Decomp = std::function<ModulusPhase(double)>;

  CharFun(Eval centred, std::optional<Decomp> decomposition = std::nullopt, double scale_prefactor = 1.0,
          double location = 0.0, CharFunHints hints = {});

  std::complex<double> eval(double t) const;
  std::complex<double> eval_centred(double t) const { return eval_(t); }

  bool has_modulus_phase() const { return decomp_.has_value(); }
  /// Includes the location term t * location in the phase.
  ModulusPhase modulus_phase(double t) const;
  ModulusPhase modulus_phase_centred(double t) const;

  double scale_prefactor() const { return scale_; }
  double location() const { return location_; }
  const CharFunHints& hints() const { return hints_; }

 private:
  Eval eval_;
  std::optional<Decomp> decomp_;
  double scale_;
  double location_;
  CharFunHints hints_;
};

/// Gamma(alpha, rate beta): (1 - it/beta)^-alpha.
CharFun gamma_cf(double alpha, double beta);

/// CF of the GDD with both the complex-power and the modulus/phase routes.
CharFun gdd_cf(const GDDParams& p);

/// CF of sum_j c_j X_j for independent X_j.
CharFun cf_scaled_product(const std::vector<std::pair<CharFun, double>>& components);

enum class InversionMethod { TrapezoidPlain, DEOscComplex, DEOscRealSplit };

std::string_view to_string(InversionMethod m);

struct InversionConfig {
  InversionMethod method = InversionMethod::DEOscRealSplit;
  double eps_r = 1e-12;
  double trunc_tol = 1e-8;
  int max_nodes = 1 << 20;

  void validate() const;
};

quad::QuadResult invert_pdf(const CharFun& cf, double x, const InversionConfig& cfg);
quad::QuadResult invert_cdf(const CharFun& cf, double x, const InversionConfig& cfg);

}  // namespace gdd
