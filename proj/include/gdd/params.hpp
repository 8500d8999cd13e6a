#pragma once

namespace gdd {

/// X = X1 - X2 + theta with X1 ~ Gamma(alpha1, rate beta1), X2 ~ Gamma(alpha2, rate beta2).
class GDDParams {
 public:
  GDDParams(double alpha1, double beta1, double alpha2, double beta2, double theta = 0.0);

  double alpha1() const { return a1_; }
  double beta1() const { return b1_; }
  double alpha2() const { return a2_; }
  double beta2() const { return b2_; }
  double theta() const { return theta_; }
  double alpha() const { return a1_ + a2_; }
  double beta() const { return b1_ + b2_; }

  bool operator==(const GDDParams&) const = default;

 private:
  double a1_, b1_, a2_, b2_, theta_;
};

/// Swap the two gamma components and negate theta: the law of -X.
GDDParams reflect(const GDDParams& p);

}  // namespace gdd
