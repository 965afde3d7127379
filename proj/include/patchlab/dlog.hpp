#pragma once

#include <cmath>
#include <limits>

#include "patchlab/util.hpp"

namespace patchlab {

// A positive real v stored as lambda = log(-log v), i.e. v = exp(-exp(lambda)).
// Built for quantities like exp(-e^{rho t}) that underflow binary64 long before
// their asymptotics are done. Multiplication, powers and logs stay in
// lambda-space; the value itself is only materialized above exp(-700).
class DoubleLogReal {
 public:
  DoubleLogReal() : lam_(0.0), zero_(false) {}

  static DoubleLogReal from_lambda(double lam) {
    DoubleLogReal r;
    r.lam_ = lam;
    return r;
  }

  // v must lie in (0,1); v == 0 maps to the degenerate zero element.
  static DoubleLogReal from_value(double v) {
    if (v < 0.0 || v >= 1.0) throw ContractViolation("DoubleLogReal: value must be in [0,1)");
    DoubleLogReal r;
    if (v == 0.0) {
      r.zero_ = true;
      r.lam_ = std::numeric_limits<double>::infinity();
      return r;
    }
    r.lam_ = std::log(-std::log(v));
    return r;
  }

  // v = exp(-m) with m > 0.
  static DoubleLogReal from_neg_log(double m) {
    if (!(m > 0.0)) throw ContractViolation("DoubleLogReal: -log v must be positive");
    return from_lambda(std::log(m));
  }

  static DoubleLogReal zero() {
    DoubleLogReal r;
    r.zero_ = true;
    r.lam_ = std::numeric_limits<double>::infinity();
    return r;
  }

  bool is_zero() const { return zero_; }
  double lambda() const { return lam_; }

  // m = -log v = e^lambda. Overflows to +inf for lambda > ~709.7.
  double neg_log() const { return zero_ ? std::numeric_limits<double>::infinity() : std::exp(lam_); }

  // log v = -e^lambda.
  double log_value() const { return -neg_log(); }

  // Materialized value; refused once it would sit below exp(-700).
  double value() const {
    if (zero_) return 0.0;
    double m = neg_log();
    if (m > 700.0)
      throw NumericFailure("DoubleLogReal: value below exp(-700), keep it in lambda-space");
    return std::exp(-m);
  }

  bool representable() const { return !zero_ && neg_log() <= 700.0; }

  // a*b: m = m_a + m_b done as logaddexp so giant lambdas never overflow.
  DoubleLogReal mul(const DoubleLogReal& b) const {
    if (zero_ || b.zero_) return zero();
    double hi = std::max(lam_, b.lam_), lo = std::min(lam_, b.lam_);
    return from_lambda(hi + std::log1p(std::exp(lo - hi)));
  }

  // a^p for p > 0: m -> p*m.
  DoubleLogReal pow(double p) const {
    if (!(p > 0.0)) throw ContractViolation("DoubleLogReal: power must be positive");
    if (zero_) return zero();
    return from_lambda(lam_ + std::log(p));
  }

  // c*a for c in (0, e^{m_a}) i.e. result still below 1: m -> m - log c.
  DoubleLogReal scale(double c) const {
    if (!(c > 0.0)) throw ContractViolation("DoubleLogReal: scale must be positive");
    if (zero_) return zero();
    double lc = std::log(c);
    // m' = m - lc computed as lam + log1p(-lc * e^{-lam})
    double corr = -lc * std::exp(-lam_);
    if (corr <= -1.0) throw NumericFailure("DoubleLogReal: scaled value not below 1");
    return from_lambda(lam_ + std::log1p(corr));
  }

  // log(a/b) = m_b - m_a as a plain double.
  double log_ratio(const DoubleLogReal& b) const { return b.neg_log() - neg_log(); }

  // Ordering on values: larger m means smaller value.
  bool operator<(const DoubleLogReal& b) const {
    if (zero_) return !b.zero_;
    if (b.zero_) return false;
    return lam_ > b.lam_;
  }
  bool operator>(const DoubleLogReal& b) const { return b < *this; }

 private:
  double lam_;
  bool zero_;
};

}  // namespace patchlab
