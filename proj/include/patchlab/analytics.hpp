#pragma once

#include <memory>
#include <vector>

#include "patchlab/dlog.hpp"
#include "patchlab/fields.hpp"

namespace patchlab {

// The triple governing every asymptotic rate: delta and omega are derived
// from rho, never set independently.
struct ScalingParams {
  double rho;
  double delta;
  double omega;

  static ScalingParams from_rho(double rho) {
    if (!(rho > 0.0)) throw ContractViolation("ScalingParams: rho must be positive");
    double delta = rho / (1.0 + rho);
    return {rho, delta, (1.0 - delta) / (1.0 + delta)};
  }
};

enum class TrajectorySector { above, middle, below };

enum class MergeRateKind { f1, f2, f };

struct EventTimeT1 {
  double solved;
  double asymptotic;
  double difference;
};

struct SectorTransitBounds {
  double lower;
  double upper;
  double estimate;  // (2 log 2) e^{-rho t}
};

struct MergeRateValue {
  DoubleLogReal numeric;       // event-route value (tag solved so the event lands at T)
  double tag;                  // the trajectory tag t behind the event
  double neg_log_asym_shape;   // e^{delta T} 2^{-1/(rho+1)} - delta(delta-1)T/2, F excluded
};

struct LogPoint {
  double log_x;
  double log_y;
};

struct ScalingExponents {
  double s_minus;
  double s_plus;
  double tau_cr;
  double d2;
  double l2;
};

struct RescaledSample {
  double log_xhat;
  double log_yhat;
  TrajectorySector sector;
};

struct RescaledCurve {
  std::vector<RescaledSample> samples;  // ordered by increasing log_xhat
  DoubleLogReal f;                      // diagonal rescaling value f(T)
  bool truncated = false;               // window clipped to the valid domain
};

// Trajectory analytics for the Cauchy data z(0,t) = (eps(t), 1/e),
// eps(t) = exp(-e^{rho t}). All internal arithmetic runs on m = -log(value).
class CauchyAnalytics {
 public:
  explicit CauchyAnalytics(ScalingParams p);

  const ScalingParams& params() const { return p_; }
  const AngularBump& bump() const { return *bump_; }

  // eps(t) itself, exact in lambda-space.
  DoubleLogReal epsilon(double t) const;

  // Level-set crossing scale: solves 2 e^2 log(2 e) = -eps(t)/e.
  DoubleLogReal hat_epsilon(double t) const;
  double hat_epsilon_asymptotic_neg_log(double t) const;  // sqrt(eps/(e log eps^-1)) route
  double hat_epsilon_equation_residual(double t, double m) const;

  // First event: trajectory crosses y = 2x. Root-solved against the exact
  // identity 2 e^{T1} - T1 = 1 - log 2 + e^{rho t}.
  EventTimeT1 event_time_T1(double t) const;

  // Middle sector transit T2 - T1 by log-coordinate integration, plus the
  // closed-form bracketing bounds. bound_c is the unquantified constant of
  // the comparison estimate; see the ledger for its calibration.
  double middle_transit(double t) const;
  double diagonal_transit(double t) const;  // time from y=2x to y=x
  SectorTransitBounds sector_transit_time(double t, double bound_c = 8.0) const;

  double event_T2(double t) const { return event_time_T1(t).solved + middle_transit(t); }

  // Exit event: crossing of x = 1/e.
  double exit_time_T3(double t) const;
  double exit_time_T3_asymptotic(double t) const;

  // Actual times of the three events for the tag t.
  double w1(double t) const { return t + event_time_T1(t).solved; }
  double w2(double t) const { return t + event_T2(t); }
  double wdiag(double t) const { return t + event_time_T1(t).solved + diagonal_transit(t); }

  // Inverse maps: the tag whose event lands at actual time T.
  double tag_for_w1(double T) const;
  double tag_for_w2(double T) const;
  double tag_for_wdiag(double T) const;

  // Merging-rate functions.
  MergeRateValue f_of_T(double T, MergeRateKind which) const;

  // Backward/forward closed forms around the events, in log coordinates.
  LogPoint trajectory_backward(double tau, double w_event, TrajectorySector sector) const;

  // Full rescaled curve at time T in the window xhat in [f^varpi, f^-varpi].
  RescaledCurve rescaled_curve(double T, double varpi, int n_per_branch = 48) const;

  // Power-law exponent of the rescaled curve over |log xhat| <= window_cap.
  double fit_rescaled_exponent(const RescaledCurve& curve, double lo_abs_log = 0.8,
                               double hi_abs_log = 7.0) const;

  ScalingExponents scaling_exponents(double tau) const;
  double xi_critical() const;  // solves 2 - 1/xi - xi^delta = 0, xi > 1

  // Empirical constant F of the asymptotic form, reported not hard-coded.
  double empirical_log_F(MergeRateKind which, double T_ref) const;

  // Physical-coordinate polyline of the curve at time T inside the 1/e box,
  // closed into a simply connected patch by a fixed circular arc through
  // (0.55, 0.55). Valid while the entry height eps(tag) is representable.
  Contour gamma_one_contour(double T, int n_per_branch = 40, int n_closure = 32) const;

 private:
  double solve_level_m(double A, double logc) const;
  double transit_sigma(double t, double target_diff) const;
  double min_tag() const;

  ScalingParams p_;
  std::shared_ptr<const AngularBump> bump_;
  double log_c45_;  // log(sqrt(2) Phi(pi/4)); diagonal level-set constant
};

}  // namespace patchlab
