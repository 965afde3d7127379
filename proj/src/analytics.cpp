#include "patchlab/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "patchlab/fitting.hpp"
#include "patchlab/odeint.hpp"
#include "patchlab/rootfind.hpp"

namespace patchlab {

namespace {
constexpr double kLog2 = 0.6931471805599453;
}

CauchyAnalytics::CauchyAnalytics(ScalingParams p)
    : p_(p), bump_(std::make_shared<AngularBump>()) {
  log_c45_ = std::log(std::sqrt(2.0) * bump_->eval(0.25 * M_PI));
}

DoubleLogReal CauchyAnalytics::epsilon(double t) const {
  double e = p_.rho * t;
  if (e > 700.0) throw ContractViolation("epsilon(t): rho*t beyond the double horizon");
  return DoubleLogReal::from_lambda(e);
}

double CauchyAnalytics::solve_level_m(double A, double logc) const {
  // 2m - log(m - logc) = A on the branch m > logc + 1/2
  double lo = logc + 0.5, hi = std::max(A, logc + 2.0) + 2.0;
  auto g = [&](double m) { return 2.0 * m - std::log(m - logc) - A; };
  auto dg = [&](double m) { return 2.0 - 1.0 / (m - logc); };
  if (g(lo) > 0.0)
    throw ContractViolation("solve_level_m: level too shallow, t not large enough");
  auto res = newton_bisect(g, dg, lo, hi, 0.5 * A, 1e-14, 100);
  if (!res.converged) throw NumericFailure("solve_level_m: no convergence");
  return res.x;
}

DoubleLogReal CauchyAnalytics::hat_epsilon(double t) const {
  double E = epsilon(t).neg_log();
  if (!(E > 2.0)) throw ContractViolation("hat_epsilon: need eps(t) < e^-2");
  return DoubleLogReal::from_neg_log(solve_level_m(1.0 + E + kLog2, kLog2));
}

double CauchyAnalytics::hat_epsilon_asymptotic_neg_log(double t) const {
  double E = epsilon(t).neg_log();
  return 0.5 * (E + 1.0 + std::log(E));
}

double CauchyAnalytics::hat_epsilon_equation_residual(double t, double m) const {
  double E = epsilon(t).neg_log();
  return 2.0 * m - std::log(m - kLog2) - (1.0 + E + kLog2);
}

EventTimeT1 CauchyAnalytics::event_time_T1(double t) const {
  if (!(t >= 1.0)) throw ContractViolation("event_time_T1: t >= 1 required");
  double E = epsilon(t).neg_log();
  double R = 1.0 - kLog2 + E;
  auto g = [&](double T) { return 2.0 * std::exp(T) - T - R; };
  auto dg = [&](double T) { return 2.0 * std::exp(T) - 1.0; };
  double T0 = std::log(0.5 * R);
  auto res = newton_bisect(g, dg, T0 - 2.0, T0 + 2.0, T0, 1e-15, 100);
  if (!res.converged) throw NumericFailure("event_time_T1: no convergence");
  double rt = p_.rho * t;
  double asym = rt - kLog2 + std::exp(-rt) * (1.0 - 2.0 * kLog2 + rt);
  return {res.x, asym, res.x - asym};
}

// Middle-sector flow in the deviation variables D = log y - log x and
// P = log y + log x + 2m, time scaled by sigma = m tau. Both are O(1) even
// when m itself is astronomically large.
double CauchyAnalytics::transit_sigma(double t, double target_diff) const {
  double m = hat_epsilon(t).neg_log();
  const AngularBump& bump = *bump_;
  auto rhs = [&](double /*sigma*/, State<2> s) -> State<2> {
    double D = s[0], P = s[1];
    double phi = std::atan(std::exp(D));
    double f = bump.eval(phi), df = bump.deriv(phi);
    double sphi = std::sin(phi), cphi = std::cos(phi);
    double rat = df / f;
    double s_y = sphi * sphi + sphi * cphi * rat;
    double c_x = cphi * cphi - sphi * cphi * rat;
    double twologq_plus_2m = (P - D) + std::log1p(std::exp(2.0 * D)) + 2.0 * std::log(f);
    double dD = -2.0 + (twologq_plus_2m + c_x + s_y) / m;
    double dP = (c_x - s_y) / m;
    return {dD, dP};
  };
  State<2> s0{kLog2, kLog2};
  auto event = [target_diff](double /*sigma*/, const State<2>& s) { return s[0] - target_diff; };
  State<2> s_end;
  double sigma = integrate_to_event(rhs, 0.0, s0, event, 10.0, &s_end, 1e-12, 1e-13);
  return sigma;
}

double CauchyAnalytics::middle_transit(double t) const {
  double m = hat_epsilon(t).neg_log();
  return transit_sigma(t, -kLog2) / m;
}

double CauchyAnalytics::diagonal_transit(double t) const {
  double m = hat_epsilon(t).neg_log();
  return transit_sigma(t, 0.0) / m;
}

SectorTransitBounds CauchyAnalytics::sector_transit_time(double t, double bound_c) const {
  double L = hat_epsilon(t).neg_log();
  if (!(L - bound_c - kLog2 > 0.0))
    throw ContractViolation("sector_transit_time: t too small for the chosen constant");
  double lower = std::log((L + bound_c) / (L + bound_c - kLog2));
  double upper = std::log((L - bound_c) / (L - bound_c - kLog2));
  double estimate = 2.0 * kLog2 * std::exp(-p_.rho * t);
  return {lower, upper, estimate};
}

double CauchyAnalytics::exit_time_T3(double t) const {
  double m = hat_epsilon(t).neg_log();
  double tau_full = std::log(m - kLog2);
  return w2(t) + tau_full;
}

double CauchyAnalytics::exit_time_T3_asymptotic(double t) const {
  return (1.0 + p_.delta) * (1.0 + p_.rho) * t +
         (1.0 + p_.delta - 1.0 / (p_.rho + 1.0)) * kLog2;
}

namespace {

double invert_monotone(const std::function<double(double)>& fwd, double target, double lo,
                       double hi) {
  auto g = [&](double t) { return fwd(t) - target; };
  auto res = bisect(g, lo, hi, 1e-13, 200);
  return res.x;
}

}  // namespace

double CauchyAnalytics::min_tag() const {
  // keep eps(t) < e^-2 and the T1 solver inside its contract
  return std::max(1.0, std::log(2.2) / p_.rho);
}

double CauchyAnalytics::tag_for_w1(double T) const {
  double lo = min_tag();
  if (w1(lo) > T) throw ContractViolation("tag_for_w1: T precedes the valid event range");
  return invert_monotone([this](double t) { return w1(t); }, T, lo, T);
}

double CauchyAnalytics::tag_for_w2(double T) const {
  double lo = min_tag();
  if (w2(lo) > T) throw ContractViolation("tag_for_w2: T precedes the valid event range");
  return invert_monotone([this](double t) { return w2(t); }, T, lo, T);
}

double CauchyAnalytics::tag_for_wdiag(double T) const {
  double lo = min_tag();
  if (wdiag(lo) > T) throw ContractViolation("tag_for_wdiag: T precedes the valid event range");
  return invert_monotone([this](double t) { return wdiag(t); }, T, lo, T);
}

MergeRateValue CauchyAnalytics::f_of_T(double T, MergeRateKind which) const {
  MergeRateValue out;
  switch (which) {
    case MergeRateKind::f1:
      out.tag = tag_for_w1(T);
      out.numeric = hat_epsilon(out.tag);
      break;
    case MergeRateKind::f2:
      out.tag = tag_for_w2(T);
      out.numeric = hat_epsilon(out.tag);
      break;
    case MergeRateKind::f: {
      out.tag = tag_for_wdiag(T);
      double E = epsilon(out.tag).neg_log();
      out.numeric = DoubleLogReal::from_neg_log(solve_level_m(1.0 + E, log_c45_));
      break;
    }
  }
  out.neg_log_asym_shape = std::exp(p_.delta * T) * std::pow(2.0, -1.0 / (p_.rho + 1.0)) -
                           0.5 * p_.delta * (p_.delta - 1.0) * T;
  return out;
}

LogPoint CauchyAnalytics::trajectory_backward(double tau, double w_event,
                                              TrajectorySector sector) const {
  if (!(tau >= 0.0)) throw ContractViolation("trajectory_backward: tau >= 0");
  double emt = std::exp(-tau);
  switch (sector) {
    case TrajectorySector::above: {
      double m1 = f_of_T(w_event, MergeRateKind::f1).numeric.neg_log();
      // exact solution of alpha' = alpha(log beta + 1), beta' = -beta log beta
      // backward from (f1, 2 f1); the printed asymptotic form drops the
      // bounded 2^{1-e^{-tau}} factor in alpha
      double log_x = tau - (2.0 - emt) * m1 + (1.0 - emt) * kLog2;
      double log_y = emt * (kLog2 - m1);
      return {log_x, log_y};
    }
    case TrajectorySector::below: {
      double m2 = f_of_T(w_event, MergeRateKind::f2).numeric.neg_log();
      double log_x = emt * (kLog2 - m2);
      double log_y = tau - (2.0 - emt) * m2 + (1.0 - emt) * kLog2;
      return {log_x, log_y};
    }
    case TrajectorySector::middle: {
      double tag = tag_for_w1(w_event);
      double m = hat_epsilon(tag).neg_log();
      const AngularBump& bump = *bump_;
      auto rhs = [&](double, State<2> s) -> State<2> {
        double D = s[0], P = s[1];
        double phi = std::atan(std::exp(D));
        double f = bump.eval(phi), df = bump.deriv(phi);
        double sphi = std::sin(phi), cphi = std::cos(phi);
        double rat = df / f;
        double s_y = sphi * sphi + sphi * cphi * rat;
        double c_x = cphi * cphi - sphi * cphi * rat;
        double twologq_plus_2m = (P - D) + std::log1p(std::exp(2.0 * D)) + 2.0 * std::log(f);
        return {-2.0 + (twologq_plus_2m + c_x + s_y) / m, (c_x - s_y) / m};
      };
      State<2> s = integrate_rk45(rhs, 0.0, State<2>{kLog2, kLog2}, tau * m, 1e-12, 1e-14);
      double log_x = 0.5 * (s[1] - s[0]) - m;
      double log_y = 0.5 * (s[1] + s[0]) - m;
      return {log_x, log_y};
    }
  }
  throw ContractViolation("trajectory_backward: bad sector");
}

RescaledCurve CauchyAnalytics::rescaled_curve(double T, double varpi, int n_per_branch) const {
  if (!(varpi > 0.0)) throw ContractViolation("rescaled_curve: varpi must be positive");
  RescaledCurve out;
  auto fd = f_of_T(T, MergeRateKind::f);
  out.f = fd.numeric;
  double mf = out.f.neg_log();
  double window = varpi * mf;

  // above branch: backward ages tau >= 0, events at w1 = T + tau; targets
  // geometric in log xhat so every scale of the window carries samples
  {
    auto log_xhat_at = [&](double tau) {
      LogPoint q = trajectory_backward(tau, T + tau, TrajectorySector::above);
      return q.log_x + mf;
    };
    double tau_hi = 1.0;
    int guard = 0;
    while (log_xhat_at(tau_hi) > -window && guard++ < 200) tau_hi *= 1.5;
    if (guard >= 200) out.truncated = true;
    double t0 = 0.05;
    double ratio = std::pow(window / t0, 1.0 / std::max(1, n_per_branch - 1));
    for (int k = n_per_branch - 1; k >= 0; --k) {
      double target = -t0 * std::pow(ratio, k);
      auto res = bisect([&](double tau) { return log_xhat_at(tau) - target; }, 0.0, tau_hi,
                        1e-11, 200);
      LogPoint q = trajectory_backward(res.x, T + res.x, TrajectorySector::above);
      out.samples.push_back({q.log_x + mf, q.log_y + mf, TrajectorySector::above});
    }
  }

  // middle branch: each sample is its own trajectory, integrated from its own
  // first event; the tag drift across the sector shifts levels by order one
  {
    double tau_max = middle_transit(tag_for_w2(T));
    for (int k = 0; k <= 12; ++k) {
      double tau = tau_max * k / 12.0;
      LogPoint q = trajectory_backward(tau, T - tau, TrajectorySector::middle);
      out.samples.push_back({q.log_x + mf, q.log_y + mf, TrajectorySector::middle});
    }
  }

  // below branch: forward ages tau >= 0, events at w2 = T - tau
  {
    double w_min = w2(min_tag()) + 0.1;
    auto log_xhat_at = [&](double tau) {
      LogPoint q = trajectory_backward(tau, T - tau, TrajectorySector::below);
      return q.log_x + mf;
    };
    double tau_cap = T - w_min;
    if (tau_cap <= 0.0) {
      out.truncated = true;
    } else {
      double hi_target = window;
      if (log_xhat_at(tau_cap) < hi_target) {
        hi_target = log_xhat_at(tau_cap) - 1e-9;
        out.truncated = true;
      }
      double start = log_xhat_at(0.0) + 0.05;
      if (hi_target > start) {
        double ratio = std::pow(hi_target / start, 1.0 / std::max(1, n_per_branch - 1));
        for (int k = 0; k < n_per_branch; ++k) {
          double target = start * std::pow(ratio, k);
          auto res = bisect([&](double tau) { return log_xhat_at(tau) - target; }, 0.0, tau_cap,
                            1e-11, 200);
          LogPoint q = trajectory_backward(res.x, T - res.x, TrajectorySector::below);
          out.samples.push_back({q.log_x + mf, q.log_y + mf, TrajectorySector::below});
        }
      }
    }
  }

  std::sort(out.samples.begin(), out.samples.end(),
            [](const RescaledSample& a, const RescaledSample& b) { return a.log_xhat < b.log_xhat; });
  return out;
}

double CauchyAnalytics::fit_rescaled_exponent(const RescaledCurve& curve, double lo_abs_log,
                                              double hi_abs_log) const {
  std::vector<double> xs, ys;
  for (const auto& s : curve.samples) {
    double a = std::fabs(s.log_xhat);
    if (a >= lo_abs_log && a <= hi_abs_log) {
      xs.push_back(s.log_xhat);
      ys.push_back(s.log_yhat);
    }
  }
  if (xs.size() < 4) throw NumericFailure("fit_rescaled_exponent: too few samples in window");
  return -fit_line(xs, ys).slope;
}

double CauchyAnalytics::xi_critical() const {
  double d = p_.delta;
  auto g = [d](double xi) { return 2.0 - 1.0 / xi - std::pow(xi, d); };
  if (d >= 1.0) return 1.0;
  double hi = 2.0;
  while (g(hi) > 0.0) hi *= 2.0;
  auto res = bisect(g, 1.0 + 1e-14, hi, 1e-14, 300);
  return res.x;
}

ScalingExponents CauchyAnalytics::scaling_exponents(double tau) const {
  if (!(tau >= 0.0)) throw ContractViolation("scaling_exponents: tau >= 0");
  double d = p_.delta;
  ScalingExponents out;
  if (tau == 0.0) {
    out.s_minus = p_.omega;
    out.s_plus = p_.omega;
  } else {
    double em = std::expm1(-tau);        // e^-tau - 1
    double emd = std::expm1(-d * tau);   // e^{-d tau} - 1
    double epd = std::expm1(d * tau);    // e^{d tau} - 1
    out.s_minus = -(em - emd) / (-em - emd);
    out.s_plus = -(-em - epd) / (em - epd);
  }
  out.tau_cr = std::log(xi_critical());
  out.d2 = std::exp(-tau * (1.0 + d));
  out.l2 = 2.0 * std::exp(-d * tau) - out.d2;
  return out;
}

double CauchyAnalytics::empirical_log_F(MergeRateKind which, double T_ref) const {
  auto v = f_of_T(T_ref, which);
  return v.neg_log_asym_shape - v.numeric.neg_log();
}

Contour CauchyAnalytics::gamma_one_contour(double T, int n_per_branch, int n_closure) const {
  std::vector<Point2> nodes;
  auto push = [&nodes](double x, double y) {
    if (!nodes.empty() && nodes.back().x == x && nodes.back().y == y) return;
    nodes.push_back({x, y});
  };

  // above branch: from the box entry (y = 1/e) down to the first event
  auto log_y_above = [&](double tau) {
    return trajectory_backward(tau, T + tau, TrajectorySector::above).log_y;
  };
  double tau_hi = 1.0;
  while (log_y_above(tau_hi) < -1.0) tau_hi *= 1.6;
  double tau_top = bisect([&](double tau) { return log_y_above(tau) + 1.0; }, 0.0, tau_hi).x;
  for (int k = 0; k <= n_per_branch; ++k) {
    double tau = tau_top * (1.0 - double(k) / n_per_branch);
    LogPoint q = trajectory_backward(tau, T + tau, TrajectorySector::above);
    push(std::exp(q.log_x), std::exp(q.log_y));
  }

  {
    double tau_max = middle_transit(tag_for_w2(T));
    for (int k = 1; k <= 12; ++k) {
      double tau = tau_max * k / 12.0;
      LogPoint q = trajectory_backward(tau, T - tau, TrajectorySector::middle);
      push(std::exp(q.log_x), std::exp(q.log_y));
    }
  }

  // below branch: forward until x reaches 1/e
  auto log_x_below = [&](double tau) {
    return trajectory_backward(tau, T - tau, TrajectorySector::below).log_x;
  };
  double tag_now = tag_for_w2(T);
  double tau_bot_cap = T - w2(std::max(min_tag(), 1.0)) - 1e-6;
  double tau_bot;
  if (log_x_below(tau_bot_cap) < -1.0) {
    tau_bot = tau_bot_cap;  // truncated window; still a valid patch
  } else {
    tau_bot = bisect([&](double tau) { return log_x_below(tau) + 1.0; }, 0.0, tau_bot_cap).x;
  }
  (void)tag_now;
  for (int k = 1; k <= n_per_branch; ++k) {
    double tau = tau_bot * k / double(n_per_branch);
    LogPoint q = trajectory_backward(tau, T - tau, TrajectorySector::below);
    push(std::exp(q.log_x), std::exp(q.log_y));
  }

  // circular-arc closure through the fixed control point
  Point2 c_end = nodes.back();
  Point2 a_start = nodes.front();
  Point2 ctrl{0.55, 0.55};
  // circumcenter of (c_end, ctrl, a_start)
  double ax = c_end.x, ay = c_end.y, bx = ctrl.x, by = ctrl.y, cx = a_start.x, cy = a_start.y;
  double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::fabs(d) > 1e-14) {
    double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                 (cx * cx + cy * cy) * (ay - by)) /
                d;
    double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                 (cx * cx + cy * cy) * (bx - ax)) /
                d;
    double r = std::hypot(ax - ux, ay - uy);
    double th_c = std::atan2(ay - uy, ax - ux);
    double th_m = std::atan2(by - uy, bx - ux);
    double th_a = std::atan2(cy - uy, cx - ux);
    auto unwrap = [](double from, double to, int dir) {
      while (dir > 0 && to < from) to += 2.0 * M_PI;
      while (dir < 0 && to > from) to -= 2.0 * M_PI;
      return to;
    };
    // pick the sweep direction that passes through the control point
    for (int dir : {+1, -1}) {
      double tm = unwrap(th_c, th_m, dir);
      double ta = unwrap(th_c, th_a, dir);
      if ((dir > 0 && tm < ta) || (dir < 0 && tm > ta)) {
        for (int k = 1; k < n_closure; ++k) {
          double th = th_c + (ta - th_c) * k / double(n_closure);
          push(ux + r * std::cos(th), uy + r * std::sin(th));
        }
        break;
      }
    }
  }
  return Contour(std::move(nodes), true);
}

}  // namespace patchlab
