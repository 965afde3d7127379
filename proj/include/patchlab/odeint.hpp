#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "patchlab/util.hpp"

namespace patchlab {

template <std::size_t N>
using State = std::array<double, N>;

namespace detail {

template <std::size_t N>
inline State<N> axpy(const State<N>& y, double a, const State<N>& d) {
  State<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + a * d[i];
  return r;
}

}  // namespace detail

// One Cash-Karp 4(5) step: returns 5th-order solution and an error estimate.
template <std::size_t N, class F>
void rk45_step(const F& f, double t, const State<N>& y, double h, State<N>& y5, State<N>& err) {
  static constexpr double b21 = 1.0 / 5.0;
  static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  static constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
  static constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                          b54 = 35.0 / 27.0;
  static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                          b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
  static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                          c6 = 512.0 / 1771.0;
  static constexpr double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0, d4 = 13525.0 / 55296.0,
                          d5 = 277.0 / 14336.0, d6 = 1.0 / 4.0;

  State<N> k1 = f(t, y);
  State<N> k2 = f(t + 0.2 * h, detail::axpy(y, h * b21, k1));
  State<N> y3;
  for (std::size_t i = 0; i < N; ++i) y3[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
  State<N> k3 = f(t + 0.3 * h, y3);
  State<N> y4;
  for (std::size_t i = 0; i < N; ++i) y4[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
  State<N> k4 = f(t + 0.6 * h, y4);
  State<N> y5s;
  for (std::size_t i = 0; i < N; ++i)
    y5s[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
  State<N> k5 = f(t + h, y5s);
  State<N> y6;
  for (std::size_t i = 0; i < N; ++i)
    y6[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] + b65 * k5[i]);
  State<N> k6 = f(t + 0.875 * h, y6);

  for (std::size_t i = 0; i < N; ++i) {
    double s5 = c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i];
    double s4 = d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i];
    y5[i] = y[i] + h * s5;
    err[i] = h * (s5 - s4);
  }
}

struct OdeStats {
  int accepted = 0;
  int rejected = 0;
};

// Adaptive 4(5) integration from t0 to t1 (either direction).
template <std::size_t N, class F>
State<N> integrate_rk45(const F& f, double t0, State<N> y, double t1, double rtol = 1e-10,
                        double atol = 1e-14, OdeStats* stats = nullptr, int max_steps = 2000000) {
  double t = t0;
  double dir = (t1 >= t0) ? 1.0 : -1.0;
  double h = dir * std::max(1e-12, 1e-3 * std::fabs(t1 - t0));
  int steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > max_steps) throw NumericFailure("integrate_rk45: step budget exhausted");
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    State<N> y5, err;
    rk45_step(f, t, y, h, y5, err);
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double sc = atol + rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
      norm = std::max(norm, std::fabs(err[i]) / sc);
    }
    if (norm <= 1.0) {
      t += h;
      y = y5;
      if (stats) ++stats->accepted;
      double grow = (norm > 0.0) ? 0.9 * std::pow(norm, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      if (stats) ++stats->rejected;
      h *= std::max(0.1, 0.9 * std::pow(norm, -0.25));
      if (std::fabs(h) < 1e-300) throw NumericFailure("integrate_rk45: step underflow");
    }
  }
  return y;
}

// Integrates forward until event(t, y) crosses zero from its initial sign,
// then bisects the final step down to ttol. Returns the crossing time.
template <std::size_t N, class F, class E>
double integrate_to_event(const F& f, double t0, State<N> y, const E& event, double tmax,
                          State<N>* y_at_event = nullptr, double rtol = 1e-11,
                          double ttol = 1e-12) {
  double t = t0;
  double e0 = event(t, y);
  double h = 1e-3 * std::max(1e-6, std::fabs(tmax - t0));
  int guard = 0;
  while (t < tmax) {
    if (++guard > 2000000) throw NumericFailure("integrate_to_event: step budget exhausted");
    double hstep = std::min(h, tmax - t);
    State<N> y5, err;
    rk45_step(f, t, y, hstep, y5, err);
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double sc = 1e-14 + rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
      norm = std::max(norm, std::fabs(err[i]) / sc);
    }
    if (norm > 1.0) {
      h = hstep * std::max(0.1, 0.9 * std::pow(norm, -0.25));
      continue;
    }
    double e1 = event(t + hstep, y5);
    if (e0 * e1 <= 0.0 && e1 != e0) {
      // bisect inside [t, t+hstep]
      double lo = 0.0, hi = hstep;
      State<N> ylo = y;
      for (int it = 0; it < 200 && (hi - lo) > ttol * std::max(1.0, std::fabs(t)); ++it) {
        double mid = 0.5 * (lo + hi);
        State<N> ym, errm;
        rk45_step(f, t, y, mid, ym, errm);
        double em = event(t + mid, ym);
        if (e0 * em <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          ylo = ym;
        }
      }
      State<N> yf, errf;
      rk45_step(f, t, y, hi, yf, errf);
      if (y_at_event) *y_at_event = yf;
      return t + hi;
    }
    t += hstep;
    y = y5;
    e0 = e1;
    double grow = (norm > 0.0) ? 0.9 * std::pow(norm, -0.2) : 5.0;
    h = hstep * std::clamp(grow, 0.2, 5.0);
  }
  throw NumericFailure("integrate_to_event: no crossing before tmax");
}

}  // namespace patchlab
