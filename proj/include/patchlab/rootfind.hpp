#pragma once

#include <cmath>
#include <functional>

#include "patchlab/util.hpp"

namespace patchlab {

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Safeguarded Newton: iterates inside [lo, hi], falls back to bisection when a
// Newton step leaves the bracket or stalls. f(lo) and f(hi) must straddle zero.
inline RootResult newton_bisect(const std::function<double(double)>& f,
                                const std::function<double(double)>& df, double lo, double hi,
                                double x0, double xtol = 1e-12, int max_iter = 100) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0, true};
  if (fhi == 0.0) return {hi, 0.0, 0, true};
  if (flo * fhi > 0.0) throw NumericFailure("newton_bisect: no sign change on bracket");

  double x = std::clamp(x0, lo, hi);
  RootResult res;
  for (int it = 0; it < max_iter; ++it) {
    double fx = f(x);
    res.iterations = it + 1;
    res.residual = fx;
    if (fx == 0.0) {
      res.x = x;
      res.converged = true;
      return res;
    }
    if (fx * flo < 0.0) {
      hi = x;
    } else {
      lo = x;
      flo = fx;
    }
    double dfx = df(x);
    double next;
    if (dfx != 0.0 && std::isfinite(dfx)) {
      next = x - fx / dfx;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    } else {
      next = 0.5 * (lo + hi);
    }
    double step = std::fabs(next - x);
    x = next;
    if (step <= xtol * std::max(1.0, std::fabs(x))) {
      res.x = x;
      res.residual = f(x);
      res.converged = true;
      return res;
    }
  }
  res.x = x;
  res.converged = false;
  return res;
}

// Bisection-only variant for badly behaved derivatives.
inline RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                         double xtol = 1e-13, int max_iter = 200) {
  double flo = f(lo);
  if (flo == 0.0) return {lo, 0.0, 0, true};
  if (f(hi) == 0.0) return {hi, 0.0, 0, true};
  RootResult res;
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    res.iterations = it + 1;
    if (fm == 0.0 || (hi - lo) <= xtol * std::max(1.0, std::fabs(mid))) {
      res.x = mid;
      res.residual = fm;
      res.converged = true;
      return res;
    }
    if (fm * flo < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  res.x = 0.5 * (lo + hi);
  res.residual = f(res.x);
  res.converged = true;
  return res;
}

// Expands [lo, hi] geometrically around x0 until f changes sign.
inline void expand_bracket(const std::function<double(double)>& f, double x0, double& lo,
                           double& hi, double step0 = 1.0, int max_doublings = 200) {
  double step = step0;
  lo = x0 - step;
  hi = x0 + step;
  for (int k = 0; k < max_doublings; ++k) {
    if (f(lo) * f(hi) <= 0.0) return;
    step *= 2.0;
    lo = x0 - step;
    hi = x0 + step;
  }
  throw NumericFailure("expand_bracket: no sign change found");
}

}  // namespace patchlab
