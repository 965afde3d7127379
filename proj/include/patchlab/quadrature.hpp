#pragma once

#include <cmath>
#include <functional>

#include "patchlab/util.hpp"

namespace patchlab {

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double fa, double m,
                      double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                                   double b, double fb, double m, double fm, double whole,
                                   double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int max_depth = 50) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// tanh-sinh rule on (a,b); tolerates integrable endpoint singularities, which
// is what the log kernels here produce at panel boundaries.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_level = 12) {
  double c = 0.5 * (a + b), r = 0.5 * (b - a);
  constexpr double tmax = 6.1;
  auto eval = [&](double u) -> double {
    double s = std::sinh(u);
    double x = std::tanh(0.5 * M_PI * s);
    double w = 0.5 * M_PI * std::cosh(u) / sq(std::cosh(0.5 * M_PI * s));
    double xx = c + r * x;
    if (xx <= a || xx >= b) return 0.0;
    double fx = f(xx);
    if (!std::isfinite(fx)) return 0.0;
    return fx * w;
  };
  double h = 1.0;
  double sum = eval(0.0);
  for (double u = h; u < tmax; u += h) sum += eval(u) + eval(-u);
  double prev = sum * h * r;
  for (int lvl = 1; lvl <= max_level; ++lvl) {
    h *= 0.5;
    double add = 0.0;
    for (double u = h; u < tmax; u += 2.0 * h) add += eval(u) + eval(-u);
    sum += add;
    double cur = sum * h * r;
    if (lvl >= 3 && std::fabs(cur - prev) <= tol * std::max(1.0, std::fabs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

// 7-point degree-5 rule on a triangle, then adaptive quadrisection controlled
// by refine(tri) (forced splits, e.g. near an excluded-disk boundary) and by
// the coarse/fine discrepancy.
struct Tri {
  double ax, ay, bx, by, cx, cy;
  double area() const { return 0.5 * ((bx - ax) * (cy - ay) - (cx - ax) * (by - ay)); }
};

inline double tri_rule7(const std::function<double(double, double)>& f, const Tri& t) {
  static constexpr double w0 = 0.225;
  static constexpr double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
  static constexpr double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
  const double pts[7][3] = {
      {1.0 / 3.0, 1.0 / 3.0, w0}, {a1, b1, w1}, {b1, a1, w1}, {b1, b1, w1},
      {a2, b2, w2},               {b2, a2, w2}, {b2, b2, w2},
  };
  double s = 0.0;
  for (const auto& p : pts) {
    double l1 = p[0], l2 = p[1], l3 = 1.0 - l1 - l2;
    double x = l1 * t.ax + l2 * t.bx + l3 * t.cx;
    double y = l1 * t.ay + l2 * t.by + l3 * t.cy;
    s += p[2] * f(x, y);
  }
  return s * std::fabs(t.area());
}

// classify(tri): -1 stop refining here, +1 force a split, 0 tolerance-driven.
inline double tri_adaptive(const std::function<double(double, double)>& f, const Tri& t,
                           const std::function<int(const Tri&)>& classify, double tol,
                           int depth) {
  double coarse = tri_rule7(f, t);
  double mabx = 0.5 * (t.ax + t.bx), maby = 0.5 * (t.ay + t.by);
  double mbcx = 0.5 * (t.bx + t.cx), mbcy = 0.5 * (t.by + t.cy);
  double mcax = 0.5 * (t.cx + t.ax), mcay = 0.5 * (t.cy + t.ay);
  Tri kids[4] = {
      {t.ax, t.ay, mabx, maby, mcax, mcay},
      {mabx, maby, t.bx, t.by, mbcx, mbcy},
      {mcax, mcay, mbcx, mbcy, t.cx, t.cy},
      {mabx, maby, mbcx, mbcy, mcax, mcay},
  };
  double fine = 0.0;
  for (const auto& k : kids) fine += tri_rule7(f, k);
  int mode = classify ? classify(t) : 0;
  if (depth <= 0 || mode < 0) return fine;
  if (mode == 0 && std::fabs(fine - coarse) <= tol) return fine;
  double s = 0.0;
  for (const auto& k : kids) s += tri_adaptive(f, k, classify, 0.5 * tol, depth - 1);
  return s;
}

}  // namespace patchlab
