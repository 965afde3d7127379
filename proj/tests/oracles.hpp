#pragma once

// Test-side oracles, independent of the library's evaluation paths.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "patchlab/geometry.hpp"
#include "patchlab/quadrature.hpp"

namespace oracles {

using patchlab::Point2;

// Chord length of the axis-aligned box [x0,x1]x[y0,y1] along the ray
// z + t(cos a, sin a), t >= 0.
inline double ray_box_chord(Point2 z, double ang, double x0, double x1, double y0, double y1) {
  double dx = std::cos(ang), dy = std::sin(ang);
  double tmin = 0.0, tmax = std::numeric_limits<double>::infinity();
  auto clip = [&](double p, double d, double lo, double hi) {
    if (d == 0.0) return p >= lo && p <= hi;
    double t0 = (lo - p) / d, t1 = (hi - p) / d;
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    return tmin <= tmax;
  };
  if (!clip(z.x, dx, x0, x1)) return 0.0;
  if (!clip(z.y, dy, y0, y1)) return 0.0;
  if (tmax <= 0.0) return 0.0;
  return tmax - std::max(tmin, 0.0);
}

// grad of pi inv-Laplacian chi_Box at z by the polar-chord reduction:
// (1/2) int_E (z-xi)/|z-xi|^2 dxi = -(1/2) int (cos a, sin a) chord(a) da.
inline Point2 potential_grad_box(Point2 z, double x0, double x1, double y0, double y1) {
  auto fx = [&](double a) { return -0.5 * std::cos(a) * ray_box_chord(z, a, x0, x1, y0, y1); };
  auto fy = [&](double a) { return -0.5 * std::sin(a) * ray_box_chord(z, a, x0, x1, y0, y1); };
  // split at the corner directions where the chord has kinks
  std::vector<double> knots = {0.0, 2.0 * M_PI};
  const double cx[4] = {x0, x1, x1, x0};
  const double cy[4] = {y0, y0, y1, y1};
  for (int i = 0; i < 4; ++i) {
    double a = std::atan2(cy[i] - z.y, cx[i] - z.x);
    if (a < 0) a += 2.0 * M_PI;
    knots.push_back(a);
  }
  std::sort(knots.begin(), knots.end());
  double gx = 0.0, gy = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] - knots[i] < 1e-14) continue;
    gx += patchlab::adaptive_simpson(fx, knots[i], knots[i + 1], 1e-12, 40);
    gy += patchlab::adaptive_simpson(fy, knots[i], knots[i + 1], 1e-12, 40);
  }
  return {gx, gy};
}

// Velocity of the unit-square cross pair, via the chord oracle.
inline patchlab::PlaneVector cross_velocity_oracle(Point2 z) {
  Point2 gp = potential_grad_box(z, 0.0, 1.0, 0.0, 1.0);
  Point2 gm = potential_grad_box(z, -1.0, 0.0, -1.0, 0.0);
  Point2 g = gp + gm;
  return {-g.y, g.x};
}

inline double fd_partial(const std::function<double(Point2)>& f, Point2 z, int comp, double h) {
  Point2 zp = z, zm = z;
  (comp == 0 ? zp.x : zp.y) += h;
  (comp == 0 ? zm.x : zm.y) -= h;
  return (f(zp) - f(zm)) / (2.0 * h);
}

inline double fd_divergence(const std::function<patchlab::PlaneVector(Point2)>& u, Point2 z,
                            double h) {
  auto ux = [&](Point2 q) { return u(q).vx; };
  auto uy = [&](Point2 q) { return u(q).vy; };
  return fd_partial(ux, z, 0, h) + fd_partial(uy, z, 1, h);
}

// Plain fixed-step RK4 advection, written here so library integrators are not
// checking themselves.
inline Point2 rk4_advect(const std::function<patchlab::PlaneVector(Point2)>& u, Point2 z,
                         double t_total, int steps) {
  double h = t_total / steps;
  for (int i = 0; i < steps; ++i) {
    auto f = [&](Point2 q) { return u(q); };
    auto k1 = f(z);
    auto k2 = f({z.x + 0.5 * h * k1.vx, z.y + 0.5 * h * k1.vy});
    auto k3 = f({z.x + 0.5 * h * k2.vx, z.y + 0.5 * h * k2.vy});
    auto k4 = f({z.x + h * k3.vx, z.y + h * k3.vy});
    z.x += h / 6.0 * (k1.vx + 2 * k2.vx + 2 * k3.vx + k4.vx);
    z.y += h / 6.0 * (k1.vy + 2 * k2.vy + 2 * k3.vy + k4.vy);
  }
  return z;
}

inline patchlab::Contour regular_polygon(int n, double radius) {
  std::vector<Point2> v;
  v.reserve(n);
  for (int k = 0; k < n; ++k) {
    double a = 2.0 * M_PI * k / n;
    v.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return patchlab::Contour(std::move(v), true);
}

inline patchlab::Contour unit_square_at(double x0, double y0) {
  return patchlab::Contour({{x0, y0}, {x0 + 1, y0}, {x0 + 1, y0 + 1}, {x0, y0 + 1}}, true);
}

inline double hausdorff_one_sided(const patchlab::Contour& a, const patchlab::Contour& b) {
  double worst = 0.0;
  for (const auto& p : a.nodes()) worst = std::max(worst, patchlab::distance_to_point(b, p));
  return worst;
}

}  // namespace oracles
