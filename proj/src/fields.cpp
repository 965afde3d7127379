#include "patchlab/fields.hpp"

#include <algorithm>
#include <cmath>

#include "patchlab/quadrature.hpp"

namespace patchlab {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

// Quintic Hermite basis on [0,1].
double h00(double u) { return 1.0 + u * u * u * (-10.0 + u * (15.0 - 6.0 * u)); }
double h10(double u) { return u + u * u * u * (-6.0 + u * (8.0 - 3.0 * u)); }
double h20(double u) { return u * u * (0.5 + u * (-1.5 + u * (1.5 - 0.5 * u))); }
double h01(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double h11(double u) { return u * u * u * (-4.0 + u * (7.0 - 3.0 * u)); }
double h21(double u) { return u * u * u * (0.5 + u * (-1.0 + 0.5 * u)); }

double dh00(double u) { return u * u * (-30.0 + u * (60.0 - 30.0 * u)); }
double dh10(double u) { return 1.0 + u * u * (-18.0 + u * (32.0 - 15.0 * u)); }
double dh20(double u) { return u * (1.0 + u * (-4.5 + u * (6.0 - 2.5 * u))); }
double dh01(double u) { return u * u * (30.0 + u * (-60.0 + 30.0 * u)); }
double dh11(double u) { return u * u * (-12.0 + u * (28.0 - 15.0 * u)); }
double dh21(double u) { return u * u * (1.5 + u * (-4.0 + 2.5 * u)); }

}  // namespace

AngularBump::AngularBump() : phi0_(std::atan(0.5)) {
  q0_ = eval(0.25 * M_PI);
  for (double phi = phi0_; phi <= kHalfPi - phi0_; phi += 1e-3) q0_ = std::min(q0_, eval(phi));
}

double AngularBump::blend(double u, int order) const {
  double a = phi0_, b = kHalfPi - phi0_;
  double h = b - a;
  double fa = std::cos(a), dfa = -std::sin(a), ddfa = -std::cos(a);
  double fb = std::sin(b), dfb = std::cos(b), ddfb = -std::sin(b);
  if (order == 0) {
    return fa * h00(u) + h * dfa * h10(u) + h * h * ddfa * h20(u) + fb * h01(u) +
           h * dfb * h11(u) + h * h * ddfb * h21(u);
  }
  return (fa * dh00(u) + h * dfa * dh10(u) + h * h * ddfa * dh20(u) + fb * dh01(u) +
          h * dfb * dh11(u) + h * h * ddfb * dh21(u)) /
         h;
}

double AngularBump::eval(double phi) const {
  double r = std::fmod(phi, kHalfPi);
  if (r < 0.0) r += kHalfPi;
  if (r < phi0_) return std::cos(r);
  if (r > kHalfPi - phi0_) return std::sin(r);
  return blend((r - phi0_) / (kHalfPi - 2.0 * phi0_), 0);
}

double AngularBump::deriv(double phi) const {
  double r = std::fmod(phi, kHalfPi);
  if (r < 0.0) r += kHalfPi;
  if (r < phi0_) return -std::sin(r);
  if (r > kHalfPi - phi0_) return std::cos(r);
  return blend((r - phi0_) / (kHalfPi - 2.0 * phi0_), 1);
}

double angular_q(const AngularBump& bump, Point2 z) {
  double ax = std::fabs(z.x), ay = std::fabs(z.y);
  if (ay <= 0.5 * ax) return ax;
  if (ax <= 0.5 * ay) return ay;
  double phi = std::atan2(ay, ax);
  return z.norm() * bump.eval(phi);
}

double lambda_s(const AngularBump& bump, Point2 z) {
  if (z.x == 0.0 && z.y == 0.0) throw SingularEvaluation("lambda_s: z = 0");
  double q = angular_q(bump, z);
  if (q == 0.0) return 0.0;  // on an axis the x*y prefactor vanishes first
  return z.x * z.y * std::log(q);
}

PlaneVector grad_perp_lambda_s(const AngularBump& bump, Point2 z) {
  if (z.x == 0.0 && z.y == 0.0) throw SingularEvaluation("grad_perp_lambda_s: z = 0");
  double ax = std::fabs(z.x), ay = std::fabs(z.y);
  if (ay <= 0.5 * ax) {
    double lg = std::log(ax);
    return {-z.x * lg, z.y * (lg + 1.0)};
  }
  if (ax <= 0.5 * ay) {
    double lg = std::log(ay);
    return {-z.x * (lg + 1.0), z.y * lg};
  }
  // blend sector: Lambda = x y (log|z| + log Phi(phi)), phi reduced to the
  // first quadrant; odd symmetry keeps the same formula valid in all quadrants
  double phi = std::atan2(ay, ax);
  double r2 = z.norm2();
  double f = bump.eval(phi), df = bump.deriv(phi);
  double lg = 0.5 * std::log(r2) + std::log(f);
  double rat = df / f;
  // with s = sign(x) sign(y): d/dx log Phi = -rat * y_sgn-corrected / r2 ...
  // using reduced-angle derivative: dphi/dx = -|y|sx / r2 * sy ... collapse via
  // u = |x|, v = |y|: Lambda = (sx sy) u v (log r + log Phi(atan2(v,u)))
  double sx = (z.x < 0.0) ? -1.0 : 1.0;
  double sy = (z.y < 0.0) ? -1.0 : 1.0;
  double u = ax, v = ay;
  double dLdu = v * lg + u * v * (u / r2 - rat * v / r2);
  double dLdv = u * lg + u * v * (v / r2 + rat * u / r2);
  // chain rule back: dL/dx = sy * dLdu, dL/dy = sx * dLdv (since sx*sx = 1)
  double dLdx = sy * dLdu;
  double dLdy = sx * dLdv;
  return {-dLdy, dLdx};
}

namespace {

// Antiderivative block for the unit-square potential: g(u,v) with
// d/du [F] = g/2 where F is the double antiderivative of log|.|.
double corner_g(double u, double v) {
  double r2 = u * u + v * v;
  double t = 0.0;
  if (v != 0.0 && r2 > 0.0) t += v * std::log(r2);
  t -= 2.0 * v;
  if (u != 0.0) t += 2.0 * u * std::atan(v / u);
  return t;
}

bool at_corner(Point2 z) {
  auto near0 = [](double a) { return a == 0.0; };
  auto is_c = [&](double cx, double cy) { return near0(z.x - cx) && near0(z.y - cy); };
  return is_c(1, 0) || is_c(0, 1) || is_c(1, 1) || is_c(-1, 0) || is_c(0, -1) || is_c(-1, -1);
}

// grad of Phi_E(z) = integral over E of log|z-xi| dxi, E = [0,1]^2.
Point2 square_potential_grad(Point2 z) {
  double x = z.x, y = z.y;
  double gx = 0.5 * (corner_g(x, y) - corner_g(x - 1.0, y) - corner_g(x, y - 1.0) +
                     corner_g(x - 1.0, y - 1.0));
  double gy = 0.5 * (corner_g(y, x) - corner_g(y, x - 1.0) - corner_g(y - 1.0, x) +
                     corner_g(y - 1.0, x - 1.0));
  return {gx, gy};
}

}  // namespace

PlaneVector cross_velocity(Point2 z) {
  if (z.x == 0.0 && z.y == 0.0) return {0.0, 0.0};
  if (at_corner(z)) throw SingularEvaluation("cross_velocity: rectangle corner");
  // u = (1/2) grad-perp Phi_E(z) for one square; the reflected square
  // contributes -u(-z), making the pair field odd exactly
  Point2 gp = square_potential_grad(z);
  Point2 gm = square_potential_grad(-z);
  return {-0.5 * (gp.y - gm.y), 0.5 * (gp.x - gm.x)};
}

namespace {

// Exact integral of log|z - a - tau d| over tau in [0,1], times |1|.
double segment_log_integral(Point2 z, Point2 a, Point2 d) {
  double L2 = d.norm2();
  if (L2 == 0.0) return 0.0;
  double L = std::sqrt(L2);
  Point2 w = z - a;
  double b = dot(w, d) / L2;
  double c = std::fabs(cross(w, d)) / L;
  auto F = [&](double s) {
    double t = 0.0;
    double q = L2 * s * s + c * c;
    if (s != 0.0 && q > 0.0) t += s * std::log(q);
    t -= 2.0 * s;
    if (c != 0.0) t += 2.0 * (c / L) * std::atan(L * s / c);
    return t;
  };
  return 0.5 * (F(1.0 - b) - F(-b));
}

}  // namespace

PlaneVector single_patch_velocity(const Contour& omega, Point2 z) {
  if (!omega.closed()) throw ContractViolation("patch_velocity: contour must be closed");
  double sx = 0.0, sy = 0.0;
  std::size_t n = omega.segment_count();
  for (std::size_t i = 0; i < n; ++i) {
    Point2 a = omega.segment_a(i);
    Point2 d = omega.segment_b(i) - a;
    double I = segment_log_integral(z, a, d);
    sx += d.x * I;
    sy += d.y * I;
  }
  // -1/2 for positively oriented boundaries matches the closed cross form
  return {-0.5 * sx, -0.5 * sy};
}

PlaneVector patch_velocity(const PatchPair& pair, Point2 z) {
  PlaneVector up = single_patch_velocity(pair.omega, z);
  PlaneVector um = single_patch_velocity(pair.omega, -z);
  return up - um;
}

Contour smoothed_cross_contour(double eps, int arc_segments) {
  if (!(eps > 0.0) || eps >= 1.0) throw ContractViolation("smoothed_cross_contour: eps in (0,1)");
  std::vector<Point2> nodes;
  nodes.push_back({eps, 0.0});
  nodes.push_back({1.0, 0.0});
  nodes.push_back({1.0, 1.0});
  nodes.push_back({0.0, 1.0});
  nodes.push_back({0.0, eps});
  for (int k = 1; k < arc_segments; ++k) {
    double ang = kHalfPi * (1.0 - double(k) / arc_segments);
    nodes.push_back({eps * std::cos(ang), eps * std::sin(ang)});
  }
  return Contour(std::move(nodes), true);
}

PlaneVector smoothed_cross_velocity(Point2 z, double eps) {
  if (!(eps > 0.0)) throw ContractViolation("smoothed_cross_velocity: eps must be positive");
  PatchPair pair = PatchPair::make(smoothed_cross_contour(eps));
  return patch_velocity(pair, z);
}

double theta_radial(const PatchPair& pair, double r) {
  if (!(r > 0.0 && r < 1.0)) throw ContractViolation("theta_radial: r must lie in (0,1)");
  const auto& v = pair.omega.nodes();
  double cx = 0.0, cy = 0.0;
  for (const auto& p : v) {
    cx += p.x;
    cy += p.y;
  }
  cx /= v.size();
  cy /= v.size();

  auto integrand = [r](double x, double y) {
    double q2 = x * x + y * y;
    if (q2 <= r * r) return 0.0;
    return x * y / (q2 * q2);
  };
  auto classify = [r](const Tri& t) -> int {
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    const double px[3] = {t.ax, t.bx, t.cx};
    const double py[3] = {t.ay, t.by, t.cy};
    for (int i = 0; i < 3; ++i) {
      Point2 a{px[i], py[i]}, b{px[(i + 1) % 3], py[(i + 1) % 3]};
      Point2 d = b - a;
      double len2 = d.norm2();
      double tt = len2 > 0 ? std::clamp(-dot(a, d) / len2, 0.0, 1.0) : 0.0;
      dmin = std::min(dmin, (a + d * tt).norm());
      dmax = std::max(dmax, Point2{px[i], py[i]}.norm());
    }
    // origin inside the triangle counts as distance zero
    auto orient = [&](int i, int j) {
      return (px[j] - px[i]) * (0.0 - py[i]) - (py[j] - py[i]) * (0.0 - px[i]);
    };
    double o1 = orient(0, 1), o2 = orient(1, 2), o3 = orient(2, 0);
    if ((o1 >= 0 && o2 >= 0 && o3 >= 0) || (o1 <= 0 && o2 <= 0 && o3 <= 0)) dmin = 0.0;
    bool near_cut = !(dmin > 1.2 * r || dmax < 0.8 * r);
    if (!near_cut) return 0;
    double diam = std::max({std::hypot(t.ax - t.bx, t.ay - t.by),
                            std::hypot(t.bx - t.cx, t.by - t.cy),
                            std::hypot(t.cx - t.ax, t.cy - t.ay)});
    return diam > 0.02 * r ? 1 : -1;
  };

  double total = 0.0;
  std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    Tri t{cx, cy, v[i].x, v[i].y, v[(i + 1) % n].x, v[(i + 1) % n].y};
    double sgn = (t.area() >= 0.0) ? 1.0 : -1.0;
    total += sgn * tri_adaptive(integrand, t, classify, 1e-7, 26);
  }
  // the xi -> -xi symmetry of the integrand doubles Omega's contribution
  return 2.0 * total;
}

ComparisonResidual comparison_residual(const PatchPair& pair, double eps, Point2 z, double t) {
  (void)t;
  if (!(z.norm() >= eps / 10.0))
    throw ContractViolation("comparison_residual: need |z| >= eps/10");
  PatchPair rotated = PatchPair::make(rotate(pair.omega, 0.25 * M_PI));
  PatchPair smoothed = PatchPair::make(rotate(smoothed_cross_contour(0.1 * eps), 0.25 * M_PI));
  PlaneVector d = patch_velocity(rotated, z) - patch_velocity(smoothed, z);
  return {d, d.norm() / z.norm()};
}

}  // namespace patchlab
