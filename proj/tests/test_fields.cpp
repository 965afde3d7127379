#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "patchlab/fields.hpp"

using namespace patchlab;

namespace {

Point2 random_point(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  double r = mag(rng), a = ang(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

PatchPair cross_pair() { return PatchPair::make(oracles::unit_square_at(0.0, 0.0)); }

}  // namespace

TEST_CASE("cross_velocity: odd origin value and corner singularities") {
  auto u0 = cross_velocity({0.0, 0.0});
  CHECK(u0.vx == 0.0);
  CHECK(u0.vy == 0.0);
  CHECK_THROWS_AS(cross_velocity({1.0, 0.0}), SingularEvaluation);
  CHECK_THROWS_AS(cross_velocity({0.0, 1.0}), SingularEvaluation);
  CHECK_THROWS_AS(cross_velocity({1.0, 1.0}), SingularEvaluation);
  CHECK_THROWS_AS(cross_velocity({-1.0, -1.0}), SingularEvaluation);
}

TEST_CASE("cross_velocity at (0.01, 0.01): quadrature oracle and the leading log term") {
  Point2 z{0.01, 0.01};
  auto u = cross_velocity(z);
  auto o = oracles::cross_velocity_oracle(z);
  CHECK(u.vx == doctest::Approx(o.vx).epsilon(1e-8));
  CHECK(u.vy == doctest::Approx(o.vy).epsilon(1e-8));

  // leading term (1/2)(-x, y) log(x^2+y^2) = (0.0425858..., -0.0425858...)
  double lead = 0.5 * 0.01 * (-std::log(2e-4));
  CHECK(lead == doctest::Approx(0.0425858).epsilon(1e-5));
  CHECK(std::fabs(u.vx - lead) <= 2.0 * z.norm());
  CHECK(std::fabs(u.vy + lead) <= 2.0 * z.norm());
}

TEST_CASE("cross_velocity odd at 100 random points") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    Point2 z = random_point(rng, 0.01, 1.8);
    auto up = cross_velocity(z);
    auto um = cross_velocity(-z);
    CHECK(up.vx == -um.vx);
    CHECK(up.vy == -um.vy);
  }
}

TEST_CASE("cross_velocity matches the chord oracle off the squares too") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 20; ++i) {
    Point2 z = random_point(rng, 0.05, 1.5);
    auto u = cross_velocity(z);
    auto o = oracles::cross_velocity_oracle(z);
    CHECK(u.vx == doctest::Approx(o.vx).epsilon(5e-8));
    CHECK(u.vy == doctest::Approx(o.vy).epsilon(5e-8));
  }
}

TEST_CASE("patch_velocity on the polyline cross matches the closed form") {
  auto pair = cross_pair();
  Point2 z{0.3, 0.2};
  auto u = patch_velocity(pair, z);
  auto c = cross_velocity(z);
  CHECK(u.vx == doctest::Approx(c.vx).epsilon(1e-10));
  CHECK(u.vy == doctest::Approx(c.vy).epsilon(1e-10));

  std::mt19937_64 rng(44);
  int checked = 0;
  while (checked < 50) {
    Point2 q = random_point(rng, 0.05, 0.4);
    // stay off the square edges
    if (std::fabs(q.x) < 1e-3 || std::fabs(q.y) < 1e-3) continue;
    auto uu = patch_velocity(pair, q);
    auto cc = cross_velocity(q);
    double scale = std::max(1e-30, std::hypot(cc.vx, cc.vy));
    CHECK(std::hypot(uu.vx - cc.vx, uu.vy - cc.vy) / scale <= 1e-8);
    ++checked;
  }
}

TEST_CASE("patch_velocity: odd at origin, translation covariance of one patch") {
  auto pair = cross_pair();
  auto u0 = patch_velocity(pair, {0.0, 0.0});
  CHECK(u0.vx == 0.0);
  CHECK(u0.vy == 0.0);

  std::mt19937_64 rng(45);
  Contour omega = oracles::unit_square_at(0.2, 0.6);
  for (int i = 0; i < 10; ++i) {
    Point2 z = random_point(rng, 0.3, 2.0);
    Point2 w = random_point(rng, 0.1, 1.0);
    auto a = single_patch_velocity(omega, z);
    auto b = single_patch_velocity(translate(omega, w), z + w);
    CHECK(a.vx == doctest::Approx(b.vx).epsilon(1e-12));
    CHECK(a.vy == doctest::Approx(b.vy).epsilon(1e-12));
  }
}

TEST_CASE("patch_velocity divergence vanishes away from the contour") {
  auto pair = cross_pair();
  std::mt19937_64 rng(46);
  auto field = [&](Point2 q) { return patch_velocity(pair, q); };
  int checked = 0;
  while (checked < 25) {
    Point2 z = random_point(rng, 0.05, 2.5);
    double clearance = std::min(distance_to_point(pair.omega, z),
                                distance_to_point(reflect(pair.omega), z));
    if (clearance < 0.05) continue;
    double div = oracles::fd_divergence(field, z, 1e-5);
    double scale = std::max(1.0, field(z).norm() / std::max(z.norm(), 0.1));
    CHECK(std::fabs(div) <= 1e-6 * scale * 10.0);
    ++checked;
  }
}

TEST_CASE("theta_radial on the cross: -log r plus a constant, confined band") {
  auto pair = cross_pair();
  // polar closed form for the cross: Theta(r) = -log r + (1 - log 2)/2
  double c_exact = 0.5 * (1.0 - std::log(2.0));
  std::vector<double> offsets;
  for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double th = theta_radial(pair, r);
    double off = th + std::log(r);
    CHECK(off == doctest::Approx(c_exact).epsilon(0.25));
    offsets.push_back(off);
  }
  double band = *std::max_element(offsets.begin(), offsets.end()) -
                *std::min_element(offsets.begin(), offsets.end());
  CHECK(band <= 4.0);

  double th01 = theta_radial(pair, 0.1);
  CHECK(std::fabs(th01 - (-std::log(0.1))) <= 2.0);
  CHECK_THROWS_AS(theta_radial(pair, 0.0), ContractViolation);
  CHECK_THROWS_AS(theta_radial(pair, 1.5), ContractViolation);
}

TEST_CASE("theta_radial: disk pair in quadrants 2 and 4 is negative; reflection invariance") {
  auto disk = oracles::regular_polygon(96, 0.45);
  auto q2 = PatchPair::make(translate(disk, {-0.8, 0.8}));
  double th = theta_radial(q2, 0.1);
  CHECK(th < 0.0);

  auto refl = PatchPair::make(reflect(q2.omega));
  CHECK(theta_radial(refl, 0.1) == doctest::Approx(th).epsilon(1e-6));
}

TEST_CASE("lambda_s: branch value, swap symmetry, homogeneity of Q") {
  AngularBump bump;
  CHECK(lambda_s(bump, {0.1, 0.02}) == doctest::Approx(0.002 * std::log(0.1)).epsilon(1e-14));
  CHECK_THROWS_AS(lambda_s(bump, {0.0, 0.0}), SingularEvaluation);

  std::mt19937_64 rng(47);
  for (int i = 0; i < 50; ++i) {
    Point2 z = random_point(rng, 1e-3, 0.3);
    CHECK(lambda_s(bump, z) ==
          doctest::Approx(lambda_s(bump, {z.y, z.x})).epsilon(1e-12));
    double lam = 3.7;
    CHECK(angular_q(bump, z * lam) == doctest::Approx(lam * angular_q(bump, z)).epsilon(1e-13));
  }
}

TEST_CASE("AngularBump: branch values, symmetry, positivity, smooth junctions") {
  AngularBump bump;
  double phi0 = bump.phi0();
  CHECK(phi0 == doctest::Approx(std::atan(0.5)).epsilon(1e-15));
  CHECK(bump.eval(0.2) == doctest::Approx(std::cos(0.2)).epsilon(1e-15));
  CHECK(bump.eval(M_PI / 2 - 0.1) == doctest::Approx(std::sin(M_PI / 2 - 0.1)).epsilon(1e-15));
  for (double phi = 0.0; phi < M_PI / 2; phi += 0.01) {
    CHECK(bump.eval(phi) > 0.0);
    CHECK(bump.eval(phi) == doctest::Approx(bump.eval(M_PI / 2 - phi)).epsilon(1e-12));
    CHECK(bump.eval(phi) == doctest::Approx(bump.eval(phi + M_PI / 2)).epsilon(1e-12));
  }
  // C^1 across the junctions via finite differences
  for (double phi : {phi0, M_PI / 2 - phi0}) {
    double h = 1e-7;
    double fd = (bump.eval(phi + h) - bump.eval(phi - h)) / (2 * h);
    CHECK(fd == doctest::Approx(bump.deriv(phi)).epsilon(1e-5));
  }
}

TEST_CASE("grad_perp_lambda_s: separatrix trajectory (0, y0) -> (0, y0^{e^tau})") {
  AngularBump bump;
  auto v = grad_perp_lambda_s(bump, {0.0, std::exp(-1.0)});
  CHECK(v.vx == 0.0);
  auto flow = [&](Point2 q) { return grad_perp_lambda_s(bump, q); };
  Point2 end = oracles::rk4_advect(flow, {0.0, std::exp(-1.0)}, 1.0, 4000);
  CHECK(end.x == 0.0);
  CHECK(end.y == doctest::Approx(std::exp(-std::exp(1.0))).epsilon(1e-9));
}

TEST_CASE("grad_perp_lambda_s matches finite differences of lambda_s") {
  AngularBump bump;
  std::mt19937_64 rng(48);
  for (int i = 0; i < 100; ++i) {
    Point2 z = random_point(rng, 1e-3, 0.3);
    double h = 3e-6 * z.norm();
    auto lam = [&](Point2 q) { return lambda_s(bump, q); };
    double dx = oracles::fd_partial(lam, z, 0, h);
    double dy = oracles::fd_partial(lam, z, 1, h);
    auto v = grad_perp_lambda_s(bump, z);
    double scale = std::max({std::fabs(dx), std::fabs(dy), 1e-12});
    CHECK(std::fabs(v.vx + dy) / scale <= 1e-6);
    CHECK(std::fabs(v.vy - dx) / scale <= 1e-6);
  }
}

TEST_CASE("lambda_s is invariant along its own flow") {
  AngularBump bump;
  auto flow = [&](Point2 q) { return grad_perp_lambda_s(bump, q); };
  Point2 z{0.05, 0.11};
  double lam0 = lambda_s(bump, z);
  Point2 cur = z;
  for (int leg = 0; leg < 10; ++leg) {
    cur = oracles::rk4_advect(flow, cur, 0.1, 4000);
    CHECK(lambda_s(bump, cur) == doctest::Approx(lam0).epsilon(1e-8));
  }
}

TEST_CASE("smoothed cross: leading term near the origin and limit far away") {
  double eps = 1e-3;
  std::mt19937_64 rng(49);
  double worst_ratio = 0.0;
  for (int i = 0; i < 12; ++i) {
    Point2 z = random_point(rng, 0.05 * eps, eps);
    auto u = smoothed_cross_velocity(z, eps);
    PlaneVector lead{-z.x * std::log(eps), z.y * std::log(eps)};
    double dev = (u - lead).norm() / z.norm();
    worst_ratio = std::max(worst_ratio, dev);
  }
  CHECK(worst_ratio <= 10.0);

  Point2 zfar{0.3, 0.2};
  auto uc = cross_velocity(zfar);
  double prev = std::numeric_limits<double>::infinity();
  for (double e : {3e-2, 1e-2, 3e-3, 1e-3}) {
    auto us = smoothed_cross_velocity(zfar, e);
    double diff = (us - uc).norm();
    CHECK(diff <= 0.1 * zfar.norm());
    CHECK(diff <= prev * 1.05);
    prev = diff;
  }

  for (int i = 0; i < 100; ++i) {
    Point2 z = random_point(rng, 1e-4, 1.2);
    auto up = smoothed_cross_velocity(z, eps);
    auto um = smoothed_cross_velocity(-z, eps);
    CHECK(up.vx == -um.vx);
    CHECK(up.vy == -um.vy);
  }
}

TEST_CASE("comparison_residual: antisymmetry and contract") {
  auto pair = cross_pair();
  double eps = 1e-2;
  Point2 z{0.05, 0.02};
  auto a = comparison_residual(pair, eps, z, 0.0);
  auto b = comparison_residual(pair, eps, -z, 0.0);
  CHECK(a.d.vx == -b.d.vx);
  CHECK(a.d.vy == -b.d.vy);
  CHECK_THROWS_AS(comparison_residual(pair, eps, {1e-5, 0.0}, 0.0), ContractViolation);
}
