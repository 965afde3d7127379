#pragma once

#include <memory>

#include "patchlab/geometry.hpp"

namespace patchlab {

// Plane velocity field contract. Implementations are immutable and pure; the
// odd ones satisfy eval(-z,t) == -eval(z,t) exactly by construction.
class VelocityField {
 public:
  virtual ~VelocityField() = default;
  virtual PlaneVector eval(Point2 z, double t) const = 0;
};

// pi/2-periodic positive angular profile: cos phi near the x-axis, sin phi
// near the y-axis, quintic C^2 blend between, symmetric about pi/4.
class AngularBump {
 public:
  AngularBump();

  double phi0() const { return phi0_; }
  double eval(double phi) const;          // Phi(phi)
  double deriv(double phi) const;         // Phi'(phi)
  double min_value() const { return q0_; }

 private:
  double blend(double u, int order) const;
  double phi0_;
  double q0_;
};

// Q(x,y) = |z| Phi(phi); equals |x| within the cos sector and |y| within the
// sin sector. Branch selection is done on |y|/|x| so axis points stay exact.
double angular_q(const AngularBump& bump, Point2 z);

// Lambda_s(z) = x y log Q(x,y); throws at z = 0.
double lambda_s(const AngularBump& bump, Point2 z);

// Hyperbolic model flow grad-perp Lambda_s; closed form in the axis sectors,
// analytic blend derivative in between.
PlaneVector grad_perp_lambda_s(const AngularBump& bump, Point2 z);

// Closed form pi grad-perp inv-Laplacian of chi_E + chi_{E-}, E = [0,1]^2,
// assembled from the rectangle antiderivative v log(u^2+v^2) - 2v + 2u atan(v/u).
// Exactly odd. Throws at the rectangle corners except the origin itself.
PlaneVector cross_velocity(Point2 z);

// Boundary-integral velocity of the symmetric pair: exact per-segment
// antiderivative of the log kernel, both Omega and its reflection.
PlaneVector patch_velocity(const PatchPair& pair, Point2 z);

// Velocity of one positively oriented patch alone (no reflection).
PlaneVector single_patch_velocity(const Contour& omega, Point2 z);

// E(eps) = [0,1]^2 minus the corner quarter-disk of radius eps, as a polyline
// with arc_segments nodes along the notch.
Contour smoothed_cross_contour(double eps, int arc_segments = 48);

PlaneVector smoothed_cross_velocity(Point2 z, double eps);

// Theta_Omega(r): integral of xi1 xi2 / |xi|^4 over (Omega u Omega-) outside
// the disk of radius r. Fan triangulation plus adaptive refinement along the
// excluded-disk boundary.
double theta_radial(const PatchPair& pair, double r);

struct ComparisonResidual {
  PlaneVector d;
  double ratio;  // |D| / |z|
};

// D(z,t) between the pi/4-rotated pair and the smoothed cross at scale
// 0.1*eps, in the rotated frame of the comparison lemma.
ComparisonResidual comparison_residual(const PatchPair& pair, double eps, Point2 z, double t);

// Field adapters.
class CrossField final : public VelocityField {
 public:
  PlaneVector eval(Point2 z, double /*t*/) const override { return cross_velocity(z); }
};

class LambdaFlowField final : public VelocityField {
 public:
  explicit LambdaFlowField(std::shared_ptr<const AngularBump> bump) : bump_(std::move(bump)) {}
  PlaneVector eval(Point2 z, double /*t*/) const override {
    return grad_perp_lambda_s(*bump_, z);
  }

 private:
  std::shared_ptr<const AngularBump> bump_;
};

class PatchField final : public VelocityField {
 public:
  explicit PatchField(PatchPair pair) : pair_(std::move(pair)) {}
  PlaneVector eval(Point2 z, double /*t*/) const override { return patch_velocity(pair_, z); }

 private:
  PatchPair pair_;
};

}  // namespace patchlab
