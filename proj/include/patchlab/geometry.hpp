#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "patchlab/util.hpp"

namespace patchlab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2 operator-() const { return {-x, -y}; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

struct PlaneVector {
  double vx = 0.0;
  double vy = 0.0;

  PlaneVector operator+(PlaneVector o) const { return {vx + o.vx, vy + o.vy}; }
  PlaneVector operator-(PlaneVector o) const { return {vx - o.vx, vy - o.vy}; }
  PlaneVector operator*(double s) const { return {vx * s, vy * s}; }
  PlaneVector operator-() const { return {-vx, -vy}; }
  double norm() const { return std::hypot(vx, vy); }
};

// Ordered polyline boundary. Closed contours need at least 3 nodes and no
// coincident consecutive nodes; simplicity is checked on demand, not per edit.
class Contour {
 public:
  Contour() = default;
  Contour(std::vector<Point2> nodes, bool closed);

  const std::vector<Point2>& nodes() const { return nodes_; }
  std::vector<Point2>& mutable_nodes() { return nodes_; }
  bool closed() const { return closed_; }
  std::size_t size() const { return nodes_.size(); }

  // Number of segments (n for closed, n-1 for open).
  std::size_t segment_count() const;
  Point2 segment_a(std::size_t i) const { return nodes_[i]; }
  Point2 segment_b(std::size_t i) const { return nodes_[(i + 1) % nodes_.size()]; }

  double min_spacing() const;
  bool is_simple() const;  // O(N^2) segment-pair sweep

 private:
  std::vector<Point2> nodes_;
  bool closed_ = false;
};

double area(const Contour& c);
Contour reflect(const Contour& c);
double distance_to_origin(const Contour& c);
double distance_to_point(const Contour& c, Point2 p);
Contour rescale(const Contour& c, double lambda);
Contour rotate(const Contour& c, double angle);
Contour translate(const Contour& c, Point2 shift);

// Midpoint subdivision until every segment is shorter than max_spacing and
// every interior turn angle is below max_turn_angle, then a pruning pass that
// drops nodes whose removal changes local area by less than 1e-14.
Contour resample(const Contour& c, double max_spacing, double max_turn_angle);

// Simulator variant: spacing limit varies with position, pruning threshold and
// a node-protection predicate are caller-controlled.
Contour resample_adaptive(const Contour& c, const std::function<double(Point2)>& max_spacing_at,
                          double max_turn_angle, double prune_area_tol,
                          const std::function<bool(Point2)>& removable);

// A patch Omega with its central reflection implied, never stored.
struct PatchPair {
  Contour omega;

  // Positive orientation and the origin not interior to omega are structural;
  // strictly positive clearance is required by the simulator, not here (the
  // cross configuration touches the origin with its corner).
  static PatchPair make(Contour omega, bool require_positive_clearance = false);
};

bool origin_inside(const Contour& c);

// CSV: header "x,y", one node per row, closed implied.
std::string contour_to_csv(const Contour& c);
Contour contour_from_csv(const std::string& text);

// JSON: {"closed":true,"nodes":[[x,y],...]}
std::string contour_to_json(const Contour& c);
Contour contour_from_json(const std::string& text);

}  // namespace patchlab
