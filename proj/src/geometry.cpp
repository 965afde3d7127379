#include "patchlab/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace patchlab {

namespace {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  Point2 d = b - a;
  double len2 = d.norm2();
  if (len2 == 0.0) return (p - a).norm();
  double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return (p - (a + d * t)).norm();
}

bool segments_properly_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) { return cross(q - p, r - p); };
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
         o4 != 0;
}

double turn_angle(Point2 prev, Point2 cur, Point2 next) {
  Point2 u = cur - prev, v = next - cur;
  double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

Contour::Contour(std::vector<Point2> nodes, bool closed) : nodes_(std::move(nodes)), closed_(closed) {
  for (const auto& p : nodes_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw ContractViolation("Contour: non-finite node");
  if (closed_ && nodes_.size() < 3) throw ContractViolation("Contour: closed needs >= 3 nodes");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (nodes_[i].x == nodes_[i + 1].x && nodes_[i].y == nodes_[i + 1].y)
      throw ContractViolation("Contour: coincident consecutive nodes");
  if (closed_ && nodes_.size() >= 2) {
    if (nodes_.front().x == nodes_.back().x && nodes_.front().y == nodes_.back().y)
      throw ContractViolation("Contour: closed contour repeats its first node");
  }
}

std::size_t Contour::segment_count() const {
  if (nodes_.size() < 2) return 0;
  return closed_ ? nodes_.size() : nodes_.size() - 1;
}

double Contour::min_spacing() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < segment_count(); ++i)
    m = std::min(m, (segment_b(i) - segment_a(i)).norm());
  return m;
}

bool Contour::is_simple() const {
  std::size_t n = segment_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (closed_ && i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_properly_intersect(segment_a(i), segment_b(i), segment_a(j), segment_b(j)))
        return false;
    }
  }
  return true;
}

double area(const Contour& c) {
  if (!c.closed()) throw ContractViolation("area: contour must be closed");
  const auto& v = c.nodes();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    s += cross(a, b);
  }
  return 0.5 * s;
}

Contour reflect(const Contour& c) {
  std::vector<Point2> nodes;
  nodes.reserve(c.size());
  for (const auto& p : c.nodes()) nodes.push_back(-p);
  return Contour(std::move(nodes), c.closed());
}

double distance_to_point(const Contour& c, Point2 p) {
  if (c.size() == 0) throw ContractViolation("distance: empty contour");
  if (c.size() == 1) return (p - c.nodes()[0]).norm();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.segment_count(); ++i)
    m = std::min(m, point_segment_distance(p, c.segment_a(i), c.segment_b(i)));
  return m;
}

double distance_to_origin(const Contour& c) { return distance_to_point(c, Point2{0.0, 0.0}); }

Contour rescale(const Contour& c, double lambda) {
  if (!(lambda > 0.0)) throw ContractViolation("rescale: lambda must be positive");
  std::vector<Point2> nodes;
  nodes.reserve(c.size());
  for (const auto& p : c.nodes()) nodes.push_back(p * lambda);
  return Contour(std::move(nodes), c.closed());
}

Contour rotate(const Contour& c, double angle) {
  double ca = std::cos(angle), sa = std::sin(angle);
  std::vector<Point2> nodes;
  nodes.reserve(c.size());
  for (const auto& p : c.nodes()) nodes.push_back({ca * p.x - sa * p.y, sa * p.x + ca * p.y});
  return Contour(std::move(nodes), c.closed());
}

Contour translate(const Contour& c, Point2 shift) {
  std::vector<Point2> nodes;
  nodes.reserve(c.size());
  for (const auto& p : c.nodes()) nodes.push_back(p + shift);
  return Contour(std::move(nodes), c.closed());
}

Contour resample_adaptive(const Contour& c, const std::function<double(Point2)>& max_spacing_at,
                          double max_turn_angle, double prune_area_tol,
                          const std::function<bool(Point2)>& removable) {
  std::vector<Point2> v = c.nodes();
  bool closed = c.closed();

  // insertion by midpoint subdivision
  bool changed = true;
  int rounds = 0;
  while (changed && rounds++ < 64) {
    changed = false;
    std::vector<Point2> out;
    out.reserve(v.size() * 2);
    std::size_t n = v.size();
    std::size_t nseg = closed ? n : n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(v[i]);
      if (i >= nseg) continue;
      Point2 a = v[i], b = v[(i + 1) % n];
      Point2 mid = (a + b) * 0.5;
      double len = (b - a).norm();
      bool split = len > std::min(max_spacing_at(a), max_spacing_at(b));
      if (!split && max_turn_angle > 0.0) {
        bool has_prev = closed || i > 0;
        bool has_next = closed || i + 2 < n;
        Point2 prev = has_prev ? v[(i + n - 1) % n] : a;
        Point2 next = has_next ? v[(i + 2) % n] : b;
        double ang = 0.0;
        if (has_prev) ang = std::max(ang, turn_angle(prev, a, b));
        if (has_next) ang = std::max(ang, turn_angle(a, b, next));
        if (ang > max_turn_angle && len > 64.0 * std::numeric_limits<double>::min()) split = true;
      }
      if (split) {
        out.push_back(mid);
        changed = true;
      }
    }
    v = std::move(out);
  }

  // pruning pass: drop nodes whose removal is area-neutral and keeps the
  // spacing and turn budgets intact
  if (prune_area_tol > 0.0) {
    std::size_t n = v.size();
    std::vector<Point2> out;
    out.reserve(n);
    std::size_t lo = closed ? 0 : 1;
    std::size_t hi = closed ? n : n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      bool interior = (i >= lo && i < hi);
      if (!interior || (removable && !removable(v[i]))) {
        out.push_back(v[i]);
        continue;
      }
      Point2 prev = out.empty() ? v[(i + n - 1) % n] : out.back();
      Point2 next = v[(i + 1) % n];
      double darea = 0.5 * std::fabs(cross(v[i] - prev, next - prev));
      double chord = (next - prev).norm();
      bool ok = darea < prune_area_tol && chord <= std::min(max_spacing_at(prev), max_spacing_at(next));
      if (ok && max_turn_angle > 0.0) {
        Point2 prev2 = out.size() >= 2 ? out[out.size() - 2] : v[(i + n - 2) % n];
        Point2 next2 = v[(i + 2) % n];
        if (turn_angle(prev2, prev, next) > max_turn_angle ||
            turn_angle(prev, next, next2) > max_turn_angle)
          ok = false;
      }
      if (!ok) out.push_back(v[i]);
    }
    if (!closed || out.size() >= 3) v = std::move(out);
  }

  return Contour(std::move(v), closed);
}

Contour resample(const Contour& c, double max_spacing, double max_turn_angle) {
  if (!(max_spacing > 0.0) || !(max_turn_angle > 0.0))
    throw ContractViolation("resample: parameters must be positive");
  return resample_adaptive(
      c, [max_spacing](Point2) { return max_spacing; }, max_turn_angle, 1e-14, nullptr);
}

bool origin_inside(const Contour& c) {
  if (distance_to_origin(c) == 0.0) return false;  // on the boundary
  // even-odd ray cast along +x
  const auto& v = c.nodes();
  bool inside = false;
  std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point2 a = v[i], b = v[(i + 1) % n];
    if ((a.y > 0.0) != (b.y > 0.0)) {
      double xint = a.x + (0.0 - a.y) / (b.y - a.y) * (b.x - a.x);
      if (xint > 0.0) inside = !inside;
    }
  }
  return inside;
}

PatchPair PatchPair::make(Contour omega, bool require_positive_clearance) {
  if (!omega.closed()) throw ContractViolation("PatchPair: omega must be closed");
  if (area(omega) <= 0.0) throw ContractViolation("PatchPair: omega must be positively oriented");
  if (origin_inside(omega)) throw ContractViolation("PatchPair: origin lies inside omega");
  if (require_positive_clearance && !(distance_to_origin(omega) > 0.0))
    throw ContractViolation("PatchPair: origin clearance must be positive");
  return PatchPair{std::move(omega)};
}

std::string contour_to_csv(const Contour& c) {
  std::string out = "x,y\n";
  for (const auto& p : c.nodes()) {
    out += format_double(p.x);
    out += ',';
    out += format_double(p.y);
    out += '\n';
  }
  return out;
}

Contour contour_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Point2> nodes;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ContractViolation("contour csv: malformed row");
    nodes.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return Contour(std::move(nodes), true);
}

std::string contour_to_json(const Contour& c) {
  nlohmann::json j;
  j["closed"] = c.closed();
  auto& arr = j["nodes"] = nlohmann::json::array();
  for (const auto& p : c.nodes()) arr.push_back({p.x, p.y});
  return j.dump();
}

Contour contour_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<Point2> nodes;
  for (const auto& e : j.at("nodes")) nodes.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return Contour(std::move(nodes), j.at("closed").get<bool>());
}

}  // namespace patchlab
