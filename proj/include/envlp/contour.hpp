#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "envlp/error.hpp"
#include "envlp/fourier_envelope.hpp"
#include "envlp/periodic_signal.hpp"

namespace envlp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Shoelace signed area; positive for counter-clockwise vertex order.
inline double signed_area(std::span<const Point> pts) {
  double a = 0.0;
  for (std::size_t i = 0, n = pts.size(); i < n; ++i) a += cross(pts[i], pts[(i + 1) % n]);
  return 0.5 * a;
}

/// Area centroid of a simple polygon.
inline Point centroid(std::span<const Point> pts) {
  if (pts.size() < 3) throw Error(ErrorCode::DegeneratePolygon, "polygon needs at least 3 vertices");
  // Shift to the first vertex to limit cancellation for far-off coordinates.
  const Point origin = pts[0];
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
    const Point p = pts[i] - origin;
    const Point q = pts[(i + 1) % n] - origin;
    const double w = cross(p, q);
    a2 += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::hypot(p.x - origin.x, p.y - origin.y));
  if (std::abs(a2) <= 1e-14 * scale * scale) {
    throw Error(ErrorCode::DegeneratePolygon, "polygon has zero area");
  }
  return {origin.x + cx / (3.0 * a2), origin.y + cy / (3.0 * a2)};
}

namespace detail {

inline int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  const double scale = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y), std::abs(c.x - a.x),
                                 std::abs(c.y - a.y), 1e-300});
  if (std::abs(v) <= 1e-12 * scale * scale) return 0;
  return v > 0 ? 1 : -1;
}

inline bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
         (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

inline double segment_distance(Point a, Point b, Point p) {
  const Point e = b - a;
  const double len2 = dot(e, e);
  double s = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  const Point d = p - (a + s * e);
  return std::hypot(d.x, d.y);
}

}  // namespace detail

/**
 * Closed simple polygon (implicitly closed; a repeated closing vertex and
 * repeated consecutive vertices are dropped on construction).
 */
class Contour {
 public:
  static Contour from_points(std::vector<Point> pts) {
    std::vector<Point> clean;
    clean.reserve(pts.size());
    for (const auto& p : pts) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error(ErrorCode::DegeneratePolygon, "non-finite vertex");
      }
      if (clean.empty() || !(clean.back() == p)) clean.push_back(p);
    }
    while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
    if (clean.size() < 3) throw Error(ErrorCode::DegeneratePolygon, "polygon needs at least 3 vertices");

    Contour c;
    c.points_ = std::move(clean);
    c.centroid_ = envlp::centroid(c.points_);
    c.check_simple();
    c.star_shaped_ = c.compute_star_shaped();
    return c;
  }

  const std::vector<Point>& points() const noexcept { return points_; }
  Point centroid() const noexcept { return centroid_; }
  /// Every ray from the centroid crosses the boundary exactly once.
  bool star_shaped() const noexcept { return star_shaped_; }

  /// Farthest boundary crossing along the ray from the centroid at angle theta.
  std::optional<double> ray_distance(double theta) const {
    const Point u{std::cos(theta), std::sin(theta)};
    std::optional<double> best;
    auto take = [&](double s) {
      if (s >= 0.0 && (!best || s > *best)) best = s;
    };
    for (std::size_t i = 0, n = points_.size(); i < n; ++i) {
      const Point p = points_[i];
      const Point e = points_[(i + 1) % n] - p;
      const Point w = p - centroid_;
      const double den = cross(u, e);
      const double elen = std::hypot(e.x, e.y);
      if (std::abs(den) <= 1e-14 * elen) {
        // Parallel edge: only counts when it lies on the ray itself.
        if (std::abs(cross(w, u)) <= 1e-12 * std::max(1.0, std::hypot(w.x, w.y))) {
          take(dot(w, u));
          take(dot(w + e, u));
        }
        continue;
      }
      const double s = cross(w, e) / den;
      const double tau = cross(w, u) / den;
      if (tau >= -1e-12 && tau <= 1.0 + 1e-12) take(s);
    }
    return best;
  }

 private:
  void check_simple() const {
    const std::size_t n = points_.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (detail::segments_intersect(points_[i], points_[(i + 1) % n], points_[j],
                                       points_[(j + 1) % n])) {
          throw Error(ErrorCode::SelfIntersecting,
                      "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
        }
      }
    }
  }

  bool compute_star_shaped() const {
    int sign = 0;
    for (std::size_t i = 0, n = points_.size(); i < n; ++i) {
      const int o = detail::orientation(centroid_, points_[i], points_[(i + 1) % n]);
      if (o == 0) return false;
      if (sign == 0) sign = o;
      if (o != sign) return false;
    }
    return true;
  }

  std::vector<Point> points_;
  Point centroid_;
  bool star_shaped_ = true;
};

/// Ray angle for sample j of M: theta = -pi + 2 pi j / M, i.e. t = (theta + pi) / (2 pi).
inline double sample_angle(std::size_t j, std::size_t M) {
  return -std::numbers::pi + kTwoPi * static_cast<double>(j) / static_cast<double>(M);
}

/// Radial signal r(t) of the contour about its centroid, sampled at M angles.
inline PeriodicSignal radial_parametrize(const Contour& contour, int M,
                                         std::optional<double> lipschitz_c = std::nullopt) {
  if (M < 64) throw Error(ErrorCode::InvalidArgument, "need at least 64 angular samples");
  std::vector<double> r(M);
  for (int j = 0; j < M; ++j) {
    const auto d = contour.ray_distance(sample_angle(j, M));
    if (!d) {
      throw Error(ErrorCode::NoIntersection,
                  "ray " + std::to_string(j) + " misses the boundary (centroid outside polygon?)");
    }
    r[j] = *d;
  }
  return PeriodicSignal::from_samples(std::move(r), lipschitz_c)
      .with_star_shaped(contour.star_shaped());
}

/// Polygon traced by the envelope radii about `center`, using the same angle mapping.
inline std::vector<Point> reconstruct_region(const FourierEnvelope& env, int M, Point center = {}) {
  if (M < 4) throw Error(ErrorCode::InvalidArgument, "need at least 4 angular samples");
  std::vector<Point> out;
  out.reserve(M);
  for (int j = 0; j < M; ++j) {
    const double r = evaluate(env, static_cast<double>(j) / M);
    if (!(r > 0.0)) {
      throw Error(ErrorCode::NonpositiveRadius,
                  "envelope radius " + std::to_string(r) + " at sample " + std::to_string(j));
    }
    const double theta = sample_angle(j, M);
    out.push_back({center.x + r * std::cos(theta), center.y + r * std::sin(theta)});
  }
  return out;
}

/// Even-odd point-in-polygon test; points within `tol` of the boundary count as inside.
inline bool contains(std::span<const Point> polygon, Point p, double tol = 0.0) {
  const std::size_t n = polygon.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = polygon[i];
    const Point b = polygon[j];
    if (detail::segment_distance(a, b, p) <= tol) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace envlp
