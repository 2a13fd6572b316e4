#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "envlp/contour.hpp"
#include "envlp/error.hpp"

// Synthetic contours used by the tests, the acceptance suite and the docs.

namespace envlp::shapes {

/// Regular k-gon with circumradius R; the first vertex sits at angle `phase`.
inline std::vector<Point> regular_polygon(int k, double R, Point center = {}, double phase = 0.0) {
  if (k < 3) throw Error(ErrorCode::DegeneratePolygon, "regular polygon needs k >= 3");
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / k;
    pts.push_back({center.x + R * std::cos(a), center.y + R * std::sin(a)});
  }
  return pts;
}

inline std::vector<Point> ellipse(double a, double b, int k, Point center = {}) {
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) {
    const double t = 2.0 * std::numbers::pi * i / k;
    pts.push_back({center.x + a * std::cos(t), center.y + b * std::sin(t)});
  }
  return pts;
}

/**
 * Star with one tip per entry of `tip_radii`, tips evenly spaced starting
 * at angle `phase`, and notches at `inner_radius` halfway between tips.
 */
inline std::vector<Point> star(std::span<const double> tip_radii, double inner_radius,
                               Point center = {}, double phase = std::numbers::pi / 2) {
  const auto k = static_cast<int>(tip_radii.size());
  if (k < 2) throw Error(ErrorCode::DegeneratePolygon, "star needs at least 2 tips");
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / k;
    const double b = a + std::numbers::pi / k;
    pts.push_back({center.x + tip_radii[i] * std::cos(a), center.y + tip_radii[i] * std::sin(a)});
    pts.push_back({center.x + inner_radius * std::cos(b), center.y + inner_radius * std::sin(b)});
  }
  return pts;
}

/// Regular five-pointed star (pentagram outline, inner/outer radius 1/phi^2)
/// with its top tip at +y; a contour with sharp derivative changes.
inline std::vector<Point> five_point_star(double outer_radius = 1.0, Point center = {}) {
  const double tips[5] = {outer_radius, outer_radius, outer_radius, outer_radius, outer_radius};
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  return star(tips, outer_radius / (golden * golden), center);
}

}  // namespace envlp::shapes
