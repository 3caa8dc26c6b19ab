#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "polygal/bodies.hpp"
#include "polygal/dual_geometry.hpp"

namespace fixtures {

using polygal::Matrix;
using polygal::Vector;

inline polygal::NormalSystem square() { return polygal::validate_normals(oracle::square_normals()); }
inline polygal::NormalSystem hexagon() { return polygal::validate_normals(oracle::hexagon_normals()); }
inline polygal::NormalSystem octagon() { return polygal::validate_normals(oracle::octagon_normals()); }
inline polygal::NormalSystem regular(int n, double offset = 0.0) {
  return polygal::validate_normals(oracle::regular_normals(n, offset));
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix points(const std::vector<oracle::Point>& pts) {
  Matrix m(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return m;
}

inline std::vector<oracle::Point> planar_vertices(const Matrix& v) {
  std::vector<oracle::Point> out;
  for (Eigen::Index i = 0; i < v.rows(); ++i) out.emplace_back(v(i, 0), v(i, 1));
  return out;
}

/// Point hull of 1..max_points uniform points in the unit disc.
inline polygal::Body random_point_hull(std::mt19937_64& rng, int max_points = 10) {
  std::uniform_int_distribution<int> count(1, max_points);
  return polygal::Body::point_hull(points(oracle::random_disc_points(rng, count(rng))));
}

/// A mix of point hulls, balls, sums and scaled copies in the plane.
inline polygal::Body random_body(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  switch (kind(rng)) {
    case 0:
      return random_point_hull(rng);
    case 1:
      return polygal::Body::ball(vec({0.5 * u(rng), 0.5 * u(rng)}), 0.2 + 0.5 * std::abs(u(rng)));
    case 2:
      return polygal::Body::sum({random_point_hull(rng, 4), polygal::Body::ball(vec({0.0, 0.0}), 0.3)});
    default:
      return polygal::Body::scaled(0.5 + std::abs(u(rng)), random_point_hull(rng, 6));
  }
}

}  // namespace fixtures
