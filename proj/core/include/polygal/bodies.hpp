#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "polygal/coordinate_space.hpp"

namespace polygal {

struct Body;

struct PointHull {
  Matrix points;  // one point per row
};

struct Ball {
  Vector center;
  double radius = 0.0;
};

/// {x : A x <= b}, required to be bounded and nonempty.
struct HalfspacePolytope {
  Matrix A;
  Vector b;
};

struct MinkowskiSum {
  std::vector<Body> parts;
};

struct Scaled {
  double factor = 1.0;
  std::shared_ptr<const Body> inner;
};

/// A convex compact set given by its support function.
struct Body {
  std::variant<PointHull, Ball, HalfspacePolytope, MinkowskiSum, Scaled> node;

  static Body point_hull(Matrix points);
  static Body ball(Vector center, double radius);
  static Body halfspace(Matrix A, Vector b);
  static Body sum(std::vector<Body> parts);
  static Body scaled(double factor, Body inner);

  int dimension() const;
};

/// sigma_C(u) for a unit direction u (norm checked within 1e-9).
double support(const Body& body, const Vector& u, const Tolerances& tol = {});

/// sup_{c in C} ||c||_2. Exact except for Minkowski sums, where the
/// triangle-inequality upper bound is returned.
double body_norm(const Body& body, const Tolerances& tol = {});

struct NormBounds {
  double lower = 0.0;  // max of sampled support values
  double upper = 0.0;  // body_norm
};

NormBounds body_norm_bounds(const Body& body, int samples = 720, const Tolerances& tol = {});

struct ProjectionResult {
  CoordinateVector coords;
  double body_norm = 0.0;
  std::optional<PolytopeRealization> realization;
};

/// b_i = sigma_C(a_i). Unclassified.
ProjectionResult project_coords(const Body& body, const NormalSystem& ns, const Tolerances& tol = {});

/// As above, classified against the cone and realized.
ProjectionResult project_coords(const Body& body, const CompiledCone& cone, const Tolerances& tol = {});

/// (1 - lambda) P(C) + lambda ||C||_2 1 for lambda in (0, 1). Throws
/// DegenerateBody when ||C||_2 = 0.
ProjectionResult project_interior(const Body& body, const CompiledCone& cone, double lambda,
                                  const Tolerances& tol = {});

struct HausdorffInterval {
  double lower = 0.0;
  double upper = 0.0;
  double mesh = 0.0;
  bool certified = false;
};

/// Bracket on dist_H(C, Q) = sup_u |sigma_C(u) - sigma_Q(u)| from sampled
/// directions; upper adds 2 max(||C||, ||Q||) times the sample mesh.
HausdorffInterval hausdorff_body_vs_polytope(const Body& body, const PolytopeRealization& real, int samples,
                                             std::uint64_t seed = 0, const Tolerances& tol = {});

/// Point hull of a realization's vertices.
Body body_from_realization(const PolytopeRealization& real);

}  // namespace polygal
