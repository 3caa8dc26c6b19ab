#pragma once

#include <vector>

#include "polygal/dual_geometry.hpp"
#include "polygal/lp.hpp"

namespace polygal {

enum class Classification { Unclassified, Exterior, Boundary, Interior };

std::string_view to_string(Classification c);

struct CoordinateVector {
  Vector b;
  Classification classification = Classification::Unclassified;
  IndexSet active_columns;  // indices into CompiledCone::columns, boundary only
  double min_activity = 0.0;  // min over tested columns of column^T b
};

/// Exterior if some column has column^T b < -eps, interior if all exceed
/// +eps, boundary otherwise, with eps = classify_band(||b||_inf). Pruned
/// columns are skipped unless include_pruned is set.
CoordinateVector classify(const Vector& b, const CompiledCone& cone, const Tolerances& tol = {},
                          bool include_pruned = false);

/// b_i = max{a_i^T x : A x <= b_tilde}. Throws EmptyPolytope.
CoordinateVector canonicalize(const Vector& b_tilde, const NormalSystem& ns, const Tolerances& tol = {});
CoordinateVector canonicalize(const Vector& b_tilde, const CompiledCone& cone, const Tolerances& tol = {});

struct PolytopeRealization {
  Matrix normals;
  Vector source_b;
  std::vector<PrimalVertex> vertices;
  std::vector<IndexSet> facet_active;  // facet k -> indices into vertices

  int dimension() const { return static_cast<int>(normals.cols()); }
  Matrix vertex_matrix() const;  // one vertex per row
};

/// Throws ExteriorCoordinates unless classify(b) is boundary or interior.
PolytopeRealization realize(const Vector& b, const CompiledCone& cone, const Tolerances& tol = {});

/// Vertex enumeration of Q_{A,b} without the membership check. The facet
/// lists may be empty when b is not minimal.
PolytopeRealization realize_polytope(const Vector& b, const Matrix& normals, const Tolerances& tol = {});

/// b_i = max over vertices of a_i^T x.
Vector support_coordinates(const PolytopeRealization& real);

/// Euclidean distance from x to the polytope.
double point_distance(const Vector& x, const PolytopeRealization& real, const Tolerances& tol = {});

double hausdorff_polytopes(const PolytopeRealization& p, const PolytopeRealization& q, const Tolerances& tol = {});

/// Affine dimension of the facet-k vertex hull, -1 when the facet is empty.
int facet_dimension(const PolytopeRealization& real, int k);

/// Affine dimension of the whole vertex hull, -1 when empty.
int polytope_dimension(const PolytopeRealization& real);

struct DegeneracyWitness {
  int column = -1;  // index into CompiledCone::columns
  DualVertex vertex;
};

struct DegeneracyReport {
  bool flat = false;
  IndexSet degenerate_facets;
  std::vector<DegeneracyWitness> flat_witnesses;
  std::vector<DegeneracyWitness> facet_witnesses;
  // Dimension counts of the realization agree with the column activity.
  bool geometry_consistent = true;
};

/// Throws ExteriorCoordinates.
DegeneracyReport diagnose_boundary(const Vector& b, const CompiledCone& cone, const Tolerances& tol = {});

}  // namespace polygal
