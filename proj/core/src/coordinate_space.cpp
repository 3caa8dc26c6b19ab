#include "polygal/coordinate_space.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "subsets.hpp"

namespace polygal {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Unclassified: return "unclassified";
    case Classification::Exterior: return "exterior";
    case Classification::Boundary: return "boundary";
    case Classification::Interior: return "interior";
  }
  return "unclassified";
}

namespace {

void check_length(const Vector& b, int n) {
  if (b.size() != n) {
    throw Error(ErrorCode::InvalidArgument,
                "coordinate vector has length " + std::to_string(b.size()) + ", expected " + std::to_string(n));
  }
  if (!b.allFinite()) throw Error(ErrorCode::InvalidArgument, "coordinates must be finite");
}

}  // namespace

CoordinateVector classify(const Vector& b, const CompiledCone& cone, const Tolerances& tol, bool include_pruned) {
  check_length(b, cone.normals.size());
  CoordinateVector out;
  out.b = b;
  const double eps = tol.classify_band(b.cwiseAbs().maxCoeff());
  bool exterior = false;
  out.min_activity = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cone.columns.size(); ++j) {
    if (cone.columns[j].pruned && !include_pruned) continue;
    const double v = cone.columns[j].vector.dot(b);
    out.min_activity = std::min(out.min_activity, v);
    if (v < -eps) exterior = true;
    else if (v <= eps) out.active_columns.push_back(static_cast<int>(j));
  }
  if (exterior) {
    out.classification = Classification::Exterior;
    out.active_columns.clear();
  } else {
    out.classification = out.active_columns.empty() ? Classification::Interior : Classification::Boundary;
  }
  return out;
}

CoordinateVector canonicalize(const Vector& b_tilde, const NormalSystem& ns, const Tolerances& tol) {
  check_length(b_tilde, ns.size());
  const FarkasResult feas = farkas_feasible(ns.rows, b_tilde, tol);
  if (!feas.feasible) throw Error(ErrorCode::EmptyPolytope, "Q_{A,b} is empty");
  CoordinateVector out;
  out.b.resize(ns.size());
  for (int i = 0; i < ns.size(); ++i) {
    const LpOutcome lp = solve_lp({ns.rows.row(i).transpose(), ns.rows, b_tilde}, tol);
    if (lp.status == LpStatus::Unbounded) throw Error(ErrorCode::UnboundedRegion, "row support is unbounded");
    if (lp.status != LpStatus::Optimal) throw Error(ErrorCode::NumericalFailure, "feasible region lost during LP");
    out.b(i) = std::min(lp.value, b_tilde(i));
  }
  return out;
}

CoordinateVector canonicalize(const Vector& b_tilde, const CompiledCone& cone, const Tolerances& tol) {
  const CoordinateVector raw = canonicalize(b_tilde, cone.normals, tol);
  return classify(raw.b, cone, tol);
}

Matrix PolytopeRealization::vertex_matrix() const {
  Matrix V(vertices.size(), normals.cols());
  for (std::size_t i = 0; i < vertices.size(); ++i) V.row(i) = vertices[i].point.transpose();
  return V;
}

PolytopeRealization realize_polytope(const Vector& b, const Matrix& normals, const Tolerances& tol) {
  check_length(b, static_cast<int>(normals.rows()));
  PolytopeRealization real;
  real.normals = normals;
  real.source_b = b;
  VertexOptions options;
  options.verify_bounded = false;
  real.vertices = enumerate_primal_vertices(normals, b, tol, options);
  real.facet_active.assign(normals.rows(), {});
  for (std::size_t v = 0; v < real.vertices.size(); ++v) {
    for (int k : real.vertices[v].active) real.facet_active[k].push_back(static_cast<int>(v));
  }
  return real;
}

PolytopeRealization realize(const Vector& b, const CompiledCone& cone, const Tolerances& tol) {
  const CoordinateVector cv = classify(b, cone, tol);
  if (cv.classification == Classification::Exterior) {
    throw Error(ErrorCode::ExteriorCoordinates, "b is not in C_A");
  }
  return realize_polytope(b, cone.normals.rows, tol);
}

Vector support_coordinates(const PolytopeRealization& real) {
  if (real.vertices.empty()) throw Error(ErrorCode::EmptyPolytope, "realization has no vertices");
  return (real.normals * real.vertex_matrix().transpose()).rowwise().maxCoeff();
}

double point_distance(const Vector& x, const PolytopeRealization& real, const Tolerances& tol) {
  if (real.vertices.empty()) throw Error(ErrorCode::EmptyPolytope, "realization has no vertices");
  const Matrix& A = real.normals;
  const Vector& b = real.source_b;
  const int d = real.dimension();
  auto inside = [&](const Vector& y) {
    const Vector ay = A * y;
    for (int i = 0; i < A.rows(); ++i) {
      if (ay(i) > b(i) + 100.0 * tol.feas(b(i))) return false;
    }
    return true;
  };
  if (inside(x)) return 0.0;

  // The nearest point lies in the relative interior of a face, whose affine
  // hull is cut out by a subset of rows active at one of its vertices.
  std::set<IndexSet> faces;
  for (const auto& v : real.vertices) {
    const int m = static_cast<int>(v.active.size());
    for (int s = 1; s <= std::min(d, m); ++s) {
      detail::for_each_subset(m, s, [&](const std::vector<int>& pick) {
        IndexSet rows;
        for (int j : pick) rows.push_back(v.active[j]);
        faces.insert(rows);
        return true;
      });
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : real.vertices) best = std::min(best, (v.point - x).norm());
  for (const auto& rows : faces) {
    Matrix sub(rows.size(), d);
    Vector rhs(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      sub.row(r) = A.row(rows[r]);
      rhs(r) = b(rows[r]);
    }
    const Vector y = x + sub.completeOrthogonalDecomposition().solve(rhs - sub * x);
    if ((sub * y - rhs).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) continue;
    if (inside(y)) best = std::min(best, (y - x).norm());
  }
  return best;
}

double hausdorff_polytopes(const PolytopeRealization& p, const PolytopeRealization& q, const Tolerances& tol) {
  double h = 0.0;
  for (const auto& v : p.vertices) h = std::max(h, point_distance(v.point, q, tol));
  for (const auto& v : q.vertices) h = std::max(h, point_distance(v.point, p, tol));
  return h;
}

namespace {

int affine_dimension(const std::vector<Vector>& pts) {
  if (pts.empty()) return -1;
  if (pts.size() == 1) return 0;
  const int d = static_cast<int>(pts[0].size());
  Matrix diff(pts.size() - 1, d);
  double scale = 1.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    diff.row(i - 1) = (pts[i] - pts[0]).transpose();
    scale = std::max(scale, pts[i].cwiseAbs().maxCoeff());
  }
  Eigen::JacobiSVD<Matrix> svd(diff);
  const Vector s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > 1e-7 * scale) ++rank;
  }
  return rank;
}

}  // namespace

int facet_dimension(const PolytopeRealization& real, int k) {
  if (k < 0 || k >= static_cast<int>(real.facet_active.size())) {
    throw Error(ErrorCode::InvalidArgument, "facet index out of range");
  }
  std::vector<Vector> pts;
  for (int v : real.facet_active[k]) pts.push_back(real.vertices[v].point);
  return affine_dimension(pts);
}

int polytope_dimension(const PolytopeRealization& real) {
  std::vector<Vector> pts;
  for (const auto& v : real.vertices) pts.push_back(v.point);
  return affine_dimension(pts);
}

DegeneracyReport diagnose_boundary(const Vector& b, const CompiledCone& cone, const Tolerances& tol) {
  const CoordinateVector cv = classify(b, cone, tol, /*include_pruned=*/true);
  if (cv.classification == Classification::Exterior) {
    throw Error(ErrorCode::ExteriorCoordinates, "b is not in C_A");
  }
  DegeneracyReport report;
  std::set<int> facets;
  for (int j : cv.active_columns) {
    const DualVertex& v = cone.columns[j].provenance;
    if (v.target.is_diamond()) {
      report.flat = true;
      report.flat_witnesses.push_back({j, v});
    } else {
      facets.insert(v.target.k);
      report.facet_witnesses.push_back({j, v});
    }
  }
  report.degenerate_facets.assign(facets.begin(), facets.end());

  const PolytopeRealization real = realize_polytope(b, cone.normals.rows, tol);
  const int d = cone.normals.dimension();
  const bool geometric_flat = polytope_dimension(real) <= d - 1;
  bool ok = geometric_flat == report.flat;
  for (int k = 0; k < cone.normals.size(); ++k) {
    const bool low = facet_dimension(real, k) <= d - 2;
    const bool flagged = facets.count(k) > 0;
    if (flagged && !low) ok = false;
    if (!report.flat && low && !flagged) ok = false;
  }
  report.geometry_consistent = ok;
  return report;
}

}  // namespace polygal
