#include "polygal/bodies.hpp"

#include <algorithm>

#include "polygal/sphere.hpp"

namespace polygal {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double support_raw(const Body& body, const Vector& u, const Tolerances& tol) {
  return std::visit(
      overloaded{
          [&](const PointHull& h) { return (h.points * u).maxCoeff(); },
          [&](const Ball& b) { return b.center.dot(u) + b.radius * u.norm(); },
          [&](const HalfspacePolytope& h) {
            const LpOutcome out = solve_lp({u, h.A, h.b}, tol);
            if (out.status == LpStatus::Unbounded) throw Error(ErrorCode::UnboundedBody, "halfspace body is unbounded");
            if (out.status == LpStatus::Infeasible) throw Error(ErrorCode::EmptyPolytope, "halfspace body is empty");
            return out.value;
          },
          [&](const MinkowskiSum& s) {
            double v = 0.0;
            for (const auto& part : s.parts) v += support_raw(part, u, tol);
            return v;
          },
          [&](const Scaled& s) { return s.factor * support_raw(*s.inner, u, tol); },
      },
      body.node);
}

}  // namespace

Body Body::point_hull(Matrix points) {
  if (points.rows() < 1) throw Error(ErrorCode::InvalidArgument, "point hull needs at least one point");
  if (!points.allFinite()) throw Error(ErrorCode::InvalidArgument, "points must be finite");
  return {PointHull{std::move(points)}};
}

Body Body::ball(Vector center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidArgument, "ball radius must be >= 0");
  return {Ball{std::move(center), radius}};
}

Body Body::halfspace(Matrix A, Vector b) {
  if (A.rows() != b.size()) throw Error(ErrorCode::InvalidArgument, "halfspace rhs length mismatch");
  return {HalfspacePolytope{std::move(A), std::move(b)}};
}

Body Body::sum(std::vector<Body> parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "Minkowski sum needs at least one part");
  const int d = parts.front().dimension();
  for (const auto& p : parts) {
    if (p.dimension() != d) throw Error(ErrorCode::InvalidArgument, "Minkowski sum parts differ in dimension");
  }
  return {MinkowskiSum{std::move(parts)}};
}

Body Body::scaled(double factor, Body inner) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) throw Error(ErrorCode::InvalidArgument, "scale factor must be >= 0");
  return {Scaled{factor, std::make_shared<const Body>(std::move(inner))}};
}

int Body::dimension() const {
  return std::visit(overloaded{
                        [](const PointHull& h) { return static_cast<int>(h.points.cols()); },
                        [](const Ball& b) { return static_cast<int>(b.center.size()); },
                        [](const HalfspacePolytope& h) { return static_cast<int>(h.A.cols()); },
                        [](const MinkowskiSum& s) { return s.parts.front().dimension(); },
                        [](const Scaled& s) { return s.inner->dimension(); },
                    },
                    node);
}

double support(const Body& body, const Vector& u, const Tolerances& tol) {
  if (u.size() != body.dimension()) throw Error(ErrorCode::InvalidArgument, "direction has wrong dimension");
  if (std::abs(u.norm() - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "direction must be a unit vector");
  return support_raw(body, u, tol);
}

double body_norm(const Body& body, const Tolerances& tol) {
  return std::visit(
      overloaded{
          [](const PointHull& h) { return h.points.rowwise().norm().maxCoeff(); },
          [](const Ball& b) { return b.center.norm() + b.radius; },
          [&](const HalfspacePolytope& h) {
            if (!recession_cone_trivial(h.A, tol)) throw Error(ErrorCode::UnboundedBody, "halfspace body is unbounded");
            const auto verts = enumerate_primal_vertices(h.A, h.b, tol, {VertexStrategy::Auto, false});
            if (verts.empty()) throw Error(ErrorCode::EmptyPolytope, "halfspace body is empty");
            double m = 0.0;
            for (const auto& v : verts) m = std::max(m, v.point.norm());
            return m;
          },
          [&](const MinkowskiSum& s) {
            double m = 0.0;
            for (const auto& part : s.parts) m += body_norm(part, tol);
            return m;
          },
          [&](const Scaled& s) { return s.factor * body_norm(*s.inner, tol); },
      },
      body.node);
}

NormBounds body_norm_bounds(const Body& body, int samples, const Tolerances& tol) {
  NormBounds nb;
  nb.upper = body_norm(body, tol);
  const SphereSample s = sample_sphere(body.dimension(), samples);
  for (int i = 0; i < s.directions.rows(); ++i) {
    nb.lower = std::max(nb.lower, support_raw(body, s.directions.row(i).transpose(), tol));
  }
  nb.lower = std::min(nb.lower, nb.upper);
  return nb;
}

ProjectionResult project_coords(const Body& body, const NormalSystem& ns, const Tolerances& tol) {
  if (body.dimension() != ns.dimension()) throw Error(ErrorCode::InvalidArgument, "body and normals differ in dimension");
  ProjectionResult r;
  r.coords.b.resize(ns.size());
  for (int i = 0; i < ns.size(); ++i) r.coords.b(i) = support_raw(body, ns.rows.row(i).transpose(), tol);
  r.body_norm = body_norm(body, tol);
  return r;
}

ProjectionResult project_coords(const Body& body, const CompiledCone& cone, const Tolerances& tol) {
  ProjectionResult r = project_coords(body, cone.normals, tol);
  r.coords = classify(r.coords.b, cone, tol);
  r.realization = realize_polytope(r.coords.b, cone.normals.rows, tol);
  return r;
}

ProjectionResult project_interior(const Body& body, const CompiledCone& cone, double lambda, const Tolerances& tol) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0, 1)");
  ProjectionResult r = project_coords(body, cone.normals, tol);
  if (r.body_norm <= 0.0) throw Error(ErrorCode::DegenerateBody, "||C||_2 = 0; the shift stays at the cone apex");
  const Vector shifted = (1.0 - lambda) * r.coords.b + lambda * r.body_norm * Vector::Ones(cone.normals.size());
  r.coords = classify(shifted, cone, tol);
  r.realization = realize_polytope(shifted, cone.normals.rows, tol);
  return r;
}

HausdorffInterval hausdorff_body_vs_polytope(const Body& body, const PolytopeRealization& real, int samples,
                                             std::uint64_t seed, const Tolerances& tol) {
  if (real.vertices.empty()) throw Error(ErrorCode::EmptyPolytope, "realization has no vertices");
  const SphereSample s = sample_sphere(real.dimension(), samples, seed);
  const Matrix V = real.vertex_matrix();
  HausdorffInterval h;
  for (int i = 0; i < s.directions.rows(); ++i) {
    const Vector u = s.directions.row(i).transpose();
    const double gap = std::abs(support_raw(body, u, tol) - (V * u).maxCoeff());
    h.lower = std::max(h.lower, gap);
  }
  const double radius = std::max(body_norm(body, tol), V.rowwise().norm().maxCoeff());
  h.mesh = s.mesh;
  h.upper = h.lower + 2.0 * radius * s.mesh;
  h.certified = s.certified;
  return h;
}

Body body_from_realization(const PolytopeRealization& real) {
  if (real.vertices.empty()) throw Error(ErrorCode::EmptyPolytope, "realization has no vertices");
  return Body::point_hull(real.vertex_matrix());
}

}  // namespace polygal
