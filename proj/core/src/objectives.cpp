#include <algorithm>
#include <limits>
#include <numbers>

#include "objective_terms.hpp"

namespace polygal {

ObjectiveSpec ObjectiveSpec::neg_volume() { return {}; }

ObjectiveSpec ObjectiveSpec::linear_support(Vector weights) {
  ObjectiveSpec s;
  s.kind = Kind::LinearSupport;
  s.weights = std::move(weights);
  return s;
}

ObjectiveSpec ObjectiveSpec::linear_support(Quadrature rule) {
  ObjectiveSpec s;
  s.kind = Kind::LinearSupport;
  s.quadrature = rule;
  return s;
}

ObjectiveSpec ObjectiveSpec::target_tracking(Vector target) {
  ObjectiveSpec s;
  s.kind = Kind::TargetTracking;
  s.target_b = std::move(target);
  return s;
}

ObjectiveSpec ObjectiveSpec::target_tracking(Body target) {
  ObjectiveSpec s;
  s.kind = Kind::TargetTracking;
  s.target_body = std::move(target);
  return s;
}

std::string_view to_string(ObjectiveSpec::Kind kind) {
  switch (kind) {
    case ObjectiveSpec::Kind::NegVolume: return "neg_volume";
    case ObjectiveSpec::Kind::LinearSupport: return "linear_support";
    case ObjectiveSpec::Kind::TargetTracking: return "target_tracking";
  }
  return "unknown";
}

std::string_view to_string(ConstraintSpec::Kind kind) {
  switch (kind) {
    case ConstraintSpec::Kind::PerimeterLe: return "perimeter_le";
    case ConstraintSpec::Kind::SupportBox: return "support_box";
    case ConstraintSpec::Kind::LinearSupportLe: return "linear_support_le";
  }
  return "unknown";
}

Vector quadrature_weights(ObjectiveSpec::Quadrature rule, const NormalSystem& ns) {
  const int n = ns.size();
  const int d = ns.dimension();
  if (rule == ObjectiveSpec::Quadrature::Uniform) {
    double area = 0.0;
    if (d == 2) area = 2.0 * std::numbers::pi;
    else if (d == 3) area = 4.0 * std::numbers::pi;
    else area = 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
    return Vector::Constant(n, area / n);
  }
  if (rule == ObjectiveSpec::Quadrature::Arc) {
    if (d != 2) throw Error(ErrorCode::InvalidArgument, "arc quadrature needs d = 2");
    std::vector<std::pair<double, int>> ang;
    for (int i = 0; i < n; ++i) {
      double a = std::atan2(ns.rows(i, 1), ns.rows(i, 0));
      if (a < 0) a += 2.0 * std::numbers::pi;
      ang.emplace_back(a, i);
    }
    std::sort(ang.begin(), ang.end());
    Vector w = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
      const double next = j + 1 < n ? ang[j + 1].first : ang[0].first + 2.0 * std::numbers::pi;
      const double gap = next - ang[j].first;
      w(ang[j].second) += gap / 2.0;
      w(ang[(j + 1) % n].second) += gap / 2.0;
    }
    return w;
  }
  throw Error(ErrorCode::InvalidArgument, "explicit weights are not a quadrature rule");
}

ConstraintSpec ConstraintSpec::perimeter_le(double limit) {
  ConstraintSpec c;
  c.kind = Kind::PerimeterLe;
  c.limit = limit;
  c.lipschitz_L = 2.0 * std::numbers::pi;
  return c;
}

ConstraintSpec ConstraintSpec::support_box(Matrix directions, Vector limits) {
  if (directions.rows() != limits.size()) throw Error(ErrorCode::InvalidArgument, "support_box needs one limit per direction");
  for (int i = 0; i < directions.rows(); ++i) {
    if (std::abs(directions.row(i).norm() - 1.0) > 1e-9) {
      throw Error(ErrorCode::InvalidArgument, "support_box directions must be unit vectors");
    }
  }
  ConstraintSpec c;
  c.kind = Kind::SupportBox;
  c.directions = std::move(directions);
  c.limits = std::move(limits);
  c.lipschitz_L = 1.0;
  return c;
}

ConstraintSpec ConstraintSpec::linear_support_le(Vector weights, double limit) {
  ConstraintSpec c;
  c.kind = Kind::LinearSupportLe;
  c.lipschitz_L = weights.cwiseAbs().sum();
  c.weights = std::move(weights);
  c.limit = limit;
  return c;
}

int ConstraintSpec::count() const { return kind == Kind::SupportBox ? static_cast<int>(limits.size()) : 1; }

namespace {

// Vertices of a planar point set in counter-clockwise order around the centroid.
std::vector<Eigen::Vector2d> ccw(std::vector<Eigen::Vector2d> pts) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return std::atan2(a.y() - c.y(), a.x() - c.x()) < std::atan2(b.y() - c.y(), b.x() - c.x());
  });
  return pts;
}

double shoelace(const std::vector<Eigen::Vector2d>& pts) {
  if (pts.size() < 3) return 0.0;
  const auto poly = ccw(pts);
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return std::abs(a) / 2.0;
}

void require_volume_dimension(int d) {
  if (d != 2 && d != 3) throw Error(ErrorCode::InvalidArgument, "volumes are available for d = 2 and d = 3 only");
}

}  // namespace

double facet_measure(const PolytopeRealization& real, int k) {
  const int d = real.dimension();
  require_volume_dimension(d);
  const auto& idx = real.facet_active.at(k);
  if (idx.size() < static_cast<std::size_t>(d)) return 0.0;
  if (d == 2) {
    double len = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        len = std::max(len, (real.vertices[idx[i]].point - real.vertices[idx[j]].point).norm());
      }
    }
    return len;
  }
  const Eigen::Vector3d n = real.normals.row(k).transpose();
  Eigen::Vector3d helper = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d u = n.cross(helper).normalized();
  const Eigen::Vector3d v = n.cross(u);
  std::vector<Eigen::Vector2d> pts;
  for (int i : idx) {
    const Eigen::Vector3d p = real.vertices[i].point;
    pts.emplace_back(p.dot(u), p.dot(v));
  }
  return shoelace(pts);
}

double polytope_volume(const PolytopeRealization& real) {
  const int d = real.dimension();
  require_volume_dimension(d);
  if (real.vertices.empty()) return 0.0;
  if (d == 2) {
    std::vector<Eigen::Vector2d> pts;
    for (const auto& v : real.vertices) pts.emplace_back(v.point(0), v.point(1));
    return shoelace(pts);
  }
  double vol = 0.0;
  for (int k = 0; k < real.normals.rows(); ++k) vol += real.source_b(k) * facet_measure(real, k);
  return std::max(0.0, vol / 3.0);
}

double polytope_perimeter(const PolytopeRealization& real) {
  if (real.dimension() != 2) throw Error(ErrorCode::InvalidArgument, "perimeter is defined for d = 2");
  double p = 0.0;
  for (int k = 0; k < real.normals.rows(); ++k) p += facet_measure(real, k);
  return p;
}

namespace detail {

Vector volume_gradient(const PolytopeRealization& real) {
  Vector g(real.normals.rows());
  for (int k = 0; k < g.size(); ++k) g(k) = facet_measure(real, k);
  return g;
}

namespace {

// dv/db for a simple vertex, as a d x N matrix (nonzero only on active rows).
std::optional<Matrix> vertex_jacobian(const PolytopeRealization& real, const PrimalVertex& v) {
  const int d = real.dimension();
  if (static_cast<int>(v.active.size()) != d) return std::nullopt;
  Matrix M(d, d);
  for (int r = 0; r < d; ++r) M.row(r) = real.normals.row(v.active[r]);
  Eigen::FullPivLU<Matrix> lu(M);
  if (!lu.isInvertible()) return std::nullopt;
  const Matrix inv = lu.inverse();
  Matrix J = Matrix::Zero(d, real.normals.rows());
  for (int r = 0; r < d; ++r) J.col(v.active[r]) = inv.col(r);
  return J;
}

}  // namespace

std::optional<Matrix> facet_length_jacobian(const PolytopeRealization& real) {
  if (real.dimension() != 2) return std::nullopt;
  const int n = static_cast<int>(real.normals.rows());
  std::vector<Matrix> jac;
  for (const auto& v : real.vertices) {
    auto J = vertex_jacobian(real, v);
    if (!J) return std::nullopt;
    jac.push_back(std::move(*J));
  }
  Matrix L = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const auto& idx = real.facet_active[k];
    if (idx.size() != 2) return std::nullopt;
    const Vector diff = real.vertices[idx[0]].point - real.vertices[idx[1]].point;
    const double len = diff.norm();
    if (len <= 1e-12) return std::nullopt;
    L.row(k) = ((jac[idx[0]] - jac[idx[1]]).transpose() * diff).transpose() / len;
  }
  return L;
}

std::optional<Vector> perimeter_gradient(const PolytopeRealization& real) {
  const auto L = facet_length_jacobian(real);
  if (!L) return std::nullopt;
  return Vector(L->colwise().sum().transpose());
}

std::optional<Vector> support_gradient(const PolytopeRealization& real, const Vector& u) {
  int best = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  double runner_up = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < real.vertices.size(); ++i) {
    const double v = u.dot(real.vertices[i].point);
    if (v > best_val) {
      runner_up = best_val;
      best_val = v;
      best = static_cast<int>(i);
    } else if (v > runner_up) {
      runner_up = v;
    }
  }
  if (best < 0 || best_val - runner_up <= 1e-9 * (1.0 + std::abs(best_val))) return std::nullopt;
  const auto J = vertex_jacobian(real, real.vertices[best]);
  if (!J) return std::nullopt;
  return Vector(J->transpose() * u);
}

int normal_index(const NormalSystem& ns, const Vector& u) {
  for (int i = 0; i < ns.size(); ++i) {
    if ((ns.rows.row(i).transpose() - u).cwiseAbs().maxCoeff() <= 1e-12) return i;
  }
  return -1;
}

}  // namespace detail

Vector evaluate_constraint(const ConstraintSpec& spec, const Vector& b, const PolytopeRealization& real,
                           const NormalSystem& ns) {
  switch (spec.kind) {
    case ConstraintSpec::Kind::PerimeterLe:
      return Vector::Constant(1, polytope_perimeter(real) - spec.limit);
    case ConstraintSpec::Kind::LinearSupportLe:
      if (spec.weights.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "constraint weights have wrong length");
      return Vector::Constant(1, spec.weights.dot(b) - spec.limit);
    case ConstraintSpec::Kind::SupportBox: {
      Vector out(spec.limits.size());
      for (int j = 0; j < out.size(); ++j) {
        const Vector u = spec.directions.row(j).transpose();
        const int row = detail::normal_index(ns, u);
        const double sigma = row >= 0 ? b(row) : (real.vertex_matrix() * u).maxCoeff();
        out(j) = sigma - spec.limits(j);
      }
      return out;
    }
  }
  return {};
}

ShiftedConstraint tighten_constraints(const ConstraintSpec& spec, double kappa, double outer_norm) {
  if (kappa < 0.0) throw Error(ErrorCode::InvalidArgument, "kappa must be nonnegative");
  if (outer_norm < 0.0) throw Error(ErrorCode::InvalidArgument, "outer norm must be nonnegative");
  return {spec, spec.lipschitz_L * kappa * outer_norm};
}

Vector ShiftedConstraint::evaluate(const Vector& b, const PolytopeRealization& real, const NormalSystem& ns) const {
  return evaluate_constraint(spec, b, real, ns).array() - shift;
}

double evaluate_objective(const ObjectiveSpec& spec, const Vector& b, const PolytopeRealization& real) {
  for (const auto& f : real.facet_active) {
    if (f.empty()) throw Error(ErrorCode::ExteriorCoordinates, "some facet is not attained; b is not in C_A");
  }
  double v = 0.0;
  switch (spec.kind) {
    case ObjectiveSpec::Kind::NegVolume:
      v = -polytope_volume(real);
      break;
    case ObjectiveSpec::Kind::LinearSupport:
      if (spec.weights.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "objective weights have wrong length");
      v = spec.weights.dot(b);
      break;
    case ObjectiveSpec::Kind::TargetTracking:
      if (spec.target_b.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "target coordinates have wrong length");
      v = (b - spec.target_b).cwiseAbs().maxCoeff();
      break;
  }
  return spec.maximize ? -v : v;
}

ObjectiveSpec resolve_objective(const ObjectiveSpec& spec, const NormalSystem& ns, const Tolerances& tol) {
  ObjectiveSpec out = spec;
  if (spec.kind == ObjectiveSpec::Kind::LinearSupport && spec.quadrature != ObjectiveSpec::Quadrature::Explicit) {
    out.weights = quadrature_weights(spec.quadrature, ns);
  }
  if (spec.kind == ObjectiveSpec::Kind::TargetTracking && spec.target_body) {
    out.target_b = project_coords(*spec.target_body, ns, tol).coords.b;
  }
  if (spec.kind == ObjectiveSpec::Kind::NegVolume && ns.dimension() != 2 && ns.dimension() != 3) {
    throw Error(ErrorCode::InvalidArgument, "neg_volume needs d = 2 or d = 3");
  }
  return out;
}

}  // namespace polygal
