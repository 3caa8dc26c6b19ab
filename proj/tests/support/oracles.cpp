#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace oracle {

Matrix regular_normals(int n, double offset) {
  Matrix A(n, 2);
  for (int k = 0; k < n; ++k) {
    const double t = offset + 2.0 * std::numbers::pi * k / n;
    A(k, 0) = std::cos(t);
    A(k, 1) = std::sin(t);
  }
  return A;
}

Matrix square_normals() {
  Matrix A(4, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1;
  return A;
}

Matrix hexagon_normals() { return regular_normals(6); }
Matrix octagon_normals() { return regular_normals(8); }

std::vector<Point> polygon_vertices(const Matrix& A, const Vector& b, double tol) {
  std::vector<Point> out;
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double det = A(i, 0) * A(j, 1) - A(i, 1) * A(j, 0);
      if (std::abs(det) < 1e-12) continue;
      const Point x((b(i) * A(j, 1) - A(i, 1) * b(j)) / det, (A(i, 0) * b(j) - b(i) * A(j, 0)) / det);
      bool ok = true;
      for (int r = 0; r < n && ok; ++r) ok = A.row(r).dot(x) <= b(r) + tol * (1.0 + std::abs(b(r)));
      if (!ok) continue;
      const bool dup = std::any_of(out.begin(), out.end(), [&](const Point& y) { return (x - y).cwiseAbs().maxCoeff() < 1e-8; });
      if (!dup) out.push_back(x);
    }
  }
  return out;
}

bool in_coordinate_cone(const Matrix& A, const Vector& b, double tol) {
  const auto v = polygon_vertices(A, b, tol);
  if (v.empty()) return false;
  for (int i = 0; i < A.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& x : v) best = std::max(best, A.row(i).dot(x));
    if (std::abs(best - b(i)) > tol * (1.0 + std::abs(b(i)))) return false;
  }
  return true;
}

double polygon_support(const Matrix& A, const Vector& b, const Point& u, double tol) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : polygon_vertices(A, b, tol)) best = std::max(best, u.dot(x));
  return best;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return (a - b).norm() < 1e-12; }), pts.end());
  if (pts.size() < 3) return pts;
  const auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 1e-14) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double hull_area(const std::vector<Point>& pts) {
  const auto h = convex_hull(pts);
  double a = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Point& p = h[i];
    const Point& q = h[(i + 1) % h.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

double hull_perimeter(const std::vector<Point>& pts) {
  const auto h = convex_hull(pts);
  if (h.size() == 2) return 2.0 * (h[0] - h[1]).norm();
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) s += (h[i] - h[(i + 1) % h.size()]).norm();
  return s;
}

namespace {

double segment_distance(const Point& x, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0 ? std::clamp((x - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (x - (a + t * ab)).norm();
}

}  // namespace

double hull_distance(const Point& x, const std::vector<Point>& pts) {
  const auto h = convex_hull(pts);
  if (h.size() == 1) return (x - h[0]).norm();
  if (h.size() == 2) return segment_distance(x, h[0], h[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Point& a = h[i];
    const Point& b = h[(i + 1) % h.size()];
    const double side = (b.x() - a.x()) * (x.y() - a.y()) - (b.y() - a.y()) * (x.x() - a.x());
    if (side < 0) inside = false;
    best = std::min(best, segment_distance(x, a, b));
  }
  return inside ? 0.0 : best;
}

double hull_hausdorff(const std::vector<Point>& p, const std::vector<Point>& q) {
  double h = 0.0;
  for (const auto& x : p) h = std::max(h, hull_distance(x, q));
  for (const auto& y : q) h = std::max(h, hull_distance(y, p));
  return h;
}

double sampled_support_gap(const std::function<double(const Point&)>& f, const std::function<double(const Point&)>& g,
                           int m) {
  double gap = 0.0;
  for (int j = 0; j < m; ++j) {
    const double t = 2.0 * std::numbers::pi * j / m;
    const Point u(std::cos(t), std::sin(t));
    gap = std::max(gap, std::abs(f(u) - g(u)));
  }
  return gap;
}

std::vector<DualPoint> planar_touching_vertices(const Matrix& A, int k, double tol) {
  std::vector<DualPoint> out;
  const int n = static_cast<int>(A.rows());
  const Point c = A.row(k).transpose();
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    // single generator: a_i parallel to c with positive factor
    const Point ai = A.row(i).transpose();
    if (std::abs(ai.x() * c.y() - ai.y() * c.x()) < 1e-12 && ai.dot(c) > 0) {
      Vector p = Vector::Zero(n);
      p(i) = ai.dot(c) / ai.squaredNorm();
      out.push_back({p, {i}});
    }
    for (int j = i + 1; j < n; ++j) {
      if (j == k) continue;
      Eigen::Matrix2d M;
      M.col(0) = A.row(i).transpose();
      M.col(1) = A.row(j).transpose();
      if (std::abs(M.determinant()) < 1e-12) continue;
      const Eigen::Vector2d w = M.inverse() * c;
      if (w.minCoeff() <= tol) continue;
      Vector p = Vector::Zero(n);
      p(i) = w(0);
      p(j) = w(1);
      out.push_back({p, {i, j}});
    }
  }
  return out;
}

std::vector<DualPoint> planar_diamond_vertices(const Matrix& A, double tol) {
  std::vector<DualPoint> out;
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // opposite pair
      const Point ai = A.row(i).transpose(), aj = A.row(j).transpose();
      if ((ai + aj).norm() < 1e-12) {
        Vector p = Vector::Zero(n);
        p(i) = p(j) = 0.5;
        out.push_back({p, {i, j}});
      }
      for (int l = j + 1; l < n; ++l) {
        Eigen::Matrix3d M;
        M << A(i, 0), A(j, 0), A(l, 0), A(i, 1), A(j, 1), A(l, 1), 1, 1, 1;
        if (std::abs(M.determinant()) < 1e-12) continue;
        const Eigen::Vector3d w = M.inverse() * Eigen::Vector3d(0, 0, 1);
        if (w.minCoeff() <= tol) continue;
        Vector p = Vector::Zero(n);
        p(i) = w(0);
        p(j) = w(1);
        p(l) = w(2);
        out.push_back({p, {i, j, l}});
      }
    }
  }
  return out;
}

std::vector<Point> random_disc_points(std::mt19937_64& rng, int count, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i) {
    const double r = radius * std::sqrt(u(rng));
    const double t = 2.0 * std::numbers::pi * u(rng);
    pts.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  return pts;
}

}  // namespace oracle
