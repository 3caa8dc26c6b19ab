#include "polygal/dual_geometry.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "polygal/lp.hpp"
#include "subsets.hpp"

namespace polygal {

NormalSystem validate_normals(const Matrix& raw, const Tolerances& tol) {
  if (raw.cols() < 2) throw Error(ErrorCode::BadDimension, "dimension must be at least 2");
  if (raw.rows() < 1) throw Error(ErrorCode::BadDimension, "normal system has no rows");
  if (!raw.allFinite()) throw Error(ErrorCode::InvalidArgument, "normals must be finite");
  NormalSystem ns;
  ns.rows = raw;
  for (int i = 0; i < raw.rows(); ++i) {
    const double n = raw.row(i).norm();
    if (n <= 1e-300) throw Error(ErrorCode::ZeroRow, "row " + std::to_string(i) + " is zero");
    if (std::abs(n - 1.0) > 1e-12) {
      ns.rows.row(i) /= n;
      ns.normalized_input = true;
    }
  }
  for (int i = 0; i < raw.rows(); ++i) {
    for (int j = i + 1; j < raw.rows(); ++j) {
      if ((ns.rows.row(i) - ns.rows.row(j)).cwiseAbs().maxCoeff() <= 1e-9 * tol.scale) {
        throw Error(ErrorCode::DuplicateRow,
                    "rows " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
  return ns;
}

bool check_bounded(const NormalSystem& ns, const Tolerances& tol) {
  return recession_cone_trivial(ns.rows, tol);
}

namespace {

// Unique solution of M w = rhs with w > 0 on every coordinate, if the
// columns of M are independent and one exists.
bool positive_solution(const Matrix& M, const Vector& rhs, const Tolerances& tol, Vector& w) {
  Eigen::ColPivHouseholderQR<Matrix> qr(M);
  qr.setThreshold(tol.rank_tol() * 10.0);
  if (qr.rank() < M.cols()) return false;
  w = qr.solve(rhs);
  if ((M * w - rhs).cwiseAbs().maxCoeff() > 1e-9 * tol.scale * (1.0 + rhs.cwiseAbs().maxCoeff())) return false;
  return w.minCoeff() > tol.feasibility * tol.scale;
}

// Runs job(first) for first = 0..n-1 over `threads` workers and returns
// the concatenated per-call results in an unspecified order.
template <typename Job>
std::vector<DualVertex> parallel_over_first(int n, int threads, Job job) {
  if (threads <= 1 || n < 2) {
    std::vector<DualVertex> out;
    for (int i = 0; i < n; ++i) job(i, out);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::vector<DualVertex>> parts(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = next++; i < n; i = next++) job(i, parts[t]);
    });
  }
  for (auto& th : pool) th.join();
  std::vector<DualVertex> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

void sort_by_support(std::vector<DualVertex>& v) {
  std::sort(v.begin(), v.end(), [](const DualVertex& l, const DualVertex& r) { return l.support < r.support; });
}

Vector scatter(int n, const IndexSet& support, const Vector& w) {
  Vector p = Vector::Zero(n);
  for (std::size_t j = 0; j < support.size(); ++j) p(support[j]) = w(j);
  return p;
}

}  // namespace

std::vector<DualVertex> extreme_points_diamond(const NormalSystem& ns, const Tolerances& tol,
                                               const EnumerationOptions& options) {
  const int n = ns.size();
  const int d = ns.dimension();
  Vector rhs = Vector::Zero(d + 1);
  rhs(d) = 1.0;
  auto job = [&](int first, std::vector<DualVertex>& out) {
    IndexSet support;
    Vector w;
    for (int s = 2; s <= d + 1; ++s) {
      detail::for_each_subset(n - first - 1, s - 1, [&](const std::vector<int>& rest) {
        support.assign(1, first);
        for (int r : rest) support.push_back(first + 1 + r);
        Matrix M(d + 1, s);
        for (int j = 0; j < s; ++j) {
          M.block(0, j, d, 1) = ns.rows.row(support[j]).transpose();
          M(d, j) = 1.0;
        }
        if (positive_solution(M, rhs, tol, w)) {
          out.push_back({scatter(n, support, w), support, DualTarget::diamond()});
        }
        return true;
      });
    }
  };
  auto out = parallel_over_first(n, options.threads, job);
  sort_by_support(out);
  return out;
}

std::vector<DualVertex> extreme_points_touching(const NormalSystem& ns, int k, const Tolerances& tol,
                                                const EnumerationOptions& options) {
  const int n = ns.size();
  const int d = ns.dimension();
  if (k < 0 || k >= n) throw Error(ErrorCode::InvalidArgument, "touching index out of range");
  const Vector rhs = ns.rows.row(k).transpose();
  // indices other than k, relabelled 0..n-2
  auto label = [k](int i) { return i < k ? i : i + 1; };
  auto job = [&](int first, std::vector<DualVertex>& out) {
    IndexSet support;
    Vector w;
    for (int s = 1; s <= d; ++s) {
      detail::for_each_subset(n - 1 - first - 1, s - 1, [&](const std::vector<int>& rest) {
        support.assign(1, label(first));
        for (int r : rest) support.push_back(label(first + 1 + r));
        Matrix M(d, s);
        for (int j = 0; j < s; ++j) M.col(j) = ns.rows.row(support[j]).transpose();
        if (positive_solution(M, rhs, tol, w)) {
          out.push_back({scatter(n, support, w), support, DualTarget::touching(k)});
        }
        return true;
      });
    }
  };
  auto out = parallel_over_first(n - 1, options.threads, job);
  sort_by_support(out);
  return out;
}

int CompiledCone::diamond_count() const {
  return static_cast<int>(std::count_if(columns.begin(), columns.end(),
                                        [](const ConeColumn& c) { return c.provenance.target.is_diamond(); }));
}

int CompiledCone::touching_count() const { return static_cast<int>(columns.size()) - diamond_count(); }

int CompiledCone::pruned_count() const {
  return static_cast<int>(std::count_if(columns.begin(), columns.end(), [](const ConeColumn& c) { return c.pruned; }));
}

Matrix CompiledCone::matrix(bool include_pruned, bool include_diamond) const {
  std::vector<int> picked;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].pruned && !include_pruned) continue;
    if (columns[j].provenance.target.is_diamond() && !include_diamond) continue;
    picked.push_back(static_cast<int>(j));
  }
  Matrix F(normals.size(), picked.size());
  for (std::size_t j = 0; j < picked.size(); ++j) F.col(j) = columns[picked[j]].vector;
  return F;
}

CompiledCone compile_cone(const NormalSystem& ns, const Tolerances& tol, const CompileOptions& options) {
  const int n = ns.size();
  const int d = ns.dimension();
  if (!options.allow_large) {
    const bool too_large = (d == 2 && n > 512) || (d == 3 && n > 64) ||
                           (d >= 4 && detail::binomial(n, d + 1) > 1e7);
    if (too_large) {
      throw Error(ErrorCode::ComplexityLimit,
                  "N=" + std::to_string(n) + " in d=" + std::to_string(d) + " exceeds the enumeration guard");
    }
  }
  if (!check_bounded(ns, tol)) throw Error(ErrorCode::UnboundedSpace, "Q_{A,0} != {0}; G_A contains unbounded sets");

  CompiledCone cone;
  cone.normals = ns;
  const EnumerationOptions eo{options.threads};
  for (auto& v : extreme_points_diamond(ns, tol, eo)) {
    Vector col = v.p;
    cone.columns.push_back({col, std::move(v), false});
  }
  for (int k = 0; k < n; ++k) {
    for (auto& v : extreme_points_touching(ns, k, tol, eo)) {
      Vector col = v.p;
      col(k) -= 1.0;
      cone.columns.push_back({col, std::move(v), false});
    }
  }
  return cone;
}

std::optional<Vector> nonnegative_combination(const Matrix& G, const Vector& target, const Tolerances& tol) {
  Eigen::ColPivHouseholderQR<Matrix> qr(G);
  const Vector w = qr.solve(target);
  if ((G * w - target).cwiseAbs().maxCoeff() > 1e-9 * tol.scale * (1.0 + target.cwiseAbs().maxCoeff())) {
    return std::nullopt;
  }
  if (w.size() > 0 && w.minCoeff() < -1e-9 * tol.scale) return std::nullopt;
  return w;
}

CompiledCone prune_redundant(const CompiledCone& cone, const Tolerances& tol) {
  CompiledCone out = cone;
  const Matrix& A = cone.normals.rows;
  auto generators = [&](const IndexSet& support) {
    Matrix G(A.cols(), support.size());
    for (std::size_t j = 0; j < support.size(); ++j) G.col(j) = A.row(support[j]).transpose();
    return G;
  };
  // cone(I_p) ⊂ cone(I_q)
  auto contained = [&](const IndexSet& p, const IndexSet& q) {
    const Matrix G = generators(q);
    for (int i : p) {
      if (!nonnegative_combination(G, A.row(i).transpose(), tol)) return false;
    }
    return true;
  };

  std::vector<std::vector<int>> by_k(cone.normals.size());
  for (std::size_t j = 0; j < cone.columns.size(); ++j) {
    const auto& t = cone.columns[j].provenance.target;
    if (!t.is_diamond()) by_k[t.k].push_back(static_cast<int>(j));
  }
  for (const auto& group : by_k) {
    for (int big : group) {
      const IndexSet& q = cone.columns[big].provenance.support;
      for (int small : group) {
        const IndexSet& p = cone.columns[small].provenance.support;
        if (small == big || p == q) continue;
        if (contained(p, q)) {
          out.columns[big].pruned = true;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace polygal
