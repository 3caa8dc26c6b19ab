#include "polygal/lp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "subsets.hpp"

namespace polygal {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Dense tableau for  max cost^T y  s.t.  S y = rhs, y >= 0, where the columns
// are [x+ (d) | x- (d) | slack (M) | artificial (one per negative-rhs row)].
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Tolerances& tol) : lp_(lp), tol_(tol) {
    const Matrix& A = lp.constraint_matrix;
    m_ = static_cast<int>(A.rows());
    d_ = static_cast<int>(A.cols());
    sign_.resize(m_);
    int n_art = 0;
    for (int i = 0; i < m_; ++i) {
      sign_[i] = lp.rhs(i) >= 0.0 ? 1.0 : -1.0;
      if (sign_[i] < 0) ++n_art;
    }
    first_slack_ = 2 * d_;
    first_art_ = first_slack_ + m_;
    n_cols_ = first_art_ + n_art;

    standard_ = Matrix::Zero(m_, n_cols_);
    rhs_.resize(m_);
    basis_.resize(m_);
    art_row_.assign(n_cols_, -1);
    int art = first_art_;
    for (int i = 0; i < m_; ++i) {
      standard_.block(i, 0, 1, d_) = sign_[i] * A.row(i);
      standard_.block(i, d_, 1, d_) = -sign_[i] * A.row(i);
      standard_(i, first_slack_ + i) = sign_[i];
      rhs_(i) = sign_[i] * lp.rhs(i);
      if (sign_[i] > 0) {
        basis_[i] = first_slack_ + i;
      } else {
        standard_(i, art) = 1.0;
        art_row_[art] = i;
        basis_[i] = art++;
      }
    }
    tableau_.resize(m_, n_cols_ + 1);
    tableau_.leftCols(n_cols_) = standard_;
    tableau_.col(n_cols_) = rhs_;
    max_iterations_ = 50 * (m_ + n_cols_) + 1000;
  }

  LpOutcome run() {
    LpOutcome out;
    const bool has_art = n_cols_ > first_art_;
    if (has_art) {
      Vector cost1 = Vector::Zero(n_cols_);
      cost1.tail(n_cols_ - first_art_).setConstant(-1.0);
      int entering = -1;
      iterate(cost1, /*allow_art=*/true, entering);
      const double phase1 = basic_value(cost1);
      if (phase1 < -tol_.feas(lp_.rhs.cwiseAbs().maxCoeff())) {
        out.status = LpStatus::Infeasible;
        out.iterations = iterations_;
        out.dual_certificate = farkas_from_basis(cost1);
        return out;
      }
      drive_out_artificials();
    }

    Vector cost2 = Vector::Zero(n_cols_);
    cost2.head(d_) = lp_.objective;
    cost2.segment(d_, d_) = -lp_.objective;
    int entering = -1;
    const bool bounded = iterate(cost2, /*allow_art=*/false, entering);
    out.iterations = iterations_;
    if (!bounded) {
      out.status = LpStatus::Unbounded;
      out.ray = ray_for(entering);
      return out;
    }
    out.status = LpStatus::Optimal;
    reinvert(cost2, out);
    return out;
  }

 private:
  double basic_value(const Vector& cost) const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) v += cost(basis_[i]) * tableau_(i, n_cols_);
    return v;
  }

  // Bland's rule. Returns false on an unbounded entering column.
  bool iterate(const Vector& cost, bool allow_art, int& unbounded_col) {
    const double rc_tol = tol_.scale * 1e-9 * (1.0 + cost.cwiseAbs().maxCoeff());
    const int limit = allow_art ? n_cols_ : first_art_;
    std::vector<char> is_basic(n_cols_, 0);
    for (int b : basis_) is_basic[b] = 1;
    while (true) {
      if (++iterations_ > max_iterations_) {
        throw Error(ErrorCode::NumericalFailure, "simplex iteration limit reached");
      }
      Eigen::RowVectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
      int entering = -1;
      for (int j = 0; j < limit; ++j) {
        if (is_basic[j]) continue;
        const double rc = cost(j) - cb.dot(tableau_.col(j));
        if (rc > rc_tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = tableau_(i, entering);
        if (a <= tol_.pivot_tol()) continue;
        const double ratio = std::max(tableau_(i, n_cols_), 0.0) / a;
        if (leave < 0 || ratio < best - 1e-12 * (1.0 + best)) {
          best = ratio;
          leave = i;
        } else if (std::abs(ratio - best) <= 1e-12 * (1.0 + best) && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave < 0) {
        unbounded_col = entering;
        return false;
      }
      is_basic[basis_[leave]] = 0;
      is_basic[entering] = 1;
      pivot(leave, entering);
    }
  }

  void pivot(int r, int c) {
    tableau_.row(r) /= tableau_(r, c);
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = tableau_(i, c);
      if (f != 0.0) tableau_.row(i) -= f * tableau_.row(r);
    }
    for (int j = 0; j <= n_cols_; ++j) {
      for (int i = 0; i < m_; ++i) {
        if (std::abs(tableau_(i, j)) < 1e-15) tableau_(i, j) = 0.0;
      }
    }
    tableau_(r, c) = 1.0;
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < first_art_) continue;
      int best = -1;
      double best_abs = tol_.pivot_tol();
      for (int j = 0; j < first_art_; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        if (std::abs(tableau_(i, j)) > best_abs) {
          best_abs = std::abs(tableau_(i, j));
          best = j;
        }
      }
      if (best >= 0) pivot(i, best);
      // otherwise the row is redundant and its artificial stays basic at zero
    }
  }

  Matrix basis_matrix() const {
    Matrix B(m_, m_);
    for (int i = 0; i < m_; ++i) B.col(i) = standard_.col(basis_[i]);
    return B;
  }

  // Recompute primal and dual values from the original data for the final
  // basis; the tableau itself has accumulated rounding.
  void reinvert(const Vector& cost, LpOutcome& out) const {
    const Eigen::FullPivLU<Matrix> lu(basis_matrix());
    const Vector xb = lu.solve(rhs_);
    Vector cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
    const Vector y = lu.transpose().solve(cb);

    Vector x = Vector::Zero(d_);
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j < d_) x(j) += xb(i);
      else if (j < 2 * d_) x(j - d_) -= xb(i);
    }
    Vector p(m_);
    for (int i = 0; i < m_; ++i) p(i) = std::max(0.0, sign_[i] * y(i));
    out.primal_point = x;
    out.value = lp_.objective.dot(x);
    out.dual_certificate = p;
  }

  Vector farkas_from_basis(const Vector& cost1) const {
    const Eigen::FullPivLU<Matrix> lu(basis_matrix());
    Vector cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = cost1(basis_[i]);
    const Vector y = lu.transpose().solve(cb);
    Vector p(m_);
    for (int i = 0; i < m_; ++i) p(i) = std::max(0.0, sign_[i] * y(i));
    return p;
  }

  Vector ray_for(int entering) const {
    Vector dir = Vector::Zero(n_cols_);
    dir(entering) = 1.0;
    for (int i = 0; i < m_; ++i) dir(basis_[i]) -= tableau_(i, entering);
    Vector ray = dir.head(d_) - dir.segment(d_, d_);
    const double n = ray.norm();
    if (n > 0) ray /= n;
    return ray;
  }

  const LinearProgram& lp_;
  const Tolerances& tol_;
  int m_ = 0, d_ = 0, n_cols_ = 0, first_slack_ = 0, first_art_ = 0;
  std::vector<double> sign_;
  Matrix standard_;
  Vector rhs_;
  Matrix tableau_;
  std::vector<int> basis_;
  std::vector<int> art_row_;
  int iterations_ = 0;
  int max_iterations_ = 0;
};

void check_shapes(const LinearProgram& lp) {
  const auto m = lp.constraint_matrix.rows();
  const auto d = lp.constraint_matrix.cols();
  if (m < 1 || d < 1) throw Error(ErrorCode::InvalidArgument, "LP needs M >= 1 rows and d >= 1 columns");
  if (lp.rhs.size() != m) throw Error(ErrorCode::InvalidArgument, "rhs length differs from row count");
  if (lp.objective.size() != d) throw Error(ErrorCode::InvalidArgument, "objective length differs from column count");
  if (!lp.constraint_matrix.allFinite() || !lp.rhs.allFinite() || !lp.objective.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "LP data must be finite");
  }
}

void verify(const LinearProgram& lp, const LpOutcome& out, const Tolerances& tol) {
  const Matrix& A = lp.constraint_matrix;
  const double cscale = 1.0 + lp.objective.cwiseAbs().maxCoeff();
  const double bscale = 1.0 + lp.rhs.cwiseAbs().maxCoeff();
  const double pscale =
      1.0 + (out.dual_certificate.size() > 0 ? out.dual_certificate.cwiseAbs().maxCoeff() : 0.0);
  if (out.status == LpStatus::Optimal) {
    const Vector slack = A * out.primal_point - lp.rhs;
    const double xscale = 1.0 + out.primal_point.cwiseAbs().maxCoeff();
    if (slack.maxCoeff() > 1e3 * tol.feas(bscale) * xscale) {
      throw Error(ErrorCode::NumericalFailure, "primal point violates constraints");
    }
    const double dual_res = (A.transpose() * out.dual_certificate - lp.objective).cwiseAbs().maxCoeff();
    if (dual_res > 1e-8 * tol.scale * cscale * pscale) {
      throw Error(ErrorCode::NumericalFailure, "dual certificate residual too large");
    }
    const double gap = std::abs(out.value - lp.rhs.dot(out.dual_certificate));
    if (gap > tol.duality_tol(out.value) * pscale * bscale) {
      throw Error(ErrorCode::NumericalFailure, "duality gap too large");
    }
  } else if (out.status == LpStatus::Infeasible) {
    const double res = (A.transpose() * out.dual_certificate).cwiseAbs().maxCoeff();
    if (res > 1e-9 * tol.scale * pscale || lp.rhs.dot(out.dual_certificate) >= 0.0) {
      throw Error(ErrorCode::NumericalFailure, "Farkas certificate failed verification");
    }
  } else {
    const double rscale = 1.0 + out.ray.cwiseAbs().maxCoeff();
    if ((A * out.ray).maxCoeff() > 1e-7 * tol.scale * rscale || lp.objective.dot(out.ray) <= 0.0) {
      throw Error(ErrorCode::NumericalFailure, "unbounded ray failed verification");
    }
  }
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const Tolerances& tol) {
  check_shapes(lp);
  Simplex simplex(lp, tol);
  LpOutcome out = simplex.run();
  verify(lp, out, tol);
  return out;
}

FarkasResult farkas_feasible(const Matrix& A, const Vector& b, const Tolerances& tol) {
  LinearProgram lp{Vector::Zero(A.cols()), A, b};
  const LpOutcome out = solve_lp(lp, tol);
  FarkasResult r;
  r.feasible = out.status != LpStatus::Infeasible;
  if (r.feasible) r.point = out.primal_point;
  else r.certificate = out.dual_certificate;
  return r;
}

IndexSet active_set(const Matrix& A, const Vector& b, const Vector& x, const Tolerances& tol) {
  IndexSet active;
  const Vector ax = A * x;
  for (int i = 0; i < A.rows(); ++i) {
    if (ax(i) >= b(i) - tol.feas(b(i))) active.push_back(i);
  }
  return active;
}

int row_rank(const Matrix& A, const IndexSet& rows, double threshold) {
  if (rows.empty()) return 0;
  Matrix sub(rows.size(), A.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) sub.row(r) = A.row(rows[r]);
  Eigen::FullPivLU<Matrix> lu(sub);
  lu.setThreshold(threshold);
  return static_cast<int>(lu.rank());
}

bool recession_cone_trivial(const Matrix& A, const Tolerances& tol) {
  const int d = static_cast<int>(A.cols());
  const Vector zero = Vector::Zero(A.rows());
  for (int j = 0; j < d; ++j) {
    for (double s : {1.0, -1.0}) {
      Vector c = Vector::Zero(d);
      c(j) = s;
      const LpOutcome out = solve_lp({c, A, zero}, tol);
      if (out.status != LpStatus::Optimal || out.value > tol.feas(0.0)) return false;
    }
  }
  return true;
}

namespace {

bool solve_square(const Matrix& A, const std::vector<int>& rows, const Vector& b, double rank_tol, Vector& x) {
  const int d = static_cast<int>(A.cols());
  if (d == 2) {
    const double a00 = A(rows[0], 0), a01 = A(rows[0], 1);
    const double a10 = A(rows[1], 0), a11 = A(rows[1], 1);
    const double det = a00 * a11 - a01 * a10;
    const double scale = A.row(rows[0]).norm() * A.row(rows[1]).norm();
    if (std::abs(det) <= rank_tol * scale) return false;
    x.resize(2);
    x(0) = (b(rows[0]) * a11 - a01 * b(rows[1])) / det;
    x(1) = (a00 * b(rows[1]) - b(rows[0]) * a10) / det;
    return true;
  }
  Matrix sub(d, d);
  Vector rhs(d);
  for (int r = 0; r < d; ++r) {
    sub.row(r) = A.row(rows[r]) / A.row(rows[r]).norm();
    rhs(r) = b(rows[r]) / A.row(rows[r]).norm();
  }
  Eigen::FullPivLU<Matrix> lu(sub);
  lu.setThreshold(rank_tol);
  if (lu.rank() < d) return false;
  x = lu.solve(rhs);
  return true;
}

void insert_dedup(std::vector<PrimalVertex>& out, const Vector& x, double radius) {
  for (const auto& v : out) {
    if ((v.point - x).cwiseAbs().maxCoeff() <= radius) return;
  }
  out.push_back({x, {}});
}

std::vector<PrimalVertex> exhaustive(const Matrix& A, const Vector& b, const Tolerances& tol) {
  const int n = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  std::vector<PrimalVertex> out;
  Vector x;
  detail::for_each_subset(n, d, [&](const std::vector<int>& rows) {
    if (!solve_square(A, rows, b, tol.rank_tol(), x)) return true;
    const Vector ax = A * x;
    for (int i = 0; i < n; ++i) {
      if (ax(i) > b(i) + tol.feas(b(i))) return true;
    }
    insert_dedup(out, x, tol.dedup());
    return true;
  });
  return out;
}

// Least-squares snap of a point onto the affine hull of its active rows.
Vector polish(const Matrix& A, const Vector& b, const IndexSet& active, const Vector& x) {
  Matrix sub(active.size(), A.cols());
  Vector rhs(active.size());
  for (std::size_t r = 0; r < active.size(); ++r) {
    sub.row(r) = A.row(active[r]);
    rhs(r) = b(active[r]);
  }
  const Vector corr = sub.completeOrthogonalDecomposition().solve(rhs - sub * x);
  return x + corr;
}

// Move x to a vertex while staying feasible: repeatedly follow a direction
// in the null space of the active rows until another row becomes active.
Vector purify(const Matrix& A, const Vector& b, Vector x, const Tolerances& tol) {
  const int d = static_cast<int>(A.cols());
  for (int guard = 0; guard <= d + 1; ++guard) {
    IndexSet active = active_set(A, b, x, tol);
    Matrix sub(active.size(), d);
    for (std::size_t r = 0; r < active.size(); ++r) sub.row(r) = A.row(active[r]);
    Eigen::FullPivLU<Matrix> lu(active.empty() ? Matrix::Zero(1, d) : sub);
    lu.setThreshold(tol.rank_tol());
    const Matrix kernel = lu.kernel();
    if (!active.empty() && lu.rank() == d) return polish(A, b, active, x);
    Vector dir = kernel.col(0);
    dir.normalize();
    for (double s : {1.0, -1.0}) {
      const Vector u = s * dir;
      double t_best = std::numeric_limits<double>::infinity();
      const Vector au = A * u;
      const Vector slack = b - A * x;
      for (int i = 0; i < A.rows(); ++i) {
        if (au(i) > 1e-12) t_best = std::min(t_best, std::max(0.0, slack(i)) / au(i));
      }
      if (std::isfinite(t_best)) {
        x += t_best * u;
        break;
      }
      if (s < 0) throw Error(ErrorCode::UnboundedRegion, "region contains a line");
    }
  }
  throw Error(ErrorCode::NumericalFailure, "vertex purification did not converge");
}

std::vector<PrimalVertex> traversal(const Matrix& A, const Vector& b, const Tolerances& tol) {
  const int n = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  Vector c(d);
  for (int j = 0; j < d; ++j) c(j) = 1.0 / std::sqrt(2.0 + j) + 0.1 * j;
  const LpOutcome start = solve_lp({c, A, b}, tol);
  if (start.status == LpStatus::Infeasible) return {};
  if (start.status == LpStatus::Unbounded) throw Error(ErrorCode::UnboundedRegion, "start LP unbounded");

  std::vector<PrimalVertex> out;
  std::deque<Vector> queue;
  const Vector first = purify(A, b, start.primal_point, tol);
  out.push_back({first, {}});
  queue.push_back(first);
  while (!queue.empty()) {
    const Vector v = queue.front();
    queue.pop_front();
    const IndexSet active = active_set(A, b, v, tol);
    const Vector slack = b - A * v;
    detail::for_each_subset(static_cast<int>(active.size()), d - 1, [&](const std::vector<int>& pick) {
      Matrix sub(d - 1, d);
      for (int r = 0; r < d - 1; ++r) sub.row(r) = A.row(active[pick[r]]).normalized();
      Vector dir;
      if (d == 1) {
        dir = Vector::Ones(1);
      } else {
        Eigen::FullPivLU<Matrix> lu(sub);
        lu.setThreshold(tol.rank_tol());
        if (lu.rank() != d - 1) return true;
        dir = lu.kernel().col(0).normalized();
      }
      for (double s : {1.0, -1.0}) {
        const Vector u = s * dir;
        bool edge = true;
        for (int i : active) {
          if (A.row(i).dot(u) > 1e-10 * A.row(i).norm()) {
            edge = false;
            break;
          }
        }
        if (!edge) continue;
        double t_best = std::numeric_limits<double>::infinity();
        const Vector au = A * u;
        for (int i = 0; i < n; ++i) {
          if (au(i) > 1e-10 * A.row(i).norm() && slack(i) > tol.feas(b(i))) {
            t_best = std::min(t_best, slack(i) / au(i));
          }
        }
        if (!std::isfinite(t_best)) throw Error(ErrorCode::UnboundedRegion, "unbounded edge at a vertex");
        Vector w = v + t_best * u;
        w = polish(A, b, active_set(A, b, w, tol), w);
        bool seen = false;
        for (const auto& known : out) {
          if ((known.point - w).cwiseAbs().maxCoeff() <= tol.dedup()) {
            seen = true;
            break;
          }
        }
        if (!seen) {
          out.push_back({w, {}});
          queue.push_back(w);
        }
      }
      return true;
    });
  }
  return out;
}

}  // namespace

std::vector<PrimalVertex> enumerate_primal_vertices(const Matrix& A, const Vector& b, const Tolerances& tol,
                                                    const VertexOptions& options) {
  if (A.rows() != b.size()) throw Error(ErrorCode::InvalidArgument, "rhs length differs from row count");
  if (A.rows() < A.cols()) throw Error(ErrorCode::InvalidArgument, "need N >= d rows");
  VertexStrategy strategy = options.strategy;
  if (strategy == VertexStrategy::Auto) {
    strategy = A.rows() <= 32 ? VertexStrategy::Exhaustive : VertexStrategy::Traversal;
  }
  std::vector<PrimalVertex> out;
  if (strategy == VertexStrategy::Exhaustive) {
    if (options.verify_bounded && !recession_cone_trivial(A, tol)) {
      throw Error(ErrorCode::UnboundedRegion, "Q_{A,0} is not {0}");
    }
    out = exhaustive(A, b, tol);
  } else {
    out = traversal(A, b, tol);
  }
  for (auto& v : out) v.active = active_set(A, b, v.point, tol);
  std::sort(out.begin(), out.end(), [](const PrimalVertex& l, const PrimalVertex& r) { return l.active < r.active; });
  return out;
}

}  // namespace polygal
