#include "polygal/galerkin.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "polygal/lp.hpp"
#include "polygal/sphere.hpp"
#include "subsets.hpp"

namespace polygal {

namespace {

constexpr int kMaxLevel2 = 20;
constexpr int kMaxLevel3 = 8;

void check_level(int d, int k) {
  if (d != 2 && d != 3) throw Error(ErrorCode::BadDimension, "grid normals exist for d = 2 and d = 3 only");
  const int min_k = d == 2 ? 1 : 2;
  const int max_k = d == 2 ? kMaxLevel2 : kMaxLevel3;
  if (k < min_k || k > max_k) {
    throw Error(ErrorCode::BadLevel,
                "grid level must lie in [" + std::to_string(min_k) + ", " + std::to_string(max_k) + "]");
  }
}

// Row of grid point (i, j) at level k in d = 3; poles ignore j.
int grid3_index(int k, int i, int j) {
  const int rings = 1 << k;
  const int per_ring = 1 << (k + 1);
  if (i == 0) return 0;
  if (i == rings) return 1 + (rings - 1) * per_ring;
  return 1 + (i - 1) * per_ring + j;
}

}  // namespace

NormalSystem spherical_grid_normals(int d, int k) {
  check_level(d, k);
  const double h = std::numbers::pi / static_cast<double>(1 << k);
  NormalSystem ns;
  if (d == 2) {
    const int n = 1 << (k + 1);
    ns.rows.resize(n, 2);
    for (int j = 0; j < n; ++j) ns.rows.row(j) << std::cos(h * j), std::sin(h * j);
    return ns;
  }
  const int rings = 1 << k;
  const int per_ring = 1 << (k + 1);
  ns.rows.resize(2 + (rings - 1) * per_ring, 3);
  ns.rows.row(grid3_index(k, 0, 0)) << 1.0, 0.0, 0.0;
  ns.rows.row(grid3_index(k, rings, 0)) << -1.0, 0.0, 0.0;
  for (int i = 1; i < rings; ++i) {
    const double t1 = h * i;
    for (int j = 0; j < per_ring; ++j) {
      const double t2 = h * j;
      ns.rows.row(grid3_index(k, i, j)) << std::cos(t1), std::sin(t1) * std::cos(t2), std::sin(t1) * std::sin(t2);
    }
  }
  return ns;
}

std::vector<int> spherical_grid_embedding(int d, int k, int k2) {
  check_level(d, k);
  check_level(d, k2);
  if (k2 < k) throw Error(ErrorCode::BadLevel, "target level is coarser than the source level");
  const int f = 1 << (k2 - k);
  std::vector<int> map;
  if (d == 2) {
    for (int j = 0; j < (1 << (k + 1)); ++j) map.push_back(f * j);
    return map;
  }
  const int rings = 1 << k;
  map.push_back(grid3_index(k2, 0, 0));
  for (int i = 1; i < rings; ++i) {
    for (int j = 0; j < (1 << (k + 1)); ++j) map.push_back(grid3_index(k2, f * i, f * j));
  }
  map.push_back(grid3_index(k2, f * rings, 0));
  return map;
}

std::vector<int> GalerkinSequence::row_map(int l, int l2) const {
  if (l < 0 || l2 >= size() || l2 < l) throw Error(ErrorCode::BadLevel, "invalid level pair");
  std::vector<int> map(levels[l].size());
  for (int i = 0; i < levels[l].size(); ++i) map[i] = i;
  for (int m = l; m < l2; ++m) {
    for (int& r : map) r = embeddings[m][r];
  }
  return map;
}

GalerkinSequence make_sequence(std::vector<NormalSystem> levels, const Tolerances& tol) {
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "sequence needs at least one level");
  GalerkinSequence seq;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (!check_bounded(levels[l], tol)) {
      throw Error(ErrorCode::UnboundedSpace, "level " + std::to_string(l) + " is not a polytope space");
    }
    if (l + 1 < levels.size()) {
      const Matrix& a = levels[l].rows;
      const Matrix& b = levels[l + 1].rows;
      if (a.cols() != b.cols()) throw Error(ErrorCode::InvalidArgument, "levels differ in dimension");
      std::vector<int> map;
      int start = 0;
      for (int i = 0; i < a.rows(); ++i) {
        int found = -1;
        for (int j = start; j < b.rows(); ++j) {
          if ((a.row(i) - b.row(j)).cwiseAbs().maxCoeff() <= 1e-12) {
            found = j;
            break;
          }
        }
        if (found < 0) {
          throw Error(ErrorCode::InvalidArgument,
                      "row " + std::to_string(i) + " of level " + std::to_string(l) + " is missing from the next level");
        }
        map.push_back(found);
        start = found + 1;
      }
      seq.embeddings.push_back(std::move(map));
    }
    seq.level_ids.push_back(static_cast<int>(l));
  }
  seq.levels = std::move(levels);
  return seq;
}

GalerkinSequence spherical_sequence(int d, const std::vector<int>& ks, const Tolerances& tol) {
  if (ks.empty()) throw Error(ErrorCode::BadLevel, "no levels requested");
  GalerkinSequence seq;
  for (std::size_t l = 0; l < ks.size(); ++l) {
    if (l > 0 && ks[l] <= ks[l - 1]) throw Error(ErrorCode::BadLevel, "levels must be strictly increasing");
    seq.levels.push_back(spherical_grid_normals(d, ks[l]));
    if (!check_bounded(seq.levels.back(), tol)) {
      throw Error(ErrorCode::UnboundedSpace, "grid level " + std::to_string(ks[l]) + " is not a polytope space");
    }
    seq.level_ids.push_back(ks[l]);
    if (l > 0) seq.embeddings.push_back(spherical_grid_embedding(d, ks[l - 1], ks[l]));
  }
  return seq;
}

namespace {

// Largest angular gap between consecutive normals in the plane, with the
// midpoint directions of every gap.
double max_angular_gap(const Matrix& rows, std::vector<double>* midpoints) {
  std::vector<double> ang;
  for (int i = 0; i < rows.rows(); ++i) {
    double a = std::atan2(rows(i, 1), rows(i, 0));
    if (a < 0) a += 2.0 * std::numbers::pi;
    ang.push_back(a);
  }
  std::sort(ang.begin(), ang.end());
  double gap = 0.0;
  for (std::size_t i = 0; i < ang.size(); ++i) {
    const double next = i + 1 < ang.size() ? ang[i + 1] : ang[0] + 2.0 * std::numbers::pi;
    gap = std::max(gap, next - ang[i]);
    if (midpoints) midpoints->push_back(0.5 * (ang[i] + next));
  }
  return gap;
}

}  // namespace

DeltaEstimate estimate_delta(const NormalSystem& ns, int samples, std::uint64_t seed) {
  const SphereSample s = sample_sphere(ns.dimension(), samples, seed);
  DeltaEstimate out;
  const Vector best_dot = (s.directions * ns.rows.transpose()).rowwise().maxCoeff();
  for (int i = 0; i < best_dot.size(); ++i) {
    out.sampled = std::max(out.sampled, std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, best_dot(i)))));
  }
  out.mesh = s.mesh;
  out.upper = out.sampled + s.mesh;
  if (ns.dimension() == 2) {
    out.value = 2.0 * std::sin(max_angular_gap(ns.rows, nullptr) / 4.0);
    out.exact = true;
  } else {
    out.value = out.sampled;
  }
  return out;
}

double kappa_objective(const NormalSystem& ns, const Vector& c, const Vector& p) {
  const double s = p.sum();
  double v = 0.0;
  for (int k = 0; k < p.size(); ++k) {
    if (p(k) > 0.0) v += p(k) * (ns.rows.row(k).transpose() - c / s).norm();
  }
  return v;
}

namespace {

struct Representation {
  Vector p;
  double value;
  double min_dot;
};

// Extreme points of Q*_{A,c} whose supports lie in `candidates`.
void dual_representations(const NormalSystem& ns, const Vector& c, const std::vector<int>& candidates,
                          const Tolerances& tol, std::vector<Representation>& out) {
  const int d = ns.dimension();
  const int m = static_cast<int>(candidates.size());
  const Matrix& A = ns.rows;
  const double pos = tol.feasibility * tol.scale;
  for (int s = 1; s <= d; ++s) {
    detail::for_each_subset(m, s, [&](const std::vector<int>& pick) {
      Vector w;
      if (s == 1) {
        const Vector a = A.row(candidates[pick[0]]).transpose();
        const double t = a.dot(c);
        if (t <= pos || (t * a - c).cwiseAbs().maxCoeff() > 1e-10) return true;
        w = Vector::Constant(1, t);
      } else if (d == 2) {
        const int i = candidates[pick[0]], j = candidates[pick[1]];
        const double det = A(i, 0) * A(j, 1) - A(i, 1) * A(j, 0);
        if (std::abs(det) <= tol.rank_tol()) return true;
        w.resize(2);
        w(0) = (c(0) * A(j, 1) - A(j, 0) * c(1)) / det;
        w(1) = (A(i, 0) * c(1) - c(0) * A(i, 1)) / det;
      } else {
        Matrix M(d, s);
        for (int r = 0; r < s; ++r) M.col(r) = A.row(candidates[pick[r]]).transpose();
        Eigen::ColPivHouseholderQR<Matrix> qr(M);
        qr.setThreshold(10.0 * tol.rank_tol());
        if (qr.rank() < s) return true;
        w = qr.solve(c);
        if ((M * w - c).cwiseAbs().maxCoeff() > 1e-9) return true;
      }
      if (w.minCoeff() <= pos) return true;
      Vector p = Vector::Zero(ns.size());
      double min_dot = 1.0;
      for (int r = 0; r < s; ++r) {
        p(candidates[pick[r]]) = w(r);
        for (int q = 0; q < r; ++q) {
          min_dot = std::min(min_dot, A.row(candidates[pick[r]]).dot(A.row(candidates[pick[q]])));
        }
      }
      out.push_back({p, kappa_objective(ns, c, p), min_dot});
      return true;
    });
  }
}

double golden_mixture(const NormalSystem& ns, const Vector& c, const Vector& p, const Vector& q) {
  auto f = [&](double t) { return kappa_objective(ns, c, (1.0 - t) * p + t * q); };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

}  // namespace

KappaEstimate estimate_kappa(const NormalSystem& ns, int samples, std::uint64_t seed, const Tolerances& tol) {
  if (!check_bounded(ns, tol)) throw Error(ErrorCode::UnboundedSpace, "kappa needs a polytope space");
  const int d = ns.dimension();
  const int n = ns.size();
  Matrix dirs = sample_sphere(d, samples, seed).directions;
  if (d == 2) {
    std::vector<double> mids;
    max_angular_gap(ns.rows, &mids);
    Matrix extra(mids.size(), 2);
    for (std::size_t i = 0; i < mids.size(); ++i) extra.row(i) << std::cos(mids[i]), std::sin(mids[i]);
    Matrix all(dirs.rows() + extra.rows(), 2);
    all << dirs, extra;
    dirs = all;
  }

  constexpr double kSubsetBudget = 5000.0;
  const bool restrict_candidates = detail::binomial(n, d) > kSubsetBudget;
  int nearest = n;
  while (restrict_candidates && nearest > d && detail::binomial(nearest, d) > kSubsetBudget) --nearest;

  KappaEstimate out;
  out.rho = 1.0;
  out.kappa = 0.0;
  std::vector<int> all_rows(n);
  for (int i = 0; i < n; ++i) all_rows[i] = i;
  for (int r = 0; r < dirs.rows(); ++r) {
    const Vector c = dirs.row(r).transpose();
    std::vector<Representation> reps;
    if (restrict_candidates) {
      std::vector<int> order = all_rows;
      const Vector dots = ns.rows * c;
      std::partial_sort(order.begin(), order.begin() + nearest, order.end(),
                        [&](int a, int b) { return dots(a) > dots(b) || (dots(a) == dots(b) && a < b); });
      order.resize(nearest);
      std::sort(order.begin(), order.end());
      dual_representations(ns, c, order, tol, reps);
    }
    if (reps.empty()) dual_representations(ns, c, all_rows, tol, reps);
    if (reps.empty()) throw Error(ErrorCode::NumericalFailure, "no dual representation found for a direction");

    std::sort(reps.begin(), reps.end(), [](const Representation& a, const Representation& b) { return a.value < b.value; });
    double inner = reps.front().value;
    const std::size_t top = std::min<std::size_t>(reps.size(), 8);
    for (std::size_t i = 0; i < top; ++i) {
      for (std::size_t j = i + 1; j < top; ++j) inner = std::min(inner, golden_mixture(ns, c, reps[i].p, reps[j].p));
    }
    if (inner > out.kappa) {
      out.kappa = inner;
      out.worst_direction = c;
    }
    double best_dot = -1.0;
    for (const auto& rep : reps) best_dot = std::max(best_dot, rep.min_dot);
    out.rho = std::min(out.rho, best_dot);
  }
  if (d == 2) out.rho = std::cos(max_angular_gap(ns.rows, nullptr));
  // cos(pi / 2) is not exactly zero
  if (out.rho > 1e-12) out.rho_bound = std::sqrt((2.0 - 2.0 * out.rho) / out.rho);
  return out;
}

Vector embed_coordinates(const Vector& b, const GalerkinSequence& seq, int l, int l2, const Tolerances& tol) {
  if (l < 0 || l2 >= seq.size() || l2 <= l) throw Error(ErrorCode::BadLevel, "embedding needs l < l2 within the sequence");
  const NormalSystem& coarse = seq.levels[l];
  const NormalSystem& fine = seq.levels[l2];
  if (b.size() != coarse.size()) throw Error(ErrorCode::InvalidArgument, "coordinate length differs from level size");
  if (!farkas_feasible(coarse.rows, b, tol).feasible) {
    throw Error(ErrorCode::ExteriorCoordinates, "Q_{A,b} is empty at the source level");
  }
  const std::vector<int> map = seq.row_map(l, l2);
  std::vector<int> source(fine.size(), -1);
  for (int i = 0; i < coarse.size(); ++i) source[map[i]] = i;

  auto row_support = [&](const Vector& a) {
    const LpOutcome out = solve_lp({a, coarse.rows, b}, tol);
    if (out.status != LpStatus::Optimal) throw Error(ErrorCode::NumericalFailure, "support LP failed during embedding");
    return out.value;
  };
  const double band = 1e-7 * tol.scale * (1.0 + b.cwiseAbs().maxCoeff());
  for (int i = 0; i < coarse.size(); ++i) {
    if (row_support(coarse.rows.row(i).transpose()) < b(i) - band) {
      throw Error(ErrorCode::ExteriorCoordinates, "row " + std::to_string(i) + " is not attained; b is not in C_A");
    }
  }
  Vector out(fine.size());
  for (int i = 0; i < fine.size(); ++i) {
    out(i) = source[i] >= 0 ? b(source[i]) : row_support(fine.rows.row(i).transpose());
  }
  return out;
}

Vector restrict_coordinates(const Vector& b, const GalerkinSequence& seq, int l2, int l) {
  if (b.size() != seq.levels.at(l2).size()) throw Error(ErrorCode::InvalidArgument, "coordinate length differs from level size");
  const std::vector<int> map = seq.row_map(l, l2);
  Vector out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(i) = b(map[i]);
  return out;
}

}  // namespace polygal
