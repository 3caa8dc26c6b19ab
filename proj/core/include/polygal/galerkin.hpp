#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polygal/coordinate_space.hpp"

namespace polygal {

/// zeta(Delta_k) for the grid Delta_k = (pi / 2^k) Z^{d-1} in spherical
/// coordinates, d in {2, 3}, with poles and the 2 pi seam collapsed.
/// d = 2 rows are in angular order; d = 3 rows are ordered by (theta_1,
/// theta_2) grid index. Levels start at 1 (d = 2) and 2 (d = 3). Throws
/// BadDimension or BadLevel.
NormalSystem spherical_grid_normals(int d, int k);

/// Row indices of the level-k grid inside the level-k2 grid (k <= k2).
std::vector<int> spherical_grid_embedding(int d, int k, int k2);

struct GalerkinSequence {
  std::vector<NormalSystem> levels;
  std::vector<int> level_ids;  // grid level k for generated sequences, else position
  // embeddings[l][i] = row of levels[l + 1] equal to row i of levels[l]
  std::vector<std::vector<int>> embeddings;
  std::vector<double> level_rates;  // kappa estimates, filled on demand

  int size() const { return static_cast<int>(levels.size()); }
  /// Row map from level l to level l2 >= l.
  std::vector<int> row_map(int l, int l2) const;
};

/// Validates nesting (rows of each level appear in order in the next, exact
/// to 1e-12) and boundedness of every level. Throws InvalidArgument or
/// UnboundedSpace.
GalerkinSequence make_sequence(std::vector<NormalSystem> levels, const Tolerances& tol = {});

/// Grid levels ks (strictly increasing) with exact index embeddings.
GalerkinSequence spherical_sequence(int d, const std::vector<int>& ks, const Tolerances& tol = {});

struct DeltaEstimate {
  double value = 0.0;    // exact for d = 2, sampled sup otherwise
  double sampled = 0.0;  // max over samples of the distance to the nearest normal
  double upper = 0.0;    // sampled + mesh
  double mesh = 0.0;
  bool exact = false;
};

/// delta_A = sup_c min_k ||c - a_k||.
DeltaEstimate estimate_delta(const NormalSystem& ns, int samples, std::uint64_t seed = 0);

struct KappaEstimate {
  double kappa = 0.0;  // sampled sup of the inner minimum
  double rho = 0.0;    // exact adjacent-gap cosine for d = 2, sampled otherwise
  std::optional<double> rho_bound;  // sqrt((2 - 2 rho) / rho), absent when rho <= 0
  Vector worst_direction;
};

/// kappa_A estimate: for every sampled c, the inner infimum is taken over
/// ext(Q*_{A,c}) and over two-point mixtures of the best extreme points.
/// For d = 2 the midpoints of angular gaps are added to the samples. Throws
/// UnboundedSpace.
KappaEstimate estimate_kappa(const NormalSystem& ns, int samples, std::uint64_t seed = 0, const Tolerances& tol = {});

/// Inner value sum_k p_k ||a_k - c / ||p||_1|| for p in Q*_{A,c}.
double kappa_objective(const NormalSystem& ns, const Vector& c, const Vector& p);

/// Level-l coordinates at level l2 > l: copied rows plus LP supports of
/// Q_{A_l, b}. Throws ExteriorCoordinates when b is not in C_{A_l}.
Vector embed_coordinates(const Vector& b, const GalerkinSequence& seq, int l, int l2, const Tolerances& tol = {});

/// Rows of level-l2 coordinates that belong to level l.
Vector restrict_coordinates(const Vector& b, const GalerkinSequence& seq, int l2, int l);

}  // namespace polygal
