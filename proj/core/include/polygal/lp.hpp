#pragma once

#include <vector>

#include "polygal/types.hpp"

namespace polygal {

/// max objective^T x  subject to  constraint_matrix * x <= rhs, x free.
struct LinearProgram {
  Vector objective;
  Matrix constraint_matrix;
  Vector rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus status);

/// Result of solve_lp. For Optimal, `dual_certificate` is a dual solution
/// p >= 0 with A^T p = c and b^T p = value. For Infeasible it is a Farkas
/// vector p >= 0 with A^T p = 0 and b^T p < 0. For Unbounded, `ray` is a
/// direction d with A d <= 0 and c^T d > 0.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Vector primal_point;
  double value = 0.0;
  Vector dual_certificate;
  Vector ray;
  int iterations = 0;
};

LpOutcome solve_lp(const LinearProgram& lp, const Tolerances& tol = {});

struct FarkasResult {
  bool feasible = false;
  Vector point;        // a point of Q_{A,b} when feasible
  Vector certificate;  // p >= 0, A^T p = 0, b^T p < 0 when infeasible
};

FarkasResult farkas_feasible(const Matrix& A, const Vector& b, const Tolerances& tol = {});

struct PrimalVertex {
  Vector point;
  IndexSet active;  // I_x^b, sorted
};

enum class VertexStrategy {
  Auto,        // exhaustive for N <= 32, traversal above
  Exhaustive,  // every d-subset of rows
  Traversal,   // walk the vertex-edge graph from an LP vertex
};

struct VertexOptions {
  VertexStrategy strategy = VertexStrategy::Auto;
  // Exhaustive enumeration cannot see unbounded directions on its own; when
  // set, Q_{A,0} = {0} is verified first with 2d LPs.
  bool verify_bounded = true;
};

/// All extreme points of Q_{A,b} with their active sets, deduplicated in the
/// infinity norm and sorted lexicographically by active set. Empty iff the
/// region is empty. Throws UnboundedRegion when an unbounded edge is met.
std::vector<PrimalVertex> enumerate_primal_vertices(const Matrix& A, const Vector& b,
                                                    const Tolerances& tol = {},
                                                    const VertexOptions& options = {});

/// Rows i with a_i^T x >= b_i - feas(b_i).
IndexSet active_set(const Matrix& A, const Vector& b, const Vector& x, const Tolerances& tol = {});

/// Numerical rank of the rows of A indexed by `rows`.
int row_rank(const Matrix& A, const IndexSet& rows, double threshold);

/// true iff max{c^T x : Ax <= 0} = 0 for c = +-e_1..+-e_d.
bool recession_cone_trivial(const Matrix& A, const Tolerances& tol = {});

}  // namespace polygal
