#pragma once

#include <optional>
#include <vector>

#include "polygal/types.hpp"

namespace polygal {

/// Unit outer normals a_1..a_N (rows of `rows`), pairwise distinct.
struct NormalSystem {
  Matrix rows;
  bool normalized_input = false;  // some raw row was rescaled to unit length

  int dimension() const { return static_cast<int>(rows.cols()); }
  int size() const { return static_cast<int>(rows.rows()); }
};

/// Rescales rows to unit length. Throws BadDimension (d < 2 or no rows),
/// ZeroRow, DuplicateRow (infinity-norm gap <= 1e-9 after normalization).
NormalSystem validate_normals(const Matrix& raw, const Tolerances& tol = {});

/// Q_{A,0} = {0}.
bool check_bounded(const NormalSystem& ns, const Tolerances& tol = {});

/// Diamond: A^T p = 0, 1^T p = 1. Touching k: A^T p = a_k, p != e_k.
struct DualTarget {
  enum class Kind { Diamond, Touching } kind = Kind::Diamond;
  int k = -1;

  static DualTarget diamond() { return {}; }
  static DualTarget touching(int k) { return {Kind::Touching, k}; }
  bool is_diamond() const { return kind == Kind::Diamond; }
  bool operator==(const DualTarget&) const = default;
};

struct DualVertex {
  Vector p;
  IndexSet support;  // sorted
  DualTarget target;
};

struct EnumerationOptions {
  int threads = 1;
};

std::vector<DualVertex> extreme_points_diamond(const NormalSystem& ns, const Tolerances& tol = {},
                                               const EnumerationOptions& options = {});
std::vector<DualVertex> extreme_points_touching(const NormalSystem& ns, int k, const Tolerances& tol = {},
                                                const EnumerationOptions& options = {});

struct ConeColumn {
  Vector vector;  // diamond: p; touching k: p - e_k
  DualVertex provenance;
  bool pruned = false;
};

struct CompiledCone {
  NormalSystem normals;
  std::vector<ConeColumn> columns;

  int diamond_count() const;
  int touching_count() const;
  int pruned_count() const;
  /// F restricted to the selected columns, one column per entry.
  Matrix matrix(bool include_pruned = false, bool include_diamond = true) const;
};

struct CompileOptions {
  bool allow_large = false;  // lift the complexity guard
  int threads = 1;
};

/// Throws UnboundedSpace when check_bounded fails and ComplexityLimit when
/// the normal system is beyond the guard (N > 512 for d = 2, N > 64 for
/// d = 3, C(N, d+1) > 1e7 otherwise) unless allow_large is set.
CompiledCone compile_cone(const NormalSystem& ns, const Tolerances& tol = {}, const CompileOptions& options = {});

/// Flags touching columns whose support cone strictly contains the support
/// cone of another touching vertex with the same k.
CompiledCone prune_redundant(const CompiledCone& cone, const Tolerances& tol = {});

/// Nonnegative weights w with sum_j w_j g_j = target over the generator
/// columns of G, if any exist (G has independent columns).
std::optional<Vector> nonnegative_combination(const Matrix& G, const Vector& target, const Tolerances& tol = {});

}  // namespace polygal
