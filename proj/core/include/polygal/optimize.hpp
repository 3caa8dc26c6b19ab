#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polygal/bodies.hpp"
#include "polygal/galerkin.hpp"

namespace polygal {

struct ObjectiveSpec {
  enum class Kind { NegVolume, LinearSupport, TargetTracking };
  enum class Quadrature { Explicit, Uniform, Arc };

  Kind kind = Kind::NegVolume;
  // linear_support: Phi = w . b. Weights come from `weights` when explicit,
  // else from a quadrature rule of the unit sphere built per level.
  Quadrature quadrature = Quadrature::Explicit;
  Vector weights;
  // target_tracking: Phi = ||b - b*||_inf with b* = P(target_body) per
  // level, or the explicit `target_b` (which then fixes N).
  std::optional<Body> target_body;
  Vector target_b;
  // Minimize -Phi instead of Phi.
  bool maximize = false;

  static ObjectiveSpec neg_volume();
  static ObjectiveSpec linear_support(Vector weights);
  static ObjectiveSpec linear_support(Quadrature rule);
  static ObjectiveSpec target_tracking(Vector target);
  static ObjectiveSpec target_tracking(Body target);
};

std::string_view to_string(ObjectiveSpec::Kind kind);

/// Weights of the quadrature rule on the normals (Uniform: |S^{d-1}| / N;
/// Arc, d = 2 only: half of the two neighbouring angular gaps).
Vector quadrature_weights(ObjectiveSpec::Quadrature rule, const NormalSystem& ns);

struct ConstraintSpec {
  enum class Kind { PerimeterLe, SupportBox, LinearSupportLe };

  Kind kind = Kind::PerimeterLe;
  double limit = 0.0;     // perimeter_le, linear_support_le
  Matrix directions;      // support_box: one unit direction per row
  Vector limits;          // support_box: sigma_Q(u_j) <= limits_j
  Vector weights;         // linear_support_le: w . b <= limit
  double lipschitz_L = 0.0;

  /// L = 2 pi (d = 2 only).
  static ConstraintSpec perimeter_le(double limit);
  /// L = 1.
  static ConstraintSpec support_box(Matrix directions, Vector limits);
  /// L = ||w||_1.
  static ConstraintSpec linear_support_le(Vector weights, double limit);

  /// Number of scalar constraints.
  int count() const;
};

std::string_view to_string(ConstraintSpec::Kind kind);

/// Psi_k = Psi - L kappa ||C_hat||, applied to each scalar constraint.
struct ShiftedConstraint {
  ConstraintSpec spec;
  double shift = 0.0;

  /// Psi_k values at b with realization real (real may be empty for the
  /// linear kinds).
  Vector evaluate(const Vector& b, const PolytopeRealization& real, const NormalSystem& ns) const;
};

ShiftedConstraint tighten_constraints(const ConstraintSpec& spec, double kappa, double outer_norm);

/// Unshifted Psi values.
Vector evaluate_constraint(const ConstraintSpec& spec, const Vector& b, const PolytopeRealization& real,
                           const NormalSystem& ns);

/// Lebesgue measure of Q (d in {2, 3}).
double polytope_volume(const PolytopeRealization& real);

/// (d - 1)-measure of facet k (d in {2, 3}).
double facet_measure(const PolytopeRealization& real, int k);

double polytope_perimeter(const PolytopeRealization& real);

/// Throws ExteriorCoordinates when some facet of the realization is empty.
/// target_tracking needs target_b of matching length (resolve a target
/// body with resolve_objective first).
double evaluate_objective(const ObjectiveSpec& spec, const Vector& b, const PolytopeRealization& real);

/// Per-level copy of the objective with quadrature weights and target
/// coordinates made explicit.
ObjectiveSpec resolve_objective(const ObjectiveSpec& spec, const NormalSystem& ns, const Tolerances& tol = {});

enum class InnerMethod { Gradient, Bfgs, Newton };

struct SolverOptions {
  double mu_start = 1.0;
  double mu_min = 1e-8;
  double mu_factor = 0.5;
  double step_tol = 1e-9;
  int max_inner = 400;
  int max_phase1 = 2000;
  InnerMethod inner = InnerMethod::Newton;
  int starts = 3;
  int threads = 1;
  int kappa_samples = 720;
  Tolerances tol;
};

enum class ConstraintShift { Kappa, None };

struct GalerkinProblem {
  ObjectiveSpec objective;
  std::vector<ConstraintSpec> constraints;
  std::optional<Body> inner_body;  // C_check; absent keeps diamond columns enforced
  Body outer_body;                 // C_hat
  GalerkinSequence sequence;
  double lambda = 0.1;
  ConstraintShift shift = ConstraintShift::Kappa;
  SolverOptions solver;
};

struct FeasibilityReport {
  double min_column = 0.0;       // min over enforced F columns of column . b
  double lower_box_gap = 0.0;    // min_i (b_i - lo_i)
  double upper_box_excess = 0.0; // max_i (b_i - hi_i)
  double max_constraint = 0.0;   // max Psi_k, or -inf without constraints
  bool ok = false;
};

struct StartRecord {
  std::string name;
  bool succeeded = false;
  double objective = 0.0;
  int iterations = 0;
  std::string failure;
};

struct LevelResult {
  int level = 0;   // position in the sequence
  int level_id = 0;
  int n = 0;
  Vector b;
  PolytopeRealization realization;
  double objective = 0.0;
  Vector constraint_values;  // Psi_k at b
  double kappa_hat = 0.0;
  double shift = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  int chosen_start = -1;
  std::vector<StartRecord> starts;
  FeasibilityReport feasibility;
};

/// Solves level l. A warm start (coordinates at level l) is used as the
/// first start when given. Throws InfeasibleLevel or NumericalFailure.
LevelResult solve_level(const GalerkinProblem& problem, int l, const std::optional<Vector>& warm_start = std::nullopt);

struct CrossLevelRow {
  int level = 0;  // positions in the sequence
  int level_next = 0;
  double hausdorff = 0.0;
  double objective_delta = 0.0;
};

struct SequenceResult {
  std::vector<LevelResult> levels;
  std::vector<CrossLevelRow> cross_level;
};

SequenceResult run_sequence(const GalerkinProblem& problem);

struct SetDistance {
  double semi = 0.0;  // D(M1, M2) = sup_{C in M1} inf_{C' in M2} dist_H
  double full = 0.0;  // max(D(M1, M2), D(M2, M1))
};

SetDistance set_distance(const std::vector<PolytopeRealization>& m1, const std::vector<PolytopeRealization>& m2,
                         const Tolerances& tol = {});

}  // namespace polygal
