#include "polygal/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <limits>

#include "objective_terms.hpp"

namespace polygal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NonlinearTerm {
  int constraint = 0;  // index into LevelModel::constraints
  int component = 0;   // scalar within the constraint
};

struct Evaluation {
  double f = 0.0;
  Vector grad_f;
  Vector g;       // nonlinear constraint values
  Matrix grad_g;  // one row per nonlinear term
};

// Level-l data of a problem: enforced linear inequalities G z <= h over
// z = (b) or z = (b, t) for target tracking, and nonlinear constraints.
struct LevelModel {
  const GalerkinProblem* problem = nullptr;
  int level = 0;
  NormalSystem ns;
  CompiledCone cone;
  ObjectiveSpec objective;
  std::vector<ShiftedConstraint> constraints;
  std::vector<NonlinearTerm> nonlinear;
  Vector lo, hi;
  bool has_lower = false;
  double outer_norm = 0.0;
  double kappa = 0.0;
  double shift = 0.0;
  bool epigraph = false;
  int n = 0;
  int nvar = 0;
  Matrix F;  // enforced columns
  Matrix G;
  Vector h;
  Tolerances tol;

  bool needs_realization() const { return objective.kind == ObjectiveSpec::Kind::NegVolume || !nonlinear.empty(); }

  Vector coords(const Vector& z) const { return z.head(n); }

  bool strictly_inside(const Vector& z) const { return (h - G * z).minCoeff() > 0.0; }

  std::optional<PolytopeRealization> realization(const Vector& b) const {
    try {
      PolytopeRealization r = realize_polytope(b, ns.rows, tol);
      for (const auto& f : r.facet_active) {
        if (f.empty()) return std::nullopt;
      }
      if (r.vertices.empty()) return std::nullopt;
      return r;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  double nonlinear_value(const NonlinearTerm& t, const Vector& b, const PolytopeRealization& real) const {
    return constraints[t.constraint].evaluate(b, real, ns)(t.component);
  }

  std::optional<Vector> nonlinear_gradient(const NonlinearTerm& t, const Vector& b, const PolytopeRealization& real) const {
    const ConstraintSpec& spec = constraints[t.constraint].spec;
    std::optional<Vector> g;
    if (spec.kind == ConstraintSpec::Kind::PerimeterLe) g = detail::perimeter_gradient(real);
    else g = detail::support_gradient(real, spec.directions.row(t.component).transpose());
    if (g) return g;
    // central differences when the vertex Jacobians are unavailable
    const double step = 1e-6 * (1.0 + b.cwiseAbs().maxCoeff());
    Vector out(n);
    for (int i = 0; i < n; ++i) {
      Vector bp = b, bm = b;
      bp(i) += step;
      bm(i) -= step;
      const auto rp = realization(bp);
      const auto rm = realization(bm);
      if (!rp || !rm) return std::nullopt;
      out(i) = (nonlinear_value(t, bp, *rp) - nonlinear_value(t, bm, *rm)) / (2.0 * step);
    }
    return out;
  }

  std::optional<Evaluation> evaluate(const Vector& z) const {
    Evaluation e;
    const Vector b = coords(z);
    std::optional<PolytopeRealization> real;
    if (needs_realization()) {
      real = realization(b);
      if (!real) return std::nullopt;
    }
    e.grad_f = Vector::Zero(nvar);
    switch (objective.kind) {
      case ObjectiveSpec::Kind::NegVolume:
        e.f = -polytope_volume(*real);
        e.grad_f.head(n) = -detail::volume_gradient(*real);
        break;
      case ObjectiveSpec::Kind::LinearSupport:
        e.f = objective.weights.dot(b);
        e.grad_f.head(n) = objective.weights;
        break;
      case ObjectiveSpec::Kind::TargetTracking:
        e.f = z(n);
        e.grad_f(n) = 1.0;
        break;
    }
    if (objective.maximize) {
      e.f = -e.f;
      e.grad_f = -e.grad_f;
    }
    e.g.resize(nonlinear.size());
    e.grad_g = Matrix::Zero(nonlinear.size(), nvar);
    for (std::size_t j = 0; j < nonlinear.size(); ++j) {
      e.g(j) = nonlinear_value(nonlinear[j], b, *real);
      const auto grad = nonlinear_gradient(nonlinear[j], b, *real);
      if (!grad) return std::nullopt;
      e.grad_g.row(j).head(n) = grad->transpose();
    }
    return e;
  }

  // Hessian of the objective in z: analytic for the d = 2 area, zero for the
  // linear kinds, central differences of the gradient otherwise.
  Matrix objective_hessian(const Vector& z) const {
    Matrix H = Matrix::Zero(nvar, nvar);
    if (objective.kind != ObjectiveSpec::Kind::NegVolume) return H;
    const double sign = objective.maximize ? -1.0 : 1.0;
    if (ns.dimension() == 2) {
      if (const auto real = realization(coords(z))) {
        if (const auto L = detail::facet_length_jacobian(*real)) {
          H.topLeftCorner(n, n) = -sign * 0.5 * (*L + L->transpose());
          return H;
        }
      }
    }
    const double step = 1e-6 * (1.0 + z.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
      Vector zp = z, zm = z;
      zp(i) += step;
      zm(i) -= step;
      const auto ep = evaluate(zp);
      const auto em = evaluate(zm);
      if (!ep || !em) return Matrix::Zero(nvar, nvar);
      H.col(i) = (ep->grad_f - em->grad_f) / (2.0 * step);
    }
    return 0.5 * (H + H.transpose());
  }
};

LevelModel build_model(const GalerkinProblem& pb, int l) {
  LevelModel m;
  m.problem = &pb;
  m.level = l;
  m.tol = pb.solver.tol;
  m.ns = pb.sequence.levels.at(l);
  m.n = m.ns.size();
  m.cone = prune_redundant(compile_cone(m.ns, m.tol, {false, pb.solver.threads}), m.tol);
  m.objective = resolve_objective(pb.objective, m.ns, m.tol);
  if (m.objective.kind == ObjectiveSpec::Kind::TargetTracking && m.objective.maximize) {
    throw Error(ErrorCode::InvalidArgument, "target_tracking cannot be maximized");
  }
  if (m.objective.kind == ObjectiveSpec::Kind::LinearSupport && m.objective.weights.size() != m.n) {
    throw Error(ErrorCode::InvalidArgument, "objective weights have wrong length for level " + std::to_string(l));
  }
  if (m.objective.kind == ObjectiveSpec::Kind::TargetTracking && m.objective.target_b.size() != m.n) {
    throw Error(ErrorCode::InvalidArgument, "target coordinates have wrong length for level " + std::to_string(l));
  }
  m.epigraph = m.objective.kind == ObjectiveSpec::Kind::TargetTracking;
  m.nvar = m.n + (m.epigraph ? 1 : 0);

  m.hi = project_coords(pb.outer_body, m.ns, m.tol).coords.b;
  m.outer_norm = body_norm(pb.outer_body, m.tol);
  m.has_lower = pb.inner_body.has_value();
  m.lo = m.has_lower ? project_coords(*pb.inner_body, m.ns, m.tol).coords.b : Vector::Constant(m.n, -kInf);

  m.kappa = estimate_kappa(m.ns, pb.solver.kappa_samples, 0, m.tol).kappa;
  m.shift = 0.0;
  for (const auto& c : pb.constraints) {
    if (c.kind == ConstraintSpec::Kind::PerimeterLe && m.ns.dimension() != 2) {
      throw Error(ErrorCode::InvalidArgument, "perimeter_le needs d = 2");
    }
    if (c.kind == ConstraintSpec::Kind::LinearSupportLe && c.weights.size() != m.n) {
      throw Error(ErrorCode::InvalidArgument, "linear_support_le weights have wrong length for level " + std::to_string(l));
    }
    const double kappa = pb.shift == ConstraintShift::Kappa ? m.kappa : 0.0;
    m.constraints.push_back(tighten_constraints(c, kappa, m.outer_norm));
  }

  // With an inner body the lower box already forces nonemptiness, so only
  // touching columns are enforced.
  m.F = m.cone.matrix(false, !m.has_lower);
  std::vector<Vector> rows;
  std::vector<double> rhs;
  auto add = [&](const Vector& coef_b, double coef_t, double r) {
    Vector row = Vector::Zero(m.nvar);
    row.head(m.n) = coef_b;
    if (m.epigraph) row(m.n) = coef_t;
    const double scale = row.norm();
    rows.push_back(row / scale);
    rhs.push_back(r / scale);
  };
  for (int j = 0; j < m.F.cols(); ++j) add(-m.F.col(j), 0.0, 0.0);
  for (int i = 0; i < m.n; ++i) {
    add(Vector::Unit(m.n, i), 0.0, m.hi(i));
    if (m.has_lower) add(-Vector::Unit(m.n, i), 0.0, -m.lo(i));
  }
  if (m.epigraph) {
    for (int i = 0; i < m.n; ++i) {
      add(Vector::Unit(m.n, i), -1.0, m.objective.target_b(i));
      add(-Vector::Unit(m.n, i), -1.0, -m.objective.target_b(i));
    }
  }
  for (std::size_t c = 0; c < m.constraints.size(); ++c) {
    const auto& sc = m.constraints[c];
    switch (sc.spec.kind) {
      case ConstraintSpec::Kind::LinearSupportLe:
        add(sc.spec.weights, 0.0, sc.spec.limit + sc.shift);
        break;
      case ConstraintSpec::Kind::SupportBox:
        for (int j = 0; j < sc.spec.limits.size(); ++j) {
          const int row = detail::normal_index(m.ns, sc.spec.directions.row(j).transpose());
          if (row >= 0) add(Vector::Unit(m.n, row), 0.0, sc.spec.limits(j) + sc.shift);
          else m.nonlinear.push_back({static_cast<int>(c), j});
        }
        break;
      case ConstraintSpec::Kind::PerimeterLe:
        m.nonlinear.push_back({static_cast<int>(c), 0});
        break;
    }
  }
  m.G.resize(rows.size(), m.nvar);
  m.h.resize(rhs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.G.row(i) = rows[i].transpose();
    m.h(i) = rhs[i];
  }
  return m;
}

// Chebyshev-style centre of {G z <= h}: maximize s with G z + s <= h
// (rows are normalized), s <= 1.
Vector linear_center(const LevelModel& m) {
  const int nv = m.nvar;
  Matrix A(m.G.rows() + 1, nv + 1);
  Vector rhs(m.G.rows() + 1);
  A.topLeftCorner(m.G.rows(), nv) = m.G;
  A.block(0, nv, m.G.rows(), 1).setOnes();
  rhs.head(m.G.rows()) = m.h;
  A.row(m.G.rows()).setZero();
  A(m.G.rows(), nv) = 1.0;
  rhs(m.G.rows()) = 1.0;
  Vector c = Vector::Zero(nv + 1);
  c(nv) = 1.0;
  LpOutcome out;
  try {
    out = solve_lp({c, A, rhs}, m.tol);
  } catch (const Error& e) {
    throw Error(ErrorCode::NumericalFailure, std::string("centre LP failed: ") + e.what());
  }
  if (out.status == LpStatus::Unbounded) throw Error(ErrorCode::NumericalFailure, "centre LP is unbounded");
  if (out.status != LpStatus::Optimal || out.value <= 1e-10) {
    throw Error(ErrorCode::InfeasibleLevel, "level constraints have no strictly feasible point");
  }
  return out.primal_point.head(nv);
}

Vector make_strict(const LevelModel& m, const Vector& z0, const Vector& center) {
  if (m.strictly_inside(z0)) return z0;
  for (double theta : {1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0}) {
    const Vector z = (1.0 - theta) * z0 + theta * center;
    if (m.strictly_inside(z)) return z;
  }
  return center;
}

// Barrier objective over the model: f + weight * penalty - mu * sum log slack.
struct BarrierFunction {
  const LevelModel* m = nullptr;
  double mu = 1.0;
  bool phase1 = false;
  Vector tau;  // phase-1 targets g_j <= -tau_j

  struct Value {
    double v;
    Vector grad;
    Evaluation e;
  };

  std::optional<Value> operator()(const Vector& z) const {
    const Vector slack = m->h - m->G * z;
    if (slack.minCoeff() <= 0.0) return std::nullopt;
    auto e = m->evaluate(z);
    if (!e) return std::nullopt;
    Value out;
    out.v = -mu * slack.array().log().sum();
    out.grad = mu * (m->G.transpose() * slack.cwiseInverse());
    if (phase1) {
      for (int j = 0; j < e->g.size(); ++j) {
        const double viol = e->g(j) + tau(j);
        if (viol > 0.0) {
          out.v += 0.5 * viol * viol;
          out.grad += viol * e->grad_g.row(j).transpose();
        }
      }
    } else {
      if (e->g.size() > 0 && e->g.maxCoeff() >= 0.0) return std::nullopt;
      out.v += e->f;
      out.grad += e->grad_f;
      for (int j = 0; j < e->g.size(); ++j) {
        out.v -= mu * std::log(-e->g(j));
        out.grad += (mu / -e->g(j)) * e->grad_g.row(j).transpose();
      }
    }
    out.e = std::move(*e);
    return out;
  }

  Matrix hessian(const Vector& z, const Value& value) const {
    const Vector slack = m->h - m->G * z;
    Matrix H = mu * (m->G.transpose() * slack.array().square().inverse().matrix().asDiagonal() * m->G);
    const Evaluation& e = value.e;
    if (phase1) {
      for (int j = 0; j < e.g.size(); ++j) {
        if (e.g(j) + tau(j) > 0.0) H += e.grad_g.row(j).transpose() * e.grad_g.row(j);
      }
    } else {
      H += m->objective_hessian(z);
      for (int j = 0; j < e.g.size(); ++j) {
        H += (mu / (e.g(j) * e.g(j))) * e.grad_g.row(j).transpose() * e.grad_g.row(j);
      }
    }
    return H;
  }
};

// Newton direction with a diagonal shift until the system is positive definite.
Vector newton_direction(const Matrix& H, const Vector& g) {
  const int n = static_cast<int>(g.size());
  double shift = 0.0;
  const double base = 1e-10 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 30; ++attempt) {
    Eigen::LLT<Matrix> llt(H + shift * Matrix::Identity(n, n));
    if (llt.info() == Eigen::Success) {
      Vector p = -llt.solve(g);
      if (p.allFinite()) return p;
    }
    shift = shift == 0.0 ? base : shift * 10.0;
  }
  return -g;
}

struct DescentState {
  Vector z;
  BarrierFunction::Value value;
  Matrix H;
  bool has_h = false;
  bool fresh = true;  // H is still the identity
};

// Newton, quasi-Newton or plain gradient descent with backtracking, keeping
// iterates strictly inside the linear constraints. Returns iterations used.
template <typename Stop>
int descend(const BarrierFunction& fun, DescentState& s, const LevelModel& m, const SolverOptions& opt, int max_iter,
            Stop&& stop) {
  const int nv = m.nvar;
  if (!s.has_h) {
    s.H = Matrix::Identity(nv, nv);
    s.has_h = true;
    s.fresh = true;
  }
  int it = 0;
  for (; it < max_iter; ++it) {
    if (stop(s)) break;
    const Vector& g = s.value.grad;
    Vector p;
    switch (opt.inner) {
      case InnerMethod::Newton: p = newton_direction(fun.hessian(s.z, s.value), g); break;
      case InnerMethod::Bfgs: p = -s.H * g; break;
      case InnerMethod::Gradient: p = -g; break;
    }
    if (opt.inner == InnerMethod::Newton && -p.dot(g) < 1e-14 * (1.0 + std::abs(s.value.v))) break;
    if (p.dot(g) >= 0.0) {
      s.H = Matrix::Identity(nv, nv);
      s.fresh = true;
      p = -g;
    }
    // fraction-to-boundary cap on the linear constraints
    const Vector gp = m.G * p;
    const Vector slack = m.h - m.G * s.z;
    double alpha = 1.0;
    for (int i = 0; i < gp.size(); ++i) {
      if (gp(i) > 0.0) alpha = std::min(alpha, 0.99 * slack(i) / gp(i));
    }
    const double slope = p.dot(g);
    std::optional<BarrierFunction::Value> next;
    Vector z_next;
    for (int bt = 0; bt < 60; ++bt) {
      z_next = s.z + alpha * p;
      next = fun(z_next);
      if (next && next->v <= s.value.v + 1e-4 * alpha * slope) break;
      next.reset();
      alpha *= 0.5;
    }
    if (!next) break;
    const Vector step = z_next - s.z;
    const Vector y = next->grad - g;
    const double sy = step.dot(y);
    if (opt.inner == InnerMethod::Bfgs && sy > 1e-12 * step.norm() * y.norm()) {
      if (s.fresh) s.H *= sy / y.squaredNorm();
      s.fresh = false;
      const double rho = 1.0 / sy;
      const Matrix I = Matrix::Identity(nv, nv);
      s.H = (I - rho * step * y.transpose()) * s.H * (I - rho * y * step.transpose()) + rho * step * step.transpose();
    }
    s.z = z_next;
    s.value = std::move(*next);
    if (step.cwiseAbs().maxCoeff() < opt.step_tol * (1.0 + s.z.cwiseAbs().maxCoeff())) {
      ++it;
      break;
    }
  }
  return it;
}

struct StartOutcome {
  bool ok = false;
  Vector z;
  double objective = kInf;
  int iterations = 0;
  std::string failure;
  bool infeasible = false;
};

StartOutcome run_start(const LevelModel& m, Vector z, const SolverOptions& opt) {
  StartOutcome out;
  BarrierFunction fun;
  fun.m = &m;
  DescentState state;

  if (!m.nonlinear.empty()) {
    fun.phase1 = true;
    fun.mu = 1e-6;
    fun.tau = Vector::Zero(m.nonlinear.size());
    for (std::size_t j = 0; j < m.nonlinear.size(); ++j) {
      const auto& spec = m.constraints[m.nonlinear[j].constraint].spec;
      const double scale = spec.kind == ConstraintSpec::Kind::PerimeterLe ? spec.limit : spec.limits(m.nonlinear[j].component);
      fun.tau(j) = 1e-4 * (1.0 + std::abs(scale));
    }
    auto v = fun(z);
    if (!v) {
      out.failure = "start point cannot be evaluated";
      return out;
    }
    state.z = z;
    state.value = std::move(*v);
    auto feasible = [](const DescentState& s) { return s.value.e.g.maxCoeff() < 0.0; };
    out.iterations += descend(fun, state, m, opt, opt.max_phase1, feasible);
    if (!feasible(state)) {
      out.failure = "phase 1 did not reach Psi_k < 0";
      out.infeasible = true;
      return out;
    }
    z = state.z;
    state.has_h = false;
  }

  fun.phase1 = false;
  fun.mu = opt.mu_start;
  auto v = fun(z);
  if (!v) {
    out.failure = "barrier start is not strictly feasible";
    return out;
  }
  state.z = z;
  state.value = std::move(*v);
  auto never = [](const DescentState&) { return false; };
  for (double mu = opt.mu_start; mu >= opt.mu_min * (1.0 - 1e-12); mu *= opt.mu_factor) {
    fun.mu = mu;
    auto rescored = fun(state.z);
    if (!rescored) {
      out.failure = "iterate left the barrier domain";
      return out;
    }
    state.value = std::move(*rescored);
    out.iterations += descend(fun, state, m, opt, opt.max_inner, never);
  }
  out.ok = true;
  out.z = state.z;
  out.objective = state.value.e.f;
  return out;
}

FeasibilityReport check_feasibility(const LevelModel& m, const Vector& b, const Vector& psi) {
  FeasibilityReport r;
  const double eps = 1e-7 * (1.0 + b.cwiseAbs().maxCoeff());
  r.min_column = m.F.cols() > 0 ? (m.F.transpose() * b).minCoeff() : 0.0;
  r.lower_box_gap = m.has_lower ? (b - m.lo).minCoeff() : kInf;
  r.upper_box_excess = (b - m.hi).maxCoeff();
  r.max_constraint = psi.size() > 0 ? psi.maxCoeff() : -kInf;
  r.ok = r.min_column >= -eps && r.lower_box_gap >= -eps && r.upper_box_excess <= eps && r.max_constraint <= eps;
  return r;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

}  // namespace

LevelResult solve_level(const GalerkinProblem& problem, int l, const std::optional<Vector>& warm_start) {
  const auto t0 = std::chrono::steady_clock::now();
  if (l < 0 || l >= problem.sequence.size()) throw Error(ErrorCode::BadLevel, "level index out of range");
  if (!(problem.lambda > 0.0 && problem.lambda < 1.0)) throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0, 1)");
  const LevelModel m = build_model(problem, l);
  const SolverOptions& opt = problem.solver;

  if (m.has_lower && (m.hi - m.lo).minCoeff() < -m.tol.classify_band(m.hi.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidArgument, "inner body is not contained in the outer body");
  }
  const Vector center = linear_center(m);

  auto with_epigraph = [&](const Vector& b) {
    Vector z(m.nvar);
    z.head(m.n) = b;
    if (m.epigraph) z(m.n) = (b - m.objective.target_b).cwiseAbs().maxCoeff() + 1.0;
    return z;
  };

  std::vector<std::pair<std::string, Vector>> starts;
  if (warm_start) {
    if (warm_start->size() != m.n) throw Error(ErrorCode::InvalidArgument, "warm start has wrong length");
    double radius = m.outer_norm;
    if (const auto real = m.realization(*warm_start)) radius = real->vertex_matrix().rowwise().norm().maxCoeff();
    starts.emplace_back("warm", (1.0 - problem.lambda) * *warm_start + problem.lambda * radius * Vector::Ones(m.n));
  }
  if (m.has_lower) {
    const double inner_norm = body_norm(*problem.inner_body, m.tol);
    starts.emplace_back("inner_shift", (1.0 - problem.lambda) * m.lo + problem.lambda * inner_norm * Vector::Ones(m.n));
    starts.emplace_back("box_mid", 0.5 * (m.lo + m.hi));
  } else {
    starts.emplace_back("outer_shift", (1.0 - problem.lambda) * m.hi);
    starts.emplace_back("outer_half", 0.5 * m.hi);
  }
  const int count = std::max(1, std::min<int>(opt.starts, static_cast<int>(starts.size())));
  starts.resize(count);

  std::vector<StartOutcome> outcomes(count);
  auto job = [&](int i) {
    StartOutcome o;
    try {
      o = run_start(m, make_strict(m, with_epigraph(starts[i].second), center), opt);
    } catch (const Error& e) {
      o.failure = e.what();
    }
    return o;
  };
  if (opt.threads > 1 && count > 1) {
    std::vector<std::future<StartOutcome>> futures;
    for (int i = 0; i < count; ++i) futures.push_back(std::async(std::launch::async, job, i));
    for (int i = 0; i < count; ++i) outcomes[i] = futures[i].get();
  } else {
    for (int i = 0; i < count; ++i) outcomes[i] = job(i);
  }

  LevelResult r;
  r.level = l;
  r.level_id = problem.sequence.level_ids.at(l);
  r.n = m.n;
  r.kappa_hat = m.kappa;
  r.shift = problem.shift == ConstraintShift::Kappa && !m.constraints.empty() ? m.constraints.front().shift : 0.0;
  int best = -1;
  bool any_infeasible = false;
  for (int i = 0; i < count; ++i) {
    const auto& o = outcomes[i];
    r.starts.push_back({starts[i].first, o.ok, o.objective, o.iterations, o.failure});
    r.iterations += o.iterations;
    any_infeasible = any_infeasible || o.infeasible;
    if (!o.ok) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const double fb = outcomes[best].objective;
    const double tie = 1e-9 * (1.0 + std::abs(fb));
    if (o.objective < fb - tie || (std::abs(o.objective - fb) <= tie && lex_less(o.z, outcomes[best].z))) best = i;
  }
  if (best < 0) {
    if (any_infeasible) throw Error(ErrorCode::InfeasibleLevel, "no start reached a feasible point at level " + std::to_string(l));
    throw Error(ErrorCode::NumericalFailure, "every start failed at level " + std::to_string(l) + ": " + outcomes.front().failure);
  }
  r.chosen_start = best;
  r.b = m.coords(outcomes[best].z);
  r.realization = realize_polytope(r.b, m.ns.rows, m.tol);
  r.objective = evaluate_objective(m.objective, r.b, r.realization);
  r.constraint_values.resize(0);
  for (const auto& c : m.constraints) {
    const Vector v = c.evaluate(r.b, r.realization, m.ns);
    Vector joined(r.constraint_values.size() + v.size());
    joined << r.constraint_values, v;
    r.constraint_values = joined;
  }
  r.feasibility = check_feasibility(m, r.b, r.constraint_values);
  if (!r.feasibility.ok) throw Error(ErrorCode::NumericalFailure, "solver returned a point violating the level constraints");
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

SequenceResult run_sequence(const GalerkinProblem& problem) {
  SequenceResult out;
  for (int l = 0; l < problem.sequence.size(); ++l) {
    std::optional<Vector> warm;
    if (l > 0) warm = embed_coordinates(out.levels.back().b, problem.sequence, l - 1, l, problem.solver.tol);
    out.levels.push_back(solve_level(problem, l, warm));
  }
  for (std::size_t l = 0; l + 1 < out.levels.size(); ++l) {
    const auto& a = out.levels[l];
    const auto& b = out.levels[l + 1];
    out.cross_level.push_back({static_cast<int>(l), static_cast<int>(l + 1),
                               hausdorff_polytopes(a.realization, b.realization, problem.solver.tol),
                               b.objective - a.objective});
  }
  return out;
}

SetDistance set_distance(const std::vector<PolytopeRealization>& m1, const std::vector<PolytopeRealization>& m2,
                         const Tolerances& tol) {
  if (m1.empty() || m2.empty()) throw Error(ErrorCode::InvalidArgument, "set_distance needs nonempty collections");
  Matrix d(m1.size(), m2.size());
  for (std::size_t i = 0; i < m1.size(); ++i) {
    for (std::size_t j = 0; j < m2.size(); ++j) d(i, j) = hausdorff_polytopes(m1[i], m2[j], tol);
  }
  SetDistance out;
  out.semi = d.rowwise().minCoeff().maxCoeff();
  out.full = std::max(out.semi, d.colwise().minCoeff().maxCoeff());
  return out;
}

}  // namespace polygal
