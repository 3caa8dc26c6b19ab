#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "polygal/optimize.hpp"

using namespace polygal;
using fixtures::vec;

namespace {

constexpr double kPi = std::numbers::pi;

Body origin() { return Body::point_hull(Matrix::Zero(1, 2)); }

Body box_body() {
  Matrix m(4, 2);
  m << 1, 1, -1, 1, -1, -1, 1, -1;
  return Body::point_hull(m);
}

GalerkinProblem base_problem(GalerkinSequence seq) {
  GalerkinProblem pb;
  pb.sequence = std::move(seq);
  pb.inner_body = origin();
  pb.outer_body = Body::ball(vec({0, 0}), 1.0);
  return pb;
}

GalerkinSequence single(const NormalSystem& ns) { return make_sequence({ns}); }

PolytopeRealization square_of(double s) {
  return realize(Vector::Constant(4, s), compile_cone(fixtures::square()));
}

}  // namespace

TEST(EvaluateObjective, Examples) {
  const auto sq = compile_cone(fixtures::square());
  const Vector one4 = Vector::Ones(4);
  EXPECT_NEAR(evaluate_objective(ObjectiveSpec::neg_volume(), one4, realize(one4, sq)), -4.0, 1e-12);

  const auto hex = compile_cone(fixtures::hexagon());
  const Vector one6 = Vector::Ones(6);
  EXPECT_NEAR(evaluate_objective(ObjectiveSpec::neg_volume(), one6, realize(one6, hex)), -2 * std::sqrt(3.0), 1e-12);

  for (int n : {8, 16, 33}) {
    const auto cone = compile_cone(fixtures::regular(n, 0.2));
    const auto p = project_coords(Body::ball(vec({0, 0}), 1.0), cone);
    const auto spec = resolve_objective(ObjectiveSpec::linear_support(ObjectiveSpec::Quadrature::Uniform), cone.normals);
    EXPECT_NEAR(spec.weights.sum(), 2 * kPi, 1e-12);
    EXPECT_NEAR(evaluate_objective(spec, p.coords.b, *p.realization), 2 * kPi, 1e-12);
  }
}

TEST(EvaluateObjective, TargetTrackingIsInfinityNorm) {
  const auto sq = compile_cone(fixtures::square());
  const Vector b = vec({1, 2, 1, 1});
  const auto spec = ObjectiveSpec::target_tracking(Vector(Vector::Ones(4)));
  EXPECT_NEAR(evaluate_objective(spec, b, realize(b, sq)), 1.0, 1e-15);
}

TEST(EvaluateObjective, ExteriorCoordinatesThrow) {
  const Vector b = vec({1, 1, -2, 1});
  try {
    evaluate_objective(ObjectiveSpec::neg_volume(), b, realize_polytope(b, fixtures::square().rows));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExteriorCoordinates);
  }
}

TEST(EvaluateObjective, LinearSupportIsLinear) {
  std::mt19937_64 rng(3);
  const auto cone = compile_cone(fixtures::regular(12));
  std::uniform_real_distribution<double> u(-1, 1);
  Vector w(12);
  for (int i = 0; i < 12; ++i) w(i) = u(rng);
  const auto spec = ObjectiveSpec::linear_support(w);
  for (int t = 0; t < 20; ++t) {
    const auto p = project_coords(fixtures::random_body(rng), cone);
    const auto q = project_coords(fixtures::random_body(rng), cone);
    const Vector mid = 0.3 * p.coords.b + 0.7 * q.coords.b;
    const double fm = evaluate_objective(spec, mid, realize(mid, cone));
    const double fp = evaluate_objective(spec, p.coords.b, *p.realization);
    const double fq = evaluate_objective(spec, q.coords.b, *q.realization);
    EXPECT_NEAR(fm, 0.3 * fp + 0.7 * fq, 1e-12);
  }
}

TEST(Volume, PlanarGradientIsFacetLength) {
  // d area / d b_i equals the length of facet i at interior points.
  std::mt19937_64 rng(4);
  const auto cone = compile_cone(fixtures::regular(10, 0.1));
  for (int t = 0; t < 20; ++t) {
    const auto p = project_interior(fixtures::random_body(rng), cone, 0.3);
    const Vector& b = p.coords.b;
    const double h = 1e-6 * (1 + b.cwiseAbs().maxCoeff());
    for (int i = 0; i < 10; ++i) {
      Vector bp = b, bm = b;
      bp(i) += h;
      bm(i) -= h;
      const double fd = (polytope_volume(realize_polytope(bp, cone.normals.rows)) -
                         polytope_volume(realize_polytope(bm, cone.normals.rows))) /
                        (2 * h);
      const double exact = facet_measure(*p.realization, i);
      EXPECT_LE(std::abs(fd - exact), 1e-5 * std::max(1.0, std::abs(exact))) << "facet " << i;
    }
  }
}

TEST(Volume, CubeAndSquare) {
  Matrix cube(6, 3);
  cube << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
  const auto cone = compile_cone(validate_normals(cube));
  const auto real = realize(Vector::Ones(6), cone);
  EXPECT_NEAR(polytope_volume(real), 8.0, 1e-12);
  EXPECT_NEAR(facet_measure(real, 2), 4.0, 1e-12);
  EXPECT_NEAR(polytope_perimeter(square_of(1.0)), 8.0, 1e-12);
}

TEST(TightenConstraints, ZeroKappaIsIdentity) {
  const auto sq = compile_cone(fixtures::square());
  const auto spec = ConstraintSpec::perimeter_le(2 * kPi);
  const auto shifted = tighten_constraints(spec, 0.0, 2.0);
  EXPECT_EQ(shifted.shift, 0.0);
  const Vector b = Vector::Ones(4);
  EXPECT_EQ(shifted.evaluate(b, realize(b, sq), sq.normals), evaluate_constraint(spec, b, realize(b, sq), sq.normals));
}

TEST(TightenConstraints, ShiftIsLKappaNorm) {
  const auto sq = compile_cone(fixtures::square());
  const auto spec = ConstraintSpec::perimeter_le(2 * kPi);
  EXPECT_NEAR(spec.lipschitz_L, 2 * kPi, 1e-15);
  const auto shifted = tighten_constraints(spec, 0.1, 2.0);
  EXPECT_NEAR(shifted.shift, 2 * kPi * 0.1 * 2.0, 1e-15);
  // Psi_k = Psi - shift, so Psi_k <= Psi and the accepted perimeter grows
  // to (1 + 0.2) 2 pi.
  const double s = 1.2 * 2 * kPi / 8;
  const Vector b = Vector::Constant(4, s);
  const auto real = realize(b, sq);
  EXPECT_NEAR(shifted.evaluate(b, real, sq.normals)(0), 0.0, 1e-12);
  EXPECT_LE(shifted.evaluate(b, real, sq.normals)(0), evaluate_constraint(spec, b, real, sq.normals)(0));
}

TEST(TightenConstraints, DeclaredLipschitzConstants) {
  Matrix dirs(2, 2);
  dirs << 1, 0, 0, 1;
  EXPECT_EQ(ConstraintSpec::support_box(dirs, vec({1, 1})).lipschitz_L, 1.0);
  EXPECT_EQ(ConstraintSpec::support_box(dirs, vec({1, 1})).count(), 2);
  EXPECT_EQ(ConstraintSpec::linear_support_le(vec({1, -2, 0.5}), 1.0).lipschitz_L, 3.5);
}

TEST(Constraints, FeasibleBallProjectsIntoTheLevelSet) {
  const auto seq = spherical_sequence(2, {2, 3, 4});
  for (int l = 0; l < seq.size(); ++l) {
    const auto cone = compile_cone(seq.levels[l]);
    const auto kappa = estimate_kappa(seq.levels[l], 720).kappa;
    const auto spec = ConstraintSpec::perimeter_le(2 * kPi);
    const auto shifted = tighten_constraints(spec, kappa, 2.0);
    for (double r : {0.5, 0.8, 0.95}) {
      const auto p = project_coords(Body::ball(vec({0.1, -0.2}), r), cone);
      EXPECT_LE(shifted.evaluate(p.coords.b, *p.realization, cone.normals)(0), 0.0) << "r = " << r << " level " << l;
      const Vector inner = project_coords(origin(), cone.normals).coords.b;
      const Vector outer = project_coords(Body::ball(vec({0, 0}), 2.0), cone.normals).coords.b;
      EXPECT_LE((inner - p.coords.b).maxCoeff(), 0.0);
      EXPECT_LE((p.coords.b - outer).maxCoeff(), 0.0);
    }
  }
}

TEST(SolveLevel, MaximizeLinearSupportHitsTheUpperBox) {
  auto pb = base_problem(single(fixtures::regular(12)));
  pb.objective = ObjectiveSpec::linear_support(ObjectiveSpec::Quadrature::Uniform);
  pb.objective.maximize = true;
  const auto r = solve_level(pb, 0);
  EXPECT_LE((r.b - Vector::Ones(12)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(r.objective, -2 * kPi, 1e-5);
  EXPECT_TRUE(r.feasibility.ok);
}

TEST(SolveLevel, BoxBodyMaximizesArea) {
  auto pb = base_problem(single(fixtures::square()));
  pb.outer_body = box_body();
  pb.objective = ObjectiveSpec::neg_volume();
  const auto r = solve_level(pb, 0);
  EXPECT_LE((r.b - Vector::Ones(4)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(r.objective, -4.0, 1e-5);
  EXPECT_EQ(r.n, 4);
  EXPECT_EQ(static_cast<int>(r.starts.size()), 2);
}

TEST(SolveLevel, FeasibilityInvariantsAreChecked) {
  auto pb = base_problem(spherical_sequence(2, {3}));
  pb.outer_body = Body::ball(vec({0, 0}), 2.0);
  pb.constraints = {ConstraintSpec::perimeter_le(2 * kPi)};
  pb.shift = ConstraintShift::None;
  const auto r = solve_level(pb, 0);
  const auto cone = prune_redundant(compile_cone(pb.sequence.levels[0]));
  const double eps = 1e-7 * (1 + r.b.cwiseAbs().maxCoeff());
  EXPECT_GE((cone.matrix(false, false).transpose() * r.b).minCoeff(), -eps);
  EXPECT_GE(r.b.minCoeff(), -eps);
  EXPECT_LE(r.b.maxCoeff(), 2.0 + eps);
  EXPECT_LE(r.constraint_values.maxCoeff(), eps);
  EXPECT_NEAR(polytope_perimeter(r.realization), 2 * kPi, 1e-5);
  // the regular 16-gon of perimeter 2 pi
  const double area = kPi * kPi / (16 * std::tan(kPi / 16));
  EXPECT_NEAR(r.objective, -area, 1e-4);
  EXPECT_GE(r.chosen_start, 0);
}

TEST(SolveLevel, InfeasibleConstraint) {
  auto pb = base_problem(single(fixtures::regular(8)));
  pb.inner_body = Body::ball(vec({0, 0}), 1.0);
  pb.outer_body = Body::ball(vec({0, 0}), 2.0);
  pb.constraints = {ConstraintSpec::perimeter_le(1.0)};
  pb.shift = ConstraintShift::None;
  try {
    solve_level(pb, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleLevel);
  }
}

TEST(SolveLevel, RejectsBadArguments) {
  auto pb = base_problem(single(fixtures::square()));
  pb.lambda = 1.0;
  EXPECT_THROW(solve_level(pb, 0), Error);
  pb.lambda = 0.1;
  EXPECT_THROW(solve_level(pb, 1), Error);
  pb.objective = ObjectiveSpec::linear_support(vec({1, 1}));
  EXPECT_THROW(solve_level(pb, 0), Error);
}

TEST(RunSequence, TargetTrackingReachesZero) {
  auto pb = base_problem(spherical_sequence(2, {2, 3, 4}));
  pb.outer_body = Body::ball(vec({0, 0}), 2.0);
  pb.objective = ObjectiveSpec::target_tracking(Body::ball(vec({0.1, 0}), 1.0));
  const auto res = run_sequence(pb);
  ASSERT_EQ(res.levels.size(), 3u);
  for (const auto& r : res.levels) {
    EXPECT_NEAR(r.objective, 0.0, 1e-5) << "level " << r.level_id;
    EXPECT_TRUE(r.feasibility.ok);
  }
  ASSERT_EQ(res.cross_level.size(), 2u);
  EXPECT_EQ(res.cross_level[1].level, 1);
  EXPECT_EQ(res.cross_level[1].level_next, 2);
}

TEST(RunSequence, SingleLevelEqualsSolveLevel) {
  auto pb = base_problem(spherical_sequence(2, {3}));
  pb.objective = ObjectiveSpec::neg_volume();
  pb.constraints = {ConstraintSpec::perimeter_le(5.0)};
  const auto seq = run_sequence(pb);
  const auto one = solve_level(pb, 0);
  ASSERT_EQ(seq.levels.size(), 1u);
  EXPECT_TRUE(seq.cross_level.empty());
  EXPECT_EQ(seq.levels[0].b, one.b);
  EXPECT_EQ(seq.levels[0].objective, one.objective);
}

TEST(RunSequence, WarmStartsAreAdmissible) {
  auto pb = base_problem(spherical_sequence(2, {2, 3}));
  pb.outer_body = Body::ball(vec({0, 0}), 2.0);
  pb.constraints = {ConstraintSpec::perimeter_le(2 * kPi)};
  pb.shift = ConstraintShift::None;
  const auto r0 = solve_level(pb, 0);
  const Vector e = embed_coordinates(r0.b, pb.sequence, 0, 1);
  const double radius = r0.realization.vertex_matrix().rowwise().norm().maxCoeff();
  const auto fine = prune_redundant(compile_cone(pb.sequence.levels[1]));
  const Vector w = (1 - pb.lambda) * e + pb.lambda * radius * Vector::Ones(e.size());
  EXPECT_EQ(classify(w, fine).classification, Classification::Interior);
  EXPECT_GT(w.minCoeff(), 0.0);
  const auto r1 = solve_level(pb, 1, e);
  EXPECT_EQ(r1.starts.front().name, "warm");
  EXPECT_TRUE(r1.starts.front().succeeded);
  EXPECT_TRUE(r1.feasibility.ok);
}

TEST(RunSequence, MultiStartIsDeterministicAcrossThreads) {
  auto pb = base_problem(spherical_sequence(2, {2, 3}));
  pb.outer_body = Body::ball(vec({0, 0}), 2.0);
  pb.constraints = {ConstraintSpec::perimeter_le(2 * kPi)};
  const auto a = run_sequence(pb);
  pb.solver.threads = 4;
  const auto b = run_sequence(pb);
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    EXPECT_EQ(a.levels[i].b, b.levels[i].b);
    EXPECT_EQ(a.levels[i].chosen_start, b.levels[i].chosen_start);
  }
}

TEST(SetDistance, Examples) {
  const auto p = square_of(1.0);
  const auto q = square_of(2.0);
  const auto same = set_distance({p}, {p});
  EXPECT_EQ(same.semi, 0.0);
  EXPECT_EQ(same.full, 0.0);
  const auto d = set_distance({p}, {q});
  EXPECT_NEAR(d.semi, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(d.full, std::sqrt(2.0), 1e-12);
  // {P} sits inside {P, Q} but not the other way round
  EXPECT_EQ(set_distance({p}, {p, q}).semi, 0.0);
  EXPECT_NEAR(set_distance({p, q}, {p}).semi, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(set_distance({p}, {p, q}).full, std::sqrt(2.0), 1e-12);
  EXPECT_THROW(set_distance({}, {p}), Error);
}
