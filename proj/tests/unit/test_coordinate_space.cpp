#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "polygal/coordinate_space.hpp"

using namespace polygal;
using fixtures::vec;

namespace {

struct Systems {
  CompiledCone square = compile_cone(fixtures::square());
  CompiledCone hexagon = compile_cone(fixtures::hexagon());
  CompiledCone n16 = prune_redundant(compile_cone(fixtures::regular(16)));
};

const Systems& systems() {
  static const Systems s;
  return s;
}

// Random interior coordinates: shifted projection of a random point hull.
Vector random_interior(std::mt19937_64& rng, const CompiledCone& cone) {
  const Body body = fixtures::random_point_hull(rng);
  Vector b(cone.normals.size());
  for (int i = 0; i < b.size(); ++i) b(i) = support(body, cone.normals.rows.row(i).transpose());
  return 0.8 * b + 0.2 * Vector::Ones(b.size());
}

}  // namespace

TEST(Classify, Examples) {
  const auto& s = systems();
  for (const auto* cone : {&s.square, &s.hexagon, &s.n16}) {
    EXPECT_EQ(classify(Vector::Ones(cone->normals.size()), *cone).classification, Classification::Interior);
  }
  const auto flat = classify(vec({1, 1, -1, 1}), s.square);
  EXPECT_EQ(flat.classification, Classification::Boundary);
  ASSERT_EQ(flat.active_columns.size(), 1u);
  EXPECT_LE((s.square.columns[flat.active_columns[0]].provenance.p - vec({0.5, 0, 0.5, 0})).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(classify(vec({1, 1, -2, 1}), s.square).classification, Classification::Exterior);
}

TEST(Classify, BandIsRelative) {
  const auto& s = systems();
  const double big = 1e6;
  Vector b = vec({big, big, -big, big});
  b(2) += 1e-4;  // activity 5e-5, inside the band 1e-9 (1 + 1e6)
  EXPECT_EQ(classify(b, s.square).classification, Classification::Boundary);
  b(2) += 1e-2;
  EXPECT_EQ(classify(b, s.square).classification, Classification::Interior);
}

TEST(Classify, ConeAxioms) {
  std::mt19937_64 rng(21);
  const auto& cone = systems().n16;
  for (int t = 0; t < 30; ++t) {
    const Vector bt = random_interior(rng, cone) - 0.3 * Vector::Ones(16);
    if (oracle::polygon_vertices(cone.normals.rows, bt).empty()) continue;
    const Vector b = canonicalize(bt, cone.normals).b;
    const Vector b2 = canonicalize(random_interior(rng, cone), cone.normals).b;
    ASSERT_NE(classify(b, cone).classification, Classification::Exterior);
    for (double lambda : {0.0, 0.5, 2.0, 10.0}) {
      EXPECT_NE(classify(lambda * b, cone).classification, Classification::Exterior);
    }
    EXPECT_NE(classify(b + b2, cone).classification, Classification::Exterior);
  }
}

TEST(Canonicalize, Examples) {
  const auto& s = systems();
  const auto hex = canonicalize(vec({3, 1, 1, 1, 1, 1}), s.hexagon);
  EXPECT_LE((hex.b - vec({2, 1, 1, 1, 1, 1})).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(hex.classification, Classification::Boundary);
  EXPECT_LE((canonicalize(Vector::Ones(4), s.square.normals).b - Vector::Ones(4)).cwiseAbs().maxCoeff(), 1e-12);
  // Row 1 is the only bound on x_1 from above, so it stays at 5.
  EXPECT_LE((canonicalize(vec({5, 1, 1, 1}), s.square.normals).b - vec({5, 1, 1, 1})).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Canonicalize, EmptyPolytopeThrows) {
  try {
    canonicalize(vec({1, 1, -2, 1}), systems().square.normals);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPolytope);
  }
}

TEST(Canonicalize, MinimalityAgainstBruteForce) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 2.0);
  const Matrix A = oracle::regular_normals(8, 0.1);
  const auto cone = compile_cone(validate_normals(A));
  for (int t = 0; t < 200; ++t) {
    Vector bt(8);
    for (int i = 0; i < 8; ++i) bt(i) = u(rng);
    if (oracle::polygon_vertices(A, bt).empty()) continue;
    const auto c = canonicalize(bt, cone);
    EXPECT_LE((c.b - bt).maxCoeff(), 1e-9);
    EXPECT_NE(c.classification, Classification::Exterior);
    for (int i = 0; i < 8; ++i) {
      EXPECT_NEAR(c.b(i), oracle::polygon_support(A, bt, A.row(i).transpose()), 1e-8);
    }
    EXPECT_TRUE(oracle::in_coordinate_cone(A, c.b, 1e-8));
  }
}

TEST(Realize, Examples) {
  const auto& s = systems();
  const auto sq = realize(Vector::Ones(4), s.square);
  ASSERT_EQ(sq.vertices.size(), 4u);
  for (const auto& f : sq.facet_active) EXPECT_EQ(f.size(), 2u);

  const auto hex = realize(Vector::Ones(6), s.hexagon);
  ASSERT_EQ(hex.vertices.size(), 6u);
  for (const auto& v : hex.vertices) EXPECT_NEAR(v.point.norm(), 2.0 / std::sqrt(3.0), 1e-12);

  const auto seg = realize(vec({1, 1, -1, 1}), s.square);
  ASSERT_EQ(seg.vertices.size(), 2u);
  EXPECT_EQ(seg.facet_active[0].size(), 2u);
  EXPECT_EQ(seg.facet_active[2].size(), 2u);
}

TEST(Realize, RejectsExterior) {
  try {
    realize(vec({1, 1, -2, 1}), systems().square);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExteriorCoordinates);
  }
}

TEST(SupportCoordinates, RoundTrips) {
  const auto& s = systems();
  EXPECT_EQ(support_coordinates(realize(Vector::Ones(4), s.square)), Vector::Ones(4));
  EXPECT_LE((support_coordinates(realize(Vector::Ones(6), s.hexagon)) - Vector::Ones(6)).cwiseAbs().maxCoeff(), 1e-12);
  const Vector c = canonicalize(vec({3, 1, 1, 1, 1, 1}), s.hexagon).b;
  EXPECT_LE((support_coordinates(realize(c, s.hexagon)) - vec({2, 1, 1, 1, 1, 1})).cwiseAbs().maxCoeff(), 1e-9);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const Vector b = random_interior(rng, s.n16);
    ASSERT_EQ(classify(b, s.n16).classification, Classification::Interior);
    EXPECT_LE((support_coordinates(realize(b, s.n16)) - b).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(HausdorffPolytopes, Examples) {
  const auto& s = systems();
  const auto one = realize(Vector::Ones(4), s.square);
  const auto two = realize(2.0 * Vector::Ones(4), s.square);
  const auto seg = realize(vec({1, 1, -1, 1}), s.square);
  EXPECT_NEAR(hausdorff_polytopes(one, two), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(hausdorff_polytopes(one, one), 0.0, 1e-14);
  EXPECT_NEAR(hausdorff_polytopes(one, seg), 2.0, 1e-12);
}

TEST(HausdorffPolytopes, MatchesPlanarOracle) {
  std::mt19937_64 rng(17);
  const auto& cone = systems().n16;
  for (int t = 0; t < 60; ++t) {
    const auto p = realize(random_interior(rng, cone), cone);
    const auto q = realize(random_interior(rng, cone), cone);
    const double ref =
        oracle::hull_hausdorff(fixtures::planar_vertices(p.vertex_matrix()), fixtures::planar_vertices(q.vertex_matrix()));
    EXPECT_NEAR(hausdorff_polytopes(p, q), ref, 1e-9);
  }
}

TEST(HausdorffPolytopes, InverseLipschitz) {
  std::mt19937_64 rng(23);
  const auto& cone = systems().n16;
  for (int t = 0; t < 100; ++t) {
    const Vector b = random_interior(rng, cone), b2 = random_interior(rng, cone);
    EXPECT_LE((b - b2).cwiseAbs().maxCoeff(), hausdorff_polytopes(realize(b, cone), realize(b2, cone)) + 1e-7);
  }
}

TEST(PointDistance, InsideAndOutside) {
  const auto sq = realize(Vector::Ones(4), systems().square);
  EXPECT_NEAR(point_distance(vec({0.2, -0.3}), sq), 0.0, 1e-14);
  EXPECT_NEAR(point_distance(vec({3, 0}), sq), 2.0, 1e-12);
  EXPECT_NEAR(point_distance(vec({2, 2}), sq), std::sqrt(2.0), 1e-12);
}

TEST(FacetDimension, Examples) {
  const auto& s = systems();
  const auto sq = realize(Vector::Ones(4), s.square);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(facet_dimension(sq, k), 1);
  EXPECT_EQ(facet_dimension(realize(vec({2, 1, 1, 1, 1, 1}), s.hexagon), 0), 0);
  EXPECT_EQ(polytope_dimension(realize(vec({1, 1, -1, 1}), s.square)), 1);
  EXPECT_EQ(facet_dimension(realize_polytope(vec({5, 1, 1, 1}), s.square.normals.rows), 0), 1);
  EXPECT_EQ(facet_dimension(realize_polytope(vec({3, 1, 1, 1, 1, 1}), s.hexagon.normals.rows), 0), -1);
}

TEST(DiagnoseBoundary, Examples) {
  const auto& s = systems();
  const auto hex = diagnose_boundary(vec({2, 1, 1, 1, 1, 1}), s.hexagon);
  EXPECT_FALSE(hex.flat);
  EXPECT_EQ(hex.degenerate_facets, (IndexSet{0}));
  ASSERT_EQ(hex.facet_witnesses.size(), 1u);
  EXPECT_EQ(hex.facet_witnesses[0].vertex.support, (IndexSet{1, 5}));
  EXPECT_TRUE(hex.geometry_consistent);

  const auto sq = diagnose_boundary(vec({1, 1, -1, 1}), s.square);
  EXPECT_TRUE(sq.flat);
  ASSERT_EQ(sq.flat_witnesses.size(), 1u);
  EXPECT_LE((sq.flat_witnesses[0].vertex.p - vec({0.5, 0, 0.5, 0})).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(sq.geometry_consistent);

  const auto in = diagnose_boundary(Vector::Ones(6), s.hexagon);
  EXPECT_FALSE(in.flat);
  EXPECT_TRUE(in.degenerate_facets.empty());
  EXPECT_TRUE(in.flat_witnesses.empty());
  EXPECT_TRUE(in.facet_witnesses.empty());

  EXPECT_THROW(diagnose_boundary(vec({1, 1, -2, 1}), s.square), Error);
}

TEST(DiagnoseBoundary, StratumConsistencyOnCanonicalizedCoordinates) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const auto cone = compile_cone(fixtures::regular(8, 0.2));
  for (int t = 0; t < 150; ++t) {
    Vector bt(8);
    for (int i = 0; i < 8; ++i) bt(i) = u(rng);
    const CoordinateVector c = canonicalize(bt, cone);
    if (c.classification != Classification::Boundary) continue;
    const auto rep = diagnose_boundary(c.b, cone);
    const auto real = realize(c.b, cone);
    EXPECT_EQ(rep.flat, polytope_dimension(real) <= 1);
    EXPECT_TRUE(rep.geometry_consistent);
    if (!rep.flat) {
      for (int k = 0; k < 8; ++k) {
        const bool degenerate = facet_dimension(real, k) <= 0;
        const bool listed = std::count(rep.degenerate_facets.begin(), rep.degenerate_facets.end(), k) > 0;
        EXPECT_EQ(degenerate, listed) << "k = " << k;
      }
    }
  }
}

TEST(DiagnoseBoundary, ActiveTouchingRowIsAlgebraicallyRedundant) {
  const auto& s = systems();
  const Vector b = vec({2, 1, 1, 1, 1, 1});
  // Dropping row 0 leaves the same polytope.
  Matrix reduced = s.hexagon.normals.rows.bottomRows(5);
  const auto r = canonicalize(b.tail(5), validate_normals(reduced));
  EXPECT_LE((r.b - b.tail(5)).cwiseAbs().maxCoeff(), 1e-9);
  const auto full = realize(b, s.hexagon);
  const auto part = realize_polytope(b.tail(5), reduced);
  EXPECT_NEAR(hausdorff_polytopes(full, part), 0.0, 1e-9);
}
