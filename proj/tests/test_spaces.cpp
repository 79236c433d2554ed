#include <gtest/gtest.h>

#include <cmath>

#include "hadamard/hadamard.hpp"
#include "oracles.hpp"

using namespace hadamard;

namespace {

constexpr std::uint64_t kSeed = 20260817ull;

std::vector<SpaceHandle> model_spaces() {
  return {make_euclidean(2), make_euclidean(5), make_spike(12),
          make_book(6, 1.0), make_halfplane()};
}

Point sample(const SpaceHandle& s, Rng& rng) {
  return sample_point(s, rng, SampleWindow{});
}

}  // namespace

TEST(Euclidean, FrozenDistances) {
  const auto s = make_euclidean(2);
  EXPECT_DOUBLE_EQ(distance(s, euclidean_pt({0, 0}), euclidean_pt({3, 4})), 5.0);
  EXPECT_NEAR(distance(s, euclidean_pt({0, 0}), euclidean_pt({1, 1})),
              std::sqrt(2.0), 1e-15);
}

TEST(Euclidean, GeodesicQuarterPoint) {
  const auto s = make_euclidean(1);
  const Geodesic g = make_geodesic(s, euclidean_pt({0}), euclidean_pt({4}));
  const Point p = geodesic_point(s, g, 0.25);
  EXPECT_NEAR(std::get<EuclideanPt>(p).x[0], 1.0, 1e-15);
}

TEST(Spike, FrozenDistances) {
  const auto s = make_spike(5);
  EXPECT_DOUBLE_EQ(distance(s, spike_pt(1, 0.5), spike_pt(1, 0.25)), 0.25);
  EXPECT_DOUBLE_EQ(distance(s, spike_pt(2, 2), spike_pt(3, 3)), 5.0);
  // the origin is one point shared by all branches
  EXPECT_TRUE(points_equal(s, spike_pt(3, 0.0), spike_pt(1, 0.0)));
  EXPECT_DOUBLE_EQ(distance(s, spike_pt(4, 0.0), spike_pt(2, 1.5)), 1.5);
}

TEST(Spike, CrossBranchGeodesicPassesOrigin) {
  const auto s = make_spike(4);
  const Geodesic g = make_geodesic(s, spike_pt(2, 2), spike_pt(3, 3));
  EXPECT_DOUBLE_EQ(g.length, 5.0);
  EXPECT_NEAR(distance(s, geodesic_point(s, g, 0.4), spike_pt(1, 0.0)), 0.0,
              1e-15);
  EXPECT_NEAR(distance(s, geodesic_point(s, g, 0.5), spike_pt(3, 0.5)), 0.0,
              1e-12);
  EXPECT_NEAR(distance(s, geodesic_point(s, g, 1.0), spike_pt(3, 3)), 0.0,
              1e-12);
}

TEST(Book, FrozenDistances) {
  const auto s = make_book(6, 1.0);
  const Point A = book_pt(1, 0.0, 0.0);
  const Point B = book_pt(1, 1.0, 0.0);
  const Point C2 = book_pt(2, 0.0, 1.0);
  const Point C3 = book_pt(3, 0.0, 1.0);
  const Point C5 = book_pt(5, 0.0, 1.0);
  EXPECT_NEAR(distance(s, C2, C3), 2.0, 1e-15);
  EXPECT_NEAR(distance(s, A, C5), 1.0, 1e-15);
  EXPECT_NEAR(distance(s, C2, B), std::sqrt(2.0), 1e-15);
  // cross-page spot value: unfolding gives hypot(0.3 - 0.7, 0.4 + 0.2)
  EXPECT_NEAR(distance(s, book_pt(2, 0.3, 0.4), book_pt(5, 0.7, 0.2)),
              0.7211102550927979, 1e-15);
}

TEST(Book, SpinePointsAreSharedAcrossPages) {
  const auto s = make_book(6, 1.0);
  EXPECT_TRUE(points_equal(s, book_pt(4, 0.4, 0.0), book_pt(1, 0.4, 0.0)));
  // distance from a spine point to the apex is page-independent
  const Point on_spine = book_pt(3, 0.25, 0.0);
  const double ref = distance(s, on_spine, book_pt(2, 0.0, 1.0));
  for (int n = 3; n <= 6; ++n)
    EXPECT_DOUBLE_EQ(distance(s, on_spine, book_pt(n, 0.0, 1.0)), ref);
}

TEST(Book, CrossPageAgreesWithSpineGridOracle) {
  const auto s = make_book(6, 1.0);
  Rng rng = derive_rng(kSeed, 1);
  int done = 0;
  while (done < 150) {
    const auto pa = std::get<BookPt>(sample(s, rng));
    const auto pb = std::get<BookPt>(sample(s, rng));
    // grid resolution limits the oracle when a point hugs the spine
    if (pa.v < 0.01 || pb.v < 0.01 || pa.page == pb.page) continue;
    ++done;
    const double lib = distance(s, Point{pa}, Point{pb});
    const double grid = oracle::book_cross_oracle(1.0, pa, pb, 10000);
    EXPECT_NEAR(lib, grid, 1e-6) << "pages " << pa.page << "," << pb.page;
    EXPECT_LE(lib, grid + 1e-12);  // grid search can only overestimate
  }
}

TEST(Book, WiderLegScalesConsistently) {
  const auto s = make_book(4, 2.5);
  const Point p = book_pt(2, 0.75, 1.0);
  const Point q = book_pt(3, 0.5, 0.25);
  const double grid =
      oracle::book_cross_oracle(2.5, std::get<BookPt>(p), std::get<BookPt>(q), 20000);
  EXPECT_NEAR(distance(s, p, q), grid, 1e-6);
}

TEST(HalfPlane, FrozenDistances) {
  const auto s = make_halfplane();
  EXPECT_NEAR(distance(s, halfplane_pt(0, 1), halfplane_pt(0, 2)),
              std::log(2.0), 1e-15);
  EXPECT_NEAR(distance(s, halfplane_pt(-1, 1), halfplane_pt(1, 1)),
              std::acosh(3.0), 1e-14);
}

TEST(HalfPlane, GeodesicMidpointOnUnitCircleArc) {
  const auto s = make_halfplane();
  const Geodesic g = make_geodesic(s, halfplane_pt(-1, 1), halfplane_pt(1, 1));
  const auto m = std::get<HalfPlanePt>(geodesic_point(s, g, 0.5));
  EXPECT_NEAR(m.x, 0.0, 1e-12);
  EXPECT_NEAR(m.y, std::sqrt(2.0), 1e-12);
}

TEST(HalfPlane, VerticalGeodesic) {
  const auto s = make_halfplane();
  const Geodesic g = make_geodesic(s, halfplane_pt(0, 1), halfplane_pt(0, 4));
  const auto m = std::get<HalfPlanePt>(geodesic_point(s, g, 0.5));
  EXPECT_NEAR(m.x, 0.0, 1e-15);
  EXPECT_NEAR(m.y, 2.0, 1e-12);
}

TEST(HalfPlane, DistanceMatchesArcLengthIntegral) {
  const auto s = make_halfplane();
  // oracle sanity on the one case with a closed form
  EXPECT_NEAR(oracle::halfplane_arclength({0.3, 0.5}, {0.3, 4.0}),
              std::log(8.0), 1e-10);
  Rng rng = derive_rng(kSeed, 2);
  for (int i = 0; i < 60; ++i) {
    const auto a = std::get<HalfPlanePt>(sample(s, rng));
    const auto b = std::get<HalfPlanePt>(sample(s, rng));
    const double d = distance(s, Point{a}, Point{b});
    EXPECT_NEAR(d, oracle::halfplane_arclength(a, b), 1e-8 * (1.0 + d));
  }
}

TEST(Metric, SymmetryAndIdentity) {
  Rng rng = derive_rng(kSeed, 3);
  for (const auto& s : model_spaces()) {
    for (int i = 0; i < 100; ++i) {
      const Point a = sample(s, rng);
      const Point b = sample(s, rng);
      EXPECT_DOUBLE_EQ(distance(s, a, b), distance(s, b, a));
      EXPECT_DOUBLE_EQ(distance(s, a, a), 0.0);
      EXPECT_GE(distance(s, a, b), 0.0);
    }
  }
}

TEST(Metric, TriangleInequality) {
  Rng rng = derive_rng(kSeed, 4);
  for (const auto& s : model_spaces()) {
    for (int i = 0; i < 300; ++i) {
      const Point a = sample(s, rng);
      const Point b = sample(s, rng);
      const Point c = sample(s, rng);
      const double ab = distance(s, a, b);
      const double bc = distance(s, b, c);
      const double ac = distance(s, a, c);
      EXPECT_LE(ac, ab + bc + 1e-12 * (1.0 + ab + bc));
    }
  }
}

TEST(Metric, GeodesicsHaveConstantSpeed) {
  Rng rng = derive_rng(kSeed, 5);
  for (const auto& s : model_spaces()) {
    for (int i = 0; i < 40; ++i) {
      const Point a = sample(s, rng);
      const Point b = sample(s, rng);
      const Geodesic g = make_geodesic(s, a, b);
      if (g.length <= 1e-9) continue;
      for (int u = 0; u <= 4; ++u)
        for (int v = u + 1; v <= 4; ++v) {
          const double t1 = u / 4.0, t2 = v / 4.0;
          const double d = distance(s, geodesic_point(s, g, t1),
                                    geodesic_point(s, g, t2));
          EXPECT_NEAR(d, (t2 - t1) * g.length, 1e-9 * (1.0 + g.length))
              << kind_name(s.kind) << " draw " << i;
        }
    }
  }
}

TEST(Metric, GeodesicEndpointsAreExact) {
  Rng rng = derive_rng(kSeed, 6);
  for (const auto& s : model_spaces()) {
    for (int i = 0; i < 40; ++i) {
      const Point a = sample(s, rng);
      const Point b = sample(s, rng);
      const Geodesic g = make_geodesic(s, a, b);
      EXPECT_LE(distance(s, geodesic_point(s, g, 0.0), a),
                1e-12 * (1.0 + g.length));
      EXPECT_LE(distance(s, geodesic_point(s, g, 1.0), b),
                1e-12 * (1.0 + g.length));
    }
  }
}

TEST(Metric, DegenerateGeodesicStaysPut) {
  const auto s = make_euclidean(2);
  const Point a = euclidean_pt({0.5, -1.0});
  const Geodesic g = make_geodesic(s, a, a);
  EXPECT_DOUBLE_EQ(g.length, 0.0);
  EXPECT_TRUE(points_equal(s, geodesic_point(s, g, 0.7), a));
}

TEST(Cat0, CnInequalityFrozenSpikeTriple) {
  const auto s = make_spike(3);
  const CnReport rep = check_cn_inequality(s, spike_pt(1, 1), spike_pt(2, 1),
                                           spike_pt(3, 1), 1e-9);
  EXPECT_TRUE(rep.satisfied);
  EXPECT_DOUBLE_EQ(rep.lhs, 1.0);
  EXPECT_DOUBLE_EQ(rep.rhs, 3.0);
  EXPECT_DOUBLE_EQ(rep.residual, 2.0);
}

TEST(Cat0, CnInequalityFrozenHalfplaneTriple) {
  const auto s = make_halfplane();
  const CnReport rep = check_cn_inequality(
      s, halfplane_pt(0, 1), halfplane_pt(-1, 1), halfplane_pt(1, 1), 1e-9);
  EXPECT_TRUE(rep.satisfied);
  EXPECT_GT(rep.residual, 0.0);  // strictly negative curvature shows up here
  EXPECT_NEAR(rep.residual, 0.029326628933531232, 1e-12);
}

TEST(Cat0, CnInequalityHoldsOnRandomTriples) {
  Rng rng = derive_rng(kSeed, 7);
  for (const auto& s : model_spaces()) {
    for (int i = 0; i < 400; ++i) {
      const Point p = sample(s, rng);
      const Point q = sample(s, rng);
      const Point r = sample(s, rng);
      const CnReport rep = check_cn_inequality(s, p, q, r, 1e-9);
      EXPECT_TRUE(rep.satisfied) << kind_name(s.kind) << " draw " << i;
      EXPECT_GE(rep.residual, -1e-9);
    }
  }
}

TEST(Validation, RejectsMalformedInput) {
  EXPECT_THROW(make_euclidean(0), input_error);
  EXPECT_THROW(make_spike(0), input_error);
  EXPECT_THROW(make_book(2, 0.0), input_error);
  EXPECT_THROW(euclidean_pt({}), input_error);
  EXPECT_THROW(spike_pt(0, 1.0), input_error);
  EXPECT_THROW(spike_pt(1, -0.5), input_error);
  EXPECT_THROW(book_pt(1, -0.1, 0.0), input_error);
  EXPECT_THROW(halfplane_pt(0.0, 0.0), input_error);
  EXPECT_THROW(halfplane_pt(0.0, -2.0), input_error);

  const auto plane = make_euclidean(2);
  EXPECT_THROW(distance(plane, euclidean_pt({1}), euclidean_pt({0, 0})),
               input_error);
  const auto spike = make_spike(3);
  EXPECT_THROW(distance(spike, spike_pt(4, 1.0), spike_pt(1, 0.5)),
               input_error);
  const auto book = make_book(3, 1.0);
  EXPECT_THROW(distance(book, book_pt(1, 0.8, 0.4), book_pt(1, 0, 0)),
               input_error);  // u + v exceeds the leg
  EXPECT_THROW(distance(book, book_pt(4, 0.1, 0.1), book_pt(1, 0, 0)),
               input_error);

  const Geodesic g = make_geodesic(plane, euclidean_pt({0, 0}),
                                   euclidean_pt({1, 0}));
  EXPECT_THROW(geodesic_point(plane, g, 1.5), input_error);
  EXPECT_THROW(geodesic_point(plane, g, -0.1), input_error);
  EXPECT_THROW(closed_ball(euclidean_pt({0, 0}), 0.0), input_error);
}
