#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace mancala_flow;
using R = Rational;
using P = Polygonal<Rational>;

namespace {

R q(long long p, long long d = 1) { return make_rational(p, d); }

const P& riemann_ell() {
  static const P ell = solve_ell(fixtures::riemann(), R(13)).ell;
  return ell;
}

}  // namespace

// ------------------------------------------------------------ rationals

TEST(Rational, RendersLowestTerms) {
  EXPECT_EQ(to_string(q(6, 4)), "3/2");
  EXPECT_EQ(to_string(q(-2, -4)), "1/2");
  EXPECT_EQ(to_string(R(3)), "3/1");
  EXPECT_EQ(to_string(R(0)), "0/1");
}

TEST(Rational, ParsesIntegersAndFractions) {
  EXPECT_EQ(parse_rational("7"), R(7));
  EXPECT_EQ(parse_rational("-3/9"), q(-1, 3));
  EXPECT_THROW(parse_rational("1.5"), parse_error);
  EXPECT_THROW(parse_rational("1/0"), parse_error);
  EXPECT_THROW(parse_rational("1/-2"), parse_error);
  EXPECT_THROW(parse_rational(""), parse_error);
}

TEST(Rational, ExactSquareRoots) {
  EXPECT_EQ(*exact_sqrt(q(9, 4)), q(3, 2));
  EXPECT_FALSE(exact_sqrt(R(2)).has_value());
  EXPECT_EQ(floor_of(q(-1, 2)), -1);
  EXPECT_EQ(ceil_of(q(1, 2)), 1);
}

// ------------------------------------------------------------ construction and evaluation

TEST(Polygonal, NormalizesZeroLengthAndCollinearPieces) {
  P f({{R(0), R(1), R(0)}, {R(1), R(1), R(1)}, {R(1), R(0), R(5)}, {R(2), R(0), R(5)}});
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.pieces()[0].slope, R(1));
  EXPECT_EQ(f.tail().start, R(1));
  EXPECT_EQ(f.tail_kind(), TailKind::constant);
}

TEST(Polygonal, TailKinds) {
  EXPECT_EQ(fixtures::riemann().tail_kind(), TailKind::zero);
  EXPECT_EQ(fixtures::constant_one().tail_kind(), TailKind::constant);
  EXPECT_EQ(P::identity().tail_kind(), TailKind::affine);
}

TEST(Polygonal, RiemannBoundaryLimitsAtFirstJump) {
  EXPECT_EQ(riemann_ell().eval(R(1), Side::right), R(1));
  EXPECT_EQ(riemann_ell().eval(R(1), Side::left), R(2));
}

TEST(Polygonal, RiemannBoundaryOnDecreasingPiece) { EXPECT_EQ(riemann_ell()(q(5, 2)), q(17, 12)); }

TEST(Polygonal, ConstantEvaluatesEverywhere) {
  P c = P::constant(q(7, 3));
  for (R t : {R(0), q(1, 2), R(40)}) {
    EXPECT_EQ(c.eval(t, Side::right), q(7, 3));
    if (R(0) < t) EXPECT_EQ(c.eval(t, Side::left), q(7, 3));
  }
}

TEST(Polygonal, EvaluationDomainErrors) {
  EXPECT_THROW(riemann_ell()(R(-1)), domain_error);
  EXPECT_THROW(riemann_ell().eval(R(0), Side::left), domain_error);
}

TEST(Polygonal, RightContinuityAtEveryBreakpoint) {
  const P& ell = riemann_ell();
  for (const R& b : ell.breakpoints()) {
    for (int k = 1; k <= 6; ++k) {
      R eps = R(1) / R(1LL << (3 * k));
      R near = ell(b + eps);
      EXPECT_LE(abs(near - ell(b)), R(2) * eps) << to_string(b);
    }
  }
}

// ------------------------------------------------------------ algebra

TEST(PolygonalAlgebra, AddIdentityToFirstPiece) {
  P l = riemann_ell() + P::identity();
  EXPECT_EQ(l.pieces()[0].value, R(1));
  EXPECT_EQ(l.pieces()[0].slope, R(2));
}

TEST(PolygonalAlgebra, AddZeroIsNeutral) {
  EXPECT_EQ(riemann_ell() + P::constant(R(0)), riemann_ell());
}

TEST(PolygonalAlgebra, SecondRiemannPiecePlusIdentity) {
  P l = riemann_ell() + P::identity();
  for (R t : {R(1), q(5, 4), q(3, 2), q(19, 10)}) EXPECT_EQ(l(t), q(3, 2) * t + q(1, 2));
}

TEST(PolygonalAlgebra, MergedBreakpointsAreUnion) {
  P a = fixtures::riemann(), b = fixtures::box(R(3));
  auto bps = merged_breakpoints(a, b, R(0));
  EXPECT_EQ(bps, (std::vector<R>{R(0), R(1), R(3)}));
}

TEST(PolygonalAlgebra, TranslateClipTruncateSplice) {
  P f = P::identity();
  EXPECT_EQ(translate(f, R(2))(R(1)), R(3));
  EXPECT_EQ(clip(f, R(4)).origin(), R(4));
  P t = truncate_after(fixtures::hat(), q(1, 2));
  EXPECT_EQ(t(R(5)), q(5, 2));  // tail extends the last kept piece
  P s = splice(P::constant(R(0)), R(2), P::constant(R(1), R(2)));
  EXPECT_EQ(s(R(1)), R(0));
  EXPECT_EQ(s(R(2)), R(1));
}

// ------------------------------------------------------------ integrals

TEST(Mass, UnitBox) { EXPECT_EQ(mass(fixtures::riemann(), R(0)), R(1)); }

TEST(Mass, StationaryProfile) { EXPECT_EQ(mass(fixtures::stationary_m2(), R(0)), R(2)); }

TEST(Mass, RiemannSliceAtHalf) {
  auto field = make_field(fixtures::riemann(), R(2));
  P u = u_slice(field, q(1, 2));
  EXPECT_EQ(mass(u, R(0)), R(1));
  EXPECT_NEAR(oracle::integrate(oracle::as_fn(u), 0, 3, 300000), 1.0, 1e-5);
}

TEST(Mass, DivergentTail) {
  EXPECT_THROW(mass(fixtures::constant_one(), R(0)), divergence_error);
  EXPECT_EQ(mass(fixtures::constant_one(), R(0), std::optional<R>(R(3))), R(3));
}

TEST(Mass, Additivity) {
  std::mt19937 rng(11);
  for (int k = 0; k < 20; ++k) {
    P f = oracle::random_datum(rng, 4, false);
    R a = q(k % 3, 2), b = a + q(k, 7), c = b + q(k + 1, 5);
    EXPECT_EQ(mass(f, a, std::optional<R>(b)) + mass(f, b, std::optional<R>(c)), mass(f, a, std::optional<R>(c)));
  }
}

// ------------------------------------------------------------ level sets

TEST(Sublevel, RiemannFirstBranch) {
  P l = riemann_ell() + P::identity();
  for (R s : {R(1), q(5, 4), q(3, 2), q(15, 8)}) EXPECT_EQ(sublevel_measure(l, s, s), (s - 1) / 2);
}

TEST(Sublevel, BelowMinimumIsEmpty) {
  P l = riemann_ell() + P::identity();
  EXPECT_EQ(sublevel_measure(l, q(1, 2), R(5)), R(0));
}

TEST(Sublevel, RiemannAtThree) {
  // [0, 1) contributes 1 and [1, 5/3] contributes 2/3
  P l = riemann_ell() + P::identity();
  R s3 = sublevel_measure(l, R(3), R(3));
  EXPECT_EQ(s3, q(5, 3));
  EXPECT_NEAR(to_double(s3), oracle::sublevel_count(oracle::as_fn(l), 3.0, 3.0, 1e-5), 1e-4);
}

TEST(Sublevel, MonotoneInLevelAndCap) {
  P l = riemann_ell() + P::identity();
  R prev(0);
  for (int k = 0; k <= 60; ++k) {
    R lv = q(k, 4);
    R m = sublevel_measure(l, lv, R(12));
    EXPECT_LE(prev, m);
    prev = m;
    R lo = sublevel_measure(l, lv, R(6));
    EXPECT_LE(lo, m);
    EXPECT_LE(m - lo, R(6));
  }
}

TEST(Sublevel, GrowthRateInLevelExceedsOneWhereLIsFlat) {
  // slopes 3/2 on [1, 2) and 5/6 on [2, 3): rate 2/3 + 6/5 between levels 5/2 and 11/4
  P l = riemann_ell() + P::identity();
  R a = sublevel_measure(l, q(5, 2), R(13)), b = sublevel_measure(l, q(11, 4), R(13));
  EXPECT_GT(b - a, q(1, 4));
}

TEST(Sublevel, AgreesWithGridCountOnRandomData) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> lv(0, 40), cp(1, 40);
  const double h = 1e-3;
  for (int trial = 0; trial < 5; ++trial) {
    P f = oracle::random_datum(rng, 2, false);
    auto fn = oracle::as_fn(f);
    for (int k = 0; k < 20; ++k) {
      R level = q(lv(rng), 8), cap = q(cp(rng), 4);
      double exact = to_double(sublevel_measure(f, level, cap));
      EXPECT_NEAR(exact, oracle::sublevel_count(fn, to_double(level), to_double(cap), h), 4 * h);
    }
  }
}

TEST(Sublevel, DistributionMatchesPointwiseMeasure) {
  P l = riemann_ell() + P::identity();
  P d = sublevel_distribution(l, R(0), R(6), R(1), std::optional<R>(R(7)));
  for (int k = 4; k <= 28; ++k) EXPECT_EQ(d(q(k, 4)), sublevel_measure(l, q(k, 4), R(0), R(6)));
}

TEST(Antidiagonal, RiemannRestrictedAtThreeHalves) {
  P ell = truncate_after(riemann_ell(), q(3, 2));
  R m = antidiagonal_superlevel_measure(ell, q(3, 2));
  EXPECT_EQ(m, q(5, 4));
  auto fn = oracle::as_fn(ell);
  double grid = 1.5 - oracle::sublevel_count([&](double s) { return fn(s) + s; }, 1.5, 1.5, 1e-5);
  EXPECT_NEAR(to_double(m), grid, 1e-4);
}

TEST(Antidiagonal, ZeroFunction) {
  for (R t : {R(0), q(1, 3), R(7)}) EXPECT_EQ(antidiagonal_superlevel_measure(P::constant(R(0)), t), R(0));
}

TEST(Antidiagonal, ConstantDatumFirstBlock) {
  P ell = truncate_after(P::affine(R(1), R(1)), R(1));
  EXPECT_EQ(antidiagonal_superlevel_measure(ell, R(1)), R(1));
}

TEST(Antidiagonal, RangeWithinZeroAndT) {
  for (int k = 0; k <= 52; ++k) {
    R t = q(k, 4), m = antidiagonal_superlevel_measure(riemann_ell(), t);
    EXPECT_LE(R(0), m);
    EXPECT_LE(m, t);
  }
}

// ------------------------------------------------------------ shear and rearrangement

TEST(Shear, MovesPointRightByHeight) {
  PlanarChain<R> c{{{R(2), q(3, 2), false}}, true};
  auto r = transform_R(c);
  EXPECT_EQ(r.vertices[0].t, q(7, 2));
  EXPECT_EQ(r.vertices[0].s, q(3, 2));
}

TEST(Shear, SlopeMinusOneBecomesVertical) {
  EXPECT_TRUE(r_image_slope(ExtSlope<R>::finite(R(-1))).is_neg_inf());
  PlanarChain<R> c{{{R(0), R(2), false}, {R(1), R(1), false}}, true};
  auto r = transform_R(c);
  EXPECT_EQ(r.vertices[0].t, r.vertices[1].t);
}

TEST(Shear, SlopeOneBecomesOneHalf) {
  EXPECT_EQ(r_image_slope(ExtSlope<R>::finite(R(1))), ExtSlope<R>::finite(q(1, 2)));
  PlanarChain<R> c{{{R(0), R(0), false}, {R(1), R(1), false}}, true};
  auto r = transform_R(c);
  EXPECT_EQ((r.vertices[1].s - r.vertices[0].s) / (r.vertices[1].t - r.vertices[0].t), q(1, 2));
}

TEST(Shear, MapsLinesThroughMinusOne) {
  for (int n = 0; n < 8; ++n) {
    R a = riemann_alpha(n);
    for (R s : {q(1, 3), R(1), R(2)}) {
      R t = s / a - 1;  // on s = a (t + 1)
      PlanarChain<R> c{{{t, s, false}}, true};
      auto img = transform_R(c).vertices[0];
      EXPECT_EQ(img.s, riemann_alpha(n + 1) * (img.t + 1));
    }
  }
}

TEST(Shear, PreservesArea) {
  for (R b : {R(3), R(13)}) {
    auto c = subgraph_boundary(riemann_ell(), R(0), b);
    auto img = transform_R(c);
    EXPECT_EQ(polygon_area(c), polygon_area(img));
    std::vector<std::pair<double, double>> pts;
    for (const auto& v : detail::closed_vertices(img)) pts.emplace_back(to_double(v.t), to_double(v.s));
    EXPECT_NEAR(oracle::shoelace(pts), to_double(polygon_area(img)), 1e-9);
  }
}

TEST(Rearrangement, FirstZigZagInterpolatesExtrema) {
  // the jump at t = 1 is sheared onto the fold (3, 2) -> (2, 1)
  auto img = transform_R(subgraph_boundary(riemann_ell(), R(0), R(3)));
  EXPECT_FALSE(img.graph_like);
  P rr = rearrange_vertical(img);
  EXPECT_EQ(rr(R(2)), q(3, 2));
  EXPECT_EQ(rr.left_limit(R(3)), q(4, 3));
  EXPECT_EQ(rr(q(5, 2)), (q(3, 2) + q(4, 3)) / 2);
  for (R t : {R(2), q(9, 4), q(5, 2), q(11, 4)}) EXPECT_EQ(rr(t), riemann_ell()(t));
}

TEST(Rearrangement, GraphLikeRegionIsUnchanged) {
  P f = fixtures::hat();
  auto c = subgraph_boundary(f, R(0), R(2));
  P rr = rearrange_vertical(c);
  EXPECT_TRUE(equal_on(rr, f, R(0), R(2)));
  EXPECT_EQ(rr(R(3)), R(0));
}

TEST(Rearrangement, PreservesAreaAndSlices) {
  for (auto fx : fixtures::standard()) {
    if (fx.datum.tail_kind() != TailKind::zero) continue;
    auto sol = solve_general(fx.datum, fx.horizon);
    auto img = transform_R(subgraph_boundary(sol.ell, R(0), fx.horizon));
    P rr = rearrange_vertical(img);
    EXPECT_EQ(mass(rr, rr.origin()), polygon_area(img)) << fx.name;
    for (int k = 0; k <= 40; ++k) {
      R x = q(k, 40) * (fx.horizon + fx.horizon / 2) + q(1, 97);
      EXPECT_EQ(rr(x), slice_measure(img, x)) << fx.name << " at " << to_string(x);
    }
  }
}

TEST(Rearrangement, ChainBelowAxisRejected) {
  PlanarChain<R> c{{{R(0), R(1), false}, {R(1), R(-1), false}}, true};
  EXPECT_THROW(polygon_area(c), domain_error);
}

// ------------------------------------------------------------ critical structure

TEST(Critical, RiemannJumpsAreTheCriticalItems) {
  auto cs = critical_segments(riemann_ell(), R(0), R(13));
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].t_begin, R(1));
  EXPECT_TRUE(cs[0].slope.is_neg_inf());
  EXPECT_EQ(cs[1].t_begin, R(11));
  EXPECT_TRUE(cs[1].slope.is_neg_inf());
  // their R-images fold back over the windows selected by the rearrangement
  EXPECT_EQ(cs[0].fold_lo, R(2));
  EXPECT_EQ(cs[0].fold_hi, R(3));
  EXPECT_EQ(cs[1].fold_lo, q(37, 3));
  EXPECT_EQ(cs[1].fold_hi, q(25, 2));
}

TEST(Critical, SlopeMinusSeventyOneNinetiethsIsNotCritical) {
  EXPECT_EQ(riemann_ell().slope_at(q(149, 12)), q(-71, 90));
  auto cs = critical_segments(riemann_ell(), R(2), R(13));
  for (const auto& c : cs) EXPECT_FALSE(c.t_begin < R(11) && R(2) <= c.t_begin && c.t_end <= R(3));
  for (const auto& c : cs) EXPECT_NE(c.t_begin, q(37, 3));
}

TEST(Critical, NondecreasingFunctionHasNone) {
  EXPECT_TRUE(critical_segments(P::identity(), R(0), R(10)).empty());
  EXPECT_TRUE(critical_segments(fixtures::increasing_jump(), R(0), R(10)).empty());
}

TEST(Critical, SteepSegmentReported) {
  auto cs = critical_segments(fixtures::steep_ramp(), R(0), R(3));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].slope, ExtSlope<R>::finite(R(-2)));
}

// ------------------------------------------------------------ one-sided Lipschitz

TEST(OneSided, RiemannBoundaryAgainstDatum) {
  EXPECT_FALSE(one_sided_lipschitz_witness(riemann_ell(), fixtures::riemann(), R(13)).has_value());
}

TEST(OneSided, IdenticalFunctions) {
  EXPECT_FALSE(one_sided_lipschitz_witness(fixtures::hat(), fixtures::hat(), R(5)).has_value());
}

TEST(OneSided, SteepLineAgainstZero) {
  auto w = one_sided_lipschitz_witness(P::affine(R(0), R(2)), P::constant(R(0)), R(1));
  ASSERT_TRUE(w.has_value());
  auto [t, tau] = *w;
  EXPECT_LT(R(0), t);
  EXPECT_LE(t + tau, R(1));
  EXPECT_GT(R(2) * tau, tau);
}

TEST(OneSided, UpwardJumpDetected) {
  auto w = one_sided_lipschitz_witness(fixtures::increasing_jump(), P::constant(R(1)), R(3));
  ASSERT_TRUE(w.has_value());
}

// ------------------------------------------------------------ float backend

TEST(FloatBackend, MirrorsExactEvaluation) {
  auto f = convert<double>(riemann_ell());
  for (int k = 0; k <= 26; ++k) EXPECT_NEAR(f(k * 0.5), to_double(riemann_ell()(q(k, 2))), 1e-12);
  EXPECT_NEAR(sublevel_measure(f + Polygonal<double>::identity(), 3.0, 3.0), 5.0 / 3.0, 1e-12);
}
