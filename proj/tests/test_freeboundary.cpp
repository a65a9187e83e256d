#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace mancala_flow;
using R = Rational;
using P = Polygonal<Rational>;

namespace {

R q(long long p, long long d = 1) { return make_rational(p, d); }

const FreeBoundarySolution<R>& riemann() {
  static const auto sol = solve_ell(fixtures::riemann(), R(13));
  return sol;
}

std::vector<R> grid(const R& a, const R& b, int n) {
  std::vector<R> out;
  for (int k = 0; k <= n; ++k) out.push_back(a + (b - a) * R(k) / R(n));
  return out;
}

}  // namespace

// ------------------------------------------------------------ block length

TEST(BlockLength, UnitBox) { EXPECT_EQ(choose_block_length(fixtures::riemann()), R(1)); }

TEST(BlockLength, ZeroDatum) { EXPECT_EQ(choose_block_length(P::constant(R(0))), R(0)); }

TEST(BlockLength, DecreasingRamp) { EXPECT_EQ(choose_block_length(fixtures::stationary_m2()), R(1)); }

TEST(BlockLength, MatchesBruteForceSupremum) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    P u = oracle::random_datum(rng, 3, true);
    R a = choose_block_length(u);
    // inf over [0, a) is at least a, and fails just beyond a
    auto [lo, hi] = extrema_on(u, R(0), a);
    R inf_open = std::min(lo, u.left_limit(a));
    if (R(0) < a) {
      EXPECT_LE(a, std::min(inf_open, extrema_on(u, R(0), a - a / 1000000).first));
    }
    R b = a + q(1, 1000);
    R inf_b = std::min(extrema_on(u, R(0), b).first, u.left_limit(b));
    EXPECT_LT(inf_b, b);
  }
}

// ------------------------------------------------------------ positive data

TEST(Solve, RiemannFirstThreePieces) {
  const P& ell = riemann().ell;
  for (R t : {q(1, 10), q(1, 2), q(99, 100)}) EXPECT_EQ(ell(t), 1 + t);
  for (R t : {R(1), q(3, 2), q(199, 100)}) EXPECT_EQ(ell(t), t / 2 + q(1, 2));
  for (R t : {R(2), q(5, 2), q(299, 100)}) EXPECT_EQ(ell(t), (-t + 11) / 6);
  EXPECT_EQ(ell(R(0)), fixtures::riemann()(R(0)));
  EXPECT_EQ(riemann().alpha, R(1));
}

TEST(Solve, StationaryProfileKeepsBoundaryFixed) {
  auto sol = solve_ell(fixtures::stationary_m2(), R(13));
  for (const R& t : grid(R(0), R(13), 52)) EXPECT_EQ(sol.ell(t), R(2));
}

TEST(Solve, ConstantDatumInterpolatesTriangularNumbers) {
  R horizon = fixtures::triangular(8);
  auto sol = solve_ell(fixtures::constant_one(), horizon);
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(sol.ell(fixtures::triangular(k)), R(k + 1)) << k;
  for (int k = 0; k < 8; ++k)
    for (int j = 0; j < 5; ++j) {
      R t = fixtures::triangular(k) + R(k + 1) * R(j) / R(5);
      EXPECT_EQ(sol.ell(t), t / R(k + 1) + R(k) / 2 + 1) << to_string(t);
    }
}

TEST(Solve, ShorterBlocksGiveTheSameBoundary) {
  for (R beta : {q(1, 2), q(1, 3), q(2, 3)}) {
    auto s = solve_ell(fixtures::riemann(), R(13), std::optional<R>(beta));
    EXPECT_EQ(s.alpha, beta);
    EXPECT_TRUE(equal_on(s.ell, riemann().ell, R(0), R(13)));
  }
}

TEST(Solve, Errors) {
  EXPECT_THROW(solve_ell(fixtures::hat(), R(3)), vanishing_data_error);
  EXPECT_THROW(solve_ell(fixtures::riemann(), R(0)), domain_error);
  EXPECT_THROW(solve_ell(fixtures::riemann(), R(3), std::optional<R>(R(2))), domain_error);
  EXPECT_THROW(solve_ell(P::affine(R(1), R(-1)), R(3)), domain_error);  // negative datum
}

TEST(Solve, BoundsFromBlockLengthAndSupremum) {
  for (auto fx : fixtures::standard()) {
    R alpha = choose_block_length(fx.datum);
    auto sol = solve_general(fx.datum, fx.horizon);
    R sup = extrema_on(fx.datum, R(0), fx.horizon).second;
    for (const R& t : grid(R(0), fx.horizon, 200)) {
      if (R(0) < alpha) EXPECT_LE(alpha, sol.ell(t)) << fx.name;
      EXPECT_LE(sol.ell(t), sup + t) << fx.name;
    }
  }
}

TEST(Solve, BigLAndDistributionAreConsistent) {
  const auto& s = riemann();
  for (const R& t : grid(R(0), R(13), 104)) {
    EXPECT_EQ(s.big_l(t), s.ell(t) + t);
    EXPECT_EQ(s.s_of(t), sublevel_measure(s.big_l, t, t));
    if (R(1) <= t) EXPECT_EQ(s.ell(t), fixtures::riemann()(t) + t - s.s_of(t));
  }
}

// ------------------------------------------------------------ residual

TEST(Residual, RiemannSamplesAreExact) {
  std::vector<R> samples{q(1, 2), q(3, 2), q(5, 2), R(11), q(149, 12)};
  EXPECT_EQ(fixed_point_residual(riemann(), fixtures::riemann(), std::span<const R>(samples)), R(0));
}

TEST(Residual, PerturbationIsDetected) {
  auto bad = riemann();
  P bump({{R(0), R(0), R(0)}, {R(1), R(0), R(1)}, {R(2), R(0), R(0)}});
  bad.ell = bad.ell + bump;
  std::vector<R> samples{q(3, 2)};
  EXPECT_GE(fixed_point_residual(bad, fixtures::riemann(), std::span<const R>(samples)), R(1));
}

TEST(Residual, ZeroSolution) {
  auto sol = solve_general(P::constant(R(0)), R(4));
  std::vector<R> samples{R(0), R(1), q(7, 2)};
  EXPECT_EQ(fixed_point_residual(sol, P::constant(R(0)), std::span<const R>(samples)), R(0));
}

TEST(Residual, RandomSamplesOnAllFixtures) {
  std::mt19937 rng(77);
  for (auto fx : fixtures::standard()) {
    auto sol = solve_general(fx.datum, fx.horizon);
    std::uniform_int_distribution<long long> num(0, 1000000);
    std::vector<R> samples;
    for (int k = 0; k < 100; ++k) samples.push_back(fx.horizon * R(num(rng)) / R(1000000));
    EXPECT_EQ(fixed_point_residual(sol, fx.datum, std::span<const R>(samples)), R(0)) << fx.name;
  }
  EXPECT_THROW(fixed_point_residual(riemann(), fixtures::riemann(), std::span<const R>(std::vector<R>{R(14)})),
               domain_error);
}

TEST(Residual, GridFixedPointOracle) {
  auto orc = oracle::grid_fixed_point(oracle::as_fn(fixtures::riemann()), 13.0, 1e-4);
  auto jumps = critical_segments(riemann().ell, R(0), R(13));
  double worst = 0;
  for (int k = 1; k < 130; ++k) {
    R t = q(k, 10) + q(1, 113);
    bool near_jump = false;
    for (const auto& c : jumps) near_jump |= abs(t - c.t_begin) < q(1, 100);
    if (near_jump) continue;
    worst = std::max(worst, std::abs(orc.at(to_double(t)) - to_double(riemann().ell(t))));
  }
  EXPECT_LT(worst, 4e-3);
  EXPECT_LT(orc.sweeps, 200);
}

// ------------------------------------------------------------ structure

TEST(Structure, OneSidedLipschitzForAllFixtures) {
  for (auto fx : fixtures::standard()) {
    auto sol = solve_general(fx.datum, fx.horizon);
    EXPECT_FALSE(one_sided_lipschitz_witness(sol.ell, fx.datum, fx.horizon).has_value()) << fx.name;
  }
}

TEST(Structure, MonotoneInTheDatum) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    P lo = oracle::random_datum(rng, 3, true);
    P hi = lo + oracle::random_datum(rng, 2, false);
    auto a = solve_ell(lo, R(8)).ell, b = solve_ell(hi, R(8)).ell;
    auto bps = merged_breakpoints(a, b, R(0));
    for (const R& t : bps) {
      if (R(8) < t) break;
      EXPECT_LE(a(t), b(t));
      if (R(0) < t) EXPECT_LE(a.left_limit(t), b.left_limit(t));
    }
  }
}

TEST(Structure, OscillationDecayForTheRiemannDatum) {
  const auto& ell = riemann().ell;
  for (int k = 1; k + 2 <= 13; ++k) {
    auto [lo0, hi0] = extrema_on(ell, R(k), R(k + 1));
    auto [lo1, hi1] = extrema_on(ell, R(k + 1), R(k + 2));
    EXPECT_LE(lo0, lo1) << k;
    EXPECT_LE(hi1, hi0) << k;
  }
}

TEST(Structure, OscillationCanGrowWhenBoundaryExceedsTwoBlocks) {
  auto ell = solve_ell(fixtures::box(R(3)), R(10)).ell;
  EXPECT_EQ(extrema_on(ell, R(6), R(7)).second, q(5, 2));
  EXPECT_EQ(ell(q(23, 3)), q(8, 3));
  // recount directly: every s in (5, 23/3] has ell(s) + s > 23/3
  EXPECT_EQ(antidiagonal_superlevel_measure(ell, q(23, 3)), q(8, 3));
}

TEST(Structure, NoIncreasingJumpsPastSupport) {
  for (auto fx : fixtures::standard()) {
    if (fx.datum.tail_kind() != TailKind::zero) continue;
    auto sol = solve_general(fx.datum, fx.horizon);
    EXPECT_TRUE(one_sided_bound(sol.ell, fx.datum.tail().start, fx.horizon).is_finite()) << fx.name;
  }
}

// ------------------------------------------------------------ vanishing data

TEST(Vanishing, ZeroDatum) {
  auto v = solve_ell_vanishing(P::constant(R(0)), R(5));
  ASSERT_TRUE(v.certified());
  EXPECT_EQ(v.route, VanishingRoute::zero_restart);
  for (const R& t : grid(R(0), R(5), 20)) EXPECT_EQ(v.exact->ell(t), R(0));
}

TEST(Vanishing, HatReachesPlateau) {
  auto v = solve_ell_vanishing(fixtures::hat(), R(6));
  ASSERT_TRUE(v.certified());
  EXPECT_EQ(v.route, VanishingRoute::ramp);
  for (const R& t : grid(R(0), R(6), 60)) EXPECT_EQ(v.exact->ell(t), std::min(t, R(1))) << to_string(t);
  std::vector<R> samples = grid(R(0), R(6), 97);
  EXPECT_EQ(fixed_point_residual(*v.exact, fixtures::hat(), std::span<const R>(samples)), R(0));
}

TEST(Vanishing, DeltaFamilyDecreasesWithDelta) {
  auto v = solve_ell_vanishing(fixtures::hat(), R(6));
  ASSERT_EQ(v.family.size(), 4u);
  for (std::size_t k = 1; k < v.deltas.size(); ++k) EXPECT_LT(v.deltas[k], v.deltas[k - 1]);
  for (const R& t : grid(R(0), R(6), 120)) {
    for (std::size_t k = 1; k < v.family.size(); ++k) EXPECT_LE(v.family[k].ell(t), v.family[k - 1].ell(t));
    EXPECT_LE(v.exact->ell(t), v.family.back().ell(t));
  }
}

TEST(Vanishing, ConstantDeltaFamilyOrdering) {
  P zero = P::constant(R(0));
  auto a = solve_ell(add_constant(zero, q(1, 2)), R(6)).ell;
  auto b = solve_ell(add_constant(zero, q(1, 4)), R(6)).ell;
  for (const R& t : grid(R(0), R(6), 60)) EXPECT_LE(b(t), a(t));
}

TEST(Vanishing, ZeroStretchThenRestart) {
  P u({{R(0), R(0), R(0)}, {R(1), R(0), R(1)}, {R(2), R(0), R(0)}});
  auto v = solve_ell_vanishing(u, R(8));
  ASSERT_TRUE(v.certified());
  EXPECT_EQ(v.route, VanishingRoute::zero_restart);
  std::vector<R> samples = grid(R(0), R(8), 80);
  EXPECT_EQ(fixed_point_residual(*v.exact, u, std::span<const R>(samples)), R(0));
  EXPECT_EQ(v.exact->ell(q(1, 2)), R(0));
  EXPECT_EQ(v.exact->ell(q(3, 2)), q(3, 2));
}

TEST(Vanishing, IrrationalRootFallsBackToEnvelope) {
  P ramp = P::from_vertices({{R(0), R(0)}, {R(1), R(1)}, {R(2), R(0)}});
  auto v = solve_ell_vanishing(ramp, R(4));
  EXPECT_FALSE(v.certified());
  EXPECT_EQ(v.route, VanishingRoute::delta_envelope);
  EXPECT_EQ(&v.candidate(), &v.family.back());
  EXPECT_THROW(solve_general(ramp, R(4)), vanishing_data_error);
}

TEST(Vanishing, RampBoundWithFloatRoot) {
  const double kappa = 1.0;
  auto ramp = Polygonal<double>::from_vertices({{0.0, 0.0}, {1.0, kappa}, {2.0, 0.0}});
  auto v = solve_ell_vanishing(ramp, 4.0);
  ASSERT_TRUE(v.certified());
  double g = gamma_root(kappa).approx;
  for (int k = 0; k <= 100; ++k) {
    double t = k / 100.0;
    EXPECT_LE(v.exact->ell(t), (kappa + g) * t + 1e-12);
  }
  std::vector<double> samples;
  for (int k = 0; k <= 80; ++k) samples.push_back(k / 20.0);
  EXPECT_LT(fixed_point_residual(*v.exact, ramp, std::span<const double>(samples)), 1e-9);
}

TEST(Vanishing, RationalRampIsExact) {
  // kappa = 1/2 has gamma = 1/2
  P ramp = P::from_vertices({{R(0), R(0)}, {R(2), R(1)}}, Continue::hold);
  auto v = solve_ell_vanishing(ramp, R(6));
  ASSERT_TRUE(v.certified());
  for (const R& t : grid(R(0), R(2), 20)) EXPECT_EQ(v.exact->ell(t), t);
  std::vector<R> samples = grid(R(0), R(6), 113);
  EXPECT_EQ(fixed_point_residual(*v.exact, ramp, std::span<const R>(samples)), R(0));
}

// ------------------------------------------------------------ gamma root

TEST(GammaRoot, GoldenRatioConjugate) {
  auto g = gamma_root(R(1));
  EXPECT_NEAR(g.approx, 0.6180339887, 1e-10);
  EXPECT_FALSE(g.exact.has_value());
}

TEST(GammaRoot, ResidualAtFourFifths) {
  double g = gamma_root(q(4, 5)).approx;
  EXPECT_LT(std::abs(g * g + 0.8 * g - 0.8), 1e-12);
}

TEST(GammaRoot, ExactWhenDiscriminantIsSquare) {
  auto g = gamma_root(q(1, 2));
  ASSERT_TRUE(g.exact.has_value());
  EXPECT_EQ(*g.exact, q(1, 2));
  EXPECT_THROW(gamma_root(R(0)), domain_error);
  EXPECT_THROW(gamma_root(-1.0), domain_error);
}

TEST(GammaRoot, RandomResiduals) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> kd(1e-3, 50.0);
  for (int k = 0; k < 10; ++k) {
    double kappa = kd(rng), g = gamma_root(kappa).approx;
    EXPECT_LT(std::abs(g * g + kappa * g - kappa), 1e-12 * std::max(1.0, kappa));
  }
}
