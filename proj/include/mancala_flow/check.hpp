#ifndef MANCALA_FLOW_CHECK_HPP
#define MANCALA_FLOW_CHECK_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "discrete.hpp"
#include "fixtures.hpp"
#include "freeboundary.hpp"
#include "lyapunov.hpp"
#include "polygonal.hpp"
#include "riemann.hpp"
#include "transport.hpp"

namespace mancala_flow {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> results;
  bool ok() const {
    for (const auto& r : results)
      if (!r.passed) return false;
    return true;
  }
};

namespace checks {

using R = Rational;
using P = Polygonal<Rational>;
using Outcome = std::optional<std::string>;  // nullopt on success

struct Check {
  std::string suite;
  std::string name;
  std::function<Outcome()> run;
};

inline std::vector<R> sample_grid(const R& a, const R& b, int n) {
  std::vector<R> out;
  for (int k = 0; k <= n; ++k) out.push_back(a + (b - a) * R(k) / R(n));
  return out;
}

inline Outcome expect(bool ok, const std::string& what) {
  return ok ? Outcome{} : Outcome{what};
}

inline std::vector<Check> polygonal_checks() {
  std::vector<Check> c;
  c.push_back({"polygonal", "right_continuity", [] {
    auto ell = solve_ell(fixtures::riemann(), R(13)).ell;
    for (std::size_t i = 0; i < ell.size(); ++i) {
      const auto& p = ell.pieces()[i];
      R eps = R(1) / R(1000000);
      if (auto e = ell.piece_end(i)) eps = std::min(eps, R((*e - p.start) / 2));
      if (ell(p.start) != p.value || ell(p.start + eps) != p.value + p.slope * eps)
        return Outcome{"right value mismatch at " + to_string(p.start)};
    }
    return Outcome{};
  }});
  c.push_back({"polygonal", "sublevel_monotone_lipschitz", [] {
    auto big_l = solve_ell(fixtures::riemann(), R(13)).big_l;
    auto lv = sample_grid(R(0), R(20), 80);
    for (std::size_t k = 1; k < lv.size(); ++k) {
      R a = sublevel_measure(big_l, lv[k - 1], R(7)), b = sublevel_measure(big_l, lv[k], R(7));
      if (b < a) return Outcome{"level monotonicity at " + to_string(lv[k])};
      R c5 = sublevel_measure(big_l, lv[k], R(5));
      if (b < c5 || R(2) < b - c5) return Outcome{"cap monotonicity/Lipschitz at " + to_string(lv[k])};
    }
    return Outcome{};
  }});
  c.push_back({"polygonal", "antidiagonal_range", [] {
    auto ell = solve_ell(fixtures::riemann(), R(13)).ell;
    for (const R& t : sample_grid(R(0), R(13), 52)) {
      R m = antidiagonal_superlevel_measure(ell, t);
      if (m < 0 || t < m) return Outcome{"measure outside [0, t] at " + to_string(t)};
    }
    return Outcome{};
  }});
  c.push_back({"polygonal", "mass_additivity", [] {
    auto ell = solve_ell(fixtures::riemann(), R(13)).ell;
    R a(1, 3), b(7, 2), d(12);
    return expect(mass(ell, a, std::optional<R>(b)) + mass(ell, b, std::optional<R>(d)) == mass(ell, a, std::optional<R>(d)),
                  "mass not additive");
  }});
  c.push_back({"polygonal", "R_maps_lines", [] {
    for (int n = 0; n < 20; ++n) {
      R an = riemann_alpha(n), an1 = riemann_alpha(n + 1);
      for (R t : {R(0), R(3), R(7, 2)}) {
        PlanarChain<R> pt{{{t, an * (1 + t), false}}, true};
        auto img = transform_R(pt).vertices.front();
        if (img.s != an1 * (1 + img.t)) return Outcome{"line r_n not mapped onto r_{n+1} at n=" + std::to_string(n)};
      }
    }
    return Outcome{};
  }});
  c.push_back({"polygonal", "rearrangement_slices", [] {
    for (const auto& fx : fixtures::standard()) {
      auto sol = solve_general(fx.datum, fx.horizon);
      auto img = transform_R(subgraph_boundary(sol.ell, R(0), fx.horizon));
      auto re = rearrange_vertical(img);
      if (polygon_area(img) != mass(re, re.origin())) return Outcome{fx.name + ": area changed"};
      for (const R& x : sample_grid(R(0), fx.horizon, 37))
        if (re(x) != slice_measure(img, x)) return Outcome{fx.name + ": slice mismatch at " + to_string(x)};
    }
    return Outcome{};
  }});
  return c;
}

inline std::vector<Check> freeboundary_checks() {
  std::vector<Check> c;
  c.push_back({"freeboundary", "fixed_point_residual", [] {
    for (const auto& fx : fixtures::standard()) {
      auto sol = solve_general(fx.datum, fx.horizon);
      auto grid = sample_grid(R(0), fx.horizon, 97);
      R r = fixed_point_residual(sol, fx.datum, std::span<const R>(grid));
      if (r != 0) return Outcome{fx.name + ": residual " + to_string(r)};
    }
    return Outcome{};
  }});
  c.push_back({"freeboundary", "block_length_uniqueness", [] {
    auto u0 = fixtures::riemann();
    auto a = solve_ell(u0, R(13)).ell;
    auto b = solve_ell(u0, R(13), std::optional<R>(R(1, 3))).ell;
    return expect(equal_on(a, b, R(0), R(13)), "different block lengths disagree");
  }});
  c.push_back({"freeboundary", "bounds", [] {
    for (const auto& fx : fixtures::standard()) {
      R alpha = choose_block_length(fx.datum);
      if (alpha == 0) continue;
      auto sol = solve_ell(fx.datum, fx.horizon);
      auto [lo, hi] = extrema_on(fx.datum, R(0), fx.horizon);
      auto [elo, ehi] = extrema_on(sol.ell, R(0), fx.horizon);
      if (elo < alpha) return Outcome{fx.name + ": ell below alpha"};
      if (hi < extrema_on(sol.ell - P::identity(), R(0), fx.horizon).second) return Outcome{fx.name + ": ell above sup u0 + t"};
      if (sol.ell(R(0)) != fx.datum(R(0))) return Outcome{fx.name + ": ell(0) != u0(0)"};
    }
    return Outcome{};
  }});
  c.push_back({"freeboundary", "one_sided_lipschitz", [] {
    for (const auto& fx : fixtures::standard()) {
      auto sol = solve_general(fx.datum, fx.horizon);
      if (one_sided_lipschitz_witness(sol.ell, fx.datum, fx.horizon)) return Outcome{fx.name + ": witness found"};
    }
    return Outcome{};
  }});
  c.push_back({"freeboundary", "oscillation_decay", [] {
    // box(3) breaks the window bound: ell(23/3) = 8/3 while sup over [6, 7] is 5/2.
    for (const auto& fx : fixtures::standard()) {
      if (fx.datum.tail_kind() != TailKind::zero) continue;
      R alpha = choose_block_length(fx.datum);
      if (alpha == 0) continue;
      auto sol = solve_ell(fx.datum, fx.horizon);
      if (fx.name == "riemann_a3") {
        auto [lo6, hi6] = extrema_on(sol.ell, R(6), R(7));
        auto [lo7, hi7] = extrema_on(sol.ell, R(7), R(8));
        if (hi6 != make_rational(5, 2) || hi7 != make_rational(8, 3) || sol.ell(make_rational(23, 3)) != make_rational(8, 3))
          return Outcome{"box(3) counterexample changed"};
        continue;
      }
      const R& c0 = fx.datum.tail().start;
      for (R k = ceil_of(c0 / alpha); (k + 2) * alpha <= fx.horizon; k += 1) {
        auto [lo0, hi0] = extrema_on(sol.ell, k * alpha, (k + 1) * alpha);
        auto [lo1, hi1] = extrema_on(sol.ell, (k + 1) * alpha, (k + 2) * alpha);
        if (lo1 < lo0 || hi0 < hi1) return Outcome{fx.name + ": oscillation grew after " + to_string(k * alpha)};
      }
    }
    return Outcome{};
  }});
  c.push_back({"freeboundary", "no_increasing_jumps_past_support", [] {
    for (const auto& fx : fixtures::standard()) {
      if (fx.datum.tail_kind() != TailKind::zero) continue;
      auto sol = solve_general(fx.datum, fx.horizon);
      if (!one_sided_bound(sol.ell, fx.datum.tail().start, fx.horizon).is_finite())
        return Outcome{fx.name + ": increasing jump past the support"};
    }
    return Outcome{};
  }});
  c.push_back({"freeboundary", "monotone_comparison", [] {
    auto lo = fixtures::riemann();
    auto hi = fixtures::box(R(3));
    auto a = solve_ell(lo, R(10)).ell, b = solve_ell(hi, R(10)).ell;
    for (const R& t : sample_grid(R(0), R(10), 200))
      if (b(t) < a(t)) return Outcome{"ordering broken at " + to_string(t)};
    return Outcome{};
  }});
  c.push_back({"freeboundary", "vanishing_hat", [] {
    auto v = solve_ell_vanishing(fixtures::hat(), R(6));
    if (!v.exact) return Outcome{"no exact route for the hat datum"};
    P expected = P::from_vertices({{R(0), R(0)}, {R(1), R(1)}}, Continue::hold);
    return expect(equal_on(v.exact->ell, expected, R(0), R(6)), "hat solution differs from min(t, 1)");
  }});
  return c;
}

inline std::vector<Check> transport_checks() {
  std::vector<Check> c;
  c.push_back({"transport", "diagonal_trace", [] {
    auto f = make_field(fixtures::riemann(), R(13));
    for (const R& t : sample_grid(R(0), R(13), 39))
      if (v_point(f, t, t) != f.fb.ell(t) || v_slice(f, t)(t) != f.fb.ell(t)) return Outcome{"v(tau,tau) != ell at " + to_string(t)};
    return Outcome{};
  }});
  c.push_back({"transport", "integral_residual", [] {
    auto f = make_field(fixtures::riemann(), R(12));
    std::vector<std::pair<R, R>> grid;
    for (int i = 0; i <= 12; ++i)
      for (int j = i; j <= 12; j += 2) grid.push_back({R(i) * R(11, 12), R(j) + R(1, 7) * (j > i)});
    auto r = integral_residual(f, std::span<const std::pair<R, R>>(grid));
    return expect(r.against_equation == 0 && r.between_routes == 0, "integral residual nonzero");
  }});
  c.push_back({"transport", "mass_conservation", [] {
    auto f = make_field(fixtures::riemann(), R(13));
    for (R tau : {R(0), R(1, 2), R(1), R(5, 3), R(5), R(12)})
      if (mass_at(f, tau) != 1) return Outcome{"mass != 1 at " + to_string(tau)};
    return Outcome{};
  }});
  c.push_back({"transport", "temporal_lipschitz_monotone", [] {
    auto f = make_field(fixtures::riemann(), R(13));
    for (int k = 0; k < 200; ++k) {
      R xi = R(13) * R(k % 37) / R(37) + R(1, 11);
      R t1 = xi * R((k * 7) % 19) / R(19), t2 = xi * R((k * 7) % 19 + 1) / R(20);
      if (t2 < t1) std::swap(t1, t2);
      if (R(13) < t2) continue;
      R d = v_point(f, t2, xi) - v_point(f, t1, xi);
      if (d < 0 || t2 - t1 < d) return Outcome{"temporal bound broken at xi=" + to_string(xi)};
    }
    return Outcome{};
  }});
  c.push_back({"transport", "comparison", [] {
    auto a = make_field(fixtures::riemann(), R(8));
    auto b = make_field(fixtures::box(R(3)), R(8));
    for (const R& tau : sample_grid(R(0), R(8), 16))
      for (const R& dx : sample_grid(R(0), R(6), 12))
        if (v_point(b, tau, tau + dx) < v_point(a, tau, tau + dx)) return Outcome{"comparison broken"};
    return Outcome{};
  }});
  c.push_back({"transport", "one_sided_lipschitz_slices", [] {
    auto f = make_field(fixtures::riemann(), R(13));
    for (const R& tau : sample_grid(R(1), R(13), 24)) {
      auto b = one_sided_bound(v_slice(f, tau), tau, tau + 20);
      if (!b.is_finite() || 0 < b.value) return Outcome{"slice not nonincreasing at tau=" + to_string(tau)};
    }
    return Outcome{};
  }});
  return c;
}

inline std::vector<Check> riemann_checks() {
  std::vector<Check> c;
  c.push_back({"riemann", "state_invariants", [] {
    auto seq = riemann_sequence(40);
    for (std::size_t n = 1; n < seq.size(); ++n) {
      const auto& s = seq[n];
      if (s.m * s.M != 2) return Outcome{"m M != 2 at n=" + std::to_string(n)};
      if (s.t < R(static_cast<long long>(n)) || R(2 * static_cast<long long>(n) - 1) < s.T)
        return Outcome{"t_n >= n or T_n <= 2n-1 fails at n=" + std::to_string(n)};
    }
    return Outcome{};
  }});
  c.push_back({"riemann", "characterization", [] {
    auto seq = riemann_sequence(40);
    for (std::size_t n = 1; n + 1 < seq.size(); ++n) {
      const auto& a = seq[n];
      const auto& b = seq[n + 1];
      if (b.T != std::min(R(a.T + a.M), R(a.t + a.m)) || b.t != std::max(R(a.T + a.M), R(a.t + a.m)))
        return Outcome{"extremal abscissae at n=" + std::to_string(n)};
      if (b.M != a.alpha * (1 + b.T) || b.m != b.alpha * (1 + b.t))
        return Outcome{"extremal values off the lines r_n at n=" + std::to_string(n)};
      R am1 = riemann_alpha(static_cast<int>(n) - 1);
      R x = am1 + am1 / a.alpha * a.T, y = a.alpha + a.alpha / b.alpha * a.t;
      if (b.T != std::min(x, y) || b.t != std::max(x, y)) return Outcome{"decoupled recursion at n=" + std::to_string(n)};
    }
    return Outcome{};
  }});
  c.push_back({"riemann", "cross_validation", [] {
    auto seq = riemann_sequence(12);
    R tn = seq.back().t;
    auto poly = riemann_polygonal(12);
    auto sol = solve_ell(fixtures::riemann(), tn);
    return expect(equal_on(poly, sol.ell, R(0), tn), "recursion and solver disagree on [0, t_12]");
  }});
  return c;
}

inline std::vector<Check> lyapunov_checks() {
  std::vector<Check> c;
  c.push_back({"lyapunov", "frames_agree", [] {
    auto f = make_field(fixtures::riemann(), R(13));
    for (const R& t : sample_grid(R(0), R(13), 26))
      if (energy(u_slice(f, t)) != energy_tauxi(f, t)) return Outcome{"frames disagree at " + to_string(t)};
    return Outcome{};
  }});
  c.push_back({"lyapunov", "nonincreasing_with_identity", [] {
    auto f = make_field(fixtures::riemann(), R(13));
    auto times = sample_grid(R(0), R(13), 26);
    auto tr = energy_trace(f, std::span<const R>(times));
    for (std::size_t k = 1; k < times.size(); ++k) {
      if (tr.energies[k - 1] < tr.energies[k]) return Outcome{"energy increased at " + to_string(times[k])};
      if (tr.energies[k] + tr.dissipation[k - 1] != tr.energies[k - 1])
        return Outcome{"dissipation identity fails on [" + to_string(times[k - 1]) + ", " + to_string(times[k]) + "]"};
    }
    return Outcome{};
  }});
  c.push_back({"lyapunov", "stationary_field", [] {
    auto u0 = fixtures::stationary_m2();
    auto f = make_field(u0, R(6));
    return expect(dissipation(f, R(0), R(6)) == 0 && dissipation_residual(f, R(0), R(6)) == 0,
                  "stationary field dissipates");
  }});
  return c;
}

inline std::vector<Check> discrete_checks() {
  std::vector<Check> c;
  c.push_back({"discrete", "move_mass", [] {
    MancalaConfig cfg({3, 1, 4, 1, 5});
    for (int k = 0; k < 100; ++k) {
      auto next = mancala_move(cfg);
      if (mass(next) != mass(cfg)) return Outcome{"mass changed"};
      cfg = next;
    }
    return Outcome{};
  }});
  c.push_back({"discrete", "rescaled_mass_exact", [] {
    auto g = rescaled_run(fixtures::riemann(), R(1, 20), 60, 120);
    for (std::size_t k = 0; k <= g.steps; ++k)
      if (g.row_mass(k) != g.row_mass(0)) return Outcome{"row mass changed at k=" + std::to_string(k)};
    return Outcome{};
  }});
  return c;
}

inline std::vector<Check> all_checks() {
  std::vector<Check> out;
  for (auto part : {polygonal_checks(), freeboundary_checks(), transport_checks(), riemann_checks(), lyapunov_checks(),
                    discrete_checks()})
    out.insert(out.end(), part.begin(), part.end());
  return out;
}

inline std::vector<std::string> suite_names() {
  return {"all", "polygonal", "freeboundary", "transport", "riemann", "lyapunov", "discrete"};
}

}  // namespace checks

/// Runs the named suite; stops at the first failure.
inline CheckReport run_checks(const std::string& suite) {
  auto names = checks::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) throw parse_error("unknown check suite '" + suite + "'");
  CheckReport rep;
  for (const auto& c : checks::all_checks()) {
    if (suite != "all" && c.suite != suite) continue;
    CheckResult r{c.suite, c.name, true, {}};
    try {
      if (auto fail = c.run()) {
        r.passed = false;
        r.detail = *fail;
      }
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    rep.results.push_back(r);
    if (!r.passed) break;
  }
  return rep;
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_CHECK_HPP
