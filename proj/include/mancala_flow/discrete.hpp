#ifndef MANCALA_FLOW_DISCRETE_HPP
#define MANCALA_FLOW_DISCRETE_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "errors.hpp"
#include "freeboundary.hpp"
#include "parallel.hpp"
#include "polygonal.hpp"
#include "transport.hpp"

namespace mancala_flow {

/// Seeds in holes 1..len, all positive; zero beyond.
struct MancalaConfig {
  std::vector<std::uint64_t> seeds;

  MancalaConfig() = default;
  explicit MancalaConfig(std::vector<std::uint64_t> s) : seeds(std::move(s)) {
    while (!seeds.empty() && seeds.back() == 0) seeds.pop_back();
    for (auto v : seeds)
      if (v == 0) throw domain_error("mancala configuration must have support {1, ..., len}");
  }

  std::size_t len() const { return seeds.size(); }
  std::uint64_t at(std::size_t j) const { return j >= 1 && j <= seeds.size() ? seeds[j - 1] : 0; }
  friend bool operator==(const MancalaConfig&, const MancalaConfig&) = default;
};

inline std::uint64_t mass(const MancalaConfig& c) {
  std::uint64_t m = 0;
  for (auto v : c.seeds) m += v;
  return m;
}

/// Sow the first hole one seed per hole to the right, then shift left.
inline MancalaConfig mancala_move(const MancalaConfig& c) {
  const std::uint64_t n = c.at(1);
  std::size_t out_len = std::max<std::size_t>(n, c.len() > 0 ? c.len() - 1 : 0);
  std::vector<std::uint64_t> out(out_len);
  for (std::size_t j = 1; j <= out_len; ++j) out[j - 1] = c.at(j + 1) + (j <= n ? 1 : 0);
  return MancalaConfig(std::move(out));
}

/// Sum over pairs i <= j < i + lambda_i of j.
inline std::uint64_t discrete_lyapunov(const MancalaConfig& c) {
  std::uint64_t total = 0;
  for (std::size_t i = 1; i <= c.len(); ++i) {
    std::uint64_t l = c.at(i);
    total += l * i + l * (l - 1) / 2;
  }
  return total;
}

/// Number of steps along the orbit where the functional increases.
inline std::size_t lyapunov_increases(MancalaConfig c, std::size_t steps) {
  std::size_t bad = 0;
  std::uint64_t e = discrete_lyapunov(c);
  for (std::size_t k = 0; k < steps; ++k) {
    c = mancala_move(c);
    std::uint64_t e2 = discrete_lyapunov(c);
    if (e2 > e) ++bad;
    e = e2;
  }
  return bad;
}

/// values[k][i - 1] approximates u(k h, i h), i = 1..width.
template <Scalar S>
struct GridField {
  S h;
  std::size_t steps = 0;
  std::size_t width = 0;
  std::vector<std::vector<S>> values;

  const S& at(std::size_t k, std::size_t i) const { return values.at(k).at(i - 1); }

  S row_mass(std::size_t k) const {
    S m(0);
    for (const auto& v : values.at(k)) m += v;
    return h * m;
  }
};

/// Rescaled game: the first cell is sown in units of h over the next cells and the row shifts left.
/// A fractional remainder of the first cell lands in the cell after the last full unit.
template <Scalar S>
GridField<S> rescaled_run(const Polygonal<S>& u0, const S& h, std::size_t steps, std::size_t width) {
  if (!(S(0) < h)) throw domain_error("grid step must be positive");
  if (width == 0) throw domain_error("grid width must be positive");
  if (!u0.is_nonnegative()) throw domain_error("datum must be nonnegative");
  auto sample = [&](std::size_t i) { return u0(S(h * S(static_cast<long long>(i)))); };
  GridField<S> g{h, steps, width, {}};
  g.values.reserve(steps + 1);
  std::vector<S> row(width);
  for (std::size_t i = 1; i <= width; ++i) row[i - 1] = sample(i);
  g.values.push_back(row);
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& old = g.values.back();
    S u1 = old[0];
    S q = u1 / h;
    std::size_t n;
    if constexpr (scalar_traits<S>::exact) n = static_cast<std::size_t>(floor_of(q).template convert_to<unsigned long long>());
    else n = static_cast<std::size_t>(std::floor(q));
    S rem = u1 - h * S(n);
    if (n > width || (n == width && !scalar_traits<S>::near_zero(rem)))
      throw overflow_error("rescaled_run: sowing passed the right edge of the grid");
    std::vector<S> next(width);
    S incoming = u0.tail_kind() == TailKind::zero ? S(0) : sample(width + k + 1);
    for (std::size_t j = 1; j <= width; ++j) {
      S v = j < width ? old[j] : incoming;
      if (j <= n) v += h;
      else if (j == n + 1) v += rem;
      next[j - 1] = v;
    }
    g.values.push_back(std::move(next));
  }
  return g;
}

struct ConvergenceRow {
  Rational h;
  Rational time;  // steps * h, the last grid time not beyond T
  std::size_t steps;
  std::size_t width;
  double sup_error;
  double l1_error;
  double mass_drift;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool l1_strictly_decreasing = false;
};

/// Grid at step floor(T / h) against the exact slice at that time, sampled at the cell abscissae.
inline ConvergenceReport convergence_report(const Polygonal<Rational>& u0, std::span<const Rational> hs,
                                             const Rational& T) {
  if (!(Rational(0) < T)) throw domain_error("convergence_report needs T > 0");
  if (hs.empty()) throw domain_error("convergence_report needs step sizes");
  for (std::size_t k = 0; k < hs.size(); ++k)
    if (!(Rational(0) < hs[k]) || (k > 0 && !(hs[k] < hs[k - 1])))
      throw domain_error("step sizes must be positive and decrease");
  SolutionField<Rational> field = make_field(u0, solve_general(u0, T));
  auto [lo, hi] = extrema_on(u0, Rational(0), u0.tail().start);
  Rational window = u0.tail().start + T + hi + 1;
  const Polygonal<double> u0_float = convert<double>(u0);
  ConvergenceReport rep;
  rep.rows.resize(hs.size());
  parallel_for(hs.size(), [&](std::size_t idx) {
    const Rational& h = hs[idx];
    Integer ks = floor_of(T / h);
    std::size_t steps = ks.convert_to<std::size_t>();
    Rational t = h * Rational(ks);
    Polygonal<Rational> exact = u_slice(field, t);
    std::size_t width = ceil_of(window / h).convert_to<std::size_t>();
    double hd = to_double(h);
    GridField<double> g = rescaled_run(u0_float, hd, steps, width);
    double sup = 0, l1 = 0;
    for (std::size_t i = 1; i <= width; ++i) {
      double e = std::abs(g.at(steps, i) - to_double(exact(h * Rational(static_cast<long long>(i)))));
      sup = std::max(sup, e);
      l1 += hd * e;
    }
    rep.rows[idx] = {h, t, steps, width, sup, l1, std::abs(g.row_mass(steps) - g.row_mass(0))};
  });
  rep.l1_strictly_decreasing = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k)
    if (!(rep.rows[k].l1_error < rep.rows[k - 1].l1_error)) rep.l1_strictly_decreasing = false;
  return rep;
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_DISCRETE_HPP
