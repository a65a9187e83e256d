#ifndef MANCALA_FLOW_FREEBOUNDARY_HPP
#define MANCALA_FLOW_FREEBOUNDARY_HPP

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "errors.hpp"
#include "polygonal.hpp"
#include "rational.hpp"

namespace mancala_flow {

/// ell(t) = u0(t) + |{s in [0, t] : ell(s) + s > t}| on [0, horizon].
template <Scalar S>
struct FreeBoundarySolution {
  Polygonal<S> ell;    // exact on [0, horizon]
  Polygonal<S> big_l;  // ell + id
  Polygonal<S> s_of;   // |{sigma : ell(sigma) + sigma <= s}|, exact on [0, horizon]
  S alpha;             // block length used by the causal march
  S horizon;
};

namespace detail {
template <Scalar S>
void require_datum(const Polygonal<S>& u0) {
  if (u0.origin() != S(0)) throw domain_error("datum must be defined from 0");
  if (!u0.is_nonnegative()) throw domain_error("datum must be nonnegative");
}
}  // namespace detail

/// sup { a >= 0 : inf_[0,a) u0 >= a }.
template <Scalar S>
S choose_block_length(const Polygonal<S>& u0) {
  detail::require_datum(u0);
  const auto& ps = u0.pieces();
  std::optional<S> cur;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const S& s = ps[i].start;
    const S& v = ps[i].value;
    const S& k = ps[i].slope;
    S m0 = cur ? std::min(*cur, v) : v;
    if (!(s < m0)) return s;
    auto e = u0.piece_end(i);
    S cand = m0;
    if (k < S(0)) cand = std::min(m0, S((v - k * s) / (S(1) - k)));
    if (!e || !(*e < cand)) return cand;
    cur = k < S(0) ? std::min(m0, ps[i].at(*e)) : m0;
  }
  throw consistency_error("choose_block_length: tail not reached");
}

namespace detail {

/// Extends ell from [0, from) in steps of `step`, valid while ell >= step on [K - step, K).
template <Scalar S>
Polygonal<S> march(const Polygonal<S>& u0, Polygonal<S> ell, S from, const S& step, const S& horizon) {
  const Polygonal<S> id = Polygonal<S>::identity();
  Polygonal<S> forcing = u0 + id;
  S k = from;
  while (!(horizon < k)) {
    S hi = k + step;
    Polygonal<S> big_l = ell + id;
    Polygonal<S> d = sublevel_distribution(big_l, S(0), k, k, std::optional<S>(hi));
    Polygonal<S> block = truncate_after(clip(forcing, k) - d, hi);
    ell = splice(ell, k, block);
    k = hi;
  }
  return truncate_after(ell, horizon);
}

template <Scalar S>
FreeBoundarySolution<S> package(Polygonal<S> ell, const S& alpha, const S& horizon) {
  Polygonal<S> big_l = ell + Polygonal<S>::identity();
  Polygonal<S> s_of = sublevel_distribution(big_l, S(0), horizon, S(0), std::optional<S>(horizon));
  return {std::move(ell), std::move(big_l), std::move(s_of), alpha, horizon};
}

}  // namespace detail

/// Causal block solver for data with a positive block length.
template <Scalar S>
FreeBoundarySolution<S> solve_ell(const Polygonal<S>& u0, const S& horizon, std::optional<S> block = std::nullopt) {
  if (!(S(0) < horizon)) throw domain_error("horizon must be positive");
  S star = choose_block_length(u0);
  if (!(S(0) < star)) throw vanishing_data_error("datum vanishes at 0; use solve_ell_vanishing");
  S alpha = block.value_or(star);
  if (!(S(0) < alpha) || star < alpha) throw domain_error("block length must lie in (0, alpha*]");
  Polygonal<S> first = u0 + Polygonal<S>::identity();
  Polygonal<S> ell = detail::march(u0, truncate_after(first, alpha), alpha, alpha, horizon);
  return detail::package(std::move(ell), alpha, horizon);
}

/// Positive root of g^2 + k g - k.
struct GammaRoot {
  double approx;
  std::optional<Rational> exact;
};

inline GammaRoot gamma_root(const Rational& kappa) {
  if (!(Rational(0) < kappa)) throw domain_error("gamma_root needs kappa > 0");
  double k = to_double(kappa);
  double g = 2.0 * k / (k + std::sqrt(k * k + 4.0 * k));
  GammaRoot r{g, std::nullopt};
  if (auto q = exact_sqrt(Rational(kappa * kappa + 4 * kappa))) r.exact = (*q - kappa) / 2;
  return r;
}

inline GammaRoot gamma_root(double kappa) {
  if (!(kappa > 0)) throw domain_error("gamma_root needs kappa > 0");
  return {2.0 * kappa / (kappa + std::sqrt(kappa * kappa + 4.0 * kappa)), std::nullopt};
}

/// How a vanishing datum was resolved.
enum class VanishingRoute { positive, zero_restart, ramp, delta_envelope };

inline const char* to_string(VanishingRoute r) {
  switch (r) {
    case VanishingRoute::positive: return "positive";
    case VanishingRoute::zero_restart: return "zero_restart";
    case VanishingRoute::ramp: return "ramp";
    default: return "delta_envelope";
  }
}

template <Scalar S>
struct VanishingSolution {
  VanishingRoute route;
  std::optional<FreeBoundarySolution<S>> exact;  // absent when no exact route applies
  std::vector<S> deltas;
  std::vector<FreeBoundarySolution<S>> family;  // solutions for u0 + delta

  /// Exact solution when available, else the smallest-delta member.
  const FreeBoundarySolution<S>& candidate() const {
    if (exact) return *exact;
    return family.back();
  }
  bool certified() const { return exact.has_value(); }
};

namespace detail {

/// Exact solution for data with u0(0) = 0 when a closed route exists.
/// A zero stretch [0, b) forces ell = 0 there and restarts from b with the shifted datum.
/// A ramp kappa t gives ell = (kappa + gamma) t up to the first breakpoint a, after which
/// ell >= c := (kappa + gamma) a / (1 + kappa + gamma) and the causal march continues with step c.
template <Scalar S>
std::optional<Polygonal<S>> exact_vanishing(const Polygonal<S>& u0, const S& horizon, VanishingRoute& route) {
  const auto& p0 = u0.pieces().front();
  if (S(0) < p0.value) {
    if (route != VanishingRoute::zero_restart) route = VanishingRoute::positive;
    return solve_ell(u0, horizon).ell;
  }
  auto e = u0.piece_end(0);
  if (p0.slope == S(0)) {
    route = VanishingRoute::zero_restart;
    if (!e || !(*e < horizon)) return Polygonal<S>::constant(S(0));
    const S b = *e;
    auto rest = exact_vanishing(translate(clip(u0, b), b), S(horizon - b), route);
    if (!rest) return std::nullopt;
    return splice(Polygonal<S>::constant(S(0)), b, translate(*rest, S(-b)));
  }
  const S kappa = p0.slope;
  S gamma;
  if constexpr (scalar_traits<S>::exact) {
    auto g = gamma_root(kappa);
    if (!g.exact) return std::nullopt;
    gamma = *g.exact;
  } else {
    gamma = gamma_root(kappa).approx;
  }
  if (route != VanishingRoute::zero_restart) route = VanishingRoute::ramp;
  const S rate = kappa + gamma;
  Polygonal<S> ramp = Polygonal<S>::affine(S(0), rate);
  if (!e || !(*e < horizon)) return truncate_after(ramp, horizon);
  const S a = *e;
  const S step = rate * a / (S(1) + rate);
  return march(u0, truncate_after(ramp, a), a, step, horizon);
}

}  // namespace detail

template <Scalar S>
std::vector<S> default_deltas() {
  return {scalar<S>(1, 2), scalar<S>(1, 4), scalar<S>(1, 8), scalar<S>(1, 16)};
}

/// Data with u0(0) = 0. Exact when the datum starts with a zero stretch or a ramp with rational
/// root; the family for u0 + delta is always reported.
template <Scalar S>
VanishingSolution<S> solve_ell_vanishing(const Polygonal<S>& u0, const S& horizon,
                                         std::vector<S> deltas = default_deltas<S>()) {
  detail::require_datum(u0);
  if (!(S(0) < horizon)) throw domain_error("horizon must be positive");
  if (deltas.empty()) throw domain_error("need at least one delta");
  std::sort(deltas.begin(), deltas.end(), [](const S& a, const S& b) { return b < a; });
  for (const auto& d : deltas)
    if (!(S(0) < d)) throw domain_error("deltas must be positive");
  VanishingSolution<S> out{VanishingRoute::delta_envelope, std::nullopt, deltas, {}};
  VanishingRoute route = VanishingRoute::positive;
  if (auto ell = detail::exact_vanishing(u0, horizon, route)) {
    out.route = route;
    out.exact = detail::package(std::move(*ell), choose_block_length(u0), horizon);
  }
  for (const auto& d : deltas) out.family.push_back(solve_ell(add_constant(u0, d), horizon));
  return out;
}

/// Positive data through solve_ell, vanishing data through the exact routes only.
template <Scalar S>
FreeBoundarySolution<S> solve_general(const Polygonal<S>& u0, const S& horizon) {
  detail::require_datum(u0);
  if (S(0) < u0.pieces().front().value) return solve_ell(u0, horizon);
  if (!(S(0) < horizon)) throw domain_error("horizon must be positive");
  VanishingRoute route = VanishingRoute::positive;
  auto ell = detail::exact_vanishing(u0, horizon, route);
  if (!ell) throw vanishing_data_error("vanishing datum without an exact route");
  return detail::package(std::move(*ell), S(0), horizon);
}

/// max over samples of |ell(t) - u0(t) - |{s in [0,t] : ell(s) + s > t}||.
template <Scalar S>
S fixed_point_residual(const FreeBoundarySolution<S>& sol, const Polygonal<S>& u0, std::span<const S> samples) {
  S worst(0);
  for (const S& t : samples) {
    if (t < S(0) || sol.horizon < t) throw domain_error("residual sample outside [0, horizon]");
    S r = sol.ell(t) - u0(t) - antidiagonal_superlevel_measure(sol.ell, t);
    worst = std::max(worst, scalar_traits<S>::abs(r));
  }
  return worst;
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_FREEBOUNDARY_HPP
