#ifndef MANCALA_FLOW_RIEMANN_HPP
#define MANCALA_FLOW_RIEMANN_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "polygonal.hpp"
#include "rational.hpp"

namespace mancala_flow {

using ExtRational = ExtSlope<Rational>;

// Record n of the closed-form recursion for u0 = 1_[0,1).
// G_n = (T, M) and g_n = (t, m); the starred values are the R-images that produced them.
struct RiemannState {
  int n = 0;
  Rational alpha;                    // 1 / (n + 1)
  ExtRational beta;                  // slope of G_{n+1} g_{n+1}
  std::optional<ExtRational> beta_star;
  Rational T, M, t, m;
  std::optional<Rational> T_star, M_star, t_star, m_star;
  std::optional<Rational> delta_star;  // T*_n - t*_n, the quantity tested at the previous step
  bool rearranged = false;             // delta_star > 0
};

inline Rational riemann_alpha(int n) { return Rational(1) / Rational(n + 1); }

inline RiemannState riemann_initial() {
  RiemannState s;
  s.n = 0;
  s.alpha = riemann_alpha(0);
  s.beta = ExtRational::minus_infinity();
  s.T = 0;
  s.M = 0;
  s.t = 0;
  s.m = 1;
  return s;
}

namespace detail {

inline void require(bool ok, const std::string& what, int n) {
  if (!ok) throw consistency_error("riemann state " + std::to_string(n) + ": " + what);
}

inline void validate(const RiemannState& s) {
  require(s.n >= 0, "negative index", s.n);
  require(s.alpha == riemann_alpha(s.n), "alpha_n != 1/(n+1)", s.n);
  require(!(s.t < s.T), "T_n > t_n", s.n);
  if (s.n == 0) return;
  require(s.m * s.M == 2, "m_n M_n != 2", s.n);
  require(!(s.m < 1) && !(2 < s.M) && !(2 < s.m * s.m) && !(s.M * s.M < 2), "extrema out of [1, 2]", s.n);
  require(s.beta.is_neg_inf() || s.beta.value < 0, "beta_n not negative", s.n);
  // sharper bound after a vertical rearrangement only
  if (s.beta_star && !s.beta_star->nonpositive())
    require(s.beta.is_neg_inf() || !(riemann_alpha(s.n) + riemann_alpha(s.n + 1) - 1 < s.beta.value),
            "beta_n above -1 + alpha_n + alpha_(n+1)", s.n);
}

/// 1/b* = 1/b + 1, with b = -inf -> 1 and b = -1 -> -inf.
inline ExtRational next_beta_star(const ExtRational& b) {
  if (b.is_neg_inf()) return ExtRational::finite(Rational(1));
  if (b.value == -1) return ExtRational::minus_infinity();
  if (b.value == 0) throw consistency_error("riemann: zero beta");
  return ExtRational::finite(Rational(1) / (Rational(1) / b.value + 1));
}

}  // namespace detail

inline RiemannState riemann_step(const RiemannState& s) {
  detail::validate(s);
  const int n = s.n;
  const Rational a_n = riemann_alpha(n), a_n1 = riemann_alpha(n + 1), a_n2 = riemann_alpha(n + 2);
  RiemannState r;
  r.n = n + 1;
  r.alpha = a_n1;
  r.t_star = s.t + s.m;
  r.m_star = s.m;
  r.T_star = s.T + s.M;
  r.M_star = s.M;
  const Rational delta = *r.T_star - *r.t_star;
  r.delta_star = delta;
  r.rearranged = 0 < delta;
  if (!r.rearranged) {
    const Rational d = n == 0 ? Rational(1) : Rational(0);
    r.T = *r.T_star + d;
    r.M = *r.M_star + 2 * d;
    r.t = *r.t_star;
    r.m = *r.m_star;
  } else {
    r.T = *r.t_star;
    r.M = *r.M_star - delta * a_n;
    r.t = *r.T_star;
    r.m = *r.m_star + delta * a_n1;
  }
  if (n >= 1 && s.beta_star) {
    bool positive = s.beta_star->is_finite() && 0 < s.beta_star->value;
    detail::require(positive == r.rearranged, "sign of Delta* disagrees with beta*", n);
  }
  ExtRational bs = detail::next_beta_star(s.beta);
  r.beta_star = bs;
  if (bs.nonpositive()) r.beta = bs;
  else r.beta = ExtRational::finite(a_n1 + a_n2 - bs.value);
  detail::require(!(r.t < r.T), "T_{n+1} > t_{n+1}", r.n);
  detail::require(s.t < r.T, "t_n >= T_{n+1}", r.n);
  if (r.n >= 1) detail::require(r.m < r.M, "m_{n+1} >= M_{n+1}", r.n);
  return r;
}

inline std::vector<RiemannState> riemann_sequence(int N) {
  if (N < 0) throw domain_error("riemann_sequence: negative N");
  std::vector<RiemannState> seq{riemann_initial()};
  for (int k = 0; k < N; ++k) seq.push_back(riemann_step(seq.back()));
  return seq;
}

/// Polygonal through g_0, G_1, g_1, ..., G_N, g_N; exact on [0, t_N].
inline Polygonal<Rational> riemann_polygonal(int N) {
  if (N < 1) throw domain_error("riemann_polygonal needs N >= 1");
  auto seq = riemann_sequence(N);
  std::vector<Piece<Rational>> ps;
  for (int k = 0; k < N; ++k) {
    const auto& a = seq[k];
    const auto& b = seq[k + 1];
    if (a.t < b.T) {
      detail::require((b.M - a.m) / (b.T - a.t) == a.alpha, "increasing segment off slope alpha_n", k);
      ps.push_back({a.t, a.alpha, a.m});
    }
    if (b.T < b.t) {
      Rational k_slope = (b.m - b.M) / (b.t - b.T);
      detail::require(a.beta.is_finite() && a.beta.value == k_slope, "decreasing segment off slope beta_n", k);
      ps.push_back({b.T, k_slope, b.M});
    } else {
      detail::require(a.beta.is_neg_inf(), "jump without infinite slope", k);
    }
  }
  ps.push_back({seq[N].t, seq[N].alpha, seq[N].m});
  return Polygonal<Rational>(std::move(ps));
}

struct RiemannLimits {
  Rational m;
  Rational M;
  double gap;  // max(M - sqrt 2, sqrt 2 - m)
};

inline RiemannLimits riemann_limits(int N) {
  if (N < 1) throw domain_error("riemann_limits needs N >= 1");
  auto seq = riemann_sequence(N);
  const auto& s = seq.back();
  const double r2 = std::sqrt(2.0);
  return {s.m, s.M, std::max(to_double(s.M) - r2, r2 - to_double(s.m))};
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_RIEMANN_HPP
