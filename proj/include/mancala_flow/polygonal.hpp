#ifndef MANCALA_FLOW_POLYGONAL_HPP
#define MANCALA_FLOW_POLYGONAL_HPP

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace mancala_flow {

enum class Side { left, right };

/// f(t) = value + slope * (t - start) on [start, next start).
template <Scalar S>
struct Piece {
  S start;
  S slope;
  S value;

  S at(const S& t) const { return value + slope * (t - start); }
  friend bool operator==(const Piece&, const Piece&) = default;
};

enum class TailKind { zero, constant, affine };

inline const char* to_string(TailKind k) {
  switch (k) {
    case TailKind::zero: return "zero";
    case TailKind::constant: return "constant";
    default: return "affine";
  }
}

/// How a vertex list continues past its last vertex.
enum class Continue { zero, hold, extend };

/// Right-continuous piecewise-affine function on [origin, inf).
/// The last piece is the tail and extends to infinity.
template <Scalar S>
class Polygonal {
 public:
  using scalar_type = S;
  using traits = scalar_traits<S>;

  Polygonal() : pieces_{Piece<S>{S(0), S(0), S(0)}} {}

  explicit Polygonal(std::vector<Piece<S>> pieces) : pieces_(std::move(pieces)) { normalize(); }

  static Polygonal constant(const S& c, const S& origin = S(0)) {
    return Polygonal({Piece<S>{origin, S(0), c}});
  }
  static Polygonal identity(const S& origin = S(0)) {
    return Polygonal({Piece<S>{origin, S(1), origin}});
  }
  static Polygonal affine(const S& value_at_origin, const S& slope, const S& origin = S(0)) {
    return Polygonal({Piece<S>{origin, slope, value_at_origin}});
  }

  /// Vertices (t_i, y_i) with nondecreasing t; a repeated t is a jump and the later y wins.
  static Polygonal from_vertices(std::span<const std::pair<S, S>> v, Continue after = Continue::zero) {
    if (v.empty()) throw domain_error("from_vertices: no vertices");
    std::vector<Piece<S>> out;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const auto& [t0, y0] = v[i];
      const auto& [t1, y1] = v[i + 1];
      if (t1 < t0) throw domain_error("from_vertices: abscissae must be nondecreasing");
      if (t1 == t0) continue;
      out.push_back({t0, (y1 - y0) / (t1 - t0), y0});
    }
    const auto& [tl, yl] = v.back();
    if (after == Continue::zero) {
      out.push_back({tl, S(0), S(0)});
    } else if (after == Continue::hold || out.empty()) {
      out.push_back({tl, S(0), yl});
    } else {
      S k = out.back().slope;
      out.push_back({tl, k, yl});
    }
    return Polygonal(std::move(out));
  }
  static Polygonal from_vertices(std::initializer_list<std::pair<S, S>> v, Continue after = Continue::zero) {
    std::vector<std::pair<S, S>> tmp(v);
    return from_vertices(std::span<const std::pair<S, S>>(tmp), after);
  }

  const std::vector<Piece<S>>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  const S& origin() const { return pieces_.front().start; }
  const Piece<S>& tail() const { return pieces_.back(); }

  TailKind tail_kind() const {
    const auto& p = pieces_.back();
    if (!traits::near_zero(p.slope)) return TailKind::affine;
    return traits::near_zero(p.value) ? TailKind::zero : TailKind::constant;
  }

  /// Index of the piece governing t from the right.
  std::size_t locate(const S& t) const {
    if (t < origin()) throw domain_error("evaluation left of the domain");
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](const S& x, const Piece<S>& p) { return x < p.start; });
    return static_cast<std::size_t>(std::distance(pieces_.begin(), it)) - 1;
  }

  /// Index of the piece governing t from the left (t > origin).
  std::size_t locate_left(const S& t) const {
    if (!(origin() < t)) throw domain_error("left limit at or before the domain start");
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                               [](const Piece<S>& p, const S& x) { return p.start < x; });
    return static_cast<std::size_t>(std::distance(pieces_.begin(), it)) - 1;
  }

  S operator()(const S& t) const { return pieces_[locate(t)].at(t); }

  S eval(const S& t, Side side = Side::right) const {
    return side == Side::right ? (*this)(t) : pieces_[locate_left(t)].at(t);
  }
  S left_limit(const S& t) const { return eval(t, Side::left); }
  S slope_at(const S& t) const { return pieces_[locate(t)].slope; }

  /// End of piece i (nullopt for the tail).
  std::optional<S> piece_end(std::size_t i) const {
    if (i + 1 < pieces_.size()) return pieces_[i + 1].start;
    return std::nullopt;
  }

  std::vector<S> breakpoints() const {
    std::vector<S> b;
    b.reserve(pieces_.size());
    for (const auto& p : pieces_) b.push_back(p.start);
    return b;
  }

  bool is_nonnegative() const {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (p.value < S(0) && !traits::near_zero(p.value)) return false;
      if (auto e = piece_end(i)) {
        S y = p.at(*e);
        if (y < S(0) && !traits::near_zero(y)) return false;
      } else if (p.slope < S(0) && !traits::near_zero(p.slope)) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const Polygonal& a, const Polygonal& b) { return a.pieces_ == b.pieces_; }

 private:
  void normalize() {
    if (pieces_.empty()) throw domain_error("polygonal with no pieces");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
      if (pieces_[i + 1].start < pieces_[i].start &&
          !traits::near(pieces_[i + 1].start, pieces_[i].start))
        throw domain_error("polygonal: piece starts must be nondecreasing");
    std::vector<Piece<S>> out;
    out.reserve(pieces_.size());
    for (auto& p : pieces_) {
      if (!out.empty() && traits::near(out.back().start, p.start)) {
        S s = out.back().start;
        out.back() = p;
        out.back().value = p.at(s);
        out.back().start = s;
        if (out.size() >= 2) try_merge(out);
        continue;
      }
      out.push_back(p);
      try_merge(out);
    }
    pieces_ = std::move(out);
  }

  static void try_merge(std::vector<Piece<S>>& out) {
    while (out.size() >= 2) {
      const auto& a = out[out.size() - 2];
      const auto& b = out.back();
      if (!traits::near(a.slope, b.slope) || !traits::near(a.at(b.start), b.value)) return;
      out.pop_back();
    }
  }

  std::vector<Piece<S>> pieces_;
};

// ---------------------------------------------------------------- algebra

template <Scalar S>
std::vector<S> merged_breakpoints(const Polygonal<S>& f, const Polygonal<S>& g, const S& from) {
  std::vector<S> b{from};
  for (const auto& p : f.pieces()) if (from < p.start) b.push_back(p.start);
  for (const auto& p : g.pieces()) if (from < p.start) b.push_back(p.start);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end(),
                      [](const S& x, const S& y) { return scalar_traits<S>::near(x, y); }),
          b.end());
  return b;
}

template <Scalar S>
Polygonal<S> combine(const Polygonal<S>& f, const S& cf, const Polygonal<S>& g, const S& cg) {
  S o = std::max(f.origin(), g.origin());
  std::vector<Piece<S>> out;
  for (const S& b : merged_breakpoints(f, g, o)) {
    const auto& pf = f.pieces()[f.locate(b)];
    const auto& pg = g.pieces()[g.locate(b)];
    out.push_back({b, cf * pf.slope + cg * pg.slope, cf * pf.at(b) + cg * pg.at(b)});
  }
  return Polygonal<S>(std::move(out));
}

template <Scalar S>
Polygonal<S> operator+(const Polygonal<S>& f, const Polygonal<S>& g) { return combine(f, S(1), g, S(1)); }
template <Scalar S>
Polygonal<S> operator-(const Polygonal<S>& f, const Polygonal<S>& g) { return combine(f, S(1), g, S(-1)); }

template <Scalar S>
Polygonal<S> scale(const Polygonal<S>& f, const S& c) {
  std::vector<Piece<S>> out;
  for (const auto& p : f.pieces()) out.push_back({p.start, c * p.slope, c * p.value});
  return Polygonal<S>(std::move(out));
}

template <Scalar S>
Polygonal<S> add_constant(const Polygonal<S>& f, const S& c) {
  std::vector<Piece<S>> out = f.pieces();
  for (auto& p : out) p.value += c;
  return Polygonal<S>(std::move(out));
}

/// g(t) = f(t + offset) on [origin - offset, inf).
template <Scalar S>
Polygonal<S> translate(const Polygonal<S>& f, const S& offset) {
  std::vector<Piece<S>> out = f.pieces();
  for (auto& p : out) p.start -= offset;
  return Polygonal<S>(std::move(out));
}

/// Restriction to [new_origin, inf).
template <Scalar S>
Polygonal<S> clip(const Polygonal<S>& f, const S& new_origin) {
  std::size_t i = f.locate(new_origin);
  std::vector<Piece<S>> out;
  const auto& p = f.pieces()[i];
  out.push_back({new_origin, p.slope, p.at(new_origin)});
  for (std::size_t k = i + 1; k < f.size(); ++k) out.push_back(f.pieces()[k]);
  return Polygonal<S>(std::move(out));
}

/// Drops breakpoints after h; the piece covering h becomes the tail.
template <Scalar S>
Polygonal<S> truncate_after(const Polygonal<S>& f, const S& h) {
  std::vector<Piece<S>> out;
  for (const auto& p : f.pieces())
    if (!(h < p.start) || out.empty()) out.push_back(p);
  return Polygonal<S>(std::move(out));
}

/// f on [f.origin, at), g on [at, inf).
template <Scalar S>
Polygonal<S> splice(const Polygonal<S>& f, const S& at, const Polygonal<S>& g) {
  if (at < g.origin()) throw domain_error("splice: right part starts after the splice point");
  std::vector<Piece<S>> out;
  for (const auto& p : f.pieces())
    if (p.start < at) out.push_back(p);
  Polygonal<S> gc = clip(g, at);
  out.insert(out.end(), gc.pieces().begin(), gc.pieces().end());
  return Polygonal<S>(std::move(out));
}

/// Same function in another arithmetic backend.
template <Scalar T, Scalar S>
Polygonal<T> convert(const Polygonal<S>& f) {
  if constexpr (std::is_same_v<T, S>) {
    return f;
  } else {
    auto cv = [](const S& x) -> T {
      if constexpr (std::is_same_v<S, Rational>) return from_rational<T>(x);
      else return static_cast<T>(x);
    };
    std::vector<Piece<T>> out;
    for (const auto& p : f.pieces()) out.push_back({cv(p.start), cv(p.slope), cv(p.value)});
    return Polygonal<T>(std::move(out));
  }
}

// ---------------------------------------------------------------- integrals and measures

/// Integral over [a, b]; b = nullopt means infinity.
template <Scalar S>
S mass(const Polygonal<S>& f, const S& a, const std::optional<S>& b = std::nullopt) {
  if (a < f.origin()) throw domain_error("mass: lower limit left of the domain");
  if (!b && f.tail_kind() != TailKind::zero) throw divergence_error("mass: tail is not identically zero");
  if (b && *b < a) throw domain_error("mass: reversed interval");
  S total(0);
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    S lo = std::max(a, ps[i].start);
    auto e = f.piece_end(i);
    if (!e) {
      if (!b) break;
      e = *b;
    }
    S hi = b ? std::min(*e, *b) : *e;
    if (!(lo < hi)) continue;
    total += (ps[i].at(lo) + ps[i].at(hi)) * (hi - lo) / S(2);
  }
  return total;
}

/// Measure of {s in [a, b) : piece(s) <= y}.
template <Scalar S>
S piece_sublevel(const Piece<S>& p, const S& a, const S& b, const S& y) {
  if (!(a < b)) return S(0);
  if (p.slope == S(0)) return p.value <= y ? S(b - a) : S(0);
  S x = p.start + (y - p.value) / p.slope;
  if (S(0) < p.slope) return std::clamp(S(x - a), S(0), S(b - a));
  return std::clamp(S(b - x), S(0), S(b - a));
}

/// |{s in [lo, hi] : f(s) <= level}|.
template <Scalar S>
S sublevel_measure(const Polygonal<S>& f, const S& level, const S& lo, const S& hi) {
  if (lo < f.origin()) throw domain_error("sublevel_measure: range left of the domain");
  S total(0);
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(ps[i].start < hi)) break;
    auto e = f.piece_end(i);
    S a = std::max(lo, ps[i].start);
    S b = e ? std::min(*e, hi) : hi;
    total += piece_sublevel(ps[i], a, b, level);
  }
  return total;
}

/// |{s in [origin, cap] : f(s) <= level}|.
template <Scalar S>
S sublevel_measure(const Polygonal<S>& f, const S& level, const S& cap) {
  return sublevel_measure(f, level, f.origin(), cap);
}

/// D(y) = |{s in [lo, hi] : f(s) <= y}| as a right-continuous function of y on [y_from, inf).
/// With y_to the breakpoints past y_to are not resolved.
template <Scalar S>
Polygonal<S> sublevel_distribution(const Polygonal<S>& f, const S& lo, const S& hi, const S& y_from,
                                   const std::optional<S>& y_to = std::nullopt) {
  std::vector<S> cand{y_from};
  if (y_to) cand.push_back(*y_to);
  const auto& ps = f.pieces();
  auto keep = [&](const S& y) {
    if (y_from < y && (!y_to || y < *y_to)) cand.push_back(y);
  };
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(ps[i].start < hi)) break;
    auto e = f.piece_end(i);
    S a = std::max(lo, ps[i].start);
    S b = e ? std::min(*e, hi) : hi;
    if (!(a < b)) continue;
    keep(ps[i].at(a));
    keep(ps[i].at(b));
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](const S& x, const S& y) { return scalar_traits<S>::near(x, y); }),
             cand.end());
  std::vector<Piece<S>> out;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    S v = sublevel_measure(f, cand[k], lo, hi);
    S slope(0);
    if (k + 1 < cand.size()) {
      S mid = (cand[k] + cand[k + 1]) / S(2);
      slope = (sublevel_measure(f, mid, lo, hi) - v) / (mid - cand[k]);
    }
    out.push_back({cand[k], slope, v});
  }
  return Polygonal<S>(std::move(out));
}

/// |{s in [0, t] : ell(s) + s > t}|.
template <Scalar S>
S antidiagonal_superlevel_measure(const Polygonal<S>& ell, const S& t) {
  if (t < S(0)) throw domain_error("antidiagonal measure at negative time");
  Polygonal<S> big_l = ell + Polygonal<S>::identity(ell.origin());
  return t - ell.origin() - sublevel_measure(big_l, t, ell.origin(), t);
}

/// Integral of (f - c)^+ over [a, b].
template <Scalar S>
S positive_part_integral(const Polygonal<S>& f, const S& c, const S& a, const S& b) {
  S total(0);
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto e = f.piece_end(i);
    S lo = std::max(a, ps[i].start);
    S hi = e ? std::min(*e, b) : b;
    if (!(lo < hi)) continue;
    S y0 = ps[i].at(lo) - c, y1 = ps[i].at(hi) - c;
    if (!(y0 < S(0)) && !(y1 < S(0))) {
      total += (y0 + y1) * (hi - lo) / S(2);
    } else if (S(0) < y0 || S(0) < y1) {
      S top = std::max(y0, y1);
      S frac = top / (top - std::min(y0, y1));
      total += top * frac * (hi - lo) / S(2);
    }
  }
  return total;
}

/// Infimum and supremum of f on [a, b], left limits included.
template <Scalar S>
std::pair<S, S> extrema_on(const Polygonal<S>& f, const S& a, const S& b) {
  S lo = f(a), hi = lo;
  auto upd = [&](const S& y) { lo = std::min(lo, y); hi = std::max(hi, y); };
  if (f.origin() < a) upd(f.left_limit(a));
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto e = f.piece_end(i);
    S s = std::max(a, ps[i].start);
    S t = e ? std::min(*e, b) : b;
    if (s < t) { upd(ps[i].at(s)); upd(ps[i].at(t)); }
  }
  upd(f(b));
  return {lo, hi};
}

/// Pointwise equality on [a, b] including left limits.
template <Scalar S>
bool equal_on(const Polygonal<S>& f, const Polygonal<S>& g, const S& a, const S& b) {
  using T = scalar_traits<S>;
  auto bps = merged_breakpoints(f, g, a);
  bps.push_back(b);
  for (std::size_t k = 0; k < bps.size(); ++k) {
    const S& p = bps[k];
    if (b < p) break;
    if (!T::near(f(p), g(p))) return false;
    if (a < p && !T::near(f.left_limit(p), g.left_limit(p))) return false;
    if (k + 1 < bps.size() && p < bps[k + 1] && !(b < bps[k + 1])) {
      S m = (p + bps[k + 1]) / S(2);
      if (!T::near(f(m), g(m))) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- extended slopes

template <Scalar S>
struct ExtSlope {
  enum class Kind { finite, neg_inf, pos_inf };
  Kind kind = Kind::finite;
  S value{};

  static ExtSlope finite(const S& v) { return {Kind::finite, v}; }
  static ExtSlope minus_infinity() { return {Kind::neg_inf, S(0)}; }
  static ExtSlope plus_infinity() { return {Kind::pos_inf, S(0)}; }

  bool is_finite() const { return kind == Kind::finite; }
  bool is_neg_inf() const { return kind == Kind::neg_inf; }

  /// Nonpositive including -inf.
  bool nonpositive() const { return kind == Kind::neg_inf || (kind == Kind::finite && !(S(0) < value)); }

  friend bool operator==(const ExtSlope& a, const ExtSlope& b) {
    return a.kind == b.kind && (a.kind != Kind::finite || a.value == b.value);
  }
};

template <Scalar S>
std::string to_string(const ExtSlope<S>& s) {
  if (s.kind == ExtSlope<S>::Kind::neg_inf) return "-inf";
  if (s.kind == ExtSlope<S>::Kind::pos_inf) return "inf";
  if constexpr (std::is_same_v<S, Rational>) return to_string(s.value);
  else return std::to_string(s.value);
}

/// Slope of the image of a segment under (t, s) -> (t + s, s): 1/g' = 1/g + 1.
template <Scalar S>
ExtSlope<S> r_image_slope(const ExtSlope<S>& g) {
  using E = ExtSlope<S>;
  if (g.kind != E::Kind::finite) return E::finite(S(1));
  if (g.value == S(0)) return E::finite(S(0));
  if (scalar_traits<S>::near(g.value, S(-1))) return E::minus_infinity();
  return E::finite(g.value / (S(1) + g.value));
}

// ---------------------------------------------------------------- planar chains

template <Scalar S>
struct Vertex {
  S t;
  S s;
  bool jump = false;  // segment arriving here is a vertical inserted at a jump
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

template <Scalar S>
struct PlanarChain {
  std::vector<Vertex<S>> vertices;
  bool graph_like = true;
};

/// Graph of f on [a, b] with vertical segments at jumps.
template <Scalar S>
PlanarChain<S> generalized_graph(const Polygonal<S>& f, const S& a, const S& b) {
  PlanarChain<S> c;
  c.vertices.push_back({a, f(a), false});
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(a < ps[i].start)) continue;
    if (!(ps[i].start < b)) break;
    S p = ps[i].start;
    S yl = f.left_limit(p), yr = f(p);
    c.vertices.push_back({p, yl, false});
    if (!scalar_traits<S>::near(yl, yr)) c.vertices.push_back({p, yr, true});
  }
  c.vertices.push_back({b, f.left_limit(b), false});
  return c;
}

/// Closed boundary of the subgraph {(t, s) : a <= t <= b, 0 <= s <= f(t)}.
template <Scalar S>
PlanarChain<S> subgraph_boundary(const Polygonal<S>& f, const S& a, const S& b) {
  PlanarChain<S> g = generalized_graph(f, a, b);
  PlanarChain<S> c;
  c.graph_like = false;
  c.vertices.push_back({a, S(0), false});
  bool first = true;
  for (const auto& v : g.vertices) {
    c.vertices.push_back({v.t, v.s, first ? true : v.jump});
    first = false;
  }
  c.vertices.push_back({b, S(0), true});
  return c;
}

/// (t, s) -> (t + s, s).
template <Scalar S>
PlanarChain<S> transform_R(const PlanarChain<S>& c) {
  PlanarChain<S> out;
  out.vertices.reserve(c.vertices.size());
  bool monotone = true;
  for (const auto& v : c.vertices) {
    if (!out.vertices.empty() && v.t + v.s < out.vertices.back().t) monotone = false;
    out.vertices.push_back({v.t + v.s, v.s, v.jump});
  }
  out.graph_like = c.graph_like && monotone;
  return out;
}

namespace detail {
template <Scalar S>
std::vector<Vertex<S>> closed_vertices(const PlanarChain<S>& c) {
  std::vector<Vertex<S>> v = c.vertices;
  if (v.empty()) return v;
  for (const auto& p : v)
    if (p.s < S(0) && !scalar_traits<S>::near_zero(p.s)) throw domain_error("chain dips below the axis");
  if (!scalar_traits<S>::near_zero(v.back().s)) v.push_back({v.back().t, S(0), true});
  if (!scalar_traits<S>::near_zero(v.front().s)) v.insert(v.begin(), Vertex<S>{v.front().t, S(0), true});
  return v;
}
}  // namespace detail

/// Absolute shoelace area of the chain closed along the axis.
template <Scalar S>
S polygon_area(const PlanarChain<S>& c) {
  auto v = detail::closed_vertices(c);
  S a(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    a += p.t * q.s - q.t * p.s;
  }
  return scalar_traits<S>::abs(a) / S(2);
}

/// Length of the vertical slice at x of the region bounded by the closed chain (even-odd).
template <Scalar S>
S slice_measure(const PlanarChain<S>& c, const S& x) {
  auto v = detail::closed_vertices(c);
  std::vector<S> ys;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    bool cross = (!(x < p.t) && x < q.t) || (!(x < q.t) && x < p.t);
    if (!cross) continue;
    ys.push_back(p.s + (q.s - p.s) * (x - p.t) / (q.t - p.t));
  }
  if (ys.size() % 2 != 0) throw consistency_error("slice_measure: odd crossing count");
  std::sort(ys.begin(), ys.end());
  S m(0);
  for (std::size_t k = 0; k + 1 < ys.size(); k += 2) m += ys[k + 1] - ys[k];
  return m;
}

/// Vertical rearrangement: x -> length of the slice at x, right-continuous, zero past the chain.
template <Scalar S>
Polygonal<S> rearrange_vertical(const PlanarChain<S>& c) {
  auto v = detail::closed_vertices(c);
  if (v.size() < 3) return Polygonal<S>::constant(S(0), v.empty() ? S(0) : v.front().t);
  std::vector<S> xs;
  for (const auto& p : v) xs.push_back(p.t);
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p1 = v[i];
    const auto& p2 = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& q1 = v[j];
      const auto& q2 = v[(j + 1) % n];
      S d = (p2.t - p1.t) * (q2.s - q1.s) - (p2.s - p1.s) * (q2.t - q1.t);
      if (scalar_traits<S>::near_zero(d)) continue;
      S u = ((q1.t - p1.t) * (q2.s - q1.s) - (q1.s - p1.s) * (q2.t - q1.t)) / d;
      S w = ((q1.t - p1.t) * (p2.s - p1.s) - (q1.s - p1.s) * (p2.t - p1.t)) / d;
      if (u < S(0) || S(1) < u || w < S(0) || S(1) < w) continue;
      xs.push_back(p1.t + u * (p2.t - p1.t));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](const S& a, const S& b) { return scalar_traits<S>::near(a, b); }),
           xs.end());
  PlanarChain<S> closed{v, false};
  std::vector<Piece<S>> out;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    S y0 = slice_measure(closed, xs[k]);
    S mid = (xs[k] + xs[k + 1]) / S(2);
    out.push_back({xs[k], (slice_measure(closed, mid) - y0) / (mid - xs[k]), y0});
  }
  out.push_back({xs.back(), S(0), S(0)});
  return Polygonal<S>(std::move(out));
}

// ---------------------------------------------------------------- critical structure

template <Scalar S>
struct CriticalSegment {
  S t_begin;
  S t_end;  // equals t_begin for a jump
  ExtSlope<S> slope;
  S fold_lo;  // R-image abscissae swept backwards by the segment
  S fold_hi;
};

/// Pieces of slope < -1 and downward jumps of f within [a, b].
template <Scalar S>
std::vector<CriticalSegment<S>> critical_segments(const Polygonal<S>& f, const S& a, const S& b) {
  std::vector<CriticalSegment<S>> out;
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const S& p = ps[i].start;
    if (b < p) break;
    if (a < p) {
      S yl = f.left_limit(p), yr = ps[i].value;
      if (yr < yl && !scalar_traits<S>::near(yl, yr))
        out.push_back({p, p, ExtSlope<S>::minus_infinity(), p + yr, p + yl});
    }
    auto e = f.piece_end(i);
    S lo = std::max(a, p);
    S hi = e ? std::min(*e, b) : b;
    if (lo < hi && ps[i].slope < S(-1) && !scalar_traits<S>::near(ps[i].slope, S(-1)))
      out.push_back({lo, hi, ExtSlope<S>::finite(ps[i].slope), hi + ps[i].at(hi), lo + ps[i].at(lo)});
  }
  return out;
}

/// Sup of one-sided increments: +inf at an upward jump, else the largest slope on [a, b].
template <Scalar S>
ExtSlope<S> one_sided_bound(const Polygonal<S>& f, const S& a, const S& b) {
  std::optional<S> best;
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const S& p = ps[i].start;
    if (b < p) break;
    if (a < p && f.left_limit(p) < ps[i].value && !scalar_traits<S>::near(f.left_limit(p), ps[i].value))
      return ExtSlope<S>::plus_infinity();
    auto e = f.piece_end(i);
    S lo = std::max(a, p);
    S hi = e ? std::min(*e, b) : b;
    if (lo < hi && (!best || *best < ps[i].slope)) best = ps[i].slope;
  }
  return ExtSlope<S>::finite(best.value_or(S(0)));
}

/// A pair (t, tau) with t > 0, t + tau <= horizon and f(t+tau) - f(t) > g(t+tau) - g(t) + tau.
template <Scalar S>
std::optional<std::pair<S, S>> one_sided_lipschitz_witness(const Polygonal<S>& f, const Polygonal<S>& g,
                                                           const S& horizon) {
  using T = scalar_traits<S>;
  Polygonal<S> h = f - g - Polygonal<S>::identity(std::max(f.origin(), g.origin()));
  auto violates = [&](const S& t, const S& tau) {
    S lhs = f(t + tau) - f(t), rhs = g(t + tau) - g(t) + tau;
    return rhs < lhs && !T::near(lhs, rhs);
  };
  const auto& ps = h.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const S& p = ps[i].start;
    if (horizon < p) break;
    if (i > 0 && S(0) < p) {
      S jump = ps[i].value - h.left_limit(p);
      if (S(0) < jump && !T::near_zero(jump)) {
        const auto& prev = ps[i - 1];
        S eps = (p - std::max(prev.start, S(0))) / S(2);
        if (prev.slope < S(0)) eps = std::min(eps, S(jump / (S(-2) * prev.slope)));
        if (violates(p - eps, eps)) return std::pair<S, S>{p - eps, eps};
      }
    }
    auto e = h.piece_end(i);
    S lo = std::max(p, S(0));
    S hi = e ? std::min(*e, horizon) : horizon;
    if (lo < hi && S(0) < ps[i].slope && !T::near_zero(ps[i].slope)) {
      S t = lo + (hi - lo) / S(4), tau = (hi - lo) / S(2);
      if (violates(t, tau)) return std::pair<S, S>{t, tau};
    }
  }
  return std::nullopt;
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_POLYGONAL_HPP
