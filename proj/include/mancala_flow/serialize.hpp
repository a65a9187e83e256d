#ifndef MANCALA_FLOW_SERIALIZE_HPP
#define MANCALA_FLOW_SERIALIZE_HPP

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "discrete.hpp"
#include "freeboundary.hpp"
#include "lyapunov.hpp"
#include "polygonal.hpp"
#include "riemann.hpp"
#include "transport.hpp"

namespace mancala_flow {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- scalars

inline std::string format_scalar(const Rational& r) { return to_string(r); }

inline std::string format_scalar(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Fixed-point rendering with k digits (plots and --decimal output).
template <Scalar S>
std::string format_decimal(const S& x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, to_double(x));
  std::string s = buf;
  if (s == "-0" || s.rfind("-0.", 0) == 0) {
    bool zero = s.find_first_not_of("-0.") == std::string::npos;
    if (zero) s.erase(0, 1);
  }
  return s;
}

template <Scalar S>
std::string render(const S& x, std::optional<int> decimal) {
  return decimal ? format_decimal(x, *decimal) : format_scalar(x);
}

template <Scalar S>
S parse_scalar(const json& j) {
  if constexpr (std::is_same_v<S, Rational>) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw parse_error("expected a rational string \"p/q\", got " + j.dump());
  } else {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (s.find('/') != std::string::npos || s.find_first_of(".eE") == std::string::npos)
        return to_double(parse_rational(s));
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw parse_error("malformed number '" + s + "'");
      return v;
    }
    throw parse_error("expected a number, got " + j.dump());
  }
}

// ---------------------------------------------------------------- polygonal

template <Scalar S>
json to_json(const Polygonal<S>& f) {
  json pieces = json::array();
  for (const auto& p : f.pieces())
    pieces.push_back({{"start", format_scalar(p.start)}, {"slope", format_scalar(p.slope)},
                      {"value", format_scalar(p.value)}});
  const auto& t = f.tail();
  return {{"pieces", pieces},
          {"tail", {{"kind", to_string(f.tail_kind())}, {"a", format_scalar(t.value)}, {"b", format_scalar(t.slope)}}}};
}

namespace detail {
inline Continue parse_continue(const std::string& s) {
  if (s == "zero") return Continue::zero;
  if (s == "hold") return Continue::hold;
  if (s == "extend") return Continue::extend;
  throw parse_error("'after' must be zero, hold or extend");
}
}  // namespace detail

/// Accepts the piece format, or {"vertices": [[t, y], ...], "after": "zero|hold|extend"}.
template <Scalar S>
Polygonal<S> polygonal_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("polygonal must be a JSON object");
  if (j.contains("vertices")) {
    std::vector<std::pair<S, S>> v;
    for (const auto& e : j.at("vertices")) {
      if (!e.is_array() || e.size() != 2) throw parse_error("vertex must be a [t, y] pair");
      v.emplace_back(parse_scalar<S>(e[0]), parse_scalar<S>(e[1]));
    }
    Continue after = detail::parse_continue(j.value("after", std::string("zero")));
    return Polygonal<S>::from_vertices(std::span<const std::pair<S, S>>(v), after);
  }
  if (!j.contains("pieces") || !j.at("pieces").is_array() || j.at("pieces").empty())
    throw parse_error("polygonal needs a non-empty 'pieces' array");
  std::vector<Piece<S>> ps;
  for (const auto& e : j.at("pieces")) {
    if (!e.is_object() || !e.contains("start") || !e.contains("slope") || !e.contains("value"))
      throw parse_error("piece needs start, slope and value");
    ps.push_back({parse_scalar<S>(e.at("start")), parse_scalar<S>(e.at("slope")), parse_scalar<S>(e.at("value"))});
  }
  Polygonal<S> f(std::move(ps));
  if (j.contains("tail")) {
    const auto& t = j.at("tail");
    std::string kind = t.value("kind", std::string());
    if (kind != to_string(f.tail_kind())) throw parse_error("tail kind '" + kind + "' disagrees with the last piece");
    if (t.contains("a") && !scalar_traits<S>::near(parse_scalar<S>(t.at("a")), f.tail().value))
      throw parse_error("tail value disagrees with the last piece");
    if (t.contains("b") && !scalar_traits<S>::near(parse_scalar<S>(t.at("b")), f.tail().slope))
      throw parse_error("tail slope disagrees with the last piece");
  }
  return f;
}

template <Scalar S>
Polygonal<S> polygonal_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("malformed JSON: ") + e.what());
  }
  return polygonal_from_json<S>(j);
}

template <Scalar S>
std::string dump(const Polygonal<S>& f) { return to_json(f).dump(2) + "\n"; }

template <Scalar S>
json to_json(const FreeBoundarySolution<S>& s) {
  return {{"ell", to_json(s.ell)}, {"big_l", to_json(s.big_l)}, {"s_of", to_json(s.s_of)},
          {"alpha", format_scalar(s.alpha)}, {"horizon", format_scalar(s.horizon)}};
}

template <Scalar S>
json to_json(const VanishingSolution<S>& v) {
  json fam = json::array();
  for (std::size_t k = 0; k < v.family.size(); ++k)
    fam.push_back({{"delta", format_scalar(v.deltas[k])}, {"solution", to_json(v.family[k])}});
  json out = {{"route", to_string(v.route)}, {"certified", v.certified()}};
  out["exact"] = v.exact ? to_json(*v.exact) : json(nullptr);
  out["family"] = fam;
  return out;
}

/// A slice with its frame tag and time.
template <Scalar S>
json slice_to_json(const Polygonal<S>& slice, Frame frame, const S& time) {
  json j = to_json(slice);
  j["frame"] = to_string(frame);
  j["time"] = format_scalar(time);
  return j;
}

// ---------------------------------------------------------------- CSV

/// Vertices of the generalized graph on [a, b]: (coordinate, value) rows, jumps as two rows.
template <Scalar S>
std::string slice_csv(const Polygonal<S>& f, const S& a, const S& b, std::optional<int> decimal = std::nullopt) {
  std::ostringstream os;
  os << "coordinate,value\n";
  for (const auto& v : generalized_graph(f, a, b).vertices) os << render(v.t, decimal) << ',' << render(v.s, decimal) << '\n';
  return os.str();
}

inline std::string riemann_csv(const std::vector<RiemannState>& seq) {
  std::ostringstream os;
  os << "n,T,M,t,m,delta_star,alpha,beta,rearranged\n";
  for (const auto& s : seq) {
    os << s.n << ',' << to_string(s.T) << ',' << to_string(s.M) << ',' << to_string(s.t) << ',' << to_string(s.m)
       << ',' << (s.delta_star ? to_string(*s.delta_star) : std::string()) << ',' << to_string(s.alpha) << ','
       << to_string(s.beta) << ',' << (s.rearranged ? "true" : "false") << '\n';
  }
  return os.str();
}

template <Scalar S>
std::string energy_csv(const EnergyTrace<S>& tr, std::optional<int> decimal = std::nullopt) {
  std::ostringstream os;
  os << "tau,energy,cumulative_dissipation\n";
  S cum(0);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    if (k > 0) cum += tr.dissipation[k - 1];
    os << render(tr.times[k], decimal) << ',' << render(tr.energies[k], decimal) << ',' << render(cum, decimal) << '\n';
  }
  return os.str();
}

template <Scalar S>
std::string grid_csv(const GridField<S>& g, std::size_t stride = 1, std::optional<int> decimal = std::nullopt) {
  if (stride == 0) stride = 1;
  std::ostringstream os;
  os << "k,i,value\n";
  for (std::size_t k = 0; k <= g.steps; k += stride)
    for (std::size_t i = 1; i <= g.width; i += stride) os << k << ',' << i << ',' << render(g.at(k, i), decimal) << '\n';
  return os.str();
}

template <Scalar S>
json to_json(const GridField<S>& g, std::size_t stride = 1) {
  if (stride == 0) stride = 1;
  json rows = json::array();
  for (std::size_t k = 0; k <= g.steps; k += stride) {
    json row = json::array();
    for (std::size_t i = 1; i <= g.width; i += stride) row.push_back(format_scalar(g.at(k, i)));
    rows.push_back({{"k", k}, {"values", row}});
  }
  return {{"h", format_scalar(g.h)}, {"steps", g.steps}, {"width", g.width}, {"stride", stride}, {"rows", rows}};
}

inline json to_json(const ConvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"h", to_string(row.h)}, {"time", to_string(row.time)}, {"steps", row.steps}, {"width", row.width}, {"sup_error", row.sup_error},
                    {"l1_error", row.l1_error}, {"mass_drift", row.mass_drift}});
  return {{"rows", rows}, {"l1_strictly_decreasing", r.l1_strictly_decreasing}};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_SERIALIZE_HPP
