#ifndef MANCALA_FLOW_CLI_HPP
#define MANCALA_FLOW_CLI_HPP

#include <filesystem>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "check.hpp"
#include "discrete.hpp"
#include "errors.hpp"
#include "freeboundary.hpp"
#include "lyapunov.hpp"
#include "parallel.hpp"
#include "riemann.hpp"
#include "serialize.hpp"
#include "svg.hpp"
#include "transport.hpp"

namespace mancala_flow::cli {

enum class Command { solve, evolve, riemann, discrete, check, trace };
enum class Backend { rational, exact_float };
enum class Format { json, csv, svg };

inline Command parse_command(const std::string& s) {
  if (s == "solve") return Command::solve;
  if (s == "evolve") return Command::evolve;
  if (s == "riemann") return Command::riemann;
  if (s == "discrete") return Command::discrete;
  if (s == "check") return Command::check;
  if (s == "trace") return Command::trace;
  throw parse_error("unknown command '" + s + "'");
}

inline const char* command_name(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::evolve: return "evolve";
    case Command::riemann: return "riemann";
    case Command::discrete: return "discrete";
    case Command::check: return "check";
    default: return "trace";
  }
}

inline Backend parse_backend(const std::string& s) {
  if (s == "rational") return Backend::rational;
  if (s == "float") return Backend::exact_float;
  throw parse_error("backend must be rational or float");
}

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "svg") return Format::svg;
  throw parse_error("format must be csv, json or svg");
}

inline const char* extension(Format f) { return f == Format::json ? "json" : f == Format::csv ? "csv" : "svg"; }

struct RunConfig {
  Command command = Command::solve;
  std::optional<std::string> datum;
  std::optional<std::string> horizon;
  std::vector<std::string> times;
  std::optional<std::string> h;
  std::vector<std::string> hs;  // discrete convergence mode
  std::optional<std::size_t> steps;
  std::optional<std::size_t> width;
  int n = 12;
  std::optional<std::string> table;
  std::string suite = "all";
  Backend backend = Backend::rational;
  std::string out = ".";
  std::vector<Format> formats{Format::json};
  bool allow_vanishing = false;
  bool movie = false;
  std::optional<int> decimal;
  std::size_t stride = 1;
  int quadrature_n = 1024;
};

struct RunResult {
  int exit_code = 0;
  json report;
};

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

template <Scalar S>
S parse_value(const std::string& text, const char* what) {
  try {
    return parse_scalar<S>(json(text));
  } catch (const std::exception& e) {
    throw parse_error(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
}

template <Scalar S>
S require_positive(const std::optional<std::string>& v, const char* what) {
  if (!v) throw parse_error(std::string("missing --") + what);
  S x = parse_value<S>(*v, what);
  if (!(S(0) < x)) throw parse_error(std::string("--") + what + " must be positive");
  return x;
}

template <Scalar S>
std::vector<S> parse_times(const std::vector<std::string>& raw) {
  std::vector<S> ts;
  for (const auto& r : raw) {
    S t = parse_value<S>(r, "time");
    if (t < S(0)) throw parse_error("times must be nonnegative");
    ts.push_back(t);
  }
  return ts;
}

/// Output sink: writes files under the output directory and records them.
class Artifacts {
 public:
  explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw parse_error("cannot create output directory '" + dir_.string() + "'");
  }
  std::string put(const std::string& name, const std::string& content) {
    auto p = (dir_ / name).string();
    write_file(p, content);
    std::lock_guard lock(mu_);
    files_.push_back(p);
    return p;
  }
  std::string put_path(const std::string& path, const std::string& content) {
    write_file(path, content);
    std::lock_guard lock(mu_);
    files_.push_back(path);
    return path;
  }
  json list() const {
    std::vector<std::string> f = files_;
    std::sort(f.begin(), f.end());
    return f;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
  std::mutex mu_;
};

template <Scalar S>
Polygonal<S> load_datum(const RunConfig& cfg) {
  if (!cfg.datum) throw parse_error("missing --datum");
  std::string text;
  try {
    text = read_file(*cfg.datum);
  } catch (const std::runtime_error& e) {
    throw parse_error(e.what());
  }
  return polygonal_from_string<S>(text);
}

template <Scalar S>
FreeBoundarySolution<S> solve_for(const RunConfig& cfg, const Polygonal<S>& u0, const S& horizon, json& info) {
  if (S(0) < u0.pieces().front().value) {
    info["route"] = "positive";
    return solve_ell(u0, horizon);
  }
  if (!cfg.allow_vanishing) throw vanishing_data_error("datum vanishes at 0; pass --allow-vanishing");
  auto v = solve_ell_vanishing(u0, horizon);
  info["route"] = to_string(v.route);
  info["certified"] = v.certified();
  return v.candidate();
}

template <Scalar S>
double finite_max(const Polygonal<S>& f, const S& a, const S& b) {
  return to_double(extrema_on(f, a, b).second);
}

// ---------------------------------------------------------------- commands

template <Scalar S>
json cmd_solve(const RunConfig& cfg, Artifacts& art) {
  Polygonal<S> u0 = load_datum<S>(cfg);
  S horizon = require_positive<S>(cfg.horizon, "horizon");
  json info;
  auto sol = solve_for(cfg, u0, horizon, info);
  for (Format f : cfg.formats) {
    if (f == Format::json) {
      json j = to_json(sol);
      if (!(S(0) < u0.pieces().front().value)) {
        auto v = solve_ell_vanishing(u0, horizon);
        art.put("vanishing.json", to_json(v).dump(2) + "\n");
      }
      art.put("ell.json", j.dump(2) + "\n");
    } else if (f == Format::csv) {
      art.put("ell.csv", slice_csv(sol.ell, S(0), horizon, cfg.decimal));
    } else {
      PlotOptions opt{"free boundary", "t", "value", std::nullopt, std::nullopt};
      art.put("ell.svg", render_svg({make_series("ell", sol.ell, S(0), horizon),
                                     make_series("L = ell + t", sol.big_l, S(0), horizon)},
                                    opt));
    }
  }
  info["alpha"] = format_scalar(sol.alpha);
  info["pieces"] = sol.ell.size();
  return info;
}

template <Scalar S>
std::vector<S> movie_times() {
  std::vector<S> ts;
  for (int k = 0; k < 24; ++k) ts.push_back(scalar<S>(2 * k, 5));
  return ts;
}

template <Scalar S>
json cmd_evolve(const RunConfig& cfg, Artifacts& art) {
  Polygonal<S> u0 = load_datum<S>(cfg);
  std::vector<S> ts = cfg.movie ? movie_times<S>() : parse_times<S>(cfg.times);
  if (ts.empty()) throw parse_error("evolve needs --times or --movie");
  S tmax = *std::max_element(ts.begin(), ts.end());
  S horizon = cfg.horizon ? require_positive<S>(cfg.horizon, "horizon") : std::max(tmax, S(1));
  if (horizon < tmax) throw parse_error("times exceed --horizon");
  json info;
  auto field = make_field(u0, solve_for(cfg, u0, horizon, info));
  std::vector<Polygonal<S>> slices(ts.size(), Polygonal<S>::constant(S(0)));
  parallel_for(ts.size(), [&](std::size_t k) { slices[k] = u_slice(field, ts[k]); });

  // common viewport for frames
  S xmax(1);
  double ymax = 1;
  for (const auto& s : slices) {
    xmax = std::max(xmax, S(s.tail().start + S(1)));
    ymax = std::max(ymax, finite_max(s, S(0), s.tail().start));
  }
  std::vector<Format> formats = cfg.formats;
  if (cfg.movie && cfg.formats.size() == 1 && cfg.formats[0] == Format::json) formats = {Format::svg};
  json manifest = json::array();
  parallel_for(ts.size(), [&](std::size_t k) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "%04zu", k);
    const std::string stem = std::string(cfg.movie ? "frame_" : "u_") + idx;
    for (Format f : formats) {
      if (f == Format::json) art.put(stem + ".json", slice_to_json(slices[k], Frame::t_x, ts[k]).dump(2) + "\n");
      else if (f == Format::csv) art.put(stem + ".csv", slice_csv(slices[k], S(0), xmax, cfg.decimal));
      else {
        PlotOptions opt{"u(t, x), t = " + format_decimal(ts[k], 2), "x", "u", std::make_pair(0.0, to_double(xmax)),
                        std::make_pair(0.0, ymax * 1.05)};
        art.put(stem + ".svg", render_svg({make_series("u", slices[k], S(0), xmax)}, opt));
      }
    }
  });
  for (std::size_t k = 0; k < ts.size(); ++k) {
    json row = {{"time", format_scalar(ts[k])}, {"free_boundary", format_scalar(field.fb.ell(ts[k]))}};
    if (u0.tail_kind() == TailKind::zero) row["mass"] = format_scalar(mass(slices[k], S(0)));
    manifest.push_back(row);
  }
  art.put("evolve.json", json{{"frame", "t_x"}, {"slices", manifest}}.dump(2) + "\n");
  info["frames"] = ts.size();
  return info;
}

inline json cmd_riemann(const RunConfig& cfg, Artifacts& art) {
  if (cfg.n < 1) throw parse_error("--n must be at least 1");
  auto seq = riemann_sequence(cfg.n);
  if (cfg.table) art.put_path(*cfg.table, riemann_csv(seq));
  for (Format f : cfg.formats) {
    if (f == Format::csv) {
      if (!cfg.table) art.put("riemann.csv", riemann_csv(seq));
    } else if (f == Format::json) {
      json rows = json::array();
      for (const auto& s : seq)
        rows.push_back({{"n", s.n}, {"T", to_string(s.T)}, {"M", to_string(s.M)}, {"t", to_string(s.t)},
                        {"m", to_string(s.m)},
                        {"delta_star", s.delta_star ? json(to_string(*s.delta_star)) : json(nullptr)},
                        {"alpha", to_string(s.alpha)}, {"beta", to_string(s.beta)}, {"rearranged", s.rearranged}});
      art.put("riemann.json", json{{"states", rows}, {"ell", to_json(riemann_polygonal(cfg.n))}}.dump(2) + "\n");
    } else {
      auto ell = riemann_polygonal(cfg.n);
      Rational tn = seq.back().t;
      auto big_l = ell + Polygonal<Rational>::identity();
      PlotOptions opt{"Riemann datum: ell and L", "t", "value", std::nullopt, std::nullopt};
      art.put("riemann.svg", render_svg({make_series("ell", ell, Rational(0), tn),
                                         make_series("L = ell + t", big_l, Rational(0), tn)}, opt));
    }
  }
  const auto& last = seq.back();
  return {{"n", cfg.n}, {"t_n", to_string(last.t)}, {"m_n", to_string(last.m)}, {"M_n", to_string(last.M)}};
}

template <Scalar S>
json cmd_discrete_grid(const RunConfig& cfg, Artifacts& art) {
  Polygonal<S> u0 = load_datum<S>(cfg);
  S h = require_positive<S>(cfg.h, "h");
  if (!cfg.steps) throw parse_error("missing --steps");
  std::size_t width;
  if (cfg.width) width = *cfg.width;
  else {
    S reach = u0.tail().start + h * S(static_cast<long long>(*cfg.steps)) +
              S(extrema_on(u0, S(0), u0.tail().start).second) + S(1);
    width = static_cast<std::size_t>(std::ceil(to_double(S(reach / h))));
  }
  auto g = rescaled_run(u0, h, *cfg.steps, width);
  for (Format f : cfg.formats) {
    if (f == Format::json) art.put("grid.json", to_json(g, cfg.stride).dump(2) + "\n");
    else if (f == Format::csv) art.put("grid.csv", grid_csv(g, cfg.stride, cfg.decimal));
    else {
      std::vector<PlotSeries> series;
      for (std::size_t k : {std::size_t(0), g.steps}) {
        PlotSeries s{"k = " + std::to_string(k), {}};
        for (std::size_t i = 1; i <= g.width; ++i)
          s.points.push_back({to_double(S(h * S(static_cast<long long>(i)))), to_double(g.at(k, i)), false});
        series.push_back(std::move(s));
      }
      art.put("grid.svg", render_svg(series, PlotOptions{"rescaled game", "x", "cells", std::nullopt, std::nullopt}));
    }
  }
  return {{"h", format_scalar(h)}, {"steps", g.steps}, {"width", g.width},
          {"mass_first", format_scalar(g.row_mass(0))}, {"mass_last", format_scalar(g.row_mass(g.steps))}};
}

inline json cmd_discrete_convergence(const RunConfig& cfg, Artifacts& art) {
  Polygonal<Rational> u0 = load_datum<Rational>(cfg);
  Rational T = require_positive<Rational>(cfg.horizon, "horizon");
  std::vector<Rational> hs;
  for (const auto& s : cfg.hs) hs.push_back(parse_value<Rational>(s, "h"));
  auto rep = convergence_report(u0, hs, T);
  json j = to_json(rep);
  art.put("convergence.json", j.dump(2) + "\n");
  return {{"l1_strictly_decreasing", rep.l1_strictly_decreasing}};
}

template <Scalar S>
json cmd_trace(const RunConfig& cfg, Artifacts& art) {
  Polygonal<S> u0 = load_datum<S>(cfg);
  std::vector<S> ts = parse_times<S>(cfg.times);
  if (ts.size() < 2) throw parse_error("trace needs at least two --times");
  S horizon = *std::max_element(ts.begin(), ts.end());
  json info;
  auto field = make_field(u0, solve_for(cfg, u0, horizon, info));
  auto tr = energy_trace(field, std::span<const S>(ts), cfg.quadrature_n);
  for (Format f : cfg.formats) {
    if (f == Format::csv) art.put("energy.csv", energy_csv(tr, cfg.decimal));
    else if (f == Format::json) {
      json rows = json::array();
      for (std::size_t k = 0; k < tr.times.size(); ++k)
        rows.push_back({{"tau", format_scalar(tr.times[k])}, {"energy", format_scalar(tr.energies[k])},
                        {"cumulative_dissipation", format_scalar(tr.cumulative(k))}});
      art.put("energy.json", json{{"trace", rows}}.dump(2) + "\n");
    } else {
      PlotSeries e{"energy", {}}, d{"energy + dissipation", {}};
      for (std::size_t k = 0; k < tr.times.size(); ++k) {
        e.points.push_back({to_double(tr.times[k]), to_double(tr.energies[k]), false});
        d.points.push_back({to_double(tr.times[k]), to_double(S(tr.energies[k] + tr.cumulative(k))), false});
      }
      art.put("energy.svg", render_svg({e, d}, PlotOptions{"energy ledger", "tau", "value", std::nullopt, std::nullopt}));
    }
  }
  info["samples"] = ts.size();
  return info;
}

inline json cmd_check(const RunConfig& cfg, int& code) {
  auto rep = run_checks(cfg.suite);
  json rows = json::array();
  for (const auto& r : rep.results) {
    json row = {{"suite", r.suite}, {"name", r.name}, {"passed", r.passed}};
    if (!r.passed) row["detail"] = r.detail;
    rows.push_back(row);
  }
  code = rep.ok() ? exit_ok : exit_numeric;
  return {{"suite", cfg.suite}, {"results", rows}, {"passed", rep.ok()}};
}

template <Scalar S>
json dispatch_scalar(const RunConfig& cfg, Artifacts& art) {
  switch (cfg.command) {
    case Command::solve: return cmd_solve<S>(cfg, art);
    case Command::evolve: return cmd_evolve<S>(cfg, art);
    case Command::trace: return cmd_trace<S>(cfg, art);
    default: return cmd_discrete_grid<S>(cfg, art);
  }
}

inline json error_json(const char* kind, const std::string& message, int code) {
  return {{"status", "error"}, {"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}};
}

}  // namespace detail

/// Runs one command; never throws. The report is the machine-readable summary (or error).
inline RunResult run(const RunConfig& cfg) {
  using namespace detail;
  int code = exit_ok;
  try {
    if (cfg.formats.empty()) throw parse_error("no output format");
    if (cfg.stride == 0) throw parse_error("--stride must be positive");
    if (cfg.decimal && (*cfg.decimal < 0 || *cfg.decimal > 17)) throw parse_error("--decimal must lie in [0, 17]");
    json body;
    if (cfg.command == Command::check) {
      body = cmd_check(cfg, code);
      return {code, json{{"command", "check"}, {"status", code == exit_ok ? "ok" : "failed"}, {"result", body}}};
    }
    Artifacts art(cfg.out);
    if (cfg.command == Command::riemann) {
      body = cmd_riemann(cfg, art);
    } else if (cfg.command == Command::discrete && !cfg.hs.empty()) {
      body = cmd_discrete_convergence(cfg, art);
    } else if (cfg.backend == Backend::rational) {
      body = dispatch_scalar<Rational>(cfg, art);
    } else {
      body = dispatch_scalar<double>(cfg, art);
    }
    return {code, json{{"command", command_name(cfg.command)}, {"status", "ok"},
                       {"backend", cfg.backend == Backend::rational ? "rational" : "float"}, {"result", body},
                       {"artifacts", art.list()}}};
  } catch (const vanishing_data_error& e) {
    return {exit_config, error_json("vanishing_data", e.what(), exit_config)};
  } catch (const parse_error& e) {
    return {exit_config, error_json("config", e.what(), exit_config)};
  } catch (const domain_error& e) {
    return {exit_config, error_json("domain", e.what(), exit_config)};
  } catch (const overflow_error& e) {
    return {exit_numeric, error_json("overflow", e.what(), exit_numeric)};
  } catch (const divergence_error& e) {
    return {exit_numeric, error_json("divergence", e.what(), exit_numeric)};
  } catch (const consistency_error& e) {
    return {exit_numeric, error_json("consistency", e.what(), exit_numeric)};
  } catch (const std::runtime_error& e) {
    return {exit_config, error_json("io", e.what(), exit_config)};
  } catch (const std::exception& e) {
    return {exit_numeric, error_json("internal", e.what(), exit_numeric)};
  }
}

}  // namespace mancala_flow::cli

#endif  // MANCALA_FLOW_CLI_HPP
