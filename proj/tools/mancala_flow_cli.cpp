#include <iostream>

#include "CLI11.hpp"
#include "mancala_flow/cli.hpp"

namespace mf = mancala_flow;
namespace cli = mancala_flow::cli;

namespace {

void add_common(CLI::App* sub, cli::RunConfig& cfg, std::string& backend, std::string& formats) {
  sub->add_option("--backend", backend, "rational or float")->default_val("rational");
  sub->add_option("--out", cfg.out, "output directory")->default_val(".");
  sub->add_option("--format", formats, "comma list of csv, json, svg")->default_val("json");
  sub->add_option("--decimal", cfg.decimal, "render K digits in CSV output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-boundary transport solver for the continuum open mancala"};
  app.require_subcommand(1);
  cli::RunConfig cfg;
  std::string backend = "rational", formats = "json", times, hs;

  auto* solve = app.add_subcommand("solve", "solve for the free boundary ell");
  solve->add_option("--datum", cfg.datum, "datum JSON")->required();
  solve->add_option("--horizon", cfg.horizon, "horizon p/q")->required();
  solve->add_flag("--allow-vanishing", cfg.allow_vanishing, "accept u0(0) = 0");
  add_common(solve, cfg, backend, formats);

  auto* evolve = app.add_subcommand("evolve", "time slices u(t, .)");
  evolve->add_option("--datum", cfg.datum, "datum JSON")->required();
  evolve->add_option("--times", times, "comma list of times");
  evolve->add_option("--horizon", cfg.horizon, "solve horizon (default: last time)");
  evolve->add_flag("--movie", cfg.movie, "24 frames at t = 0, 2/5, ..., 46/5");
  evolve->add_flag("--allow-vanishing", cfg.allow_vanishing, "accept u0(0) = 0");
  add_common(evolve, cfg, backend, formats);

  auto* riemann = app.add_subcommand("riemann", "closed-form recursion for 1_[0,1)");
  riemann->add_option("--n", cfg.n, "number of steps")->default_val(12);
  riemann->add_option("--table", cfg.table, "CSV table path");
  add_common(riemann, cfg, backend, formats);

  auto* discrete = app.add_subcommand("discrete", "rescaled mancala game");
  discrete->set_help_flag("--help", "print this help message and exit");
  discrete->add_option("--datum", cfg.datum, "datum JSON")->required();
  discrete->add_option("--h", cfg.h, "cell size p/q");
  discrete->add_option("--steps", cfg.steps, "number of moves");
  discrete->add_option("--width", cfg.width, "number of cells (default: enough for the run)");
  discrete->add_option("--stride", cfg.stride, "output stride")->default_val(1);
  discrete->add_option("--hs", hs, "comma list of h for a convergence report");
  discrete->add_option("--horizon", cfg.horizon, "final time of the convergence report");
  add_common(discrete, cfg, backend, formats);

  auto* check = app.add_subcommand("check", "run the invariant suite");
  check->add_option("--suite", cfg.suite, "all, polygonal, freeboundary, transport, riemann, lyapunov, discrete")
      ->default_val("all");

  auto* trace = app.add_subcommand("trace", "energy and dissipation ledger");
  trace->add_option("--datum", cfg.datum, "datum JSON")->required();
  trace->add_option("--times", times, "comma list of increasing times")->required();
  trace->add_option("--quadrature-n", cfg.quadrature_n, "nodes of the fallback rule")->default_val(1024);
  trace->add_flag("--allow-vanishing", cfg.allow_vanishing, "accept u0(0) = 0");
  add_common(trace, cfg, backend, formats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << cli::detail::error_json("config", e.what(), cli::exit_config).dump(2) << "\n";
    return cli::exit_config;
  }

  try {
    cfg.command = cli::parse_command(app.get_subcommands().front()->get_name());
    cfg.backend = cli::parse_backend(backend);
    cfg.formats.clear();
    for (const auto& f : cli::detail::split_list(formats)) cfg.formats.push_back(cli::parse_format(f));
    cfg.times = cli::detail::split_list(times);
    cfg.hs = cli::detail::split_list(hs);
  } catch (const std::exception& e) {
    std::cerr << cli::detail::error_json("config", e.what(), cli::exit_config).dump(2) << "\n";
    return cli::exit_config;
  }

  cli::RunResult r = cli::run(cfg);
  (r.exit_code == cli::exit_ok ? std::cout : std::cerr) << r.report.dump(2) << "\n";
  return r.exit_code;
}
