// Walks through the unit box datum: free boundary, a few slices, the energy ledger,
// and the discrete game at h = 1/20.

#include <cstdio>
#include <vector>

#include "mancala_flow/mancala_flow.hpp"

using namespace mancala_flow;
using R = Rational;

int main() {
  const Polygonal<R> u0 = fixtures::riemann();
  auto field = make_field(u0, R(13));

  std::printf("free boundary on [0, 13]: %zu pieces\n", field.fb.ell.size());
  for (const auto& p : field.fb.ell.pieces()) {
    if (R(13) < p.start) break;
    std::printf("  from t = %-6s value %-6s slope %s\n", to_string(p.start).c_str(), to_string(p.value).c_str(),
                to_string(p.slope).c_str());
  }

  std::printf("\nslices u(t, .)\n");
  for (R t : {R(0), make_rational(1, 2), R(1), make_rational(5, 3), R(12)}) {
    auto u = u_slice(field, t);
    std::printf("  t = %-4s u(t, 0) = %-6s mass %s energy %s\n", to_string(t).c_str(), to_string(u(R(0))).c_str(),
                to_string(mass(u, R(0))).c_str(), to_string(energy(u)).c_str());
  }

  std::vector<R> times{R(0), R(1), make_rational(5, 3), R(11), R(12)};
  std::printf("\n%s", energy_csv(energy_trace(field, std::span<const R>(times))).c_str());

  auto g = rescaled_run(u0, make_rational(1, 20), 100, 200);
  std::printf("\ndiscrete game, h = 1/20: first cell after 100 moves = %s, row mass %s\n",
              to_string(g.at(100, 1)).c_str(), to_string(g.row_mass(100)).c_str());
  std::printf("free boundary at t = 5: %s\n", to_string(field.fb.ell(R(5))).c_str());
  return 0;
}
