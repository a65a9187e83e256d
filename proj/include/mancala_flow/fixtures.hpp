#ifndef MANCALA_FLOW_FIXTURES_HPP
#define MANCALA_FLOW_FIXTURES_HPP

#include <string>
#include <utility>
#include <vector>

#include "lyapunov.hpp"
#include "polygonal.hpp"

namespace mancala_flow::fixtures {

using R = Rational;
using P = Polygonal<Rational>;

/// 1_[0, a)
inline P box(const R& a = R(1)) { return P({{R(0), R(0), R(1)}, {a, R(0), R(0)}}); }

inline P riemann() { return box(R(1)); }

/// (2 - x)^+, mass 2
inline P stationary_m2() { return stationary_profile(R(2)); }

/// (2 - 2x)^+
inline P steep_ramp() { return P::from_vertices({{R(0), R(2)}, {R(1), R(0)}}); }

/// 1_[0,1) + 2 1_[1,inf)
inline P increasing_jump() { return P({{R(0), R(0), R(1)}, {R(1), R(0), R(2)}}); }

/// 1_[0,inf)
inline P constant_one() { return P::constant(R(1)); }

/// Piecewise affine through (0,0), (1,1/2), (2,0).
inline P hat() { return P::from_vertices({{R(0), R(0)}, {R(1), make_rational(1, 2)}, {R(2), R(0)}}); }

struct Named {
  std::string name;
  P datum;
  R horizon;
};

/// Data used by the property suites.
inline std::vector<Named> standard() {
  return {{"riemann", riemann(), R(13)},
          {"riemann_a3", box(R(3)), R(13)},
          {"stationary_m2", stationary_m2(), R(13)},
          {"increasing_jump", increasing_jump(), R(8)},
          {"hat", hat(), R(13)}};
}

/// k (k + 1) / 2
inline R triangular(int k) { return R(k) * R(k + 1) / 2; }

}  // namespace mancala_flow::fixtures

#endif  // MANCALA_FLOW_FIXTURES_HPP
