#ifndef MANCALA_FLOW_TRANSPORT_HPP
#define MANCALA_FLOW_TRANSPORT_HPP

#include <span>
#include <utility>

#include "freeboundary.hpp"
#include "polygonal.hpp"

namespace mancala_flow {

enum class Frame { tau_xi, t_x };

inline const char* to_string(Frame f) { return f == Frame::tau_xi ? "tau_xi" : "t_x"; }

/// v(tau, xi) on the closed octant 0 <= tau <= xi, tau <= horizon.
template <Scalar S>
struct SolutionField {
  Polygonal<S> u0;
  FreeBoundarySolution<S> fb;
  Frame frame = Frame::tau_xi;

  const S& horizon() const { return fb.horizon; }
};

template <Scalar S>
SolutionField<S> make_field(const Polygonal<S>& u0, const S& horizon) {
  return {u0, solve_ell(u0, horizon), Frame::tau_xi};
}

template <Scalar S>
SolutionField<S> make_field(const Polygonal<S>& u0, FreeBoundarySolution<S> fb) {
  return {u0, std::move(fb), Frame::tau_xi};
}

namespace detail {
template <Scalar S>
void require_octant(const SolutionField<S>& f, const S& tau, const S& xi) {
  if (tau < S(0) || xi < tau) throw domain_error("point outside the closed octant 0 <= tau <= xi");
  if (f.horizon() < tau) throw domain_error("tau beyond the solved horizon");
}
}  // namespace detail

/// u0(xi) + |{s in [0, tau] : L(s) > xi}|.
template <Scalar S>
S v_point(const SolutionField<S>& f, const S& tau, const S& xi) {
  detail::require_octant(f, tau, xi);
  return f.u0(xi) + tau - sublevel_measure(f.fb.big_l, xi, S(0), tau);
}

/// ell(xi) - |{s in [tau, xi] : L(s) > xi}|, needs xi <= horizon.
template <Scalar S>
S v_point_from_trace(const SolutionField<S>& f, const S& tau, const S& xi) {
  detail::require_octant(f, tau, xi);
  if (f.horizon() < xi) throw domain_error("xi beyond the solved horizon");
  S above = (xi - tau) - sublevel_measure(f.fb.big_l, xi, tau, xi);
  return f.fb.ell(xi) - above;
}

/// xi -> v(tau, xi) on [tau, inf).
template <Scalar S>
Polygonal<S> v_slice(const SolutionField<S>& f, const S& tau) {
  detail::require_octant(f, tau, tau);
  Polygonal<S> d = sublevel_distribution(f.fb.big_l, S(0), tau, tau);
  return add_constant(clip(f.u0, tau), tau) - d;
}

/// x -> u(t, x) = v(t, t + x) on [0, inf).
template <Scalar S>
Polygonal<S> u_slice(const SolutionField<S>& f, const S& t) {
  return translate(v_slice(f, t), t);
}

template <Scalar S>
S mass_at(const SolutionField<S>& f, const S& tau) {
  if (f.u0.tail_kind() != TailKind::zero) throw divergence_error("datum is not integrable");
  return mass(v_slice(f, tau), tau);
}

template <Scalar S>
struct IntegralResidual {
  S against_equation;  // slice vs u0(xi) + |{s : ell(s) + s > xi}|
  S between_routes;    // superlevel route vs trace route
};

template <Scalar S>
IntegralResidual<S> integral_residual(const SolutionField<S>& f, std::span<const std::pair<S, S>> grid) {
  IntegralResidual<S> r{S(0), S(0)};
  const Polygonal<S> l_direct = f.fb.ell + Polygonal<S>::identity();
  for (const auto& [tau, xi] : grid) {
    detail::require_octant(f, tau, xi);
    S sliced = v_slice(f, tau)(xi);
    S above = tau - sublevel_measure(l_direct, xi, S(0), tau);
    r.against_equation = std::max(r.against_equation, scalar_traits<S>::abs(S(sliced - f.u0(xi) - above)));
    if (!(f.horizon() < xi))
      r.between_routes = std::max(r.between_routes,
                                  scalar_traits<S>::abs(S(v_point(f, tau, xi) - v_point_from_trace(f, tau, xi))));
  }
  return r;
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_TRANSPORT_HPP
