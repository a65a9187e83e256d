#ifndef MANCALA_FLOW_LYAPUNOV_HPP
#define MANCALA_FLOW_LYAPUNOV_HPP

#include <cmath>
#include <span>
#include <vector>

#include "polygonal.hpp"
#include "transport.hpp"

namespace mancala_flow {

namespace detail {

// Simpson on each piece; exact for the quadratic integrand u^2 + 2 (x - shift) u.
template <Scalar S>
S potential_integral(const Polygonal<S>& u, const S& shift) {
  if (u.tail_kind() != TailKind::zero) throw divergence_error("energy of a slice without compact support");
  S total(0);
  const auto& ps = u.pieces();
  auto f = [&](const Piece<S>& p, const S& x) {
    S y = p.at(x);
    return y * y + S(2) * (x - shift) * y;
  };
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    const S& a = ps[i].start;
    const S& b = ps[i + 1].start;
    total += (b - a) / S(6) * (f(ps[i], a) + S(4) * f(ps[i], (a + b) / S(2)) + f(ps[i], b));
  }
  return total / S(2);
}

}  // namespace detail

/// (1/2) int (u^2 + 2 x u) dx for a slice in the (t, x) frame.
template <Scalar S>
S energy(const Polygonal<S>& slice_tx) {
  if (slice_tx.origin() != S(0)) throw domain_error("energy expects a slice defined from x = 0");
  return detail::potential_integral(slice_tx, S(0));
}

/// Same functional read off v(tau, .) directly.
template <Scalar S>
S energy_tauxi(const SolutionField<S>& f, const S& tau) {
  return detail::potential_integral(v_slice(f, tau), tau);
}

/// int_{tau + ell(tau)}^inf v(tau, xi) dxi, via the conserved mass.
template <Scalar S>
S mass_beyond_boundary(const SolutionField<S>& f, const S& tau) {
  if (f.u0.tail_kind() != TailKind::zero) throw divergence_error("datum is not integrable");
  Polygonal<S> v = v_slice(f, tau);
  S total = mass(f.u0, S(0));
  return total - mass(v, tau, std::optional<S>(tau + f.fb.ell(tau)));
}

enum class Quadrature { exact_pieces, midpoint };

namespace detail {

/// Abscissae in (sigma, tau) where the tail-mass integrand may lose smoothness.
template <Scalar S>
std::vector<S> dissipation_breaks(const SolutionField<S>& f, const S& sigma, const S& tau) {
  const auto& big_l = f.fb.big_l;
  std::vector<S> levels;
  const auto& ls = big_l.pieces();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (tau < ls[i].start) break;
    levels.push_back(ls[i].value);
    if (i > 0) levels.push_back(big_l.left_limit(ls[i].start));
  }
  for (const auto& p : f.u0.pieces()) levels.push_back(p.start);
  std::vector<S> xs{sigma, tau};
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const S& a = ls[i].start;
    if (tau < a) break;
    auto e = big_l.piece_end(i);
    S lo = std::max(a, sigma);
    S hi = e ? std::min(*e, tau) : tau;
    if (sigma < a && a < tau) xs.push_back(a);
    if (!(lo < hi) || ls[i].slope == S(0)) continue;
    for (const S& c : levels) {
      S r = a + (c - ls[i].value) / ls[i].slope;
      if (lo < r && r < hi) xs.push_back(r);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](const S& x, const S& y) { return scalar_traits<S>::near(x, y); }),
           xs.end());
  return xs;
}

}  // namespace detail

/// int_sigma^tau int_{r + ell(r)}^inf v(r, xi) dxi dr.
/// exact_pieces: open three-node rule per smooth stretch (exact for the piecewise quadratic integrand).
/// midpoint: composite midpoint with n nodes per stretch.
template <Scalar S>
S dissipation(const SolutionField<S>& f, const S& sigma, const S& tau, int quadrature_n = 1024,
              Quadrature rule = Quadrature::exact_pieces) {
  if (sigma < S(0) || !(sigma < tau) || f.horizon() < tau) throw domain_error("need 0 <= sigma < tau <= horizon");
  if (quadrature_n < 1) throw domain_error("quadrature_n must be positive");
  auto xs = detail::dissipation_breaks(f, sigma, tau);
  S total(0);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const S a = xs[k], b = xs[k + 1];
    if (rule == Quadrature::exact_pieces) {
      S h = (b - a) / S(4);
      S q1 = mass_beyond_boundary(f, S(a + h));
      S q2 = mass_beyond_boundary(f, S(a + S(2) * h));
      S q3 = mass_beyond_boundary(f, S(a + S(3) * h));
      total += (b - a) / S(3) * (S(2) * q1 - q2 + S(2) * q3);
    } else {
      S w = (b - a) / S(quadrature_n);
      for (int j = 0; j < quadrature_n; ++j)
        total += w * mass_beyond_boundary(f, S(a + w * (S(j) + S(1) / S(2))));
    }
  }
  return total;
}

/// |E(tau) + dissipation - E(sigma)|.
template <Scalar S>
S dissipation_residual(const SolutionField<S>& f, const S& sigma, const S& tau, int quadrature_n = 1024,
                       Quadrature rule = Quadrature::exact_pieces) {
  S lhs = energy_tauxi(f, tau) + dissipation(f, sigma, tau, quadrature_n, rule);
  return scalar_traits<S>::abs(S(lhs - energy_tauxi(f, sigma)));
}

template <Scalar S>
struct EnergyTrace {
  std::vector<S> times;
  std::vector<S> energies;
  std::vector<S> dissipation;  // per interval [times[k], times[k+1]]

  S cumulative(std::size_t k) const {
    S c(0);
    for (std::size_t j = 0; j < k; ++j) c += dissipation[j];
    return c;
  }
};

template <Scalar S>
EnergyTrace<S> energy_trace(const SolutionField<S>& f, std::span<const S> times, int quadrature_n = 1024) {
  EnergyTrace<S> tr;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0 && !(times[k - 1] < times[k])) throw domain_error("trace times must increase");
    tr.times.push_back(times[k]);
    tr.energies.push_back(energy_tauxi(f, times[k]));
    if (k > 0) tr.dissipation.push_back(dissipation(f, times[k - 1], times[k], quadrature_n));
  }
  return tr;
}

/// max{sqrt(2m) - x, 0}; the exact backend needs 2m to be a rational square.
template <Scalar S>
Polygonal<S> stationary_profile(const S& m) {
  if (m < S(0)) throw domain_error("stationary_profile needs m >= 0");
  if (m == S(0)) return Polygonal<S>::constant(S(0));
  auto c = scalar_traits<S>::sqrt(S(2) * m);
  if (!c) throw domain_error("sqrt(2m) is irrational; use the float backend");
  return Polygonal<S>::from_vertices({{S(0), *c}, {*c, S(0)}});
}

/// Log-log slope of E(t0) - E(t0 + h) between the two smallest h values (diagnostic only).
template <Scalar S>
double local_decay_exponent(const SolutionField<S>& f, const S& t0, std::span<const S> hs) {
  if (hs.size() < 2) throw domain_error("need two step sizes");
  S e0 = energy_tauxi(f, t0);
  double d1 = to_double(S(e0 - energy_tauxi(f, S(t0 + hs[hs.size() - 2]))));
  double d2 = to_double(S(e0 - energy_tauxi(f, S(t0 + hs.back()))));
  return std::log(d1 / d2) / std::log(to_double(hs[hs.size() - 2]) / to_double(hs.back()));
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_LYAPUNOV_HPP
