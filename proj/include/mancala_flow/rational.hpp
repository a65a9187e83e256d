#ifndef MANCALA_FLOW_RATIONAL_HPP
#define MANCALA_FLOW_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace mancala_flow {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

inline Rational make_rational(long long p, long long q = 1) {
  if (q == 0) throw domain_error("zero denominator");
  return Rational(p) / Rational(q);
}

inline Integer numerator_of(const Rational& r) { return Integer(boost::multiprecision::numerator(r)); }
inline Integer denominator_of(const Rational& r) { return Integer(boost::multiprecision::denominator(r)); }

inline Integer floor_of(const Rational& r) {
  Integer n = numerator_of(r), d = denominator_of(r);
  Integer q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

inline Integer ceil_of(const Rational& r) {
  Integer f = floor_of(r);
  return Rational(f) == r ? f : Integer(f + 1);
}

/// "p/q" with q > 0 and gcd 1; integers keep the "/1".
inline std::string to_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

namespace detail {
inline Integer parse_integer(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) throw parse_error("malformed rational '" + std::string(whole) + "'");
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') throw parse_error("malformed rational '" + std::string(whole) + "'");
  return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
}
}  // namespace detail

/// Accepts "p" or "p/q" (optional sign on p); rejects decimals and exponents.
inline Rational parse_rational(std::string_view text) {
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t");
  if (first == std::string_view::npos) throw parse_error("empty rational");
  std::string_view s = text.substr(first, last - first + 1);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(s, text));
  Integer p = detail::parse_integer(s.substr(0, slash), text);
  std::string_view qs = s.substr(slash + 1);
  if (!qs.empty() && (qs[0] == '-' || qs[0] == '+')) throw parse_error("signed denominator in '" + std::string(text) + "'");
  Integer q = detail::parse_integer(qs, text);
  if (q == 0) throw parse_error("zero denominator in '" + std::string(text) + "'");
  return Rational(p) / Rational(q);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline std::optional<Integer> exact_isqrt(const Integer& n) {
  if (n < 0) return std::nullopt;
  Integer s = boost::multiprecision::sqrt(n);
  if (s * s != n) return std::nullopt;
  return s;
}

/// Square root when it is rational.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
  auto p = exact_isqrt(numerator_of(r));
  if (!p) return std::nullopt;
  auto q = exact_isqrt(denominator_of(r));
  if (!q) return std::nullopt;
  return Rational(*p) / Rational(*q);
}

// Arithmetic backends. Exact comparisons for Rational, relative tolerance for double.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static Rational from_rational(const Rational& r) { return r; }
  static Rational from_int(long long v) { return Rational(v); }
  static bool near(const Rational& a, const Rational& b) { return a == b; }
  static bool near_zero(const Rational& a) { return a == 0; }
  static Rational abs(const Rational& a) { return a < 0 ? Rational(-a) : a; }
  static Rational tolerance() { return Rational(0); }
  static std::optional<Rational> sqrt(const Rational& a) { return exact_sqrt(a); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static constexpr double eps = 1e-12;
  static double from_rational(const Rational& r) { return r.convert_to<double>(); }
  static double from_int(long long v) { return static_cast<double>(v); }
  static bool near(double a, double b) {
    return std::abs(a - b) <= eps * std::max({1.0, std::abs(a), std::abs(b)});
  }
  static bool near_zero(double a) { return std::abs(a) <= eps; }
  static double abs(double a) { return std::abs(a); }
  static double tolerance() { return eps; }
  static std::optional<double> sqrt(double a) {
    if (a < 0) return std::nullopt;
    return std::sqrt(a);
  }
};

template <class S>
concept Scalar = requires { scalar_traits<S>::exact; };

template <Scalar S>
S from_rational(const Rational& r) { return scalar_traits<S>::from_rational(r); }

template <Scalar S>
S scalar(long long p, long long q = 1) { return from_rational<S>(make_rational(p, q)); }

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_RATIONAL_HPP
