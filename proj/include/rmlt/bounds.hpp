#pragma once

// Arity bounds with fractional exponents, checked exactly by raising both
// sides to the common denominator. With a = 2^{p-1} + p - 1 and D = q(p-1):
//   per-degree:   k <= q^2   a^{t/D} q^{t/q}        (t = degree to reject)
//   full:         k <= 3q^4  a^{(d+1)/D} q^{(d+1)/q}
//   simple:       k <= 3q^4  (3q)^{(d+1)/q}

#include <cmath>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace rmlt {

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_pow(std::uint64_t base, std::uint64_t e) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
}

inline std::uint64_t core_base(unsigned p) { return (std::uint64_t{1} << (p - 1)) + p - 1; }

// k^D <= lead^D * a^t * q^{t(p-1)}
inline bool fractional_bound_holds(std::uint64_t k, std::uint64_t lead, std::uint64_t t, unsigned q, unsigned p) {
  const std::uint64_t D = std::uint64_t{q} * (p - 1);
  const BigInt lhs = big_pow(k, D);
  const BigInt rhs = big_pow(lead, D) * big_pow(core_base(p), t) * big_pow(q, t * (p - 1));
  return lhs <= rhs;
}

}  // namespace detail

inline double degree_constraint_bound(std::uint64_t t, unsigned q, unsigned p) {
  const double D = double(q) * (p - 1);
  return double(q) * q * std::pow(double(detail::core_base(p)), t / D) * std::pow(double(q), double(t) / q);
}

inline bool degree_constraint_bound_holds(std::uint64_t k, std::uint64_t t, unsigned q, unsigned p) {
  return detail::fractional_bound_holds(k, std::uint64_t{q} * q, t, q, p);
}

inline double rm_constraint_bound(std::uint64_t d, unsigned q, unsigned p) {
  return 3.0 * std::pow(double(q), 4) / (double(q) * q) * degree_constraint_bound(d + 1, q, p);
}

inline bool rm_constraint_bound_holds(std::uint64_t k, std::uint64_t d, unsigned q, unsigned p) {
  return detail::fractional_bound_holds(k, 3 * std::uint64_t{q} * q * q * q, d + 1, q, p);
}

inline double simple_bound(std::uint64_t d, unsigned q) {
  return 3.0 * std::pow(double(q), 4) * std::pow(3.0 * q, double(d + 1) / q);
}

/// k^q <= (3q^4)^q (3q)^{d+1}
inline bool simple_bound_holds(std::uint64_t k, std::uint64_t d, unsigned q) {
  using detail::big_pow;
  return big_pow(k, q) <= big_pow(3 * std::uint64_t{q} * q * q * q, q) * big_pow(3 * std::uint64_t{q}, d + 1);
}

}  // namespace rmlt
