#pragma once

// The p-variate polynomial P = (iterated directional derivative of x_p^{q-1}
// in directions x_1..x_{p-1}) / (x_1 ... x_{p-1}) and the constraint it
// induces: it accepts every p-variate monomial of total degree below
// p(q - q/p) and rejects (q-q/p, ..., q-q/p).

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmlt/constraint.hpp"
#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"
#include "rmlt/poly.hpp"

namespace rmlt {

/// Sign attached to the subset I in the closed-form numerator.
///  IteratedDifference: (-1)^{(p-1)-|I|}, equal to applying f_y(x) = f(x+y) - f(x)
///                      p-1 times.
///  Literal:            (-1)^{|I|+1}; agrees with IteratedDifference for p = 2 and
///                      is its negation for odd p.
enum class NumeratorSign { IteratedDifference, Literal };

/// Subset-sum form: sum over I in [p-1] of +-(x_p + sum_{i in I} x_i)^{q-1}.
inline MultiPoly derivative_numerator(const Field& f, NumeratorSign sign = NumeratorSign::IteratedDifference) {
  const unsigned p = f.p(), q = f.q();
  const std::size_t nvars = p;
  // (y_1 + ... + y_m)^{q-1} depends only on m = |I| + 1; expand once per size.
  std::map<std::size_t, MultiPoly> by_size;
  MultiPoly acc(f, nvars);
  const std::uint64_t subsets = std::uint64_t{1} << (p - 1);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i + 1 < p; ++i)
      if (mask >> i & 1) vars.push_back(i);
    const std::size_t card = vars.size();
    vars.push_back(p - 1);
    auto it = by_size.find(vars.size());
    if (it == by_size.end()) {
      std::vector<Element> ones(vars.size(), 1);
      it = by_size.emplace(vars.size(), expand_power(f, ones, q - 1)).first;
    }
    const bool negative = sign == NumeratorSign::IteratedDifference ? ((p - 1 - card) % 2 == 1) : (card % 2 == 0);
    std::vector<MultiPoly::Term> embedded;
    embedded.reserve(it->second.size());
    for (const auto& t : it->second.terms()) {
      DegreeVector e(nvars, 0);
      for (std::size_t j = 0; j < vars.size(); ++j) e[vars[j]] = t.exponents[j];
      embedded.push_back({std::move(e), negative ? f.neg(t.coeff) : t.coeff});
    }
    acc = acc + MultiPoly::from_terms(f, nvars, std::move(embedded));
  }
  return acc;
}

/// Recursive form: start from x_p^{q-1} and take the difference in direction
/// x_1, then x_2, ..., x_{p-1}.
inline MultiPoly iterated_derivative_numerator(const Field& f) {
  const unsigned p = f.p(), q = f.q();
  DegreeVector e(p, 0);
  e[p - 1] = q - 1;
  MultiPoly g = MultiPoly::monomial(f, e);
  for (std::size_t i = 0; i + 1 < p; ++i) g = substitute_shift(g, p - 1, i) - g;
  return g;
}

/// Upper bound (2^{p-1} + p - 1) q^{p-1} on the number of nonzeros of P.
inline std::int64_t core_upper_bound(unsigned q, unsigned p) {
  std::int64_t qp1 = 1;
  for (unsigned i = 0; i + 1 < p; ++i) qp1 *= q;
  return ((std::int64_t{1} << (p - 1)) + p - 1) * qp1;
}

/// Lower bound (2^{p-1} - p - 1) q^{p-1} - 2^{p-1}(2^{p-1} - 1) q^{p-2}; may be negative.
inline std::int64_t core_lower_bound(unsigned q, unsigned p) {
  std::int64_t qp2 = 1;
  for (unsigned i = 0; i + 2 < p; ++i) qp2 *= q;
  const std::int64_t two = std::int64_t{1} << (p - 1);
  // for p = 2 the q^{p-2} factor is 1
  return (two - p - 1) * qp2 * q - two * (two - 1) * qp2;
}

struct CoreOptions {
  std::uint64_t budget = 100'000'000;  // max points of F_q^p to enumerate
  unsigned workers = 1;
  bool assert_bounds = true;  // throw std::logic_error if the count leaves its bounds
};

struct CorePolynomial {
  Field field;
  MultiPoly poly;
  FunctionTable table;  // P over F_q^p
  std::uint64_t nonzero_count = 0;
};

inline CorePolynomial core_polynomial(const Field& f, const CoreOptions& opts = {}) {
  const unsigned p = f.p();
  checked_power(f.q(), p, opts.budget, "core evaluation F_q^p");
  const MultiPoly numerator = derivative_numerator(f);
  std::vector<std::size_t> divisor;
  for (std::size_t i = 0; i + 1 < p; ++i) divisor.push_back(i);
  MultiPoly poly = divide_exact(numerator, divisor);
  FunctionTable table = FunctionTable::from_poly(poly, opts.workers);
  std::uint64_t count = 0;
  for (Element v : table.values()) count += (v != 0);
  const auto signed_count = static_cast<std::int64_t>(count);
  if (opts.assert_bounds && (signed_count > core_upper_bound(f.q(), p) || signed_count < core_lower_bound(f.q(), p)))
    throw std::logic_error("core polynomial nonzero count " + std::to_string(count) + " violates its bounds");
  return CorePolynomial{f, std::move(poly), std::move(table), count};
}

inline Constraint core_constraint(const Field& f, const CoreOptions& opts = {}) {
  return from_table(core_polynomial(f, opts).table);
}

struct CoreReport {
  unsigned q = 0, p = 0, s = 0;
  std::uint64_t k = 0;
  std::int64_t upper_bound = 0, lower_bound = 0;
  bool upper_ok = false, lower_ok = false;
  bool homogeneous = false;               // every term of P has degree q - p
  std::uint64_t accept_checks = 0;        // monomials with total degree < p(q - q/p)
  std::uint64_t accept_failures = 0;
  std::optional<DegreeVector> witness;    // first monomial that should be accepted but is not
  DegreeVector canonical;
  bool reject_check = false;              // canonical monomial rejected
  bool pass = false;
};

/// Exhaustive check of the core constraint: nonzero-count bounds, acceptance
/// of every low-degree monomial, rejection of (q-q/p, ..., q-q/p).
inline CoreReport verify_core(const Field& f, const CoreOptions& opts = {}) {
  const unsigned p = f.p(), q = f.q();
  CoreReport rep;
  rep.q = q;
  rep.p = p;
  rep.s = f.s();
  CoreOptions inner = opts;
  inner.assert_bounds = false;
  const CorePolynomial core = core_polynomial(f, inner);
  rep.k = core.nonzero_count;
  rep.upper_bound = core_upper_bound(q, p);
  rep.lower_bound = core_lower_bound(q, p);
  rep.upper_ok = static_cast<std::int64_t>(rep.k) <= rep.upper_bound;
  rep.lower_ok = static_cast<std::int64_t>(rep.k) >= rep.lower_bound;
  rep.homogeneous = true;
  for (const auto& t : core.poly.terms()) rep.homogeneous &= total_degree(t.exponents) == q - p;

  // The table is the constraint's dual vector, so its moments are the row sums.
  const std::vector<Element> moments = moment_transform(core.table);
  const std::uint64_t threshold = std::uint64_t{p} * (q - q / p);
  DegreeVector e(p, 0);
  for (std::size_t idx = 0; idx < moments.size(); ++idx) {
    std::size_t x = idx;
    std::uint64_t total = 0;
    for (auto& c : e) {
      c = static_cast<unsigned>(x % q);
      x /= q;
      total += c;
    }
    if (total >= threshold) continue;
    ++rep.accept_checks;
    if (moments[idx] != 0) {
      ++rep.accept_failures;
      if (!rep.witness) rep.witness = e;
    }
  }
  rep.canonical = DegreeVector(p, q - q / p);
  std::size_t canon_idx = 0;
  for (std::size_t i = p; i-- > 0;) canon_idx = canon_idx * q + rep.canonical[i];
  rep.reject_check = moments[canon_idx] != 0;
  rep.pass = rep.upper_ok && rep.lower_ok && rep.homogeneous && rep.accept_failures == 0 && rep.reject_check;
  return rep;
}

}  // namespace rmlt
