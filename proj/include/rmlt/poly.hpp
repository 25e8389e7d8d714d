#pragma once

// Multivariate polynomials over F_q and the degree-vector combinatorics used
// to describe Reed-Muller codes: p-shadows, border degrees, canonical
// monomials and the degree/border sets.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"
#include "rmlt/parallel.hpp"

namespace rmlt {

/// Exponent vector; every entry lies in [0, q-1].
using DegreeVector = std::vector<unsigned>;

inline std::uint64_t total_degree(std::span<const unsigned> dv) {
  return std::accumulate(dv.begin(), dv.end(), std::uint64_t{0});
}

inline std::vector<unsigned> base_digits(std::uint64_t x, unsigned p) {
  std::vector<unsigned> out;
  while (x > 0) {
    out.push_back(static_cast<unsigned>(x % p));
    x /= p;
  }
  return out;
}

/// b <=_p a: every base-p digit of b is at most the matching digit of a.
inline bool shadow_leq(std::uint64_t b, std::uint64_t a, unsigned p) {
  while (b > 0) {
    if (b % p > a % p) return false;
    b /= p;
    a /= p;
  }
  return true;
}

inline bool shadow_leq(std::span<const unsigned> b, std::span<const unsigned> a, unsigned p) {
  if (b.size() != a.size()) throw Error(ErrorCode::ArityMismatch, "degree vectors differ in length");
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!shadow_leq(b[i], a[i], p)) return false;
  return true;
}

/// True iff the parts add up to n in base p without any carry.
inline bool multinomial_nonzero(std::uint64_t n, std::span<const std::uint64_t> parts, unsigned p) {
  if (std::accumulate(parts.begin(), parts.end(), std::uint64_t{0}) != n)
    throw Error(ErrorCode::BadPartition, "parts do not sum to n");
  std::vector<unsigned> acc;
  for (std::uint64_t part : parts) {
    auto digits = base_digits(part, p);
    if (digits.size() > acc.size()) acc.resize(digits.size(), 0);
    for (std::size_t i = 0; i < digits.size(); ++i) {
      acc[i] += digits[i];
      if (acc[i] >= p) return false;
    }
  }
  return true;
}

/// binom(n, k) mod p as a product of digit binomials.
inline unsigned binomial_mod_p(std::uint64_t n, std::uint64_t k, unsigned p) {
  if (k > n) return 0;
  std::uint64_t result = 1;
  while (k > 0 || n > 0) {
    const unsigned ni = static_cast<unsigned>(n % p), ki = static_cast<unsigned>(k % p);
    if (ki > ni) return 0;
    std::uint64_t num = 1, den = 1;
    for (unsigned j = 0; j < ki; ++j) {
      num = num * (ni - j) % p;
      den = den * (j + 1) % p;
    }
    // den^{p-2} is the inverse of den mod p
    std::uint64_t inv = 1, base = den, e = p - 2;
    while (e > 0) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    result = result * (num * inv % p) % p;
    n /= p;
    k /= p;
  }
  return static_cast<unsigned>(result);
}

/// b_i(d) = p^i + sum_{j >= i} d_j p^j for i = 0..s.
inline std::vector<std::uint64_t> b_values(std::uint64_t d, unsigned p, unsigned s) {
  std::vector<std::uint64_t> out;
  out.reserve(s + 1);
  std::uint64_t pi = 1;
  for (unsigned i = 0; i <= s; ++i) {
    // high part of d from digit i upward
    const std::uint64_t high = (d / pi) * pi;
    out.push_back(pi + high);
    pi *= p;
  }
  return out;
}

/// Canonical monomial of total degree d: (d1, q-q/p, ..., q-q/p) with
/// q/p <= d1 <= q-1. For d < q/p no such split exists and (d) is returned.
inline DegreeVector canonical_monomial(std::uint64_t d, unsigned q, unsigned p) {
  if (d == 0) throw Error(ErrorCode::OutOfRange, "canonical monomial needs degree >= 1");
  const std::uint64_t small = q / p, block = q - q / p;
  if (d < small) return {static_cast<unsigned>(d)};
  for (std::uint64_t blocks = 0; blocks * block <= d; ++blocks) {
    const std::uint64_t first = d - blocks * block;
    if (first >= small && first <= q - 1) {
      DegreeVector out(1 + blocks, static_cast<unsigned>(block));
      out[0] = static_cast<unsigned>(first);
      return out;
    }
  }
  throw Error(ErrorCode::OutOfRange, "no canonical split found");  // unreachable: window is a full residue system
}

namespace detail {

template <typename Visit>
void for_each_bounded(std::size_t n, unsigned max_entry, std::uint64_t lo, std::uint64_t hi, DegreeVector& cur,
                      std::size_t pos, std::uint64_t sum, Visit&& visit) {
  if (pos == n) {
    if (sum >= lo && sum <= hi) visit(cur);
    return;
  }
  const std::uint64_t room = (n - pos - 1) * std::uint64_t{max_entry};
  for (unsigned e = 0; e <= max_entry && sum + e <= hi; ++e) {
    if (sum + e + room < lo) continue;
    cur[pos] = e;
    for_each_bounded(n, max_entry, lo, hi, cur, pos + 1, sum + e, visit);
  }
  cur[pos] = 0;
}

}  // namespace detail

/// Calls visit(dv) for every dv in {0..max_entry}^n with lo <= sum <= hi, in
/// lexicographic order.
template <typename Visit>
void for_each_degree_vector(std::size_t n, unsigned max_entry, std::uint64_t lo, std::uint64_t hi, Visit&& visit) {
  DegreeVector cur(n, 0);
  detail::for_each_bounded(n, max_entry, lo, hi, cur, 0, 0, visit);
}

/// Deg(RM[n,d,q]): all vectors in {0..q-1}^n with entry sum <= d, lexicographic.
inline std::vector<DegreeVector> degree_set(std::size_t n, std::uint64_t d, unsigned q) {
  std::vector<DegreeVector> out;
  for_each_degree_vector(n, q - 1, 0, d, [&](const DegreeVector& v) { out.push_back(v); });
  return out;
}

/// Calls visit(shadow) for every e' <=_p e (including e itself); stops early
/// when visit returns false. Returns false iff stopped.
template <typename Visit>
bool for_each_shadow(const DegreeVector& e, unsigned p, Visit&& visit) {
  std::vector<std::vector<unsigned>> options(e.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    for (unsigned v = 0; v <= e[i]; ++v)
      if (shadow_leq(v, e[i], p)) options[i].push_back(v);
  std::vector<std::size_t> idx(e.size(), 0);
  DegreeVector cur(e.size());
  while (true) {
    for (std::size_t i = 0; i < e.size(); ++i) cur[i] = options[i][idx[i]];
    if (!visit(cur)) return false;
    std::size_t i = 0;
    while (i < e.size() && ++idx[i] == options[i].size()) idx[i++] = 0;
    if (i == e.size()) return true;
  }
}

/// Border(RM[n,d,q]): vectors outside Deg all of whose proper p-shadows lie in
/// Deg. Candidates are restricted to entry sums b_i(d); each candidate is then
/// checked against its full shadow.
inline std::vector<DegreeVector> border_set(std::size_t n, std::uint64_t d, unsigned q, unsigned p, unsigned s) {
  std::set<std::uint64_t> sums;
  for (auto b : b_values(d, p, s)) sums.insert(b);
  std::vector<DegreeVector> out;
  for (auto b : sums) {
    for_each_degree_vector(n, q - 1, b, b, [&](const DegreeVector& cand) {
      const bool minimal = for_each_shadow(cand, p, [&](const DegreeVector& sh) {
        return sh == cand || total_degree(sh) <= d;
      });
      if (minimal) out.push_back(cand);
    });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class MultiPoly {
 public:
  struct Term {
    DegreeVector exponents;
    Element coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  MultiPoly(Field field, std::size_t n) : field_(std::move(field)), n_(n) {}

  static MultiPoly from_terms(Field field, std::size_t n, std::vector<Term> terms) {
    MultiPoly out(std::move(field), n);
    for (const auto& t : terms)
      if (t.exponents.size() != n) throw Error(ErrorCode::ArityMismatch, "term arity differs from n");
    out.terms_ = std::move(terms);
    out.normalize();
    return out;
  }
  static MultiPoly constant(Field field, std::size_t n, Element c) {
    return from_terms(std::move(field), n, {{DegreeVector(n, 0), c}});
  }
  static MultiPoly monomial(Field field, DegreeVector exps, Element c = 1) {
    const std::size_t n = exps.size();
    return from_terms(std::move(field), n, {{std::move(exps), c}});
  }
  /// sum_i coeffs[i] * x_{i+1}
  static MultiPoly linear_form(Field field, std::span<const Element> coeffs) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      DegreeVector e(coeffs.size(), 0);
      e[i] = 1;
      terms.push_back({std::move(e), coeffs[i]});
    }
    return from_terms(std::move(field), coeffs.size(), std::move(terms));
  }

  const Field& field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Element coefficient(const DegreeVector& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const DegreeVector& key) { return t.exponents < key; });
    return (it != terms_.end() && it->exponents == e) ? it->coeff : Element{0};
  }

  MultiPoly operator+(const MultiPoly& o) const {
    check_compatible(o);
    std::vector<Term> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return from_terms(field_, n_, std::move(all));
  }
  MultiPoly operator-(const MultiPoly& o) const { return *this + o.scaled(field_.neg(1)); }

  MultiPoly scaled(Element c) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.exponents, field_.mul(t.coeff, c)});
    return from_terms(field_, n_, std::move(out));
  }

  MultiPoly operator*(const MultiPoly& o) const {
    check_compatible(o);
    std::vector<Term> out;
    out.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        DegreeVector e(n_);
        for (std::size_t i = 0; i < n_; ++i) e[i] = a.exponents[i] + b.exponents[i];
        out.push_back({std::move(e), field_.mul(a.coeff, b.coeff)});
      }
    return from_terms(field_, n_, std::move(out));
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const MultiPoly& o) const {
    if (field_ != o.field_) throw Error(ErrorCode::FieldMismatch, "polynomials over different fields");
    if (n_ != o.n_) throw Error(ErrorCode::ArityMismatch, "polynomials in different variable counts");
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.exponents < b.exponents; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().exponents == t.exponents)
        merged.back().coeff = field_.add(merged.back().coeff, t.coeff);
      else
        merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(merged);
  }

  Field field_;
  std::size_t n_;
  std::vector<Term> terms_;  // sorted by exponents, unique, nonzero
};

/// (sum_i coeffs[i] x_{i+1})^e by repeated multiplication.
inline MultiPoly expand_power(const Field& field, std::span<const Element> coeffs, unsigned e) {
  if (e > field.q() - 1) throw Error(ErrorCode::OutOfRange, "exponent exceeds q-1");
  const MultiPoly form = MultiPoly::linear_form(field, coeffs);
  MultiPoly acc = MultiPoly::constant(field, coeffs.size(), 1);
  for (unsigned i = 0; i < e; ++i) acc = acc * form;
  return acc;
}

/// Divides termwise by the product of the listed (0-based) variables.
inline MultiPoly divide_exact(const MultiPoly& numerator, std::span<const std::size_t> divisor_vars) {
  std::vector<MultiPoly::Term> out;
  out.reserve(numerator.size());
  for (const auto& t : numerator.terms()) {
    DegreeVector e = t.exponents;
    for (std::size_t v : divisor_vars) {
      if (v >= e.size()) throw Error(ErrorCode::ArityMismatch, "divisor variable out of range");
      if (e[v] == 0) throw Error(ErrorCode::NotDivisible, "term lacks divisor variable x" + std::to_string(v + 1));
      --e[v];
    }
    out.push_back({std::move(e), t.coeff});
  }
  return MultiPoly::from_terms(numerator.field(), numerator.n(), std::move(out));
}

inline Element evaluate(const MultiPoly& poly, std::span<const Element> point) {
  if (point.size() != poly.n()) throw Error(ErrorCode::ArityMismatch, "point length differs from variable count");
  const Field& f = poly.field();
  Element acc = 0;
  for (const auto& t : poly.terms()) {
    Element v = t.coeff;
    for (std::size_t i = 0; i < point.size() && v != 0; ++i) v = f.mul(v, f.pow(point[i], t.exponents[i]));
    acc = f.add(acc, v);
  }
  return acc;
}

namespace detail {

// Values of a polynomial in m variables (terms sorted lexicographically, flat
// exponent rows of width m) over F_q^m, written to out[0 .. q^m). The last
// variable is substituted first so that equal prefixes are contiguous.
inline void evaluate_grid_rec(const Field& f, std::size_t m, const std::vector<unsigned>& exps,
                              const std::vector<Element>& coeffs, Element* out, unsigned workers) {
  const unsigned q = f.q();
  if (m == 0) {
    out[0] = coeffs.empty() ? Element{0} : coeffs[0];
    return;
  }
  std::size_t stride = 1;
  for (std::size_t i = 1; i < m; ++i) stride *= q;
  auto one_value = [&](unsigned beta) {
    std::vector<Element> pw(q);
    for (unsigned e = 0; e < q; ++e) pw[e] = f.pow(static_cast<Element>(beta), e);
    std::vector<unsigned> next_exps;
    std::vector<Element> next_coeffs;
    const std::size_t cnt = coeffs.size();
    for (std::size_t i = 0; i < cnt; ++i) {
      const unsigned* row = exps.data() + i * m;
      const unsigned last = row[m - 1];
      const Element contrib = f.mul(coeffs[i], last < q ? pw[last] : f.pow(static_cast<Element>(beta), last));
      const bool same = !next_coeffs.empty() &&
                        std::equal(row, row + m - 1, next_exps.data() + (next_coeffs.size() - 1) * (m - 1));
      if (same) {
        next_coeffs.back() = f.add(next_coeffs.back(), contrib);
      } else {
        next_exps.insert(next_exps.end(), row, row + m - 1);
        next_coeffs.push_back(contrib);
      }
    }
    evaluate_grid_rec(f, m - 1, next_exps, next_coeffs, out + beta * stride, 1);
  };
  parallel_chunks(q, workers, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t beta = b; beta < e; ++beta) one_value(static_cast<unsigned>(beta));
  });
}

}  // namespace detail

/// Full value table of poly over F_q^n; index = sum_i c_i q^i with c_i the
/// code of coordinate i (x1 least significant).
inline std::vector<Element> evaluate_grid(const MultiPoly& poly, unsigned workers = 1) {
  const unsigned q = poly.field().q();
  std::size_t size = 1;
  for (std::size_t i = 0; i < poly.n(); ++i) size *= q;
  std::vector<unsigned> exps;
  std::vector<Element> coeffs;
  exps.reserve(poly.size() * poly.n());
  for (const auto& t : poly.terms()) {
    exps.insert(exps.end(), t.exponents.begin(), t.exponents.end());
    coeffs.push_back(t.coeff);
  }
  std::vector<Element> out(size, 0);
  detail::evaluate_grid_rec(poly.field(), poly.n(), exps, coeffs, out.data(), workers);
  return out;
}

/// Substitutes x_target <- x_target + x_source (0-based), expanding
/// (x_t + x_s)^m with binomial coefficients reduced mod p.
inline MultiPoly substitute_shift(const MultiPoly& poly, std::size_t target, std::size_t source) {
  if (target >= poly.n() || source >= poly.n() || target == source)
    throw Error(ErrorCode::ArityMismatch, "bad substitution variables");
  const Field& f = poly.field();
  std::vector<MultiPoly::Term> out;
  for (const auto& t : poly.terms()) {
    const unsigned m = t.exponents[target];
    for (unsigned j = 0; j <= m; ++j) {
      const unsigned c = binomial_mod_p(m, j, f.p());
      if (c == 0) continue;
      DegreeVector e = t.exponents;
      e[target] = m - j;
      e[source] += j;
      out.push_back({std::move(e), f.mul(t.coeff, static_cast<Element>(c))});
    }
  }
  return MultiPoly::from_terms(f, poly.n(), std::move(out));
}

/// Support of x1^{d1} (x1 + x2)^{d2}, lexicographically sorted.
inline std::vector<DegreeVector> compose_affine_support(const DegreeVector& m, const Field& field) {
  if (m.size() != 2) throw Error(ErrorCode::ArityMismatch, "expects a bivariate degree vector");
  if (std::uint64_t{m[0]} + m[1] > field.q() - 1)
    throw Error(ErrorCode::DegreeOverflow, "d1 + d2 exceeds q-1");
  const MultiPoly shifted = substitute_shift(MultiPoly::monomial(field, m), 1, 0);
  std::vector<DegreeVector> out;
  for (const auto& t : shifted.terms()) out.push_back(t.exponents);
  return out;
}

}  // namespace rmlt
