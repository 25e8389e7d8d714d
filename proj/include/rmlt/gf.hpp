#pragma once

// Finite fields F_{p^s} with elements encoded as integers whose base-p
// digits (little-endian) are polynomial-basis coefficients.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmlt/error.hpp"

namespace rmlt {

using Element = std::uint16_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

/// Splits q into p^s; nullopt when q is not a prime power.
inline std::optional<std::pair<unsigned, unsigned>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  unsigned p = 0;
  for (std::uint64_t f = 2; f * f <= q; ++f)
    if (q % f == 0) {
      p = static_cast<unsigned>(f);
      break;
    }
  if (p == 0) return std::pair<unsigned, unsigned>{static_cast<unsigned>(q), 1u};
  unsigned s = 0;
  while (q % p == 0) {
    q /= p;
    ++s;
  }
  if (q != 1) return std::nullopt;
  return std::pair<unsigned, unsigned>{p, s};
}

namespace detail {

// Dense polynomials over F_p, coefficient vectors little-endian, no trailing zeros.
using PolyP = std::vector<unsigned>;

inline void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyP poly_mod(PolyP a, const PolyP& m, unsigned p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  // m is monic
  while (a.size() > dm) {
    const unsigned lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = (a[shift + i] + p - (lead * m[i]) % p) % p;
    trim(a);
  }
  return a;
}

inline PolyP code_to_poly(std::uint64_t code, unsigned p) {
  PolyP out;
  while (code > 0) {
    out.push_back(static_cast<unsigned>(code % p));
    code /= p;
  }
  return out;
}

inline bool is_irreducible(const PolyP& m, unsigned p) {
  const std::size_t deg = m.size() - 1;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (std::size_t dd = 1; 2 * dd <= deg; ++dd) {
    std::uint64_t lo = 1;
    for (std::size_t i = 0; i < dd; ++i) lo *= p;
    for (std::uint64_t low = 0; low < lo; ++low) {
      PolyP divisor = code_to_poly(low, p);
      divisor.resize(dd + 1, 0);
      divisor[dd] = 1;
      if (poly_mod(m, divisor, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

enum class ArithOp { Add, Sub, Mul, Neg };

class Field {
 public:
  static constexpr unsigned kDefaultMaxOrder = 4096;

  /// Builds F_{p^s}. Without a modulus the lexicographically smallest monic
  /// irreducible of degree s (by ascending code) is used.
  static Field create(unsigned p, unsigned s, std::optional<std::vector<unsigned>> modulus = std::nullopt,
                      unsigned max_order = kDefaultMaxOrder) {
    if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (s == 0) throw Error(ErrorCode::UnsupportedSize, "extension degree must be >= 1");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < s; ++i) {
      q *= p;
      if (q > max_order)
        throw Error(ErrorCode::UnsupportedSize,
                    "field order exceeds supported bound " + std::to_string(max_order));
    }
    detail::PolyP mod;
    if (modulus) {
      mod = *modulus;
      if (mod.size() != s + 1 || mod.back() != 1)
        throw Error(ErrorCode::ReducibleModulus, "modulus must be monic of degree " + std::to_string(s));
      for (unsigned c : mod)
        if (c >= p) throw Error(ErrorCode::ReducibleModulus, "modulus digit out of range");
      if (!detail::is_irreducible(mod, p)) throw Error(ErrorCode::ReducibleModulus, "modulus is reducible");
    } else {
      for (std::uint64_t code = q;; ++code) {
        detail::PolyP cand = detail::code_to_poly(code, p);
        if (detail::is_irreducible(cand, p)) {
          mod = cand;
          break;
        }
      }
    }
    return Field(std::make_shared<const Tables>(p, s, static_cast<unsigned>(q), std::move(mod)));
  }

  /// Builds the field of order q with its default modulus.
  static Field of_order(std::uint64_t q, unsigned max_order = kDefaultMaxOrder) {
    auto ps = prime_power(q);
    if (!ps) throw Error(ErrorCode::NotPrimePower, std::to_string(q) + " is not a prime power");
    return create(ps->first, ps->second, std::nullopt, max_order);
  }

  unsigned p() const noexcept { return t_->p; }
  unsigned s() const noexcept { return t_->s; }
  unsigned q() const noexcept { return t_->q; }
  const std::vector<unsigned>& modulus() const noexcept { return t_->modulus; }

  bool valid(std::uint64_t a) const noexcept { return a < t_->q; }

  Element add(Element a, Element b) const noexcept {
    if (!t_->add_table.empty()) return t_->add_table[std::size_t(a) * t_->q + b];
    if (t_->p == 2) return static_cast<Element>(a ^ b);
    return t_->digit_add(a, b);
  }
  Element sub(Element a, Element b) const noexcept { return add(a, neg(b)); }
  Element neg(Element a) const noexcept {
    if (t_->p == 2) return a;
    return t_->neg_table[a];
  }
  Element mul(Element a, Element b) const noexcept {
    if (a == 0 || b == 0) return 0;
    if (!t_->log.empty()) return t_->exp[std::size_t(t_->log[a]) + t_->log[b]];
    return t_->slow_mul(a, b);
  }
  Element inv(Element a) const {
    if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    if (!t_->log.empty()) return t_->exp[(t_->q - 1 - t_->log[a]) % (t_->q - 1)];
    return pow(a, t_->q - 2);
  }
  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  /// a^e with 0^0 = 1.
  Element pow(Element a, std::uint64_t e) const noexcept {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (!t_->log.empty()) return t_->exp[(std::uint64_t(t_->log[a]) * (e % (t_->q - 1))) % (t_->q - 1)];
    Element result = 1;
    Element base = a;
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  Element arith(ArithOp op, Element a, Element b) const noexcept {
    switch (op) {
      case ArithOp::Add: return add(a, b);
      case ArithOp::Sub: return sub(a, b);
      case ArithOp::Mul: return mul(a, b);
      case ArithOp::Neg: return neg(a);
    }
    return 0;
  }

  /// Image of an integer in the prime subfield.
  Element from_integer(long long v) const noexcept {
    const long long p = t_->p;
    return static_cast<Element>(((v % p) + p) % p);
  }

  /// sum over beta in F_q of beta^i, for 0 <= i <= q-1.
  Element power_sum(long long i) const {
    if (i < 0 || i > static_cast<long long>(t_->q) - 1)
      throw Error(ErrorCode::OutOfRange, "power_sum exponent must lie in [0, q-1]");
    Element acc = 0;
    for (unsigned b = 0; b < t_->q; ++b) acc = add(acc, pow(static_cast<Element>(b), static_cast<std::uint64_t>(i)));
    return acc;
  }

  std::vector<Element> elements() const {
    std::vector<Element> out(t_->q);
    for (unsigned i = 0; i < t_->q; ++i) out[i] = static_cast<Element>(i);
    return out;
  }

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.t_ == b.t_ || (a.p() == b.p() && a.s() == b.s() && a.modulus() == b.modulus());
  }
  friend bool operator!=(const Field& a, const Field& b) noexcept { return !(a == b); }

  std::string name() const {
    return "F_" + std::to_string(t_->q);
  }

 private:
  struct Tables {
    unsigned p, s, q;
    std::vector<unsigned> modulus;
    std::vector<Element> add_table;  // q*q, only for q <= 256
    std::vector<Element> neg_table;
    std::vector<std::uint16_t> log;  // only for q <= 1024
    std::vector<Element> exp;        // 2(q-1) entries

    Tables(unsigned p_, unsigned s_, unsigned q_, std::vector<unsigned> mod)
        : p(p_), s(s_), q(q_), modulus(std::move(mod)) {
      neg_table.resize(q);
      for (unsigned a = 0; a < q; ++a) {
        unsigned out = 0, scale = 1, x = a;
        while (x > 0) {
          out += ((p - x % p) % p) * scale;
          scale *= p;
          x /= p;
        }
        neg_table[a] = static_cast<Element>(out);
      }
      if (q <= 256) {
        add_table.resize(std::size_t(q) * q);
        for (unsigned a = 0; a < q; ++a)
          for (unsigned b = 0; b < q; ++b) add_table[std::size_t(a) * q + b] = digit_add(a, b);
      }
      if (q <= 1024) build_log_tables();
    }

    Element digit_add(unsigned a, unsigned b) const {
      unsigned out = 0, scale = 1;
      while (a > 0 || b > 0) {
        out += ((a % p + b % p) % p) * scale;
        scale *= p;
        a /= p;
        b /= p;
      }
      return static_cast<Element>(out);
    }

    Element slow_mul(Element a, Element b) const {
      detail::PolyP x = detail::code_to_poly(a, p), y = detail::code_to_poly(b, p);
      detail::PolyP prod(x.size() + y.size(), 0);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
      prod = detail::poly_mod(prod, modulus, p);
      unsigned out = 0, scale = 1;
      for (unsigned c : prod) {
        out += c * scale;
        scale *= p;
      }
      return static_cast<Element>(out);
    }

    void build_log_tables() {
      const unsigned order = q - 1;
      Element gen = 1;
      for (unsigned g = 1; g < q; ++g) {
        unsigned k = 1;
        Element x = static_cast<Element>(g);
        while (x != 1) {
          x = slow_mul(x, static_cast<Element>(g));
          ++k;
        }
        if (k == order) {
          gen = static_cast<Element>(g);
          break;
        }
      }
      log.assign(q, 0);
      exp.assign(2 * std::size_t(order), 0);
      Element x = 1;
      for (unsigned i = 0; i < order; ++i) {
        exp[i] = x;
        exp[i + order] = x;
        log[x] = static_cast<std::uint16_t>(i);
        x = slow_mul(x, gen);
      }
    }
  };

  explicit Field(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}

  std::shared_ptr<const Tables> t_;
};

}  // namespace rmlt
