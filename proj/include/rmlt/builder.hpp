#pragma once

// Single-orbit constraint for RM[n,d,q]: one convolution pipeline per border
// degree b_i(d), unioned.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "rmlt/bounds.hpp"
#include "rmlt/constraint.hpp"
#include "rmlt/core.hpp"
#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"
#include "rmlt/poly.hpp"

namespace rmlt {

/// target = r + l (q - q/p), l = l' p + r'.
struct Decomposition {
  std::uint64_t target = 0;
  std::uint64_t r = 0;
  std::uint64_t l = 0;
  std::uint64_t l_prime = 0;
  std::uint64_t r_prime = 0;
  std::size_t variables_needed = 0;
  bool extension = false;  // target < q/p: no window split, r = target

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

inline Decomposition decompose(std::uint64_t target, unsigned q, unsigned p) {
  if (target == 0) throw Error(ErrorCode::OutOfRange, "target degree must be >= 1");
  const DegreeVector canon = canonical_monomial(target, q, p);
  Decomposition out;
  out.target = target;
  out.r = canon[0];
  out.l = canon.size() - 1;
  out.l_prime = out.l / p;
  out.r_prime = out.l % p;
  out.variables_needed = 1 + out.r_prime + p * out.l_prime;
  out.extension = target < q / p;
  return out;
}

/// (r+1) (q-q/p+1)^{r'} k_core^{l'}
inline std::uint64_t predicted_arity(const Decomposition& dec, unsigned q, unsigned p, std::uint64_t core_k) {
  std::uint64_t k = dec.r + 1;
  for (std::uint64_t i = 0; i < dec.r_prime; ++i) k *= q - q / p + 1;
  for (std::uint64_t i = 0; i < dec.l_prime; ++i) k *= core_k;
  return k;
}

struct BuildOptions {
  CoreOptions core;
};

/// Memoizes the core constraint across targets of one build.
class CoreCache {
 public:
  CoreCache(Field field, CoreOptions opts) : field_(std::move(field)), opts_(opts) {}
  const Constraint& get() {
    if (!core_) core_ = core_constraint(field_, opts_);
    return *core_;
  }

 private:
  Field field_;
  CoreOptions opts_;
  std::optional<Constraint> core_;
};

namespace detail {

inline Constraint degree_constraint(std::uint64_t target, const Field& f, std::size_t n, CoreCache& cache) {
  const unsigned q = f.q(), p = f.p();
  const Decomposition dec = decompose(target, q, p);
  if (n < dec.variables_needed)
    throw Error(ErrorCode::ArityTooSmall, "degree " + std::to_string(target) + " needs n >= " +
                                              std::to_string(dec.variables_needed) + ", got " + std::to_string(n));
  // x1 carries r, then r' variables carry q-q/p each, then l' blocks of p variables
  Constraint c = vandermonde_constraint(f, static_cast<unsigned>(dec.r - 1));
  if (dec.r_prime > 0) {
    const Constraint c2 = vandermonde_constraint(f, q - q / p - 1);
    for (std::uint64_t i = 0; i < dec.r_prime; ++i) c = convolution(c, c2);
  }
  for (std::uint64_t i = 0; i < dec.l_prime; ++i) c = convolution(c, cache.get());
  return pad_arity(c, n);
}

}  // namespace detail

/// Accepts every monomial of total degree < target and rejects the canonical
/// monomial of degree target (padded with zero exponents to n).
inline Constraint constraint_for_degree(std::uint64_t target, const Field& f, std::size_t n,
                                        const BuildOptions& opts = {}) {
  CoreCache cache(f, opts.core);
  return detail::degree_constraint(target, f, n, cache);
}

inline std::vector<std::uint64_t> distinct_targets(std::uint64_t d, unsigned p, unsigned s) {
  std::vector<std::uint64_t> out;
  for (auto b : b_values(d, p, s))
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  return out;
}

inline std::size_t arity_required(std::uint64_t d, unsigned q, unsigned p, unsigned s) {
  std::size_t need = 1;
  for (auto b : b_values(d, p, s)) need = std::max(need, decompose(b, q, p).variables_needed);
  return need;
}

struct DegreePart {
  Decomposition decomposition;
  std::uint64_t k = 0;
  double bound = 0;
  bool bound_satisfied = false;
};

struct RmBuild {
  Constraint constraint;
  std::size_t n = 0;
  std::uint64_t d = 0;
  std::vector<std::uint64_t> b_values;
  std::vector<DegreePart> parts;  // one per distinct b_i(d), in index order
  std::uint64_t k = 0;
  double bound = 0;               // 3q^4 a^{(d+1)/(q(p-1))} q^{(d+1)/q}
  bool bound_satisfied = false;
  double simple_bound = 0;        // 3q^4 (3q)^{(d+1)/q}
  bool simple_bound_satisfied = false;
};

inline RmBuild build_rm(std::size_t n, std::uint64_t d, const Field& f, const BuildOptions& opts = {}) {
  const unsigned q = f.q(), p = f.p(), s = f.s();
  const std::size_t need = arity_required(d, q, p, s);
  if (n < need)
    throw Error(ErrorCode::ArityTooSmall,
                "RM[n, " + std::to_string(d) + ", " + std::to_string(q) + "] needs n >= " + std::to_string(need));
  CoreCache cache(f, opts.core);
  std::optional<Constraint> acc;
  std::vector<DegreePart> parts;
  for (auto target : distinct_targets(d, p, s)) {
    Constraint c = detail::degree_constraint(target, f, n, cache);
    DegreePart part;
    part.decomposition = decompose(target, q, p);
    part.k = c.k();
    part.bound = degree_constraint_bound(target, q, p);
    part.bound_satisfied = degree_constraint_bound_holds(part.k, target, q, p);
    parts.push_back(part);
    acc = acc ? union_of(*acc, c) : std::move(c);
  }
  RmBuild out{std::move(*acc), n, d, b_values(d, p, s), std::move(parts)};
  out.k = out.constraint.k();
  out.bound = rm_constraint_bound(d, q, p);
  out.bound_satisfied = rm_constraint_bound_holds(out.k, d, q, p);
  out.simple_bound = rmlt::simple_bound(d, q);
  out.simple_bound_satisfied = simple_bound_holds(out.k, d, q);
  return out;
}

inline Constraint rm_constraint(std::size_t n, std::uint64_t d, const Field& f, const BuildOptions& opts = {}) {
  return build_rm(n, d, f, opts).constraint;
}

}  // namespace rmlt
