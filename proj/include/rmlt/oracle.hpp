#pragma once

// Brute-force ground truth: RM dimension, rank of the orbit's row span
// against the dual code, Deg/Border acceptance, exact distance to RM.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rmlt/bounds.hpp"
#include "rmlt/constraint.hpp"
#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"
#include "rmlt/linalg.hpp"
#include "rmlt/poly.hpp"
#include "rmlt/tester.hpp"

namespace rmlt {

inline std::uint64_t rm_dimension(std::size_t n, std::uint64_t d, unsigned q) {
  std::uint64_t count = 0;
  for_each_degree_vector(n, q - 1, 0, d, [&](const DegreeVector&) { ++count; });
  return count;
}

/// lambda_{i,j} placed at the index of alpha_j; repeated points add up.
inline std::vector<Element> constraint_row_as_dual_vector(const Constraint& c, std::size_t row) {
  const Field& f = c.field();
  const std::uint64_t size = checked_power(f.q(), c.n(), std::uint64_t{1} << 32, "dual vector length");
  std::vector<Element> v(size, 0);
  const auto lambda = c.row(row);
  for (std::size_t j = 0; j < c.k(); ++j) {
    auto& slot = v[point_index(c.point(j), f.q())];
    slot = f.add(slot, lambda[j]);
  }
  return v;
}

inline std::size_t hamming_weight(std::span<const Element> v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](Element x) { return x != 0; }));
}

/// Identity, then diagonal, permutation and single-entry shear matrices, each
/// with every shift.
inline std::vector<AffineTransform> structured_transforms(const Field& f, std::size_t n) {
  const unsigned q = f.q();
  std::vector<std::vector<Element>> matrices;
  matrices.push_back(AffineTransform::identity(n).matrix);
  const std::uint64_t diag_count = checked_power(q, n, std::uint64_t{1} << 24, "diagonal family");
  for (std::uint64_t idx = 0; idx < diag_count; ++idx) {
    std::vector<Element> m(n * n, 0);
    std::uint64_t x = idx;
    for (std::size_t i = 0; i < n; ++i, x /= q) m[i * n + i] = static_cast<Element>(x % q);
    matrices.push_back(std::move(m));
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<Element> m(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + perm[i]] = 1;
    matrices.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (unsigned c = 1; c < q; ++c) {
        auto m = AffineTransform::identity(n).matrix;
        m[i * n + j] = static_cast<Element>(c);
        matrices.push_back(std::move(m));
      }
    }
  std::sort(matrices.begin(), matrices.end());
  matrices.erase(std::unique(matrices.begin(), matrices.end()), matrices.end());
  // identity first so the common case is decided immediately
  const auto id = AffineTransform::identity(n).matrix;
  std::stable_partition(matrices.begin(), matrices.end(), [&](const auto& m) { return m == id; });

  const std::uint64_t shifts = checked_power(q, n, std::uint64_t{1} << 24, "shift family");
  std::vector<AffineTransform> out;
  out.reserve(matrices.size() * shifts);
  for (const auto& m : matrices)
    for (std::uint64_t idx = 0; idx < shifts; ++idx) {
      AffineTransform t{n, m, std::vector<Element>(n)};
      index_to_point(idx, q, t.shift);
      out.push_back(std::move(t));
    }
  return out;
}

struct OracleOptions {
  std::uint64_t transform_budget = kDefaultTransformBudget;  // exhaustive up to this many maps
  std::uint64_t rank_budget = 4096;                          // max q^n
  std::uint64_t seed = 0;
  std::size_t batch_size = 1024;
  std::size_t patience = 8;  // stop after this many batches without rank growth
  std::uint64_t max_random_batches = 4096;
};

enum class CertStatus { Pass, Fail, Inconclusive };

inline const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Pass: return "pass";
    case CertStatus::Fail: return "fail";
    case CertStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct RankCertificate {
  unsigned q = 0;
  std::size_t n = 0;
  std::uint64_t d = 0;
  std::uint64_t dual_dim = 0;
  std::uint64_t achieved_rank = 0;
  std::size_t max_row_weight = 0;
  std::size_t k = 0;
  bool exhaustive = false;
  std::uint64_t transforms_used = 0;
  bool rows_in_dual = false;  // C accepts every monomial of Deg, so the whole orbit lies in the dual
  std::optional<DegreeVector> dual_witness;
  double weight_bound = 0;
  bool weight_bound_satisfied = false;
  CertStatus status = CertStatus::Fail;
  bool pass = false;
};

/// First degree vector of Deg(RM[n,d,q]) that c fails to accept, if any.
inline std::optional<DegreeVector> first_rejected_in_deg(const Constraint& c, std::uint64_t d) {
  std::optional<DegreeVector> bad;
  sweep_monomials(c, d, [&](const DegreeVector& dv, std::span<const Element> sums) {
    for (Element x : sums)
      if (x != 0) {
        bad = dv;
        return false;
      }
    return true;
  });
  return bad;
}

inline RankCertificate orbit_span_rank(const Constraint& c, std::size_t n, std::uint64_t d, unsigned q,
                                       const OracleOptions& opts = {}) {
  const Field& f = c.field();
  if (c.n() != n || f.q() != q) throw Error(ErrorCode::DomainMismatch, "constraint does not live on F_q^n");
  const std::uint64_t size = checked_power(q, n, opts.rank_budget, "rank dimension q^n");
  RankCertificate cert;
  cert.q = q;
  cert.n = n;
  cert.d = d;
  cert.k = c.k();
  cert.dual_dim = size - rm_dimension(n, d, q);
  cert.dual_witness = first_rejected_in_deg(c, d);
  cert.rows_in_dual = !cert.dual_witness;

  EchelonBasis basis(f, size);
  // Once the orbit is known to sit in the dual, rank cannot pass dual_dim.
  const std::uint64_t cap = cert.rows_in_dual ? cert.dual_dim : size;
  std::vector<Element> image(n);
  std::vector<Element> vec(size);
  auto feed = [&](const AffineTransform& t) {
    ++cert.transforms_used;
    std::vector<std::size_t> idx(c.k());
    for (std::size_t j = 0; j < c.k(); ++j) {
      t.apply(f, c.point(j), image);
      idx[j] = point_index(image, q);
    }
    bool grew = false;
    for (const auto& row : c.rows()) {
      std::fill(vec.begin(), vec.end(), Element{0});
      for (std::size_t j = 0; j < c.k(); ++j) vec[idx[j]] = f.add(vec[idx[j]], row[j]);
      cert.max_row_weight = std::max(cert.max_row_weight, hamming_weight(vec));
      if (basis.rank() < cap && basis.insert(vec)) grew = true;
    }
    return grew;
  };

  std::uint64_t total = 0;
  try {
    total = AffineTransform::count(q, n, opts.transform_budget);
    cert.exhaustive = true;
  } catch (const Error&) {
    cert.exhaustive = false;
  }
  if (cert.exhaustive) {
    for (std::uint64_t idx = 0; idx < total; ++idx) feed(AffineTransform::from_index(idx, q, n));
  } else {
    for (const auto& t : structured_transforms(f, n)) feed(t);
    std::size_t stale = 0;
    for (std::uint64_t batch = 0; batch < opts.max_random_batches && stale < opts.patience && basis.rank() < cap;
         ++batch) {
      bool grew = false;
      for (std::size_t i = 0; i < opts.batch_size; ++i) {
        auto rng = trial_rng(opts.seed, batch * opts.batch_size + i);
        grew |= feed(sample_transform(rng, n, f));
      }
      stale = grew ? 0 : stale + 1;
    }
  }
  cert.achieved_rank = basis.rank();
  cert.weight_bound = rm_constraint_bound(d, q, f.p());
  cert.weight_bound_satisfied = rm_constraint_bound_holds(cert.max_row_weight, d, q, f.p());
  cert.pass = cert.rows_in_dual && cert.achieved_rank == cert.dual_dim;
  if (cert.pass)
    cert.status = CertStatus::Pass;
  else if (!cert.exhaustive && cert.rows_in_dual && cert.achieved_rank < cert.dual_dim)
    cert.status = CertStatus::Inconclusive;
  else
    cert.status = CertStatus::Fail;
  return cert;
}

struct BorderCoverage {
  DegreeVector border;
  std::optional<AffineTransform> rejecting;  // empty: uncovered
};

struct DegBorderReport {
  unsigned q = 0;
  std::size_t n = 0;
  std::uint64_t d = 0;
  std::uint64_t deg_size = 0;
  std::optional<DegreeVector> deg_failure;
  std::vector<BorderCoverage> border;
  std::vector<DegreeVector> uncovered;
  bool exhaustive = false;
  bool pass = false;
};

/// Deg must be accepted by C itself; each Border monomial must be rejected by
/// some T(C). Transforms: identity and the structured family, then every map
/// (within budget) or seeded random ones.
inline DegBorderReport verify_deg_border(const Constraint& c, std::size_t n, std::uint64_t d, unsigned q,
                                         const OracleOptions& opts = {}) {
  const Field& f = c.field();
  if (c.n() != n || f.q() != q) throw Error(ErrorCode::DomainMismatch, "constraint does not live on F_q^n");
  DegBorderReport rep;
  rep.q = q;
  rep.n = n;
  rep.d = d;
  rep.deg_size = rm_dimension(n, d, q);
  rep.deg_failure = first_rejected_in_deg(c, d);

  std::uint64_t total = 0;
  try {
    total = AffineTransform::count(q, n, opts.transform_budget);
    rep.exhaustive = true;
  } catch (const Error&) {
    rep.exhaustive = false;
  }
  const std::vector<AffineTransform> structured = structured_transforms(f, n);
  for (const auto& b : border_set(n, d, q, f.p(), f.s())) {
    BorderCoverage cov{b, std::nullopt};
    auto rejects = [&](const AffineTransform& t) { return !accepts_monomial(apply_transform(t, c), b); };
    for (const auto& t : structured)
      if (rejects(t)) {
        cov.rejecting = t;
        break;
      }
    if (!cov.rejecting) {
      if (rep.exhaustive) {
        for (std::uint64_t idx = 0; idx < total && !cov.rejecting; ++idx) {
          auto t = AffineTransform::from_index(idx, q, n);
          if (rejects(t)) cov.rejecting = t;
        }
      } else {
        const std::uint64_t tries = opts.batch_size * opts.patience;
        for (std::uint64_t i = 0; i < tries && !cov.rejecting; ++i) {
          auto rng = trial_rng(opts.seed, i);
          auto t = sample_transform(rng, n, f);
          if (rejects(t)) cov.rejecting = t;
        }
      }
    }
    if (!cov.rejecting) rep.uncovered.push_back(b);
    rep.border.push_back(std::move(cov));
  }
  rep.pass = !rep.deg_failure && rep.uncovered.empty();
  return rep;
}

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return double(num) / double(den); }
  friend bool operator==(const Fraction& a, const Fraction& b) { return a.num * b.den == b.num * a.den; }
};

inline constexpr std::uint64_t kDefaultCodewordBudget = 1'000'000;

/// Minimum over all codewords of the fraction of points where f differs.
inline Fraction distance_to_rm(const FunctionTable& fn, std::size_t n, std::uint64_t d, unsigned q,
                               std::uint64_t budget = kDefaultCodewordBudget) {
  const Field& f = fn.field();
  if (fn.n() != n || f.q() != q) throw Error(ErrorCode::DomainMismatch, "function does not live on F_q^n");
  const std::vector<DegreeVector> basis_degrees = degree_set(n, d, q);
  checked_power(q, basis_degrees.size(), budget, "codeword count q^dim");
  std::vector<std::vector<Element>> basis;
  for (const auto& dv : basis_degrees) basis.push_back(FunctionTable::monomial(f, dv).values());
  const std::size_t size = fn.size();

  // Walk coefficient vectors in mixed radix; each step changes a few digits.
  std::vector<Element> coeff(basis.size(), 0);
  std::vector<Element> word(size, 0);
  auto distance = [&] {
    std::uint64_t diff = 0;
    for (std::size_t i = 0; i < size; ++i) diff += word[i] != fn.at(i);
    return diff;
  };
  std::uint64_t best = distance();
  while (true) {
    std::size_t pos = 0;
    while (pos < coeff.size()) {
      const Element old = coeff[pos];
      const Element next = static_cast<Element>((old + 1) % q);
      const Element delta = f.sub(next, old);
      for (std::size_t i = 0; i < size; ++i)
        if (basis[pos][i] != 0) word[i] = f.add(word[i], f.mul(delta, basis[pos][i]));
      coeff[pos] = next;
      if (next != 0) break;
      ++pos;
    }
    if (pos == coeff.size()) break;
    best = std::min(best, distance());
    if (best == 0) break;
  }
  return Fraction{best, size};
}

}  // namespace rmlt
