#pragma once

// Randomized local tester: pick a random affine map T, read f at T(alpha_j),
// accept iff every row sum vanishes. Sampled and exhaustive rejection rates.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rmlt/constraint.hpp"
#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"
#include "rmlt/parallel.hpp"

namespace rmlt {

enum class TestMode { Exact, Sampled };

inline const char* to_string(TestMode m) { return m == TestMode::Exact ? "exact" : "sampled"; }

struct TestReport {
  std::uint64_t trials = 0;
  std::uint64_t rejections = 0;
  double estimate = 0;
  TestMode mode = TestMode::Sampled;
  std::uint64_t seed = 0;
  std::size_t queries_per_trial = 0;
};

/// Independent stream for trial t of a run seeded with seed; trial outcomes
/// do not depend on how many trials are run or how they are split.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

/// A uniform over all n x n matrices (singular included), shift uniform.
template <typename Rng>
AffineTransform sample_transform(Rng& rng, std::size_t n, const Field& f) {
  std::uniform_int_distribution<unsigned> coord(0, f.q() - 1);
  AffineTransform t{n, std::vector<Element>(n * n), std::vector<Element>(n)};
  for (auto& c : t.matrix) c = static_cast<Element>(coord(rng));
  for (auto& c : t.shift) c = static_cast<Element>(coord(rng));
  return t;
}

/// Reusable buffers so the hot loop does not allocate.
class TrialWorkspace {
 public:
  explicit TrialWorkspace(const Constraint& c) : image_(c.n()), values_(c.k()) {}

  /// True iff every row of T(C) vanishes on f. Reads f at exactly k points.
  bool accepts(const Constraint& c, const FunctionTable& f, const AffineTransform& t) {
    const Field& fld = c.field();
    const unsigned q = fld.q();
    for (std::size_t j = 0; j < c.k(); ++j) {
      t.apply(fld, c.point(j), image_);
      values_[j] = f.at(point_index(image_, q));
    }
    for (const auto& row : c.rows()) {
      Element acc = 0;
      for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0) acc = fld.add(acc, fld.mul(row[j], values_[j]));
      if (acc != 0) return false;
    }
    return true;
  }

 private:
  std::vector<Element> image_;
  std::vector<Element> values_;
};

inline void check_test_domain(const Constraint& c, const FunctionTable& f, const AffineTransform* t = nullptr) {
  if (c.field() != f.field() || c.n() != f.n())
    throw Error(ErrorCode::DomainMismatch, "constraint and function live on different domains");
  if (t && (t->n != c.n() || t->matrix.size() != c.n() * c.n() || t->shift.size() != c.n()))
    throw Error(ErrorCode::DomainMismatch, "transform dimension differs from the constraint's");
}

inline bool test_once(const Constraint& c, const FunctionTable& f, const AffineTransform& t) {
  check_test_domain(c, f, &t);
  TrialWorkspace ws(c);
  return ws.accepts(c, f, t);
}

inline bool trial_accepts(const Constraint& c, const FunctionTable& f, std::uint64_t seed, std::uint64_t trial) {
  check_test_domain(c, f);
  auto rng = trial_rng(seed, trial);
  TrialWorkspace ws(c);
  return ws.accepts(c, f, sample_transform(rng, c.n(), c.field()));
}

inline TestReport estimate_rejection(const Constraint& c, const FunctionTable& f, std::uint64_t trials,
                                     std::uint64_t seed, unsigned workers = 1) {
  if (trials == 0) throw Error(ErrorCode::OutOfRange, "trials must be >= 1");
  check_test_domain(c, f);
  const unsigned w = resolve_workers(workers);
  std::vector<std::uint64_t> rejected(w, 0);
  parallel_chunks(trials, w, [&](std::size_t begin, std::size_t end, unsigned slot) {
    TrialWorkspace ws(c);
    std::uint64_t local = 0;
    for (std::size_t t = begin; t < end; ++t) {
      auto rng = trial_rng(seed, t);
      if (!ws.accepts(c, f, sample_transform(rng, c.n(), c.field()))) ++local;
    }
    rejected[slot] = local;
  });
  TestReport rep;
  rep.trials = trials;
  for (auto x : rejected) rep.rejections += x;
  rep.estimate = double(rep.rejections) / double(trials);
  rep.mode = TestMode::Sampled;
  rep.seed = seed;
  rep.queries_per_trial = c.k();
  return rep;
}

inline constexpr std::uint64_t kDefaultTransformBudget = 10'000'000;

/// Every (A, shift); estimate is the exact rejection probability.
inline TestReport exact_rejection(const Constraint& c, const FunctionTable& f,
                                  std::uint64_t budget = kDefaultTransformBudget, unsigned workers = 1) {
  check_test_domain(c, f);
  const unsigned q = c.field().q();
  const std::uint64_t total = AffineTransform::count(q, c.n(), budget);
  const unsigned w = resolve_workers(workers);
  std::vector<std::uint64_t> rejected(w, 0);
  parallel_chunks(total, w, [&](std::size_t begin, std::size_t end, unsigned slot) {
    TrialWorkspace ws(c);
    std::uint64_t local = 0;
    for (std::size_t idx = begin; idx < end; ++idx)
      if (!ws.accepts(c, f, AffineTransform::from_index(idx, q, c.n()))) ++local;
    rejected[slot] = local;
  });
  TestReport rep;
  rep.trials = total;
  for (auto x : rejected) rep.rejections += x;
  rep.estimate = double(rep.rejections) / double(total);
  rep.mode = TestMode::Exact;
  rep.queries_per_trial = c.k();
  return rep;
}

}  // namespace rmlt
