#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rmlt/builder.hpp"

using namespace rmlt;

namespace {

const std::vector<unsigned> kOrders = {2, 3, 4, 5, 7, 8, 9, 16, 25, 27};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

DegreeVector padded(DegreeVector v, std::size_t n) {
  v.resize(n, 0);
  return v;
}

// Every monomial of total degree <= max_total accepted (fast sweep).
bool accepts_all_below(const Constraint& c, std::uint64_t max_total) {
  return sweep_monomials(c, max_total, [](const DegreeVector&, std::span<const Element> sums) {
    for (auto x : sums)
      if (x != 0) return false;
    return true;
  });
}

}  // namespace

TEST(Decompose, Examples) {
  EXPECT_EQ(decompose(3, 2, 2), (Decomposition{3, 1, 2, 1, 0, 3, false}));
  EXPECT_EQ(decompose(5, 4, 2), (Decomposition{5, 3, 1, 0, 1, 2, false}));
  EXPECT_EQ(decompose(1, 4, 2), (Decomposition{1, 1, 0, 0, 0, 1, true}));
  EXPECT_EQ(decompose(7, 3, 3), (Decomposition{7, 1, 3, 1, 0, 4, false}));
  EXPECT_EQ(decompose(2, 2, 2), (Decomposition{2, 1, 1, 0, 1, 2, false}));
  EXPECT_EQ(code_of([] { decompose(0, 4, 2); }), ErrorCode::OutOfRange);
}

TEST(Decompose, WindowInvariants) {
  for (unsigned q : kOrders) {
    const unsigned p = prime_power(q)->first;
    const unsigned small = q / p, block = q - q / p;
    for (std::uint64_t t = 1; t <= 6 * q; ++t) {
      const Decomposition d = decompose(t, q, p);
      EXPECT_EQ(d.r + d.l * block, t);
      EXPECT_EQ(d.l_prime * p + d.r_prime, d.l);
      EXPECT_LT(d.r_prime, p);
      EXPECT_EQ(d.variables_needed, 1 + d.r_prime + p * d.l_prime);
      EXPECT_EQ(d.extension, t < small);
      if (d.extension) {
        EXPECT_EQ(d.r, t);
        EXPECT_EQ(d.l, 0u);
      } else {
        EXPECT_GE(d.r, small);
        EXPECT_LE(d.r, q - 1);
      }
    }
  }
}

TEST(ConstraintForDegree, WindowTargetIsPlainVandermonde) {
  for (unsigned q : {3u, 4u, 5u, 8u, 9u}) {
    Field f = Field::of_order(q);
    for (unsigned t = q / f.p(); t <= q - 1; ++t) {
      if (t == 0) continue;
      const Constraint c = constraint_for_degree(t, f, 2);
      EXPECT_EQ(c.k(), t + 1u);
      EXPECT_EQ(c, pad_arity(vandermonde_constraint(f, t - 1), 2));
    }
  }
}

TEST(ConstraintForDegree, ArityMatchesPrediction) {
  for (unsigned q : {2u, 3u, 4u, 5u, 8u, 9u}) {
    Field f = Field::of_order(q);
    const unsigned p = f.p();
    const std::uint64_t core_k = core_constraint(f).k();
    for (std::uint64_t t = 1; t <= 2 * q; ++t) {
      const Decomposition dec = decompose(t, q, p);
      if (dec.variables_needed > 6) continue;
      const Constraint c = constraint_for_degree(t, f, dec.variables_needed);
      EXPECT_EQ(c.k(), predicted_arity(dec, q, p, core_k)) << q << " " << t;
      EXPECT_EQ(c.n(), dec.variables_needed);
    }
  }
}

// Independent check on tiny cases: slow per-monomial sums over all monomials.
TEST(ConstraintForDegree, AcceptsBelowRejectsCanonicalSlow) {
  for (unsigned q : {2u, 3u, 4u}) {
    Field f = Field::of_order(q);
    const unsigned p = f.p();
    for (std::uint64_t t = 1; t <= 2 * q; ++t) {
      const Decomposition dec = decompose(t, q, p);
      if (dec.variables_needed > 4) continue;
      const std::size_t n = dec.variables_needed;
      const Constraint c = constraint_for_degree(t, f, n);
      for (const auto& e : oracle::all_vectors(n, q))
        if (oracle::sum(e) < t) {
          ASSERT_TRUE(oracle::accepts(c, e)) << q << " " << t;
        }
      EXPECT_FALSE(oracle::accepts(c, padded(canonical_monomial(t, q, p), n))) << q << " " << t;
    }
  }
}

TEST(ConstraintForDegree, AcceptsBelowRejectsCanonicalSweep) {
  for (unsigned q : {2u, 3u, 4u, 5u, 8u, 9u}) {
    Field f = Field::of_order(q);
    const unsigned p = f.p();
    for (std::uint64_t t = 1; t <= 3 * q; ++t) {
      const Decomposition dec = decompose(t, q, p);
      if (dec.variables_needed > 7) continue;
      const std::size_t n = dec.variables_needed + 1;
      const Constraint c = constraint_for_degree(t, f, n);
      EXPECT_TRUE(accepts_all_below(c, t - 1)) << q << " " << t;
      EXPECT_FALSE(accepts_monomial(c, padded(canonical_monomial(t, q, p), n))) << q << " " << t;
    }
  }
}

TEST(ConstraintForDegree, ArityTooSmall) {
  Field f = Field::of_order(2);
  try {
    constraint_for_degree(3, f, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ArityTooSmall);
    EXPECT_NE(std::string(e.what()).find("needs n >= 3"), std::string::npos);
  }
}

TEST(RmConstraint, Examples) {
  Field f2 = Field::of_order(2), f4 = Field::of_order(4), f3 = Field::of_order(3);
  const RmBuild b = build_rm(2, 1, f2);
  EXPECT_EQ(b.k, 4u);
  EXPECT_EQ(b.b_values, (std::vector<std::uint64_t>{2, 2}));
  EXPECT_EQ(b.parts.size(), 1u);
  EXPECT_TRUE(accepts_all_below(b.constraint, 1));
  EXPECT_FALSE(accepts_monomial(b.constraint, DegreeVector{1, 1}));

  // d = 2 over F_4: b = (3, 4, 4), targets 3 and 4
  const RmBuild b4 = build_rm(2, 2, f4);
  EXPECT_EQ(distinct_targets(2, 2, 2), (std::vector<std::uint64_t>{3, 4}));
  EXPECT_EQ(b4.parts.size(), 2u);
  EXPECT_EQ(b4.k, 4u + 9u);
  EXPECT_TRUE(accepts_all_below(b4.constraint, 2));
  EXPECT_FALSE(accepts_monomial(b4.constraint, DegreeVector{3, 0}));
  EXPECT_FALSE(accepts_monomial(b4.constraint, DegreeVector{2, 2}));

  // b = (2, 3): a 3-point Vandermonde plus 3 x 2 for x1 x2^2
  const RmBuild b3 = build_rm(2, 1, f3);
  EXPECT_EQ(b3.k, 9u);
  EXPECT_TRUE(accepts_all_below(b3.constraint, 1));
  EXPECT_FALSE(accepts_monomial(b3.constraint, DegreeVector{2, 0}));
  EXPECT_FALSE(accepts_monomial(b3.constraint, DegreeVector{1, 2}));

  EXPECT_EQ(rm_constraint(2, 1, f2), b.constraint);
  EXPECT_EQ(code_of([&] { build_rm(1, 1, f2); }), ErrorCode::ArityTooSmall);
}

TEST(RmConstraint, BValuesDigitFormula) {
  for (unsigned q : kOrders) {
    const auto [p, s] = *prime_power(q);
    for (std::uint64_t d = 0; d <= 4 * q; ++d) {
      const auto b = b_values(d, p, s);
      ASSERT_EQ(b.size(), s + 1u);
      std::uint64_t pi = 1;
      for (unsigned i = 0; i <= s; ++i, pi *= p) {
        std::uint64_t high = 0, pj = pi;
        for (auto digit = oracle::BigInt(d / pi); digit > 0; digit /= p, pj *= p)
          high += static_cast<std::uint64_t>(digit % p) * pj;
        EXPECT_EQ(b[i], pi + high);
        EXPECT_GT(b[i], d);
      }
    }
  }
}

TEST(ArityRequired, Examples) {
  EXPECT_EQ(arity_required(1, 2, 2, 1), 2u);
  EXPECT_EQ(arity_required(7, 2, 2, 1), 8u);
  EXPECT_EQ(arity_required(2, 4, 2, 2), 2u);
  EXPECT_EQ(arity_required(0, 3, 3, 1), 2u);
}

TEST(ArityRequired, MonotoneInDegree) {
  for (unsigned q : kOrders) {
    const auto [p, s] = *prime_power(q);
    std::size_t prev = 0;
    for (std::uint64_t d = 0; d <= 64; ++d) {
      const std::size_t need = arity_required(d, q, p, s);
      EXPECT_GE(need, prev) << q << " " << d;
      prev = need;
    }
  }
}

// Completeness: every monomial in Deg is accepted; each part rejects its
// canonical monomial; bounds hold exactly.
TEST(RmConstraint, CompletenessAndBoundsSweep) {
  for (unsigned q : {2u, 3u, 4u, 8u, 9u}) {
    Field f = Field::of_order(q);
    const unsigned p = f.p();
    for (std::uint64_t d = 0; d <= 2 * q; ++d) {
      const std::size_t n = arity_required(d, q, p, f.s());
      if (n > 8) continue;
      const RmBuild b = build_rm(n, d, f);
      EXPECT_TRUE(accepts_all_below(b.constraint, d)) << q << " " << d;
      for (const auto& part : b.parts)
        EXPECT_FALSE(accepts_monomial(b.constraint, padded(canonical_monomial(part.decomposition.target, q, p), n)));
      EXPECT_TRUE(b.bound_satisfied) << q << " " << d;
      for (const auto& part : b.parts) EXPECT_TRUE(part.bound_satisfied) << q << " " << d;
      std::uint64_t total = 0;
      for (const auto& part : b.parts) total += part.k;
      EXPECT_EQ(total, b.k);
    }
  }
}

TEST(Bounds, ExactCheckAgreesWithFloatingPoint) {
  for (unsigned q : {2u, 3u, 4u, 8u, 9u}) {
    const unsigned p = prime_power(q)->first;
    for (std::uint64_t t = 1; t <= 3 * q; ++t) {
      const double bound = degree_constraint_bound(t, q, p);
      const auto below = static_cast<std::uint64_t>(std::floor(bound * (1 - 1e-9)));
      const auto above = static_cast<std::uint64_t>(std::ceil(bound * (1 + 1e-9)));
      EXPECT_TRUE(degree_constraint_bound_holds(below, t, q, p)) << q << " " << t;
      if (above > bound) {
        EXPECT_FALSE(degree_constraint_bound_holds(above, t, q, p)) << q << " " << t;
      }
      const double full = rm_constraint_bound(t, q, p);
      EXPECT_TRUE(rm_constraint_bound_holds(static_cast<std::uint64_t>(full * (1 - 1e-9)), t, q, p));
      EXPECT_FALSE(rm_constraint_bound_holds(static_cast<std::uint64_t>(full * (1 + 1e-9)) + 1, t, q, p));
    }
  }
  EXPECT_TRUE(simple_bound_holds(1, 0, 2));
  EXPECT_NEAR(simple_bound(1, 2), 3 * 16 * 6.0, 1e-9);
}

// Odd d has the single target d+1 and k = 2^{d+1}; even d adds target d+2.
TEST(Bounds, BinaryArityNearTwoToTheDPlusOne) {
  Field f = Field::of_order(2);
  for (std::uint64_t d = 0; d <= 7; ++d) {
    const RmBuild b = build_rm(arity_required(d, 2, 2, 1), d, f);
    const std::uint64_t ref = std::uint64_t{1} << (d + 1);
    EXPECT_EQ(b.k, d % 2 ? ref : 3 * ref) << d;
    EXPECT_TRUE(b.simple_bound_satisfied);
  }
}
