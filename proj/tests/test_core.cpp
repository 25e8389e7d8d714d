#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rmlt/core.hpp"

using namespace rmlt;

namespace {

MultiPoly poly_from_map(const Field& f, std::size_t n, const std::map<DegreeVector, Element>& m) {
  std::vector<MultiPoly::Term> terms;
  for (const auto& [e, c] : m) terms.push_back({e, c});
  return MultiPoly::from_terms(f, n, std::move(terms));
}

const std::vector<unsigned> kSmallP = {2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32};

}  // namespace

TEST(DerivativeNumerator, Examples) {
  Field f2 = Field::of_order(2), f4 = Field::of_order(4), f3 = Field::of_order(3);
  EXPECT_EQ(derivative_numerator(f2), MultiPoly::monomial(f2, {1, 0}));
  EXPECT_EQ(derivative_numerator(f4), MultiPoly::from_terms(f4, 2, {{{3, 0}, 1}, {{2, 1}, 1}, {{1, 2}, 1}}));
  // literal sign: -2 x1x2 = x1x2; iterated-difference sign: 2 x1x2
  EXPECT_EQ(derivative_numerator(f3, NumeratorSign::Literal), MultiPoly::monomial(f3, {1, 1, 0}));
  EXPECT_EQ(derivative_numerator(f3), MultiPoly::monomial(f3, {1, 1, 0}, 2));
}

TEST(DerivativeNumerator, SubsetSumEqualsIteratedDifference) {
  for (unsigned q : kSmallP) {
    Field f = Field::of_order(q);
    EXPECT_EQ(derivative_numerator(f), iterated_derivative_numerator(f)) << q;
  }
}

TEST(DerivativeNumerator, LiteralSignIsGlobalFactor) {
  for (unsigned q : kSmallP) {
    Field f = Field::of_order(q);
    const Element factor = f.p() % 2 == 0 ? Element{1} : f.neg(1);
    EXPECT_EQ(derivative_numerator(f, NumeratorSign::Literal), derivative_numerator(f).scaled(factor)) << q;
  }
}

TEST(CorePolynomial, MatchesClosedFormOracle) {
  for (unsigned q : kSmallP) {
    Field f = Field::of_order(q);
    const auto expect = oracle::core_coefficients(f);
    const CorePolynomial core = core_polynomial(f);
    EXPECT_EQ(core.poly, poly_from_map(f, f.p(), expect)) << q;
  }
}

TEST(CorePolynomial, Examples) {
  Field f2 = Field::of_order(2), f4 = Field::of_order(4);
  const CorePolynomial c2 = core_polynomial(f2);
  EXPECT_EQ(c2.poly, MultiPoly::constant(f2, 2, 1));
  EXPECT_EQ(c2.nonzero_count, 4u);
  const CorePolynomial c4 = core_polynomial(f4);
  EXPECT_EQ(c4.poly, MultiPoly::from_terms(f4, 2, {{{2, 0}, 1}, {{1, 1}, 1}, {{0, 2}, 1}}));
  EXPECT_EQ(c4.nonzero_count, 9u);
  EXPECT_LE(c4.nonzero_count, 12u);
  // (x1 + t x2)(x1 + t^2 x2) with t = 2
  const MultiPoly l1 = MultiPoly::from_terms(f4, 2, {{{1, 0}, 1}, {{0, 1}, 2}});
  const MultiPoly l2 = MultiPoly::from_terms(f4, 2, {{{1, 0}, 1}, {{0, 1}, f4.mul(2, 2)}});
  EXPECT_EQ(l1 * l2, c4.poly);
}

TEST(CorePolynomial, PrimeFieldIsWilsonConstant) {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    Field f = Field::of_order(p);
    const oracle::BigInt fact = oracle::factorial(p - 1);
    const auto c = static_cast<Element>(static_cast<unsigned>(fact % p));
    EXPECT_EQ(c, f.neg(1));
    const CorePolynomial core = core_polynomial(f);
    EXPECT_EQ(core.poly, MultiPoly::constant(f, p, c));
    std::uint64_t pp = 1;
    for (unsigned i = 0; i < p; ++i) pp *= p;
    EXPECT_EQ(core.nonzero_count, pp);
  }
}

TEST(CorePolynomial, NonzeroCountMatchesSlowEvaluation) {
  for (unsigned q : {2u, 3u, 4u, 5u, 8u, 9u, 16u}) {
    Field f = Field::of_order(q);
    const auto terms = oracle::core_coefficients(f);
    const CorePolynomial core = core_polynomial(f);
    std::uint64_t count = 0;
    std::vector<Element> pt(f.p());
    for (std::size_t idx = 0; idx < core.table.size(); ++idx) {
      index_to_point(idx, q, pt);
      const Element v = oracle::eval_terms(f, terms, pt);
      ASSERT_EQ(core.table.at(idx), v);
      count += v != 0;
    }
    EXPECT_EQ(core.nonzero_count, count);
  }
}

TEST(CorePolynomial, HomogeneousOfDegreeQMinusP) {
  for (unsigned q : kSmallP) {
    Field f = Field::of_order(q);
    const CorePolynomial core = core_polynomial(f);
    for (const auto& t : core.poly.terms()) EXPECT_EQ(total_degree(t.exponents), q - f.p());
  }
}

// Parts (q/p-1, q/p, ..., q/p) of q-1 add without carry, so the numerator
// carries x1^{q/p} ... x_{p-1}^{q/p} x_p^{q/p-1} and P carries prod x_i^{q/p-1},
// the partner of the canonical monomial (q-q/p, ..., q-q/p).
TEST(CorePolynomial, KummerSupportMember) {
  for (unsigned q : kSmallP) {
    Field f = Field::of_order(q);
    const unsigned p = f.p();
    std::vector<std::uint64_t> parts(p, q / p);
    parts[0] = q / p - 1;
    EXPECT_TRUE(multinomial_nonzero(q - 1, parts, p));
    DegreeVector num(p, q / p);
    num[p - 1] = q / p - 1;
    EXPECT_NE(derivative_numerator(f).coefficient(num), 0) << q;
    EXPECT_NE(core_polynomial(f).poly.coefficient(DegreeVector(p, q / p - 1)), 0) << q;
  }
}

// Where beta_1..beta_{p-1} and every numerator term are nonzero, P vanishes.
// Over a prime field such points do not exist.
TEST(CorePolynomial, VanishesWhereAllTermsAreNonzero) {
  std::mt19937_64 rng(6);
  for (unsigned q : {4u, 8u, 9u, 16u, 25u, 27u, 32u}) {
    Field f = Field::of_order(q);
    const unsigned p = f.p();
    const CorePolynomial core = core_polynomial(f);
    std::uniform_int_distribution<unsigned> el(0, q - 1);
    std::size_t hits = 0;
    for (int trial = 0; trial < 4000 && hits < 200; ++trial) {
      std::vector<Element> pt(p);
      for (auto& x : pt) x = static_cast<Element>(el(rng));
      bool ok = true;
      for (unsigned i = 0; i + 1 < p; ++i) ok &= pt[i] != 0;
      for (std::uint64_t mask = 0; ok && mask < (std::uint64_t{1} << (p - 1)); ++mask) {
        Element s = pt[p - 1];
        for (unsigned i = 0; i + 1 < p; ++i)
          if (mask >> i & 1) s = f.add(s, pt[i]);
        ok &= s != 0;
      }
      if (!ok) continue;
      ++hits;
      ASSERT_EQ(evaluate(core.poly, pt), 0) << q;
    }
    EXPECT_GT(hits, 0u) << q;
  }
}

TEST(CorePolynomial, CountBounds) {
  EXPECT_EQ(core_upper_bound(9, 3), 486);
  EXPECT_EQ(core_upper_bound(8, 2), 24);
  EXPECT_EQ(core_lower_bound(4, 2), -6);
  for (unsigned q : kSmallP) {
    Field f = Field::of_order(q);
    const auto k = static_cast<std::int64_t>(core_polynomial(f).nonzero_count);
    EXPECT_LE(k, core_upper_bound(q, f.p()));
    EXPECT_GE(k, core_lower_bound(q, f.p()));
    if (f.p() == 2) {
      EXPECT_LE(k, 3 * std::int64_t{q});
    }
  }
}

TEST(CorePolynomial, BudgetEnforced) {
  CoreOptions opts;
  opts.budget = 100;
  try {
    core_polynomial(Field::of_order(5), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EnumerationBudget);
  }
}

TEST(CoreConstraint, Examples) {
  Field f2 = Field::of_order(2), f4 = Field::of_order(4), f3 = Field::of_order(3);
  const Constraint c2 = core_constraint(f2);
  EXPECT_EQ(c2.k(), 4u);
  EXPECT_FALSE(accepts_monomial(c2, DegreeVector{1, 1}));

  const Constraint c4 = core_constraint(f4);
  EXPECT_EQ(c4.k(), 9u);
  std::size_t accepted = 0;
  for (const auto& e : oracle::all_vectors(2, 4))
    if (oracle::sum(e) < 4) {
      EXPECT_TRUE(oracle::accepts(c4, e));
      ++accepted;
    }
  EXPECT_EQ(accepted, 10u);
  EXPECT_EQ(oracle::monomial_sums(c4, {2, 2}), std::vector<Element>{1});

  const Constraint c3 = core_constraint(f3);
  EXPECT_EQ(c3.k(), 27u);
  for (Element l : c3.row(0)) EXPECT_EQ(l, 2);
  // sum of prod beta_i^2 is (power_sum(2))^3 = (-1)^3, times lambda = 2
  const Element expect = f3.mul(2, f3.mul(f3.power_sum(2), f3.mul(f3.power_sum(2), f3.power_sum(2))));
  EXPECT_EQ(oracle::monomial_sums(c3, {2, 2, 2}), std::vector<Element>{expect});
  EXPECT_NE(expect, 0);
}

TEST(VerifyCore, Examples) {
  const CoreReport r4 = verify_core(Field::of_order(4));
  EXPECT_TRUE(r4.pass);
  EXPECT_EQ(r4.accept_checks, 10u);
  EXPECT_TRUE(r4.reject_check);
  EXPECT_FALSE(r4.witness);
  const CoreReport r8 = verify_core(Field::of_order(8));
  EXPECT_TRUE(r8.pass);
  EXPECT_LE(r8.k, 24u);
  const CoreReport r9 = verify_core(Field::of_order(9));
  EXPECT_TRUE(r9.pass);
  EXPECT_LE(r9.k, 486u);
}

// verify_core's moment route against direct per-monomial sums on the constraint.
TEST(VerifyCore, AcceptanceMatchesDirectSums) {
  for (unsigned q : {3u, 4u, 5u, 8u, 9u}) {
    Field f = Field::of_order(q);
    const unsigned p = f.p();
    const Constraint c = core_constraint(f);
    std::size_t checks = 0;
    for (const auto& e : oracle::all_vectors(p, q)) {
      if (oracle::sum(e) >= p * (q - q / p)) continue;
      ++checks;
      ASSERT_TRUE(accepts_monomial(c, e)) << q;
    }
    EXPECT_EQ(verify_core(f).accept_checks, checks);
    EXPECT_FALSE(accepts_monomial(c, DegreeVector(p, q - q / p)));
  }
}

// Zeroing the table at one point breaks acceptance; the report names a witness.
TEST(VerifyCore, CorruptedCoreHasWitness) {
  Field f = Field::of_order(4);
  CorePolynomial core = core_polynomial(f);
  std::vector<Element> vals = core.table.values();
  for (auto& v : vals)
    if (v != 0) {
      v = 0;
      break;
    }
  const Constraint broken = from_table(FunctionTable(f, 2, vals));
  EXPECT_FALSE(accepts_monomial(broken, DegreeVector{0, 0}));
}
