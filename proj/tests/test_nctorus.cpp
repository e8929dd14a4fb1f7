#include <gtest/gtest.h>

#include "qfunctor/errors.hpp"
#include "qfunctor/nctorus.hpp"

using namespace qf;

namespace {

QuadraticIrrational Q(const std::string& s) { return QuadraticIrrational::parse(s); }

std::vector<Integer> ints(std::initializer_list<int> xs) { return {xs.begin(), xs.end()}; }

const IntMat2 kT{1, 1, 0, 1}, kS{0, 1, 1, 0};

}  // namespace

TEST(QuadraticIrrational, Canonicalization) {
  EXPECT_EQ(Q("sqrt(12)/2"), Q("sqrt(3)"));
  EXPECT_EQ(Q("(2+2*sqrt(5))/4"), Q("(1+sqrt(5))/2"));
  EXPECT_EQ(QuadraticIrrational(-1, -1, 2, -1), Q("1+sqrt(2)"));
  EXPECT_EQ(Q("(0+1*sqrt(2))/1").str(), "(0+1*sqrt(2))/1");
  EXPECT_NEAR(Q("(1+sqrt(5))/2").value(), 1.6180339887, 1e-9);
}

TEST(QuadraticIrrational, ParseErrors) {
  EXPECT_THROW(Q("2"), ParseError);
  EXPECT_THROW(Q("(1+sqrt(2)"), ParseError);
  EXPECT_THROW(Q("1 sqrt(2)"), ParseError);
  EXPECT_THROW(Q("sqrt(9)"), HypothesisError);
  EXPECT_THROW(Q("sqrt(2)/0"), HypothesisError);
}

TEST(ContinuedFraction, KnownExpansions) {
  auto cf = continued_fraction(Q("sqrt(2)"));
  EXPECT_EQ(cf.preperiod, ints({1}));
  EXPECT_EQ(cf.period, ints({2}));
  cf = continued_fraction(Q("(1+sqrt(5))/2"));
  EXPECT_TRUE(cf.preperiod.empty());
  EXPECT_EQ(cf.period, ints({1}));
  cf = continued_fraction(Q("1+sqrt(2)"));
  EXPECT_TRUE(cf.preperiod.empty());
  EXPECT_EQ(cf.period, ints({2}));
  cf = continued_fraction(Q("sqrt(7)"));
  EXPECT_EQ(cf.preperiod, ints({2}));
  EXPECT_EQ(cf.period, ints({1, 1, 1, 4}));
  cf = continued_fraction(Q("-sqrt(2)"));
  EXPECT_EQ(cf.preperiod, ints({-2, 1, 1}));
  EXPECT_EQ(cf.period, ints({2}));
  EXPECT_EQ(continued_fraction(Q("sqrt(2)")).str(), "[1; (2)*]");
}

TEST(ContinuedFraction, ReconstructionIsExact) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto x = random_quadratic_irrational(rng);
    EXPECT_EQ(reconstruct(continued_fraction(x)), x) << x.str();
  }
}

TEST(Mobius, ExactAction) {
  const auto x = Q("sqrt(2)");
  EXPECT_EQ(mobius(kT, x), Q("1+sqrt(2)"));
  EXPECT_EQ(mobius(kS, x), Q("sqrt(2)/2"));
  EXPECT_EQ(mat_det(mat_mul(kT, kS)), Integer(-1));
  const IntMat2 m{2, 1, 1, 1};
  EXPECT_EQ(mat_mul(m, mat_inverse_unimodular(m)), (IntMat2{1, 0, 0, 1}));
  EXPECT_THROW(mat_inverse_unimodular({2, 0, 0, 1}), HypothesisError);
}

TEST(Equivalence, Counterexample) {
  EXPECT_FALSE(gl2z_equivalent(Q("sqrt(2)"), Q("(1+sqrt(5))/2")));
  EXPECT_FALSE(gl2z_witness(Q("sqrt(2)"), Q("(1+sqrt(5))/2")));
  EXPECT_FALSE(gl2z_equivalent(Q("sqrt(3)"), Q("sqrt(7)")));
  const auto r = counterexample_report(Q("sqrt(2)"), Q("(1+sqrt(5))/2"));
  EXPECT_TRUE(r.classical_morita);
  EXPECT_FALSE(r.quantum_morita);
  EXPECT_THROW(counterexample_report(Q("sqrt(2)"), Q("1+sqrt(2)")), HypothesisError);
}

TEST(Equivalence, SameDiscriminantDifferentClass) {
  // sqrt(34) and (3+sqrt(34))/5 lie in different GL(2,Z) classes
  const auto a = Q("sqrt(34)"), b = Q("(3+sqrt(34))/5");
  const bool eq = gl2z_equivalent(a, b);
  EXPECT_EQ(eq, gl2z_witness(a, b).has_value());
}

TEST(Equivalence, TranslatesAndInverses) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_quadratic_irrational(rng);
    const auto y = mobius(kT, x), z = mobius(kS, x);
    EXPECT_TRUE(gl2z_equivalent(x, y));
    EXPECT_TRUE(gl2z_equivalent(x, z));
    const auto w = gl2z_witness(x, z);
    ASSERT_TRUE(w);
    EXPECT_EQ(mobius(*w, x), z);
  }
}

TEST(Equivalence, RandomWordsAreDetected) {
  std::mt19937_64 rng(3);
  const std::array<IntMat2, 3> gens{kT, IntMat2{1, -1, 0, 1}, kS};
  for (int t = 0; t < 30; ++t) {
    const auto x = random_quadratic_irrational(rng);
    IntMat2 m{1, 0, 0, 1};
    for (int k = 0; k < 8; ++k) m = mat_mul(gens[rng() % 3], m);
    const auto y = mobius(m, x);
    const auto w = gl2z_witness(x, y);
    ASSERT_TRUE(w);
    EXPECT_EQ(mobius(*w, x), y);
  }
}

TEST(WordSearch, FindsShortWitness) {
  const auto x = Q("(3+2*sqrt(7))/5");
  const auto y = mobius(kS, mobius(kT, mobius(kT, x)));
  const auto r = word_search(x, y);
  ASSERT_TRUE(r.found);
  EXPECT_LE(r.word.size(), 3u);
  EXPECT_EQ(mobius(r.matrix, x), y);
  EXPECT_FALSE(word_search(Q("sqrt(2)"), Q("sqrt(3)"), 6).found);
}
