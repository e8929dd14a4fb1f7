#include <gtest/gtest.h>

#include <memory>

#include "qfunctor/corpus.hpp"
#include "qfunctor/errors.hpp"
#include "qfunctor/hilbmod.hpp"
#include "qfunctor/kernels.hpp"
#include "qfunctor/quantfunctor.hpp"

using namespace qf;

namespace {

AlgebraPtr blocks(std::vector<int> sizes) { return std::make_shared<const FinCStar>(block_algebra(sizes)); }

std::string axiom_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const AxiomError& e) {
    return e.axiom;
  }
  return "";
}

}  // namespace

TEST(Bimodule, CanonicalIsImprimitivity) {
  const auto a = quantize_object(product(pair_groupoid(2), cyclic_group(3)));
  const HilbertBimodule e = canonical_bimodule(a);
  const auto m = multiplicity_matrix(e);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) EXPECT_EQ(m[i][j], i == j ? 1 : 0);
  const auto r = morita_report(e);
  EXPECT_TRUE(r.equivalence());
  EXPECT_TRUE(r.permutation);
}

TEST(Bimodule, StandardMultiplicities) {
  const auto a = blocks({2, 1}), b = blocks({3, 1});
  const IntMatrix m{{1, 0}, {2, 1}};
  const HilbertBimodule e = standard_bimodule(a, {2, 1}, b, {3, 1}, m);
  EXPECT_EQ(e.dim, 2 * 3 + 2 * 3 + 1);
  EXPECT_EQ(multiplicity_matrix(e), m);
}

TEST(Bimodule, AxiomViolationsAreNamed) {
  const auto a = blocks({2});
  const HilbertBimodule e = canonical_bimodule(a);
  auto neg = e.ip;
  for (auto& v : neg) v = scaled(v, Cq(-1));
  EXPECT_EQ(axiom_of([&] { make_bimodule(a, a, e.lact, e.ract, neg); }), "positivity");

  auto skew = e.ip;
  skew[1] = scaled(skew[1], Cq::i());
  EXPECT_EQ(axiom_of([&] { make_bimodule(a, a, e.lact, e.ract, skew); }), "hermitian");

  auto lact = e.lact;
  std::swap(lact[0], lact[1]);
  EXPECT_EQ(axiom_of([&] { make_bimodule(a, a, lact, e.ract, e.ip); }), "left action");

  std::vector<SparseVec> zero(e.ip.size());
  EXPECT_EQ(axiom_of([&] { make_bimodule(a, a, e.lact, e.ract, zero); }), "definite");
}

TEST(Bimodule, ScrambledCopyIsUnitarilyEquivalent) {
  std::mt19937_64 rng(17);
  const auto a = blocks({2, 1}), b = blocks({1, 2});
  const HilbertBimodule e = standard_bimodule(a, {2, 1}, b, {1, 2}, {{1, 1}, {0, 2}});
  const HilbertBimodule f = transform_carrier(e, random_invertible(rng, e.dim));
  EXPECT_EQ(multiplicity_matrix(f), multiplicity_matrix(e));
  const auto u = unitary_equivalent(e, f);
  ASSERT_TRUE(u);
  EXPECT_LT(u->residual, 1e-9);
  EXPECT_LT(intertwiner_residual(e, f, u->unitary), 1e-9);
}

TEST(Bimodule, DifferentMultiplicitiesAreInequivalent) {
  const auto a = blocks({1, 1}), b = blocks({1});
  const HilbertBimodule e = standard_bimodule(a, {1, 1}, b, {1}, {{1}, {1}});
  const HilbertBimodule f = standard_bimodule(a, {1, 1}, b, {1}, {{2}, {0}});
  EXPECT_EQ(e.dim, f.dim);
  EXPECT_FALSE(unitary_equivalent(e, f));
  EXPECT_FALSE(brute_force_unitary(e, f));
}

TEST(Bimodule, BruteForceAgreesOnSmallFamilies) {
  const auto corpus = small_bimodule_corpus(5, 4);
  int compared = 0;
  for (const auto& fam : corpus) {
    if (fam.members.size() > 6) continue;
    for (const auto& e : fam.members)
      for (const auto& f : fam.members) {
        EXPECT_EQ(unitary_equivalent(e, f).has_value(), brute_force_unitary(e, f).has_value()) << fam.name;
        ++compared;
      }
    if (compared > 150) break;
  }
  EXPECT_GT(compared, 20);
}

TEST(Bimodule, TensorWithCanonicalIsIdentity) {
  std::mt19937_64 rng(2);
  const auto a = blocks({2, 1}), b = blocks({1, 2});
  const HilbertBimodule e = transform_carrier(standard_bimodule(a, {2, 1}, b, {1, 2}, {{1, 0}, {1, 1}}),
                                              random_invertible(rng, 5));
  const HilbertBimodule t = interior_tensor(e, canonical_bimodule(b));
  EXPECT_EQ(t.dim, e.dim);
  EXPECT_TRUE(unitary_equivalent(t, e).has_value());
  const HilbertBimodule s = interior_tensor(canonical_bimodule(a), e);
  EXPECT_TRUE(unitary_equivalent(s, e).has_value());
}

TEST(Bimodule, TensorMultipliesMultiplicities) {
  const auto a = blocks({1, 2}), b = blocks({2, 1}), c = blocks({1, 1});
  const IntMatrix m{{1, 1}, {0, 1}}, n{{1, 0}, {2, 1}};
  const HilbertBimodule e = standard_bimodule(a, {1, 2}, b, {2, 1}, m);
  const HilbertBimodule f = standard_bimodule(b, {2, 1}, c, {1, 1}, n);
  const HilbertBimodule t = interior_tensor(e, f);
  // rows follow the descending block order of A
  EXPECT_EQ(multiplicity_matrix(t), (IntMatrix{{2, 1}, {3, 1}}));
}

TEST(Bimodule, DirectSumAddsMultiplicities) {
  const auto a = blocks({2}), b = blocks({1, 1});
  const HilbertBimodule e = standard_bimodule(a, {2}, b, {1, 1}, {{1, 0}});
  const HilbertBimodule f = standard_bimodule(a, {2}, b, {1, 1}, {{0, 2}});
  EXPECT_EQ(multiplicity_matrix(direct_sum(e, f)), (IntMatrix{{1, 2}}));
}

TEST(Bimodule, TensorRequiresMatchingMiddle) {
  const auto a = blocks({1}), b = blocks({2});
  const HilbertBimodule e = canonical_bimodule(a), f = canonical_bimodule(b);
  EXPECT_THROW(interior_tensor(e, f), TypeMismatch);
}

TEST(Morita, NonFullBimoduleIsNotAnEquivalence) {
  const auto a = blocks({1}), b = blocks({1, 1});
  const HilbertBimodule e = standard_bimodule(a, {1}, b, {1, 1}, {{1, 0}});
  const auto r = morita_report(e);
  EXPECT_FALSE(r.full);
  EXPECT_FALSE(r.equivalence());
  EXPECT_FALSE(is_morita_equivalence(e));
  const HilbertBimodule twice = standard_bimodule(a, {1}, b, {1, 1}, {{1, 1}});
  EXPECT_TRUE(morita_report(twice).full);
  EXPECT_FALSE(morita_report(twice).onto_compacts);
}

TEST(Kernels, InteriorTensorParallelMatchesSerial) {
  for (const auto& c : kk_corpus(11, 8)) EXPECT_TRUE(identical(interior_tensor(c.e, c.f), interior_tensor_serial(c.e, c.f))) << c.name;
}
