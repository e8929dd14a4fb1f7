#include <gtest/gtest.h>

#include "qfunctor/corpus.hpp"
#include "qfunctor/errors.hpp"
#include "qfunctor/kernels.hpp"
#include "qfunctor/quantfunctor.hpp"

using namespace qf;

TEST(Quantize, ObjectLabelsAndDimensions) {
  const auto g = product(pair_groupoid(2), cyclic_group(2));
  const AlgebraPtr a = quantize_object(g);
  EXPECT_EQ(a->label(), "A*(G)");
  EXPECT_EQ(a->dim(), g.n_arr());
  EXPECT_EQ(a->wedderburn().dimension_vector, (std::vector<int>{2, 2}));
}

TEST(Quantize, IdentityGoesToCanonicalBimodule) {
  for (const auto& g : {pair_groupoid(3), cyclic_group(5), group_groupoid(small_groups()[5]),
                        block_groupoid({{2, 1}, {1, 3}}).g})
    EXPECT_TRUE(check_identity(g));
}

TEST(Quantize, NonPrincipalIsOutsideHypothesis) {
  const Bibundle q = bibundle_of_functor(cyclic_group(2), trivial_groupoid(), {{0}, {0, 0}});
  EXPECT_THROW(quantize_arrow(reverse(q)), HypothesisError);
  EXPECT_NO_THROW(quantize_arrow(q));
}

TEST(Quantize, ArrowCarriesCarrierDimension) {
  const Bibundle q = bibundle_of_functor(cyclic_group(4), cyclic_group(2), {{0}, {0, 1, 0, 1}});
  const HilbertBimodule e = quantize_arrow(q);
  EXPECT_EQ(e.dim, q.carrier);
  EXPECT_EQ(e.left->dim(), 4);
  EXPECT_EQ(e.right->dim(), 2);
}

// Z2 -> trivial: C*(Z2) = C + C acts on C through the trivial character only.
TEST(Quantize, QuotientMapMultiplicities) {
  const Bibundle q = bibundle_of_functor(cyclic_group(2), trivial_groupoid(), {{0}, {0, 0}});
  const HilbertBimodule e = quantize_arrow(q);
  const auto m = multiplicity_matrix(e);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0][0] + m[1][0], 1);
}

TEST(Functoriality, WorkedEquivalencePair) {
  const auto p2 = pair_groupoid(2), pt = trivial_groupoid();
  const Bibundle m = bibundle_of_functor(p2, pt, {{0, 0}, {0, 0, 0, 0}});
  const auto r = check_functoriality(m, reverse(m));
  EXPECT_TRUE(r.ok) << r.detail;
  EXPECT_EQ(r.composite_dim, 4);
  const auto back = check_functoriality(reverse(m), m);
  EXPECT_TRUE(back.ok) << back.detail;
  EXPECT_EQ(back.composite_dim, 1);
}

TEST(Functoriality, SmallCorpus) {
  for (const auto& c : functoriality_corpus(101, 8, 24)) {
    const auto r = check_functoriality(c.m, c.n);
    EXPECT_TRUE(r.ok) << c.name << ": " << r.detail;
    ASSERT_TRUE(r.witness);
    EXPECT_LT(r.witness->residual, 1e-9);
  }
}

TEST(Functoriality, MiddleMismatchThrows) {
  const Bibundle a = identity_bibundle(cyclic_group(2)), b = identity_bibundle(cyclic_group(3));
  EXPECT_THROW(check_functoriality(a, b), TypeMismatch);
}

TEST(Morita, BiprincipalGivesImprimitivity) {
  for (const auto& c : biprincipal_corpus(33, 8, 24)) {
    const auto p = check_morita_preservation(c.m);
    EXPECT_TRUE(p.in_hypothesis);
    EXPECT_TRUE(p.ok()) << c.name;
  }
}

TEST(Morita, NonBiprincipalOutsideHypothesis) {
  const Bibundle q = bibundle_of_functor(cyclic_group(2), trivial_groupoid(), {{0}, {0, 0}});
  const auto p = check_morita_preservation(q);
  EXPECT_FALSE(p.in_hypothesis);
  EXPECT_TRUE(p.ok());
  EXPECT_FALSE(p.report.equivalence());
}
