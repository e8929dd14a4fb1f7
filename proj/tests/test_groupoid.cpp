#include <gtest/gtest.h>

#include "qfunctor/corpus.hpp"
#include "qfunctor/errors.hpp"
#include "qfunctor/groupoid.hpp"

using namespace qf;

TEST(Groupoid, PairGroupoidTables) {
  const FiniteGroupoid g = pair_groupoid(3);
  EXPECT_TRUE(validate(g).ok());
  EXPECT_EQ(g.n_arr(), 9);
  // arrow a*n+b goes from b to a
  EXPECT_EQ(g.src[2 * 3 + 1], 1);
  EXPECT_EQ(g.tgt[2 * 3 + 1], 2);
  EXPECT_EQ(g.compose(2 * 3 + 1, 1 * 3 + 0), 2 * 3 + 0);
  EXPECT_EQ(g.compose(2 * 3 + 1, 2 * 3 + 0), kUndefined);
  EXPECT_EQ(g.inv[2 * 3 + 1], 1 * 3 + 2);
}

TEST(Groupoid, ConstructorsValidate) {
  for (int m = 1; m <= 6; ++m) EXPECT_TRUE(validate(cyclic_group(m)).ok());
  for (const auto& t : small_groups()) EXPECT_TRUE(validate(group_groupoid(t)).ok());
  const auto g = product(pair_groupoid(2), cyclic_group(3));
  EXPECT_TRUE(validate(g).ok());
  EXPECT_EQ(g.n_obj, 2);
  EXPECT_EQ(g.n_arr(), 12);
  const auto u = disjoint_union(pair_groupoid(2), cyclic_group(2));
  EXPECT_TRUE(validate(u).ok());
  EXPECT_EQ(components(u).size(), 2u);
}

TEST(Groupoid, TransformationGroupoid) {
  // Z2 acting on two points by swapping
  const auto g = transformation_groupoid({{0, 1}, {1, 0}}, {{0, 1}, {1, 0}});
  EXPECT_TRUE(validate(g).ok());
  EXPECT_EQ(g.n_obj, 2);
  EXPECT_EQ(components(g).size(), 1u);
}

TEST(Groupoid, BrokenAssociativityIsReported) {
  FiniteGroupoid g = cyclic_group(3);
  std::swap(g.comp[1 * 3 + 1], g.comp[1 * 3 + 2]);
  const auto r = validate(g);
  EXPECT_FALSE(r.ok());
}

TEST(Groupoid, MalformedTablesThrow) {
  FiniteGroupoid g = pair_groupoid(2);
  g.src.pop_back();
  EXPECT_THROW(validate(g), StructureError);
  g = pair_groupoid(2);
  g.comp[0] = 17;
  EXPECT_THROW(validate(g), StructureError);
  EXPECT_THROW(group_groupoid({{0, 1}, {0, 1}}), StructureError);
}

TEST(Bibundle, IdentityIsBiprincipal) {
  for (const auto& g : {pair_groupoid(3), cyclic_group(4), product(pair_groupoid(2), cyclic_group(2))}) {
    const Bibundle id = identity_bibundle(g);
    EXPECT_TRUE(validate(id).ok());
    EXPECT_TRUE(is_biprincipal(id));
  }
}

TEST(Bibundle, FunctorBibundleIsPrincipal) {
  const auto g = pair_groupoid(2), h = trivial_groupoid();
  const Bibundle m = bibundle_of_functor(g, h, {{0, 0}, {0, 0, 0, 0}});
  EXPECT_TRUE(validate(m).ok());
  EXPECT_TRUE(is_principal(m));
  EXPECT_TRUE(is_biprincipal(m));
  // Z2 -> trivial is principal but not biprincipal
  const Bibundle q = bibundle_of_functor(cyclic_group(2), h, {{0}, {0, 0}});
  EXPECT_TRUE(is_principal(q));
  EXPECT_FALSE(is_biprincipal(q));
  EXPECT_FALSE(is_principal(reverse(q)));
}

TEST(Bibundle, RightTranslation) {
  const Bibundle id = identity_bibundle(cyclic_group(5));
  for (int m = 0; m < 5; ++m)
    for (int m2 = 0; m2 < 5; ++m2) EXPECT_EQ(id.act_right(m, right_translation(id, m, m2)), m2);
}

TEST(Bibundle, IdentityIsUnitForComposition) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_block_groupoid(rng, 2, 2), h = random_block_groupoid(rng, 2, 2);
    const Bibundle m = bibundle_of_functor(g.g, h.g, random_functor(rng, g, h));
    const Bibundle left = compose_bibundles(identity_bibundle(g.g), m);
    const Bibundle right = compose_bibundles(m, identity_bibundle(h.g));
    EXPECT_TRUE(bibundle_isomorphic(left, m).has_value());
    EXPECT_TRUE(bibundle_isomorphic(right, m).has_value());
  }
}

TEST(Bibundle, CompositionIsAssociativeUpToIsomorphism) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_block_groupoid(rng, 2, 2), b = random_block_groupoid(rng, 2, 2),
               c = random_block_groupoid(rng, 2, 2), d = random_block_groupoid(rng, 2, 2);
    const Bibundle m = bibundle_of_functor(a.g, b.g, random_functor(rng, a, b));
    const Bibundle n = bibundle_of_functor(b.g, c.g, random_functor(rng, b, c));
    const Bibundle p = bibundle_of_functor(c.g, d.g, random_functor(rng, c, d));
    const Bibundle x = compose_bibundles(compose_bibundles(m, n), p);
    const Bibundle y = compose_bibundles(m, compose_bibundles(n, p));
    EXPECT_TRUE(validate(x).ok());
    EXPECT_TRUE(is_principal(x));
    EXPECT_TRUE(bibundle_isomorphic(x, y).has_value());
  }
}

TEST(Bibundle, EquivalenceComposedWithReverseIsIdentity) {
  for (const auto& c : biprincipal_corpus(21, 6, 24)) {
    const Bibundle back = compose_bibundles(c.m, reverse(c.m));
    EXPECT_TRUE(bibundle_isomorphic(back, identity_bibundle(c.m.left)).has_value()) << c.name;
  }
}

TEST(Bibundle, ComposeRequiresPrincipalFirstFactor) {
  const auto h = trivial_groupoid();
  const Bibundle q = bibundle_of_functor(cyclic_group(2), h, {{0}, {0, 0}});
  EXPECT_THROW(compose_bibundles(reverse(q), q), HypothesisError);
  EXPECT_THROW(compose_bibundles(q, q), TypeMismatch);
}

TEST(Bibundle, RelabelIsIsomorphic) {
  const Bibundle id = identity_bibundle(pair_groupoid(2));
  const Bibundle r = relabel(id, {3, 2, 1, 0});
  EXPECT_TRUE(validate(r).ok());
  EXPECT_TRUE(bibundle_isomorphic(id, r).has_value());
  const Bibundle other = identity_bibundle(pair_groupoid(2));
  Bibundle broken = other;
  broken.lanchor[0] = 1;
  EXPECT_FALSE(validate(broken).ok());
}

TEST(Functor, Detection) {
  const auto g = cyclic_group(4), h = cyclic_group(2);
  EXPECT_TRUE(is_functor(g, h, {{0}, {0, 1, 0, 1}}));
  EXPECT_FALSE(is_functor(g, h, {{0}, {0, 1, 1, 0}}));
}

TEST(Functor, HomomorphismCounts) {
  // indices into small_groups(): Z1, Z2, Z3, Z4, Z2xZ2, S3
  EXPECT_EQ(group_homomorphisms(2, 1).size(), 1u);
  EXPECT_EQ(group_homomorphisms(3, 1).size(), 2u);
  EXPECT_EQ(group_homomorphisms(4, 1).size(), 4u);
  EXPECT_EQ(group_homomorphisms(5, 1).size(), 2u);
  EXPECT_EQ(group_homomorphisms(5, 2).size(), 1u);
  EXPECT_EQ(group_homomorphisms(1, 5).size(), 4u);
  EXPECT_EQ(group_homomorphisms(5, 5).size(), 10u);
}
