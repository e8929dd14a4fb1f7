// Seeded generators for the randomized regression corpora.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qfunctor/groupoid.hpp"
#include "qfunctor/hilbmod.hpp"

namespace qf {

/// Cayley tables of Z1, Z2, Z3, Z4, Z2xZ2, S3.
const std::vector<std::vector<std::vector<int>>>& small_groups();
const std::vector<std::string>& small_group_names();
/// Every homomorphism small_groups()[from] -> small_groups()[to].
std::vector<std::vector<int>> group_homomorphisms(int from, int to);

/// A disjoint union of connected blocks pair(objects) x group.
struct BlockGroupoid {
  struct Block {
    int objects;
    int group;
  };
  std::vector<Block> blocks;
  FiniteGroupoid g;
  std::string name() const;
};

BlockGroupoid block_groupoid(std::vector<BlockGroupoid::Block> blocks);
BlockGroupoid random_block_groupoid(std::mt19937_64& rng, int max_blocks, int max_objects);

/// A random functor: each block goes to a random block with a random object
/// map and a random group homomorphism.
GroupoidFunctor random_functor(std::mt19937_64& rng, const BlockGroupoid& g, const BlockGroupoid& h);
/// An equivalence of categories: blocks matched bijectively with isomorphic
/// groups, surjective object maps and group automorphisms. Requires that h
/// has as many blocks as g with the same groups in the same order.
GroupoidFunctor random_equivalence(std::mt19937_64& rng, const BlockGroupoid& g, const BlockGroupoid& h);

struct BibundleCase {
  std::string name;
  Bibundle m;
};

struct ComposableCase {
  std::string name;
  Bibundle m;
  Bibundle n;
};

/// Composable principal pairs with carriers (and composite) at most
/// max_carrier: functor bibundles, reversed equivalences, and mixtures.
std::vector<ComposableCase> functoriality_corpus(std::uint64_t seed, int count, int max_carrier = 40);
/// Biprincipal bibundles (equivalences and their reverses).
std::vector<BibundleCase> biprincipal_corpus(std::uint64_t seed, int count, int max_carrier = 40);

/// Direct sum over (i, j) of m[i][j] copies of C^{n_i} (x) conj(C^{n_j}) for
/// block algebras a = block_algebra(sa), b = block_algebra(sb).
HilbertBimodule standard_bimodule(const AlgebraPtr& a, const std::vector<int>& sa, const AlgebraPtr& b,
                                  const std::vector<int>& sb, const IntMatrix& m);

/// Random invertible matrix with small complex-rational entries.
std::vector<DenseVec> random_invertible(std::mt19937_64& rng, int n);

struct BimodulePairCase {
  std::string name;
  HilbertBimodule e;  // A-B
  HilbertBimodule f;  // B-C
};

/// Composable bimodule pairs: standard bimodules in scrambled bases over
/// block algebras, plus quantized functor bibundles.
std::vector<BimodulePairCase> kk_corpus(std::uint64_t seed, int count);

struct SmallBimoduleFamily {
  std::string name;
  std::vector<HilbertBimodule> members;  // all over the same algebra pair
};

/// All bimodules of carrier dimension <= max_dim over a few algebra pairs,
/// with scrambled copies, plus small quantized bibundles.
std::vector<SmallBimoduleFamily> small_bimodule_corpus(std::uint64_t seed, int max_dim = 6);

}  // namespace qf
