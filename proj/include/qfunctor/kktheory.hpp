// K0 and KK classes of finite-dimensional C*-algebras as integer matrices.
#pragma once

#include <string>
#include <vector>

#include "qfunctor/hilbmod.hpp"

namespace qf {

struct K0Group {
  int rank = 0;
  /// Size of the block whose minimal projection generates each summand.
  std::vector<int> block_sizes;
};

K0Group k0(const FinCStar& a);

/// Hom(K0(A), K0(B)): matrix[i][j] is the coefficient of the j-th generator
/// of K0(B) in the image of the i-th generator of K0(A).
struct KKClass {
  int src_blocks = 0;
  int dst_blocks = 0;
  IntMatrix matrix;

  friend bool operator==(const KKClass&, const KKClass&) = default;
};

KKClass kk_class(const HilbertBimodule& e);
KKClass kk_identity(int blocks);
KKClass kk_zero(int src_blocks, int dst_blocks);
KKClass operator+(const KKClass& x, const KKClass& y);
KKClass operator-(const KKClass& x);

/// Composite A -> B -> C; throws TypeMismatch when the middle ranks differ.
KKClass intersection(const KKClass& x, const KKClass& y);

Integer kk_determinant(const KKClass& x);
/// Square with determinant +-1.
bool kk_invertible(const KKClass& x);

struct KIsoReport {
  bool invertible = false;
  int src_rank = 0;
  int dst_rank = 0;
  bool ok() const { return !invertible || src_rank == dst_rank; }
};

KIsoReport k_iso_check(const KKClass& x);

std::string to_string(const KKClass& x);

}  // namespace qf
