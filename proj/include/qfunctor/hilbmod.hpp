// Finite-dimensional Hilbert bimodules, interior tensor products, and
// unitary/Morita equivalence.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfunctor/cstar.hpp"

namespace qf {

using IntMatrix = std::vector<std::vector<long long>>;

/// An A-B bimodule on C^dim with B-valued inner product, conjugate-linear in
/// the first slot. All tables are exact.
struct HilbertBimodule {
  AlgebraPtr left;
  AlgebraPtr right;
  int dim = 0;
  /// lact[i]: action of the i-th basis element of A.
  std::vector<SparseMatrix> lact;
  /// ract[j]: column k holds e_k . b_j.
  std::vector<SparseMatrix> ract;
  /// ip[k * dim + l] = <e_k, e_l> in the basis of B.
  std::vector<SparseVec> ip;

  const SparseVec& inner(int k, int l) const { return ip[static_cast<size_t>(k) * dim + l]; }
  SparseVec inner(const DenseVec& x, const DenseVec& y) const;
  DenseVec act_left(const DenseVec& a, const DenseVec& x) const;
  DenseVec act_right(const DenseVec& x, const DenseVec& b) const;

  /// Dense complex forms of the action matrices.
  CMatrix left_matrix(const CVector& a) const;
  CMatrix right_matrix(const CVector& b) const;
};

/// Checks every axiom and throws AxiomError naming the first one violated.
HilbertBimodule make_bimodule(AlgebraPtr a, AlgebraPtr b, std::vector<SparseMatrix> lact,
                              std::vector<SparseMatrix> ract, std::vector<SparseVec> ip,
                              double tolerance = 1e-9);

/// A as an A-A bimodule with <a, b> = a^* b.
HilbertBimodule canonical_bimodule(const AlgebraPtr& a);

HilbertBimodule direct_sum(const HilbertBimodule& e, const HilbertBimodule& f);

/// Same bimodule in the carrier basis e'_t = sum_s p[s][t] e_s (p invertible).
HilbertBimodule transform_carrier(const HilbertBimodule& e, const std::vector<DenseVec>& p);

/// m[i][j] = multiplicity of (A-block i) x (B-block j) in E.
IntMatrix multiplicity_matrix(const HilbertBimodule& e);

/// E (x)_B F modulo the null space of the induced C-valued inner product.
HilbertBimodule interior_tensor(const HilbertBimodule& e, const HilbertBimodule& f);

struct Intertwiner {
  CMatrix unitary;   // coordinates of E -> coordinates of F
  double residual;   // worst defect in actions and inner products
};

/// Decided by equality of multiplicity matrices; the witness is assembled
/// from matrix-unit frames of both sides and then checked.
std::optional<Intertwiner> unitary_equivalent(const HilbertBimodule& e, const HilbertBimodule& f);

/// Exhaustive route: solves the linear intertwining equations exactly, looks
/// for an invertible solution, then polar-decomposes it into a unitary.
/// Intended for small carriers.
std::optional<Intertwiner> brute_force_unitary(const HilbertBimodule& e, const HilbertBimodule& f,
                                               unsigned long long seed = 1);

/// Largest defect of `u` as a unitary bimodule map E -> F.
double intertwiner_residual(const HilbertBimodule& e, const HilbertBimodule& f, const CMatrix& u);

struct MoritaReport {
  bool full = false;          // span of inner products is all of B
  bool injective = false;     // A acts faithfully
  bool onto_compacts = false; // L(A) = span{theta_{x,y}}
  bool permutation = false;   // multiplicity matrix is a permutation matrix
  bool equivalence() const { return full && injective && onto_compacts; }
};

MoritaReport morita_report(const HilbertBimodule& e);
bool is_morita_equivalence(const HilbertBimodule& e);

}  // namespace qf
