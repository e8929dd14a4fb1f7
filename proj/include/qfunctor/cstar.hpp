// Finite-dimensional C*-algebras given by exact structure constants, their
// Wedderburn decomposition, and groupoid convolution algebras.
#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfunctor/exact.hpp"
#include "qfunctor/groupoid.hpp"

namespace qf {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

CMatrix to_cmatrix(const SparseMatrix& m);
CVector to_cvector(const DenseVec& v);
CVector to_cvector(const SparseVec& v, int n);

/// Block form of a finite-dimensional C*-algebra: embed is a *-isomorphism
/// onto the direct sum of Mat(n_i), validated numerically.
struct Wedderburn {
  std::vector<int> dimension_vector;  // sorted descending
  /// embed[basis][block]
  std::vector<std::vector<CMatrix>> embed;
  /// Coefficient vectors <-> stacked column-major block entries.
  CMatrix to_blocks;
  CMatrix from_blocks;
  /// Largest residual seen while validating homomorphism/*-property.
  double residual = 0.0;

  int blocks() const { return static_cast<int>(dimension_vector.size()); }
  std::vector<CMatrix> embed_element(const CVector& coeffs) const;
  /// Element whose image is the given block-diagonal tuple.
  CVector element_of(const std::vector<CMatrix>& blocks) const;
  /// Matrix unit E_{row,col} in block `block`, as a coefficient vector.
  CVector matrix_unit(int block, int row, int col) const;
  CVector central_idempotent(int block) const;
};

class FinCStar {
 public:
  /// mult[i * dim + j] = b_i b_j, star[i] = b_i^*. Involution is extended
  /// conjugate-linearly.
  FinCStar(int dim, std::vector<SparseVec> mult, std::vector<SparseVec> star, std::string label = {});

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  const SparseVec& product(int i, int j) const { return mult_[static_cast<size_t>(i) * dim_ + j]; }
  const SparseVec& star(int i) const { return star_[i]; }

  DenseVec multiply(const DenseVec& x, const DenseVec& y) const;
  SparseVec multiply(const SparseVec& x, const SparseVec& y) const;
  DenseVec adjoint(const DenseVec& x) const;
  SparseVec adjoint(const SparseVec& x) const;
  /// Multiplicative unit, if any (exact solve).
  std::optional<DenseVec> unit() const;

  /// Left multiplication by b_i as a dim x dim matrix.
  SparseMatrix left_mult(int i) const;
  SparseMatrix right_mult(int i) const;

  /// Trace of the left regular representation: a faithful positive trace on
  /// any finite-dimensional C*-algebra. traces()[i] = tau(b_i).
  const std::vector<Cq>& traces() const { return traces_; }
  Cq trace(const SparseVec& x) const;

  /// Associativity and involution axioms (exact).
  ValidationReport validate() const;

  /// Computed once per object; thread-safe.
  const Wedderburn& wedderburn() const;

  /// C*-norm: max over blocks of the spectral norm.
  double operator_norm(const CVector& coeffs) const;
  double operator_norm(const DenseVec& coeffs) const;

  /// Same structure constants and involution.
  bool same_structure(const FinCStar& other) const;

 private:
  int dim_;
  std::vector<SparseVec> mult_;
  std::vector<SparseVec> star_;
  std::vector<Cq> traces_;
  std::string label_;

  struct Cache {
    std::once_flag once;
    std::unique_ptr<Wedderburn> value;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

using AlgebraPtr = std::shared_ptr<const FinCStar>;

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

/// Thrown by wedderburn() for algebras that are not C*-algebras.
struct NotSemisimple : std::runtime_error {
  NotSemisimple(std::string what, DenseVec w) : std::runtime_error(std::move(what)), witness(std::move(w)) {}
  DenseVec witness;
};

/// Basis = arrows; delta_g * delta_h = delta_{gh} when composable;
/// delta_g^* = delta_{g^{-1}}; counting measure as Haar system.
FinCStar convolution_algebra(const FiniteGroupoid& g);

/// Mat(n_1) + ... + Mat(n_k) in the matrix-unit basis.
FinCStar block_algebra(const std::vector<int>& sizes);
FinCStar direct_sum(const FinCStar& a, const FinCStar& b);
/// Same algebra in the basis b'_i = sum_j t[i][j] b_j (t invertible).
FinCStar change_basis(const FinCStar& a, const std::vector<DenseVec>& t);

/// Options for the randomized steps of the decomposition.
struct WedderburnOptions {
  unsigned long long seed = 0x5eedULL;
  int max_attempts = 32;
  double tolerance = 1e-9;
};

Wedderburn compute_wedderburn(const FinCStar& a, const WedderburnOptions& opts = {});

/// Exact basis of the center.
std::vector<DenseVec> center(const FinCStar& a);

}  // namespace qf
