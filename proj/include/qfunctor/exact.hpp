// Exact complex-rational scalars, sparse vectors/matrices over them, and the
// handful of exact linear-algebra routines the algebraic modules share.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace qf {

using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

/// Complex number with exact rational real and imaginary parts.
class Cq {
 public:
  Cq() = default;
  Cq(int v) : re_(v) {}
  Cq(long v) : re_(v) {}
  Cq(Rational re) : re_(std::move(re)) {}
  Cq(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static Cq i() { return Cq(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  Cq conj() const { return Cq(re_, -im_); }
  Rational norm_sq() const { return re_ * re_ + im_ * im_; }

  Cq& operator+=(const Cq& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Cq& operator-=(const Cq& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Cq& operator*=(const Cq& o);
  Cq& operator/=(const Cq& o);

  friend Cq operator+(Cq a, const Cq& b) { return a += b; }
  friend Cq operator-(Cq a, const Cq& b) { return a -= b; }
  friend Cq operator*(Cq a, const Cq& b) { return a *= b; }
  friend Cq operator/(Cq a, const Cq& b) { return a /= b; }
  Cq operator-() const { return Cq(-re_, -im_); }

  friend bool operator==(const Cq& a, const Cq& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Cq& a, const Cq& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string str() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Sorted (index, value) pairs with no stored zeros.
using SparseVec = std::vector<std::pair<int, Cq>>;
using DenseVec = std::vector<Cq>;

void axpy(SparseVec& dst, const Cq& scale, const SparseVec& src);
SparseVec scaled(const SparseVec& v, const Cq& s);
SparseVec conj(const SparseVec& v);
SparseVec to_sparse(const DenseVec& v);
DenseVec to_dense(const SparseVec& v, int n);
void accumulate(DenseVec& dst, const Cq& scale, const SparseVec& src);
Cq at(const SparseVec& v, int index);
bool equal(const SparseVec& a, const SparseVec& b);
std::vector<std::complex<double>> to_complex(const DenseVec& v);

/// Column-sparse matrix: columns[c] holds the nonzero entries of column c.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<SparseVec> columns;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), columns(static_cast<size_t>(c)) {}

  SparseVec apply(const SparseVec& x) const;
  DenseVec apply(const DenseVec& x) const;
  std::size_t nonzeros() const;
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix add_scaled(const SparseMatrix& a, const Cq& s, const SparseMatrix& b);
bool equal(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix identity_matrix(int n);

/// Incremental row echelon form; tracks whether new vectors enlarge the span.
class SpanBuilder {
 public:
  explicit SpanBuilder(int width) : width_(width) {}

  /// Returns true when v was independent of everything added so far.
  bool add(DenseVec v);
  bool add(const SparseVec& v) { return add(to_dense(v, width_)); }
  /// Coordinates are not tracked; only membership.
  bool contains(DenseVec v) const;
  int rank() const { return static_cast<int>(rows_.size()); }
  int width() const { return width_; }

 private:
  void reduce(DenseVec& v) const;

  int width_;
  std::vector<DenseVec> rows_;
  std::vector<int> pivots_;
};

/// Basis of { x : M x = 0 } for M given by rows.
std::vector<DenseVec> kernel(std::vector<DenseVec> rows, int ncols);
int rank(const std::vector<DenseVec>& rows, int ncols);

/// Solves M x = b exactly (M square, given by rows). Empty when singular.
std::optional<DenseVec> solve(std::vector<DenseVec> rows, DenseVec rhs);

/// Small Fraction-free integer determinant (Bareiss).
Integer determinant(std::vector<std::vector<Integer>> m);

}  // namespace qf
