// Formal Moyal star product on polynomial symbols over T*(R^n), truncated
// in hbar, with exact complex-rational coefficients.
#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "qfunctor/exact.hpp"

namespace qf {

/// Exponents of q1..qn followed by p1..pn.
using Exponent = std::vector<int>;

class PhasePoly {
 public:
  PhasePoly() = default;
  explicit PhasePoly(int n) : n_(n) {}

  static PhasePoly constant(int n, const Cq& c);
  static PhasePoly q(int n, int i);  // i is 1-based
  static PhasePoly p(int n, int i);
  /// Sparse "coeff * q1^a p1^b ..." syntax, e.g. "3/2*q1^2*p1 - i*p2 + 1".
  /// n = 0 takes the largest variable index seen (at least 1).
  static PhasePoly parse(const std::string& text, int n = 0);

  int n() const { return n_; }
  const std::map<Exponent, Cq>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const Exponent& e, const Cq& c);
  /// d^times / d z_var, var indexing the 2n coordinates.
  PhasePoly derivative(int var, int times = 1) const;
  PhasePoly conj() const;
  std::string str() const;

  PhasePoly& operator+=(const PhasePoly& o);
  PhasePoly& operator-=(const PhasePoly& o);
  friend PhasePoly operator+(PhasePoly a, const PhasePoly& b) { return a += b; }
  friend PhasePoly operator-(PhasePoly a, const PhasePoly& b) { return a -= b; }
  friend PhasePoly operator*(const PhasePoly& a, const PhasePoly& b);
  friend PhasePoly operator*(const Cq& s, const PhasePoly& a);
  friend bool operator==(const PhasePoly& a, const PhasePoly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

 private:
  int n_ = 1;
  std::map<Exponent, Cq> terms_;
};

PhasePoly poisson_bracket(const PhasePoly& f, const PhasePoly& g);

/// coeffs[k] multiplies hbar^k, k = 0..K.
struct FormalSeries {
  int K = 0;
  std::vector<PhasePoly> coeffs;

  FormalSeries() = default;
  FormalSeries(int n, int k);
  /// f embedded at order 0.
  static FormalSeries of(const PhasePoly& f, int k);

  FormalSeries conj() const;
  std::string str() const;

  friend FormalSeries operator+(const FormalSeries& a, const FormalSeries& b);
  friend FormalSeries operator-(const FormalSeries& a, const FormalSeries& b);
  friend bool operator==(const FormalSeries& a, const FormalSeries& b) { return a.K == b.K && a.coeffs == b.coeffs; }
};

/// hbar^k coefficient of f * g: (1/k!) (-i/2)^k Pi^k(f, g).
PhasePoly star_term(const PhasePoly& f, const PhasePoly& g, int k);
FormalSeries star(const PhasePoly& f, const PhasePoly& g, int K = 5);
/// Product of series mod hbar^{K+1}, K the smaller truncation.
FormalSeries star(const FormalSeries& f, const FormalSeries& g);

bool check_dirac(const PhasePoly& f, const PhasePoly& g);
bool check_associativity(const PhasePoly& f, const PhasePoly& g, const PhasePoly& h, int K = 5);
bool check_unit(const PhasePoly& f, int K = 5);
/// conj(f * g) = conj(g) * conj(f), hbar real.
bool check_hermiticity(const PhasePoly& f, const PhasePoly& g, int K = 5);

/// z -> S z + v on (q1..qn, p1..pn).
struct AffineMap {
  std::vector<std::vector<Rational>> S;
  std::vector<Rational> v;
};

/// S^T J S - J with J = [[0, I], [-I, 0]].
std::vector<std::vector<Rational>> symplectic_defect(const std::vector<std::vector<Rational>>& S);
bool is_symplectic(const std::vector<std::vector<Rational>>& S);

PhasePoly pullback(const PhasePoly& f, const AffineMap& L);
FormalSeries pullback(const FormalSeries& f, const AffineMap& L);

/// (f o L) * (g o L) = (f * g) o L. Throws HypothesisError carrying the
/// defect when S is not symplectic.
bool affine_covariance(const PhasePoly& f, const PhasePoly& g, const AffineMap& L, int K = 5);

/// Product of random shears, J-rotations and diag(M, M^-T), plus a random
/// translation.
AffineMap random_symplectic(std::mt19937_64& rng, int n);
/// Up to `terms` monomials of total degree <= degree with small Gaussian
/// rational coefficients.
PhasePoly random_poly(std::mt19937_64& rng, int n, int degree, int terms = 4);

}  // namespace qf
