// Morita equivalence of irrational rotation algebras A_theta for quadratic
// irrational theta, decided by GL(2,Z)-equivalence of continued fractions.
#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "qfunctor/exact.hpp"

namespace qf {

/// (a + b sqrt(d)) / c with d squarefree > 1, b != 0, c > 0, gcd(a,b,c) = 1.
class QuadraticIrrational {
 public:
  QuadraticIrrational(Integer a, Integer b, Integer d, Integer c);
  /// Accepts "(a+b*sqrt(d))/c" and the obvious abbreviations.
  static QuadraticIrrational parse(const std::string& text);

  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& d() const { return d_; }
  const Integer& c() const { return c_; }

  double value() const;
  std::string str() const;

  friend bool operator==(const QuadraticIrrational& x, const QuadraticIrrational& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.d_ == y.d_ && x.c_ == y.c_;
  }
  friend bool operator<(const QuadraticIrrational& x, const QuadraticIrrational& y) {
    return std::tie(x.a_, x.b_, x.d_, x.c_) < std::tie(y.a_, y.b_, y.d_, y.c_);
  }

 private:
  Integer a_, b_, d_, c_;
};

/// [[p, q], [r, s]] acting by theta -> (p theta + q) / (r theta + s).
using IntMat2 = std::array<Integer, 4>;

IntMat2 mat_mul(const IntMat2& x, const IntMat2& y);
Integer mat_det(const IntMat2& m);
/// Inverse of a matrix with determinant +-1.
IntMat2 mat_inverse_unimodular(const IntMat2& m);
QuadraticIrrational mobius(const IntMat2& m, const QuadraticIrrational& theta);

struct ContinuedFraction {
  std::vector<Integer> preperiod;
  std::vector<Integer> period;  // minimal, nonempty
  std::string str() const;
};

ContinuedFraction continued_fraction(const QuadraticIrrational& theta);
/// Exact value of an eventually periodic continued fraction.
QuadraticIrrational reconstruct(const ContinuedFraction& cf);

/// Continued fractions share a tail, i.e. the minimal periods are cyclic
/// rotations of each other.
bool gl2z_equivalent(const QuadraticIrrational& x, const QuadraticIrrational& y);
/// A matrix in GL(2,Z) carrying x to y, checked exactly before returning.
std::optional<IntMat2> gl2z_witness(const QuadraticIrrational& x, const QuadraticIrrational& y);

struct WordSearchResult {
  bool found = false;
  IntMat2 matrix{};
  std::string word;  // letters T, t (= T^-1), S applied left to right
  std::size_t visited = 0;
};

/// Meet-in-the-middle search over words in T: x -> x+1, T^-1 and S: x -> 1/x
/// of total length at most max_length.
WordSearchResult word_search(const QuadraticIrrational& x, const QuadraticIrrational& y, int max_length = 12);

struct CounterexampleReport {
  std::string theta1, theta2;
  std::string cf1, cf2;
  bool classical_morita = true;   // cited, not computed
  bool quantum_morita = false;    // computed
  std::string k0_1, k0_2;         // trace ranges, symbolic
  std::string conclusion;
};

/// Refuses (HypothesisError) when the two tori are Morita equivalent.
CounterexampleReport counterexample_report(const QuadraticIrrational& x, const QuadraticIrrational& y);

/// (a + b sqrt(d)) / c with small random entries.
QuadraticIrrational random_quadratic_irrational(std::mt19937_64& rng);

}  // namespace qf
