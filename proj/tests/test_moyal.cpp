#include <gtest/gtest.h>

#include <map>
#include <tuple>

#include "qfunctor/errors.hpp"
#include "qfunctor/kernels.hpp"
#include "qfunctor/moyal.hpp"

using namespace qf;

namespace {

PhasePoly P(const std::string& s, int n = 0) { return PhasePoly::parse(s, n); }

// Operator oracle in one degree of freedom: elements are sums of
// c * h^k * Q^i P^j with all Q to the left, and P Q = Q P + i h.
using Op = std::map<std::tuple<int, int, int>, Cq>;  // (i, j, k)

void add(Op& x, const std::tuple<int, int, int>& key, const Cq& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = x.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
  }
}

Integer binom(int n, int k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Integer fact(int n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Op multiply(const Op& x, const Op& y) {
  Op out;
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y) {
      const auto [a, b, k1] = kx;
      const auto [c, d, k2] = ky;
      // P^b Q^c = sum_r r! C(b,r) C(c,r) (i h)^r Q^{c-r} P^{b-r}
      Cq ir(1);
      for (int r = 0; r <= std::min(b, c); ++r) {
        const Rational w(fact(r) * binom(b, r) * binom(c, r));
        add(out, {a + c - r, b - r + d, k1 + k2 + r}, cx * cy * Cq(w) * ir);
        ir *= Cq::i();
      }
    }
  return out;
}

// Weyl quantization of q^a p^b: average over all orderings.
Op weyl(int a, int b) {
  Op sum;
  std::string word(static_cast<size_t>(a), 'q');
  word += std::string(static_cast<size_t>(b), 'p');
  std::sort(word.begin(), word.end());
  int count = 0;
  do {
    Op w{{{0, 0, 0}, Cq(1)}};
    for (char ch : word) w = multiply(w, Op{{{ch == 'q' ? 1 : 0, ch == 'p' ? 1 : 0, 0}, Cq(1)}});
    for (const auto& [key, c] : w) add(sum, key, c);
    ++count;
  } while (std::next_permutation(word.begin(), word.end()));
  Op out;
  for (const auto& [key, c] : sum) add(out, key, c / Cq(count));
  return out;
}

Op weyl(const PhasePoly& f) {
  Op out;
  for (const auto& [e, c] : f.terms())
    for (const auto& [key, v] : weyl(e[0], e[1])) add(out, key, c * v);
  return out;
}

// Inverse of the Weyl map, peeling off the top-degree terms.
FormalSeries symbol(Op x, int K) {
  FormalSeries s(1, K);
  while (!x.empty()) {
    auto top = x.begin();
    for (auto it = x.begin(); it != x.end(); ++it) {
      const auto [i, j, k] = it->first;
      const auto [ti, tj, tk] = top->first;
      if (i + j > ti + tj) top = it;
    }
    const auto [i, j, k] = top->first;
    const Cq c = top->second;
    if (k > K) throw std::logic_error("oracle: order above K");
    Exponent e{i, j};
    s.coeffs[static_cast<size_t>(k)].add_term(e, c);
    for (const auto& [key, v] : weyl(i, j)) {
      const auto [a, b, r] = key;
      add(x, {a, b, r + k}, -c * v);
    }
  }
  return s;
}

}  // namespace

TEST(Poisson, Examples) {
  EXPECT_EQ(poisson_bracket(P("q"), P("p")), P("1"));
  EXPECT_EQ(poisson_bracket(P("q^2"), P("p^2")), P("4*q*p"));
  const auto f = P("q1^2*p2 + 3*p1*q2");
  EXPECT_TRUE(poisson_bracket(f, f).is_zero());
}

TEST(Poisson, JacobiIdentity) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_poly(rng, 2, 3), g = random_poly(rng, 2, 3), h = random_poly(rng, 2, 3);
    const auto j = poisson_bracket(f, poisson_bracket(g, h)) + poisson_bracket(g, poisson_bracket(h, f)) +
                   poisson_bracket(h, poisson_bracket(f, g));
    EXPECT_TRUE(j.is_zero());
  }
}

TEST(Star, QStarP) {
  const auto s = star(P("q"), P("p"), 3);
  EXPECT_EQ(s.coeffs[0], P("q*p"));
  EXPECT_EQ(s.coeffs[1], PhasePoly::constant(1, Cq(0, make_rational(-1, 2))));
  EXPECT_TRUE(s.coeffs[2].is_zero());
  EXPECT_TRUE(s.coeffs[3].is_zero());
}

TEST(Star, ClassicalLimitAndUnit) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const auto f = random_poly(rng, n, 4), g = random_poly(rng, n, 4);
    EXPECT_EQ(star(f, g, 5).coeffs[0], f * g);
    EXPECT_TRUE(check_unit(f));
  }
}

// Against the Weyl-ordered operator calculus, to all orders.
TEST(Oracle, WeylOrderedOperators) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 25; ++t) {
    const auto f = random_poly(rng, 1, 3), g = random_poly(rng, 1, 3);
    const FormalSeries expect = symbol(multiply(weyl(f), weyl(g)), 8);
    EXPECT_EQ(star(f, g, 8), expect) << f.str() << " * " << g.str();
  }
}

TEST(Oracle, WeylMapOfQP) {
  // W(qp) = (QP + PQ)/2 = QP + i h / 2
  const Op w = weyl(1, 1);
  EXPECT_EQ(w.at({1, 1, 0}), Cq(1));
  EXPECT_EQ(w.at({0, 0, 1}), Cq(0, make_rational(1, 2)));
}

TEST(Star, Associativity) {
  EXPECT_TRUE(check_associativity(P("q"), P("p"), P("q"), 3));
  EXPECT_TRUE(check_associativity(P("2"), P("3"), P("5"), 2));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + t % 2;
    EXPECT_TRUE(check_associativity(random_poly(rng, n, 4), random_poly(rng, n, 4), random_poly(rng, n, 4), 5));
  }
}

TEST(Star, DiracCondition) {
  EXPECT_TRUE(check_dirac(P("q"), P("p")));
  const auto c = star(P("q"), P("p"), 3) - star(P("p"), P("q"), 3);
  EXPECT_EQ(c.coeffs[1], PhasePoly::constant(1, Cq(0, -1)));
  EXPECT_TRUE(c.coeffs[3].is_zero());
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const auto f = random_poly(rng, n, 4);
    EXPECT_TRUE(check_dirac(f, random_poly(rng, n, 4)));
    EXPECT_TRUE(check_dirac(f, f));
  }
}

TEST(Star, Hermiticity) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) EXPECT_TRUE(check_hermiticity(random_poly(rng, 2, 3), random_poly(rng, 2, 3)));
}

TEST(Covariance, RotationExample) {
  const AffineMap L{{{0, 1}, {-1, 0}}, {0, 0}};
  EXPECT_TRUE(is_symplectic(L.S));
  EXPECT_EQ(pullback(P("q"), L), P("p"));
  EXPECT_EQ(pullback(P("p"), L), P("-q"));
  const auto lhs = star(pullback(P("q"), L), pullback(P("p"), L), 3);
  EXPECT_EQ(lhs.coeffs[0], P("-q*p"));
  EXPECT_EQ(lhs.coeffs[1], PhasePoly::constant(1, Cq(0, make_rational(-1, 2))));
  EXPECT_TRUE(affine_covariance(P("q"), P("p"), L, 3));
}

TEST(Covariance, TranslationsAndRandomMaps) {
  std::mt19937_64 rng(19);
  const AffineMap shift{{{1, 0}, {0, 1}}, {make_rational(1, 2), -3}};
  EXPECT_TRUE(affine_covariance(P("q^2*p"), P("p^3 + q"), shift, 5));
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + t % 2;
    const AffineMap L = random_symplectic(rng, n);
    EXPECT_TRUE(is_symplectic(L.S));
    EXPECT_TRUE(affine_covariance(random_poly(rng, n, 4), random_poly(rng, n, 4), L, 5));
  }
}

TEST(Covariance, NonSymplecticIsRejectedWithDefect) {
  const AffineMap L{{{2, 0}, {0, 1}}, {0, 0}};
  try {
    affine_covariance(P("q"), P("p"), L, 2);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("[[0, 1], [-1, 0]]"), std::string::npos) << e.what();
  }
}

TEST(Parse, RoundTripAndSyntax) {
  const auto f = P("3/2*q1^2*p2 - i*p1 + (1-2i)*q2 + 7");
  EXPECT_EQ(f.n(), 2);
  EXPECT_EQ(P(f.str()), f);
  EXPECT_EQ(P("q1 p1"), P("q1*p1"));
  EXPECT_EQ(P("q", 2).n(), 2);
  EXPECT_THROW(P("q1^"), ParseError);
  EXPECT_THROW(P("q1 + x"), ParseError);
  EXPECT_THROW(P("q3", 2), ParseError);
  try {
    P("q1 + + p1");
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("column 6"), std::string::npos) << e.what();
  }
}

TEST(Series, Arithmetic) {
  const FormalSeries a = star(P("q"), P("p"), 2), b = star(P("p"), P("q"), 2);
  EXPECT_EQ((a - b) + b, a);
  EXPECT_EQ(a.conj().conj(), a);
  EXPECT_EQ(FormalSeries::of(P("1"), 2).str(), "(1) + O(h^3)");
}

TEST(Kernels, SeriesStarParallelMatchesSerial) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + t % 2;
    const auto f = FormalSeries::of(random_poly(rng, n, 4), 5), g = FormalSeries::of(random_poly(rng, n, 4), 5);
    EXPECT_EQ(star(f, g), star_serial(f, g));
  }
}
