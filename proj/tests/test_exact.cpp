#include <gtest/gtest.h>

#include "qfunctor/exact.hpp"

using namespace qf;

TEST(Cq, FieldArithmetic) {
  const Cq a(make_rational(1, 2), make_rational(-3, 4));
  const Cq b(make_rational(2, 3), 5);
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a * a.conj(), Cq(a.norm_sq()));
  EXPECT_EQ(Cq::i() * Cq::i(), Cq(-1));
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(Cq(make_rational(2, 4)), Cq(make_rational(1, 2)));
}

TEST(Cq, Printing) {
  EXPECT_EQ(Cq(make_rational(3, 2)).str(), "3/2");
  EXPECT_EQ(Cq(0, -1).str(), "-1i");
  EXPECT_EQ(Cq(1, make_rational(-1, 2)).str(), "(1-1/2i)");
}

TEST(SparseVec, AxpyCancelsToEmpty) {
  SparseVec v{{0, Cq(1)}, {3, Cq(2)}};
  axpy(v, Cq(-1), SparseVec{{0, Cq(1)}, {3, Cq(2)}});
  EXPECT_TRUE(v.empty());
}

TEST(SparseVec, AxpyMerges) {
  SparseVec v{{1, Cq(1)}};
  axpy(v, Cq(2), SparseVec{{0, Cq(1)}, {1, Cq(1)}, {4, Cq::i()}});
  EXPECT_EQ(v, (SparseVec{{0, Cq(2)}, {1, Cq(3)}, {4, Cq(0, 2)}}));
  EXPECT_EQ(at(v, 4), Cq(0, 2));
  EXPECT_TRUE(at(v, 2).is_zero());
}

TEST(SparseMatrix, MultiplyMatchesApply) {
  SparseMatrix a(2, 2), b(2, 2);
  a.columns[0] = {{0, Cq(1)}, {1, Cq(2)}};
  a.columns[1] = {{1, Cq(3)}};
  b.columns[0] = {{1, Cq(1)}};
  b.columns[1] = {{0, Cq::i()}};
  const SparseMatrix ab = multiply(a, b);
  const DenseVec x{Cq(1), Cq(make_rational(1, 3))};
  EXPECT_EQ(ab.apply(x), a.apply(b.apply(x)));
  EXPECT_TRUE(equal(multiply(identity_matrix(2), a), a));
}

TEST(LinearAlgebra, KernelOfRankOneMatrix) {
  const std::vector<DenseVec> rows{{Cq(1), Cq(2), Cq(3)}, {Cq(2), Cq(4), Cq(6)}};
  const auto ker = kernel(rows, 3);
  ASSERT_EQ(ker.size(), 2u);
  for (const auto& v : ker)
    for (const auto& r : rows) {
      Cq s;
      for (int j = 0; j < 3; ++j) s += r[j] * v[j];
      EXPECT_TRUE(s.is_zero());
    }
  EXPECT_EQ(rank(rows, 3), 1);
}

TEST(LinearAlgebra, SolveAndSingular) {
  const std::vector<DenseVec> m{{Cq(2), Cq(1)}, {Cq(1), Cq(3)}};
  const auto x = solve(m, {Cq(3), Cq(5)});
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0], Cq(make_rational(4, 5)));
  EXPECT_EQ((*x)[1], Cq(make_rational(7, 5)));
  EXPECT_FALSE(solve({{Cq(1), Cq(2)}, {Cq(2), Cq(4)}}, {Cq(1), Cq(1)}));
}

TEST(LinearAlgebra, SpanBuilder) {
  SpanBuilder s(3);
  EXPECT_TRUE(s.add(DenseVec{Cq(1), Cq(0), Cq(1)}));
  EXPECT_TRUE(s.add(DenseVec{Cq(0), Cq(1), Cq(0)}));
  EXPECT_FALSE(s.add(DenseVec{Cq(2), Cq(3), Cq(2)}));
  EXPECT_TRUE(s.contains(DenseVec{Cq(1), Cq(1), Cq(1)}));
  EXPECT_FALSE(s.contains(DenseVec{Cq(1), Cq(0), Cq(0)}));
  EXPECT_EQ(s.rank(), 2);
}

TEST(LinearAlgebra, BareissDeterminant) {
  EXPECT_EQ(determinant({{2, 0, 1}, {1, 3, 2}, {1, 1, 1}}), Integer(0));
  EXPECT_EQ(determinant({{0, 1}, {1, 0}}), Integer(-1));
  EXPECT_EQ(determinant({{4, 3, 2}, {1, 5, 7}, {2, 2, 9}}), Integer(4 * 31 - 3 * (-5) + 2 * (-8)));
}
