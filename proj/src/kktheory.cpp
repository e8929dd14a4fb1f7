#include "qfunctor/kktheory.hpp"

#include <sstream>

#include "qfunctor/errors.hpp"

namespace qf {

K0Group k0(const FinCStar& a) {
  const auto& w = a.wedderburn();
  return {w.blocks(), w.dimension_vector};
}

KKClass kk_class(const HilbertBimodule& e) {
  KKClass x;
  x.matrix = multiplicity_matrix(e);
  x.src_blocks = static_cast<int>(x.matrix.size());
  x.dst_blocks = e.right->wedderburn().blocks();
  return x;
}

KKClass kk_zero(int src_blocks, int dst_blocks) {
  return {src_blocks, dst_blocks, IntMatrix(static_cast<size_t>(src_blocks), std::vector<long long>(static_cast<size_t>(dst_blocks)))};
}

KKClass kk_identity(int blocks) {
  KKClass x = kk_zero(blocks, blocks);
  for (int i = 0; i < blocks; ++i) x.matrix[i][i] = 1;
  return x;
}

KKClass operator+(const KKClass& x, const KKClass& y) {
  if (x.src_blocks != y.src_blocks || x.dst_blocks != y.dst_blocks) throw TypeMismatch("KK sum: shapes differ");
  KKClass z = x;
  for (int i = 0; i < x.src_blocks; ++i)
    for (int j = 0; j < x.dst_blocks; ++j) z.matrix[i][j] += y.matrix[i][j];
  return z;
}

KKClass operator-(const KKClass& x) {
  KKClass z = x;
  for (auto& row : z.matrix)
    for (auto& v : row) v = -v;
  return z;
}

KKClass intersection(const KKClass& x, const KKClass& y) {
  if (x.dst_blocks != y.src_blocks) throw TypeMismatch("intersection product: middle ranks differ");
  KKClass z = kk_zero(x.src_blocks, y.dst_blocks);
  for (int i = 0; i < x.src_blocks; ++i)
    for (int k = 0; k < x.dst_blocks; ++k)
      if (x.matrix[i][k] != 0)
        for (int j = 0; j < y.dst_blocks; ++j) z.matrix[i][j] += x.matrix[i][k] * y.matrix[k][j];
  return z;
}

Integer kk_determinant(const KKClass& x) {
  if (x.src_blocks != x.dst_blocks) throw TypeMismatch("determinant of a non-square KK class");
  std::vector<std::vector<Integer>> m(static_cast<size_t>(x.src_blocks));
  for (int i = 0; i < x.src_blocks; ++i)
    for (long long v : x.matrix[i]) m[i].emplace_back(static_cast<long>(v));
  return determinant(std::move(m));
}

bool kk_invertible(const KKClass& x) {
  if (x.src_blocks != x.dst_blocks) return false;
  const Integer d = kk_determinant(x);
  return d == 1 || d == -1;
}

KIsoReport k_iso_check(const KKClass& x) { return {kk_invertible(x), x.src_blocks, x.dst_blocks}; }

std::string to_string(const KKClass& x) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < x.src_blocks; ++i) {
    os << (i ? ", " : "") << "[";
    for (int j = 0; j < x.dst_blocks; ++j) os << (j ? ", " : "") << x.matrix[i][j];
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace qf
