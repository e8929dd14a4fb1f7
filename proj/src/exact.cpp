#include "qfunctor/exact.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qf {

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Cq& Cq::operator*=(const Cq& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Cq& Cq::operator/=(const Cq& o) {
  Rational den = o.norm_sq();
  if (sgn(den) == 0) throw std::domain_error("division by zero in Cq");
  Rational re = (re_ * o.re_ + im_ * o.im_) / den;
  Rational im = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string Cq::str() const {
  std::ostringstream os;
  if (is_real()) {
    os << re_;
  } else if (sgn(re_) == 0) {
    os << im_ << "i";
  } else {
    os << "(" << re_ << (sgn(im_) < 0 ? "-" : "+") << Rational(abs(im_)) << "i)";
  }
  return os.str();
}

void axpy(SparseVec& dst, const Cq& scale, const SparseVec& src) {
  if (scale.is_zero() || src.empty()) return;
  SparseVec out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      out.push_back(std::move(dst[i++]));
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      out.emplace_back(src[j].first, scale * src[j].second);
      ++j;
    } else {
      Cq v = dst[i].second + scale * src[j].second;
      if (!v.is_zero()) out.emplace_back(dst[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  dst = std::move(out);
}

SparseVec scaled(const SparseVec& v, const Cq& s) {
  SparseVec out;
  if (s.is_zero()) return out;
  out.reserve(v.size());
  for (const auto& [k, x] : v) out.emplace_back(k, x * s);
  return out;
}

SparseVec conj(const SparseVec& v) {
  SparseVec out;
  out.reserve(v.size());
  for (const auto& [k, x] : v) out.emplace_back(k, x.conj());
  return out;
}

SparseVec to_sparse(const DenseVec& v) {
  SparseVec out;
  for (int k = 0; k < static_cast<int>(v.size()); ++k)
    if (!v[k].is_zero()) out.emplace_back(k, v[k]);
  return out;
}

DenseVec to_dense(const SparseVec& v, int n) {
  DenseVec out(static_cast<size_t>(n));
  for (const auto& [k, x] : v) out[k] = x;
  return out;
}

void accumulate(DenseVec& dst, const Cq& scale, const SparseVec& src) {
  if (scale.is_zero()) return;
  for (const auto& [k, x] : src) dst[k] += scale * x;
}

Cq at(const SparseVec& v, int index) {
  auto it = std::lower_bound(v.begin(), v.end(), index,
                             [](const auto& e, int i) { return e.first < i; });
  if (it != v.end() && it->first == index) return it->second;
  return Cq();
}

bool equal(const SparseVec& a, const SparseVec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
  return true;
}

std::vector<std::complex<double>> to_complex(const DenseVec& v) {
  std::vector<std::complex<double>> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.to_complex());
  return out;
}

SparseVec SparseMatrix::apply(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [c, v] : x) axpy(out, v, columns[c]);
  return out;
}

DenseVec SparseMatrix::apply(const DenseVec& x) const {
  DenseVec out(static_cast<size_t>(rows));
  for (int c = 0; c < cols; ++c) accumulate(out, x[c], columns[c]);
  return out;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns) n += c.size();
  return n;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("sparse multiply: shape mismatch");
  SparseMatrix out(a.rows, b.cols);
  for (int c = 0; c < b.cols; ++c) out.columns[c] = a.apply(b.columns[c]);
  return out;
}

SparseMatrix add_scaled(const SparseMatrix& a, const Cq& s, const SparseMatrix& b) {
  SparseMatrix out = a;
  for (int c = 0; c < a.cols; ++c) axpy(out.columns[c], s, b.columns[c]);
  return out;
}

bool equal(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (int c = 0; c < a.cols; ++c)
    if (!equal(a.columns[c], b.columns[c])) return false;
  return true;
}

SparseMatrix identity_matrix(int n) {
  SparseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.columns[i] = {{i, Cq(1)}};
  return m;
}

void SpanBuilder::reduce(DenseVec& v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const int p = pivots_[r];
    if (v[p].is_zero()) continue;
    const Cq f = v[p];
    const DenseVec& row = rows_[r];
    for (int k = p; k < width_; ++k)
      if (!row[k].is_zero()) v[k] -= f * row[k];
  }
}

bool SpanBuilder::add(DenseVec v) {
  reduce(v);
  int p = 0;
  while (p < width_ && v[p].is_zero()) ++p;
  if (p == width_) return false;
  const Cq inv = Cq(1) / v[p];
  for (int k = p; k < width_; ++k)
    if (!v[k].is_zero()) v[k] *= inv;
  // keep rows sorted by pivot so reduction proceeds left to right
  auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
  const auto pos = it - pivots_.begin();
  pivots_.insert(it, p);
  rows_.insert(rows_.begin() + pos, std::move(v));
  return true;
}

bool SpanBuilder::contains(DenseVec v) const {
  reduce(v);
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(std::vector<DenseVec>& m, int ncols) {
  std::vector<int> pivots;
  int row = 0;
  const int nrows = static_cast<int>(m.size());
  for (int col = 0; col < ncols && row < nrows; ++col) {
    int sel = -1;
    for (int r = row; r < nrows; ++r)
      if (!m[r][col].is_zero()) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[row], m[sel]);
    const Cq inv = Cq(1) / m[row][col];
    for (int k = col; k < ncols; ++k)
      if (!m[row][k].is_zero()) m[row][k] *= inv;
    for (int r = 0; r < nrows; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      const Cq f = m[r][col];
      for (int k = col; k < ncols; ++k)
        if (!m[row][k].is_zero()) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(static_cast<size_t>(row));
  return pivots;
}

}  // namespace

std::vector<DenseVec> kernel(std::vector<DenseVec> rows, int ncols) {
  // Thin the system first: only independent rows matter.
  SpanBuilder span(ncols);
  std::vector<DenseVec> basis;
  for (auto& r : rows)
    if (span.add(r)) basis.push_back(std::move(r));
  const std::vector<int> pivots = rref(basis, ncols);
  std::vector<bool> is_pivot(static_cast<size_t>(ncols), false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<DenseVec> out;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    DenseVec v(static_cast<size_t>(ncols));
    v[free] = Cq(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -basis[r][free];
    out.push_back(std::move(v));
  }
  return out;
}

int rank(const std::vector<DenseVec>& rows, int ncols) {
  SpanBuilder span(ncols);
  for (const auto& r : rows) {
    span.add(r);
    if (span.rank() == ncols) break;
  }
  return span.rank();
}

std::optional<DenseVec> solve(std::vector<DenseVec> rows, DenseVec rhs) {
  const int n = static_cast<int>(rows.size());
  for (int r = 0; r < n; ++r) rows[r].push_back(rhs[r]);
  const std::vector<int> pivots = rref(rows, n + 1);
  if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1) return std::nullopt;
  DenseVec x(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) x[r] = rows[r][n];
  return x;
}

Integer determinant(std::vector<std::vector<Integer>> m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int sel = -1;
      for (int r = k + 1; r < n; ++r)
        if (m[r][k] != 0) {
          sel = r;
          break;
        }
      if (sel < 0) return 0;
      std::swap(m[k], m[sel]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = t;
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace qf
