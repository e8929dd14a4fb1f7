#include "qfunctor/hilbmod.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qfunctor/errors.hpp"
#include "qfunctor/kernels.hpp"

namespace qf {

namespace {

template <typename... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

// Sum_k x_k M_k for a family of sparse matrices.
SparseMatrix combine(const std::vector<SparseMatrix>& ms, const SparseVec& coeffs, int rows, int cols) {
  SparseMatrix out(rows, cols);
  for (const auto& [k, c] : coeffs) out = add_scaled(out, c, ms[k]);
  return out;
}

std::string vec_str(const DenseVec& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].str();
  os << "]";
  return os.str();
}

}  // namespace

SparseVec HilbertBimodule::inner(const DenseVec& x, const DenseVec& y) const {
  SparseVec out;
  for (int k = 0; k < dim; ++k) {
    if (x[k].is_zero()) continue;
    const Cq xk = x[k].conj();
    for (int l = 0; l < dim; ++l)
      if (!y[l].is_zero()) axpy(out, xk * y[l], inner(k, l));
  }
  return out;
}

DenseVec HilbertBimodule::act_left(const DenseVec& a, const DenseVec& x) const {
  DenseVec out(static_cast<size_t>(dim));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    const DenseVec y = lact[i].apply(x);
    for (int k = 0; k < dim; ++k) out[k] += a[i] * y[k];
  }
  return out;
}

DenseVec HilbertBimodule::act_right(const DenseVec& x, const DenseVec& b) const {
  DenseVec out(static_cast<size_t>(dim));
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j].is_zero()) continue;
    const DenseVec y = ract[j].apply(x);
    for (int k = 0; k < dim; ++k) out[k] += b[j] * y[k];
  }
  return out;
}

CMatrix HilbertBimodule::left_matrix(const CVector& a) const {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != 0.0) out += a(i) * to_cmatrix(lact[i]);
  return out;
}

CMatrix HilbertBimodule::right_matrix(const CVector& b) const {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < b.size(); ++j)
    if (b(j) != 0.0) out += b(j) * to_cmatrix(ract[j]);
  return out;
}

HilbertBimodule make_bimodule(AlgebraPtr a, AlgebraPtr b, std::vector<SparseMatrix> lact,
                              std::vector<SparseMatrix> ract, std::vector<SparseVec> ip, double tolerance) {
  if (!a || !b) throw StructureError("bimodule needs both algebras");
  const int da = a->dim(), db = b->dim();
  if (static_cast<int>(lact.size()) != da || static_cast<int>(ract.size()) != db)
    throw StructureError("action tables do not match the algebra dimensions");
  const int n = lact.empty() ? 0 : lact.front().rows;
  if (n < 1) throw StructureError("bimodule must be nonzero");
  for (const auto* tab : {&lact, &ract})
    for (const auto& m : *tab)
      if (m.rows != n || m.cols != n) throw StructureError("action matrices must all be dim x dim");
  if (ip.size() != static_cast<size_t>(n) * n) throw StructureError("inner-product table must be dim x dim");
  for (const auto& v : ip)
    for (const auto& [k, x] : v)
      if (k < 0 || k >= db) throw StructureError("inner-product coordinate out of range");

  HilbertBimodule e{std::move(a), std::move(b), n, std::move(lact), std::move(ract), std::move(ip)};
  const FinCStar& A = *e.left;
  const FinCStar& B = *e.right;

  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      if (!equal(multiply(e.lact[i], e.lact[j]), combine(e.lact, A.product(i, j), n, n)))
        throw AxiomError("left action", cat("L(b", i, ") L(b", j, ") != L(b", i, " b", j, ")"));
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      if (!equal(multiply(e.ract[j], e.ract[i]), combine(e.ract, B.product(i, j), n, n)))
        throw AxiomError("right action", cat("(x b", i, ") b", j, " != x (b", i, " b", j, ")"));
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      if (!equal(multiply(e.lact[i], e.ract[j]), multiply(e.ract[j], e.lact[i])))
        throw AxiomError("actions commute", cat("left b", i, " and right b", j));

  for (int k = 0; k < n; ++k)
    for (int l = 0; l <= k; ++l)
      if (!equal(B.adjoint(e.inner(l, k)), e.inner(k, l)))
        throw AxiomError("hermitian", cat("<e", l, ",e", k, ">^* != <e", k, ",e", l, ">"));
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < db; ++j) {
      const SparseVec& col = e.ract[j].columns[l];
      const SparseVec bj{{j, Cq(1)}};
      for (int k = 0; k < n; ++k) {
        SparseVec lhs;
        for (const auto& [m, v] : col) axpy(lhs, v, e.inner(k, m));
        if (!equal(lhs, B.multiply(e.inner(k, l), bj)))
          throw AxiomError("right linearity", cat("<e", k, ", e", l, " b", j, "> != <e", k, ",e", l, "> b", j));
      }
    }
  for (int i = 0; i < da; ++i) {
    const SparseMatrix li_star = combine(e.lact, A.star(i), n, n);
    for (int k = 0; k < n; ++k) {
      const SparseVec& v = li_star.columns[k];
      for (int l = 0; l < n; ++l) {
        SparseVec lhs, rhs;
        for (const auto& [m, x] : v) axpy(lhs, x.conj(), e.inner(m, l));
        for (const auto& [m, x] : e.lact[i].columns[l]) axpy(rhs, x, e.inner(k, m));
        if (!equal(lhs, rhs))
          throw AxiomError("left adjointness", cat("<b", i, "^* e", k, ", e", l, "> != <e", k, ", b", i, " e", l, ">"));
      }
    }
  }

  SpanBuilder image(n);
  for (int i = 0; i < da && image.rank() < n; ++i)
    for (int k = 0; k < n && image.rank() < n; ++k) image.add(e.lact[i].columns[k]);
  if (image.rank() != n) throw AxiomError("nondegenerate left action", cat("A.E has dimension ", image.rank(), " < ", n));

  std::vector<DenseVec> gram(static_cast<size_t>(n), DenseVec(static_cast<size_t>(n)));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) gram[k][l] = B.trace(e.inner(k, l));
  if (rank(gram, n) < n) {
    const auto null = kernel(gram, n);
    throw AxiomError("definite", "null vector " + vec_str(null.front()));
  }

  const Wedderburn& wb = B.wedderburn();
  for (int j = 0; j < wb.blocks(); ++j) {
    const int nj = wb.dimension_vector[j];
    CMatrix big(static_cast<Eigen::Index>(n) * nj, static_cast<Eigen::Index>(n) * nj);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        big.block(static_cast<Eigen::Index>(k) * nj, static_cast<Eigen::Index>(l) * nj, nj, nj) =
            wb.embed_element(to_cvector(e.inner(k, l), db))[j];
    big = (big + big.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(big, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues()(0) < -tolerance * scale)
      throw AxiomError("positivity", cat("inner-product matrix has eigenvalue ", es.eigenvalues()(0), " in block ", j));
  }
  return e;
}

HilbertBimodule canonical_bimodule(const AlgebraPtr& a) {
  const int d = a->dim();
  std::vector<SparseMatrix> lact, ract;
  std::vector<SparseVec> ip(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    lact.push_back(a->left_mult(i));
    ract.push_back(a->right_mult(i));
  }
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) ip[static_cast<size_t>(k) * d + l] = a->multiply(a->star(k), SparseVec{{l, Cq(1)}});
  return make_bimodule(a, a, std::move(lact), std::move(ract), std::move(ip));
}

HilbertBimodule direct_sum(const HilbertBimodule& e, const HilbertBimodule& f) {
  if (!same_algebra(e.left, f.left) || !same_algebra(e.right, f.right))
    throw TypeMismatch("direct sum needs bimodules over the same algebras");
  const int n = e.dim + f.dim;
  auto stack = [&](const SparseMatrix& x, const SparseMatrix& y) {
    SparseMatrix out(n, n);
    for (int c = 0; c < e.dim; ++c) out.columns[c] = x.columns[c];
    for (int c = 0; c < f.dim; ++c)
      for (const auto& [r, v] : y.columns[c]) out.columns[e.dim + c].emplace_back(e.dim + r, v);
    return out;
  };
  HilbertBimodule out{e.left, e.right, n, {}, {}, std::vector<SparseVec>(static_cast<size_t>(n) * n)};
  for (std::size_t i = 0; i < e.lact.size(); ++i) out.lact.push_back(stack(e.lact[i], f.lact[i]));
  for (std::size_t j = 0; j < e.ract.size(); ++j) out.ract.push_back(stack(e.ract[j], f.ract[j]));
  for (int k = 0; k < e.dim; ++k)
    for (int l = 0; l < e.dim; ++l) out.ip[static_cast<size_t>(k) * n + l] = e.inner(k, l);
  for (int k = 0; k < f.dim; ++k)
    for (int l = 0; l < f.dim; ++l) out.ip[static_cast<size_t>(e.dim + k) * n + e.dim + l] = f.inner(k, l);
  return out;
}

HilbertBimodule transform_carrier(const HilbertBimodule& e, const std::vector<DenseVec>& p) {
  const int n = e.dim;
  if (static_cast<int>(p.size()) != n) throw StructureError("transform_carrier: matrix has the wrong size");
  std::vector<SparseVec> inv(static_cast<size_t>(n));  // columns of p^{-1}
  for (int c = 0; c < n; ++c) {
    DenseVec unit(static_cast<size_t>(n));
    unit[c] = Cq(1);
    auto col = solve(p, unit);
    if (!col) throw StructureError("transform_carrier: matrix is singular");
    inv[c] = to_sparse(*col);
  }
  SparseMatrix pm(n, n), pinv(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r)
      if (!p[r][c].is_zero()) pm.columns[c].emplace_back(r, p[r][c]);
    pinv.columns[c] = inv[c];
  }
  auto conjugate = [&](const SparseMatrix& m) { return multiply(pinv, multiply(m, pm)); };
  std::vector<SparseMatrix> lact, ract;
  for (const auto& m : e.lact) lact.push_back(conjugate(m));
  for (const auto& m : e.ract) ract.push_back(conjugate(m));
  std::vector<SparseVec> ip(static_cast<size_t>(n) * n);
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      SparseVec acc;
      for (const auto& [s1, x] : pm.columns[t])
        for (const auto& [s2, y] : pm.columns[u]) axpy(acc, x.conj() * y, e.inner(s1, s2));
      ip[static_cast<size_t>(t) * n + u] = std::move(acc);
    }
  return make_bimodule(e.left, e.right, std::move(lact), std::move(ract), std::move(ip));
}

IntMatrix multiplicity_matrix(const HilbertBimodule& e) {
  const Wedderburn& wa = e.left->wedderburn();
  const Wedderburn& wb = e.right->wedderburn();
  IntMatrix m(static_cast<size_t>(wa.blocks()), std::vector<long long>(static_cast<size_t>(wb.blocks())));
  std::vector<CMatrix> rq;
  for (int j = 0; j < wb.blocks(); ++j) rq.push_back(e.right_matrix(wb.central_idempotent(j)));
  for (int i = 0; i < wa.blocks(); ++i) {
    const CMatrix lp = e.left_matrix(wa.central_idempotent(i));
    for (int j = 0; j < wb.blocks(); ++j) {
      const double x = (lp * rq[j]).trace().real() / (wa.dimension_vector[i] * wb.dimension_vector[j]);
      const double r = std::round(x);
      if (std::abs(x - r) > 1e-6 || r < 0)
        throw std::runtime_error(cat("multiplicity ", x, " at (", i, ",", j, ") is not a nonnegative integer"));
      m[i][j] = static_cast<long long>(r);
    }
  }
  return m;
}

namespace {

// Pivoted LDL^* of the scalar form on E (x) F, processing generators in
// order. Dependent generators get coordinates over the pivots.
struct TensorQuotient {
  std::vector<int> pivots;
  std::vector<SparseVec> coords;  // per generator, over pivots
};

TensorQuotient reduce_tensor(const HilbertBimodule& e, const HilbertBimodule& f,
                             const std::vector<std::vector<std::vector<Cq>>>& w) {
  const int de = e.dim, df = f.dim, n = de * df;
  auto form = [&](int t, int u) {
    const int k = t / df, l = t % df, k2 = u / df, l2 = u % df;
    Cq s;
    for (const auto& [j, g] : e.inner(k, k2)) s += g * w[j][l][l2];
    return s;
  };
  TensorQuotient q;
  std::vector<std::vector<Cq>> lower;  // lower[a][b], b < a
  std::vector<Rational> diag;
  q.coords.resize(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    const int r = static_cast<int>(q.pivots.size());
    std::vector<Cq> y(static_cast<size_t>(r));
    for (int a = 0; a < r; ++a) {
      Cq v = form(q.pivots[a], t);
      for (int b = 0; b < a; ++b)
        if (!lower[a][b].is_zero() && !y[b].is_zero()) v -= lower[a][b] * y[b];
      y[a] = std::move(v);
    }
    Cq schur = form(t, t);
    for (int a = 0; a < r; ++a)
      if (!y[a].is_zero()) schur -= Cq(y[a].norm_sq() / diag[a]);
    if (!schur.is_real()) throw AxiomError("hermitian", "tensor form has a non-real diagonal");
    if (sgn(schur.re()) < 0) throw AxiomError("positivity", cat("tensor form is indefinite at generator ", t));
    if (sgn(schur.re()) > 0) {
      std::vector<Cq> row(static_cast<size_t>(r));
      for (int a = 0; a < r; ++a) row[a] = y[a].conj() / Cq(diag[a]);
      lower.push_back(std::move(row));
      diag.push_back(schur.re());
      q.coords[t] = {{r, Cq(1)}};
      q.pivots.push_back(t);
      continue;
    }
    std::vector<Cq> c(static_cast<size_t>(r));
    for (int a = r - 1; a >= 0; --a) {
      Cq v = y[a] / Cq(diag[a]);
      for (int b = a + 1; b < r; ++b)
        if (!lower[b][a].is_zero() && !c[b].is_zero()) v -= lower[b][a].conj() * c[b];
      c[a] = std::move(v);
    }
    SparseVec sv;
    for (int a = 0; a < r; ++a)
      if (!c[a].is_zero()) sv.emplace_back(a, c[a]);
    q.coords[t] = std::move(sv);
  }
  return q;
}

HilbertBimodule tensor_impl(const HilbertBimodule& e, const HilbertBimodule& f, bool parallel) {
  if (!same_algebra(e.right, f.left)) throw TypeMismatch("interior tensor: middle algebras differ");
  const int df = f.dim, db = e.right->dim(), dc = f.right->dim();
  const FinCStar& C = *f.right;

  // W[j][l][l'] = <f_l, b_j f_l'>_C and its trace.
  std::vector<std::vector<std::vector<SparseVec>>> W(
      static_cast<size_t>(db), std::vector<std::vector<SparseVec>>(static_cast<size_t>(df), std::vector<SparseVec>(static_cast<size_t>(df))));
  std::vector<std::vector<std::vector<Cq>>> w(
      static_cast<size_t>(db), std::vector<std::vector<Cq>>(static_cast<size_t>(df), std::vector<Cq>(static_cast<size_t>(df))));
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int j = 0; j < db; ++j)
    for (int l2 = 0; l2 < df; ++l2)
      for (int l = 0; l < df; ++l) {
        SparseVec s;
        for (const auto& [m, v] : f.lact[j].columns[l2]) axpy(s, v, f.inner(l, m));
        w[j][l][l2] = C.trace(s);
        W[j][l][l2] = std::move(s);
      }

  const TensorQuotient q = reduce_tensor(e, f, w);
  const int r = static_cast<int>(q.pivots.size());
  if (r == 0) throw AxiomError("nondegenerate left action", "interior tensor product is zero");

  auto coord = [&](int k, int l) -> const SparseVec& { return q.coords[static_cast<size_t>(k) * df + l]; };
  std::vector<SparseMatrix> lact(e.lact.size(), SparseMatrix(r, r));
  std::vector<SparseMatrix> ract(static_cast<size_t>(dc), SparseMatrix(r, r));
  std::vector<SparseVec> ip(static_cast<size_t>(r) * r);
  const int da = static_cast<int>(e.lact.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < da; ++i)
    for (int a = 0; a < r; ++a) {
      const int k = q.pivots[a] / df, l = q.pivots[a] % df;
      SparseVec col;
      for (const auto& [m, v] : e.lact[i].columns[k]) axpy(col, v, coord(m, l));
      lact[i].columns[a] = std::move(col);
    }
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int j = 0; j < dc; ++j)
    for (int a = 0; a < r; ++a) {
      const int k = q.pivots[a] / df, l = q.pivots[a] % df;
      SparseVec col;
      for (const auto& [m, v] : f.ract[j].columns[l]) axpy(col, v, coord(k, m));
      ract[j].columns[a] = std::move(col);
    }
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      const int k = q.pivots[a] / df, l = q.pivots[a] % df;
      const int k2 = q.pivots[b] / df, l2 = q.pivots[b] % df;
      SparseVec s;
      for (const auto& [j, g] : e.inner(k, k2)) axpy(s, g, W[j][l][l2]);
      ip[static_cast<size_t>(a) * r + b] = std::move(s);
    }
  return make_bimodule(e.left, f.right, std::move(lact), std::move(ract), std::move(ip));
}

struct DenseActions {
  std::vector<CMatrix> left, right;
  std::vector<CMatrix> gram;  // gram[c](k, l) = coefficient of b_c in <e_k, e_l>
};

DenseActions dense_actions(const HilbertBimodule& e) {
  DenseActions d;
  for (const auto& m : e.lact) d.left.push_back(to_cmatrix(m));
  for (const auto& m : e.ract) d.right.push_back(to_cmatrix(m));
  d.gram.assign(static_cast<size_t>(e.right->dim()), CMatrix::Zero(e.dim, e.dim));
  for (int k = 0; k < e.dim; ++k)
    for (int l = 0; l < e.dim; ++l)
      for (const auto& [c, v] : e.inner(k, l)) d.gram[c](k, l) = v.to_complex();
  return d;
}

CMatrix combine_dense(const std::vector<CMatrix>& ms, const CVector& x) {
  CMatrix out = CMatrix::Zero(ms.front().rows(), ms.front().cols());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > 0.0) out += x(i) * ms[i];
  return out;
}

// Columns ordered by (i, j, r, k, l): L(E_k0) R(E_0l) v_r with v_r an
// orthonormal basis of E_00 . E . E_00 in blocks (i, j).
CMatrix frame(const HilbertBimodule& e, const IntMatrix& mult) {
  const Wedderburn& wa = e.left->wedderburn();
  const Wedderburn& wb = e.right->wedderburn();
  const DenseActions d = dense_actions(e);
  CMatrix out(e.dim, e.dim);
  Eigen::Index col = 0;
  for (int j = 0; j < wb.blocks(); ++j) {
    // h(k, l) = (0,0) entry of the j-th block of <e_k, e_l>
    CMatrix h = CMatrix::Zero(e.dim, e.dim);
    for (int c = 0; c < e.right->dim(); ++c) h += wb.embed[c][j](0, 0) * d.gram[c];
    for (int i = 0; i < wa.blocks(); ++i) {
      const int m = static_cast<int>(mult[i][j]);
      if (m == 0) continue;
      const CMatrix p = combine_dense(d.left, wa.matrix_unit(i, 0, 0)) * combine_dense(d.right, wb.matrix_unit(j, 0, 0));
      Eigen::ColPivHouseholderQR<CMatrix> qr(p);
      qr.setThreshold(1e-9);
      if (qr.rank() != m) throw std::runtime_error("frame: corner space has unexpected dimension");
      const CMatrix qm = CMatrix(qr.householderQ()).leftCols(m);
      const CMatrix g = qm.adjoint() * h * qm;
      Eigen::LLT<CMatrix> llt((g + g.adjoint()) / 2.0);
      const CMatrix v = qm * CMatrix(llt.matrixU()).inverse();
      const int ni = wa.dimension_vector[i], nj = wb.dimension_vector[j];
      std::vector<CMatrix> lk, rl;
      for (int k = 0; k < ni; ++k) lk.push_back(combine_dense(d.left, wa.matrix_unit(i, k, 0)));
      for (int l = 0; l < nj; ++l) rl.push_back(combine_dense(d.right, wb.matrix_unit(j, 0, l)));
      for (int r = 0; r < m; ++r)
        for (int k = 0; k < ni; ++k)
          for (int l = 0; l < nj; ++l) out.col(col++) = lk[k] * (rl[l] * v.col(r));
    }
  }
  if (col != e.dim) throw std::runtime_error("frame: multiplicities do not account for the dimension");
  return out;
}

}  // namespace

HilbertBimodule interior_tensor(const HilbertBimodule& e, const HilbertBimodule& f) { return tensor_impl(e, f, true); }

HilbertBimodule interior_tensor_serial(const HilbertBimodule& e, const HilbertBimodule& f) {
  return tensor_impl(e, f, false);
}

double intertwiner_residual(const HilbertBimodule& e, const HilbertBimodule& f, const CMatrix& u) {
  const DenseActions de = dense_actions(e), df = dense_actions(f);
  double worst = 0.0;
  auto upd = [&](const CMatrix& x, const CMatrix& y) {
    const double scale = std::max({1.0, x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff()});
    worst = std::max(worst, (x - y).cwiseAbs().maxCoeff() / scale);
  };
  for (std::size_t i = 0; i < de.left.size(); ++i) upd(u * de.left[i], df.left[i] * u);
  for (std::size_t j = 0; j < de.right.size(); ++j) upd(u * de.right[j], df.right[j] * u);
  for (std::size_t c = 0; c < de.gram.size(); ++c) upd(u.adjoint() * df.gram[c] * u, de.gram[c]);
  return worst;
}

std::optional<Intertwiner> unitary_equivalent(const HilbertBimodule& e, const HilbertBimodule& f) {
  if (!same_algebra(e.left, f.left) || !same_algebra(e.right, f.right)) return std::nullopt;
  if (e.dim != f.dim) return std::nullopt;
  const IntMatrix m = multiplicity_matrix(e);
  if (m != multiplicity_matrix(f)) return std::nullopt;
  const CMatrix fe = frame(e, m), ff = frame(f, m);
  Intertwiner out;
  out.unitary = ff * fe.inverse();
  out.residual = intertwiner_residual(e, f, out.unitary);
  return out;
}

std::optional<Intertwiner> brute_force_unitary(const HilbertBimodule& e, const HilbertBimodule& f,
                                               unsigned long long seed) {
  if (!same_algebra(e.left, f.left) || !same_algebra(e.right, f.right) || e.dim != f.dim) return std::nullopt;
  const int n = e.dim;
  // Unknown T (F <- E) with T[a][b] at a * n + b.
  std::vector<DenseVec> rows;
  auto add_equations = [&](const SparseMatrix& me, const SparseMatrix& mf) {
    const std::vector<DenseVec> te = [&] {
      std::vector<DenseVec> t(static_cast<size_t>(n), DenseVec(static_cast<size_t>(n)));
      for (int c = 0; c < n; ++c)
        for (const auto& [r, v] : me.columns[c]) t[r][c] = v;
      return t;
    }();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        DenseVec row(static_cast<size_t>(n) * n);
        for (int c = 0; c < n; ++c)
          if (!te[c][b].is_zero()) row[static_cast<size_t>(a) * n + c] += te[c][b];
        for (int c = 0; c < n; ++c)
          for (const auto& [r, v] : mf.columns[c])
            if (r == a) row[static_cast<size_t>(c) * n + b] -= v;
        rows.push_back(std::move(row));
      }
  };
  for (std::size_t i = 0; i < e.lact.size(); ++i) add_equations(e.lact[i], f.lact[i]);
  for (std::size_t j = 0; j < e.ract.size(); ++j) add_equations(e.ract[j], f.ract[j]);
  const auto sols = kernel(std::move(rows), n * n);
  if (sols.empty()) return std::nullopt;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-4, 4);
  for (int attempt = 0; attempt < 24; ++attempt) {
    DenseVec t(static_cast<size_t>(n) * n);
    for (const auto& s : sols) {
      const Cq c(dist(rng));
      for (std::size_t x = 0; x < t.size(); ++x)
        if (!s[x].is_zero()) t[x] += c * s[x];
    }
    std::vector<DenseVec> tm(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) tm[a].assign(t.begin() + static_cast<long>(a) * n, t.begin() + static_cast<long>(a + 1) * n);
    if (rank(tm, n) < n) continue;

    // Polar part of T with respect to the scalar inner products tau(<.,.>).
    CMatrix T(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) T(a, b) = tm[a][b].to_complex();
    auto scalar_gram = [](const HilbertBimodule& x) {
      CMatrix s(x.dim, x.dim);
      for (int k = 0; k < x.dim; ++k)
        for (int l = 0; l < x.dim; ++l) s(k, l) = x.right->trace(x.inner(k, l)).to_complex();
      return s;
    };
    const CMatrix se = scalar_gram(e), sf = scalar_gram(f);
    // With se = ue^* ue and sf = uf^* uf, X = uf T ue^{-1} is T in
    // orthonormal coordinates and its polar part W Z^* is unitary there.
    const CMatrix ue = Eigen::LLT<CMatrix>(se).matrixU(), uf = Eigen::LLT<CMatrix>(sf).matrixU();
    const CMatrix ue_inv = ue.inverse(), uf_inv = uf.inverse();
    Eigen::JacobiSVD<CMatrix> svd(uf * T * ue_inv, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Intertwiner out;
    out.unitary = uf_inv * svd.matrixU() * svd.matrixV().adjoint() * ue;
    out.residual = intertwiner_residual(e, f, out.unitary);
    return out;
  }
  return std::nullopt;
}

MoritaReport morita_report(const HilbertBimodule& e) {
  MoritaReport rep;
  const int n = e.dim, da = e.left->dim(), db = e.right->dim();
  SpanBuilder ips(db);
  for (const auto& v : e.ip) {
    if (ips.rank() == db) break;
    ips.add(v);
  }
  rep.full = ips.rank() == db;

  auto vec = [n](const SparseMatrix& m) {
    SparseVec out;
    for (int c = 0; c < n; ++c)
      for (const auto& [r, v] : m.columns[c]) out.emplace_back(c * n + r, v);
    return out;
  };
  SpanBuilder image(n * n);
  for (const auto& m : e.lact) image.add(vec(m));
  rep.injective = image.rank() == da;

  // theta_{k,l}(e_m) = e_k <e_l, e_m>
  SpanBuilder compacts(n * n);
  bool too_big = false;
  for (int k = 0; k < n && !too_big; ++k)
    for (int l = 0; l < n && !too_big; ++l) {
      SparseMatrix theta(n, n);
      for (int m = 0; m < n; ++m)
        for (const auto& [j, g] : e.inner(l, m)) axpy(theta.columns[m], g, e.ract[j].columns[k]);
      compacts.add(vec(theta));
      too_big = compacts.rank() > image.rank();
    }
  rep.onto_compacts = !too_big && compacts.rank() == image.rank();
  if (rep.onto_compacts)
    for (const auto& m : e.lact)
      if (!compacts.contains(to_dense(vec(m), n * n))) {
        rep.onto_compacts = false;
        break;
      }

  const IntMatrix mult = multiplicity_matrix(e);
  rep.permutation = !mult.empty() && mult.size() == mult.front().size();
  if (rep.permutation) {
    std::vector<int> col_hits(mult.front().size(), 0);
    for (const auto& row : mult) {
      int ones = 0;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] == 1) {
          ++ones;
          ++col_hits[j];
        } else if (row[j] != 0) {
          ones = 2;
        }
      }
      if (ones != 1) rep.permutation = false;
    }
    for (int h : col_hits)
      if (h != 1) rep.permutation = false;
  }
  return rep;
}

bool is_morita_equivalence(const HilbertBimodule& e) { return morita_report(e).equivalence(); }

}  // namespace qf
