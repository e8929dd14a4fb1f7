#include "qfunctor/cstar.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "qfunctor/errors.hpp"

namespace qf {

FinCStar::FinCStar(int dim, std::vector<SparseVec> mult, std::vector<SparseVec> star, std::string label)
    : dim_(dim), mult_(std::move(mult)), star_(std::move(star)), label_(std::move(label)) {
  if (dim_ < 1) throw StructureError("algebra dimension must be positive");
  if (mult_.size() != static_cast<size_t>(dim_) * dim_ || star_.size() != static_cast<size_t>(dim_))
    throw StructureError("structure-constant tables have the wrong size");
  for (const auto* table : {&mult_, &star_})
    for (const auto& v : *table)
      for (const auto& [k, x] : v)
        if (k < 0 || k >= dim_) throw StructureError("structure constant index out of range");
  traces_.assign(dim_, Cq());
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) traces_[i] += at(product(i, j), j);
}

DenseVec FinCStar::multiply(const DenseVec& x, const DenseVec& y) const {
  DenseVec out(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j].is_zero()) continue;
      accumulate(out, x[i] * y[j], product(i, j));
    }
  }
  return out;
}

SparseVec FinCStar::multiply(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [i, xi] : x)
    for (const auto& [j, yj] : y) axpy(out, xi * yj, product(i, j));
  return out;
}

DenseVec FinCStar::adjoint(const DenseVec& x) const {
  DenseVec out(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i)
    if (!x[i].is_zero()) accumulate(out, x[i].conj(), star_[i]);
  return out;
}

SparseVec FinCStar::adjoint(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [i, xi] : x) axpy(out, xi.conj(), star_[i]);
  return out;
}

std::optional<DenseVec> FinCStar::unit() const {
  // sum_i u_i c[i][j][k] = delta_jk, solved through the kernel of [C | -e].
  std::vector<DenseVec> rows;
  for (int j = 0; j < dim_; ++j) {
    std::vector<DenseVec> block(static_cast<size_t>(dim_), DenseVec(static_cast<size_t>(dim_ + 1)));
    for (int i = 0; i < dim_; ++i)
      for (const auto& [k, c] : product(i, j)) block[k][i] = c;
    block[j][dim_] = Cq(-1);
    for (auto& r : block) rows.push_back(std::move(r));
  }
  for (auto& v : kernel(std::move(rows), dim_ + 1)) {
    if (v[dim_].is_zero()) continue;
    const Cq s = Cq(1) / v[dim_];
    DenseVec u(v.begin(), v.end() - 1);
    for (auto& x : u) x *= s;
    return u;
  }
  return std::nullopt;
}

SparseMatrix FinCStar::left_mult(int i) const {
  SparseMatrix m(dim_, dim_);
  for (int j = 0; j < dim_; ++j) m.columns[j] = product(i, j);
  return m;
}

SparseMatrix FinCStar::right_mult(int i) const {
  SparseMatrix m(dim_, dim_);
  for (int j = 0; j < dim_; ++j) m.columns[j] = product(j, i);
  return m;
}

Cq FinCStar::trace(const SparseVec& x) const {
  Cq t;
  for (const auto& [k, v] : x) t += v * traces_[k];
  return t;
}

ValidationReport FinCStar::validate() const {
  ValidationReport rep;
  auto& out = rep.violations;
  std::vector<SparseVec> basis(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) basis[i] = {{i, Cq(1)}};
  for (int i = 0; i < dim_ && out.size() < 16; ++i)
    for (int j = 0; j < dim_; ++j) {
      const SparseVec& ij = product(i, j);
      for (int k = 0; k < dim_; ++k) {
        SparseVec lhs = multiply(ij, basis[k]);
        SparseVec rhs = multiply(basis[i], product(j, k));
        if (!equal(lhs, rhs)) {
          std::ostringstream os;
          os << "multiplication not associative on (" << i << "," << j << "," << k << ")";
          out.push_back(os.str());
        }
      }
    }
  for (int i = 0; i < dim_; ++i) {
    if (!equal(adjoint(star_[i]), basis[i])) out.push_back("involution not involutive at basis element " + std::to_string(i));
    for (int j = 0; j < dim_; ++j)
      if (!equal(adjoint(product(i, j)), multiply(star_[j], star_[i])))
        out.push_back("involution not anti-multiplicative at (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return rep;
}

const Wedderburn& FinCStar::wedderburn() const {
  std::call_once(cache_->once, [this] { cache_->value = std::make_unique<Wedderburn>(compute_wedderburn(*this)); });
  return *cache_->value;
}

double FinCStar::operator_norm(const CVector& coeffs) const {
  double best = 0.0;
  for (const auto& block : wedderburn().embed_element(coeffs)) {
    Eigen::JacobiSVD<CMatrix> svd(block);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

double FinCStar::operator_norm(const DenseVec& coeffs) const {
  return operator_norm(to_cvector(coeffs));
}

bool FinCStar::same_structure(const FinCStar& o) const {
  if (dim_ != o.dim_) return false;
  for (std::size_t i = 0; i < mult_.size(); ++i)
    if (!equal(mult_[i], o.mult_[i])) return false;
  for (std::size_t i = 0; i < star_.size(); ++i)
    if (!equal(star_[i], o.star_[i])) return false;
  return true;
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (a && b && a->same_structure(*b));
}

std::vector<CMatrix> Wedderburn::embed_element(const CVector& coeffs) const {
  const CVector stacked = to_blocks * coeffs;
  std::vector<CMatrix> out;
  Eigen::Index off = 0;
  for (int n : dimension_vector) {
    out.push_back(Eigen::Map<const CMatrix>(stacked.data() + off, n, n));
    off += static_cast<Eigen::Index>(n) * n;
  }
  return out;
}

CVector Wedderburn::element_of(const std::vector<CMatrix>& blocks) const {
  CVector stacked(to_blocks.rows());
  Eigen::Index off = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int n = dimension_vector[i];
    Eigen::Map<CMatrix>(stacked.data() + off, n, n) = blocks[i];
    off += static_cast<Eigen::Index>(n) * n;
  }
  return from_blocks * stacked;
}

CVector Wedderburn::matrix_unit(int block, int row, int col) const {
  std::vector<CMatrix> blocks;
  for (int n : dimension_vector) blocks.push_back(CMatrix::Zero(n, n));
  blocks[block](row, col) = 1.0;
  return element_of(blocks);
}

CVector Wedderburn::central_idempotent(int block) const {
  std::vector<CMatrix> blocks;
  for (int n : dimension_vector) blocks.push_back(CMatrix::Zero(n, n));
  blocks[block].setIdentity();
  return element_of(blocks);
}

FinCStar convolution_algebra(const FiniteGroupoid& g) {
  const int n = g.n_arr();
  std::vector<SparseVec> mult(static_cast<size_t>(n) * n);
  std::vector<SparseVec> star(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) {
    star[a] = {{g.inv[a], Cq(1)}};
    for (int b = 0; b < n; ++b) {
      const int c = g.compose(a, b);
      if (c != kUndefined) mult[static_cast<size_t>(a) * n + b] = {{c, Cq(1)}};
    }
  }
  return FinCStar(n, std::move(mult), std::move(star), "C*(G)");
}

FinCStar block_algebra(const std::vector<int>& sizes) {
  int dim = 0;
  std::vector<int> offset;
  for (int n : sizes) {
    if (n < 1) throw StructureError("block sizes must be positive");
    offset.push_back(dim);
    dim += n * n;
  }
  std::vector<SparseVec> mult(static_cast<size_t>(dim) * dim);
  std::vector<SparseVec> star(static_cast<size_t>(dim));
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const int n = sizes[b], o = offset[b];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const int i = o + r * n + c;
        star[i] = {{o + c * n + r, Cq(1)}};
        for (int d = 0; d < n; ++d) mult[static_cast<size_t>(i) * dim + o + c * n + d] = {{o + r * n + d, Cq(1)}};
      }
  }
  std::ostringstream label;
  label << "Mat(";
  for (std::size_t b = 0; b < sizes.size(); ++b) label << (b ? "," : "") << sizes[b];
  label << ")";
  return FinCStar(dim, std::move(mult), std::move(star), label.str());
}

FinCStar direct_sum(const FinCStar& a, const FinCStar& b) {
  const int da = a.dim(), db = b.dim(), d = da + db;
  std::vector<SparseVec> mult(static_cast<size_t>(d) * d);
  std::vector<SparseVec> star(static_cast<size_t>(d));
  auto shift = [](const SparseVec& v, int off) {
    SparseVec out;
    for (const auto& [k, x] : v) out.emplace_back(k + off, x);
    return out;
  };
  for (int i = 0; i < da; ++i) {
    star[i] = a.star(i);
    for (int j = 0; j < da; ++j) mult[static_cast<size_t>(i) * d + j] = a.product(i, j);
  }
  for (int i = 0; i < db; ++i) {
    star[da + i] = shift(b.star(i), da);
    for (int j = 0; j < db; ++j) mult[static_cast<size_t>(da + i) * d + da + j] = shift(b.product(i, j), da);
  }
  return FinCStar(d, std::move(mult), std::move(star), a.label() + "+" + b.label());
}

FinCStar change_basis(const FinCStar& a, const std::vector<DenseVec>& t) {
  const int d = a.dim();
  // Column k of inv_tt solves T^T w = e_k, so w = inv_tt * v converts old
  // coordinates v into new ones.
  std::vector<DenseVec> tt(static_cast<size_t>(d), DenseVec(static_cast<size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) tt[j][i] = t[i][j];
  std::vector<DenseVec> inv_cols;
  for (int k = 0; k < d; ++k) {
    DenseVec e(static_cast<size_t>(d));
    e[k] = Cq(1);
    auto col = solve(tt, e);
    if (!col) throw StructureError("change_basis: matrix is singular");
    inv_cols.push_back(std::move(*col));
  }
  auto to_new = [&](const DenseVec& v) {
    DenseVec w(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k)
      if (!v[k].is_zero())
        for (int m = 0; m < d; ++m) w[m] += inv_cols[k][m] * v[k];
    return to_sparse(w);
  };
  std::vector<SparseVec> mult(static_cast<size_t>(d) * d);
  std::vector<SparseVec> star(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    star[i] = to_new(a.adjoint(t[i]));
    for (int k = 0; k < d; ++k) mult[static_cast<size_t>(i) * d + k] = to_new(a.multiply(t[i], t[k]));
  }
  return FinCStar(d, std::move(mult), std::move(star), a.label() + "'");
}

std::vector<DenseVec> center(const FinCStar& a) {
  const int d = a.dim();
  std::vector<DenseVec> rows;
  for (int j = 0; j < d; ++j) {
    std::vector<DenseVec> block(static_cast<size_t>(d), DenseVec(static_cast<size_t>(d)));
    for (int i = 0; i < d; ++i) {
      for (const auto& [k, c] : a.product(i, j)) block[k][i] += c;
      for (const auto& [k, c] : a.product(j, i)) block[k][i] -= c;
    }
    for (auto& r : block) rows.push_back(std::move(r));
  }
  return kernel(std::move(rows), d);
}

CMatrix to_cmatrix(const SparseMatrix& m) {
  CMatrix out = CMatrix::Zero(m.rows, m.cols);
  for (int c = 0; c < m.cols; ++c)
    for (const auto& [r, v] : m.columns[c]) out(r, c) = v.to_complex();
  return out;
}

CVector to_cvector(const DenseVec& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].to_complex();
  return out;
}

CVector to_cvector(const SparseVec& v, int n) {
  CVector out = CVector::Zero(n);
  for (const auto& [k, x] : v) out(k) = x.to_complex();
  return out;
}

namespace {

// Groups sorted eigenvalues into clusters of numerically equal values.
std::vector<std::vector<int>> cluster(const Eigen::VectorXd& values, double tol) {
  std::vector<std::vector<int>> out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (out.empty() || values(i) - values(out.back().back()) > tol) out.emplace_back();
    out.back().push_back(static_cast<int>(i));
  }
  return out;
}

DenseVec random_element(const FinCStar& a, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-6, 6);
  DenseVec r(static_cast<size_t>(a.dim()));
  for (auto& x : r) x = Cq(Rational(dist(rng)), Rational(dist(rng)));
  return r;
}

bool perfect_square(int n, int& root) {
  root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return root * root == n;
}

}  // namespace

Wedderburn compute_wedderburn(const FinCStar& a, const WedderburnOptions& opts) {
  const int d = a.dim();

  // Gram matrix of tau(x^* y); positive definite iff a is a C*-algebra.
  std::vector<DenseVec> gram(static_cast<size_t>(d), DenseVec(static_cast<size_t>(d)));
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      SparseVec p = a.multiply(a.star(k), SparseVec{{l, Cq(1)}});
      gram[k][l] = a.trace(p);
    }
  CMatrix T(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) T(k, l) = gram[k][l].to_complex();
  Eigen::LLT<CMatrix> llt(T);
  if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().real().array() <= 1e-12).any()) {
    auto ker = kernel(gram, d);
    if (!ker.empty())
      throw NotSemisimple("algebra is not semisimple: element x with tau(x^*x) = 0 found", ker.front());
    throw NotSemisimple("involution is not positive: tau(x^*x) takes negative values", {});
  }
  const CMatrix L = llt.matrixL();
  const CMatrix Ladj = L.adjoint();
  const CMatrix LadjInv = Ladj.inverse();
  auto to_ortho = [&](const CMatrix& m) -> CMatrix { return Ladj * m * LadjInv; };

  std::vector<CMatrix> rho(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) rho[i] = to_ortho(to_cmatrix(a.left_mult(i)));
  auto rho_of = [&](const DenseVec& x, bool right) {
    CMatrix m = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      if (x[i].is_zero()) continue;
      m += x[i].to_complex() * (right ? to_ortho(to_cmatrix(a.right_mult(i))) : rho[i]);
    }
    return m;
  };

  const std::vector<DenseVec> zbasis = center(a);
  const int k = static_cast<int>(zbasis.size());
  std::mt19937_64 rng(opts.seed);

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    // Random self-adjoint central element: its eigenspaces are the blocks.
    std::uniform_int_distribution<int> dist(-9, 9);
    DenseVec z(static_cast<size_t>(d));
    for (const auto& w : zbasis) {
      const Cq c(Rational(dist(rng)), Rational(dist(rng)));
      for (int i = 0; i < d; ++i) z[i] += c * w[i];
    }
    DenseVec s = z;
    const DenseVec zs = a.adjoint(z);
    for (int i = 0; i < d; ++i) s[i] += zs[i];
    CMatrix S = rho_of(s, false);
    S = (S + S.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(S);
    const double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
    const auto clusters = cluster(es.eigenvalues(), 1e-7 * scale);
    if (static_cast<int>(clusters.size()) != k) continue;

    struct Block {
      int n;
      double key;
      CMatrix frame;  // d x n, orthonormal basis of a minimal left ideal
    };
    std::vector<Block> blocks;
    bool ok = true;
    for (const auto& cl : clusters) {
      int n = 0;
      if (!perfect_square(static_cast<int>(cl.size()), n)) {
        ok = false;
        break;
      }
      CMatrix W(d, static_cast<Eigen::Index>(cl.size()));
      for (std::size_t c = 0; c < cl.size(); ++c) W.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cl[c]);
      CMatrix frame;
      bool found = false;
      for (int inner = 0; inner < opts.max_attempts && !found; ++inner) {
        // Right multiplication by a generic self-adjoint h generates a
        // maximal abelian subalgebra of the commutant; one of its
        // eigenspaces inside W is a minimal left ideal.
        DenseVec r = random_element(a, rng);
        DenseVec h = r;
        const DenseVec rs = a.adjoint(r);
        for (int i = 0; i < d; ++i) h[i] += rs[i];
        CMatrix H = W.adjoint() * rho_of(h, true) * W;
        H = (H + H.adjoint()).eval() / 2.0;
        Eigen::SelfAdjointEigenSolver<CMatrix> hs(H);
        const double hscale = 1.0 + hs.eigenvalues().cwiseAbs().maxCoeff();
        const auto hcl = cluster(hs.eigenvalues(), 1e-7 * hscale);
        if (static_cast<int>(hcl.size()) != n) continue;
        if (std::any_of(hcl.begin(), hcl.end(), [n](const auto& c) { return static_cast<int>(c.size()) != n; })) continue;
        CMatrix Y(W.cols(), n);
        for (int c = 0; c < n; ++c) Y.col(c) = hs.eigenvectors().col(hcl.front()[c]);
        frame = W * Y;
        found = true;
      }
      if (!found) {
        ok = false;
        break;
      }
      blocks.push_back({n, es.eigenvalues()(cl.front()), frame});
    }
    if (!ok) continue;
    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) { return x.n > y.n; });

    Wedderburn w;
    for (const auto& b : blocks) w.dimension_vector.push_back(b.n);
    w.embed.resize(d);
    w.to_blocks = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      Eigen::Index off = 0;
      for (const auto& b : blocks) {
        CMatrix m = b.frame.adjoint() * rho[i] * b.frame;
        w.to_blocks.block(off, i, m.size(), 1) = Eigen::Map<const CVector>(m.data(), m.size());
        off += m.size();
        w.embed[i].push_back(std::move(m));
      }
    }
    Eigen::FullPivLU<CMatrix> lu(w.to_blocks);
    if (lu.rank() != d) continue;
    w.from_blocks = lu.inverse();

    // Validate: homomorphism and *-preservation on the basis.
    double residual = 0.0, mag = 1.0;
    for (int i = 0; i < d; ++i) {
      const auto star_img = w.embed_element(to_cvector(a.star(i), d));
      for (int b = 0; b < w.blocks(); ++b) {
        mag = std::max(mag, w.embed[i][b].cwiseAbs().maxCoeff());
        residual = std::max(residual, (star_img[b] - w.embed[i][b].adjoint()).cwiseAbs().maxCoeff());
      }
      for (int j = 0; j < d; ++j) {
        const auto prod_img = w.embed_element(to_cvector(a.product(i, j), d));
        for (int b = 0; b < w.blocks(); ++b)
          residual = std::max(residual, (prod_img[b] - w.embed[i][b] * w.embed[j][b]).cwiseAbs().maxCoeff());
      }
    }
    w.residual = residual / (mag * mag);
    if (w.residual > opts.tolerance) continue;
    return w;
  }
  throw std::runtime_error("wedderburn: no generic splitting element found for " + a.label());
}

}  // namespace qf
