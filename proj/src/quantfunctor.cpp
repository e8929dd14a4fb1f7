#include "qfunctor/quantfunctor.hpp"

#include <sstream>

#include "qfunctor/errors.hpp"

namespace qf {

AlgebraPtr quantize_object(const FiniteGroupoid& g) {
  auto a = std::make_shared<FinCStar>(convolution_algebra(g));
  a->set_label("A*(G)");
  return a;
}

HilbertBimodule quantize_arrow(const Bibundle& m, AlgebraPtr left, AlgebraPtr right) {
  if (!is_principal(m)) throw HypothesisError("quantize_arrow: bibundle is not principal");
  if (!left) left = quantize_object(m.left);
  if (!right) right = quantize_object(m.right);
  if (left->dim() != m.left.n_arr() || right->dim() != m.right.n_arr())
    throw TypeMismatch("quantize_arrow: algebras do not match the groupoids");
  const int n = m.carrier, ng = m.left.n_arr(), nh = m.right.n_arr();
  std::vector<SparseMatrix> lact(static_cast<size_t>(ng), SparseMatrix(n, n));
  std::vector<SparseMatrix> ract(static_cast<size_t>(nh), SparseMatrix(n, n));
  std::vector<SparseVec> ip(static_cast<size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    for (int g = 0; g < ng; ++g) {
      const int y = m.act_left(g, x);
      if (y != kUndefined) lact[g].columns[x] = {{y, Cq(1)}};
    }
    for (int h = 0; h < nh; ++h) {
      const int y = m.act_right(x, h);
      if (y != kUndefined) ract[h].columns[x] = {{y, Cq(1)}};
    }
    for (int y = 0; y < n; ++y)
      if (m.lanchor[x] == m.lanchor[y]) ip[static_cast<size_t>(x) * n + y] = {{right_translation(m, x, y), Cq(1)}};
  }
  return make_bimodule(std::move(left), std::move(right), std::move(lact), std::move(ract), std::move(ip));
}

bool identical(const HilbertBimodule& e, const HilbertBimodule& f) {
  if (!same_algebra(e.left, f.left) || !same_algebra(e.right, f.right) || e.dim != f.dim) return false;
  for (std::size_t i = 0; i < e.lact.size(); ++i)
    if (!equal(e.lact[i], f.lact[i])) return false;
  for (std::size_t j = 0; j < e.ract.size(); ++j)
    if (!equal(e.ract[j], f.ract[j])) return false;
  for (std::size_t k = 0; k < e.ip.size(); ++k)
    if (!equal(e.ip[k], f.ip[k])) return false;
  return true;
}

FunctorialityReport check_functoriality(const Bibundle& m, const Bibundle& n, double tolerance) {
  FunctorialityReport rep;
  if (!(m.right == n.left)) throw TypeMismatch("check_functoriality: middle groupoids differ");
  const AlgebraPtr a = quantize_object(m.left), b = quantize_object(m.right), c = quantize_object(n.right);
  const HilbertBimodule composite = quantize_arrow(compose_bibundles(m, n), a, c);
  const HilbertBimodule tensor = interior_tensor(quantize_arrow(m, a, b), quantize_arrow(n, b, c));
  rep.composite_dim = composite.dim;
  rep.tensor_dim = tensor.dim;
  rep.composite_mult = multiplicity_matrix(composite);
  rep.tensor_mult = multiplicity_matrix(tensor);
  rep.witness = unitary_equivalent(composite, tensor);
  std::ostringstream os;
  if (!rep.witness) {
    os << "multiplicity matrices differ";
  } else if (rep.witness->residual > tolerance) {
    os << "witness residual " << rep.witness->residual << " exceeds tolerance";
  } else {
    rep.ok = true;
    os << "equivalent, witness residual " << rep.witness->residual;
  }
  rep.detail = os.str();
  return rep;
}

bool check_identity(const FiniteGroupoid& g) {
  const AlgebraPtr a = quantize_object(g);
  return identical(quantize_arrow(identity_bibundle(g), a, a), canonical_bimodule(a));
}

MoritaPreservation check_morita_preservation(const Bibundle& m) {
  MoritaPreservation out;
  out.in_hypothesis = is_biprincipal(m);
  if (out.in_hypothesis) out.report = morita_report(quantize_arrow(m));
  return out;
}

}  // namespace qf
