// The quantization functor at finite scale: groupoids to convolution
// algebras, principal bibundles to Hilbert bimodules.
#pragma once

#include <optional>
#include <string>

#include "qfunctor/groupoid.hpp"
#include "qfunctor/hilbmod.hpp"

namespace qf {

/// C*(G), labelled "A*(G)" to record the classical object it came from.
AlgebraPtr quantize_object(const FiniteGroupoid& g);

/// Functions on the carrier with the counting-measure actions and inner
/// product. Algebras may be supplied so that composable arrows share them.
HilbertBimodule quantize_arrow(const Bibundle& m, AlgebraPtr left = nullptr, AlgebraPtr right = nullptr);

/// Exact equality of all tables (same algebras, same basis).
bool identical(const HilbertBimodule& e, const HilbertBimodule& f);

struct FunctorialityReport {
  bool ok = false;
  int composite_dim = 0;   // dim Q(M * N)
  int tensor_dim = 0;      // dim Q(M) (x) Q(N)
  IntMatrix composite_mult;
  IntMatrix tensor_mult;
  std::optional<Intertwiner> witness;
  std::string detail;
};

FunctorialityReport check_functoriality(const Bibundle& m, const Bibundle& n, double tolerance = 1e-9);

/// Q(id_G) equals the canonical bimodule of C*(G) table for table.
bool check_identity(const FiniteGroupoid& g);

struct MoritaPreservation {
  bool in_hypothesis = false;  // input is biprincipal
  MoritaReport report;
  bool ok() const { return !in_hypothesis || report.equivalence(); }
};

MoritaPreservation check_morita_preservation(const Bibundle& m);

}  // namespace qf
