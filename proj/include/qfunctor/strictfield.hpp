// The fuzzy torus: clock/shift quantization of trigonometric polynomials on
// T^2 at hbar = 1/q, with Dirac defects and fiber norms.
#pragma once

#include <complex>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qfunctor/cstar.hpp"

namespace qf {

/// sum of c_{m,n} e_{m,n}, e_{m,n}(x, y) = exp(2 pi i (m x + n y)).
class TrigPoly {
 public:
  using Mode = std::pair<int, int>;

  TrigPoly() = default;
  static TrigPoly mode(int m, int n, std::complex<double> c = 1.0);
  /// "c*e(m,n) + ..." with c real, "ci", or "(a+bi)"; a bare c is c*e(0,0).
  static TrigPoly parse(const std::string& text);

  const std::map<Mode, std::complex<double>>& terms() const { return terms_; }
  void add(const Mode& a, std::complex<double> c);
  TrigPoly conj() const;
  bool is_real(double tol = 1e-12) const;
  std::complex<double> operator()(double x, double y) const;
  std::string str() const;

  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b);
  friend TrigPoly operator*(std::complex<double> s, const TrigPoly& a);

 private:
  std::map<Mode, std::complex<double>> terms_;
};

/// {e_a, e_b} = -2 pi (m n' - n m') e_{a+b}.
TrigPoly torus_bracket(const TrigPoly& f, const TrigPoly& g);

struct FuzzyRep {
  int q = 2;
  CMatrix U;  // diag(omega^k)
  CMatrix V;  // e_k -> e_{k+1}
  /// e_{m,n} -> exp(-pi i mn / q) U^m V^n.
  CMatrix quantize(const TrigPoly& f) const;
};

/// 2 <= q <= 512.
FuzzyRep fuzzy_rep(int q);

/// Largest singular value.
double matrix_norm(const CMatrix& m);

/// || i q [Q f, Q g] - Q {f, g} ||.
double dirac_defect(const TrigPoly& f, const TrigPoly& g, int q);
/// Exact value for f = e_(1,0), g = e_(0,1).
double dirac_defect_closed_form(int q);

struct DefectRow {
  int q;
  double hbar;
  double defect;
  double norm;  // || Q(f) ||
};

/// One row per q, computed in parallel, in the order of qs.
std::vector<DefectRow> defect_sweep(const TrigPoly& f, const TrigPoly& g, const std::vector<int>& qs);
/// Least-squares slope of log(defect) against log(hbar); rows with zero
/// defect are skipped.
double loglog_slope(const std::vector<DefectRow>& rows);

/// max |f| on T^2: 256 x 256 grid, then pattern search from the best grid
/// points until the step is below 1e-9.
double sup_norm(const TrigPoly& f);

struct NormSample {
  double hbar;
  double norm;
};

/// (1/q, ||Q_{1/q} f||) per q, followed by (0, sup |f|).
std::vector<NormSample> norm_section(const TrigPoly& f, const std::vector<int>& qs);

struct StrictField {
  TrigPoly symbol;
  std::vector<int> qs;
  std::vector<NormSample> norms;  // as from norm_section
  CMatrix fiber(int q) const { return fuzzy_rep(q).quantize(symbol); }
};

StrictField strict_field(const TrigPoly& f, const std::vector<int>& qs);

struct UscReport {
  bool ok = true;
  std::vector<double> level_set;  // hbar values with norm >= eps, 0 included when it qualifies
  std::string witness;
};

/// Sampled upper semicontinuity of hbar -> ||fiber||. Flags a level set
/// accumulating at 0 when the 0-fiber is below eps, a tail exceeding the
/// 0-fiber norm by more than gap, and interior samples that drop more than
/// gap below the interpolation of their neighbours.
UscReport usc_check(const std::vector<NormSample>& samples, double eps, double gap = 0.1);

/// Up to `terms` modes with |m|, |n| <= max_mode and coefficients of modulus
/// <= 1; real = true adds the conjugate modes.
TrigPoly random_trig_poly(std::mt19937_64& rng, int terms = 3, int max_mode = 2, bool real = true);

}  // namespace qf
