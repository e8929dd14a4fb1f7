#include "qfunctor/strictfield.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qfunctor/errors.hpp"
#include "qfunctor/kernels.hpp"

namespace qf {

namespace {

constexpr double kPi = std::numbers::pi;

int mod(long a, int q) {
  const long r = a % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class TrigParser {
 public:
  explicit TrigParser(const std::string& s) : s_(s) {}

  TrigPoly run() {
    TrigPoly out;
    skip();
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      std::complex<double> c = 1;
      TrigPoly::Mode a{0, 0};
      if (peek() == 'e') {
        a = mode();
      } else {
        c = coefficient();
        skip();
        if (peek() == '*') {
          ++pos_;
          skip();
          a = mode();
        } else if (peek() == 'e') {
          a = mode();
        }
      }
      out.add(a, sign * c);
      skip();
      first = false;
    }
    if (first) fail("empty symbol");
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("symbol '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  double real() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || (*begin != '.' && !std::isdigit(static_cast<unsigned char>(*begin)))) fail("expected number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::complex<double> number() {
    const double v = real();
    if (peek() == 'i') {
      ++pos_;
      return {0, v};
    }
    return v;
  }

  std::complex<double> coefficient() {
    if (peek() != '(') return number();
    ++pos_;
    skip();
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = s_[pos_++] == '-';
    std::complex<double> v = number();
    if (neg) v = -v;
    skip();
    if (peek() == '+' || peek() == '-') {
      const bool neg2 = s_[pos_++] == '-';
      skip();
      std::complex<double> w = number();
      v += neg2 ? -w : w;
      skip();
    }
    if (peek() != ')') fail("expected ')'");
    ++pos_;
    return v;
  }

  int integer() {
    skip();
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = s_[pos_++] == '-';
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1'000'000) fail("mode too large");
    }
    skip();
    return static_cast<int>(neg ? -v : v);
  }

  TrigPoly::Mode mode() {
    if (peek() != 'e') fail("expected e(m,n)");
    ++pos_;
    skip();
    if (peek() != '(') fail("expected '('");
    ++pos_;
    const int m = integer();
    if (peek() != ',') fail("expected ','");
    ++pos_;
    const int n = integer();
    if (peek() != ')') fail("expected ')'");
    ++pos_;
    return {m, n};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

TrigPoly TrigPoly::mode(int m, int n, std::complex<double> c) {
  TrigPoly f;
  f.add({m, n}, c);
  return f;
}

TrigPoly TrigPoly::parse(const std::string& text) { return TrigParser(text).run(); }

void TrigPoly::add(const Mode& a, std::complex<double> c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(a, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

TrigPoly TrigPoly::conj() const {
  TrigPoly out;
  for (const auto& [a, c] : terms_) out.add({-a.first, -a.second}, std::conj(c));
  return out;
}

bool TrigPoly::is_real(double tol) const {
  const TrigPoly c = conj();
  for (const auto& [a, v] : terms_) {
    auto it = c.terms_.find(a);
    if (it == c.terms_.end() || std::abs(it->second - v) > tol) return false;
  }
  return c.terms_.size() == terms_.size();
}

std::complex<double> TrigPoly::operator()(double x, double y) const {
  std::complex<double> s = 0;
  for (const auto& [a, c] : terms_) s += c * std::polar(1.0, 2 * kPi * (a.first * x + a.second * y));
  return s;
}

std::string TrigPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : terms_) {
    std::string t;
    if (c == 1.0)
      t = "";
    else if (c == -1.0)
      t = "-";
    else if (c.imag() == 0)
      t = shortest(c.real());
    else if (c.real() == 0)
      t = shortest(c.imag()) + "i";
    else
      t = "(" + shortest(c.real()) + (c.imag() < 0 ? "-" : "+") + shortest(std::abs(c.imag())) + "i)";
    if (!t.empty() && t != "-") t += "*";
    t += "e(" + std::to_string(a.first) + "," + std::to_string(a.second) + ")";
    if (first)
      os << t;
    else if (t[0] == '-')
      os << " - " << t.substr(1);
    else
      os << " + " << t;
    first = false;
  }
  return os.str();
}

TrigPoly operator+(TrigPoly a, const TrigPoly& b) {
  for (const auto& [m, c] : b.terms_) a.add(m, c);
  return a;
}

TrigPoly operator*(std::complex<double> s, const TrigPoly& a) {
  TrigPoly out;
  for (const auto& [m, c] : a.terms_) out.add(m, s * c);
  return out;
}

TrigPoly torus_bracket(const TrigPoly& f, const TrigPoly& g) {
  TrigPoly out;
  for (const auto& [a, c] : f.terms())
    for (const auto& [b, d] : g.terms()) {
      const long wedge = static_cast<long>(a.first) * b.second - static_cast<long>(a.second) * b.first;
      if (wedge) out.add({a.first + b.first, a.second + b.second}, -2 * kPi * static_cast<double>(wedge) * c * d);
    }
  return out;
}

FuzzyRep fuzzy_rep(int q) {
  if (q < 2 || q > 512) throw HypothesisError("fuzzy torus needs 2 <= q <= 512, got " + std::to_string(q));
  FuzzyRep r;
  r.q = q;
  r.U = CMatrix::Zero(q, q);
  r.V = CMatrix::Zero(q, q);
  for (int k = 0; k < q; ++k) {
    r.U(k, k) = std::polar(1.0, 2 * kPi * k / q);
    r.V((k + 1) % q, k) = 1;
  }
  return r;
}

CMatrix FuzzyRep::quantize(const TrigPoly& f) const {
  CMatrix out = CMatrix::Zero(q, q);
  for (const auto& [a, c] : f.terms()) {
    const auto [m, n] = a;
    // U^m V^n e_k = omega^{m (k+n)} e_{k+n}
    const std::complex<double> weyl = std::polar(1.0, -kPi * mod(static_cast<long>(m) * n, 2 * q) / q);
    for (int k = 0; k < q; ++k) {
      const int row = mod(static_cast<long>(k) + n, q);
      out(row, k) += c * weyl * std::polar(1.0, 2 * kPi * mod(static_cast<long>(m) * row, q) / q);
    }
  }
  return out;
}

double matrix_norm(const CMatrix& m) {
  if (m.size() == 0) return 0;
  const CMatrix g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<CMatrix> gs(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, gs.eigenvalues().maxCoeff()));
}

double dirac_defect(const TrigPoly& f, const TrigPoly& g, int q) {
  const FuzzyRep r = fuzzy_rep(q);
  const CMatrix F = r.quantize(f), G = r.quantize(g);
  const CMatrix D = std::complex<double>(0, q) * (F * G - G * F) - r.quantize(torus_bracket(f, g));
  return matrix_norm(D);
}

double dirac_defect_closed_form(int q) { return std::abs(2.0 * q * std::sin(kPi / q) - 2 * kPi); }

namespace {

void check_range(const std::vector<int>& qs) {
  for (int q : qs)
    if (q < 2 || q > 512) throw HypothesisError("fuzzy torus needs 2 <= q <= 512, got " + std::to_string(q));
}

DefectRow defect_row(const TrigPoly& f, const TrigPoly& g, int q) {
  const FuzzyRep r = fuzzy_rep(q);
  const CMatrix F = r.quantize(f), G = r.quantize(g);
  const CMatrix D = std::complex<double>(0, q) * (F * G - G * F) - r.quantize(torus_bracket(f, g));
  return {q, 1.0 / q, matrix_norm(D), matrix_norm(F)};
}

std::vector<DefectRow> sweep(const TrigPoly& f, const TrigPoly& g, const std::vector<int>& qs, bool parallel) {
  check_range(qs);
  std::vector<DefectRow> rows(qs.size());
  const long count = static_cast<long>(qs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < count; ++i) rows[static_cast<size_t>(i)] = defect_row(f, g, qs[static_cast<size_t>(i)]);
  return rows;
}

std::vector<NormSample> section(const TrigPoly& f, const std::vector<int>& qs, bool parallel) {
  if (qs.empty()) throw HypothesisError("norm_section needs at least one q");
  check_range(qs);
  std::vector<NormSample> out(qs.size() + 1);
  const long count = static_cast<long>(qs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < count; ++i) {
    const int q = qs[static_cast<size_t>(i)];
    out[static_cast<size_t>(i)] = {1.0 / q, matrix_norm(fuzzy_rep(q).quantize(f))};
  }
  out.back() = {0.0, sup_norm(f)};
  return out;
}

}  // namespace

std::vector<DefectRow> defect_sweep(const TrigPoly& f, const TrigPoly& g, const std::vector<int>& qs) {
  return sweep(f, g, qs, true);
}

std::vector<DefectRow> defect_sweep_serial(const TrigPoly& f, const TrigPoly& g, const std::vector<int>& qs) {
  return sweep(f, g, qs, false);
}

double loglog_slope(const std::vector<DefectRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rows) {
    if (!(r.defect > 0)) continue;
    const double x = std::log(r.hbar), y = std::log(r.defect);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw HypothesisError("slope needs at least two rows with nonzero defect");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double sup_norm(const TrigPoly& f) {
  constexpr int grid = 256;
  std::vector<std::pair<double, std::pair<double, double>>> best;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double x = static_cast<double>(i) / grid, y = static_cast<double>(j) / grid;
      best.push_back({std::abs(f(x, y)), {x, y}});
    }
  const std::size_t keep = std::min<std::size_t>(8, best.size());
  std::partial_sort(best.begin(), best.begin() + static_cast<long>(keep), best.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double top = best.front().first;
  for (std::size_t s = 0; s < keep; ++s) {
    auto [v, pt] = best[s];
    auto [x, y] = pt;
    for (double step = 1.0 / grid; step > 1e-9;) {
      bool moved = false;
      for (const auto& [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
        const double nx = x + dx * step, ny = y + dy * step;
        const double w = std::abs(f(nx, ny));
        if (w > v) {
          v = w;
          x = nx;
          y = ny;
          moved = true;
        }
      }
      if (!moved) step /= 2;
    }
    top = std::max(top, v);
  }
  return top;
}

std::vector<NormSample> norm_section(const TrigPoly& f, const std::vector<int>& qs) { return section(f, qs, true); }

std::vector<NormSample> norm_section_serial(const TrigPoly& f, const std::vector<int>& qs) {
  return section(f, qs, false);
}

StrictField strict_field(const TrigPoly& f, const std::vector<int>& qs) {
  return {f, qs, norm_section(f, qs)};
}

UscReport usc_check(const std::vector<NormSample>& samples, double eps, double gap) {
  UscReport r;
  std::vector<NormSample> pos;
  double norm0 = -1;
  for (const auto& s : samples) {
    if (s.hbar == 0)
      norm0 = s.norm;
    else
      pos.push_back(s);
  }
  if (norm0 < 0) throw HypothesisError("usc_check needs the fiber at hbar = 0");
  std::sort(pos.begin(), pos.end(), [](const NormSample& a, const NormSample& b) { return a.hbar < b.hbar; });
  if (norm0 >= eps) r.level_set.push_back(0.0);
  for (const auto& s : pos)
    if (s.norm >= eps) r.level_set.push_back(s.hbar);

  std::ostringstream w;
  w.precision(10);
  // tail: the third of the samples closest to 0
  const std::size_t tail = std::max<std::size_t>(1, pos.size() / 3);
  double tail_max = 0;
  double tail_at = 0;
  for (std::size_t i = 0; i < tail && i < pos.size(); ++i)
    if (pos[i].norm > tail_max) {
      tail_max = pos[i].norm;
      tail_at = pos[i].hbar;
    }
  if (!pos.empty() && tail_max >= eps && norm0 < eps) {
    r.ok = false;
    w << "level set accumulates at 0 (norm " << tail_max << " at hbar " << tail_at << ") but ||f_0|| = " << norm0
      << " < eps; ";
  }
  if (!pos.empty() && tail_max > norm0 + gap) {
    r.ok = false;
    w << "tail norm " << tail_max << " at hbar " << tail_at << " exceeds ||f_0|| = " << norm0 << " by more than "
      << gap << "; ";
  }
  for (std::size_t i = 1; i + 1 < pos.size(); ++i) {
    const auto& a = pos[i - 1];
    const auto& b = pos[i + 1];
    const double t = (pos[i].hbar - a.hbar) / (b.hbar - a.hbar);
    const double interp = a.norm + t * (b.norm - a.norm);
    if (pos[i].norm < interp - gap) {
      r.ok = false;
      w << "drop at hbar " << pos[i].hbar << ": norm " << pos[i].norm << " vs neighbours " << a.norm << ", " << b.norm
        << "; ";
    }
  }
  r.witness = w.str();
  if (r.ok) {
    std::ostringstream ok;
    ok.precision(10);
    ok << "||f_0|| = " << norm0 << ", " << r.level_set.size() << " sampled parameters with norm >= " << eps;
    r.witness = ok.str();
  } else if (!r.witness.empty()) {
    r.witness.resize(r.witness.size() - 2);
  }
  return r;
}

TrigPoly random_trig_poly(std::mt19937_64& rng, int terms, int max_mode, bool real) {
  std::uniform_int_distribution<int> md(-max_mode, max_mode);
  std::uniform_real_distribution<double> mag(0.2, 1.0), ph(0, 2 * kPi);
  TrigPoly f;
  while (static_cast<int>(f.terms().size()) < (real ? 2 * terms : terms)) {
    const int m = md(rng), n = md(rng);
    if (m == 0 && n == 0) continue;
    const std::complex<double> c = std::polar(mag(rng), ph(rng));
    if (real) {
      TrigPoly t = TrigPoly::mode(m, n, 0.5 * c);
      f = f + t + t.conj();
    } else {
      f.add({m, n}, c);
    }
    if (static_cast<int>(f.terms().size()) > (real ? 2 * terms : terms)) break;
  }
  return f;
}

}  // namespace qf
