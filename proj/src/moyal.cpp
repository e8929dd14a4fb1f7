#include "qfunctor/moyal.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qfunctor/errors.hpp"
#include "qfunctor/kernels.hpp"

namespace qf {

namespace {

void check_same(const PhasePoly& f, const PhasePoly& g) {
  if (f.n() != g.n()) throw TypeMismatch("phase-space polynomials in different dimensions");
}

Integer falling(int a, int k) {
  Integer r = 1;
  for (int j = 0; j < k; ++j) r *= a - j;
  return r;
}

Integer factorial(int k) { return falling(k, k); }

// All ways of writing k as an ordered sum of `parts` nonnegative integers.
std::vector<std::vector<int>> compositions(int k, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<size_t>(parts), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == parts - 1) {
      cur[static_cast<size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[static_cast<size_t>(pos)] = v;
      self(self, pos + 1, left - v);
    }
  };
  if (parts > 0) rec(rec, 0, k);
  return out;
}

Cq power(const Cq& x, int k) {
  Cq r(1);
  for (int j = 0; j < k; ++j) r *= x;
  return r;
}

struct VarPower {
  bool is_q;
  int index;
  int power;
};

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  PhasePoly run(int n) {
    std::vector<std::pair<std::vector<VarPower>, Cq>> terms;
    skip();
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      auto [vars, c] = term();
      terms.emplace_back(std::move(vars), sign < 0 ? -c : c);
      first = false;
    }
    if (first) fail("empty polynomial");
    if (n == 0) n = std::max(1, max_index_);
    if (max_index_ > n) fail("variable index exceeds n = " + std::to_string(n));
    PhasePoly out(n);
    for (const auto& [vars, c] : terms) {
      Exponent e(static_cast<size_t>(2 * n), 0);
      for (const auto& v : vars) e[static_cast<size_t>((v.is_q ? 0 : n) + v.index - 1)] += v.power;
      out.add_term(e, c);
    }
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool at_digit() const { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  long integer() {
    if (!at_digit()) fail("expected digit");
    long v = 0;
    while (at_digit()) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1'000'000'000L) fail("number too large");
    }
    return v;
  }

  Rational rational() {
    const long num = integer();
    long den = 1;
    if (peek() == '/') {
      ++pos_;
      den = integer();
      if (den == 0) fail("zero denominator");
    }
    return make_rational(num, den);
  }

  // rational, optionally suffixed by i
  Cq number() {
    Rational r = rational();
    if (peek() == 'i') {
      ++pos_;
      return Cq(0, r);
    }
    return Cq(r);
  }

  void factor(std::vector<VarPower>& vars, Cq& c) {
    const char ch = peek();
    if (ch == '(') {
      // (a+bi)
      ++pos_;
      skip();
      bool neg = false;
      if (peek() == '-' || peek() == '+') neg = s_[pos_++] == '-';
      Cq v = number();
      if (neg) v = -v;
      skip();
      if (peek() == '+' || peek() == '-') {
        const bool neg2 = s_[pos_++] == '-';
        skip();
        Cq w = number();
        if (w.is_real()) fail("expected imaginary part");
        v += neg2 ? -w : w;
        skip();
      }
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      c *= v;
    } else if (at_digit()) {
      c *= number();
    } else if (ch == 'i') {
      ++pos_;
      c *= Cq::i();
    } else if (ch == 'q' || ch == 'p') {
      ++pos_;
      int idx = 1;
      if (at_digit()) idx = static_cast<int>(integer());
      if (idx < 1) fail("variable index must be >= 1");
      max_index_ = std::max(max_index_, idx);
      int pw = 1;
      skip();
      if (peek() == '^') {
        ++pos_;
        skip();
        pw = static_cast<int>(integer());
      }
      vars.push_back({ch == 'q', idx, pw});
    } else {
      fail(ch ? std::string("unexpected '") + ch + "'" : std::string("unexpected end of input"));
    }
    skip();
  }

  std::pair<std::vector<VarPower>, Cq> term() {
    std::vector<VarPower> vars;
    Cq c(1);
    factor(vars, c);
    for (;;) {
      if (peek() == '*') {
        ++pos_;
        skip();
        factor(vars, c);
      } else if (peek() == '(' || peek() == 'i' || peek() == 'q' || peek() == 'p' || at_digit()) {
        factor(vars, c);
      } else {
        break;
      }
    }
    return {std::move(vars), c};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int max_index_ = 0;
};

}  // namespace

PhasePoly PhasePoly::constant(int n, const Cq& c) {
  PhasePoly f(n);
  f.add_term(Exponent(static_cast<size_t>(2 * n), 0), c);
  return f;
}

PhasePoly PhasePoly::q(int n, int i) {
  if (i < 1 || i > n) throw StructureError("q index out of range");
  Exponent e(static_cast<size_t>(2 * n), 0);
  e[static_cast<size_t>(i - 1)] = 1;
  PhasePoly f(n);
  f.add_term(e, Cq(1));
  return f;
}

PhasePoly PhasePoly::p(int n, int i) {
  if (i < 1 || i > n) throw StructureError("p index out of range");
  Exponent e(static_cast<size_t>(2 * n), 0);
  e[static_cast<size_t>(n + i - 1)] = 1;
  PhasePoly f(n);
  f.add_term(e, Cq(1));
  return f;
}

int PhasePoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

void PhasePoly::add_term(const Exponent& e, const Cq& c) {
  if (static_cast<int>(e.size()) != 2 * n_) throw StructureError("exponent length differs from 2n");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PhasePoly PhasePoly::derivative(int var, int times) const {
  PhasePoly out(n_);
  for (const auto& [e, c] : terms_) {
    const int a = e[static_cast<size_t>(var)];
    if (a < times) continue;
    Exponent f = e;
    f[static_cast<size_t>(var)] -= times;
    out.add_term(f, c * Cq(Rational(falling(a, times))));
  }
  return out;
}

PhasePoly PhasePoly::conj() const {
  PhasePoly out(n_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.conj());
  return out;
}

std::string PhasePoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (int v = 0; v < 2 * n_; ++v) {
      const int pw = e[static_cast<size_t>(v)];
      if (pw == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += (v < n_ ? "q" : "p") + std::to_string(v < n_ ? v + 1 : v - n_ + 1);
      if (pw > 1) mono += "^" + std::to_string(pw);
    }
    std::string t;
    if (mono.empty())
      t = c.str();
    else if (c == Cq(1))
      t = mono;
    else if (c == Cq(-1))
      t = "-" + mono;
    else
      t = c.str() + "*" + mono;
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

PhasePoly& PhasePoly::operator+=(const PhasePoly& o) {
  check_same(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

PhasePoly& PhasePoly::operator-=(const PhasePoly& o) {
  check_same(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

PhasePoly operator*(const PhasePoly& a, const PhasePoly& b) {
  check_same(a, b);
  PhasePoly out(a.n_);
  Exponent e(static_cast<size_t>(2 * a.n_));
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
      out.add_term(e, ca * cb);
    }
  return out;
}

PhasePoly operator*(const Cq& s, const PhasePoly& a) {
  PhasePoly out(a.n_);
  if (s.is_zero()) return out;
  for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, s * c);
  return out;
}

PhasePoly PhasePoly::parse(const std::string& text, int n) { return PolyParser(text).run(n); }

PhasePoly poisson_bracket(const PhasePoly& f, const PhasePoly& g) {
  check_same(f, g);
  const int n = f.n();
  PhasePoly out(n);
  for (int i = 0; i < n; ++i) {
    out += f.derivative(i) * g.derivative(n + i);
    out -= f.derivative(n + i) * g.derivative(i);
  }
  return out;
}

FormalSeries::FormalSeries(int n, int k) : K(k), coeffs(static_cast<size_t>(k + 1), PhasePoly(n)) {}

FormalSeries FormalSeries::of(const PhasePoly& f, int k) {
  FormalSeries s(f.n(), k);
  s.coeffs[0] = f;
  return s;
}

FormalSeries FormalSeries::conj() const {
  FormalSeries out = *this;
  for (auto& c : out.coeffs) c = c.conj();
  return out;
}

std::string FormalSeries::str() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k <= K; ++k) {
    const auto& c = coeffs[static_cast<size_t>(k)];
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << c.str() << ")";
    if (k == 1) os << "*h";
    if (k > 1) os << "*h^" << k;
    first = false;
  }
  if (first) os << "0";
  os << " + O(h^" << K + 1 << ")";
  return os.str();
}

FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) {
  const int K = std::min(a.K, b.K);
  FormalSeries out(a.coeffs.at(0).n(), K);
  for (int k = 0; k <= K; ++k) out.coeffs[static_cast<size_t>(k)] = a.coeffs[static_cast<size_t>(k)] + b.coeffs[static_cast<size_t>(k)];
  return out;
}

FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) {
  const int K = std::min(a.K, b.K);
  FormalSeries out(a.coeffs.at(0).n(), K);
  for (int k = 0; k <= K; ++k) out.coeffs[static_cast<size_t>(k)] = a.coeffs[static_cast<size_t>(k)] - b.coeffs[static_cast<size_t>(k)];
  return out;
}

PhasePoly star_term(const PhasePoly& f, const PhasePoly& g, int k) {
  check_same(f, g);
  const int n = f.n();
  PhasePoly out(n);
  if (k == 0) return f * g;
  const auto split = compositions(k, 2 * n);
  const Cq base = power(Cq(Rational(0), Rational(-1, 2)), k);
  Exponent e(static_cast<size_t>(2 * n));
  for (const auto& [ea, ca] : f.terms())
    for (const auto& [eb, cb] : g.terms()) {
      const Cq cc = ca * cb;
      for (const auto& d : split) {
        // alpha = d[0..n), beta = d[n..2n): f gets dq^alpha dp^beta,
        // g gets dp^alpha dq^beta
        Integer num = 1, den = 1;
        int beta_total = 0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
          const int al = d[static_cast<size_t>(i)], be = d[static_cast<size_t>(n + i)];
          const int fq = ea[static_cast<size_t>(i)], fp = ea[static_cast<size_t>(n + i)];
          const int gq = eb[static_cast<size_t>(i)], gp = eb[static_cast<size_t>(n + i)];
          if (fq < al || fp < be || gp < al || gq < be) {
            ok = false;
            break;
          }
          num *= falling(fq, al) * falling(fp, be) * falling(gp, al) * falling(gq, be);
          den *= factorial(al) * factorial(be);
          beta_total += be;
          e[static_cast<size_t>(i)] = fq - al + gq - be;
          e[static_cast<size_t>(n + i)] = fp - be + gp - al;
        }
        if (!ok) continue;
        Rational r(num, den);
        r.canonicalize();
        if (beta_total % 2) r = -r;
        out.add_term(e, cc * base * Cq(r));
      }
    }
  return out;
}

namespace {

FormalSeries series_star(const FormalSeries& f, const FormalSeries& g, bool parallel) {
  const int K = std::min(f.K, g.K);
  const int n = f.coeffs.at(0).n();
  if (g.coeffs.at(0).n() != n) throw TypeMismatch("series in different dimensions");
  FormalSeries out(n, K);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int m = 0; m <= K; ++m) {
    PhasePoly acc(n);
    for (int a = 0; a <= m; ++a)
      for (int b = 0; a + b <= m; ++b) {
        const auto& fa = f.coeffs[static_cast<size_t>(a)];
        const auto& gb = g.coeffs[static_cast<size_t>(b)];
        if (fa.is_zero() || gb.is_zero()) continue;
        acc += star_term(fa, gb, m - a - b);
      }
    out.coeffs[static_cast<size_t>(m)] = std::move(acc);
  }
  return out;
}

}  // namespace

FormalSeries star(const FormalSeries& f, const FormalSeries& g) { return series_star(f, g, true); }

FormalSeries star_serial(const FormalSeries& f, const FormalSeries& g) { return series_star(f, g, false); }

FormalSeries star(const PhasePoly& f, const PhasePoly& g, int K) {
  if (K < 0) throw HypothesisError("truncation order must be >= 0");
  return star(FormalSeries::of(f, K), FormalSeries::of(g, K));
}

bool check_dirac(const PhasePoly& f, const PhasePoly& g) {
  const FormalSeries c = star(f, g, 1) - star(g, f, 1);
  return c.coeffs[0].is_zero() && c.coeffs[1] == Cq(Rational(0), Rational(-1)) * poisson_bracket(f, g);
}

bool check_associativity(const PhasePoly& f, const PhasePoly& g, const PhasePoly& h, int K) {
  const FormalSeries F = FormalSeries::of(f, K), G = FormalSeries::of(g, K), H = FormalSeries::of(h, K);
  return star(star(F, G), H) == star(F, star(G, H));
}

bool check_unit(const PhasePoly& f, int K) {
  const PhasePoly one = PhasePoly::constant(f.n(), Cq(1));
  const FormalSeries expect = FormalSeries::of(f, K);
  return star(one, f, K) == expect && star(f, one, K) == expect;
}

bool check_hermiticity(const PhasePoly& f, const PhasePoly& g, int K) {
  return star(f, g, K).conj() == star(g.conj(), f.conj(), K);
}

std::vector<std::vector<Rational>> symplectic_defect(const std::vector<std::vector<Rational>>& S) {
  const std::size_t m = S.size();
  if (m % 2 || m == 0) throw StructureError("symplectic matrix must be 2n x 2n");
  for (const auto& row : S)
    if (row.size() != m) throw StructureError("symplectic matrix must be square");
  const std::size_t n = m / 2;
  auto J = [n](std::size_t i, std::size_t j) -> int {
    if (i < n && j == i + n) return 1;
    if (i >= n && j + n == i) return -1;
    return 0;
  };
  std::vector<std::vector<Rational>> out(m, std::vector<Rational>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Rational s = 0;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          if (int jab = J(a, b)) s += S[a][i] * jab * S[b][j];
      out[i][j] = s - J(i, j);
    }
  return out;
}

bool is_symplectic(const std::vector<std::vector<Rational>>& S) {
  for (const auto& row : symplectic_defect(S))
    for (const auto& x : row)
      if (sgn(x) != 0) return false;
  return true;
}

PhasePoly pullback(const PhasePoly& f, const AffineMap& L) {
  const int n = f.n();
  const std::size_t m = static_cast<size_t>(2 * n);
  if (L.S.size() != m || L.v.size() != m) throw TypeMismatch("affine map dimension differs from 2n");
  std::vector<PhasePoly> lin;
  for (std::size_t j = 0; j < m; ++j) {
    PhasePoly l = PhasePoly::constant(n, Cq(L.v[j]));
    for (std::size_t k = 0; k < m; ++k) {
      Exponent e(m, 0);
      e[k] = 1;
      l.add_term(e, Cq(L.S[j][k]));
    }
    lin.push_back(std::move(l));
  }
  std::vector<std::vector<PhasePoly>> powers(m, {PhasePoly::constant(n, Cq(1))});
  auto pw = [&](std::size_t j, int k) -> const PhasePoly& {
    while (static_cast<int>(powers[j].size()) <= k) powers[j].push_back(powers[j].back() * lin[j]);
    return powers[j][static_cast<size_t>(k)];
  };
  PhasePoly out(n);
  for (const auto& [e, c] : f.terms()) {
    PhasePoly t = PhasePoly::constant(n, c);
    for (std::size_t j = 0; j < m; ++j)
      if (e[j]) t = t * pw(j, e[j]);
    out += t;
  }
  return out;
}

FormalSeries pullback(const FormalSeries& f, const AffineMap& L) {
  FormalSeries out = f;
  for (auto& c : out.coeffs) c = pullback(c, L);
  return out;
}

bool affine_covariance(const PhasePoly& f, const PhasePoly& g, const AffineMap& L, int K) {
  const auto defect = symplectic_defect(L.S);
  bool ok = true;
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < defect.size(); ++i) {
    os << (i ? ", " : "") << "[";
    for (std::size_t j = 0; j < defect.size(); ++j) {
      os << (j ? ", " : "") << defect[i][j];
      if (sgn(defect[i][j]) != 0) ok = false;
    }
    os << "]";
  }
  os << "]";
  if (!ok) throw HypothesisError("S is not symplectic; S^T J S - J = " + os.str());
  return star(pullback(f, L), pullback(g, L), K) == pullback(star(f, g, K), L);
}

AffineMap random_symplectic(std::mt19937_64& rng, int n) {
  const std::size_t m = static_cast<size_t>(2 * n);
  std::uniform_int_distribution<int> small(-2, 2), pick(0, 3), idx(0, n - 1), den(1, 3);
  auto identity = [m] {
    std::vector<std::vector<Rational>> I(m, std::vector<Rational>(m, 0));
    for (std::size_t i = 0; i < m; ++i) I[i][i] = 1;
    return I;
  };
  auto mul = [m](const std::vector<std::vector<Rational>>& a, const std::vector<std::vector<Rational>>& b) {
    std::vector<std::vector<Rational>> c(m, std::vector<Rational>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k)
        if (sgn(a[i][k]) != 0)
          for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  auto S = identity();
  for (int step = 0; step < 4; ++step) {
    auto G = identity();
    const std::size_t u = static_cast<size_t>(n);
    switch (pick(rng)) {
      case 0:
      case 1: {
        // [[I, A], [0, I]] or its transpose with A symmetric
        const bool upper = pick(rng) % 2 == 0;
        for (std::size_t i = 0; i < u; ++i)
          for (std::size_t j = i; j < u; ++j) {
            const Rational a = make_rational(small(rng), den(rng));
            if (upper) {
              G[i][u + j] = a;
              G[j][u + i] = a;
            } else {
              G[u + i][j] = a;
              G[u + j][i] = a;
            }
          }
        break;
      }
      case 2: {
        const std::size_t i = static_cast<size_t>(idx(rng));
        G[i][i] = 0;
        G[u + i][u + i] = 0;
        G[i][u + i] = 1;
        G[u + i][i] = -1;
        break;
      }
      default: {
        // diag(M, M^-T), M = I + c E_ij
        if (n < 2) {
          const Rational c = make_rational(small(rng) == 0 ? 2 : 1 + std::abs(small(rng)), den(rng));
          G[0][0] = c;
          G[u][u] = 1 / c;
        } else {
          const std::size_t i = static_cast<size_t>(idx(rng));
          std::size_t j = static_cast<size_t>(idx(rng));
          if (j == i) j = (i + 1) % u;
          const Rational c = make_rational(small(rng), den(rng));
          G[i][j] = c;
          G[u + j][u + i] = -c;
        }
      }
    }
    S = mul(G, S);
  }
  AffineMap L{S, std::vector<Rational>(m)};
  for (auto& x : L.v) x = make_rational(small(rng), den(rng));
  return L;
}

PhasePoly random_poly(std::mt19937_64& rng, int n, int degree, int terms) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), coin(0, 1), var(0, 2 * n - 1), deg(0, degree);
  PhasePoly f(n);
  for (int t = 0; t < terms; ++t) {
    Exponent e(static_cast<size_t>(2 * n), 0);
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) ++e[static_cast<size_t>(var(rng))];
    Cq c(make_rational(num(rng), den(rng)));
    if (coin(rng)) c += Cq(Rational(0), make_rational(num(rng), den(rng)));
    f.add_term(e, c);
  }
  return f;
}

}  // namespace qf
