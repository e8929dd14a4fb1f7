#include "qfunctor/nctorus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <regex>
#include <sstream>

#include "qfunctor/errors.hpp"

namespace qf {

namespace {

Integer floor_div(const Integer& x, const Integer& y) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return q;
}

Integer isqrt(const Integer& x) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

Integer gcd(const Integer& x, const Integer& y) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return g;
}

const IntMat2 kT{1, 1, 0, 1};
const IntMat2 kTinv{1, -1, 0, 1};
const IntMat2 kS{0, 1, 1, 0};

IntMat2 partial(const Integer& a) { return {a, 1, 1, 0}; }

}  // namespace

QuadraticIrrational::QuadraticIrrational(Integer a, Integer b, Integer d, Integer c)
    : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)), c_(std::move(c)) {
  if (c_ == 0) throw HypothesisError("quadratic irrational with zero denominator");
  if (d_ <= 0) throw HypothesisError("quadratic irrational needs d > 0");
  for (Integer f = 2; f * f <= d_; ++f)
    while (d_ % (f * f) == 0) {
      d_ /= f * f;
      b_ *= f;
    }
  if (b_ == 0 || d_ == 1) throw HypothesisError("value is rational, not a quadratic irrational");
  if (c_ < 0) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
  }
  const Integer g = gcd(gcd(a_, b_), c_);
  a_ /= g;
  b_ /= g;
  c_ /= g;
}

QuadraticIrrational QuadraticIrrational::parse(const std::string& text) {
  static const std::regex re(
      R"(^\s*(\()?\s*(?:([+-]?\d+)\s*)?(?:([+-])\s*)?(?:(\d+)\s*\*\s*)?sqrt\s*\(\s*(\d+)\s*\)\s*(\))?\s*(?:/\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw ParseError("cannot parse quadratic irrational '" + text + "'; expected (a+b*sqrt(d))/c");
  if (m[1].matched != m[6].matched) throw ParseError("unbalanced parentheses in '" + text + "'");
  if (m[2].matched && !m[3].matched) throw ParseError("missing sign between a and b*sqrt(d) in '" + text + "'");
  const Integer a = m[2].matched ? Integer(m[2].str()) : Integer(0);
  Integer b = m[4].matched ? Integer(m[4].str()) : Integer(1);
  if (m[3].matched && m[3].str() == "-") b = -b;
  const Integer d(m[5].str());
  const Integer c = m[7].matched ? Integer(m[7].str()) : Integer(1);
  return QuadraticIrrational(a, b, d, c);
}

double QuadraticIrrational::value() const {
  return (a_.get_d() + b_.get_d() * std::sqrt(d_.get_d())) / c_.get_d();
}

std::string QuadraticIrrational::str() const {
  std::ostringstream os;
  os << "(" << a_ << (b_ < 0 ? "-" : "+") << Integer(abs(b_)) << "*sqrt(" << d_ << "))/" << c_;
  return os.str();
}

IntMat2 mat_mul(const IntMat2& x, const IntMat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

Integer mat_det(const IntMat2& m) { return m[0] * m[3] - m[1] * m[2]; }

IntMat2 mat_inverse_unimodular(const IntMat2& m) {
  const Integer d = mat_det(m);
  if (d != 1 && d != -1) throw HypothesisError("matrix is not in GL(2,Z)");
  return {m[3] * d, -m[1] * d, -m[2] * d, m[0] * d};
}

QuadraticIrrational mobius(const IntMat2& m, const QuadraticIrrational& x) {
  const Integer n0 = m[0] * x.a() + m[1] * x.c(), n1 = m[0] * x.b();
  const Integer d0 = m[2] * x.a() + m[3] * x.c(), d1 = m[2] * x.b();
  const Integer den = d0 * d0 - d1 * d1 * x.d();
  if (den == 0) throw HypothesisError("Mobius map has a pole at theta");
  return QuadraticIrrational(n0 * d0 - n1 * d1 * x.d(), n1 * d0 - n0 * d1, x.d(), den);
}

std::string ContinuedFraction::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < preperiod.size(); ++i) os << (i ? ", " : "") << preperiod[i];
  os << "; (";
  for (std::size_t i = 0; i < period.size(); ++i) os << (i ? ", " : "") << period[i];
  os << ")*]";
  return os.str();
}

namespace {

struct Expansion {
  ContinuedFraction cf;
  std::vector<Integer> terms;  // preperiod followed by one period
};

Expansion expand(const QuadraticIrrational& x) {
  // x = (P + sqrt(D)) / Q with Q | D - P^2.
  Integer P, D = x.b() * x.b() * x.d(), Q;
  if (x.b() > 0) {
    P = x.a();
    Q = x.c();
  } else {
    P = -x.a();
    Q = -x.c();
  }
  if ((D - P * P) % Q != 0) {
    const Integer aq = abs(Q);
    P *= aq;
    D *= Q * Q;
    Q *= aq;
  }
  const Integer s = isqrt(D);
  std::map<std::pair<Integer, Integer>, std::size_t> seen;
  Expansion e;
  for (;;) {
    auto key = std::make_pair(P, Q);
    if (auto it = seen.find(key); it != seen.end()) {
      e.cf.preperiod.assign(e.terms.begin(), e.terms.begin() + static_cast<long>(it->second));
      e.cf.period.assign(e.terms.begin() + static_cast<long>(it->second), e.terms.end());
      return e;
    }
    seen.emplace(std::move(key), e.terms.size());
    const Integer a = Q > 0 ? floor_div(P + s, Q) : Integer(-floor_div(P + s, -Q) - 1);
    e.terms.push_back(a);
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
}

// Convergent matrix of the first k terms of the (infinite) expansion.
IntMat2 convergent(const ContinuedFraction& cf, std::size_t k) {
  IntMat2 m{1, 0, 0, 1};
  for (std::size_t i = 0; i < k; ++i) {
    const Integer& a = i < cf.preperiod.size() ? cf.preperiod[i]
                                               : cf.period[(i - cf.preperiod.size()) % cf.period.size()];
    m = mat_mul(m, partial(a));
  }
  return m;
}

std::optional<std::size_t> rotation(const std::vector<Integer>& x, const std::vector<Integer>& y) {
  if (x.size() != y.size()) return std::nullopt;
  const std::size_t n = x.size();
  for (std::size_t r = 0; r < n; ++r) {
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) ok = y[k] == x[(k + r) % n];
    if (ok) return r;
  }
  return std::nullopt;
}

}  // namespace

ContinuedFraction continued_fraction(const QuadraticIrrational& x) { return expand(x).cf; }

QuadraticIrrational reconstruct(const ContinuedFraction& cf) {
  if (cf.period.empty()) throw HypothesisError("continued fraction needs a nonempty period");
  IntMat2 m{1, 0, 0, 1};
  for (const auto& a : cf.period) m = mat_mul(m, partial(a));
  // y = (m0 y + m1) / (m2 y + m3), y > 1
  const Integer disc = (m[0] - m[3]) * (m[0] - m[3]) + 4 * m[1] * m[2];
  const QuadraticIrrational y(m[0] - m[3], 1, disc, 2 * m[2]);
  IntMat2 pre{1, 0, 0, 1};
  for (const auto& a : cf.preperiod) pre = mat_mul(pre, partial(a));
  return mobius(pre, y);
}

bool gl2z_equivalent(const QuadraticIrrational& x, const QuadraticIrrational& y) {
  if (x.d() != y.d()) return false;
  return rotation(continued_fraction(x).period, continued_fraction(y).period).has_value();
}

std::optional<IntMat2> gl2z_witness(const QuadraticIrrational& x, const QuadraticIrrational& y) {
  if (x.d() != y.d()) return std::nullopt;
  const ContinuedFraction cx = continued_fraction(x), cy = continued_fraction(y);
  const auto r = rotation(cx.period, cy.period);
  if (!r) return std::nullopt;
  const IntMat2 c1 = convergent(cx, cx.preperiod.size() + *r);
  const IntMat2 c2 = convergent(cy, cy.preperiod.size());
  const IntMat2 w = mat_mul(c2, mat_inverse_unimodular(c1));
  if (!(mobius(w, x) == y)) throw std::logic_error("gl2z_witness: witness failed exact verification");
  return w;
}

WordSearchResult word_search(const QuadraticIrrational& x, const QuadraticIrrational& y, int max_length) {
  struct Node {
    IntMat2 m;
    std::string word;
  };
  const std::vector<std::pair<char, IntMat2>> gens{{'T', kT}, {'t', kTinv}, {'S', kS}};
  auto inverse_letter = [](char c) { return c == 'T' ? 't' : c == 't' ? 'T' : 'S'; };

  auto bfs = [&](const QuadraticIrrational& start, int depth) {
    std::map<QuadraticIrrational, Node> seen{{start, {{1, 0, 0, 1}, ""}}};
    std::vector<QuadraticIrrational> frontier{start};
    for (int level = 0; level < depth; ++level) {
      std::vector<QuadraticIrrational> next;
      for (const auto& z : frontier) {
        const Node node = seen.at(z);
        for (const auto& [letter, g] : gens) {
          QuadraticIrrational w = mobius(g, z);
          if (seen.count(w)) continue;
          seen.emplace(w, Node{mat_mul(g, node.m), node.word + letter});
          next.push_back(std::move(w));
        }
      }
      frontier = std::move(next);
    }
    return seen;
  };

  WordSearchResult out;
  const int fwd = (max_length + 1) / 2, bwd = max_length / 2;
  const auto from_x = bfs(x, fwd);
  const auto from_y = bfs(y, bwd);
  out.visited = from_x.size() + from_y.size();
  std::size_t best = static_cast<std::size_t>(-1);
  for (const auto& [z, ny] : from_y) {
    auto it = from_x.find(z);
    if (it == from_x.end()) continue;
    const std::size_t len = it->second.word.size() + ny.word.size();
    if (len >= best) continue;
    best = len;
    out.found = true;
    out.matrix = mat_mul(mat_inverse_unimodular(ny.m), it->second.m);
    std::string back;
    for (auto c = ny.word.rbegin(); c != ny.word.rend(); ++c) back += inverse_letter(*c);
    out.word = it->second.word + back;
  }
  if (out.found && !(mobius(out.matrix, x) == y)) throw std::logic_error("word_search: witness failed exact verification");
  return out;
}

CounterexampleReport counterexample_report(const QuadraticIrrational& x, const QuadraticIrrational& y) {
  if (gl2z_equivalent(x, y))
    throw HypothesisError("A_theta for " + x.str() + " and " + y.str() + " are Morita equivalent; not a counterexample");
  CounterexampleReport r;
  r.theta1 = x.str();
  r.theta2 = y.str();
  r.cf1 = continued_fraction(x).str();
  r.cf2 = continued_fraction(y).str();
  r.classical_morita = true;
  r.quantum_morita = false;
  r.k0_1 = "Z + Z*(" + x.str() + ")";
  r.k0_2 = "Z + Z*(" + y.str() + ")";
  r.conclusion = "quantization cannot preserve Morita equivalence on the whole Poisson category";
  return r;
}

QuadraticIrrational random_quadratic_irrational(std::mt19937_64& rng) {
  static const std::vector<int> ds{2, 3, 5, 6, 7, 10, 11, 13, 14, 15};
  std::uniform_int_distribution<int> a(-6, 6), b(1, 3), c(1, 6), sign(0, 1), di(0, static_cast<int>(ds.size()) - 1);
  const int bb = b(rng) * (sign(rng) ? 1 : -1);
  return QuadraticIrrational(a(rng), bb, ds[di(rng)], c(rng));
}

}  // namespace qf
