// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "qfunctor/corpus.hpp"
#include "qfunctor/kktheory.hpp"
#include "qfunctor/moyal.hpp"
#include "qfunctor/nctorus.hpp"
#include "qfunctor/quantfunctor.hpp"
#include "qfunctor/strictfield.hpp"

using namespace qf;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool c, const std::string& what) {
    if (!c) {
      ok = false;
      detail << "failed: " << what << "; ";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << "exception: " << e.what() << "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.ok = false;
    o.detail << "took " << secs << " s, limit " << limit_s << " s; ";
  }
  std::string d = o.detail.str();
  while (!d.empty() && (d.back() == ' ' || d.back() == ';')) d.pop_back();
  std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << d << ", "
            << std::round(secs * 10) / 10 << " s)" << std::endl;
  failures += !o.ok;
}

std::vector<int> qrange(int lo, int hi) {
  std::vector<int> out;
  for (int q = lo; q <= hi; ++q) out.push_back(q);
  return out;
}

void functor_laws(Outcome& o) {
  const auto cases = functoriality_corpus(kSeed, 24, 40);
  int pass = 0;
  double worst = 0;
  std::set<std::string> seen;
  int ids = 0, id_pass = 0;
  for (const auto& c : cases) {
    o.require(c.m.carrier <= 40 && c.n.carrier <= 40, c.name + " carrier above 40");
    const auto r = check_functoriality(c.m, c.n, 1e-9);
    if (r.ok && r.witness) {
      ++pass;
      worst = std::max(worst, r.witness->residual);
    } else {
      o.require(false, c.name + ": " + r.detail);
    }
    for (const auto* g : {&c.m.left, &c.m.right, &c.n.right}) {
      std::ostringstream key;
      key << g->n_obj << ':';
      for (int x : g->comp) key << x << ',';
      if (!seen.insert(key.str()).second) continue;
      ++ids;
      id_pass += check_identity(*g);
    }
  }
  o.require(cases.size() >= 20, "fewer than 20 pairs");
  o.require(worst <= 1e-9, "witness residual above 1e-9");
  o.require(id_pass == ids, "identity not canonical");
  o.detail << pass << "/" << cases.size() << " pairs, worst witness residual " << worst << ", identities " << id_pass
           << "/" << ids;
}

bool vec_eq(const std::vector<int>& a, const std::vector<int>& b) { return a == b; }

void object_sanity(Outcome& o) {
  int checked = 0;
  for (int n = 1; n <= 6; ++n) {
    const FinCStar a = convolution_algebra(pair_groupoid(n));
    o.require(vec_eq(a.wedderburn().dimension_vector, {n}), "pair(" + std::to_string(n) + ") dimension vector");
    o.require(a.same_structure(block_algebra({n})), "pair(" + std::to_string(n) + ") structure constants");
    ++checked;
  }
  for (int m = 2; m <= 6; ++m) {
    const FinCStar a = convolution_algebra(cyclic_group(m));
    const auto& w = a.wedderburn();
    o.require(vec_eq(w.dimension_vector, std::vector<int>(m, 1)), "Z_" + std::to_string(m) + " dimension vector");
    // each block is a character g -> omega^(j g); all m of them occur once
    std::vector<int> hit(m, 0);
    for (int b = 0; b < w.blocks(); ++b) {
      const std::complex<double> chi1 = w.embed[1][b](0, 0);
      const double turns = std::arg(chi1) / (2 * std::numbers::pi) * m;
      const int j = ((static_cast<int>(std::lround(turns)) % m) + m) % m;
      bool good = true;
      for (int g = 0; g < m; ++g)
        good = good && std::abs(w.embed[g][b](0, 0) - std::polar(1.0, 2 * std::numbers::pi * j * g / m)) < 1e-9;
      o.require(good, "Z_" + std::to_string(m) + " block " + std::to_string(b) + " is not a character");
      ++hit[j];
    }
    for (int j = 0; j < m; ++j) o.require(hit[j] == 1, "Z_" + std::to_string(m) + " character table incomplete");
    ++checked;
  }
  o.detail << checked << " objects against matrix units and character tables";
}

void morita_chain(Outcome& o) {
  const auto cases = biprincipal_corpus(kSeed, 20, 40);
  int pass = 0;
  for (const auto& c : cases) {
    const auto p = check_morita_preservation(c.m);
    const HilbertBimodule e = quantize_arrow(c.m);
    const KKClass x = kk_class(e);
    const bool ok = p.in_hypothesis && p.report.equivalence() && kk_invertible(x) &&
                    k0(*e.left).rank == k0(*e.right).rank;
    o.require(ok, c.name);
    pass += ok;
  }
  o.require(!cases.empty(), "empty corpus");
  o.detail << pass << "/" << cases.size() << " biprincipal bibundles";
}

void kk_product(Outcome& o) {
  const auto cases = kk_corpus(kSeed, 60);
  int pass = 0;
  for (const auto& c : cases) {
    const bool ok = kk_class(interior_tensor(c.e, c.f)) == intersection(kk_class(c.e), kk_class(c.f));
    o.require(ok, c.name);
    pass += ok;
  }
  o.require(cases.size() >= 50, "fewer than 50 pairs");
  o.detail << pass << "/" << cases.size() << " pairs";
}

void moyal(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  int assoc = 0, dirac = 0, cov = 0;
  const int total = 100, maps = 50;
  for (int i = 0; i < total; ++i) {
    const int n = 1 + i % 2;
    const auto f = random_poly(rng, n, 4), g = random_poly(rng, n, 4), h = random_poly(rng, n, 4);
    assoc += check_associativity(f, g, h, 5);
    dirac += check_dirac(f, g);
  }
  for (int i = 0; i < maps; ++i) {
    const int n = 1 + i % 2;
    const auto f = random_poly(rng, n, 4), g = random_poly(rng, n, 4);
    cov += affine_covariance(f, g, random_symplectic(rng, n), 5);
  }
  o.require(assoc == total && dirac == total && cov == maps, "moyal identities");
  o.detail << "associativity mod h^6 " << assoc << "/" << total << ", dirac " << dirac << "/" << total
           << ", covariance " << cov << "/" << maps;
}

void strict(Outcome& o) {
  const TrigPoly U = TrigPoly::mode(1, 0), V = TrigPoly::mode(0, 1);
  double closed = 0;
  for (int q = 2; q <= 199; ++q) closed = std::max(closed, std::abs(dirac_defect(U, V, q) - dirac_defect_closed_form(q)));
  o.require(closed <= 1e-9, "closed form");

  std::mt19937_64 rng(kSeed);
  const auto qs = qrange(11, 199);
  double min_slope = 1e9;
  for (int i = 0; i < 10; ++i) {
    const auto f = random_trig_poly(rng), g = random_trig_poly(rng);
    min_slope = std::min(min_slope, loglog_slope(defect_sweep(f, g, qs)));
  }
  o.require(min_slope >= 0.9, "log-log slope");

  std::vector<TrigPoly> family{U, U + U.conj(), U + U.conj() + V + V.conj(),
                               TrigPoly::parse("e(1,1) + e(-1,-1) - 0.5*e(0,1) - 0.5*e(0,-1)")};
  for (int i = 0; i < 6; ++i) family.push_back(random_trig_poly(rng, 3, 1));
  double gap = 0;
  for (const auto& f : family) {
    const auto s = norm_section(f, {199});
    gap = std::max(gap, std::abs(s[0].norm - s[1].norm));
  }
  o.require(gap <= 0.05, "norm gap at q = 199");
  o.detail << "closed-form error " << closed << ", min slope " << min_slope << " over q = 11..199, norm gap " << gap;
}

void torus(Outcome& o) {
  const auto sqrt2 = QuadraticIrrational::parse("sqrt(2)");
  const auto golden = QuadraticIrrational::parse("(1+sqrt(5))/2");
  o.require(!gl2z_equivalent(sqrt2, golden), "sqrt(2) ~ golden ratio");
  std::mt19937_64 rng(kSeed);
  int eq = 0, words = 0;
  for (int i = 0; i < 20; ++i) {
    const auto x = random_quadratic_irrational(rng);
    const auto y = mobius({1, 1, 0, 1}, x), z = mobius({0, 1, 1, 0}, x);
    eq += gl2z_equivalent(x, y) && gl2z_equivalent(x, z);
    words += word_search(x, y).found && word_search(x, z).found;
  }
  o.require(eq == 20, "translate/inverse equivalence");
  o.require(words == 20, "word search witnesses");
  o.detail << "sqrt(2) vs golden ratio not equivalent, equivalences " << eq << "/20, word witnesses " << words << "/20";
}

void oracle(Outcome& o) {
  int pairs = 0, agree = 0;
  for (const auto& fam : small_bimodule_corpus(kSeed, 6)) {
    for (const auto& e : fam.members)
      for (const auto& f : fam.members) {
        if (e.dim > 6 || f.dim > 6) continue;
        ++pairs;
        const bool a = unitary_equivalent(e, f).has_value(), b = brute_force_unitary(e, f).has_value();
        agree += a == b;
        o.require(a == b, fam.name);
      }
  }
  o.require(pairs > 0, "empty corpus");
  o.detail << agree << "/" << pairs << " ordered pairs agree";
}

}  // namespace

int main() {
  criterion(1, "functor laws on composable principal pairs", 120, functor_laws);
  criterion(2, "object sanity for pair groupoids and cyclic groups", 0, object_sanity);
  criterion(3, "Morita/K chain on biprincipal bibundles", 0, morita_chain);
  criterion(4, "KK product of interior tensor products", 0, kk_product);
  criterion(5, "Moyal associativity, Dirac and covariance", 60, moyal);
  criterion(6, "strict field defect, slope and norm gap", 120, strict);
  criterion(7, "irrational rotation algebra Morita tests", 30, torus);
  criterion(8, "unitary_equivalent agrees with brute force", 0, oracle);
  return failures == 0 ? 0 : 1;
}
