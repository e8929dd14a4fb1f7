// qfunctor: command-line front end.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qfunctor/corpus.hpp"
#include "qfunctor/errors.hpp"
#include "qfunctor/io.hpp"
#include "qfunctor/kktheory.hpp"
#include "qfunctor/moyal.hpp"
#include "qfunctor/nctorus.hpp"
#include "qfunctor/quantfunctor.hpp"
#include "qfunctor/strictfield.hpp"

using namespace qf;

namespace {

struct Options {
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  std::string json_out;
  int K = 5;
  int count = 0;
  std::string q_range = "11:199";
  double eps = 1.0;
  std::vector<std::string> files;
  std::string out;
  std::string f, g;
};

std::string fmt(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

void write_json(const std::string& path, const Json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string matrix_str(const IntMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << (i ? ", " : "") << "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) os << (j ? ", " : "") << m[i][j];
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string mat2_str(const IntMat2& m) {
  std::ostringstream os;
  os << "[[" << m[0] << ", " << m[1] << "], [" << m[2] << ", " << m[3] << "]]";
  return os.str();
}

std::vector<int> parse_q_range(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto colon = part.find(':');
    try {
      if (colon == std::string::npos) {
        out.push_back(std::stoi(part));
      } else {
        const int lo = std::stoi(part.substr(0, colon)), hi = std::stoi(part.substr(colon + 1));
        for (int q = lo; q <= hi; ++q) out.push_back(q);
      }
    } catch (const std::logic_error&) {
      throw ParseError("--q-range '" + s + "': expected lo:hi or a comma-separated list");
    }
  }
  if (out.empty()) throw ParseError("--q-range '" + s + "' is empty");
  return out;
}

std::string kind_of(const Json& j) {
  if (j.is_object() && j.contains("kind") && j["kind"].is_string()) return j["kind"].get<std::string>();
  return "groupoid";
}

void print_violations(const std::string& what, const ValidationReport& r) {
  if (r.ok()) {
    std::cout << what << ": ok\n";
    return;
  }
  std::cout << what << ": " << r.violations.size() << " violation(s)\n";
  for (const auto& v : r.violations) std::cout << "  " << v << "\n";
}

Bibundle load_valid_bibundle(const std::string& path) {
  Bibundle b = load_bibundle(path);
  const auto r = validate(b);
  if (!r.ok()) throw HypothesisError(path + ": not a valid bibundle: " + r.violations.front());
  return b;
}

int run_validate(const Options& o) {
  bool all = true;
  Json report = Json::array();
  for (const auto& path : o.files) {
    const Json doc = read_json_file(path);
    if (kind_of(doc) == "bibundle") {
      const Bibundle b = bibundle_from_json(doc, path);
      const auto r = validate(b);
      print_violations(path, r);
      const bool p = r.ok() && is_principal(b), bp = r.ok() && is_biprincipal(b);
      std::cout << "  principal: " << (p ? "yes" : "no") << ", biprincipal: " << (bp ? "yes" : "no") << "\n";
      report.push_back({{"file", path}, {"ok", r.ok()}, {"violations", r.violations}, {"principal", p},
                        {"biprincipal", bp}});
      all = all && r.ok();
    } else {
      const FiniteGroupoid g = groupoid_from_json(doc, path);
      const auto r = validate(g);
      print_violations(path, r);
      report.push_back({{"file", path}, {"ok", r.ok()}, {"violations", r.violations}});
      all = all && r.ok();
    }
  }
  write_json(o.json_out, report);
  return all ? 0 : 1;
}

int run_compose(const Options& o) {
  if (o.files.size() != 2) throw HypothesisError("compose needs two bibundle files");
  const Bibundle m = load_valid_bibundle(o.files[0]), n = load_valid_bibundle(o.files[1]);
  const Bibundle c = compose_bibundles(m, n);
  (o.out.empty() ? std::cerr : std::cout) << "composite carrier " << c.carrier << ", principal: " << (is_principal(c) ? "yes" : "no") << "\n";
  const Json j = to_json(c);
  if (o.out.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_json(o.out, j);
  return 0;
}

int run_quantize(const Options& o) {
  if (o.files.size() != 1) throw HypothesisError("quantize needs one groupoid or bibundle file");
  const Json doc = read_json_file(o.files[0]);
  Json out;
  if (kind_of(doc) == "bibundle") {
    const Bibundle b = bibundle_from_json(doc, o.files[0]);
    const auto r = validate(b);
    if (!r.ok()) throw HypothesisError(o.files[0] + ": not a valid bibundle: " + r.violations.front());
    const HilbertBimodule e = quantize_arrow(b);
    out = dump_bimodule(e);
    out["left_algebra"] = dump_algebra(*e.left);
    out["right_algebra"] = dump_algebra(*e.right);
    const auto mr = morita_report(e);
    std::cout << "bimodule dim " << e.dim << " over " << e.left->label() << " (dim " << e.left->dim() << ") and "
              << e.right->label() << " (dim " << e.right->dim() << ")\n";
    std::cout << "multiplicity " << matrix_str(multiplicity_matrix(e)) << "\n";
    std::cout << "imprimitivity: " << (mr.equivalence() ? "yes" : "no") << "\n";
  } else {
    const FiniteGroupoid g = groupoid_from_json(doc, o.files[0]);
    const auto r = validate(g);
    if (!r.ok()) throw HypothesisError(o.files[0] + ": not a valid groupoid: " + r.violations.front());
    const AlgebraPtr a = quantize_object(g);
    out = dump_algebra(*a);
    std::cout << a->label() << " dim " << a->dim() << " dimension vector [";
    const auto& dv = a->wedderburn().dimension_vector;
    for (std::size_t i = 0; i < dv.size(); ++i) std::cout << (i ? ", " : "") << dv[i];
    std::cout << "]\n";
  }
  write_json(o.out.empty() ? o.json_out : o.out, out);
  return 0;
}

int run_functoriality(const Options& o) {
  if (o.files.size() != 2) throw HypothesisError("functoriality needs two bibundle files");
  const Bibundle m = load_valid_bibundle(o.files[0]), n = load_valid_bibundle(o.files[1]);
  const FunctorialityReport r = check_functoriality(m, n, o.tolerance);
  std::cout << (r.ok ? "pass" : "FAIL") << ": Q(M*N) dim " << r.composite_dim << ", Q(M)(x)Q(N) dim " << r.tensor_dim;
  if (r.witness) std::cout << ", witness residual " << fmt(r.witness->residual, 3);
  std::cout << "\n";
  if (!r.detail.empty()) std::cout << "  " << r.detail << "\n";
  write_json(o.json_out, dump_report(r));
  return r.ok ? 0 : 1;
}

int run_kk(const Options& o) {
  if (o.files.empty() || o.files.size() > 2) throw HypothesisError("kk needs one or two bibundle files");
  const Bibundle m = load_valid_bibundle(o.files[0]);
  const HilbertBimodule e = quantize_arrow(m);
  const KKClass x = kk_class(e);
  Json report;
  report["first"] = dump_kk(x);
  std::cout << "kk[0] = " << to_string(x) << (kk_invertible(x) ? " (invertible)" : "") << "\n";
  bool ok = true;
  if (o.files.size() == 2) {
    const Bibundle n = load_valid_bibundle(o.files[1]);
    const HilbertBimodule f = quantize_arrow(n, e.right);
    const KKClass y = kk_class(f);
    const KKClass xy = kk_class(interior_tensor(e, f));
    const KKClass prod = intersection(x, y);
    ok = xy == prod;
    std::cout << "kk[1] = " << to_string(y) << "\n";
    std::cout << "kk(E (x) F) = " << to_string(xy) << "\n";
    std::cout << "kk(E) . kk(F) = " << to_string(prod) << "\n";
    std::cout << (ok ? "pass" : "FAIL") << "\n";
    report["second"] = dump_kk(y);
    report["tensor"] = dump_kk(xy);
    report["product"] = dump_kk(prod);
    report["pass"] = ok;
  }
  write_json(o.json_out, report);
  return ok ? 0 : 1;
}

int run_torus(const Options& o) {
  if (o.files.size() != 2) throw HypothesisError("torus-morita needs two quadratic irrationals");
  const auto x = QuadraticIrrational::parse(o.files[0]), y = QuadraticIrrational::parse(o.files[1]);
  const auto cx = continued_fraction(x), cy = continued_fraction(y);
  std::cout << "theta1 = " << x.str() << " = " << cx.str() << "\n";
  std::cout << "theta2 = " << y.str() << " = " << cy.str() << "\n";
  Json report{{"theta1", x.str()}, {"theta2", y.str()}, {"cf1", cx.str()}, {"cf2", cy.str()}};
  if (auto w = gl2z_witness(x, y)) {
    std::cout << "Morita equivalent; GL(2,Z) witness " << mat2_str(*w) << "\n";
    const auto ws = word_search(x, y);
    if (ws.found) std::cout << "word " << ws.word << " = " << mat2_str(ws.matrix) << "\n";
    report["morita"] = true;
    report["witness"] = mat2_str(*w);
    if (ws.found) report["word"] = ws.word;
  } else {
    const auto r = counterexample_report(x, y);
    std::cout << "NOT Morita equivalent; classical tori Morita equivalent (cited)\n";
    std::cout << "K0(A_theta1) = " << r.k0_1 << ", K0(A_theta2) = " << r.k0_2 << "\n";
    std::cout << r.conclusion << "\n";
    report["morita"] = false;
    report["classical_morita"] = "cited";
    report["conclusion"] = r.conclusion;
  }
  write_json(o.json_out, report);
  return 0;
}

struct MoyalTally {
  int associativity = 0, dirac = 0, covariance = 0, hermiticity = 0, unit = 0, total = 0, maps = 0;
  bool ok() const {
    return associativity == total && dirac == total && hermiticity == total && unit == total && covariance == maps;
  }
};

MoyalTally moyal_suite(std::uint64_t seed, int count, int K) {
  std::mt19937_64 rng(seed);
  MoyalTally t;
  for (int i = 0; i < count; ++i) {
    const int n = 1 + i % 2;
    const auto f = random_poly(rng, n, 4), g = random_poly(rng, n, 4), h = random_poly(rng, n, 4);
    const auto L = random_symplectic(rng, n);
    ++t.total;
    t.associativity += check_associativity(f, g, h, K);
    t.dirac += check_dirac(f, g);
    t.hermiticity += check_hermiticity(f, g, K);
    t.unit += check_unit(f, K);
    if (i % 2 == 0) {
      ++t.maps;
      t.covariance += affine_covariance(f, g, L, K);
    }
  }
  return t;
}

int run_moyal(const Options& o) {
  if (!o.f.empty()) {
    const auto f = PhasePoly::parse(o.f);
    const auto g = o.g.empty() ? PhasePoly::constant(f.n(), Cq(1)) : PhasePoly::parse(o.g, f.n());
    const auto fg = star(f, g, o.K);
    std::cout << "f * g = " << fg.str() << "\n";
    std::cout << "{f, g} = " << poisson_bracket(f, g).str() << "\n";
    const bool d = check_dirac(f, g);
    std::cout << "dirac: " << (d ? "pass" : "FAIL") << "\n";
    write_json(o.json_out, Json{{"star", fg.str()}, {"bracket", poisson_bracket(f, g).str()}, {"dirac", d}});
    return d ? 0 : 1;
  }
  const int count = o.count > 0 ? o.count : 100;
  const MoyalTally t = moyal_suite(o.seed, count, o.K);
  std::cout << "associativity mod h^" << o.K + 1 << ": " << t.associativity << "/" << t.total << "\n";
  std::cout << "dirac: " << t.dirac << "/" << t.total << "\n";
  std::cout << "hermiticity: " << t.hermiticity << "/" << t.total << "\n";
  std::cout << "unit: " << t.unit << "/" << t.total << "\n";
  std::cout << "affine covariance: " << t.covariance << "/" << t.maps << "\n";
  std::cout << (t.ok() ? "pass" : "FAIL") << "\n";
  write_json(o.json_out, Json{{"K", o.K},
                              {"seed", o.seed},
                              {"triples", t.total},
                              {"associativity", t.associativity},
                              {"dirac", t.dirac},
                              {"hermiticity", t.hermiticity},
                              {"unit", t.unit},
                              {"maps", t.maps},
                              {"covariance", t.covariance},
                              {"pass", t.ok()}});
  return t.ok() ? 0 : 1;
}

int run_strictfield(const Options& o) {
  const TrigPoly f = TrigPoly::parse(o.f.empty() ? "e(1,0)" : o.f);
  const TrigPoly g = TrigPoly::parse(o.g.empty() ? "e(0,1)" : o.g);
  const auto qs = parse_q_range(o.q_range);
  const auto rows = defect_sweep(f, g, qs);
  std::vector<NormSample> samples;
  for (const auto& r : rows) samples.push_back({r.hbar, r.norm});
  const double sup = sup_norm(f);
  samples.push_back({0.0, sup});
  std::cout << "# f = " << f.str() << "\n# g = " << g.str() << "\n";
  std::cout << "hbar\tdefect\tnorm\n";
  Json table = Json::array();
  for (const auto& r : rows) {
    std::cout << fmt(r.hbar) << "\t" << fmt(r.defect) << "\t" << fmt(r.norm) << "\n";
    table.push_back({{"q", r.q}, {"hbar", r.hbar}, {"defect", r.defect}, {"norm", r.norm}});
  }
  std::cout << "0\tnan\t" << fmt(sup) << "\n";
  const auto usc = usc_check(samples, o.eps);
  std::cout << "# usc(eps=" << fmt(o.eps) << "): " << (usc.ok ? "pass" : "FAIL") << "; " << usc.witness << "\n";
  Json report{{"f", f.str()}, {"g", g.str()}, {"rows", table}, {"sup_norm", sup}, {"usc", usc.ok},
              {"usc_witness", usc.witness}};
  if (rows.size() >= 2) {
    int positive = 0;
    for (const auto& r : rows) positive += r.defect > 0;
    if (positive >= 2) {
      const double s = loglog_slope(rows);
      std::cout << "# log-log slope " << fmt(s, 6) << "\n";
      report["slope"] = s;
    }
  }
  write_json(o.json_out, report);
  return usc.ok ? 0 : 1;
}

// Seeded regression over every suite; results aggregated in case order.
int run_corpus(const Options& o) {
  const int count = o.count > 0 ? o.count : 20;
  bool all = true;
  Json report;
  report["seed"] = o.seed;

  const auto fc = functoriality_corpus(o.seed, count);
  std::vector<int> fok(fc.size());
  const long nf = static_cast<long>(fc.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < nf; ++i)
    fok[static_cast<size_t>(i)] = check_functoriality(fc[static_cast<size_t>(i)].m, fc[static_cast<size_t>(i)].n, o.tolerance).ok;
  int pass = 0;
  for (std::size_t i = 0; i < fc.size(); ++i) {
    pass += fok[i];
    if (!fok[i]) std::cout << "  functoriality FAIL " << fc[i].name << "\n";
  }
  std::cout << "functoriality: " << pass << "/" << fc.size() << "\n";
  report["functoriality"] = {{"pass", pass}, {"total", fc.size()}};
  all = all && pass == static_cast<int>(fc.size());

  const auto bc = biprincipal_corpus(o.seed, count);
  std::vector<int> bok(bc.size());
  const long nb = static_cast<long>(bc.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < nb; ++i) {
    const auto& c = bc[static_cast<size_t>(i)];
    const HilbertBimodule e = quantize_arrow(c.m);
    const KKClass x = kk_class(e);
    bok[static_cast<size_t>(i)] = is_morita_equivalence(e) && kk_invertible(x) && k0(*e.left).rank == k0(*e.right).rank;
  }
  pass = 0;
  for (std::size_t i = 0; i < bc.size(); ++i) {
    pass += bok[i];
    if (!bok[i]) std::cout << "  morita FAIL " << bc[i].name << "\n";
  }
  std::cout << "morita/K chain: " << pass << "/" << bc.size() << "\n";
  report["morita"] = {{"pass", pass}, {"total", bc.size()}};
  all = all && pass == static_cast<int>(bc.size());

  const auto kc = kk_corpus(o.seed, count);
  std::vector<int> kok(kc.size());
  const long nk = static_cast<long>(kc.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < nk; ++i) {
    const auto& c = kc[static_cast<size_t>(i)];
    kok[static_cast<size_t>(i)] = kk_class(interior_tensor(c.e, c.f)) == intersection(kk_class(c.e), kk_class(c.f));
  }
  pass = 0;
  for (std::size_t i = 0; i < kc.size(); ++i) {
    pass += kok[i];
    if (!kok[i]) std::cout << "  kk FAIL " << kc[i].name << "\n";
  }
  std::cout << "kk functoriality: " << pass << "/" << kc.size() << "\n";
  report["kk"] = {{"pass", pass}, {"total", kc.size()}};
  all = all && pass == static_cast<int>(kc.size());

  const MoyalTally t = moyal_suite(o.seed, count, o.K);
  std::cout << "moyal: associativity " << t.associativity << "/" << t.total << ", dirac " << t.dirac << "/" << t.total
            << ", covariance " << t.covariance << "/" << t.maps << "\n";
  report["moyal"] = {{"associativity", t.associativity}, {"dirac", t.dirac}, {"covariance", t.covariance},
                     {"total", t.total}, {"maps", t.maps}};
  all = all && t.ok();

  std::mt19937_64 rng(o.seed);
  int torus = 0;
  for (int i = 0; i < count; ++i) {
    const auto x = random_quadratic_irrational(rng);
    const auto y = mobius({1, 1, 0, 1}, x), z = mobius({0, 1, 1, 0}, x);
    torus += gl2z_equivalent(x, y) && gl2z_equivalent(x, z) && word_search(x, y).found && word_search(x, z).found;
  }
  std::cout << "torus equivalences: " << torus << "/" << count << "\n";
  report["torus"] = {{"pass", torus}, {"total", count}};
  all = all && torus == count;

  int strict = 0;
  const std::vector<int> qs{11, 23, 47, 97};
  for (int i = 0; i < count; ++i) {
    const auto f = random_trig_poly(rng), g = random_trig_poly(rng);
    const auto rows = defect_sweep(f, g, qs);
    strict += loglog_slope(rows) >= 0.9;
  }
  std::cout << "strict field slopes >= 0.9: " << strict << "/" << count << "\n";
  report["strictfield"] = {{"pass", strict}, {"total", count}};
  all = all && strict == count;

  std::cout << (all ? "pass" : "FAIL") << "\n";
  report["pass"] = all;
  write_json(o.json_out, report);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantization of finite groupoids, bibundles and phase-space symbols"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  app.add_option("--tolerance", o.tolerance, "Numeric tolerance for witnesses")->capture_default_str();
  app.add_option("--json", o.json_out, "Write a JSON report to this file");

  auto* validate_cmd = app.add_subcommand("validate", "Check groupoid/bibundle files against the axioms");
  validate_cmd->add_option("files", o.files, "JSON documents")->required()->check(CLI::ExistingFile);

  auto* compose_cmd = app.add_subcommand("compose", "Compose two bibundles M (*) N");
  compose_cmd->add_option("files", o.files, "M.json N.json")->required()->expected(2)->check(CLI::ExistingFile);
  compose_cmd->add_option("-o,--out", o.out, "Write the composite here instead of stdout");

  auto* quantize_cmd = app.add_subcommand("quantize", "Convolution algebra of a groupoid or bimodule of a bibundle");
  quantize_cmd->add_option("file", o.files, "groupoid or bibundle JSON")->required()->expected(1)->check(CLI::ExistingFile);
  quantize_cmd->add_option("-o,--out", o.out, "Write the dump here");

  auto* func_cmd = app.add_subcommand("functoriality", "Check Q(M (*) N) ~ Q(M) (x) Q(N)");
  func_cmd->add_option("files", o.files, "M.json N.json")->required()->expected(2)->check(CLI::ExistingFile);

  auto* kk_cmd = app.add_subcommand("kk", "KK classes of quantized bibundles and their product");
  kk_cmd->add_option("files", o.files, "M.json [N.json]")->required()->expected(1, 2)->check(CLI::ExistingFile);

  auto* torus_cmd = app.add_subcommand("torus-morita", "Morita equivalence of A_theta1 and A_theta2");
  torus_cmd->add_option("theta", o.files, "(a+b*sqrt(d))/c twice")->required()->expected(2);

  auto* moyal_cmd = app.add_subcommand("moyal-check", "Randomized Moyal star-product checks, or one product");
  moyal_cmd->add_option("--K", o.K, "Truncation order")->capture_default_str()->check(CLI::Range(0, 12));
  moyal_cmd->add_option("--count", o.count, "Number of random triples (default 100)");
  moyal_cmd->add_option("--f", o.f, "Polynomial, e.g. \"q1^2*p1 - 1/2*p2\"");
  moyal_cmd->add_option("--g", o.g, "Second polynomial");

  auto* strict_cmd = app.add_subcommand("strictfield", "Dirac defects and fiber norms of the fuzzy torus");
  strict_cmd->add_option("--f", o.f, "Symbol, e.g. \"0.5*e(1,0) + 0.5*e(-1,0)\" (default e(1,0))");
  strict_cmd->add_option("--g", o.g, "Second symbol for the defect (default e(0,1))");
  strict_cmd->add_option("--q-range", o.q_range, "lo:hi or a comma-separated list")->capture_default_str();
  strict_cmd->add_option("--eps", o.eps, "Level for the semicontinuity check")->capture_default_str();

  auto* corpus_cmd = app.add_subcommand("corpus", "Seeded randomized regression over every suite");
  corpus_cmd->add_option("--count", o.count, "Cases per suite (default 20)");
  corpus_cmd->add_option("--K", o.K, "Moyal truncation order")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return run_validate(o);
    if (*compose_cmd) return run_compose(o);
    if (*quantize_cmd) return run_quantize(o);
    if (*func_cmd) return run_functoriality(o);
    if (*kk_cmd) return run_kk(o);
    if (*torus_cmd) return run_torus(o);
    if (*moyal_cmd) return run_moyal(o);
    if (*strict_cmd) return run_strictfield(o);
    if (*corpus_cmd) return run_corpus(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
