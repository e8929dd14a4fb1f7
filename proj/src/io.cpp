#include "qfunctor/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qfunctor/errors.hpp"

namespace qf {

namespace {

// A JSON value together with where it came from, for error messages.
struct Node {
  const Json& v;
  std::string source;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source + ": " + (path.empty() ? "/" : path) + ": " + what);
  }

  Node at(const std::string& key) const {
    if (!v.is_object()) fail("expected an object");
    auto it = v.find(key);
    if (it == v.end()) fail("missing field \"" + key + "\"");
    return {*it, source, path + "/" + key};
  }
  bool has(const std::string& key) const { return v.is_object() && v.contains(key); }

  Node at(std::size_t i) const {
    if (!v.is_array()) fail("expected an array");
    if (i >= v.size()) fail("index " + std::to_string(i) + " out of range");
    return {v[i], source, path + "/" + std::to_string(i)};
  }
  std::size_t size() const {
    if (!v.is_array()) fail("expected an array");
    return v.size();
  }

  int integer() const {
    if (!v.is_number_integer()) fail("expected an integer");
    const auto x = v.get<long long>();
    if (x < -1 || x > 1'000'000) fail("integer out of range");
    return static_cast<int>(x);
  }
  std::string string() const {
    if (!v.is_string()) fail("expected a string");
    return v.get<std::string>();
  }
  std::vector<int> ints() const {
    std::vector<int> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).integer();
    return out;
  }
};

void expect_kind(const Node& n, const std::string& kind) {
  if (!n.has("kind")) return;
  const std::string k = n.at("kind").string();
  if (k != kind) n.at("kind").fail("expected kind \"" + kind + "\", got \"" + k + "\"");
}

FiniteGroupoid read_groupoid(const Node& n, const std::filesystem::path& base);

FiniteGroupoid read_groupoid_ref(const Node& n, const std::filesystem::path& base) {
  if (n.v.is_string()) {
    const auto p = base / n.string();
    return load_groupoid(p.string());
  }
  return read_groupoid(n, base);
}

FiniteGroupoid read_groupoid(const Node& n, const std::filesystem::path& base) {
  expect_kind(n, "groupoid");
  try {
    if (n.has("preset")) {
      const Node p = n.at("preset");
      const std::string name = p.string();
      if (name == "trivial") return trivial_groupoid();
      if (name == "pair") return pair_groupoid(n.at("n").integer());
      if (name == "cyclic") return cyclic_group(n.at("n").integer());
      if (name == "product" || name == "disjoint_union") {
        const Node of = n.at("of");
        if (of.size() != 2) of.fail("expected two groupoids");
        const auto a = read_groupoid_ref(of.at(0), base), b = read_groupoid_ref(of.at(1), base);
        return name == "product" ? product(a, b) : disjoint_union(a, b);
      }
      p.fail("unknown preset \"" + name + "\" (trivial, pair, cyclic, product, disjoint_union)");
    }
    FiniteGroupoid g;
    g.n_obj = n.at("n_obj").integer();
    g.src = n.at("src").ints();
    g.tgt = n.at("tgt").ints();
    g.unit = n.at("unit").ints();
    g.inv = n.at("inv").ints();
    const Node comp = n.at("comp");
    const std::size_t arrows = g.src.size();
    if (comp.size() != arrows) comp.fail("expected " + std::to_string(arrows) + " rows");
    for (std::size_t i = 0; i < arrows; ++i) {
      const Node row = comp.at(i);
      if (row.size() != arrows) row.fail("expected " + std::to_string(arrows) + " entries");
      for (int x : row.ints()) g.comp.push_back(x);
    }
    validate(g);
    return g;
  } catch (const StructureError& e) {
    n.fail(e.what());
  } catch (const HypothesisError& e) {
    n.fail(e.what());
  }
}

Bibundle read_bibundle(const Node& n, const std::filesystem::path& base) {
  expect_kind(n, "bibundle");
  Bibundle b;
  b.left = read_groupoid_ref(n.at("left"), base);
  b.right = read_groupoid_ref(n.at("right"), base);
  b.carrier = n.at("carrier").integer();
  if (b.carrier < 0) n.at("carrier").fail("carrier must be nonnegative");
  b.lanchor = n.at("lanchor").ints();
  b.ranchor = n.at("ranchor").ints();
  b.lact.assign(static_cast<size_t>(b.left.n_arr()) * b.carrier, kUndefined);
  b.ract.assign(static_cast<size_t>(b.carrier) * b.right.n_arr(), kUndefined);
  const Node la = n.at("lact");
  for (std::size_t i = 0; i < la.size(); ++i) {
    const Node t = la.at(i);
    if (t.size() != 3) t.fail("expected [g, m, g.m]");
    const int g = t.at(0).integer(), m = t.at(1).integer(), r = t.at(2).integer();
    if (g < 0 || g >= b.left.n_arr()) t.at(0).fail("arrow out of range");
    if (m < 0 || m >= b.carrier) t.at(1).fail("carrier point out of range");
    b.lact[static_cast<size_t>(g) * b.carrier + m] = r;
  }
  const Node ra = n.at("ract");
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const Node t = ra.at(i);
    if (t.size() != 3) t.fail("expected [m, h, m.h]");
    const int m = t.at(0).integer(), h = t.at(1).integer(), r = t.at(2).integer();
    if (m < 0 || m >= b.carrier) t.at(0).fail("carrier point out of range");
    if (h < 0 || h >= b.right.n_arr()) t.at(1).fail("arrow out of range");
    b.ract[static_cast<size_t>(m) * b.right.n_arr() + h] = r;
  }
  try {
    validate(b);
  } catch (const StructureError& e) {
    n.fail(e.what());
  }
  return b;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Json cmatrix_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json sparse_json(const SparseVec& v) {
  Json out = Json::array();
  for (const auto& [i, c] : v) out.push_back({i, complex_json(c)});
  return out;
}

Json sparse_matrix_json(const SparseMatrix& m) {
  Json out = Json::array();
  for (int c = 0; c < m.cols; ++c)
    for (const auto& [r, v] : m.columns[static_cast<size_t>(c)]) out.push_back({r, c, complex_json(v)});
  return out;
}

Json int_matrix_json(const IntMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

}  // namespace

FiniteGroupoid groupoid_from_json(const Json& doc, const std::string& source) {
  return read_groupoid(Node{doc, source, ""}, std::filesystem::path(source).parent_path());
}

Bibundle bibundle_from_json(const Json& doc, const std::string& source) {
  return read_bibundle(Node{doc, source, ""}, std::filesystem::path(source).parent_path());
}

Json to_json(const FiniteGroupoid& g) {
  Json j;
  j["kind"] = "groupoid";
  j["n_obj"] = g.n_obj;
  j["src"] = g.src;
  j["tgt"] = g.tgt;
  j["unit"] = g.unit;
  j["inv"] = g.inv;
  Json comp = Json::array();
  for (int a = 0; a < g.n_arr(); ++a) {
    std::vector<int> row(g.comp.begin() + static_cast<long>(a) * g.n_arr(),
                         g.comp.begin() + static_cast<long>(a + 1) * g.n_arr());
    comp.push_back(row);
  }
  j["comp"] = std::move(comp);
  return j;
}

Json to_json(const Bibundle& b) {
  Json j;
  j["kind"] = "bibundle";
  j["left"] = to_json(b.left);
  j["right"] = to_json(b.right);
  j["carrier"] = b.carrier;
  j["lanchor"] = b.lanchor;
  j["ranchor"] = b.ranchor;
  Json la = Json::array(), ra = Json::array();
  for (int g = 0; g < b.left.n_arr(); ++g)
    for (int m = 0; m < b.carrier; ++m)
      if (int r = b.act_left(g, m); r != kUndefined) la.push_back({g, m, r});
  for (int m = 0; m < b.carrier; ++m)
    for (int h = 0; h < b.right.n_arr(); ++h)
      if (int r = b.act_right(m, h); r != kUndefined) ra.push_back({m, h, r});
  j["lact"] = std::move(la);
  j["ract"] = std::move(ra);
  return j;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // locate the byte offset as line:column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) { return parse_json(slurp(path), path); }

FiniteGroupoid load_groupoid(const std::string& path) { return groupoid_from_json(read_json_file(path), path); }

Bibundle load_bibundle(const std::string& path) { return bibundle_from_json(read_json_file(path), path); }

Json rational_json(const Rational& r) {
  return Json::array({integer_json(r.get_num()), integer_json(r.get_den())});
}

Json complex_json(const Cq& c) { return Json::array({rational_json(c.re()), rational_json(c.im())}); }

Json dump_algebra(const FinCStar& a) {
  Json j;
  j["kind"] = "algebra";
  j["label"] = a.label();
  j["dim"] = a.dim();
  const Wedderburn& w = a.wedderburn();
  j["dimension_vector"] = w.dimension_vector;
  Json traces = Json::array();
  for (const auto& t : a.traces()) traces.push_back(complex_json(t));
  j["traces"] = std::move(traces);
  Json embed = Json::array();
  for (const auto& per_basis : w.embed) {
    Json blocks = Json::array();
    for (const auto& m : per_basis) blocks.push_back(cmatrix_json(m));
    embed.push_back(std::move(blocks));
  }
  j["embed"] = std::move(embed);
  j["residual"] = w.residual;
  return j;
}

Json dump_bimodule(const HilbertBimodule& e) {
  Json j;
  j["kind"] = "bimodule";
  j["left"] = {{"label", e.left->label()}, {"dim", e.left->dim()}};
  j["right"] = {{"label", e.right->label()}, {"dim", e.right->dim()}};
  j["dim"] = e.dim;
  Json la = Json::array(), ra = Json::array(), ip = Json::array();
  for (const auto& m : e.lact) la.push_back(sparse_matrix_json(m));
  for (const auto& m : e.ract) ra.push_back(sparse_matrix_json(m));
  for (int k = 0; k < e.dim; ++k)
    for (int l = 0; l < e.dim; ++l)
      if (!e.inner(k, l).empty()) ip.push_back({k, l, sparse_json(e.inner(k, l))});
  j["lact"] = std::move(la);
  j["ract"] = std::move(ra);
  j["ip"] = std::move(ip);
  j["multiplicity"] = int_matrix_json(multiplicity_matrix(e));
  return j;
}

Json dump_kk(const KKClass& x) {
  Json j;
  j["kind"] = "kk";
  j["src_blocks"] = x.src_blocks;
  j["dst_blocks"] = x.dst_blocks;
  j["matrix"] = int_matrix_json(x.matrix);
  j["determinant"] = x.src_blocks == x.dst_blocks ? integer_json(kk_determinant(x)) : Json(nullptr);
  j["invertible"] = kk_invertible(x);
  return j;
}

Json dump_report(const FunctorialityReport& r) {
  Json j;
  j["kind"] = "functoriality";
  j["pass"] = r.ok;
  j["composite_dim"] = r.composite_dim;
  j["tensor_dim"] = r.tensor_dim;
  j["composite_multiplicity"] = int_matrix_json(r.composite_mult);
  j["tensor_multiplicity"] = int_matrix_json(r.tensor_mult);
  if (r.witness) {
    j["witness_residual"] = r.witness->residual;
    j["witness"] = cmatrix_json(r.witness->unitary);
  }
  j["detail"] = r.detail;
  return j;
}

}  // namespace qf
