#include "qfunctor/corpus.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "qfunctor/errors.hpp"
#include "qfunctor/quantfunctor.hpp"

namespace qf {

namespace {

std::vector<std::vector<int>> cyclic_table(int m) {
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  return t;
}

std::vector<std::vector<int>> s3_table() {
  // permutations of {0,1,2} in lexicographic order; (p q)(x) = p(q(x))
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return t;
}

int pick(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

struct Offsets {
  std::vector<int> obj, arr;
};

Offsets offsets(const BlockGroupoid& g) {
  Offsets o;
  int obj = 0, arr = 0;
  for (const auto& b : g.blocks) {
    o.obj.push_back(obj);
    o.arr.push_back(arr);
    obj += b.objects;
    arr += b.objects * b.objects * static_cast<int>(small_groups()[b.group].size());
  }
  return o;
}

GroupoidFunctor assemble_functor(const BlockGroupoid& g, const BlockGroupoid& h, const std::vector<int>& target,
                                 const std::vector<std::vector<int>>& obj_maps,
                                 const std::vector<std::vector<int>>& homs) {
  const Offsets og = offsets(g), oh = offsets(h);
  GroupoidFunctor f;
  f.on_objects.resize(g.g.n_obj);
  f.on_arrows.resize(g.g.n_arr());
  for (std::size_t c = 0; c < g.blocks.size(); ++c) {
    const int n = g.blocks[c].objects, gs = static_cast<int>(small_groups()[g.blocks[c].group].size());
    const int d = target[c], m = h.blocks[d].objects, hs = static_cast<int>(small_groups()[h.blocks[d].group].size());
    const auto& fo = obj_maps[c];
    for (int a = 0; a < n; ++a) f.on_objects[og.obj[c] + a] = oh.obj[d] + fo[a];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int x = 0; x < gs; ++x)
          f.on_arrows[og.arr[c] + (a * n + b) * gs + x] = oh.arr[d] + (fo[a] * m + fo[b]) * hs + homs[c][x];
  }
  return f;
}

std::vector<int> random_map(std::mt19937_64& rng, int n, int m) {
  std::vector<int> out(n);
  for (auto& x : out) x = pick(rng, m);
  return out;
}

std::string cat_name(const std::string& a, const std::string& b, const std::string& c) { return a + " -> " + b + " -> " + c; }

}  // namespace

const std::vector<std::vector<std::vector<int>>>& small_groups() {
  static const std::vector<std::vector<std::vector<int>>> groups = [] {
    std::vector<std::vector<std::vector<int>>> g{cyclic_table(1), cyclic_table(2), cyclic_table(3), cyclic_table(4)};
    g.push_back({{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}});
    g.push_back(s3_table());
    return g;
  }();
  return groups;
}

const std::vector<std::string>& small_group_names() {
  static const std::vector<std::string> names{"Z1", "Z2", "Z3", "Z4", "Z2xZ2", "S3"};
  return names;
}

std::vector<std::vector<int>> group_homomorphisms(int from, int to) {
  static const auto table = [] {
    const auto& gs = small_groups();
    const int k = static_cast<int>(gs.size());
    std::vector<std::vector<std::vector<std::vector<int>>>> all(k, std::vector<std::vector<std::vector<int>>>(k));
    for (int s = 0; s < k; ++s)
      for (int t = 0; t < k; ++t) {
        const auto& a = gs[s];
        const auto& b = gs[t];
        const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
        std::vector<int> phi(n, 0);
        // Depth-first over images, checking the law on every assigned pair.
        std::function<void(int)> rec = [&](int i) {
          if (i == n) {
            all[s][t].push_back(phi);
            return;
          }
          for (int y = 0; y < m; ++y) {
            phi[i] = y;
            bool ok = true;
            for (int x = 0; x <= i && ok; ++x)
              for (int z = 0; z <= i && ok; ++z) {
                const int pr = a[x][z];
                if (pr <= i && (x == i || z == i || pr == i) && phi[pr] != b[phi[x]][phi[z]]) ok = false;
              }
            if (ok) rec(i + 1);
          }
        };
        rec(0);
      }
    return all;
  }();
  return table[from][to];
}

std::string BlockGroupoid::name() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    os << (i ? "+" : "") << "P" << blocks[i].objects << "x" << small_group_names()[blocks[i].group];
  return os.str();
}

BlockGroupoid block_groupoid(std::vector<BlockGroupoid::Block> blocks) {
  if (blocks.empty()) throw StructureError("block groupoid needs at least one block");
  BlockGroupoid out;
  out.blocks = std::move(blocks);
  for (std::size_t i = 0; i < out.blocks.size(); ++i) {
    const auto& b = out.blocks[i];
    FiniteGroupoid piece = product(pair_groupoid(b.objects), group_groupoid(small_groups()[b.group]));
    out.g = i == 0 ? piece : disjoint_union(out.g, piece);
  }
  return out;
}

BlockGroupoid random_block_groupoid(std::mt19937_64& rng, int max_blocks, int max_objects) {
  static const std::vector<int> group_weights{4, 4, 2, 1, 1, 1};
  std::discrete_distribution<int> grp(group_weights.begin(), group_weights.end());
  std::vector<BlockGroupoid::Block> blocks(1 + pick(rng, max_blocks));
  for (auto& b : blocks) b = {1 + pick(rng, max_objects), grp(rng)};
  return block_groupoid(std::move(blocks));
}

GroupoidFunctor random_functor(std::mt19937_64& rng, const BlockGroupoid& g, const BlockGroupoid& h) {
  std::vector<int> target;
  std::vector<std::vector<int>> obj_maps, homs;
  for (const auto& b : g.blocks) {
    const int d = pick(rng, static_cast<int>(h.blocks.size()));
    target.push_back(d);
    obj_maps.push_back(random_map(rng, b.objects, h.blocks[d].objects));
    const auto hs = group_homomorphisms(b.group, h.blocks[d].group);
    homs.push_back(hs[pick(rng, static_cast<int>(hs.size()))]);
  }
  return assemble_functor(g, h, target, obj_maps, homs);
}

GroupoidFunctor random_equivalence(std::mt19937_64& rng, const BlockGroupoid& g, const BlockGroupoid& h) {
  if (g.blocks.size() != h.blocks.size()) throw HypothesisError("random_equivalence: block counts differ");
  std::vector<int> target(g.blocks.size());
  std::iota(target.begin(), target.end(), 0);
  std::vector<std::vector<int>> obj_maps, homs;
  for (std::size_t c = 0; c < g.blocks.size(); ++c) {
    if (g.blocks[c].group != h.blocks[c].group) throw HypothesisError("random_equivalence: groups differ");
    obj_maps.push_back(random_map(rng, g.blocks[c].objects, h.blocks[c].objects));
    std::vector<std::vector<int>> autos;
    for (const auto& phi : group_homomorphisms(g.blocks[c].group, g.blocks[c].group)) {
      std::vector<int> s = phi;
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) == s.end()) autos.push_back(phi);
    }
    homs.push_back(autos[pick(rng, static_cast<int>(autos.size()))]);
  }
  return assemble_functor(g, h, target, obj_maps, homs);
}

namespace {

// h with the same groups as g block by block but fresh object counts.
BlockGroupoid same_groups(std::mt19937_64& rng, const BlockGroupoid& g, int max_objects) {
  auto blocks = g.blocks;
  for (auto& b : blocks) b.objects = 1 + pick(rng, max_objects);
  return block_groupoid(std::move(blocks));
}

}  // namespace

std::vector<ComposableCase> functoriality_corpus(std::uint64_t seed, int count, int max_carrier) {
  std::mt19937_64 rng(seed);
  std::vector<ComposableCase> out;
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < 200 * count; ++attempt) {
    const int kind = static_cast<int>(out.size()) % 3;
    const BlockGroupoid g = random_block_groupoid(rng, 2, 3);
    const BlockGroupoid h = kind == 1 ? same_groups(rng, g, 3) : random_block_groupoid(rng, 2, 3);
    const BlockGroupoid k = kind == 2 ? same_groups(rng, h, 3) : random_block_groupoid(rng, 2, 3);
    Bibundle m, n;
    std::string label;
    if (kind == 0) {
      m = bibundle_of_functor(g.g, h.g, random_functor(rng, g, h));
      n = bibundle_of_functor(h.g, k.g, random_functor(rng, h, k));
      label = "functor, functor";
    } else if (kind == 1) {
      m = reverse(bibundle_of_functor(h.g, g.g, random_equivalence(rng, h, g)));
      n = bibundle_of_functor(h.g, k.g, random_functor(rng, h, k));
      label = "reversed equivalence, functor";
    } else {
      m = bibundle_of_functor(g.g, h.g, random_functor(rng, g, h));
      n = reverse(bibundle_of_functor(k.g, h.g, random_equivalence(rng, k, h)));
      label = "functor, reversed equivalence";
    }
    if (m.carrier > max_carrier || n.carrier > max_carrier) continue;
    if (compose_bibundles(m, n).carrier > max_carrier) continue;
    out.push_back({label + ": " + cat_name(g.name(), h.name(), k.name()), std::move(m), std::move(n)});
  }
  return out;
}

std::vector<BibundleCase> biprincipal_corpus(std::uint64_t seed, int count, int max_carrier) {
  std::mt19937_64 rng(seed);
  std::vector<BibundleCase> out;
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < 200 * count; ++attempt) {
    const BlockGroupoid g = random_block_groupoid(rng, 2, 3);
    const int kind = static_cast<int>(out.size()) % 3;
    Bibundle m;
    std::string label;
    if (kind == 0) {
      m = identity_bibundle(g.g);
      label = "identity of " + g.name();
    } else {
      const BlockGroupoid h = same_groups(rng, g, 3);
      m = bibundle_of_functor(g.g, h.g, random_equivalence(rng, g, h));
      label = "equivalence " + g.name() + " -> " + h.name();
      if (kind == 2) {
        m = reverse(m);
        label = "reversed " + label;
      }
    }
    if (m.carrier > max_carrier) continue;
    out.push_back({label, std::move(m)});
  }
  return out;
}

HilbertBimodule standard_bimodule(const AlgebraPtr& a, const std::vector<int>& sa, const AlgebraPtr& b,
                                  const std::vector<int>& sb, const IntMatrix& m) {
  std::vector<int> oa, ob;
  int acc = 0;
  for (int n : sa) oa.push_back(std::exchange(acc, acc + n * n));
  acc = 0;
  for (int n : sb) ob.push_back(std::exchange(acc, acc + n * n));
  struct Key {
    int i, j, r, k, l;
  };
  std::vector<Key> basis;
  std::map<std::tuple<int, int, int, int, int>, int> index;
  for (std::size_t i = 0; i < sa.size(); ++i)
    for (std::size_t j = 0; j < sb.size(); ++j)
      for (int r = 0; r < m[i][j]; ++r)
        for (int k = 0; k < sa[i]; ++k)
          for (int l = 0; l < sb[j]; ++l) {
            index[{static_cast<int>(i), static_cast<int>(j), r, k, l}] = static_cast<int>(basis.size());
            basis.push_back({static_cast<int>(i), static_cast<int>(j), r, k, l});
          }
  const int n = static_cast<int>(basis.size());
  if (n == 0) throw HypothesisError("standard_bimodule: multiplicity matrix is zero");
  std::vector<SparseMatrix> lact(static_cast<size_t>(a->dim()), SparseMatrix(n, n));
  std::vector<SparseMatrix> ract(static_cast<size_t>(b->dim()), SparseMatrix(n, n));
  std::vector<SparseVec> ip(static_cast<size_t>(n) * n);
  for (int t = 0; t < n; ++t) {
    const auto [i, j, r, k, l] = basis[t];
    for (int x = 0; x < sa[i]; ++x) lact[oa[i] + x * sa[i] + k].columns[t] = {{index[{i, j, r, x, l}], Cq(1)}};
    for (int y = 0; y < sb[j]; ++y) ract[ob[j] + l * sb[j] + y].columns[t] = {{index[{i, j, r, k, y}], Cq(1)}};
    for (int l2 = 0; l2 < sb[j]; ++l2) ip[static_cast<size_t>(t) * n + index[{i, j, r, k, l2}]] = {{ob[j] + l * sb[j] + l2, Cq(1)}};
  }
  return make_bimodule(a, b, std::move(lact), std::move(ract), std::move(ip));
}

std::vector<DenseVec> random_invertible(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> re(-2, 2), im(-1, 1);
  std::vector<DenseVec> lo(static_cast<size_t>(n), DenseVec(static_cast<size_t>(n)));
  std::vector<DenseVec> up = lo;
  for (int r = 0; r < n; ++r) {
    lo[r][r] = Cq(1);
    up[r][r] = Cq(make_rational(1 + pick(rng, 2), 1 + pick(rng, 2)), Rational(im(rng)));
    for (int c = 0; c < r; ++c) lo[r][c] = Cq(make_rational(re(rng), 1 + pick(rng, 2)), Rational(im(rng)));
    for (int c = r + 1; c < n; ++c)
      if (pick(rng, 2)) up[r][c] = Cq(Rational(re(rng)), Rational(im(rng)));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<DenseVec> p(static_cast<size_t>(n), DenseVec(static_cast<size_t>(n)));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      Cq s;
      for (int k = 0; k <= std::min(r, c); ++k) s += lo[r][k] * up[k][c];
      p[r][perm[c]] = s;
    }
  return p;
}

namespace {

std::vector<int> random_sizes(std::mt19937_64& rng) {
  std::vector<int> s(1 + pick(rng, 3));
  for (auto& x : s) x = 1 + pick(rng, 2);
  return s;
}

IntMatrix random_mult(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  IntMatrix m(rows, std::vector<long long>(cols));
  for (auto& row : m)
    for (auto& x : row) x = pick(rng, 3) == 0 ? 0 : pick(rng, 2);
  return m;
}

long long carrier_dim(const IntMatrix& m, const std::vector<int>& sa, const std::vector<int>& sb) {
  long long d = 0;
  for (std::size_t i = 0; i < sa.size(); ++i)
    for (std::size_t j = 0; j < sb.size(); ++j) d += m[i][j] * sa[i] * sb[j];
  return d;
}

bool product_nonzero(const IntMatrix& x, const IntMatrix& y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < y.size(); ++k)
      if (x[i][k] != 0)
        for (long long v : y[k])
          if (v != 0) return true;
  return false;
}

std::string sizes_name(const std::vector<int>& s) {
  std::ostringstream os;
  os << "Mat(";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ")";
  return os.str();
}

}  // namespace

std::vector<BimodulePairCase> kk_corpus(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<BimodulePairCase> out;
  const int quantized = count / 3;
  for (int attempt = 0; static_cast<int>(out.size()) < count - quantized && attempt < 200 * count; ++attempt) {
    const auto sa = random_sizes(rng), sb = random_sizes(rng), sc = random_sizes(rng);
    const IntMatrix m1 = random_mult(rng, sa.size(), sb.size()), m2 = random_mult(rng, sb.size(), sc.size());
    const long long d1 = carrier_dim(m1, sa, sb), d2 = carrier_dim(m2, sb, sc);
    if (d1 < 1 || d2 < 1 || d1 > 12 || d2 > 12 || !product_nonzero(m1, m2)) continue;
    const auto a = std::make_shared<FinCStar>(block_algebra(sa));
    const auto b = std::make_shared<FinCStar>(block_algebra(sb));
    const auto c = std::make_shared<FinCStar>(block_algebra(sc));
    HilbertBimodule e = transform_carrier(standard_bimodule(a, sa, b, sb, m1), random_invertible(rng, static_cast<int>(d1)));
    HilbertBimodule f = transform_carrier(standard_bimodule(b, sb, c, sc, m2), random_invertible(rng, static_cast<int>(d2)));
    out.push_back({"standard " + sizes_name(sa) + " - " + sizes_name(sb) + " - " + sizes_name(sc), std::move(e), std::move(f)});
  }
  for (auto& cc : functoriality_corpus(seed ^ 0x9e3779b97f4a7c15ULL, quantized, 24)) {
    const AlgebraPtr a = quantize_object(cc.m.left), b = quantize_object(cc.m.right), c = quantize_object(cc.n.right);
    out.push_back({"quantized " + cc.name, quantize_arrow(cc.m, a, b), quantize_arrow(cc.n, b, c)});
  }
  return out;
}

std::vector<SmallBimoduleFamily> small_bimodule_corpus(std::uint64_t seed, int max_dim) {
  std::mt19937_64 rng(seed);
  std::vector<SmallBimoduleFamily> out;
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs{
      {{1, 1}, {1}}, {{2}, {1}}, {{1}, {2}}, {{2}, {1, 1}}, {{1, 1}, {1, 1}}, {{2, 1}, {1}}, {{2}, {2}}};
  for (const auto& [sa, sb] : pairs) {
    const auto a = std::make_shared<FinCStar>(block_algebra(sa));
    const auto b = std::make_shared<FinCStar>(block_algebra(sb));
    std::vector<IntMatrix> mats;
    const std::size_t cells = sa.size() * sb.size();
    std::vector<int> digits(cells, 0);
    for (;;) {
      IntMatrix m(sa.size(), std::vector<long long>(sb.size()));
      for (std::size_t t = 0; t < cells; ++t) m[t / sb.size()][t % sb.size()] = digits[t];
      const long long d = carrier_dim(m, sa, sb);
      if (d >= 1 && d <= max_dim) mats.push_back(m);
      std::size_t t = 0;
      while (t < cells && ++digits[t] > 2) digits[t++] = 0;
      if (t == cells) break;
    }
    std::shuffle(mats.begin(), mats.end(), rng);
    if (mats.size() > 8) mats.resize(8);
    SmallBimoduleFamily fam{sizes_name(sa) + " - " + sizes_name(sb), {}};
    for (const auto& m : mats) {
      HilbertBimodule e = standard_bimodule(a, sa, b, sb, m);
      fam.members.push_back(transform_carrier(e, random_invertible(rng, e.dim)));
      fam.members.push_back(std::move(e));
    }
    out.push_back(std::move(fam));
  }
  // Quantized bibundles between small groupoids, grouped by groupoid pair.
  std::map<std::string, std::size_t> slot;
  std::map<std::string, std::pair<AlgebraPtr, AlgebraPtr>> algebras;
  for (int attempt = 0; attempt < 400; ++attempt) {
    const BlockGroupoid g = random_block_groupoid(rng, 2, 2);
    const BlockGroupoid h = random_block_groupoid(rng, 1, 2);
    if (g.g.n_arr() > 6 || h.g.n_arr() > 6) continue;
    const Bibundle m = bibundle_of_functor(g.g, h.g, random_functor(rng, g, h));
    if (m.carrier > max_dim) continue;
    const std::string key = "quantized " + g.name() + " - " + h.name();
    if (!slot.count(key)) {
      slot[key] = out.size();
      out.push_back({key, {}});
      algebras[key] = {quantize_object(g.g), quantize_object(h.g)};
    }
    auto& fam = out[slot[key]];
    if (fam.members.size() >= 6) continue;
    fam.members.push_back(quantize_arrow(m, algebras[key].first, algebras[key].second));
  }
  return out;
}

}  // namespace qf
