#include "qfunctor/groupoid.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "qfunctor/errors.hpp"

namespace qf {

namespace {

template <typename... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

bool in_range(int v, int n) { return v >= 0 && v < n; }

void check_sizes(const FiniteGroupoid& g) {
  const int n = g.n_arr();
  if (g.n_obj < 1) throw StructureError("groupoid needs at least one object");
  if (static_cast<int>(g.tgt.size()) != n || static_cast<int>(g.inv.size()) != n)
    throw StructureError(cat("src/tgt/inv tables must all have ", n, " entries"));
  if (static_cast<int>(g.unit.size()) != g.n_obj)
    throw StructureError(cat("unit table must have n_obj = ", g.n_obj, " entries"));
  if (g.comp.size() != static_cast<size_t>(n) * n)
    throw StructureError(cat("comp table must be ", n, "x", n));
  for (int a = 0; a < n; ++a) {
    if (!in_range(g.src[a], g.n_obj) || !in_range(g.tgt[a], g.n_obj))
      throw StructureError(cat("arrow ", a, " has an out-of-range endpoint"));
    if (!in_range(g.inv[a], n)) throw StructureError(cat("inv(", a, ") out of range"));
  }
  for (int x = 0; x < g.n_obj; ++x)
    if (!in_range(g.unit[x], n)) throw StructureError(cat("unit(", x, ") out of range"));
  for (int c : g.comp)
    if (c != kUndefined && !in_range(c, n)) throw StructureError("comp entry out of range");
}

}  // namespace

ValidationReport validate(const FiniteGroupoid& g) {
  check_sizes(g);
  ValidationReport rep;
  auto& v = rep.violations;
  const int n = g.n_arr();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int c = g.compose(a, b);
      const bool composable = g.src[a] == g.tgt[b];
      if (composable != (c != kUndefined)) {
        v.push_back(cat("comp(", a, ",", b, ") definedness does not match src/tgt"));
        continue;
      }
      if (c != kUndefined && (g.src[c] != g.src[b] || g.tgt[c] != g.tgt[a]))
        v.push_back(cat("comp(", a, ",", b, ")=", c, " has wrong endpoints"));
    }
  for (int x = 0; x < g.n_obj; ++x) {
    const int u = g.unit[x];
    if (g.src[u] != x || g.tgt[u] != x) v.push_back(cat("unit(", x, ") is not a loop at ", x));
  }
  if (!v.empty()) return rep;
  for (int a = 0; a < n; ++a) {
    if (g.compose(g.unit[g.tgt[a]], a) != a || g.compose(a, g.unit[g.src[a]]) != a)
      v.push_back(cat("unit law fails at arrow ", a));
    const int i = g.inv[a];
    if (g.src[i] != g.tgt[a] || g.compose(a, i) != g.unit[g.tgt[a]] ||
        g.compose(i, a) != g.unit[g.src[a]])
      v.push_back(cat("inv(", a, ")=", i, " is not a two-sided inverse"));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int ab = g.compose(a, b);
      if (ab == kUndefined) continue;
      for (int c = 0; c < n; ++c) {
        const int bc = g.compose(b, c);
        if (bc == kUndefined) continue;
        if (g.compose(ab, c) != g.compose(a, bc))
          v.push_back(cat("associativity fails on triple (", a, ",", b, ",", c, ")"));
      }
    }
  return rep;
}

FiniteGroupoid trivial_groupoid() { return pair_groupoid(1); }

FiniteGroupoid pair_groupoid(int n) {
  if (n < 1) throw StructureError("pair groupoid needs n >= 1");
  FiniteGroupoid g;
  g.n_obj = n;
  const int N = n * n;
  g.src.resize(N);
  g.tgt.resize(N);
  g.inv.resize(N);
  g.unit.resize(n);
  g.comp.assign(static_cast<size_t>(N) * N, kUndefined);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int arr = a * n + b;
      g.tgt[arr] = a;
      g.src[arr] = b;
      g.inv[arr] = b * n + a;
      for (int c = 0; c < n; ++c) g.comp[static_cast<size_t>(arr) * N + b * n + c] = a * n + c;
    }
  for (int x = 0; x < n; ++x) g.unit[x] = x * n + x;
  return g;
}

FiniteGroupoid group_groupoid(const std::vector<std::vector<int>>& cayley) {
  const int n = static_cast<int>(cayley.size());
  if (n == 0) throw StructureError("empty Cayley table");
  for (const auto& row : cayley) {
    if (static_cast<int>(row.size()) != n) throw StructureError("Cayley table is not square");
    for (int x : row)
      if (!in_range(x, n)) throw StructureError("Cayley table entry out of range");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]])
          throw StructureError(cat("Cayley table not associative at (", a, ",", b, ",", c, ")"));
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = cayley[a][b] == b && cayley[b][a] == b;
    if (ok) e = a;
  }
  if (e < 0) throw StructureError("Cayley table has no identity");
  FiniteGroupoid g;
  g.n_obj = 1;
  g.src.assign(n, 0);
  g.tgt.assign(n, 0);
  g.unit = {e};
  g.inv.assign(n, -1);
  g.comp.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      g.comp[static_cast<size_t>(a) * n + b] = cayley[a][b];
      if (cayley[a][b] == e && cayley[b][a] == e) g.inv[a] = b;
    }
    if (g.inv[a] < 0) throw StructureError(cat("element ", a, " has no inverse"));
  }
  return g;
}

FiniteGroupoid cyclic_group(int m) {
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  return group_groupoid(t);
}

FiniteGroupoid transformation_groupoid(const std::vector<std::vector<int>>& cayley,
                                       const std::vector<std::vector<int>>& action) {
  const FiniteGroupoid grp = group_groupoid(cayley);
  const int ng = grp.n_arr();
  if (static_cast<int>(action.size()) != ng) throw StructureError("action table needs one row per group element");
  const int np = static_cast<int>(action.front().size());
  for (const auto& row : action) {
    if (static_cast<int>(row.size()) != np) throw StructureError("ragged action table");
    for (int x : row)
      if (!in_range(x, np)) throw StructureError("action entry out of range");
  }
  FiniteGroupoid g;
  g.n_obj = np;
  const int N = ng * np;
  g.src.resize(N);
  g.tgt.resize(N);
  g.inv.resize(N);
  g.unit.resize(np);
  g.comp.assign(static_cast<size_t>(N) * N, kUndefined);
  auto idx = [np](int grp_el, int x) { return grp_el * np + x; };
  for (int a = 0; a < ng; ++a)
    for (int x = 0; x < np; ++x) {
      g.src[idx(a, x)] = x;
      g.tgt[idx(a, x)] = action[a][x];
      g.inv[idx(a, x)] = idx(grp.inv[a], action[a][x]);
    }
  for (int x = 0; x < np; ++x) g.unit[x] = idx(grp.unit[0], x);
  for (int a = 0; a < ng; ++a)
    for (int y = 0; y < np; ++y)
      for (int b = 0; b < ng; ++b)
        for (int x = 0; x < np; ++x)
          if (action[b][x] == y)
            g.comp[static_cast<size_t>(idx(a, y)) * N + idx(b, x)] = idx(grp.compose(a, b), x);
  return g;
}

FiniteGroupoid product(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  FiniteGroupoid g;
  const int na = a.n_arr(), nb = b.n_arr(), N = na * nb;
  g.n_obj = a.n_obj * b.n_obj;
  g.src.resize(N);
  g.tgt.resize(N);
  g.inv.resize(N);
  g.unit.resize(g.n_obj);
  g.comp.assign(static_cast<size_t>(N) * N, kUndefined);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      const int k = i * nb + j;
      g.src[k] = a.src[i] * b.n_obj + b.src[j];
      g.tgt[k] = a.tgt[i] * b.n_obj + b.tgt[j];
      g.inv[k] = a.inv[i] * nb + b.inv[j];
    }
  for (int x = 0; x < a.n_obj; ++x)
    for (int y = 0; y < b.n_obj; ++y) g.unit[x * b.n_obj + y] = a.unit[x] * nb + b.unit[y];
  for (int i1 = 0; i1 < na; ++i1)
    for (int j1 = 0; j1 < nb; ++j1)
      for (int i2 = 0; i2 < na; ++i2) {
        const int ci = a.compose(i1, i2);
        if (ci == kUndefined) continue;
        for (int j2 = 0; j2 < nb; ++j2) {
          const int cj = b.compose(j1, j2);
          if (cj == kUndefined) continue;
          g.comp[static_cast<size_t>(i1 * nb + j1) * N + i2 * nb + j2] = ci * nb + cj;
        }
      }
  return g;
}

FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  FiniteGroupoid g;
  const int na = a.n_arr(), nb = b.n_arr(), N = na + nb;
  g.n_obj = a.n_obj + b.n_obj;
  g.src = a.src;
  g.tgt = a.tgt;
  g.inv = a.inv;
  g.unit = a.unit;
  for (int i = 0; i < nb; ++i) {
    g.src.push_back(b.src[i] + a.n_obj);
    g.tgt.push_back(b.tgt[i] + a.n_obj);
    g.inv.push_back(b.inv[i] + na);
  }
  for (int x = 0; x < b.n_obj; ++x) g.unit.push_back(b.unit[x] + na);
  g.comp.assign(static_cast<size_t>(N) * N, kUndefined);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) g.comp[static_cast<size_t>(i) * N + j] = a.compose(i, j);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      const int c = b.compose(i, j);
      g.comp[static_cast<size_t>(i + na) * N + j + na] = c == kUndefined ? kUndefined : c + na;
    }
  return g;
}

FiniteGroupoid relabel(const FiniteGroupoid& g, const std::vector<int>& obj_perm,
                       const std::vector<int>& arr_perm) {
  const int N = g.n_arr();
  FiniteGroupoid r;
  r.n_obj = g.n_obj;
  r.src.resize(N);
  r.tgt.resize(N);
  r.inv.resize(N);
  r.unit.resize(g.n_obj);
  r.comp.assign(static_cast<size_t>(N) * N, kUndefined);
  for (int a = 0; a < N; ++a) {
    r.src[arr_perm[a]] = obj_perm[g.src[a]];
    r.tgt[arr_perm[a]] = obj_perm[g.tgt[a]];
    r.inv[arr_perm[a]] = arr_perm[g.inv[a]];
    for (int b = 0; b < N; ++b) {
      const int c = g.compose(a, b);
      if (c != kUndefined) r.comp[static_cast<size_t>(arr_perm[a]) * N + arr_perm[b]] = arr_perm[c];
    }
  }
  for (int x = 0; x < g.n_obj; ++x) r.unit[obj_perm[x]] = arr_perm[g.unit[x]];
  return r;
}

ValidationReport validate(const Bibundle& b) {
  ValidationReport rep;
  auto& v = rep.violations;
  for (const auto& s : validate(b.left).violations) v.push_back("left groupoid: " + s);
  for (const auto& s : validate(b.right).violations) v.push_back("right groupoid: " + s);
  if (!v.empty()) return rep;
  const int M = b.carrier, NG = b.left.n_arr(), NH = b.right.n_arr();
  if (M < 0 || static_cast<int>(b.lanchor.size()) != M || static_cast<int>(b.ranchor.size()) != M)
    throw StructureError(cat("anchor tables must have carrier = ", M, " entries"));
  if (b.lact.size() != static_cast<size_t>(NG) * M || b.ract.size() != static_cast<size_t>(M) * NH)
    throw StructureError("action tables have the wrong size");
  for (int m = 0; m < M; ++m)
    if (!in_range(b.lanchor[m], b.left.n_obj) || !in_range(b.ranchor[m], b.right.n_obj))
      throw StructureError(cat("anchor of point ", m, " out of range"));
  for (int x : b.lact)
    if (x != kUndefined && !in_range(x, M)) throw StructureError("left action entry out of range");
  for (int x : b.ract)
    if (x != kUndefined && !in_range(x, M)) throw StructureError("right action entry out of range");

  const auto& G = b.left;
  const auto& H = b.right;
  for (int g = 0; g < NG; ++g)
    for (int m = 0; m < M; ++m) {
      const int gm = b.act_left(g, m);
      const bool defined = G.src[g] == b.lanchor[m];
      if (defined != (gm != kUndefined)) {
        v.push_back(cat("left action ", g, ".", m, " definedness does not match anchors"));
        continue;
      }
      if (gm == kUndefined) continue;
      if (b.lanchor[gm] != G.tgt[g]) v.push_back(cat("pi(", g, ".", m, ") != tgt(", g, ")"));
      if (b.ranchor[gm] != b.ranchor[m]) v.push_back(cat("rho(", g, ".", m, ") != rho(", m, ")"));
    }
  for (int m = 0; m < M; ++m)
    for (int h = 0; h < NH; ++h) {
      const int mh = b.act_right(m, h);
      const bool defined = b.ranchor[m] == H.tgt[h];
      if (defined != (mh != kUndefined)) {
        v.push_back(cat("right action ", m, ".", h, " definedness does not match anchors"));
        continue;
      }
      if (mh == kUndefined) continue;
      if (b.ranchor[mh] != H.src[h]) v.push_back(cat("rho(", m, ".", h, ") != src(", h, ")"));
      if (b.lanchor[mh] != b.lanchor[m]) v.push_back(cat("pi(", m, ".", h, ") != pi(", m, ")"));
    }
  if (!v.empty()) return rep;
  for (int m = 0; m < M; ++m) {
    if (b.act_left(G.unit[b.lanchor[m]], m) != m) v.push_back(cat("left unit does not fix ", m));
    if (b.act_right(m, H.unit[b.ranchor[m]]) != m) v.push_back(cat("right unit does not fix ", m));
  }
  for (int g1 = 0; g1 < NG; ++g1)
    for (int g2 = 0; g2 < NG; ++g2) {
      const int g12 = G.compose(g1, g2);
      if (g12 == kUndefined) continue;
      for (int m = 0; m < M; ++m) {
        const int g2m = b.act_left(g2, m);
        if (g2m == kUndefined) continue;
        if (b.act_left(g1, g2m) != b.act_left(g12, m))
          v.push_back(cat("left action not associative at (", g1, ",", g2, ",", m, ")"));
      }
    }
  for (int m = 0; m < M; ++m)
    for (int h1 = 0; h1 < NH; ++h1) {
      const int mh1 = b.act_right(m, h1);
      if (mh1 == kUndefined) continue;
      for (int h2 = 0; h2 < NH; ++h2) {
        const int h12 = H.compose(h1, h2);
        if (h12 == kUndefined) continue;
        if (b.act_right(mh1, h2) != b.act_right(m, h12))
          v.push_back(cat("right action not associative at (", m, ",", h1, ",", h2, ")"));
      }
    }
  for (int g = 0; g < NG; ++g)
    for (int m = 0; m < M; ++m) {
      const int gm = b.act_left(g, m);
      if (gm == kUndefined) continue;
      for (int h = 0; h < NH; ++h) {
        const int mh = b.act_right(m, h);
        if (mh == kUndefined) continue;
        if (b.act_right(gm, h) != b.act_left(g, mh))
          v.push_back(cat("actions do not commute at (", g, ",", m, ",", h, ")"));
      }
    }
  return rep;
}

namespace {

// One side of principality: `anchor` surjective onto n_obj, and the other
// side's action free and transitive on its fibers.
template <typename Act>
bool principal_side(const Bibundle& b, const std::vector<int>& anchor, int n_obj, int n_act, Act act) {
  std::vector<bool> hit(static_cast<size_t>(n_obj), false);
  for (int x : anchor) hit[x] = true;
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  for (int m = 0; m < b.carrier; ++m)
    for (int m2 = 0; m2 < b.carrier; ++m2) {
      if (anchor[m] != anchor[m2]) continue;
      int count = 0;
      for (int a = 0; a < n_act; ++a)
        if (act(m, a) == m2) ++count;
      if (count != 1) return false;
    }
  return true;
}

}  // namespace

bool is_principal(const Bibundle& b) {
  return principal_side(b, b.lanchor, b.left.n_obj, b.right.n_arr(),
                        [&](int m, int h) { return b.act_right(m, h); });
}

bool is_biprincipal(const Bibundle& b) {
  return is_principal(b) &&
         principal_side(b, b.ranchor, b.right.n_obj, b.left.n_arr(),
                        [&](int m, int g) { return b.act_left(g, m); });
}

int right_translation(const Bibundle& b, int m, int m2) {
  for (int h = 0; h < b.right.n_arr(); ++h)
    if (b.act_right(m, h) == m2) return h;
  return kUndefined;
}

Bibundle identity_bibundle(const FiniteGroupoid& g) {
  Bibundle b;
  b.left = g;
  b.right = g;
  const int N = g.n_arr();
  b.carrier = N;
  b.lanchor = g.tgt;
  b.ranchor = g.src;
  b.lact.resize(static_cast<size_t>(N) * N);
  b.ract.resize(static_cast<size_t>(N) * N);
  for (int a = 0; a < N; ++a)
    for (int m = 0; m < N; ++m) {
      b.lact[static_cast<size_t>(a) * N + m] = g.compose(a, m);
      b.ract[static_cast<size_t>(m) * N + a] = g.compose(m, a);
    }
  return b;
}

Bibundle reverse(const Bibundle& b) {
  Bibundle r;
  r.left = b.right;
  r.right = b.left;
  r.carrier = b.carrier;
  r.lanchor = b.ranchor;
  r.ranchor = b.lanchor;
  const int NG = b.left.n_arr(), NH = b.right.n_arr(), M = b.carrier;
  r.lact.assign(static_cast<size_t>(NH) * M, kUndefined);
  r.ract.assign(static_cast<size_t>(M) * NG, kUndefined);
  for (int h = 0; h < NH; ++h)
    for (int m = 0; m < M; ++m) r.lact[static_cast<size_t>(h) * M + m] = b.act_right(m, b.right.inv[h]);
  for (int m = 0; m < M; ++m)
    for (int g = 0; g < NG; ++g) r.ract[static_cast<size_t>(m) * NG + g] = b.act_left(b.left.inv[g], m);
  return r;
}

Bibundle disjoint_union(const Bibundle& a, const Bibundle& b) {
  if (!(a.left == b.left) || !(a.right == b.right))
    throw TypeMismatch("disjoint union needs bibundles over the same groupoids");
  Bibundle r;
  r.left = a.left;
  r.right = a.right;
  const int M = a.carrier + b.carrier, NG = a.left.n_arr(), NH = a.right.n_arr();
  r.carrier = M;
  r.lanchor = a.lanchor;
  r.lanchor.insert(r.lanchor.end(), b.lanchor.begin(), b.lanchor.end());
  r.ranchor = a.ranchor;
  r.ranchor.insert(r.ranchor.end(), b.ranchor.begin(), b.ranchor.end());
  r.lact.assign(static_cast<size_t>(NG) * M, kUndefined);
  r.ract.assign(static_cast<size_t>(M) * NH, kUndefined);
  auto shift = [](int x, int off) { return x == kUndefined ? kUndefined : x + off; };
  for (int g = 0; g < NG; ++g) {
    for (int m = 0; m < a.carrier; ++m) r.lact[static_cast<size_t>(g) * M + m] = a.act_left(g, m);
    for (int m = 0; m < b.carrier; ++m)
      r.lact[static_cast<size_t>(g) * M + a.carrier + m] = shift(b.act_left(g, m), a.carrier);
  }
  for (int h = 0; h < NH; ++h) {
    for (int m = 0; m < a.carrier; ++m) r.ract[static_cast<size_t>(m) * NH + h] = a.act_right(m, h);
    for (int m = 0; m < b.carrier; ++m)
      r.ract[static_cast<size_t>(a.carrier + m) * NH + h] = shift(b.act_right(m, h), a.carrier);
  }
  return r;
}

Bibundle relabel(const Bibundle& b, const std::vector<int>& perm) {
  Bibundle r = b;
  const int M = b.carrier, NG = b.left.n_arr(), NH = b.right.n_arr();
  auto p = [&](int x) { return x == kUndefined ? kUndefined : perm[x]; };
  for (int m = 0; m < M; ++m) {
    r.lanchor[perm[m]] = b.lanchor[m];
    r.ranchor[perm[m]] = b.ranchor[m];
    for (int g = 0; g < NG; ++g) r.lact[static_cast<size_t>(g) * M + perm[m]] = p(b.act_left(g, m));
    for (int h = 0; h < NH; ++h) r.ract[static_cast<size_t>(perm[m]) * NH + h] = p(b.act_right(m, h));
  }
  return r;
}

Bibundle compose_bibundles(const Bibundle& m, const Bibundle& n) {
  if (!(m.right == n.left))
    throw TypeMismatch("compose_bibundles: right groupoid of the first factor differs from left groupoid of the second");
  if (!is_principal(m)) throw HypothesisError("compose_bibundles: first factor is not principal");
  const FiniteGroupoid& H = m.right;
  const int NH = H.n_arr();

  // Fiber product in lexicographic order.
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> index(static_cast<size_t>(m.carrier) * n.carrier, -1);
  for (int a = 0; a < m.carrier; ++a)
    for (int b = 0; b < n.carrier; ++b)
      if (m.ranchor[a] == n.lanchor[b]) {
        index[static_cast<size_t>(a) * n.carrier + b] = static_cast<int>(pairs.size());
        pairs.emplace_back(a, b);
      }
  auto pair_index = [&](int a, int b) { return index[static_cast<size_t>(a) * n.carrier + b]; };

  std::vector<int> orbit(pairs.size(), -1);
  std::vector<std::pair<int, int>> reps;
  for (std::size_t start = 0; start < pairs.size(); ++start) {
    if (orbit[start] >= 0) continue;
    const int id = static_cast<int>(reps.size());
    reps.push_back(pairs[start]);
    std::deque<int> queue{static_cast<int>(start)};
    orbit[start] = id;
    while (!queue.empty()) {
      const auto [a, b] = pairs[queue.front()];
      queue.pop_front();
      for (int h = 0; h < NH; ++h) {
        if (H.tgt[h] != m.ranchor[a]) continue;
        const int j = pair_index(m.act_right(a, h), n.act_left(H.inv[h], b));
        if (orbit[j] < 0) {
          orbit[j] = id;
          queue.push_back(j);
        }
      }
    }
  }

  Bibundle r;
  r.left = m.left;
  r.right = n.right;
  const int R = static_cast<int>(reps.size()), NG = m.left.n_arr(), NK = n.right.n_arr();
  r.carrier = R;
  r.lanchor.resize(R);
  r.ranchor.resize(R);
  r.lact.assign(static_cast<size_t>(NG) * R, kUndefined);
  r.ract.assign(static_cast<size_t>(R) * NK, kUndefined);
  for (int c = 0; c < R; ++c) {
    const auto [a, b] = reps[c];
    r.lanchor[c] = m.lanchor[a];
    r.ranchor[c] = n.ranchor[b];
    for (int g = 0; g < NG; ++g) {
      const int ga = m.act_left(g, a);
      if (ga != kUndefined) r.lact[static_cast<size_t>(g) * R + c] = orbit[pair_index(ga, b)];
    }
    for (int k = 0; k < NK; ++k) {
      const int bk = n.act_right(b, k);
      if (bk != kUndefined) r.ract[static_cast<size_t>(c) * NK + k] = orbit[pair_index(a, bk)];
    }
  }
  return r;
}

namespace {

struct IsoSearch {
  const Bibundle& a;
  const Bibundle& b;
  std::vector<int> phi;
  std::vector<int> used_by;
  std::vector<int> orbit_reps;

  // Extends phi from x -> y across the whole combined orbit; records the
  // points it assigned so they can be undone.
  bool propagate(int x, int y, std::vector<int>& assigned) {
    std::deque<std::pair<int, int>> queue{{x, y}};
    while (!queue.empty()) {
      const auto [p, q] = queue.front();
      queue.pop_front();
      if (phi[p] >= 0) {
        if (phi[p] != q) return false;
        continue;
      }
      if (used_by[q] >= 0 || a.lanchor[p] != b.lanchor[q] || a.ranchor[p] != b.ranchor[q]) return false;
      phi[p] = q;
      used_by[q] = p;
      assigned.push_back(p);
      for (int g = 0; g < a.left.n_arr(); ++g) {
        const int gp = a.act_left(g, p);
        if (gp != kUndefined) queue.emplace_back(gp, b.act_left(g, q));
      }
      for (int h = 0; h < a.right.n_arr(); ++h) {
        const int ph = a.act_right(p, h);
        if (ph != kUndefined) queue.emplace_back(ph, b.act_right(q, h));
      }
    }
    return true;
  }

  bool search(std::size_t k) {
    if (k == orbit_reps.size()) return true;
    const int x = orbit_reps[k];
    for (int y = 0; y < b.carrier; ++y) {
      if (used_by[y] >= 0) continue;
      std::vector<int> assigned;
      if (propagate(x, y, assigned) && search(k + 1)) return true;
      for (int p : assigned) {
        used_by[phi[p]] = -1;
        phi[p] = -1;
      }
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<int>> bibundle_isomorphic(const Bibundle& a, const Bibundle& b) {
  if (!(a.left == b.left) || !(a.right == b.right) || a.carrier != b.carrier) return std::nullopt;
  auto hist = [](const Bibundle& x) {
    std::vector<std::pair<int, int>> h;
    for (int m = 0; m < x.carrier; ++m) h.emplace_back(x.lanchor[m], x.ranchor[m]);
    std::sort(h.begin(), h.end());
    return h;
  };
  if (hist(a) != hist(b)) return std::nullopt;

  IsoSearch s{a, b, std::vector<int>(a.carrier, -1), std::vector<int>(b.carrier, -1), {}};
  // Orbit representatives of the combined actions on a.
  std::vector<bool> seen(static_cast<size_t>(a.carrier), false);
  for (int m = 0; m < a.carrier; ++m) {
    if (seen[m]) continue;
    s.orbit_reps.push_back(m);
    std::deque<int> queue{m};
    seen[m] = true;
    while (!queue.empty()) {
      const int p = queue.front();
      queue.pop_front();
      auto visit = [&](int q) {
        if (q != kUndefined && !seen[q]) {
          seen[q] = true;
          queue.push_back(q);
        }
      };
      for (int g = 0; g < a.left.n_arr(); ++g) visit(a.act_left(g, p));
      for (int h = 0; h < a.right.n_arr(); ++h) visit(a.act_right(p, h));
    }
  }
  if (!s.search(0)) return std::nullopt;
  return s.phi;
}

bool is_functor(const FiniteGroupoid& g, const FiniteGroupoid& h, const GroupoidFunctor& f) {
  if (static_cast<int>(f.on_objects.size()) != g.n_obj || static_cast<int>(f.on_arrows.size()) != g.n_arr())
    return false;
  for (int x : f.on_objects)
    if (!in_range(x, h.n_obj)) return false;
  for (int a : f.on_arrows)
    if (!in_range(a, h.n_arr())) return false;
  for (int a = 0; a < g.n_arr(); ++a)
    if (h.src[f.on_arrows[a]] != f.on_objects[g.src[a]] || h.tgt[f.on_arrows[a]] != f.on_objects[g.tgt[a]])
      return false;
  for (int x = 0; x < g.n_obj; ++x)
    if (f.on_arrows[g.unit[x]] != h.unit[f.on_objects[x]]) return false;
  for (int a = 0; a < g.n_arr(); ++a)
    for (int b = 0; b < g.n_arr(); ++b) {
      const int c = g.compose(a, b);
      if (c != kUndefined && h.compose(f.on_arrows[a], f.on_arrows[b]) != f.on_arrows[c]) return false;
    }
  return true;
}

Bibundle bibundle_of_functor(const FiniteGroupoid& g, const FiniteGroupoid& h, const GroupoidFunctor& f) {
  if (!is_functor(g, h, f)) throw StructureError("bibundle_of_functor: not a functor");
  std::vector<std::pair<int, int>> pts;
  std::vector<int> index(static_cast<size_t>(g.n_obj) * h.n_arr(), -1);
  for (int x = 0; x < g.n_obj; ++x)
    for (int a = 0; a < h.n_arr(); ++a)
      if (h.tgt[a] == f.on_objects[x]) {
        index[static_cast<size_t>(x) * h.n_arr() + a] = static_cast<int>(pts.size());
        pts.emplace_back(x, a);
      }
  Bibundle b;
  b.left = g;
  b.right = h;
  const int M = static_cast<int>(pts.size()), NG = g.n_arr(), NH = h.n_arr();
  b.carrier = M;
  b.lanchor.resize(M);
  b.ranchor.resize(M);
  b.lact.assign(static_cast<size_t>(NG) * M, kUndefined);
  b.ract.assign(static_cast<size_t>(M) * NH, kUndefined);
  for (int m = 0; m < M; ++m) {
    const auto [x, a] = pts[m];
    b.lanchor[m] = x;
    b.ranchor[m] = h.src[a];
    for (int k = 0; k < NG; ++k)
      if (g.src[k] == x)
        b.lact[static_cast<size_t>(k) * M + m] =
            index[static_cast<size_t>(g.tgt[k]) * NH + h.compose(f.on_arrows[k], a)];
    for (int k = 0; k < NH; ++k)
      if (h.tgt[k] == h.src[a]) b.ract[static_cast<size_t>(m) * NH + k] = index[static_cast<size_t>(x) * NH + h.compose(a, k)];
  }
  return b;
}

std::vector<std::vector<int>> components(const FiniteGroupoid& g) {
  std::vector<int> parent(g.n_obj);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int a = 0; a < g.n_arr(); ++a) parent[find(g.src[a])] = find(g.tgt[a]);
  std::vector<std::vector<int>> out;
  std::vector<int> slot(g.n_obj, -1);
  for (int x = 0; x < g.n_obj; ++x) {
    const int r = find(x);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(x);
  }
  return out;
}

}  // namespace qf
