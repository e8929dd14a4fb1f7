// Finite groupoids and principal bibundles between them.
//
// Conventions: arrows are indexed 0..n_arr-1 and objects 0..n_obj-1.
// comp(g, h) is defined iff src(g) == tgt(h) and then src(comp) = src(h),
// tgt(comp) = tgt(g) (function-composition order). Undefined table entries
// are stored as -1. In the finite setting the surjective-submersion
// condition on anchors degenerates to plain surjectivity.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qf {

constexpr int kUndefined = -1;

struct ValidationReport {
  bool ok() const { return violations.empty(); }
  std::vector<std::string> violations;
};

struct FiniteGroupoid {
  int n_obj = 0;
  std::vector<int> src;
  std::vector<int> tgt;
  std::vector<int> unit;   // object -> identity arrow
  std::vector<int> comp;   // n_arr * n_arr, comp[g * n_arr + h]
  std::vector<int> inv;

  int n_arr() const { return static_cast<int>(src.size()); }
  int compose(int g, int h) const { return comp[static_cast<size_t>(g) * n_arr() + h]; }

  friend bool operator==(const FiniteGroupoid&, const FiniteGroupoid&) = default;
};

/// Throws StructureError on malformed table sizes or out-of-range entries;
/// otherwise returns every axiom violation with its witness.
ValidationReport validate(const FiniteGroupoid& g);

FiniteGroupoid trivial_groupoid();
/// Objects 0..n-1, arrow (a,b) = a*n + b goes from b to a.
FiniteGroupoid pair_groupoid(int n);
/// One-object groupoid from a Cayley table; throws if the table is not a group.
FiniteGroupoid group_groupoid(const std::vector<std::vector<int>>& cayley);
FiniteGroupoid cyclic_group(int m);
/// Transformation groupoid of a group (Cayley table) acting on points via
/// action[g][x]; arrow (g, x) goes from x to g.x.
FiniteGroupoid transformation_groupoid(const std::vector<std::vector<int>>& cayley,
                                       const std::vector<std::vector<int>>& action);
FiniteGroupoid product(const FiniteGroupoid& a, const FiniteGroupoid& b);
FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b);
/// Applies permutations to objects and arrows (new index = perm[old]).
FiniteGroupoid relabel(const FiniteGroupoid& g, const std::vector<int>& obj_perm,
                       const std::vector<int>& arr_perm);

/// Left G-action and right H-action on a finite carrier.
/// lact[g * carrier + m] = g.m (defined iff src(g) == lanchor[m]);
/// ract[m * n_arr(H) + h] = m.h (defined iff ranchor[m] == tgt(h)).
struct Bibundle {
  FiniteGroupoid left;
  FiniteGroupoid right;
  int carrier = 0;
  std::vector<int> lanchor;
  std::vector<int> ranchor;
  std::vector<int> lact;
  std::vector<int> ract;

  int act_left(int g, int m) const { return lact[static_cast<size_t>(g) * carrier + m]; }
  int act_right(int m, int h) const {
    return ract[static_cast<size_t>(m) * right.n_arr() + h];
  }
};

ValidationReport validate(const Bibundle& b);

/// pi surjective and H free and transitive on pi-fibers.
bool is_principal(const Bibundle& b);
/// Principal in both directions (a Morita equivalence of groupoids).
bool is_biprincipal(const Bibundle& b);
/// For principal b: the unique h with m.h = m2 (requires pi(m) == pi(m2)).
int right_translation(const Bibundle& b, int m, int m2);

Bibundle identity_bibundle(const FiniteGroupoid& g);
/// The H-G bibundle obtained by swapping sides (m.g := g^{-1}.m).
Bibundle reverse(const Bibundle& b);
Bibundle disjoint_union(const Bibundle& a, const Bibundle& b);
Bibundle relabel(const Bibundle& b, const std::vector<int>& carrier_perm);

/// M (*)_H N: pairs over the middle objects modulo the diagonal H-action,
/// one lexicographically least representative per orbit.
Bibundle compose_bibundles(const Bibundle& m, const Bibundle& n);

/// Equivariant, anchor-preserving bijection carrier(a) -> carrier(b).
std::optional<std::vector<int>> bibundle_isomorphic(const Bibundle& a, const Bibundle& b);

/// A functor G -> H given on objects and arrows.
struct GroupoidFunctor {
  std::vector<int> on_objects;
  std::vector<int> on_arrows;
};

bool is_functor(const FiniteGroupoid& g, const FiniteGroupoid& h, const GroupoidFunctor& f);
/// The principal G-H bibundle { (x, h) : tgt(h) = F(x) } of a functor.
Bibundle bibundle_of_functor(const FiniteGroupoid& g, const FiniteGroupoid& h,
                             const GroupoidFunctor& f);

/// Connected components as lists of objects.
std::vector<std::vector<int>> components(const FiniteGroupoid& g);

}  // namespace qf
