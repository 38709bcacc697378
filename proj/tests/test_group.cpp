#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "zs/group.hpp"

using zs::Elem;
using zs::GroupTable;

namespace {

// independent axiom check, not the constructor's own
void check_axioms(const GroupTable& G) {
  const int n = G.order();
  for (Elem a = 0; a < n; ++a) {
    CHECK(G.mul(G.identity(), a) == a);
    CHECK(G.mul(a, G.identity()) == a);
    CHECK(G.mul(a, G.inv(a)) == G.identity());
  }
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        CHECK(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)));
}

}  // namespace

TEST_CASE("cyclic groups") {
  for (int n : {1, 2, 3, 5, 9, 13}) {
    const GroupTable G = GroupTable::cyclic(n);
    CHECK(G.order() == n);
    CHECK(G.is_abelian());
    CHECK(G.exponent() == n);
    check_axioms(G);
    if (n > 1) {
      // generator has full order
      Elem g = 1, p = 1;
      int ord = 1;
      while (p != G.identity()) {
        p = G.mul(p, g);
        ++ord;
        if (p == 1) break;
      }
      CHECK(G.pow(1, n) == G.identity());
      CHECK(G.pow(1, n - 1) != G.identity());
    }
  }
}

TEST_CASE("abelian p-group structure") {
  const GroupTable G = GroupTable::abelian_p_group(3, {1, 2});
  CHECK(G.order() == 27);
  CHECK(G.is_abelian());
  CHECK(G.exponent() == 9);
  CHECK(G.description() == "C3xC9");
  check_axioms(G);

  const GroupTable E8 = GroupTable::abelian_p_group(2, {1, 1, 1});
  CHECK(E8.order() == 8);
  CHECK(E8.exponent() == 2);
  for (Elem a = 0; a < 8; ++a) CHECK(E8.mul(a, a) == E8.identity());
}

TEST_CASE("heisenberg 3 structural counts") {
  const GroupTable G = GroupTable::heisenberg(3);
  CHECK(G.order() == 27);
  CHECK(!G.is_abelian());
  CHECK(G.exponent() == 3);
  CHECK(G.center().size() == 3);
  CHECK(G.commutator_subgroup().size() == 3);
  CHECK(G.commutator_subgroup() == G.center());
  CHECK(G.conjugacy_classes().size() == 11);
  CHECK(G.z_classes().size() == 5);
  CHECK(G.automorphisms().size() == 432);
  check_axioms(G);
}

TEST_CASE("heisenberg normal form ids and naming") {
  const GroupTable G = GroupTable::heisenberg(3);
  // x^i y^j v^k -> i*9 + j*3 + k
  CHECK(G.identity() == 0);
  CHECK(G.elem_by_name("v") == 1);
  CHECK(G.elem_by_name("v^2") == 2);
  CHECK(G.elem_by_name("y") == 3);
  CHECK(G.elem_by_name("x") == 9);
  CHECK(G.elem_by_name("xy") == 9 + 3);
  CHECK(G.name(9) == "x");
  // v = [y,x] with [a,b] = a^-1 b^-1 a b
  const Elem x = 9, y = 3;
  CHECK(G.commutator(y, x) == 1);
  // exponent p: every non-identity element has order 3
  for (Elem g = 1; g < 27; ++g) {
    CHECK(G.pow(g, 3) == G.identity());
    CHECK(G.mul(g, g) != G.identity());
  }
}

TEST_CASE("heisenberg z-class structure") {
  const GroupTable G = GroupTable::heisenberg(3);
  const Elem x = 9, y = 3;
  // K_i numbering: 0 = Z, 1..p = K[x y^{i-1}], p+1 = K[y]
  CHECK(G.z_class_index(0) == 0);
  CHECK(G.z_class_index(1) == 0);
  CHECK(G.z_class_index(x) == 1);
  CHECK(G.z_class_index(G.mul(x, y)) == 2);
  CHECK(G.z_class_index(G.mul(x, G.mul(y, y))) == 3);
  CHECK(G.z_class_index(y) == 4);

  // non-central z-class = hZ union h^2 Z, size 6; commuting iff same class
  for (Elem g = 0; g < 27; ++g) {
    if (G.is_central(g)) {
      CHECK(G.z_class_index(g) == 0);
      continue;
    }
    std::set<Elem> expect;
    for (Elem z : G.center()) {
      expect.insert(G.mul(g, z));
      expect.insert(G.mul(G.mul(g, g), z));
    }
    std::set<Elem> cls;
    for (Elem h = 0; h < 27; ++h)
      if (G.z_equivalent(g, h)) cls.insert(h);
    CHECK(cls == expect);
    for (Elem h = 0; h < 27; ++h) {
      if (G.is_central(h)) continue;
      CHECK(G.commutes(g, h) == G.z_equivalent(g, h));
    }
    // conjugacy class of non-central g is gZ
    std::set<Elem> conj_cls, gz;
    for (Elem h = 0; h < 27; ++h)
      if (G.conjugate(g, h)) conj_cls.insert(h);
    for (Elem z : G.center()) gz.insert(G.mul(g, z));
    CHECK(conj_cls == gz);
  }
  // K_j union Z is a maximal subgroup isomorphic to C3 x C3 (abelian,
  // exponent 3, order 9)
  for (size_t j = 1; j < G.z_classes().size(); ++j) {
    std::vector<Elem> M = G.z_classes()[j];
    M.insert(M.end(), G.center().begin(), G.center().end());
    CHECK(M.size() == 9);
    for (Elem a : M)
      for (Elem b : M) {
        CHECK(G.commutes(a, b));
        CHECK(std::find(M.begin(), M.end(), G.mul(a, b)) != M.end());
      }
  }
}

TEST_CASE("heisenberg 5") {
  const GroupTable G = GroupTable::heisenberg(5);
  CHECK(G.order() == 125);
  CHECK(G.exponent() == 5);
  CHECK(G.center().size() == 5);
  CHECK(G.z_classes().size() == 7);  // p + 2
  CHECK(G.conjugacy_classes().size() == 29);  // p^2 + p - 1
}

TEST_CASE("automorphisms are automorphisms") {
  for (const GroupTable& G :
       {GroupTable::heisenberg(3), GroupTable::abelian_p_group(3, {1, 1}), GroupTable::cyclic(9)}) {
    const auto& auts = G.automorphisms();
    CHECK(!auts.empty());
    for (const auto& a : auts) {
      CHECK(a[G.identity()] == G.identity());
      for (Elem u = 0; u < G.order(); ++u)
        for (Elem v = 0; v < G.order(); ++v) CHECK(a[G.mul(u, v)] == G.mul(a[u], a[v]));
    }
    // pairwise distinct
    std::set<std::vector<Elem>> uniq(auts.begin(), auts.end());
    CHECK(uniq.size() == auts.size());
  }
  CHECK(GroupTable::abelian_p_group(3, {1, 1}).automorphisms().size() == 48);  // |GL(2,3)|
  CHECK(GroupTable::cyclic(9).automorphisms().size() == 6);
}

TEST_CASE("quotient by the center") {
  const GroupTable G = GroupTable::heisenberg(3);
  auto [Q, proj] = G.quotient(G.center());
  CHECK(Q.order() == 9);
  CHECK(Q.is_abelian());
  CHECK(Q.exponent() == 3);  // C3 x C3
  for (Elem a = 0; a < G.order(); ++a)
    for (Elem b = 0; b < G.order(); ++b) CHECK(proj[G.mul(a, b)] == Q.mul(proj[a], proj[b]));
}

TEST_CASE("serialization round-trip") {
  for (const GroupTable& G : {GroupTable::heisenberg(3), GroupTable::cyclic(6),
                              GroupTable::abelian_p_group(2, {1, 1})}) {
    const GroupTable H = GroupTable::deserialize(G.serialize());
    CHECK(H.order() == G.order());
    CHECK(H.description() == G.description());
    for (Elem a = 0; a < G.order(); ++a) {
      CHECK(H.name(a) == G.name(a));
      for (Elem b = 0; b < G.order(); ++b) CHECK(H.mul(a, b) == G.mul(a, b));
    }
  }
}

TEST_CASE("from_table rejects broken tables") {
  // order-3 "table" with a non-associative entry
  std::vector<Elem> t = {0, 1, 2, 1, 2, 0, 2, 0, 0};
  CHECK_THROWS(GroupTable::from_table({"1", "a", "b"}, t));
}

TEST_CASE("generated subgroups and normality") {
  const GroupTable G = GroupTable::heisenberg(3);
  const auto Z = zs::generated_subgroup(G, {1});
  CHECK(Z.size() == 3);
  CHECK(zs::is_normal_subgroup(G, Z));
  const auto M = zs::generated_subgroup(G, {9, 1});  // <x, v>
  CHECK(M.size() == 9);
  CHECK(zs::is_normal_subgroup(G, M));
  const auto all = zs::generated_subgroup(G, {9, 3});  // <x, y>
  CHECK(all.size() == 27);
}
