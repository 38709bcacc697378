#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>
#include <random>

#include "doctest.h"
#include "zs/extractor.hpp"

using zs::Elem;
using zs::GroupTable;
using zs::Sequence;

namespace {

Sequence random_len(const GroupTable& G, int len, std::mt19937_64& rng) {
  Sequence s(G);
  for (int i = 0; i < len; ++i) s.add(static_cast<Elem>(rng() % G.order()));
  return s;
}

}  // namespace

TEST_CASE("zero-sum selection over C3 counts") {
  // exhaustive: every (a,b,c) with a+b+c = 28 and k = 27
  for (int a = 0; a <= 28; ++a)
    for (int b = 0; b <= 28 - a; ++b) {
      const int c = 28 - a - b;
      const auto sel = zs::select_zero_sum_c3({a, b, c}, 27);
      const auto alt = zs::c3_two_alternatives({a, b, c}, 27);
      CHECK((sel.has_value() || alt.has_value()));
      if (sel) {
        const auto& s = *sel;
        CHECK(s[0] + s[1] + s[2] == 27);
        CHECK((s[1] + 2 * s[2]) % 3 == 0);
        CHECK(s[0] <= a);
        CHECK(s[1] <= b);
        CHECK(s[2] <= c);
      }
      if (alt) {
        for (const auto& s : {alt->first, alt->second}) {
          CHECK(s[0] + s[1] + s[2] == 27);
          CHECK(s[0] <= a);
          CHECK(s[1] <= b);
          CHECK(s[2] <= c);
        }
        CHECK(alt->sum_first != alt->sum_second);
        CHECK(alt->sum_first != 0);
        CHECK(alt->sum_second != 0);
        CHECK(alt->sum_first == (alt->first[1] + 2 * alt->first[2]) % 3);
        CHECK(alt->sum_second == (alt->second[1] + 2 * alt->second[2]) % 3);
      }
    }
  CHECK(zs::verify_c3_selection_lemma().ok);
}

TEST_CASE("greedy central-product triple blocks") {
  const GroupTable G = GroupTable::heisenberg(3);
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<Elem> vals(33);
    for (auto& e : vals) e = static_cast<Elem>(rng() % 27);
    std::vector<int> order(33);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const auto blocks = zs::extract_short3_blocks(G, vals, order);
    REQUIRE(blocks.has_value());
    CHECK(blocks->size() == 9);
    std::vector<char> used(33, 0);
    for (const auto& b : *blocks) {
      const Elem p = G.mul(G.mul(vals[b[0]], vals[b[1]]), vals[b[2]]);
      CHECK(G.is_central(p));
      for (int i : b) {
        CHECK(!used[i]);
        used[i] = 1;
      }
    }
  }
}

TEST_CASE("length-7 extraction always yields a verified witness") {
  const GroupTable G = GroupTable::heisenberg(3);
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 3000; ++rep) {
    const Sequence s = random_len(G, 7, rng);
    const auto res = zs::extract_product_one_7(s);
    CHECK(zs::verify_witness(G, s, res.witness));
    CHECK(res.witness.target == G.identity());
    CHECK(!res.witness.terms.empty());
  }
}

TEST_CASE("length-27-from-33 extraction on random input") {
  const GroupTable G = GroupTable::heisenberg(3);
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 2000; ++rep) {
    const Sequence s = random_len(G, 33, rng);
    const auto res = zs::extract_product_one_27(s, rep);
    CHECK(res.witness.terms.size() == 27);
    CHECK(res.witness.target == G.identity());
    CHECK(zs::verify_witness(G, s, res.witness));
    CHECK(res.layer >= 0);
    CHECK(res.layer <= 4);
  }
}

TEST_CASE("length-27 extraction on structured families") {
  const GroupTable G = GroupTable::heisenberg(3);
  std::mt19937_64 rng(4);
  // all terms in at most two z-classes
  for (int rep = 0; rep < 500; ++rep) {
    const auto& k1 = G.z_classes()[1 + rng() % 4];
    const auto& k2 = G.z_classes()[1 + rng() % 4];
    Sequence s(G);
    for (int i = 0; i < 33; ++i) {
      const auto& k = (rng() & 1) ? k1 : k2;
      s.add(k[rng() % k.size()]);
    }
    const auto res = zs::extract_product_one_27(s, rep);
    CHECK(res.witness.terms.size() == 27);
    CHECK(zs::verify_witness(G, s, res.witness));
  }
  // heavy central padding
  for (int rep = 0; rep < 500; ++rep) {
    Sequence s(G);
    const int ncentral = 27 + static_cast<int>(rng() % 7);
    for (int i = 0; i < ncentral; ++i) s.add(G.center()[rng() % 3]);
    for (int i = ncentral; i < 33; ++i) s.add(static_cast<Elem>(rng() % 27));
    const auto res = zs::extract_product_one_27(s, rep);
    CHECK(res.witness.terms.size() == 27);
    CHECK(zs::verify_witness(G, s, res.witness));
  }
  // one conjugacy class only
  for (int rep = 0; rep < 200; ++rep) {
    const auto& cc = G.conjugacy_classes()[rng() % 11];
    Sequence s(G);
    for (int i = 0; i < 33; ++i) s.add(cc[rng() % cc.size()]);
    const auto res = zs::extract_product_one_27(s, rep);
    CHECK(res.witness.terms.size() == 27);
    CHECK(zs::verify_witness(G, s, res.witness));
  }
}

TEST_CASE("extraction input validation") {
  const GroupTable G = GroupTable::heisenberg(3);
  Sequence s(G);
  s.add(G.identity(), 10);
  CHECK_THROWS_AS(zs::extract_product_one_27(s), std::invalid_argument);  // wrong length
  Sequence t(G);
  CHECK_THROWS_AS(zs::extract_product_one_7(t), std::invalid_argument);
}

TEST_CASE("case table validation") {
  const auto rep = zs::validate_theorem31_tables(GroupTable::heisenberg(3));
  CHECK(rep.ok);
  CHECK(rep.cases_checked > 100000);
  CHECK(rep.failures.empty());
}

TEST_CASE("twin combination lemma verifier") {
  const auto rep = zs::verify_twin_combination_lemma(GroupTable::heisenberg(3));
  CHECK(rep.ok);
  CHECK(rep.cases_checked > 100000);
}

TEST_CASE("fuzz campaign smoke and determinism") {
  const GroupTable G = GroupTable::heisenberg(3);
  for (const char* gen : {"uniform", "two-class", "three-central", "one-class", "adversarial"}) {
    const auto st = zs::fuzz_extract27(G, gen, 400, 7, 0);
    CHECK(st.failures.empty());
    CHECK(st.trials == 400);
    std::uint64_t total = 0;
    for (auto h : st.layer_hist) total += h;
    CHECK(total == 400);
  }
  // worker count must not change the structured output
  const auto a = zs::fuzz_extract27(G, "uniform", 600, 99, 1);
  const auto b = zs::fuzz_extract27(G, "uniform", 600, 99, 4);
  CHECK(a.to_records() == b.to_records());
  // but a different master seed must
  const auto c = zs::fuzz_extract27(G, "uniform", 600, 100, 1);
  CHECK(a.to_records() != c.to_records());
}
