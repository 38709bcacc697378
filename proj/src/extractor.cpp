#include "zs/extractor.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

namespace zs {

std::optional<std::array<int, 3>> select_zero_sum_c3(const std::array<int, 3>& counts, int k) {
  for (int a = std::min(counts[0], k); a >= 0; --a)
    for (int b = std::min(counts[1], k - a); b >= 0; --b) {
      const int c = k - a - b;
      if (c < 0 || c > counts[2]) continue;
      if ((b + 2 * c) % 3 == 0) return std::array<int, 3>{a, b, c};
    }
  return std::nullopt;
}

std::optional<C3Alternatives> c3_two_alternatives(const std::array<int, 3>& counts, int k) {
  std::array<std::optional<std::array<int, 3>>, 3> by_sum;
  for (int a = std::min(counts[0], k); a >= 0; --a)
    for (int b = std::min(counts[1], k - a); b >= 0; --b) {
      const int c = k - a - b;
      if (c < 0 || c > counts[2]) continue;
      const int s = (b + 2 * c) % 3;
      if (!by_sum[s]) by_sum[s] = std::array<int, 3>{a, b, c};
    }
  if (!by_sum[1] || !by_sum[2]) return std::nullopt;
  C3Alternatives alt;
  alt.first = *by_sum[1];
  alt.sum_first = 1;
  alt.second = *by_sum[2];
  alt.sum_second = 2;
  return alt;
}

std::optional<std::vector<std::array<int, 3>>> extract_short3_blocks(
    const GroupTable& G, const std::vector<Elem>& vals, const std::vector<int>& order) {
  std::vector<std::array<int, 3>> blocks;
  std::vector<int> remaining = order;
  for (int round = 0; round < 9; ++round) {
    const int window = std::min<int>(9, static_cast<int>(remaining.size()));
    if (window < 3) return std::nullopt;
    bool found = false;
    for (int a = 0; a < window && !found; ++a)
      for (int b = a + 1; b < window && !found; ++b)
        for (int c = b + 1; c < window && !found; ++c) {
          const Elem p =
              G.mul(G.mul(vals[remaining[a]], vals[remaining[b]]), vals[remaining[c]]);
          if (!G.is_central(p)) continue;
          blocks.push_back({remaining[a], remaining[b], remaining[c]});
          // erase back-to-front to keep indices valid
          remaining.erase(remaining.begin() + c);
          remaining.erase(remaining.begin() + b);
          remaining.erase(remaining.begin() + a);
          found = true;
        }
    if (!found) return std::nullopt;
  }
  return blocks;
}

namespace {

// exponent e with v^e = g for central g
int central_exp(const GroupTable& G, Elem g) {
  const Elem v = G.elem_by_name("v");
  for (int e = 0; e < 3; ++e)
    if (G.pow(v, e) == g) return e;
  throw std::logic_error("central_exp: non-central argument");
}

// per-target orderings of a 3-instance block achieving v^e, if any
std::array<std::optional<std::array<int, 3>>, 3> block_orderings(
    const GroupTable& G, const std::vector<Elem>& vals, const std::array<int, 3>& blk) {
  std::array<std::optional<std::array<int, 3>>, 3> out;
  std::array<int, 3> perm = blk;
  std::sort(perm.begin(), perm.end());
  do {
    const Elem p = G.mul(G.mul(vals[perm[0]], vals[perm[1]]), vals[perm[2]]);
    const int e = central_exp(G, p);
    if (!out[e]) out[e] = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

struct Partition {
  std::vector<std::array<int, 3>> blocks;
  std::vector<int> residual;
};

std::optional<Partition> make_partition(const GroupTable& G, const std::vector<Elem>& vals,
                                        const std::vector<int>& order) {
  auto blocks = extract_short3_blocks(G, vals, order);
  if (!blocks) return std::nullopt;
  Partition part;
  part.blocks = std::move(*blocks);
  std::vector<char> used(vals.size(), 0);
  for (const auto& b : part.blocks)
    for (int i : b) used[i] = 1;
  for (int i : order)
    if (!used[i]) part.residual.push_back(i);
  return part;
}

// DP over block target exponents: an instance order of all 27 block
// terms with total product one, or nullopt.
std::optional<std::vector<int>> solve_block_dp(const GroupTable& G, const std::vector<Elem>& vals,
                                               const std::vector<std::array<int, 3>>& blocks) {
  const int n = static_cast<int>(blocks.size());
  std::vector<std::array<std::optional<std::array<int, 3>>, 3>> achievable(n);
  for (int i = 0; i < n; ++i) achievable[i] = block_orderings(G, vals, blocks[i]);
  // reach[i][s]: sum s attainable with blocks 0..i-1; parent = chosen exp
  std::vector<std::array<int, 3>> parent(n, {-1, -1, -1});
  std::array<char, 3> reach{1, 0, 0};
  for (int i = 0; i < n; ++i) {
    std::array<char, 3> next{0, 0, 0};
    for (int s = 0; s < 3; ++s) {
      if (!reach[s]) continue;
      for (int e = 0; e < 3; ++e) {
        if (!achievable[i][e]) continue;
        const int t = (s + e) % 3;
        if (!next[t]) {
          next[t] = 1;
          parent[i][t] = e;
        }
      }
    }
    reach = next;
  }
  if (!reach[0]) return std::nullopt;
  std::vector<int> exps(n);
  int s = 0;
  for (int i = n - 1; i >= 0; --i) {
    const int e = parent[i][s];
    exps[i] = e;
    s = (s - e + 3) % 3;
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    const auto& ord = achievable[i][exps[i]];
    out.insert(out.end(), ord->begin(), ord->end());
  }
  return out;
}

// EGZ escalation: fuse two non-central blocks into a retargetable
// 6-term unit; the other blocks take any achievable value.
std::optional<std::vector<int>> solve_egz_escalation(const GroupTable& G,
                                                     const std::vector<Elem>& vals,
                                                     const std::vector<std::array<int, 3>>& blocks) {
  const int n = static_cast<int>(blocks.size());
  const Elem v = G.elem_by_name("v");
  auto block_class = [&](const std::array<int, 3>& b) {
    return classify_short3(G, {vals[b[0]], vals[b[1]], vals[b[2]]});
  };
  for (int i = 0; i < n; ++i) {
    if (block_class(blocks[i]) == Short3Class::Central) continue;
    for (int j = i + 1; j < n; ++j) {
      if (block_class(blocks[j]) == Short3Class::Central) continue;
      auto cert = combine_twin_short3(G, {vals[blocks[i][0]], vals[blocks[i][1]], vals[blocks[i][2]]},
                                      {vals[blocks[j][0]], vals[blocks[j][1]], vals[blocks[j][2]]});
      if (!cert) continue;
      // remaining blocks contribute their first achievable exponent
      std::vector<int> order;
      int sum = 0;
      bool ok = true;
      for (int b = 0; b < n && ok; ++b) {
        if (b == i || b == j) continue;
        const auto ach = block_orderings(G, vals, blocks[b]);
        ok = false;
        for (int e = 0; e < 3; ++e)
          if (ach[e]) {
            order.insert(order.end(), ach[e]->begin(), ach[e]->end());
            sum = (sum + e) % 3;
            ok = true;
            break;
          }
      }
      if (!ok) continue;
      const Elem target = G.pow(v, (3 - sum) % 3);
      auto w = egz_reorder_to_central(*cert, target);
      if (!w) continue;
      // map the certificate's ordered values back to instance indices
      std::vector<int> avail;
      for (int q : blocks[i]) avail.push_back(q);
      for (int q : blocks[j]) avail.push_back(q);
      for (const auto& [g, occ] : w->terms) {
        auto it = std::find_if(avail.begin(), avail.end(),
                               [&](int q) { return vals[q] == g; });
        if (it == avail.end()) return std::nullopt;
        order.push_back(*it);
        avail.erase(it);
      }
      return order;
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::vector<int>, int>> attempt_partition(
    const GroupTable& G, const std::vector<Elem>& vals, const Partition& part) {
  if (auto order = solve_block_dp(G, vals, part.blocks)) return std::pair{*order, 1};
  // local repair: rebuild one block (then pairs) from its terms plus the
  // residual pool and retry the DP
  auto central_triples = [&](const std::vector<int>& pool) {
    std::vector<std::array<int, 3>> out;
    for (size_t a = 0; a < pool.size(); ++a)
      for (size_t b = a + 1; b < pool.size(); ++b)
        for (size_t c = b + 1; c < pool.size(); ++c)
          if (G.is_central(G.mul(G.mul(vals[pool[a]], vals[pool[b]]), vals[pool[c]])))
            out.push_back({pool[a], pool[b], pool[c]});
    return out;
  };
  const int n = static_cast<int>(part.blocks.size());
  for (int i = 0; i < n; ++i) {
    std::vector<int> pool(part.residual);
    for (int q : part.blocks[i]) pool.push_back(q);
    for (const auto& t : central_triples(pool)) {
      auto blocks = part.blocks;
      blocks[i] = t;
      if (auto order = solve_block_dp(G, vals, blocks)) return std::pair{*order, 2};
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> pool(part.residual);
      for (int q : part.blocks[i]) pool.push_back(q);
      for (int q : part.blocks[j]) pool.push_back(q);
      for (const auto& t1 : central_triples(pool)) {
        std::vector<int> rest;
        for (int q : pool)
          if (q != t1[0] && q != t1[1] && q != t1[2]) rest.push_back(q);
        for (const auto& t2 : central_triples(rest)) {
          auto blocks = part.blocks;
          blocks[i] = t1;
          blocks[j] = t2;
          if (auto order = solve_block_dp(G, vals, blocks)) return std::pair{*order, 2};
        }
      }
    }
  if (auto order = solve_egz_escalation(G, vals, part.blocks)) return std::pair{*order, 3};
  return std::nullopt;
}

Witness witness_from_positions(const GroupTable& G, const Sequence& S,
                               const std::vector<Elem>& vals, const std::vector<int>& order) {
  // terms() is sorted, so the occurrence index of instance q is q minus
  // the first position holding the same value
  Witness w;
  w.target = G.identity();
  for (int q : order) {
    int first = q;
    while (first > 0 && vals[first - 1] == vals[q]) --first;
    w.terms.emplace_back(vals[q], q - first);
  }
  if (!verify_witness(G, S, w))
    throw std::logic_error("extractor: constructed witness fails verification");
  return w;
}

// layer-0 concentration strategies; nullopt when not applicable
std::optional<std::vector<int>> solve_concentrated(const GroupTable& G,
                                                   const std::vector<Elem>& vals,
                                                   std::uint64_t budget) {
  std::array<int, 3> central_counts{0, 0, 0};
  int central = 0;
  for (Elem g : vals)
    if (G.is_central(g)) {
      ++central;
      ++central_counts[central_exp(G, g)];
    }
  if (central >= 29) {
    if (auto sel = select_zero_sum_c3(central_counts, 27)) {
      std::vector<int> order;
      std::array<int, 3> need = *sel;
      for (size_t q = 0; q < vals.size(); ++q) {
        if (!G.is_central(vals[q])) continue;
        const int e = central_exp(G, vals[q]);
        if (need[e] > 0) {
          --need[e];
          order.push_back(static_cast<int>(q));
        }
      }
      return order;
    }
  }
  for (int j = 1; j <= 4; ++j) {
    std::vector<int> inM;
    for (size_t q = 0; q < vals.size(); ++q)
      if (G.is_central(vals[q]) || G.z_class_index(vals[q]) == j)
        inM.push_back(static_cast<int>(q));
    if (static_cast<int>(inM.size()) < 31) continue;
    std::vector<int> order;
    std::vector<int> remaining = inM;
    for (int round = 0; round < 3; ++round) {
      Sequence ms(G);
      for (int q : remaining) ms.add(vals[q]);
      auto w = product_one_witness_of_length(ms, 9, budget);
      if (!w) return std::nullopt;
      for (const auto& [g, occ] : w->terms) {
        auto it = std::find_if(remaining.begin(), remaining.end(),
                               [&](int q) { return vals[q] == g; });
        order.push_back(*it);
        remaining.erase(it);
      }
    }
    return order;
  }
  return std::nullopt;
}

}  // namespace

ExtractResult extract_product_one_7(const Sequence& S, std::uint64_t budget) {
  const GroupTable& G = S.group();
  if (!G.is_heisenberg() || G.heisenberg_p() != 3 || S.length() != 7)
    throw std::invalid_argument("extract_product_one_7: length-7 sequence over H_27 required");
  auto prof = zclass_profile(S);
  std::vector<int> nc(prof.begin() + 1, prof.end());
  std::sort(nc.rbegin(), nc.rend());
  std::ostringstream trace;
  trace << "profile central=" << prof[0] << " partition=(" << nc[0] << "," << nc[1] << ","
        << nc[2] << "," << nc[3] << ")";
  auto w = product_one_witness(S, budget);
  if (!w)
    throw ExtractionFailed("no product-one subsequence in length-7 input", S.format(), 0);
  return ExtractResult{*w, 0, trace.str()};
}

ExtractResult extract_product_one_27(const Sequence& S, std::uint64_t seed,
                                     std::uint64_t budget) {
  const GroupTable& G = S.group();
  if (!G.is_heisenberg() || G.heisenberg_p() != 3 || S.length() != 33)
    throw std::invalid_argument("extract_product_one_27: length-33 sequence over H_27 required");
  const std::vector<Elem> vals = S.terms();

  auto finish = [&](const std::vector<int>& order, int layer,
                    const std::string& trace) -> ExtractResult {
    if (order.size() != 27)
      throw std::logic_error("extractor: order does not cover 27 instances");
    return ExtractResult{witness_from_positions(G, S, vals, order), layer, trace};
  };

  if (auto order = solve_concentrated(G, vals, budget))
    return finish(*order, 0, "concentrated input (central or maximal subgroup)");

  std::vector<int> identity_order(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) identity_order[i] = static_cast<int>(i);
  if (auto part = make_partition(G, vals, identity_order))
    if (auto hit = attempt_partition(G, vals, *part))
      return finish(hit->first, hit->second,
                    hit->second == 1   ? "block partition + sum DP"
                    : hit->second == 2 ? "block partition + local repair"
                                       : "block partition + EGZ escalation");

  constexpr int kRestartLimit = 64;
  std::vector<int> order = identity_order;
  for (int r = 1; r <= kRestartLimit; ++r) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r));
    std::shuffle(order.begin(), order.end(), rng);
    if (auto part = make_partition(G, vals, order))
      if (auto hit = attempt_partition(G, vals, *part))
        return finish(hit->first, 4, "randomized restart " + std::to_string(r));
  }
  throw ExtractionFailed("all extraction layers exhausted", S.format(), seed);
}

namespace {

struct IARow {
  int u2, u3, w5, w6;  // exponents of v; -2 = any
  int comm;            // required exponent of [g4,g1], -1 = none
  std::array<int, 4> seq;  // indices 1..6
};

const IARow kIARows[] = {
    {1, 1, 0, 1, -1, {2, 3, 4, 6}}, {1, 1, 0, 2, -1, {1, 3, 4, 6}},
    {1, 1, 1, 1, -1, {1, 3, 5, 6}}, {1, 1, 2, 2, -1, {2, 3, 5, 6}},
    {2, 2, 0, 1, -1, {1, 3, 4, 6}}, {2, 2, 0, 2, -1, {2, 3, 4, 6}},
    {2, 2, 1, 1, -1, {1, 3, 4, 6}}, {2, 2, 2, 2, -1, {1, 3, 5, 6}},
    {0, 1, 0, 2, -1, {1, 3, 4, 6}}, {0, 1, 0, 1, 2, {1, 4, 3, 6}},
    {0, 1, 0, 1, 1, {4, 1, 6, 3}},  {0, 2, 0, 1, -1, {1, 3, 4, 6}},
    {0, 2, 0, 2, 2, {4, 1, 6, 3}},  {0, 2, 0, 2, 1, {1, 4, 3, 6}},
};

// position of instance i inside the sorted expansion of its multiset
std::vector<int> instance_sorted_positions(const std::vector<Elem>& values) {
  std::vector<int> pos(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    int p = 0;
    for (size_t j = 0; j < values.size(); ++j) {
      if (values[j] < values[i]) ++p;
      if (j < i && values[j] == values[i]) ++p;
    }
    pos[i] = p;
  }
  return pos;
}

// checks that `claim` (values in listed order) is an EGZ sequence with
// the given principal part (positions into `claim`)
bool check_egz_claim(const GroupTable& G, const std::vector<Elem>& claim,
                     const std::vector<int>& principal) {
  Sequence s(G);
  for (Elem g : claim) s.add(g);
  const auto ipos = instance_sorted_positions(claim);
  std::vector<int> mapped;
  for (int q : principal) mapped.push_back(ipos[q]);
  return make_certificate(s, mapped).has_value();
}

}  // namespace

VerifyReport validate_theorem31_tables(const GroupTable& G) {
  VerifyReport rep;
  rep.name = "length7-case-tables-H27";
  if (!G.is_heisenberg() || G.heisenberg_p() != 3)
    throw std::invalid_argument("validate_theorem31_tables: H_27 required");
  const Elem v = G.elem_by_name("v");
  auto vp = [&](int e) { return G.pow(v, ((e % 3) + 3) % 3); };
  std::vector<Elem> noncentral;
  for (Elem g = 0; g < G.order(); ++g)
    if (!G.is_central(g)) noncentral.push_back(g);

  const std::array<std::pair<int, int>, 4> upairs{{{1, 1}, {2, 2}, {0, 1}, {0, 2}}};

  // (3,3,1,0) table: two triples g1,g2,g3 and g4,g5,g6 in distinct
  // z-classes, one interleaving with product one per row
  for (Elem g1 : noncentral)
    for (Elem g4 : noncentral) {
      if (G.z_equivalent(g1, g4)) continue;
      const int comm = central_exp(G, G.commutator(g4, g1));
      for (auto [u2, u3] : upairs)
        for (auto [w5, w6] : upairs) {
          Elem el[7] = {};
          bool swapped = (u2 == 0) && (w5 != 0);
          int ru2 = u2, ru3 = u3, rw5 = w5, rw6 = w6, rcomm = comm;
          Elem rg1 = g1, rg4 = g4;
          if (swapped) {
            // the mirrored configuration: swap the two triples' roles
            std::swap(ru2, rw5);
            std::swap(ru3, rw6);
            std::swap(rg1, rg4);
            rcomm = central_exp(G, G.commutator(rg4, rg1));
          }
          el[1] = rg1;
          el[2] = G.mul(rg1, vp(ru2));
          el[3] = G.mul(G.pow(rg1, 2), vp(ru3));
          el[4] = rg4;
          el[5] = G.mul(rg4, vp(rw5));
          el[6] = G.mul(G.pow(rg4, 2), vp(rw6));
          bool matched = false;
          for (const auto& row : kIARows) {
            if (row.u2 != ru2 || row.u3 != ru3 || row.w5 != rw5 || row.w6 != rw6) continue;
            if (row.comm >= 0 && row.comm != rcomm) continue;
            matched = true;
            Elem prod = G.identity();
            for (int idx : row.seq) prod = G.mul(prod, el[idx]);
            ++rep.cases_checked;
            if (prod != G.identity()) {
              rep.ok = false;
              if (rep.failures.size() < 20)
                rep.failures.push_back("(3,3,1,0) row fails: u=(" + std::to_string(u2) + "," +
                                       std::to_string(u3) + ") w=(" + std::to_string(w5) + "," +
                                       std::to_string(w6) + ") g1=" + G.name(g1) +
                                       " g4=" + G.name(g4));
            }
            break;
          }
          if (!matched) {
            rep.ok = false;
            if (rep.failures.size() < 20)
              rep.failures.push_back("(3,3,1,0) no row matches u=(" + std::to_string(u2) + "," +
                                     std::to_string(u3) + ") w=(" + std::to_string(w5) + "," +
                                     std::to_string(w6) + ")");
          }
        }
    }

  // (3,2,2,0) condition table: triple g1,g2,g3; pair g6,g7 with central
  // product in a different class
  for (Elem g1 : noncentral)
    for (Elem g6 : noncentral) {
      if (G.z_equivalent(g1, g6)) continue;
      const int comm61 = central_exp(G, G.commutator(g6, g1));
      for (int u2 = 0; u2 < 3; ++u2)
        for (int u3 = 1; u3 < 3; ++u3)
          for (int v7 = 1; v7 < 3; ++v7) {
            const Elem e1 = g1;
            const Elem e2 = G.mul(g1, vp(u2));
            const Elem e3 = G.mul(G.pow(g1, 2), vp(u3));
            const Elem e6 = g6;
            const Elem e7 = G.mul(G.pow(g6, 2), vp(v7));
            Elem prod = -1;
            if (u3 != v7) {
              prod = ordered_product(G, {e1, e3, e6, e7});
            } else if (u2 == v7) {
              prod = ordered_product(G, {e2, e3, e6, e7});
            } else if (u2 == (2 * v7) % 3) {
              prod = ordered_product(G, {e2, e3});
            } else if (comm61 == u3) {
              prod = ordered_product(G, {e3, e6, e1, e7});
            } else {
              prod = ordered_product(G, {e1, e6, e3, e7});
            }
            ++rep.cases_checked;
            if (prod != G.identity()) {
              rep.ok = false;
              if (rep.failures.size() < 20)
                rep.failures.push_back("(3,2,2,0) row fails: u=(" + std::to_string(u2) + "," +
                                       std::to_string(u3) + ") v7=" + std::to_string(v7) +
                                       " g1=" + G.name(g1) + " g6=" + G.name(g6));
            }
          }
    }

  // (3,2,2,0), both pair products non-central: the composite-term and
  // certificate claims
  for (Elem g1 : noncentral)
    for (Elem g4 : noncentral) {
      if (G.z_equivalent(g1, g4)) continue;
      for (Elem g6 : noncentral) {
        if (G.z_equivalent(g6, g1) || G.z_equivalent(g6, g4)) continue;
        for (int u2s = 0; u2s < 4; ++u2s)
          for (int w5 = 0; w5 < 3; ++w5)
            for (int v7 = 0; v7 < 3; ++v7) {
              static const int kUP[4][2] = {{0, 1}, {1, 1}, {0, 2}, {2, 2}};
              const int u2 = kUP[u2s][0], u3 = kUP[u2s][1];
              const Elem e1 = g1, e2 = G.mul(g1, vp(u2)), e3 = G.mul(G.pow(g1, 2), vp(u3));
              const Elem e4 = g4, e5 = G.mul(g4, vp(w5));
              const Elem e6 = g6, e7 = G.mul(g6, vp(v7));
              const Elem g46 = G.mul(e4, e6);
              ++rep.cases_checked;
              bool ok;
              if (!G.is_central(g46) && G.z_equivalent(g46, g1)) {
                // five terms in one maximal subgroup must close
                Sequence s(G);
                s.add(e1);
                s.add(e2);
                s.add(e3);
                s.add(g46);
                s.add(G.mul(e5, e7));
                ok = G.z_equivalent(G.mul(e5, e7), g1) && has_product_one_subsequence(s);
              } else {
                const Elem g446 = G.mul(G.pow(e4, 2), e6);
                ok = !G.is_central(g46) && !G.z_equivalent(g46, e4) &&
                     !G.z_equivalent(g46, g6) && G.z_equivalent(g446, g1);
                if (ok) {
                  if (G.conjugate(g446, e1))
                    ok = check_egz_claim(G, {e1, e2, e4, e5, e6}, {0, 1, 2});
                  else
                    ok = check_egz_claim(G, {e1, e2, e4, e5, e6, e3}, {0, 1, 2});
                }
              }
              if (!ok) {
                rep.ok = false;
                if (rep.failures.size() < 20)
                  rep.failures.push_back("(3,2,2,0) non-central pairs claim fails: g1=" +
                                         G.name(g1) + " g4=" + G.name(g4) + " g6=" + G.name(g6) +
                                         " u=(" + std::to_string(u2) + "," + std::to_string(u3) +
                                         ") w5=" + std::to_string(w5) +
                                         " v7=" + std::to_string(v7));
              }
            }
      }
    }

  // (3,2,1,1): certificate claims driven by where g6*g7 lands
  for (Elem g1 : noncentral)
    for (Elem g4 : noncentral) {
      if (G.z_equivalent(g1, g4)) continue;
      for (Elem g6 : noncentral) {
        if (G.z_equivalent(g6, g1) || G.z_equivalent(g6, g4)) continue;
        for (Elem g7 : noncentral) {
          if (G.z_equivalent(g7, g1) || G.z_equivalent(g7, g4) || G.z_equivalent(g7, g6))
            continue;
          const Elem g67 = G.mul(g6, g7);
          for (int u2s = 0; u2s < 4; ++u2s)
            for (int w5 = 0; w5 < 3; ++w5) {
              static const int kUP[4][2] = {{0, 1}, {1, 1}, {0, 2}, {2, 2}};
              const int u2 = kUP[u2s][0], u3 = kUP[u2s][1];
              const Elem e1 = g1, e2 = G.mul(g1, vp(u2)), e3 = G.mul(G.pow(g1, 2), vp(u3));
              const Elem e4 = g4, e5 = G.mul(g4, vp(w5));
              ++rep.cases_checked;
              bool ok = !G.is_central(g67) &&
                        (G.z_equivalent(g67, g1) || G.z_equivalent(g67, g4));
              if (ok && G.z_equivalent(g67, g4)) {
                if (G.is_central(G.mul(e4, g67)))
                  ok = check_egz_claim(G, {g6, g7, e1, e3, e4}, {0, 1, 2});
                else if (G.is_central(G.mul(e5, g67)))
                  ok = check_egz_claim(G, {g6, g7, e1, e3, e5}, {0, 1, 2});
                else
                  ok = G.conjugate(e4, e5) && G.conjugate(e4, g67) &&
                       G.is_central(G.mul(G.mul(e4, e5), g67)) &&
                       check_egz_claim(G, {e4, e5, e1, e3, g6, g7}, {0, 1, 2});
              } else if (ok) {
                if (G.is_central(G.mul(G.inv(e1), g67)))  // g67 = g1 * central
                  ok = check_egz_claim(G, {e1, e2, g6, g7}, {0, 1, 2});
                else
                  ok = G.is_central(G.mul(G.inv(G.pow(e1, 2)), g67)) &&
                       check_egz_claim(G, {e1, e2, g6, g7, e3}, {0, 1, 2});
              }
              if (!ok) {
                rep.ok = false;
                if (rep.failures.size() < 20)
                  rep.failures.push_back(
                      "(3,2,1,1) claim fails: g1=" + G.name(g1) + " g4=" + G.name(g4) +
                      " g6=" + G.name(g6) + " g7=" + G.name(g7) + " u=(" + std::to_string(u2) +
                      "," + std::to_string(u3) + ") w5=" + std::to_string(w5));
              }
            }
        }
      }
    }

  rep.notes.push_back("all case-table products and certificates check numerically");
  return rep;
}

VerifyReport verify_c3_selection_lemma() {
  VerifyReport rep;
  rep.name = "c3-selection-lemma";
  // length 28: a zero-sum 27-selection, or two with distinct sums
  for (int a = 0; a <= 28; ++a)
    for (int b = 0; b <= 28 - a; ++b) {
      const int c = 28 - a - b;
      const std::array<int, 3> counts{a, b, c};
      ++rep.cases_checked;
      if (auto sel = select_zero_sum_c3(counts, 27)) {
        const auto& s = *sel;
        if (s[0] + s[1] + s[2] != 27 || (s[1] + 2 * s[2]) % 3 != 0 || s[0] > a || s[1] > b ||
            s[2] > c) {
          rep.ok = false;
          rep.failures.push_back("bad zero-sum selection for counts " + std::to_string(a) + "," +
                                 std::to_string(b) + "," + std::to_string(c));
        }
      } else if (auto alt = c3_two_alternatives(counts, 27)) {
        if (alt->sum_first == alt->sum_second || alt->sum_first == 0 || alt->sum_second == 0) {
          rep.ok = false;
          rep.failures.push_back("bad alternatives for counts " + std::to_string(a) + "," +
                                 std::to_string(b) + "," + std::to_string(c));
        }
      } else {
        rep.ok = false;
        rep.failures.push_back("no selection for counts " + std::to_string(a) + "," +
                               std::to_string(b) + "," + std::to_string(c));
      }
    }
  // length 27 with non-trivial sum: eight constant triples plus a
  // residual of three terms that is not constant
  for (int a = 0; a <= 27; ++a)
    for (int b = 0; b <= 27 - a; ++b) {
      const int c = 27 - a - b;
      ++rep.cases_checked;
      if ((b + 2 * c) % 3 == 0) continue;  // product-one case
      bool found = false;
      for (int ra = 0; ra <= std::min(a, 3) && !found; ++ra)
        for (int rb = 0; rb <= std::min(b, 3 - ra) && !found; ++rb) {
          const int rc = 3 - ra - rb;
          if (rc < 0 || rc > c) continue;
          if (ra == 3 || rb == 3 || rc == 3) continue;  // constant residual
          if ((a - ra) % 3 == 0 && (b - rb) % 3 == 0 && (c - rc) % 3 == 0) found = true;
        }
      if (!found) {
        rep.ok = false;
        rep.failures.push_back("no decomposition for counts " + std::to_string(a) + "," +
                               std::to_string(b) + "," + std::to_string(c));
      }
    }
  rep.notes.push_back("all C_3 count vectors of lengths 28 and 27 checked");
  return rep;
}

VerifyReport verify_twin_combination_lemma(const GroupTable& G) {
  VerifyReport rep;
  rep.name = "twin-short3-combination-H27";
  if (!G.is_heisenberg() || G.heisenberg_p() != 3)
    throw std::invalid_argument("verify_twin_combination_lemma: H_27 required");
  std::vector<std::array<Elem, 3>> triples;  // all non-central-type short 3-sequences
  for (Elem x1 = 0; x1 < G.order(); ++x1)
    for (Elem x2 = x1; x2 < G.order(); ++x2)
      for (Elem x3 = x2; x3 < G.order(); ++x3) {
        if (!G.is_central(G.mul(G.mul(x1, x2), x3))) continue;
        if (classify_short3(G, {x1, x2, x3}) != Short3Class::Central)
          triples.push_back({x1, x2, x3});
      }
  std::uint64_t hyp_a = 0, hyp_b = 0;
  for (const auto& u1 : triples)
    for (const auto& u2 : triples) {
      std::vector<int> classes;  // distinct non-central z-classes present
      for (Elem g : u1)
        if (!G.is_central(g)) classes.push_back(G.z_class_of(g));
      for (Elem g : u2)
        if (!G.is_central(g)) classes.push_back(G.z_class_of(g));
      std::sort(classes.begin(), classes.end());
      classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
      const bool thick = classify_short3(G, u1) != Short3Class::Thin ||
                         classify_short3(G, u2) != Short3Class::Thin;
      const bool part_a = classes.size() >= 4;
      const bool part_b = classes.size() >= 2 && thick;
      if (!part_a && !part_b) continue;
      part_a ? ++hyp_a : ++hyp_b;
      ++rep.cases_checked;
      auto cert = combine_twin_short3(G, u1, u2);
      if (!cert) {
        rep.ok = false;
        if (rep.failures.size() < 20) {
          std::string msg = "no certificate for";
          for (Elem g : u1) msg += " " + G.name(g);
          msg += " |";
          for (Elem g : u2) msg += " " + G.name(g);
          rep.failures.push_back(msg);
        }
      }
    }
  rep.notes.push_back("four-class pairs " + std::to_string(hyp_a) + ", two-class thick pairs " +
                      std::to_string(hyp_b));
  // part (c): four non-central terms with central pair products close
  // with any central u under some ordering
  std::uint64_t part_c = 0;
  bool c_ok = true;
  for (Elem g1 = 0; g1 < G.order() && c_ok; ++g1) {
    if (G.is_central(g1)) continue;
    for (Elem z1 : G.center())
      for (Elem g3 = 0; g3 < G.order(); ++g3) {
        if (G.is_central(g3) || G.z_equivalent(g1, g3)) continue;
        const Elem g2 = G.mul(G.inv(g1), z1);
        for (Elem z2 : G.center())
          for (Elem u : G.center()) {
            const Elem g4 = G.mul(G.inv(g3), z2);
            ++part_c;
            ++rep.cases_checked;
            if (!four_term_center_fix(G, g1, g2, g3, g4, u)) {
              rep.ok = false;
              c_ok = false;
              rep.failures.push_back("no four-term ordering: " + G.name(g1) + " " + G.name(g2) +
                                     " " + G.name(g3) + " " + G.name(g4) + " u=" + G.name(u));
            }
          }
      }
  }
  rep.notes.push_back("four-term closures " + std::to_string(part_c));
  return rep;
}

namespace {

std::vector<Elem> fuzz_input(const GroupTable& G, const std::string& generator,
                             std::uint64_t trial, std::uint64_t master_seed) {
  std::mt19937_64 rng(master_seed + 0x9e3779b97f4a7c15ULL * (trial + 1));
  std::uniform_int_distribution<int> uni(0, G.order() - 1);
  std::vector<Elem> out(33);
  std::string gen = generator;
  if (gen == "adversarial") {
    static const char* kCycle[3] = {"two-class", "three-central", "one-class"};
    gen = kCycle[trial % 3];
  }
  if (gen == "uniform") {
    for (auto& g : out) g = uni(rng);
  } else if (gen == "two-class") {
    const int j1 = 1 + static_cast<int>(rng() % 4);
    int j2 = 1 + static_cast<int>(rng() % 4);
    if (j2 == j1) j2 = 1 + (j2 % 4);
    const bool with_center = rng() & 1;
    std::vector<Elem> pool;
    for (Elem g = 0; g < G.order(); ++g) {
      if (G.is_central(g)) {
        if (with_center) pool.push_back(g);
      } else if (G.z_class_index(g) == j1 || G.z_class_index(g) == j2) {
        pool.push_back(g);
      }
    }
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
    for (auto& g : out) g = pool[pick(rng)];
  } else if (gen == "three-central") {
    std::vector<Elem> nc;
    for (Elem g = 0; g < G.order(); ++g)
      if (!G.is_central(g)) nc.push_back(g);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(nc.size()) - 1);
    const auto& z = G.center();
    std::uniform_int_distribution<int> zc(0, static_cast<int>(z.size()) - 1);
    for (int i = 0; i < 33; ++i) out[i] = (i < 3) ? z[zc(rng)] : nc[pick(rng)];
    std::shuffle(out.begin(), out.end(), rng);
  } else if (gen == "one-class") {
    const auto& classes = G.conjugacy_classes();
    std::vector<int> big;
    for (size_t c = 0; c < classes.size(); ++c)
      if (classes[c].size() > 1) big.push_back(static_cast<int>(c));
    const auto& cls = classes[big[rng() % big.size()]];
    std::uniform_int_distribution<int> pick(0, static_cast<int>(cls.size()) - 1);
    for (auto& g : out) g = cls[pick(rng)];
  } else {
    throw std::invalid_argument("fuzz_extract27: unknown generator '" + generator + "'");
  }
  return out;
}

}  // namespace

std::string FuzzStats::to_records() const {
  std::ostringstream out;
  out << "zsreport 1\n";
  out << "kind fuzz\n";
  out << "generator " << generator << "\n";
  out << "trials " << trials << "\n";
  out << "seed " << master_seed << "\n";
  for (int l = 0; l < 5; ++l) out << "layer " << l << " " << layer_hist[l] << "\n";
  out << "failures " << failures.size() << "\n";
  for (const auto& f : failures) out << "failure " << f << "\n";
  out << "end\n";
  return out.str();
}

FuzzStats fuzz_extract27(const GroupTable& G, const std::string& generator,
                         std::uint64_t trials, std::uint64_t master_seed, int workers) {
  FuzzStats stats;
  stats.generator = generator;
  stats.trials = trials;
  stats.master_seed = master_seed;
  const int nw = resolve_workers(workers);
  std::vector<double> ms(trials, 0.0);
  std::vector<std::array<std::uint64_t, 5>> hist(nw, std::array<std::uint64_t, 5>{});
  std::vector<std::vector<std::pair<std::uint64_t, std::string>>> fails(nw);
#pragma omp parallel for schedule(dynamic, 16) num_threads(nw)
  for (std::uint64_t t = 0; t < trials; ++t) {
    const int tid = omp_get_thread_num();
    const auto vals = fuzz_input(G, generator, t, master_seed);
    Sequence s(G);
    for (Elem g : vals) s.add(g);
    const auto start = std::chrono::steady_clock::now();
    try {
      const std::uint64_t trial_seed = master_seed + 0x9e3779b97f4a7c15ULL * (t + 1);
      auto res = extract_product_one_27(s, trial_seed);
      hist[tid][res.layer] += 1;
    } catch (const std::exception& e) {
      fails[tid].emplace_back(t, "trial " + std::to_string(t) + ": " + e.what());
    }
    const auto stop = std::chrono::steady_clock::now();
    ms[t] = std::chrono::duration<double, std::milli>(stop - start).count();
  }
  std::vector<std::pair<std::uint64_t, std::string>> all_fails;
  for (int w = 0; w < nw; ++w) {
    for (int l = 0; l < 5; ++l) stats.layer_hist[l] += hist[w][l];
    all_fails.insert(all_fails.end(), fails[w].begin(), fails[w].end());
  }
  std::sort(all_fails.begin(), all_fails.end());
  for (auto& [t, msg] : all_fails) stats.failures.push_back(std::move(msg));
  if (!ms.empty()) {
    std::sort(ms.begin(), ms.end());
    stats.median_ms = ms[ms.size() / 2];
    stats.max_ms = ms.back();
  }
  return stats;
}

}  // namespace zs
