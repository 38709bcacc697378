#pragma once

// Brute-force reference implementations used to cross-check the DP and
// certificate machinery on small instances. Deliberately naive: every
// permutation / sub-multiset is enumerated explicitly.

#include <algorithm>
#include <set>
#include <vector>

#include "zs/sequence.hpp"

namespace oracle {

// Products over all permutations of the full term list.
inline std::set<zs::Elem> pi_brute(const zs::GroupTable& G, std::vector<zs::Elem> terms) {
  std::set<zs::Elem> out;
  std::sort(terms.begin(), terms.end());
  do {
    out.insert(zs::ordered_product(G, terms));
  } while (std::next_permutation(terms.begin(), terms.end()));
  return out;
}

// Union of pi over all non-empty sub-multisets, by subset-of-instances
// enumeration (duplicates collapse in the result set).
inline std::set<zs::Elem> Pi_brute(const zs::GroupTable& G, const std::vector<zs::Elem>& terms) {
  std::set<zs::Elem> out;
  const int n = static_cast<int>(terms.size());
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<zs::Elem> sub;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) sub.push_back(terms[i]);
    const auto p = pi_brute(G, sub);
    out.insert(p.begin(), p.end());
  }
  return out;
}

inline bool has_product_one_brute(const zs::GroupTable& G, const std::vector<zs::Elem>& terms) {
  return Pi_brute(G, terms).count(G.identity()) > 0;
}

inline bool has_product_one_of_length_brute(const zs::GroupTable& G,
                                            const std::vector<zs::Elem>& terms, int k) {
  const int n = static_cast<int>(terms.size());
  for (int mask = 1; mask < (1 << n); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != k) continue;
    std::vector<zs::Elem> sub;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) sub.push_back(terms[i]);
    if (pi_brute(G, sub).count(G.identity())) return true;
  }
  return false;
}

inline std::set<zs::Elem> to_set(const zs::ElemSet& s, int order) {
  const auto v = s.elements(order);
  return std::set<zs::Elem>(v.begin(), v.end());
}

}  // namespace oracle
