#include "zs/sequence.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace zs {

int ElemSet::count() const {
  int c = 0;
  for (auto w : w_) c += std::popcount(w);
  return c;
}

std::vector<Elem> ElemSet::elements(int order) const {
  std::vector<Elem> out;
  for (Elem g = 0; g < order; ++g)
    if (test(g)) out.push_back(g);
  return out;
}

void Sequence::add(Elem g, int k) {
  if (g < 0 || g >= g_->order()) throw std::invalid_argument("Sequence::add: bad element id");
  if (k < 0 || mult_[g] + k < 0) throw std::invalid_argument("Sequence::add: bad count");
  mult_[g] += k;
  len_ += k;
}

void Sequence::remove(Elem g, int k) {
  if (g < 0 || g >= g_->order() || k < 0 || mult_[g] < k)
    throw std::invalid_argument("Sequence::remove: bad removal");
  mult_[g] -= k;
  len_ -= k;
}

bool Sequence::contains(const Sequence& t) const {
  if (t.g_->order() != g_->order()) return false;
  for (int g = 0; g < g_->order(); ++g)
    if (t.mult_[g] > mult_[g]) return false;
  return true;
}

std::vector<Elem> Sequence::terms() const {
  std::vector<Elem> out;
  out.reserve(len_);
  for (int g = 0; g < g_->order(); ++g)
    for (int k = 0; k < mult_[g]; ++k) out.push_back(g);
  return out;
}

Sequence Sequence::parse(const GroupTable& G, const std::string& text) {
  Sequence s(G);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    int count = 1;
    auto star = tok.find('*');
    if (star != std::string::npos) {
      const std::string cnt = tok.substr(star + 1);
      if (cnt.empty() || cnt.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("sequence parse: bad multiplicity in '" + tok + "'");
      count = std::stoi(cnt);
      if (count < 1) throw std::invalid_argument("sequence parse: zero multiplicity");
      tok = tok.substr(0, star);
    }
    s.add(G.elem_by_name(tok), count);
  }
  return s;
}

std::string Sequence::format() const {
  std::string out;
  for (int g = 0; g < g_->order(); ++g) {
    if (mult_[g] == 0) continue;
    if (!out.empty()) out += ' ';
    out += g_->name(g);
    if (mult_[g] > 1) out += "*" + std::to_string(mult_[g]);
  }
  return out;
}

std::string Witness::to_line(const GroupTable& G) const {
  std::string out = "witness target=" + G.name(target) + " terms=";
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ',';
    out += G.name(terms[i].first) + "@" + std::to_string(terms[i].second);
  }
  return out;
}

bool verify_witness(const GroupTable& G, const Sequence& S, const Witness& W) {
  std::vector<std::vector<char>> used(G.order());
  Elem prod = G.identity();
  for (const auto& [g, occ] : W.terms) {
    if (g < 0 || g >= G.order()) return false;
    if (occ < 0 || occ >= S.multiplicity(g)) return false;
    auto& u = used[g];
    if (u.empty()) u.assign(S.multiplicity(g), 0);
    if (u[occ]) return false;  // occurrence reused
    u[occ] = 1;
    prod = G.mul(prod, g);
  }
  return prod == W.target;
}

Elem ordered_product(const GroupTable& G, const std::vector<Elem>& terms) {
  Elem p = G.identity();
  for (Elem g : terms) p = G.mul(p, g);
  return p;
}

namespace {

// Exact DP over sub-multisets: states are multiplicity vectors in mixed
// radix (mult[g]+1 per support element), reach[state] = set of products
// over all orderings of that sub-multiset.
struct MultisetDp {
  const GroupTable& G;
  std::vector<Elem> support;
  std::vector<int> radix;
  std::vector<std::uint64_t> stride;
  std::uint64_t nstates = 1;
  std::vector<ElemSet> reach;
  std::vector<int> depth;  // length of the sub-multiset per state

  MultisetDp(const Sequence& S, std::uint64_t budget) : G(S.group()) {
    for (int g = 0; g < G.order(); ++g)
      if (S.multiplicity(g) > 0) {
        support.push_back(g);
        radix.push_back(S.multiplicity(g) + 1);
      }
    stride.resize(support.size());
    for (size_t i = 0; i < support.size(); ++i) {
      stride[i] = nstates;
      if (nstates > budget) throw StateBudgetExceeded(nstates);
      nstates *= radix[i];
    }
    if (nstates > budget) throw StateBudgetExceeded(nstates);
    reach.assign(nstates, ElemSet{});
    depth.assign(nstates, 0);
    reach[0].set(G.identity());
    const size_t m = support.size();
    std::vector<int> digit(m, 0);
    for (std::uint64_t r = 1; r < nstates; ++r) {
      // mixed-radix increment
      for (size_t i = 0; i < m; ++i) {
        if (++digit[i] < radix[i]) break;
        digit[i] = 0;
      }
      int d = 0;
      for (size_t i = 0; i < m; ++i) d += digit[i];
      depth[r] = d;
      ElemSet& out = reach[r];
      for (size_t i = 0; i < m; ++i) {
        if (digit[i] == 0) continue;
        const ElemSet& prev = reach[r - stride[i]];
        const Elem g = support[i];
        for (Elem e = 0; e < G.order(); ++e)
          if (prev.test(e)) out.set(G.mul(e, g));
      }
    }
  }

  std::vector<int> digits_of(std::uint64_t r) const {
    std::vector<int> d(support.size());
    for (size_t i = 0; i < support.size(); ++i) {
      d[i] = static_cast<int>(r % radix[i]);
      r /= radix[i];
    }
    return d;
  }

  // Walks DP back-pointers from `state` to reconstruct an ordering of its
  // sub-multiset with ordered product `target`.
  Witness backtrack(std::uint64_t state, Elem target) const {
    Witness w;
    w.target = target;
    Elem t = target;
    std::uint64_t r = state;
    auto digit = digits_of(r);
    while (r != 0) {
      bool advanced = false;
      for (size_t i = 0; i < support.size(); ++i) {
        if (digit[i] == 0) continue;
        const Elem tprev = G.mul(t, G.inv(support[i]));
        if (reach[r - stride[i]].test(tprev)) {
          w.terms.emplace_back(support[i], digit[i] - 1);
          r -= stride[i];
          --digit[i];
          t = tprev;
          advanced = true;
          break;
        }
      }
      if (!advanced) throw std::logic_error("DP backtrack: no predecessor");
    }
    std::reverse(w.terms.begin(), w.terms.end());
    return w;
  }
};

}  // namespace

ElemSet pi_set(const Sequence& S, std::uint64_t budget) {
  if (S.length() == 0) {
    ElemSet s;
    s.set(S.group().identity());
    return s;
  }
  MultisetDp dp(S, budget);
  return dp.reach[dp.nstates - 1];
}

ElemSet Pi_set(const Sequence& S, std::uint64_t budget) {
  MultisetDp dp(S, budget);
  ElemSet out;
  for (std::uint64_t r = 1; r < dp.nstates; ++r) out |= dp.reach[r];
  return out;
}

bool has_product_one_subsequence(const Sequence& S, std::uint64_t budget) {
  const GroupTable& G = S.group();
  const Elem one = G.identity();
  if (G.is_abelian()) {
    // order of terms is irrelevant: one bitset of reachable sums suffices
    ElemSet reach;
    for (int g = 0; g < G.order(); ++g)
      for (int k = 0; k < S.multiplicity(g); ++k) {
        ElemSet next = reach;
        next.set(g);
        for (Elem e = 0; e < G.order(); ++e)
          if (reach.test(e)) next.set(G.mul(e, g));
        reach = next;
        if (reach.test(one)) return true;
      }
    return reach.test(one);
  }
  MultisetDp dp(S, budget);
  for (std::uint64_t r = 1; r < dp.nstates; ++r)
    if (dp.reach[r].test(one)) return true;
  return false;
}

bool has_product_one_of_length(const Sequence& S, int k, std::uint64_t budget) {
  if (k < 1 || k > S.length()) return false;
  const GroupTable& G = S.group();
  const Elem one = G.identity();
  if (G.is_abelian()) {
    // reach[j] = sums over sub-multisets of size j
    std::vector<ElemSet> reach(k + 1);
    reach[0].set(one);
    for (int g = 0; g < G.order(); ++g)
      for (int c = 0; c < S.multiplicity(g); ++c)
        for (int j = k; j >= 1; --j)
          for (Elem e = 0; e < G.order(); ++e)
            if (reach[j - 1].test(e)) reach[j].set(G.mul(e, g));
    return reach[k].test(one);
  }
  MultisetDp dp(S, budget);
  for (std::uint64_t r = 1; r < dp.nstates; ++r)
    if (dp.depth[r] == k && dp.reach[r].test(one)) return true;
  return false;
}

std::optional<Witness> product_one_witness(const Sequence& S, std::uint64_t budget) {
  MultisetDp dp(S, budget);
  const Elem one = S.group().identity();
  for (std::uint64_t r = 1; r < dp.nstates; ++r)
    if (dp.reach[r].test(one)) {
      Witness w = dp.backtrack(r, one);
      if (!verify_witness(S.group(), S, w))
        throw std::logic_error("product_one_witness: reconstructed witness fails verification");
      return w;
    }
  return std::nullopt;
}

std::optional<Witness> product_one_witness_of_length(const Sequence& S, int k,
                                                     std::uint64_t budget) {
  if (k < 1 || k > S.length())
    throw std::invalid_argument("product_one_witness_of_length: k out of range");
  const GroupTable& G = S.group();
  bool commuting = true;
  for (Elem a = 0; a < G.order() && commuting; ++a)
    if (S.multiplicity(a) > 0)
      for (Elem b = a + 1; b < G.order() && commuting; ++b)
        if (S.multiplicity(b) > 0 && !G.commutes(a, b)) commuting = false;
  if (commuting) {
    // staged knapsack over instances: stage[t][j] = sums of j-subsets of
    // the first t instances; backtracking decides per instance
    const std::vector<Elem> inst = S.terms();
    const int n = static_cast<int>(inst.size());
    std::vector<std::vector<ElemSet>> stage(n + 1, std::vector<ElemSet>(k + 1));
    stage[0][0].set(G.identity());
    for (int t = 1; t <= n; ++t) {
      const Elem g = inst[t - 1];
      for (int j = 0; j <= k; ++j) {
        stage[t][j] = stage[t - 1][j];
        if (j == 0) continue;
        for (Elem e = 0; e < G.order(); ++e)
          if (stage[t - 1][j - 1].test(e)) stage[t][j].set(G.mul(e, g));
      }
    }
    if (!stage[n][k].test(G.identity())) return std::nullopt;
    Witness w;
    w.target = G.identity();
    Elem need = G.identity();
    int j = k;
    for (int t = n; t >= 1; --t) {
      if (stage[t - 1][j].test(need)) continue;
      const Elem g = inst[t - 1];
      int first = t - 1;
      while (first > 0 && inst[first - 1] == g) --first;
      w.terms.emplace_back(g, t - 1 - first);
      need = G.mul(need, G.inv(g));
      --j;
    }
    std::reverse(w.terms.begin(), w.terms.end());
    if (!verify_witness(G, S, w))
      throw std::logic_error("product_one_witness_of_length: witness fails verification");
    return w;
  }
  MultisetDp dp(S, budget);
  const Elem one = S.group().identity();
  for (std::uint64_t r = 1; r < dp.nstates; ++r)
    if (dp.depth[r] == k && dp.reach[r].test(one)) {
      Witness w = dp.backtrack(r, one);
      if (!verify_witness(S.group(), S, w))
        throw std::logic_error("product_one_witness_of_length: witness fails verification");
      return w;
    }
  return std::nullopt;
}

bool is_minimal_product_one(const Sequence& S, std::uint64_t budget) {
  if (S.length() == 0) return false;
  MultisetDp dp(S, budget);
  const Elem one = S.group().identity();
  const std::uint64_t full = dp.nstates - 1;
  if (!dp.reach[full].test(one)) return false;
  for (std::uint64_t r = 1; r < full; ++r) {
    // the complement state has digits mult[i] - digit[i], which in mixed
    // radix is exactly full - r
    if (dp.reach[r].test(one) && dp.reach[full - r].test(one)) return false;
  }
  return true;
}

std::optional<Elem> central_product_value(const Sequence& S) {
  const GroupTable& G = S.group();
  for (Elem d : G.commutator_subgroup())
    if (!G.is_central(d))
      throw std::invalid_argument("central_product_value: [G,G] not contained in Z(G)");
  const Elem p = ordered_product(G, S.terms());
  if (G.is_central(p)) return p;
  return std::nullopt;
}

}  // namespace zs
