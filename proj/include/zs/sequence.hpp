#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zs/group.hpp"

namespace zs {

/// Raised by the multiset DP when the state count would exceed the
/// caller's budget; callers are expected to switch to structure-aware
/// methods instead of retrying blindly.
struct StateBudgetExceeded : std::runtime_error {
  explicit StateBudgetExceeded(std::uint64_t states)
      : std::runtime_error("DP state budget exceeded (" + std::to_string(states) + " states)"),
        states(states) {}
  std::uint64_t states;
};

/// Set of element ids with constant-time membership; sized for groups of
/// order <= 256.
class ElemSet {
public:
  ElemSet() = default;
  bool test(Elem g) const { return (w_[g >> 6] >> (g & 63)) & 1; }
  void set(Elem g) { w_[g >> 6] |= std::uint64_t{1} << (g & 63); }
  void reset() { w_ = {}; }
  bool empty() const { return !(w_[0] | w_[1] | w_[2] | w_[3]); }
  int count() const;
  ElemSet& operator|=(const ElemSet& o) {
    for (int i = 0; i < 4; ++i) w_[i] |= o.w_[i];
    return *this;
  }
  bool operator==(const ElemSet& o) const { return w_ == o.w_; }
  /// Sorted list of members.
  std::vector<Elem> elements(int order) const;
  bool subset_of(const ElemSet& o) const {
    for (int i = 0; i < 4; ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

private:
  std::array<std::uint64_t, 4> w_{};
};

/// An unordered sequence (multiset) over a fixed group, stored as a
/// multiplicity vector indexed by element id.
class Sequence {
public:
  explicit Sequence(const GroupTable& G) : g_(&G), mult_(G.order(), 0) {}

  const GroupTable& group() const { return *g_; }
  int length() const { return len_; }
  int multiplicity(Elem g) const { return mult_[g]; }
  const std::vector<int>& multiplicities() const { return mult_; }

  void add(Elem g, int k = 1);
  void remove(Elem g, int k = 1);

  /// T | S: pointwise multiplicity comparison.
  bool contains(const Sequence& t) const;

  /// Terms expanded in sorted id order; "occurrence index" of a term means
  /// its position in this vector.
  std::vector<Elem> terms() const;

  /// Whitespace-separated element names with optional *multiplicity
  /// suffix, e.g. "x*2 y x^1y^0v^2".
  static Sequence parse(const GroupTable& G, const std::string& text);
  std::string format() const;

  bool operator==(const Sequence& o) const { return mult_ == o.mult_; }
  bool operator<(const Sequence& o) const { return mult_ < o.mult_; }

private:
  const GroupTable* g_;
  std::vector<int> mult_;
  int len_ = 0;
};

/// An explicit ordered list of term occurrences whose left-to-right
/// product equals `target`. Occurrence indices count uses of the same
/// element id (0-based, < multiplicity).
struct Witness {
  std::vector<std::pair<Elem, int>> terms;  // (element id, occurrence index)
  Elem target = 0;

  std::string to_line(const GroupTable& G) const;
};

/// Checks a witness against a sequence: occurrence indices must respect
/// multiplicities and the ordered product must equal the target.
bool verify_witness(const GroupTable& G, const Sequence& S, const Witness& W);

/// Left-to-right product of an ordered term list; empty list gives the
/// identity.
Elem ordered_product(const GroupTable& G, const std::vector<Elem>& terms);

inline constexpr std::uint64_t kDefaultStateBudget = 1u << 22;

/// pi(S): products over all orderings of the full multiset, by DP over
/// sub-multisets. State count is prod(mult[g]+1) and must not exceed
/// `budget`.
ElemSet pi_set(const Sequence& S, std::uint64_t budget = kDefaultStateBudget);

/// Pi(S): union of pi(T) over all non-empty sub-multisets T | S.
ElemSet Pi_set(const Sequence& S, std::uint64_t budget = kDefaultStateBudget);

/// True iff 1 is in Pi(S).
bool has_product_one_subsequence(const Sequence& S, std::uint64_t budget = kDefaultStateBudget);

/// A verified witness for a non-empty product-one subsequence, or
/// nullopt when 1 is not in Pi(S).
std::optional<Witness> product_one_witness(const Sequence& S,
                                           std::uint64_t budget = kDefaultStateBudget);

/// True iff S has a product-one subsequence of length exactly k.
/// Abelian groups use a (length, sum) bitset DP that never hits the
/// budget; others fall back to the sub-multiset DP.
bool has_product_one_of_length(const Sequence& S, int k,
                               std::uint64_t budget = kDefaultStateBudget);

/// A verified witness of length exactly k, or nullopt.
std::optional<Witness> product_one_witness_of_length(const Sequence& S, int k,
                                                     std::uint64_t budget = kDefaultStateBudget);

/// True iff 1 is in pi(S) and S admits no split into two non-empty
/// sub-multisets that both reach the identity (the defining property of
/// a minimal product-one sequence).
bool is_minimal_product_one(const Sequence& S, std::uint64_t budget = kDefaultStateBudget);

/// For groups with [G,G] <= Z(G): the central value pi(S*) of the
/// canonical sorted ordering when it is central (then every ordering is
/// central), nullopt when the product is non-central. Rejects groups
/// where [G,G] is not contained in the center.
std::optional<Elem> central_product_value(const Sequence& S);

}  // namespace zs
