#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zs {

/// Element id inside a GroupTable; valid ids lie in [0, order()).
using Elem = int;

/// A finite group given by a complete multiplication table, with the
/// structural data (center, commutator subgroup, conjugacy classes,
/// z-classes, exponent) precomputed and verified at construction.
///
/// Instances are immutable after construction and safe to share across
/// threads.
class GroupTable {
public:
  /// Cyclic group C_n with generator id 1.
  static GroupTable cyclic(int n);

  /// Direct product C_{p^{e_1}} x ... x C_{p^{e_r}}, exps nondecreasing.
  static GroupTable abelian_p_group(int p, const std::vector<int>& exps);

  /// The non-abelian group of order p^3 and exponent p (p odd prime,
  /// p <= 7), realized by 3x3 upper unitriangular matrices over F_p.
  /// Element ids follow the normal form x^i y^j v^k -> i*p^2 + j*p + k,
  /// where v = [y,x] with the convention [a,b] = a^-1 b^-1 a b.
  static GroupTable heisenberg(int p);

  /// Builds from an explicit table and verifies all group axioms.
  static GroupTable from_table(std::vector<std::string> names,
                               std::vector<Elem> mul);

  int order() const { return n_; }
  Elem identity() const { return identity_; }
  Elem mul(Elem a, Elem b) const { return mul_[static_cast<size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem conj(Elem g, Elem x) const { return mul(mul(inv(x), g), x); }  // x^-1 g x
  Elem commutator(Elem a, Elem b) const {  // [a,b] = a^-1 b^-1 a b
    return mul(mul(inv(a), inv(b)), mul(a, b));
  }
  Elem pow(Elem g, long long k) const;
  bool commutes(Elem a, Elem b) const { return mul(a, b) == mul(b, a); }

  const std::string& name(Elem g) const { return names_[g]; }
  /// Resolves a display name to an id; understands the group's own
  /// naming scheme (exact match, plus exponent normal forms for the
  /// built-in families). Throws std::invalid_argument on failure.
  Elem elem_by_name(const std::string& s) const;

  bool is_abelian() const { return abelian_; }
  int exponent() const { return exponent_; }
  const std::vector<Elem>& center() const { return center_; }
  bool is_central(Elem g) const { return central_[g] != 0; }
  const std::vector<Elem>& commutator_subgroup() const { return derived_; }
  bool in_commutator_subgroup(Elem g) const { return in_derived_[g] != 0; }

  const std::vector<std::vector<Elem>>& conjugacy_classes() const { return conj_classes_; }
  const std::vector<std::vector<Elem>>& z_classes() const { return z_classes_; }
  /// Index of g's z-class within z_classes().
  int z_class_of(Elem g) const { return z_class_of_[g]; }
  bool z_equivalent(Elem g, Elem h) const { return z_class_of_[g] == z_class_of_[h]; }
  bool conjugate(Elem g, Elem h) const { return conj_class_of_[g] == conj_class_of_[h]; }

  bool is_heisenberg() const { return heisenberg_p_ > 0; }
  int heisenberg_p() const;
  /// The K_i numbering for H_{p^3}: 0 for Z(G), 1..p for K[x y^{i-1}],
  /// p+1 for K[y]. Total and constant on z-classes. Requires a group
  /// built by heisenberg().
  int z_class_index(Elem g) const;

  /// All automorphisms as permutations of element ids, sorted
  /// lexicographically. Only for order() <= 128.
  const std::vector<std::vector<Elem>>& automorphisms() const;

  /// Quotient by a normal subgroup N (checked); returns the coset group
  /// and the projection map id -> quotient id.
  std::pair<GroupTable, std::vector<Elem>> quotient(const std::vector<Elem>& N) const;

  /// Versioned text serialization; deserialize re-verifies all axioms.
  std::string serialize() const;
  static GroupTable deserialize(std::istream& in);
  static GroupTable deserialize(const std::string& text);

  /// Short human description, e.g. "C3", "C3xC9", "H27".
  const std::string& description() const { return desc_; }

private:
  GroupTable() = default;
  void precompute();  // verifies axioms, fills structural data
  void verify_axioms() const;

  int n_ = 0;
  Elem identity_ = 0;
  std::vector<Elem> mul_;
  std::vector<Elem> inv_;
  std::vector<std::string> names_;
  std::map<std::string, Elem> name_to_id_;
  std::string desc_;

  bool abelian_ = false;
  int exponent_ = 1;
  std::vector<Elem> center_;
  std::vector<char> central_;
  std::vector<Elem> derived_;
  std::vector<char> in_derived_;
  std::vector<std::vector<Elem>> conj_classes_;
  std::vector<int> conj_class_of_;
  std::vector<std::vector<Elem>> z_classes_;
  std::vector<int> z_class_of_;
  std::vector<int> k_index_;  // Heisenberg K_i numbering, empty otherwise
  int heisenberg_p_ = 0;

  mutable std::vector<std::vector<Elem>> automorphisms_;  // lazy cache
};

/// Subgroup generated by a set of elements, as a sorted id list.
std::vector<Elem> generated_subgroup(const GroupTable& G, const std::vector<Elem>& gens);

/// True when N (a sorted subgroup id list) is normal in G.
bool is_normal_subgroup(const GroupTable& G, const std::vector<Elem>& N);

}  // namespace zs
