#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zs/sequence.hpp"

namespace zs {

struct SearchLimits {
  std::uint64_t max_nodes = 200'000'000;
  std::uint64_t dp_budget = kDefaultStateBudget;
  int workers = 0;  // 0 = flag unset: ZS_WORKERS env, then hardware
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  std::string checkpoint_path;
  bool resume = false;
};

/// Resolves the effective worker count: explicit request > ZS_WORKERS
/// env var > available parallelism.
int resolve_workers(int requested);

struct SearchReport {
  std::string constant;
  std::string group_desc;
  int value = -1;
  bool exact = true;  // false: bounded search certified a lower bound only
  std::vector<std::string> witnesses;
  std::uint64_t states_explored = 0;
  std::vector<std::string> shard_log;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
  double wall_ms = 0;  // excluded from to_records() to keep output reproducible

  std::string to_records() const;
};

struct VerifyReport {
  std::string name;
  bool ok = true;
  std::uint64_t cases_checked = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
  double wall_ms = 0;

  std::string to_records() const;
};

/// D(G) = 1 + sum (p^{e_i} - 1) for abelian p-groups.
int olson_formula(int p, const std::vector<int>& exps);

/// Two-case upper bound on D(G) for abelian G.
int davenport_upper_bound(const GroupTable& G);

/// Lexicographically minimal multiplicity vector over the Aut(G)-orbit.
Sequence canonical_form(const Sequence& S, const std::vector<std::vector<Elem>>& auts);

/// Counts |I_i^S| per K_i for a sequence over H_{p^3} (index 0 = center).
std::vector<int> zclass_profile(const Sequence& S);

/// One BFS step of the orbit-reduced zero-sum-free search: all canonical
/// representatives of length len(reps[0])+1. workers==1 is the serial
/// reference path; larger counts shard the frontier with OpenMP.
std::vector<Sequence> expand_zero_sum_free_level(const GroupTable& G,
                                                 const std::vector<std::vector<Elem>>& auts,
                                                 const std::vector<Sequence>& reps, int workers,
                                                 std::uint64_t dp_budget,
                                                 std::uint64_t* candidates_out = nullptr);

struct ZsfLevels {
  std::vector<std::vector<Sequence>> levels;  // levels[l]: canonical reps of length l
  std::uint64_t nodes = 0;
  bool complete = true;
  std::vector<std::string> shard_log;
};

/// Full orbit-reduced BFS over zero-sum-free sequences, with optional
/// level-granular checkpoint/resume.
ZsfLevels zero_sum_free_levels(const GroupTable& G, const SearchLimits& lim, int max_len = -1);

SearchReport small_davenport(const GroupTable& G, const SearchLimits& lim);
SearchReport large_davenport(const GroupTable& G, const SearchLimits& lim);
SearchReport egz_constant_s(const GroupTable& G, const SearchLimits& lim);
SearchReport gao_constant_E(const GroupTable& G, const SearchLimits& lim);

struct LowerBoundCertE {
  Sequence padded;  // T0 . identity^{|G|-1}
  int bound;        // len(T0) + |G|
  std::vector<std::string> checks;
};

/// Verified certificate that E(G) >= len(T0) + |G|, from a zero-sum-free
/// T0 padded with |G|-1 identities. Throws if T0 fails re-verification.
LowerBoundCertE lower_bound_certificate_E(const GroupTable& G, const Sequence& T0);

VerifyReport verify_ben_lemma(int n, const SearchLimits& lim);
VerifyReport verify_olson_minus1(const GroupTable& G, const SearchLimits& lim);

/// Exhaustive scan of all length-7 multisets over H_27 (pruned on the
/// first product-one prefix) checking the three structured-profile
/// theorems at p=3 and, en passant, that no zero-sum-free length-7
/// multiset exists.
VerifyReport verify_structured_theorems_2x(const GroupTable& h27, const SearchLimits& lim);

/// Randomized verification of the three parts of the length-p^3+3p-3
/// extraction lemma at p=3; every constructed subsequence is re-verified.
VerifyReport verify_lemma_2_7(const GroupTable& h27, const SearchLimits& lim);

}  // namespace zs
