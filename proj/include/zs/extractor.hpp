#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zs/constants.hpp"
#include "zs/egz.hpp"

namespace zs {

/// Raised when every extraction strategy (including randomized restarts)
/// fails; carries the offending input and seed for replay.
struct ExtractionFailed : std::runtime_error {
  ExtractionFailed(const std::string& what, std::string input_, std::uint64_t seed_)
      : std::runtime_error(what + " input=[" + input_ + "] seed=" + std::to_string(seed_)),
        input(std::move(input_)),
        seed(seed_) {}
  std::string input;
  std::uint64_t seed = 0;
};

struct ExtractResult {
  Witness witness;
  /// 0 subgroup/central concentration, 1 block-sum DP, 2 local block
  /// repair, 3 EGZ escalation, 4 randomized restart.
  int layer = 0;
  std::string trace;
};

/// How many of (1, u, u^2) to take so that k terms sum to zero, within
/// the available counts; nullopt when impossible.
std::optional<std::array<int, 3>> select_zero_sum_c3(const std::array<int, 3>& counts, int k);

/// Two k-term selections with distinct non-trivial sums; exists for
/// counts of total 28 and k = 27 whenever no zero-sum selection does.
struct C3Alternatives {
  std::array<int, 3> first{}, second{};
  int sum_first = 0, sum_second = 0;
};
std::optional<C3Alternatives> c3_two_alternatives(const std::array<int, 3>& counts, int k);

/// Nine disjoint central-product triples picked greedily along `order`
/// (instance indices into vals). Each round scans the first nine
/// remaining instances, which always contain one.
std::optional<std::vector<std::array<int, 3>>> extract_short3_blocks(
    const GroupTable& G, const std::vector<Elem>& vals, const std::vector<int>& order);

/// Product-one subsequence of a length-7 sequence over H_27, with the
/// z-class profile of the input in the trace.
ExtractResult extract_product_one_7(const Sequence& S, std::uint64_t budget = kDefaultStateBudget);

/// Product-one subsequence of length exactly 27 from a length-33
/// sequence over H_27. Layered strategy; throws ExtractionFailed if all
/// layers fail (which would disprove the length-33 bound).
ExtractResult extract_product_one_27(const Sequence& S, std::uint64_t seed = 0,
                                     std::uint64_t budget = kDefaultStateBudget);

/// Exhaustive numeric validation of the case tables behind the
/// length-7 classification: the (3,3,1,0) interleaving table, the
/// (3,2,2,0) condition table, and the (3,2,1,1) certificate claims.
VerifyReport validate_theorem31_tables(const GroupTable& h27);

/// Exhaustive check of the C_3 selection lemma over all multisets of
/// length 28 (zero-sum 27-selection or two alternatives with distinct
/// non-trivial sums) and 27 (triple-block decomposition with a
/// non-constant residual when the total is non-trivial).
VerifyReport verify_c3_selection_lemma();

/// Exhaustive check of the twin short-3 combination lemma: parts (a)
/// and (b) via certificates over all ordered non-central short-3 pairs,
/// part (c) via the four-term reordering.
VerifyReport verify_twin_combination_lemma(const GroupTable& h27);

struct FuzzStats {
  std::string generator;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::array<std::uint64_t, 5> layer_hist{};
  std::vector<std::string> failures;
  double median_ms = 0, max_ms = 0;  // human display only

  /// Structured lines; timings are deliberately excluded so output is
  /// byte-identical across runs and worker counts.
  std::string to_records() const;
};

/// Randomized extraction campaign. Generators: uniform, two-class,
/// three-central, one-class, adversarial (cycles the previous three).
/// Per-trial seeds derive from master_seed only, so results do not
/// depend on the worker count.
FuzzStats fuzz_extract27(const GroupTable& h27, const std::string& generator,
                         std::uint64_t trials, std::uint64_t master_seed, int workers = 0);

}  // namespace zs
