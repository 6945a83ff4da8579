#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mcm/results_matrix.hpp"
#include "mcm/stats.hpp"

namespace mcm {

/// Which core pairs are NOT significantly different after Holm correction.
///
/// Core pairs are numbered (0,1), (0,2), ..., (0,k-1), (1,2), ... and bit p of
/// `mask` is set when pair p is non-significant. Cores hold at most 11
/// comparates so the mask fits 64 bits.
struct SignificancePattern {
  std::vector<std::string> core;
  std::uint64_t mask = 0;

  std::vector<std::pair<std::size_t, std::size_t>> non_significant_pairs() const;
  friend bool operator==(const SignificancePattern&, const SignificancePattern&) = default;
};

inline constexpr std::size_t kMaxCoreSize = 11;

/// Canonical index of core pair (i, j), i < j, for a core of size k.
std::size_t core_pair_index(std::size_t i, std::size_t j, std::size_t k) noexcept;
std::string mask_hex(std::uint64_t mask);

struct PatternDetail {
  SignificancePattern pattern;
  /// Raw Wilcoxon p of each core pair in canonical order.
  std::vector<double> core_p_values;
  std::size_t family_size = 0;  ///< number of pairs in the Holm family
};

/// Wilcoxon on every pair of core + extra, Holm over that whole family,
/// then the pattern restricted to core-core pairs.
PatternDetail significance_pattern_detail(const ResultsMatrix& matrix, std::span<const std::string> core,
                                          std::span<const std::string> extra, double alpha,
                                          WilcoxonOptions options = {});
SignificancePattern significance_pattern(const ResultsMatrix& matrix, std::span<const std::string> core,
                                         std::span<const std::string> extra, double alpha,
                                         WilcoxonOptions options = {});

struct EnumerationMode {
  enum class Kind { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::size_t samples = 0;  ///< Sampled only
  std::uint64_t seed = 0;   ///< drives sampling and example selection

  static EnumerationMode exhaustive(std::uint64_t seed = 0) { return {Kind::Exhaustive, 0, seed}; }
  static EnumerationMode sampled(std::size_t samples, std::uint64_t seed) { return {Kind::Sampled, samples, seed}; }
};

struct EnumerationOptions {
  std::size_t examples_per_pattern = 5;
  std::size_t workers = 1;
  WilcoxonOptions wilcoxon{};
};

struct PatternCount {
  std::uint64_t mask = 0;
  std::size_t count = 0;
  /// Up to examples_per_pattern extra sets producing the pattern, drawn
  /// uniformly by seeded keys; listed in enumeration order.
  std::vector<std::vector<std::string>> examples;
};

struct PatternEnumeration {
  std::vector<std::string> core;
  std::vector<std::string> pool;
  std::size_t k_extra = 0;
  double alpha = 0.05;
  EnumerationMode mode;
  std::size_t total_subsets = 0;
  std::vector<PatternCount> patterns;  ///< ascending by mask
  std::vector<double> core_p_values;   ///< identical for every subset

  std::size_t count_sum() const;
};

/// Binomial coefficient; saturates at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k) noexcept;

/// Evaluates the core pattern for every k_extra-subset of `pool` (exhaustive)
/// or for seeded random subsets (sampled). Throws Error{PoolTooSmall} when
/// k_extra > |pool| and Error{OverlappingSets} when pool meets core.
PatternEnumeration enumerate_patterns(const ResultsMatrix& matrix, std::span<const std::string> core,
                                      std::span<const std::string> pool, std::size_t k_extra, double alpha,
                                      EnumerationMode mode, const EnumerationOptions& options = {});

struct RankSwapReport {
  std::pair<std::string, std::string> pair;
  std::vector<std::string> order_a;  ///< set A by average rank, best first
  std::vector<std::string> order_b;
  std::pair<double, double> average_ranks_a;  ///< (first, second) within set A
  std::pair<double, double> average_ranks_b;
  bool swapped = false;
  double p_value = 1.0;  ///< raw Wilcoxon p of the pair; the same in both sets
  bool significant_a = false;  ///< Holm within set A's all-pairs family
  bool significant_b = false;
  /// The same comparison by mean performance, which cannot swap.
  bool mean_order_swapped = false;
};

RankSwapReport detect_rank_swap(const ResultsMatrix& matrix, const std::pair<std::string, std::string>& pair,
                                std::span<const std::string> set_a, std::span<const std::string> set_b,
                                double alpha = 0.05, WilcoxonOptions options = {});

struct PairFlip {
  std::string first;
  std::string second;
  bool significant_before = false;
  bool significant_after = false;
};

struct WeakenedStep {
  double weight = 0.0;
  std::string variant;
  double target_average_rank = 0.0;
  /// Average ranks over context + variant, in context order with the variant last.
  std::vector<std::pair<std::string, double>> average_ranks;
  SignificancePattern pattern;  ///< context pairs, Holm over context + variant
  std::vector<PairFlip> flips;  ///< context pairs whose decision changed
  bool mcm_cells_identical = true;  ///< every context pair cell unchanged
};

struct WeakenedAttackReport {
  std::string target;
  std::string reference;
  std::vector<std::string> context;
  double baseline_target_average_rank = 0.0;
  std::vector<std::pair<std::string, double>> baseline_average_ranks;
  SignificancePattern baseline_pattern;
  std::vector<WeakenedStep> steps;
};

/// For each weight appends weight * target + (1 - weight) * reference as a new
/// comparate, then recomputes ranks and Holm decisions over context + variant.
/// `context` must contain the target and holds at most 11 comparates.
WeakenedAttackReport weakened_variant_attack(const ResultsMatrix& matrix, std::string_view target,
                                             std::string_view reference, std::span<const double> weights,
                                             std::span<const std::string> context, double alpha = 0.05,
                                             WilcoxonOptions options = {});

/// True iff the pair's Holm decision is the same within each subset's
/// all-pairs family. The MCM counterpart is mcm_cell_invariance_check.
bool holm_flag_invariance_check(const ResultsMatrix& matrix, const std::pair<std::string, std::string>& pair,
                                std::span<const std::vector<std::string>> subsets, double alpha = 0.05);

/// Compares pairwise cells for every pair of `names` between two matrices.
bool pairwise_cells_identical(const ResultsMatrix& before, const ResultsMatrix& after,
                              std::span<const std::string> names, PairwiseOptions options = {});

nlohmann::ordered_json enumeration_to_json(const PatternEnumeration& enumeration);
nlohmann::ordered_json rank_swap_to_json(const RankSwapReport& report);
nlohmann::ordered_json weakened_attack_to_json(const WeakenedAttackReport& report);

/// Small SVG graph of one pattern: core comparates on a circle, an edge for
/// each non-significant pair.
std::string render_pattern_svg(const SignificancePattern& pattern);

}  // namespace mcm
