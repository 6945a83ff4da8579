#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcm/results_matrix.hpp"

namespace mcm {

// ---------------------------------------------------------------------------
// Ranks
// ---------------------------------------------------------------------------

struct RankTable {
  std::size_t comparate_count = 0;
  std::size_t task_count = 0;
  /// ranks[i * task_count + j]: rank of comparate i on task j (1 = best).
  std::vector<double> ranks;
  std::vector<double> average_ranks;

  double rank(std::size_t comparate, std::size_t task) const noexcept {
    return ranks[comparate * task_count + task];
  }
};

/// Rank of c on t is 1 + #{strictly better} + #{equal, excluding c} / 2.
/// Equal scores therefore share the mean of the positions they span.
RankTable compute_ranks(const ResultsMatrix& matrix);

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank
// ---------------------------------------------------------------------------

enum class PMethod { Exact, NormalApproximation, Degenerate };

std::string_view to_string(PMethod method) noexcept;

struct WilcoxonOptions {
  /// Exact null distribution is used when the count of nonzero differences
  /// is at most this value.
  std::size_t exact_threshold = 25;
};

struct WilcoxonResult {
  double p_value = 1.0;
  PMethod method = PMethod::Degenerate;
  double w_plus = 0.0;         ///< sum of ranks of positive differences
  std::size_t nonzero = 0;     ///< differences left after discarding zeros
};

/// Two-sided signed-rank test. Zero differences are dropped before ranking;
/// tied magnitudes get averaged ranks. Throws Error{EmptyInput} for no input.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, WilcoxonOptions options = {});

/// Exact two-sided p, by dynamic programming over the null distribution of
/// W+ (sign flips of the averaged ranks). Requires at least one nonzero.
double wilcoxon_exact_p(std::span<const double> diffs);

/// Normal approximation with tie-corrected variance and continuity correction.
double wilcoxon_normal_p(std::span<const double> diffs);

// ---------------------------------------------------------------------------
// Pairwise summary
// ---------------------------------------------------------------------------

struct PairwiseComparison {
  std::string row;
  std::string column;
  double mean_difference = 0.0;  ///< positive: row is better
  std::size_t wins = 0;
  std::size_t ties = 0;
  std::size_t losses = 0;
  double p_value = 1.0;
  PMethod p_method = PMethod::Degenerate;

  friend bool operator==(const PairwiseComparison&, const PairwiseComparison&) = default;
};

struct PairwiseOptions {
  double tie_epsilon = 0.0;
  WilcoxonOptions wilcoxon{};
};

/// Per-task differences between two rows, oriented so positive means `row`
/// is better under the matrix direction.
std::vector<double> oriented_differences(const ResultsMatrix& matrix, std::size_t row,
                                         std::size_t column);

PairwiseComparison pairwise_comparison(const ResultsMatrix& matrix, std::string_view row,
                                       std::string_view column, PairwiseOptions options = {});

// ---------------------------------------------------------------------------
// Groupwise tests
// ---------------------------------------------------------------------------

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t degrees_of_freedom = 0;
};

/// Friedman chi-square with tie correction; p from chi-square(m - 1).
/// Requires m >= 3 and n >= 2.
FriedmanResult friedman_test(const ResultsMatrix& matrix);

enum class NemenyiAlpha { P05, P10 };

/// Largest m covered by the embedded studentized-range constants.
inline constexpr std::size_t kNemenyiMaxComparates = 20;

/// Two-tailed Nemenyi constant q_alpha for m comparates (studentized range
/// at infinite degrees of freedom divided by sqrt(2)).
double nemenyi_q(std::size_t m, NemenyiAlpha alpha);

/// Parses 0.05 / 0.10; throws Error{UnsupportedAlpha} otherwise.
NemenyiAlpha nemenyi_alpha(double alpha);

/// CD = q_alpha * sqrt(m (m + 1) / (6 n)).
double nemenyi_critical_difference(std::size_t m, std::size_t n, NemenyiAlpha alpha);

// ---------------------------------------------------------------------------
// Holm step-down
// ---------------------------------------------------------------------------

struct HolmInput {
  std::string id;
  double p_value = 1.0;
};

struct HolmDecision {
  std::string id;
  bool significant = false;
  double adjusted_threshold = 0.0;  ///< alpha / (N + 1 - position)
  std::size_t position = 0;         ///< 1-based position in ascending p order
};

/// Sorts ascending by p (ties by id), rejects while p_(i) <= alpha / (N + 1 - i)
/// and stops at the first failure. Equal p values then share the most
/// permissive decision among them. Output keeps the input order.
std::vector<HolmDecision> holm_correction(std::span<const HolmInput> pairs, double alpha);

/// Holm decisions for bare p values, in input order. Same rule as
/// holm_correction; the result does not depend on how equal p values are
/// ordered, so no identifiers are needed.
std::vector<bool> holm_significance(std::span<const double> p_values, double alpha);

/// Identifier used for an unordered pair in Holm families: the two names in
/// lexicographic order separated by a tab.
std::string pair_id(std::string_view a, std::string_view b);

/// Wilcoxon p for every pair of comparates in `matrix` with Holm applied to
/// the whole family. Grids are comparate_count x comparate_count, symmetric,
/// diagonal unused.
struct HolmFamily {
  std::size_t size = 0;
  std::vector<double> p_values;
  std::vector<bool> significant;

  double p(std::size_t a, std::size_t b) const { return p_values[a * size + b]; }
  bool is_significant(std::size_t a, std::size_t b) const { return significant[a * size + b]; }
};

HolmFamily holm_all_pairs(const ResultsMatrix& matrix, double alpha, WilcoxonOptions options = {});

}  // namespace mcm
