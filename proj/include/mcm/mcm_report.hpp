#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mcm/bayes.hpp"
#include "mcm/results_matrix.hpp"
#include "mcm/stats.hpp"

namespace mcm {

struct MCMConfig {
  double alpha = 0.05;
  /// Absent: every comparate, in both rows and columns.
  std::optional<std::vector<std::string>> row_comparates;
  std::optional<std::vector<std::string>> column_comparates;
  bool include_bayes = false;
  double tie_epsilon = 0.0;
  WilcoxonOptions wilcoxon{};
  BayesConfig bayes{};
};

struct MCMCell {
  PairwiseComparison comparison;
  /// p < alpha on the uncorrected pairwise p value.
  bool significant = false;
  std::optional<BayesPosterior> bayes;

  friend bool operator==(const MCMCell&, const MCMCell&) = default;
};

/// A Multi-Comparison Matrix: every (row, column) pair summarised by the
/// statistics of those two comparates alone. Nothing in a cell, nor the
/// relative order of two comparates, depends on which other comparates are
/// present.
struct MCMReport {
  Direction direction = Direction::HigherIsBetter;
  double alpha = 0.05;
  double tie_epsilon = 0.0;
  bool all_pairs = true;
  std::vector<std::string> row_order;
  std::vector<std::string> column_order;
  /// Mean score of every comparate appearing in rows or columns, in the order
  /// they are first shown (rows, then columns not already listed).
  std::vector<std::pair<std::string, double>> mean_performance;
  /// Row-major over row_order x column_order; empty where row == column.
  std::vector<std::optional<MCMCell>> cells;
  std::size_t comparison_count = 0;
  std::size_t task_count = 0;
  std::optional<BayesConfig> bayes_config;

  const std::optional<MCMCell>& cell(std::size_t row, std::size_t column) const {
    return cells[row * column_order.size() + column];
  }
  /// Cell by names; nullptr when the pair is not shown.
  const MCMCell* find_cell(std::string_view row, std::string_view column) const;
  double mean_of(std::string_view comparate) const;
};

/// Orders names best first by mean performance; equal means fall back to
/// lexicographic name order.
std::vector<std::string> order_by_mean(const ResultsMatrix& matrix, std::span<const std::string> names);

double mean_performance(const ResultsMatrix& matrix, std::size_t comparate);

/// |rows| * |cols| - |rows & cols| for focused layouts, |C| (|C| - 1) / 2
/// when rows and columns hold the same comparates.
std::size_t comparison_count(std::span<const std::string> rows, std::span<const std::string> columns);

MCMReport build_mcm(const ResultsMatrix& matrix, const MCMConfig& config, std::size_t workers = 1);

/// True iff the cell for `pair` is identical in reports built over each of
/// the given comparate subsets. Throws Error{PairNotInSubset} when a subset
/// lacks one of the pair.
bool mcm_cell_invariance_check(const ResultsMatrix& matrix, const std::pair<std::string, std::string>& pair,
                               std::span<const std::vector<std::string>> subsets, const MCMConfig& config = {});

/// Canonical machine-readable form of the report.
nlohmann::ordered_json report_to_json(const MCMReport& report);
nlohmann::ordered_json bayes_to_json(const BayesPosterior& posterior);
nlohmann::ordered_json pairwise_to_json(const PairwiseComparison& cell);

}  // namespace mcm
