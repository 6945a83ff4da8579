#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcm {

enum class Direction { HigherIsBetter, LowerIsBetter };

std::string_view to_string(Direction direction) noexcept;
/// Accepts "higher" / "lower" (the wire spelling used by files and the CLI).
std::optional<Direction> parse_direction(std::string_view text) noexcept;

/// Dense table of scores, one row per comparate and one column per task.
///
/// The constructor enforces every structural invariant (at least two
/// comparates, at least one task, unique non-empty names, finite scores), so a
/// ResultsMatrix that exists is always valid. Instances are immutable.
class ResultsMatrix {
 public:
  ResultsMatrix(std::vector<std::string> comparates, std::vector<std::string> tasks,
                std::vector<double> scores_row_major, Direction direction);

  std::size_t comparate_count() const noexcept { return comparates_.size(); }
  std::size_t task_count() const noexcept { return tasks_.size(); }

  const std::vector<std::string>& comparates() const noexcept { return comparates_; }
  const std::vector<std::string>& tasks() const noexcept { return tasks_; }
  Direction direction() const noexcept { return direction_; }

  double score(std::size_t comparate, std::size_t task) const noexcept {
    return scores_[comparate * tasks_.size() + task];
  }
  std::span<const double> row(std::size_t comparate) const noexcept {
    return {scores_.data() + comparate * tasks_.size(), tasks_.size()};
  }
  std::span<const double> scores() const noexcept { return scores_; }

  std::optional<std::size_t> find(std::string_view comparate) const noexcept;
  /// Throws Error{UnknownComparate} when absent.
  std::size_t index_of(std::string_view comparate) const;

  /// True when `a` performs strictly better than `b` under the direction.
  bool better(double a, double b) const noexcept {
    return direction_ == Direction::HigherIsBetter ? a > b : a < b;
  }

  /// Sub-matrix over the named comparates, in the order given.
  ResultsMatrix select(std::span<const std::string> names) const;

  /// Matrix with `name` appended as a new last row.
  ResultsMatrix with_row(std::string name, std::vector<double> row_scores) const;

  friend bool operator==(const ResultsMatrix&, const ResultsMatrix&) = default;

 private:
  std::vector<std::string> comparates_;
  std::vector<std::string> tasks_;
  std::vector<double> scores_;
  Direction direction_;
};

}  // namespace mcm
