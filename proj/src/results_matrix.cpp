#include "mcm/results_matrix.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

#include <fmt/format.h>

#include "mcm/error.hpp"

namespace mcm {

std::string_view to_string(Direction direction) noexcept {
  return direction == Direction::HigherIsBetter ? "higher" : "lower";
}

std::optional<Direction> parse_direction(std::string_view text) noexcept {
  if (text == "higher") return Direction::HigherIsBetter;
  if (text == "lower") return Direction::LowerIsBetter;
  return std::nullopt;
}

namespace {

void check_names(const std::vector<std::string>& names, std::string_view what, bool is_row) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    // Header is row 1 and the name column is column 1.
    const CellLocation where = is_row ? CellLocation{i + 2, 1} : CellLocation{1, i + 2};
    if (names[i].empty()) {
      throw ValidationError(fmt::format("empty {} name", what), where);
    }
    if (!seen.insert(names[i]).second) {
      throw ValidationError(fmt::format("duplicate {} name '{}'", what, names[i]), where);
    }
  }
}

}  // namespace

ResultsMatrix::ResultsMatrix(std::vector<std::string> comparates, std::vector<std::string> tasks,
                             std::vector<double> scores_row_major, Direction direction)
    : comparates_(std::move(comparates)),
      tasks_(std::move(tasks)),
      scores_(std::move(scores_row_major)),
      direction_(direction) {
  if (comparates_.size() < 2) {
    throw ValidationError(fmt::format("need at least 2 comparates, got {}", comparates_.size()));
  }
  if (tasks_.empty()) throw ValidationError("need at least 1 task");
  check_names(comparates_, "comparate", true);
  check_names(tasks_, "task", false);
  if (scores_.size() != comparates_.size() * tasks_.size()) {
    throw ValidationError(fmt::format("score grid has {} cells, expected {}x{}", scores_.size(),
                                      comparates_.size(), tasks_.size()));
  }
  for (std::size_t i = 0; i < comparates_.size(); ++i) {
    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      if (!std::isfinite(scores_[i * tasks_.size() + j])) {
        throw ValidationError(
            fmt::format("non-finite score for '{}' on '{}'", comparates_[i], tasks_[j]),
            CellLocation{i + 2, j + 2});
      }
    }
  }
}

std::optional<std::size_t> ResultsMatrix::find(std::string_view comparate) const noexcept {
  for (std::size_t i = 0; i < comparates_.size(); ++i) {
    if (comparates_[i] == comparate) return i;
  }
  return std::nullopt;
}

std::size_t ResultsMatrix::index_of(std::string_view comparate) const {
  if (auto idx = find(comparate)) return *idx;
  throw Error(ErrorCode::UnknownComparate, fmt::format("unknown comparate '{}'", comparate));
}

ResultsMatrix ResultsMatrix::select(std::span<const std::string> names) const {
  std::vector<double> grid;
  grid.reserve(names.size() * tasks_.size());
  for (const auto& name : names) {
    const auto r = row(index_of(name));
    grid.insert(grid.end(), r.begin(), r.end());
  }
  return ResultsMatrix({names.begin(), names.end()}, tasks_, std::move(grid), direction_);
}

ResultsMatrix ResultsMatrix::with_row(std::string name, std::vector<double> row_scores) const {
  if (find(name)) {
    throw Error(ErrorCode::NameCollision, fmt::format("comparate '{}' already exists", name));
  }
  if (row_scores.size() != tasks_.size()) {
    throw ValidationError(fmt::format("new row has {} scores, expected {}", row_scores.size(),
                                      tasks_.size()));
  }
  auto names = comparates_;
  names.push_back(std::move(name));
  auto grid = scores_;
  grid.insert(grid.end(), row_scores.begin(), row_scores.end());
  return ResultsMatrix(std::move(names), tasks_, std::move(grid), direction_);
}

}  // namespace mcm
