#include "mcm/mcm_report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "mcm/error.hpp"
#include "mcm/parallel.hpp"

namespace mcm {

double mean_performance(const ResultsMatrix& matrix, std::size_t comparate) {
  double sum = 0.0;
  for (double v : matrix.row(comparate)) sum += v;
  return sum / static_cast<double>(matrix.task_count());
}

std::vector<std::string> order_by_mean(const ResultsMatrix& matrix, std::span<const std::string> names) {
  std::vector<std::pair<double, std::string>> keyed;
  keyed.reserve(names.size());
  for (const auto& name : names) keyed.emplace_back(mean_performance(matrix, matrix.index_of(name)), name);
  const bool higher = matrix.direction() == Direction::HigherIsBetter;
  std::sort(keyed.begin(), keyed.end(), [higher](const auto& a, const auto& b) {
    if (a.first != b.first) return higher ? a.first > b.first : a.first < b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(std::move(k.second));
  return out;
}

std::size_t comparison_count(std::span<const std::string> rows, std::span<const std::string> columns) {
  const std::set<std::string> r(rows.begin(), rows.end());
  const std::set<std::string> c(columns.begin(), columns.end());
  if (r == c) return r.size() * (r.size() - 1) / 2;
  std::size_t overlap = 0;
  for (const auto& name : r) overlap += c.count(name);
  return r.size() * c.size() - overlap;
}

const MCMCell* MCMReport::find_cell(std::string_view row, std::string_view column) const {
  const auto r = std::find(row_order.begin(), row_order.end(), row);
  const auto c = std::find(column_order.begin(), column_order.end(), column);
  if (r == row_order.end() || c == column_order.end()) return nullptr;
  const auto& slot = cell(static_cast<std::size_t>(r - row_order.begin()),
                          static_cast<std::size_t>(c - column_order.begin()));
  return slot ? &*slot : nullptr;
}

double MCMReport::mean_of(std::string_view comparate) const {
  for (const auto& [name, value] : mean_performance) {
    if (name == comparate) return value;
  }
  throw Error(ErrorCode::UnknownComparate, fmt::format("'{}' is not part of this report", comparate));
}

namespace {

std::vector<std::string> checked_names(const ResultsMatrix& matrix, const std::vector<std::string>& names,
                                       std::string_view what) {
  if (names.empty()) throw Error(ErrorCode::InvalidConfig, fmt::format("{} list is empty", what));
  std::set<std::string> seen;
  for (const auto& n : names) {
    matrix.index_of(n);
    if (!seen.insert(n).second) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("'{}' listed twice in {}", n, what));
    }
  }
  return names;
}

}  // namespace

MCMReport build_mcm(const ResultsMatrix& matrix, const MCMConfig& config, std::size_t workers) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, fmt::format("alpha must lie in (0, 1), got {}", config.alpha));
  }
  if (!(config.tie_epsilon >= 0.0)) throw Error(ErrorCode::InvalidConfig, "tie_epsilon must be >= 0");

  const auto rows = config.row_comparates ? checked_names(matrix, *config.row_comparates, "rows")
                                          : matrix.comparates();
  const auto cols = config.column_comparates ? checked_names(matrix, *config.column_comparates, "columns")
                                             : matrix.comparates();

  MCMReport report;
  report.direction = matrix.direction();
  report.alpha = config.alpha;
  report.tie_epsilon = config.tie_epsilon;
  report.task_count = matrix.task_count();
  report.row_order = order_by_mean(matrix, rows);
  report.column_order = order_by_mean(matrix, cols);
  report.all_pairs = std::set<std::string>(rows.begin(), rows.end()) ==
                     std::set<std::string>(cols.begin(), cols.end());
  report.comparison_count = comparison_count(rows, cols);
  if (config.include_bayes) report.bayes_config = config.bayes;

  std::set<std::string> listed;
  for (const auto* order : {&report.row_order, &report.column_order}) {
    for (const auto& name : *order) {
      if (listed.insert(name).second) {
        report.mean_performance.emplace_back(name, mean_performance(matrix, matrix.index_of(name)));
      }
    }
  }

  const std::size_t width = report.column_order.size();
  report.cells.resize(report.row_order.size() * width);
  const PairwiseOptions options{config.tie_epsilon, config.wilcoxon};
  parallel_for(report.cells.size(), workers, [&](std::size_t k) {
    const auto& r = report.row_order[k / width];
    const auto& c = report.column_order[k % width];
    if (r == c) return;
    MCMCell cell;
    cell.comparison = pairwise_comparison(matrix, r, c, options);
    cell.significant = cell.comparison.p_value < config.alpha;
    if (config.include_bayes) {
      const auto diffs = oriented_differences(matrix, matrix.index_of(r), matrix.index_of(c));
      cell.bayes = bayesian_signed_rank(diffs, config.bayes);
    }
    report.cells[k] = std::move(cell);
  });
  return report;
}

bool mcm_cell_invariance_check(const ResultsMatrix& matrix, const std::pair<std::string, std::string>& pair,
                               std::span<const std::vector<std::string>> subsets, const MCMConfig& config) {
  std::optional<MCMCell> reference;
  for (const auto& subset : subsets) {
    const bool has_first = std::find(subset.begin(), subset.end(), pair.first) != subset.end();
    const bool has_second = std::find(subset.begin(), subset.end(), pair.second) != subset.end();
    if (!has_first || !has_second) {
      throw Error(ErrorCode::PairNotInSubset,
                  fmt::format("subset lacks '{}' or '{}'", pair.first, pair.second));
    }
    MCMConfig local = config;
    local.row_comparates.reset();
    local.column_comparates.reset();
    const auto report = build_mcm(matrix.select(subset), local);
    const MCMCell* cell = report.find_cell(pair.first, pair.second);
    if (cell == nullptr) return false;
    if (!reference) {
      reference = *cell;
    } else if (!(*reference == *cell)) {
      return false;
    }
  }
  return true;
}

nlohmann::ordered_json bayes_to_json(const BayesPosterior& posterior) {
  nlohmann::ordered_json j;
  j["theta_left"] = posterior.theta_left;
  j["theta_rope"] = posterior.theta_rope;
  j["theta_right"] = posterior.theta_right;
  j["se_left"] = posterior.se_left;
  j["se_rope"] = posterior.se_rope;
  j["se_right"] = posterior.se_right;
  j["win_left"] = posterior.win_left;
  j["win_rope"] = posterior.win_rope;
  j["win_right"] = posterior.win_right;
  j["mc_samples"] = posterior.mc_samples_used;
  return j;
}

nlohmann::ordered_json pairwise_to_json(const PairwiseComparison& cell) {
  nlohmann::ordered_json j;
  j["row"] = cell.row;
  j["col"] = cell.column;
  j["mean_diff"] = cell.mean_difference;
  j["wins"] = cell.wins;
  j["ties"] = cell.ties;
  j["losses"] = cell.losses;
  j["p"] = cell.p_value;
  j["p_method"] = std::string(to_string(cell.p_method));
  return j;
}

nlohmann::ordered_json report_to_json(const MCMReport& report) {
  nlohmann::ordered_json doc;
  std::vector<std::string> ordering;
  for (const auto& [name, value] : report.mean_performance) ordering.push_back(name);
  // Every listed comparate, best first, so the ordering is global even in a
  // focused layout.
  std::stable_sort(ordering.begin(), ordering.end(), [&](const std::string& a, const std::string& b) {
    const double ma = report.mean_of(a);
    const double mb = report.mean_of(b);
    if (ma != mb) return report.direction == Direction::HigherIsBetter ? ma > mb : ma < mb;
    return a < b;
  });
  doc["ordering"] = ordering;
  doc["rows"] = report.row_order;
  doc["columns"] = report.column_order;
  nlohmann::ordered_json means = nlohmann::ordered_json::object();
  for (const auto& name : ordering) means[name] = report.mean_of(name);
  doc["mean_performance"] = std::move(means);
  doc["alpha"] = report.alpha;
  doc["direction"] = std::string(to_string(report.direction));
  doc["tie_epsilon"] = report.tie_epsilon;
  doc["multiple_testing_correction"] = "none";
  doc["wilcoxon_zero_handling"] = "discard";
  doc["layout"] = report.all_pairs ? "all-pairs" : "focused";
  doc["comparison_count"] = report.comparison_count;
  doc["task_count"] = report.task_count;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& slot : report.cells) {
    if (!slot) continue;
    auto j = pairwise_to_json(slot->comparison);
    j["significant"] = slot->significant;
    if (slot->bayes) j["bayes"] = bayes_to_json(*slot->bayes);
    cells.push_back(std::move(j));
  }
  doc["cells"] = std::move(cells);
  if (report.bayes_config) {
    nlohmann::ordered_json b;
    b["rope"] = report.bayes_config->rope;
    b["prior_pseudo_observation"] = report.bayes_config->prior_pseudo_observation;
    b["prior_strength"] = report.bayes_config->prior_strength;
    b["mc_samples"] = report.bayes_config->mc_samples;
    b["seed"] = report.bayes_config->seed;
    doc["bayes_config"] = std::move(b);
  }
  return doc;
}

}  // namespace mcm
