#include "mcm/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "mcm/error.hpp"

namespace mcm {

RankTable compute_ranks(const ResultsMatrix& matrix) {
  const std::size_t m = matrix.comparate_count();
  const std::size_t n = matrix.task_count();
  RankTable table;
  table.comparate_count = m;
  table.task_count = n;
  table.ranks.assign(m * n, 0.0);
  table.average_ranks.assign(m, 0.0);

  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      const double mine = matrix.score(i, t);
      std::size_t better = 0;
      std::size_t equal = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const double other = matrix.score(j, t);
        if (matrix.better(other, mine)) {
          ++better;
        } else if (other == mine) {
          ++equal;
        }
      }
      table.ranks[i * n + t] = 1.0 + static_cast<double>(better) + 0.5 * static_cast<double>(equal);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) sum += table.ranks[i * n + t];
    table.average_ranks[i] = sum / static_cast<double>(n);
  }
  return table;
}

std::string_view to_string(PMethod method) noexcept {
  switch (method) {
    case PMethod::Exact: return "exact";
    case PMethod::NormalApproximation: return "normal";
    case PMethod::Degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

// Nonzero differences ranked by magnitude. Ranks are stored doubled so that
// averaged ranks of ties stay integral.
struct SignedRanks {
  std::vector<std::int64_t> doubled_ranks;
  std::int64_t doubled_w_plus = 0;
  std::vector<std::size_t> tie_sizes;
};

SignedRanks rank_nonzero(std::span<const double> diffs) {
  std::vector<double> nonzero;
  nonzero.reserve(diffs.size());
  for (double d : diffs) {
    if (d != 0.0) nonzero.push_back(d);
  }
  std::sort(nonzero.begin(), nonzero.end(),
            [](double a, double b) { return std::fabs(a) < std::fabs(b); });

  SignedRanks out;
  out.doubled_ranks.resize(nonzero.size());
  std::size_t i = 0;
  while (i < nonzero.size()) {
    std::size_t j = i + 1;
    while (j < nonzero.size() && std::fabs(nonzero[j]) == std::fabs(nonzero[i])) ++j;
    // positions i+1 .. j share (i+1+j)/2; doubled that is i+1+j.
    const auto doubled = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      out.doubled_ranks[k] = doubled;
      if (nonzero[k] > 0.0) out.doubled_w_plus += doubled;
    }
    out.tie_sizes.push_back(j - i);
    i = j;
  }
  return out;
}

double exact_p(const SignedRanks& sr) {
  const std::int64_t total =
      std::accumulate(sr.doubled_ranks.begin(), sr.doubled_ranks.end(), std::int64_t{0});
  // counts[s]: number of sign assignments whose doubled W+ equals s.
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
  counts[0] = 1;
  std::int64_t reach = 0;
  for (const auto r : sr.doubled_ranks) {
    for (std::int64_t s = reach; s >= 0; --s) {
      if (counts[s] != 0) counts[s + r] += counts[s];
    }
    reach += r;
  }
  std::uint64_t at_most = 0;
  std::uint64_t at_least = 0;
  for (std::int64_t s = 0; s <= total; ++s) {
    if (s <= sr.doubled_w_plus) at_most += counts[s];
    if (s >= sr.doubled_w_plus) at_least += counts[s];
  }
  const double space = std::ldexp(1.0, static_cast<int>(sr.doubled_ranks.size()));
  const double tail = static_cast<double>(std::min(at_most, at_least));
  return std::min(1.0, 2.0 * tail / space);
}

double normal_p(const SignedRanks& sr) {
  const auto k = static_cast<double>(sr.doubled_ranks.size());
  const double mean = k * (k + 1.0) / 4.0;
  double tie_term = 0.0;
  for (auto t : sr.tie_sizes) {
    const auto td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double variance = k * (k + 1.0) * (2.0 * k + 1.0) / 24.0 - tie_term / 48.0;
  double d = static_cast<double>(sr.doubled_w_plus) / 2.0 - mean;
  if (d > 0.0) {
    d -= 0.5;
  } else if (d < 0.0) {
    d += 0.5;
  }
  const double z = d / std::sqrt(variance);
  return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, WilcoxonOptions options) {
  if (diffs.empty()) throw Error(ErrorCode::EmptyInput, "Wilcoxon test needs at least one difference");
  const SignedRanks sr = rank_nonzero(diffs);
  WilcoxonResult result;
  result.nonzero = sr.doubled_ranks.size();
  result.w_plus = static_cast<double>(sr.doubled_w_plus) / 2.0;
  if (result.nonzero == 0) {
    result.p_value = 1.0;
    result.method = PMethod::Degenerate;
  } else if (result.nonzero <= options.exact_threshold) {
    result.p_value = exact_p(sr);
    result.method = PMethod::Exact;
  } else {
    result.p_value = normal_p(sr);
    result.method = PMethod::NormalApproximation;
  }
  return result;
}

double wilcoxon_exact_p(std::span<const double> diffs) {
  const SignedRanks sr = rank_nonzero(diffs);
  if (sr.doubled_ranks.empty()) throw Error(ErrorCode::EmptyInput, "no nonzero differences");
  if (sr.doubled_ranks.size() > 62) {
    throw Error(ErrorCode::InvalidConfig, "exact Wilcoxon limited to 62 nonzero differences");
  }
  return exact_p(sr);
}

double wilcoxon_normal_p(std::span<const double> diffs) {
  const SignedRanks sr = rank_nonzero(diffs);
  if (sr.doubled_ranks.empty()) throw Error(ErrorCode::EmptyInput, "no nonzero differences");
  return normal_p(sr);
}

std::vector<double> oriented_differences(const ResultsMatrix& matrix, std::size_t row,
                                         std::size_t column) {
  std::vector<double> diffs(matrix.task_count());
  const bool higher = matrix.direction() == Direction::HigherIsBetter;
  for (std::size_t t = 0; t < diffs.size(); ++t) {
    const double a = matrix.score(row, t);
    const double b = matrix.score(column, t);
    diffs[t] = higher ? a - b : b - a;
  }
  return diffs;
}

PairwiseComparison pairwise_comparison(const ResultsMatrix& matrix, std::string_view row,
                                       std::string_view column, PairwiseOptions options) {
  const std::size_t r = matrix.index_of(row);
  const std::size_t c = matrix.index_of(column);
  if (r == c) throw Error(ErrorCode::SameComparate, fmt::format("'{}' compared with itself", row));
  if (!(options.tie_epsilon >= 0.0)) throw Error(ErrorCode::InvalidConfig, "tie_epsilon must be >= 0");

  const auto diffs = oriented_differences(matrix, r, c);
  PairwiseComparison out;
  out.row = std::string(row);
  out.column = std::string(column);
  double sum = 0.0;
  for (double d : diffs) {
    sum += d;
    if (std::fabs(d) <= options.tie_epsilon) {
      ++out.ties;
    } else if (d > 0.0) {
      ++out.wins;
    } else {
      ++out.losses;
    }
  }
  out.mean_difference = sum / static_cast<double>(diffs.size());
  const auto w = wilcoxon_signed_rank(diffs, options.wilcoxon);
  out.p_value = w.p_value;
  out.p_method = w.method;
  return out;
}

FriedmanResult friedman_test(const ResultsMatrix& matrix) {
  const std::size_t m = matrix.comparate_count();
  const std::size_t n = matrix.task_count();
  if (m < 3) throw Error(ErrorCode::TooFewComparates, "Friedman test needs at least 3 comparates");
  if (n < 2) throw Error(ErrorCode::TooFewTasks, "Friedman test needs at least 2 tasks");

  const RankTable ranks = compute_ranks(matrix);
  // Everything below is exact integer arithmetic on doubled ranks, so the
  // statistic does not depend on the order comparates are listed in.
  std::int64_t sum_sq = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::int64_t doubled = 0;
    for (std::size_t t = 0; t < n; ++t) doubled += std::llround(2.0 * ranks.rank(i, t));
    sum_sq += doubled * doubled;
  }
  std::int64_t tie_sum = 0;
  std::vector<double> column(m);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < m; ++i) column[i] = matrix.score(i, t);
    std::sort(column.begin(), column.end());
    std::size_t i = 0;
    while (i < m) {
      std::size_t j = i + 1;
      while (j < m && column[j] == column[i]) ++j;
      const auto g = static_cast<std::int64_t>(j - i);
      tie_sum += g * g * g - g;
      i = j;
    }
  }
  const auto mm = static_cast<std::int64_t>(m);
  const auto nn = static_cast<std::int64_t>(n);
  // sum_sq = sum_j (2 R_j)^2, so sum_j R_j^2 = sum_sq / 4 and
  // chi2 = 3 (sum_sq - n^2 m (m+1)^2) (m-1) / (n m (m^2-1) - ties).
  const std::int64_t numerator = sum_sq - nn * nn * mm * (mm + 1) * (mm + 1);
  const std::int64_t denominator = nn * mm * (mm * mm - 1) - tie_sum;

  FriedmanResult result;
  result.degrees_of_freedom = m - 1;
  if (denominator <= 0 || numerator <= 0) {
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  result.statistic = 3.0 * static_cast<double>(numerator) * static_cast<double>(mm - 1) /
                     static_cast<double>(denominator);
  result.p_value = boost::math::gamma_q(static_cast<double>(m - 1) / 2.0, result.statistic / 2.0);
  return result;
}

namespace {

// Two-tailed Nemenyi critical values q_alpha for k = 2 .. 20 comparates:
// the studentized range quantile at infinite degrees of freedom over sqrt(2).
// The full table is reproduced in docs/nemenyi_constants.md.
constexpr std::array<double, 19> kQ05 = {
    1.959964233, 2.343700476, 2.569032073, 2.727774717, 2.849705382, 2.948319908, 3.030878867,
    3.101730260, 3.163683420, 3.218653901, 3.268003591, 3.312738701, 3.353617959, 3.391230382,
    3.426041249, 3.458424619, 3.488684546, 3.517072762, 3.543799277};
constexpr std::array<double, 19> kQ10 = {
    1.644853627, 2.052293941, 2.291341859, 2.459516094, 2.588520565, 2.692731194, 2.779883704,
    2.854606249, 2.919888484, 2.977768437, 3.029694159, 3.076733726, 3.119693752, 3.159198623,
    3.195743149, 3.229723255, 3.261461718, 3.291224969, 3.319233204};

}  // namespace

NemenyiAlpha nemenyi_alpha(double alpha) {
  if (std::fabs(alpha - 0.05) < 1e-12) return NemenyiAlpha::P05;
  if (std::fabs(alpha - 0.10) < 1e-12) return NemenyiAlpha::P10;
  throw Error(ErrorCode::UnsupportedAlpha,
              fmt::format("Nemenyi constants exist only for alpha 0.05 and 0.10, got {}", alpha));
}

double nemenyi_q(std::size_t m, NemenyiAlpha alpha) {
  if (m < 2 || m > kNemenyiMaxComparates) {
    throw Error(ErrorCode::MOutOfTableRange,
                fmt::format("Nemenyi table covers 2..{} comparates, got {}", kNemenyiMaxComparates, m));
  }
  return (alpha == NemenyiAlpha::P05 ? kQ05 : kQ10)[m - 2];
}

double nemenyi_critical_difference(std::size_t m, std::size_t n, NemenyiAlpha alpha) {
  if (n == 0) throw Error(ErrorCode::TooFewTasks, "critical difference needs at least one task");
  const double q = nemenyi_q(m, alpha);
  const auto md = static_cast<double>(m);
  return q * std::sqrt(md * (md + 1.0) / (6.0 * static_cast<double>(n)));
}

std::vector<HolmDecision> holm_correction(std::span<const HolmInput> pairs, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, fmt::format("alpha must lie in (0, 1), got {}", alpha));
  }
  for (const auto& p : pairs) {
    if (!(p.p_value >= 0.0 && p.p_value <= 1.0)) {
      throw Error(ErrorCode::InvalidP, fmt::format("p value {} for '{}' is outside [0, 1]", p.p_value, p.id));
    }
  }
  const std::size_t count = pairs.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pairs[a].p_value != pairs[b].p_value) return pairs[a].p_value < pairs[b].p_value;
    return pairs[a].id < pairs[b].id;
  });

  std::vector<HolmDecision> out(count);
  bool still_rejecting = true;
  for (std::size_t pos = 0; pos < count; ++pos) {
    const std::size_t idx = order[pos];
    HolmDecision& d = out[idx];
    d.id = pairs[idx].id;
    d.position = pos + 1;
    d.adjusted_threshold = alpha / static_cast<double>(count - pos);
    if (still_rejecting && pairs[idx].p_value <= d.adjusted_threshold) {
      d.significant = true;
    } else {
      still_rejecting = false;
    }
  }
  // Equal p values get one decision: significant if any of them was.
  std::size_t i = 0;
  while (i < count) {
    std::size_t j = i + 1;
    while (j < count && pairs[order[j]].p_value == pairs[order[i]].p_value) ++j;
    bool any = false;
    for (std::size_t k = i; k < j; ++k) any = any || out[order[k]].significant;
    for (std::size_t k = i; k < j; ++k) out[order[k]].significant = any;
    i = j;
  }
  return out;
}

std::vector<bool> holm_significance(std::span<const double> p_values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, fmt::format("alpha must lie in (0, 1), got {}", alpha));
  }
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidP, fmt::format("p value {} is outside [0, 1]", p));
  }
  const std::size_t count = p_values.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_values[a] < p_values[b] || (p_values[a] == p_values[b] && a < b);
  });
  std::vector<bool> out(count, false);
  for (std::size_t pos = 0; pos < count; ++pos) {
    const double p = p_values[order[pos]];
    if (p > alpha / static_cast<double>(count - pos)) break;
    out[order[pos]] = true;
  }
  return out;
}

std::string pair_id(std::string_view a, std::string_view b) {
  return a < b ? fmt::format("{}\t{}", a, b) : fmt::format("{}\t{}", b, a);
}

HolmFamily holm_all_pairs(const ResultsMatrix& matrix, double alpha, WilcoxonOptions options) {
  const std::size_t m = matrix.comparate_count();
  HolmFamily family;
  family.size = m;
  family.p_values.assign(m * m, 1.0);
  family.significant.assign(m * m, false);
  std::vector<HolmInput> inputs;
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto diffs = oriented_differences(matrix, a, b);
      const double p = wilcoxon_signed_rank(diffs, options).p_value;
      family.p_values[a * m + b] = family.p_values[b * m + a] = p;
      inputs.push_back({pair_id(matrix.comparates()[a], matrix.comparates()[b]), p});
      index.emplace_back(a, b);
    }
  }
  const auto decisions = holm_correction(inputs, alpha);
  for (std::size_t k = 0; k < decisions.size(); ++k) {
    const auto [a, b] = index[k];
    family.significant[a * m + b] = family.significant[b * m + a] = decisions[k].significant;
  }
  return family;
}

}  // namespace mcm
