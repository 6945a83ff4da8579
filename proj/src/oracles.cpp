#include "mcm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace mcm::oracle {

double wilcoxon_enumeration_p(std::span<const double> diffs) {
  std::vector<double> nz;
  for (double d : diffs) {
    if (d != 0.0) nz.push_back(d);
  }
  const std::size_t k = nz.size();
  if (k == 0) return 1.0;
  if (k > 24) throw std::invalid_argument("enumeration oracle limited to 24 nonzero differences");

  std::vector<double> rank(k);
  for (std::size_t i = 0; i < k; ++i) {
    double less = 0.0;
    double same = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (std::fabs(nz[j]) < std::fabs(nz[i])) less += 1.0;
      else if (std::fabs(nz[j]) == std::fabs(nz[i])) same += 1.0;
    }
    rank[i] = less + (same + 1.0) / 2.0;
  }
  double observed = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (nz[i] > 0) observed += rank[i];
  }

  std::uint64_t at_most = 0;
  std::uint64_t at_least = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t signs = 0; signs < total; ++signs) {
    double w = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if ((signs >> i) & 1U) w += rank[i];
    }
    if (w <= observed) ++at_most;
    if (w >= observed) ++at_least;
  }
  const double tail = static_cast<double>(std::min(at_most, at_least)) / static_cast<double>(total);
  return std::min(1.0, 2.0 * tail);
}

std::vector<double> holm_thresholds(std::span<const double> p_values, double alpha) {
  const std::size_t n = p_values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
  std::vector<double> out(n);
  for (std::size_t pos = 0; pos < n; ++pos) out[order[pos]] = alpha / static_cast<double>(n - pos);
  return out;
}

std::vector<bool> holm(std::span<const double> p_values, double alpha) {
  const std::size_t n = p_values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
  std::vector<bool> out(n, false);
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (p_values[order[pos]] > alpha / static_cast<double>(n - pos)) break;
    out[order[pos]] = true;
  }
  // Equal p values share one decision; under the step-down stop rule the
  // first of a tied run decides for the rest.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (p_values[i] == p_values[j] && out[j]) out[i] = true;
    }
  }
  return out;
}

std::vector<double> sorted_ranks(const ResultsMatrix& matrix) {
  const std::size_t m = matrix.comparate_count();
  const std::size_t n = matrix.task_count();
  std::vector<double> ranks(m * n);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return matrix.better(matrix.score(a, t), matrix.score(b, t)); });
    std::size_t start = 0;
    while (start < m) {
      std::size_t end = start + 1;
      while (end < m && matrix.score(order[end], t) == matrix.score(order[start], t)) ++end;
      const double shared = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
      for (std::size_t p = start; p < end; ++p) ranks[order[p] * n + t] = shared;
      start = end;
    }
  }
  return ranks;
}

double friedman_statistic(const ResultsMatrix& matrix) {
  const double m = static_cast<double>(matrix.comparate_count());
  const double n = static_cast<double>(matrix.task_count());
  const auto ranks = sorted_ranks(matrix);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < matrix.comparate_count(); ++i) {
    double r = 0.0;
    for (std::size_t t = 0; t < matrix.task_count(); ++t) r += ranks[i * matrix.task_count() + t];
    sum_sq += r * r;
  }
  double ties = 0.0;
  for (std::size_t t = 0; t < matrix.task_count(); ++t) {
    std::vector<double> col;
    for (std::size_t i = 0; i < matrix.comparate_count(); ++i) col.push_back(matrix.score(i, t));
    std::sort(col.begin(), col.end());
    std::size_t s = 0;
    while (s < col.size()) {
      std::size_t e = s + 1;
      while (e < col.size() && col[e] == col[s]) ++e;
      const double g = static_cast<double>(e - s);
      ties += g * g * g - g;
      s = e;
    }
  }
  const double correction = 1.0 - ties / (n * (m * m * m - m));
  if (correction <= 0.0) return 0.0;
  const double chi = 12.0 / (n * m * (m + 1.0)) * sum_sq - 3.0 * n * (m + 1.0);
  return chi / correction;
}

Theta bayes_double_sum(std::span<const double> z, std::span<const double> weights, double rope) {
  Theta t;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      const double s = z[i] + z[j];
      const double w = weights[i] * weights[j];
      if (s < -2.0 * rope) t.left += w;
      else if (s > 2.0 * rope) t.right += w;
      else t.rope += w;
    }
  }
  return t;
}

namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(range of m iid standard normals <= q).
double range_cdf(double q, std::size_t m) {
  constexpr int steps = 4000;
  constexpr double lo = -9.0;
  constexpr double hi = 9.0;
  const double h = (hi - lo) / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double z = lo + h * i;
    const double f = normal_pdf(z) * std::pow(normal_cdf(z + q) - normal_cdf(z), static_cast<double>(m - 1));
    const double weight = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * f;
  }
  return static_cast<double>(m) * sum * h / 3.0;
}

}  // namespace

double nemenyi_q_quadrature(std::size_t m, double alpha) {
  double lo = 0.0;
  double hi = 12.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (range_cdf(mid, m) < 1.0 - alpha) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(2.0);
}

}  // namespace mcm::oracle
