#pragma once

// Slow reference implementations used to cross-check the library. Each one
// follows the textbook definition as literally as possible and shares no code
// with the production kernels.

#include <cstddef>
#include <span>
#include <vector>

#include "mcm/results_matrix.hpp"

namespace mcm::oracle {

/// Two-sided signed-rank p by enumerating all 2^k sign assignments of the k
/// nonzero differences (k <= 24). Returns 1 when every difference is zero.
double wilcoxon_enumeration_p(std::span<const double> diffs);

/// Holm step-down on p values in their given order.
std::vector<bool> holm(std::span<const double> p_values, double alpha);
std::vector<double> holm_thresholds(std::span<const double> p_values, double alpha);

/// Ranks by sorting each task and averaging the tied positions.
/// ranks[i * n + j], 1 = best.
std::vector<double> sorted_ranks(const ResultsMatrix& matrix);

/// 12 / (n m (m + 1)) * sum R_j^2 - 3 n (m + 1), divided by the tie
/// correction 1 - sum(t^3 - t) / (n (m^3 - m)).
double friedman_statistic(const ResultsMatrix& matrix);

struct Theta {
  double left = 0.0;
  double rope = 0.0;
  double right = 0.0;
};

/// The weighted double sum over all (i, j) for one weight vector, z[0] being
/// the pseudo observation.
Theta bayes_double_sum(std::span<const double> z, std::span<const double> weights, double rope);

/// Upper-alpha point of the range of m standard normals, divided by sqrt(2),
/// by numerical integration and bisection.
double nemenyi_q_quadrature(std::size_t m, double alpha);

}  // namespace mcm::oracle
