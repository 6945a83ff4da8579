#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mcm {

struct BayesConfig {
  /// Half-width of the region of practical equivalence: a pair of
  /// observations with |z_i + z_j| <= 2 * rope counts as "no difference".
  double rope = 0.01;
  double prior_pseudo_observation = 0.0;  ///< z_0
  double prior_strength = 1.0;            ///< s, Dirichlet weight of z_0
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
};

/// Three-way probabilities for one Monte Carlo draw of the weights.
struct ThetaTriple {
  double left = 0.0;   ///< z_i + z_j < -2r: column better
  double rope = 0.0;   ///< -2r <= z_i + z_j <= 2r
  double right = 0.0;  ///< z_i + z_j > 2r: row better
};

/// Monte Carlo summary. Differences are oriented row minus column, so
/// "right" means the row comparate is meaningfully better.
struct BayesPosterior {
  double theta_left = 0.0;
  double theta_rope = 0.0;
  double theta_right = 0.0;
  /// Monte Carlo standard errors of the three means.
  double se_left = 0.0;
  double se_rope = 0.0;
  double se_right = 0.0;
  /// Fraction of draws in which each region carries the largest probability.
  double win_left = 0.0;
  double win_rope = 0.0;
  double win_right = 0.0;
  std::size_t mc_samples_used = 0;

  friend bool operator==(const BayesPosterior&, const BayesPosterior&) = default;
};

/// Bayesian signed-rank test. z = [z_0, diffs...] and for every draw
/// w ~ Dirichlet(s, 1, ..., 1) the probabilities are the w_i w_j weighted
/// double sums of region indicators over z_i + z_j. Boundary sums fall in
/// the rope. Output is a pure function of (diffs, config); `workers` only
/// changes wall time.
BayesPosterior bayesian_signed_rank(std::span<const double> diffs, const BayesConfig& config,
                                    std::size_t workers = 1);

/// Per-draw triples for the first `count` Monte Carlo samples, exactly as
/// accumulated by bayesian_signed_rank.
std::vector<ThetaTriple> bayesian_signed_rank_draws(std::span<const double> diffs,
                                                    const BayesConfig& config, std::size_t count);

/// Dirichlet(s, 1, ..., 1) weights of draw `sample` over count components,
/// in the order of z (z_0 first).
std::vector<double> dirichlet_weights(const BayesConfig& config, std::size_t sample,
                                      std::size_t count);

}  // namespace mcm
