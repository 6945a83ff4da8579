#include "mcm/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mcm/error.hpp"
#include "mcm/parallel.hpp"
#include "mcm/random.hpp"

namespace mcm {

namespace {

constexpr std::size_t kBlock = 4096;

void validate(std::span<const double> diffs, const BayesConfig& config) {
  if (diffs.empty()) throw Error(ErrorCode::EmptyInput, "Bayesian signed-rank test needs differences");
  for (double d : diffs) {
    if (!std::isfinite(d)) throw Error(ErrorCode::InvalidConfig, "differences must be finite");
  }
  if (!(config.rope >= 0.0) || !std::isfinite(config.rope)) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("rope must be finite and >= 0, got {}", config.rope));
  }
  if (!(config.prior_strength > 0.0) || !std::isfinite(config.prior_strength)) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("prior strength must be > 0, got {}", config.prior_strength));
  }
  if (!std::isfinite(config.prior_pseudo_observation)) {
    throw Error(ErrorCode::InvalidConfig, "prior pseudo observation must be finite");
  }
  if (config.mc_samples < 1) throw Error(ErrorCode::InvalidConfig, "mc_samples must be >= 1");
}

// z sorted ascending together with, for each sorted position a, the region
// boundaries over sorted positions b: [0, left_end) has z_a + z_b < -2r and
// [right_begin, size) has z_a + z_b > 2r. Floating-point addition is monotone
// in each argument, so both regions are contiguous.
struct PreparedSums {
  std::vector<std::size_t> order;  // sorted position -> index into z
  std::vector<std::size_t> left_end;
  std::vector<std::size_t> right_begin;
};

PreparedSums prepare(const std::vector<double>& z, double rope) {
  const std::size_t q = z.size();
  const double bound = 2.0 * rope;
  PreparedSums p;
  p.order.resize(q);
  std::iota(p.order.begin(), p.order.end(), std::size_t{0});
  std::stable_sort(p.order.begin(), p.order.end(), [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  std::vector<double> sorted(q);
  for (std::size_t k = 0; k < q; ++k) sorted[k] = z[p.order[k]];

  p.left_end.resize(q);
  p.right_begin.resize(q);
  for (std::size_t a = 0; a < q; ++a) {
    const double za = sorted[a];
    p.left_end[a] = static_cast<std::size_t>(
        std::partition_point(sorted.begin(), sorted.end(), [&](double zb) { return za + zb < -bound; }) -
        sorted.begin());
    p.right_begin[a] = static_cast<std::size_t>(
        std::partition_point(sorted.begin(), sorted.end(), [&](double zb) { return !(za + zb > bound); }) -
        sorted.begin());
  }
  return p;
}

std::vector<double> draw_weights(const BayesConfig& config, std::size_t sample, std::size_t count) {
  Xoshiro256 rng(config.seed, sample);
  std::vector<double> w(count);
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    w[i] = gamma_variate(rng, i == 0 ? config.prior_strength : 1.0);
    total += w[i];
  }
  for (auto& x : w) x /= total;
  return w;
}

ThetaTriple one_draw(const PreparedSums& p, const BayesConfig& config, std::size_t sample) {
  const std::size_t q = p.order.size();
  const auto w = draw_weights(config, sample, q);
  std::vector<double> prefix(q + 1, 0.0);
  for (std::size_t k = 0; k < q; ++k) prefix[k + 1] = prefix[k] + w[p.order[k]];

  double left = 0.0;
  double right = 0.0;
  for (std::size_t a = 0; a < q; ++a) {
    const double wa = w[p.order[a]];
    left += wa * prefix[p.left_end[a]];
    right += wa * (prefix[q] - prefix[p.right_begin[a]]);
  }
  // The rope takes the remainder, which makes (left + right) + rope == 1.0
  // exactly in floating point.
  ThetaTriple t;
  t.left = std::min(left, 1.0);
  t.right = right;
  if (t.left + t.right > 1.0) t.right = 1.0 - t.left;
  t.rope = 1.0 - (t.left + t.right);
  return t;
}

std::vector<double> build_z(std::span<const double> diffs, const BayesConfig& config) {
  std::vector<double> z;
  z.reserve(diffs.size() + 1);
  z.push_back(config.prior_pseudo_observation);
  z.insert(z.end(), diffs.begin(), diffs.end());
  return z;
}

struct BlockSums {
  double sum[3] = {0, 0, 0};
  double sum_sq[3] = {0, 0, 0};
  std::size_t wins[3] = {0, 0, 0};
};

}  // namespace

std::vector<double> dirichlet_weights(const BayesConfig& config, std::size_t sample, std::size_t count) {
  return draw_weights(config, sample, count);
}

std::vector<ThetaTriple> bayesian_signed_rank_draws(std::span<const double> diffs,
                                                    const BayesConfig& config, std::size_t count) {
  validate(diffs, config);
  const auto prepared = prepare(build_z(diffs, config), config.rope);
  std::vector<ThetaTriple> out(count);
  for (std::size_t s = 0; s < count; ++s) out[s] = one_draw(prepared, config, s);
  return out;
}

BayesPosterior bayesian_signed_rank(std::span<const double> diffs, const BayesConfig& config,
                                    std::size_t workers) {
  validate(diffs, config);
  const auto prepared = prepare(build_z(diffs, config), config.rope);
  const std::size_t samples = config.mc_samples;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<BlockSums> partial(blocks);

  parallel_for(blocks, workers, [&](std::size_t b) {
    BlockSums& acc = partial[b];
    const std::size_t end = std::min(samples, (b + 1) * kBlock);
    for (std::size_t s = b * kBlock; s < end; ++s) {
      const ThetaTriple t = one_draw(prepared, config, s);
      const double v[3] = {t.left, t.rope, t.right};
      for (int k = 0; k < 3; ++k) {
        acc.sum[k] += v[k];
        acc.sum_sq[k] += v[k] * v[k];
      }
      // Ties for the largest region go to the rope, then to the first listed.
      int best = 1;
      if (v[0] > v[best]) best = 0;
      if (v[2] > v[best]) best = 2;
      ++acc.wins[best];
    }
  });

  // Blocks are reduced in index order, so the result does not depend on how
  // blocks were distributed over workers.
  BlockSums total;
  for (const auto& blk : partial) {
    for (int k = 0; k < 3; ++k) {
      total.sum[k] += blk.sum[k];
      total.sum_sq[k] += blk.sum_sq[k];
      total.wins[k] += blk.wins[k];
    }
  }
  const auto n = static_cast<double>(samples);
  double mean[3];
  double se[3];
  for (int k = 0; k < 3; ++k) {
    mean[k] = total.sum[k] / n;
    const double var = samples > 1 ? std::max(0.0, (total.sum_sq[k] - n * mean[k] * mean[k]) / (n - 1.0)) : 0.0;
    se[k] = std::sqrt(var / n);
  }
  BayesPosterior post;
  post.theta_left = mean[0];
  post.theta_rope = mean[1];
  post.theta_right = mean[2];
  post.se_left = se[0];
  post.se_rope = se[1];
  post.se_right = se[2];
  post.win_left = static_cast<double>(total.wins[0]) / n;
  post.win_rope = static_cast<double>(total.wins[1]) / n;
  post.win_right = static_cast<double>(total.wins[2]) / n;
  post.mc_samples_used = samples;
  return post;
}

}  // namespace mcm
