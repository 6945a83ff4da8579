#include <gtest/gtest.h>

#include <cmath>

#include "mcm/bayes.hpp"
#include "mcm/error.hpp"
#include "mcm/oracles.hpp"
#include "test_util.hpp"

using namespace mcm;

namespace {

BayesConfig config(std::size_t samples, std::uint64_t seed, double rope = 0.01) {
  BayesConfig c;
  c.mc_samples = samples;
  c.seed = seed;
  c.rope = rope;
  return c;
}

}  // namespace

TEST(Bayes, AllPositiveConcentratesRight) {
  const std::vector<double> d(30, 10.0);
  const auto post = bayesian_signed_rank(d, config(20000, 1));
  // Only the (z0, z0) term lands in the rope, so theta_rope = E[w0^2]
  // = 2 / ((q + 1)(q + 2)) under Dirichlet(1, ..., 1).
  const double expected_rope = 2.0 / (31.0 * 32.0);
  EXPECT_GE(post.theta_right, 0.99);
  EXPECT_EQ(post.theta_left, 0.0);
  EXPECT_NEAR(post.theta_rope, expected_rope, 4 * post.se_rope);
  EXPECT_EQ(post.win_right, 1.0);
}

TEST(Bayes, SymmetricInputBalances) {
  std::vector<double> d;
  for (int k = 1; k <= 10; ++k) {
    d.push_back(0.01 * k);
    d.push_back(-0.01 * k);
  }
  const auto post = bayesian_signed_rank(d, config(50000, 7, 0.0));
  EXPECT_LE(std::fabs(post.theta_left - post.theta_right), 3 * (post.se_left + post.se_right));
}

TEST(Bayes, DrawsSumToOneExactly) {
  Xoshiro256 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto d = testutil::random_diffs(rng, 1 + rng.below(40), 6);
    for (auto& x : d) x *= 0.013;
    const auto draws = bayesian_signed_rank_draws(d, config(200, trial, 0.02), 200);
    for (const auto& t : draws) {
      EXPECT_EQ((t.left + t.right) + t.rope, 1.0);
      EXPECT_GE(t.left, 0.0);
      EXPECT_GE(t.rope, 0.0);
      EXPECT_GE(t.right, 0.0);
    }
  }
}

TEST(Bayes, DrawsMatchDoubleSumOracle) {
  Xoshiro256 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    auto d = testutil::random_diffs(rng, 1 + rng.below(25), 4);
    for (auto& x : d) x *= 0.01;  // many sums land exactly on +-2r
    auto cfg = config(100, trial, 0.01);
    cfg.prior_pseudo_observation = trial % 3 == 0 ? 0.005 : 0.0;
    cfg.prior_strength = trial % 2 ? 1.0 : 2.5;
    const auto draws = bayesian_signed_rank_draws(d, cfg, 100);
    std::vector<double> z{cfg.prior_pseudo_observation};
    z.insert(z.end(), d.begin(), d.end());
    for (std::size_t s = 0; s < draws.size(); ++s) {
      const auto w = dirichlet_weights(cfg, s, z.size());
      const auto o = oracle::bayes_double_sum(z, w, cfg.rope);
      EXPECT_NEAR(draws[s].left, o.left, 1e-12);
      EXPECT_NEAR(draws[s].rope, o.rope, 1e-12);
      EXPECT_NEAR(draws[s].right, o.right, 1e-12);
    }
  }
}

TEST(Bayes, BoundarySumsCountAsRope) {
  // z = [0, 0.02]: every pairwise sum is 0, 0.02 or 0.04 against 2r = 0.02 or
  // 0.04 for r = 0.01 or 0.02.
  const std::vector<double> d{0.02};
  const auto draws = bayesian_signed_rank_draws(d, config(50, 2, 0.02), 50);
  for (std::size_t s = 0; s < draws.size(); ++s) {
    EXPECT_EQ(draws[s].right, 0.0);
    EXPECT_EQ(draws[s].left, 0.0);
  }
}

TEST(Bayes, MeansMatchDrawAverages) {
  const std::vector<double> d{0.03, -0.01, 0.02, 0.05, 0.0, -0.04, 0.015};
  const auto cfg = config(5000, 11);
  const auto post = bayesian_signed_rank(d, cfg);
  const auto draws = bayesian_signed_rank_draws(d, cfg, cfg.mc_samples);
  double l = 0, r = 0, e = 0;
  for (const auto& t : draws) {
    l += t.left;
    r += t.right;
    e += t.rope;
  }
  const double n = static_cast<double>(draws.size());
  EXPECT_NEAR(post.theta_left, l / n, 1e-12);
  EXPECT_NEAR(post.theta_right, r / n, 1e-12);
  EXPECT_NEAR(post.theta_rope, e / n, 1e-12);
  EXPECT_NEAR(post.theta_left + post.theta_rope + post.theta_right, 1.0, 1e-9);
  EXPECT_NEAR(post.win_left + post.win_rope + post.win_right, 1.0, 1e-12);
  EXPECT_EQ(post.mc_samples_used, 5000u);
}

TEST(Bayes, SeedDeterminismAndThreadIndependence) {
  const std::vector<double> d{0.03, -0.01, 0.02, 0.05, 0.0, -0.04, 0.015, 0.2, -0.03};
  const auto cfg = config(30000, 99);
  const auto a = bayesian_signed_rank(d, cfg, 1);
  EXPECT_EQ(a, bayesian_signed_rank(d, cfg, 1));
  EXPECT_EQ(a, bayesian_signed_rank(d, cfg, 3));
  EXPECT_EQ(a, bayesian_signed_rank(d, cfg, 8));
  EXPECT_NE(a, bayesian_signed_rank(d, config(30000, 100)));
}

TEST(Bayes, ScalingInvariance) {
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = testutil::random_diffs(rng, 1 + rng.below(30), 5);
    const auto ref = bayesian_signed_rank(base, config(2000, trial, 0.5));
    for (double factor : {0.25, 2.0, 1024.0, 3.0, 7.0}) {
      std::vector<double> scaled = base;
      for (auto& x : scaled) x *= factor;
      const auto got = bayesian_signed_rank(scaled, config(2000, trial, 0.5 * factor));
      EXPECT_EQ(got, ref) << factor;
    }
  }
}

TEST(Bayes, DoublingSamplesStaysWithinThreeSe) {
  const std::vector<double> d{0.03, -0.01, 0.02, 0.05, 0.0, -0.04, 0.015, 0.011, -0.002, 0.03};
  const auto small = bayesian_signed_rank(d, config(20000, 3));
  const auto large = bayesian_signed_rank(d, config(40000, 3));
  EXPECT_LT(std::fabs(large.theta_left - small.theta_left), 3 * small.se_left);
  EXPECT_LT(std::fabs(large.theta_rope - small.theta_rope), 3 * small.se_rope);
  EXPECT_LT(std::fabs(large.theta_right - small.theta_right), 3 * small.se_right);
}

TEST(Bayes, DirichletWeights) {
  auto cfg = config(1, 8);
  cfg.prior_strength = 3.0;
  double mean0 = 0.0;
  for (std::size_t s = 0; s < 4000; ++s) {
    const auto w = dirichlet_weights(cfg, s, 5);
    double total = 0;
    for (double x : w) {
      EXPECT_GT(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    mean0 += w[0];
  }
  // E[w0] = s / (s + 4)
  EXPECT_NEAR(mean0 / 4000, 3.0 / 7.0, 0.01);
}

TEST(Bayes, Validation) {
  auto code = [](std::vector<double> d, BayesConfig c) {
    try {
      bayesian_signed_rank(d, c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Parse;
  };
  BayesConfig ok;
  ok.mc_samples = 10;
  EXPECT_EQ(code({}, ok), ErrorCode::EmptyInput);
  auto bad = ok;
  bad.rope = -1;
  EXPECT_EQ(code({1}, bad), ErrorCode::InvalidConfig);
  bad = ok;
  bad.prior_strength = 0;
  EXPECT_EQ(code({1}, bad), ErrorCode::InvalidConfig);
  bad = ok;
  bad.mc_samples = 0;
  EXPECT_EQ(code({1}, bad), ErrorCode::InvalidConfig);
  EXPECT_EQ(code({std::nan("")}, ok), ErrorCode::InvalidConfig);
}
