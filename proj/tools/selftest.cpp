#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mcm/bayes.hpp"
#include "mcm/oracles.hpp"
#include "mcm/random.hpp"
#include "mcm/stats.hpp"

namespace mcm::cli {
namespace {

ResultsMatrix random_matrix(Xoshiro256& rng, std::size_t m, std::size_t n) {
  std::vector<std::string> comparates, tasks;
  for (std::size_t i = 0; i < m; ++i) comparates.push_back(fmt::format("c{}", i));
  for (std::size_t j = 0; j < n; ++j) tasks.push_back(fmt::format("t{}", j));
  std::vector<double> scores(m * n);
  // Coarse values so ties are common.
  for (auto& s : scores) s = static_cast<double>(rng.below(6)) / 5.0;
  return {comparates, tasks, scores, Direction::HigherIsBetter};
}

std::vector<double> random_diffs(Xoshiro256& rng, std::size_t k) {
  std::vector<double> d(k);
  for (auto& x : d) x = static_cast<double>(static_cast<int>(rng.below(9)) - 4);
  return d;
}

bool wilcoxon_check() {
  Xoshiro256 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = random_diffs(rng, 1 + rng.below(12));
    if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) continue;
    if (std::fabs(wilcoxon_exact_p(d) - oracle::wilcoxon_enumeration_p(d)) > 1e-12) return false;
  }
  return wilcoxon_signed_rank(std::vector<double>{0.0, 0.0}).p_value == 1.0;
}

bool holm_check() {
  const std::vector<double> a{0.01, 0.02, 0.04};
  const std::vector<double> b{0.02, 0.03, 0.04};
  const auto ha = holm_significance(a, 0.05);
  const auto hb = holm_significance(b, 0.05);
  const bool examples = ha == std::vector<bool>{true, true, true} && hb == std::vector<bool>{false, false, false};
  Xoshiro256 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> p(1 + rng.below(15));
    for (auto& x : p) x = static_cast<double>(rng.below(40)) / 400.0;
    if (holm_significance(p, 0.05) != oracle::holm(p, 0.05)) return false;
  }
  return examples;
}

bool rank_check() {
  Xoshiro256 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.below(9);
    const std::size_t n = 1 + rng.below(20);
    const auto matrix = random_matrix(rng, m, n);
    const auto table = compute_ranks(matrix);
    if (table.ranks != oracle::sorted_ranks(matrix)) return false;
    for (std::size_t t = 0; t < n; ++t) {
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) sum += table.rank(i, t);
      if (std::fabs(sum - static_cast<double>(m * (m + 1)) / 2.0) > 1e-9) return false;
    }
  }
  return true;
}

bool friedman_check() {
  Xoshiro256 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto matrix = random_matrix(rng, 3 + rng.below(6), 2 + rng.below(20));
    const double expected = oracle::friedman_statistic(matrix);
    if (std::fabs(friedman_test(matrix).statistic - expected) > 1e-9 * std::max(1.0, expected)) return false;
  }
  return true;
}

bool nemenyi_check() {
  for (std::size_t m : {2U, 3U, 5U, 10U, 20U}) {
    if (std::fabs(nemenyi_q(m, NemenyiAlpha::P05) - oracle::nemenyi_q_quadrature(m, 0.05)) > 2e-6) return false;
    if (std::fabs(nemenyi_q(m, NemenyiAlpha::P10) - oracle::nemenyi_q_quadrature(m, 0.10)) > 2e-6) return false;
  }
  return true;
}

bool bayes_check() {
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = random_diffs(rng, 1 + rng.below(15));
    for (auto& x : d) x /= 100.0;
    BayesConfig cfg;
    cfg.seed = trial;
    cfg.mc_samples = 50;
    const auto draws = bayesian_signed_rank_draws(d, cfg, cfg.mc_samples);
    std::vector<double> z{cfg.prior_pseudo_observation};
    z.insert(z.end(), d.begin(), d.end());
    for (std::size_t s = 0; s < draws.size(); ++s) {
      const auto w = dirichlet_weights(cfg, s, z.size());
      const auto t = oracle::bayes_double_sum(z, w, cfg.rope);
      if (std::fabs(t.left - draws[s].left) > 1e-12 || std::fabs(t.right - draws[s].right) > 1e-12) return false;
      if ((draws[s].left + draws[s].right) + draws[s].rope != 1.0) return false;
    }
  }
  return true;
}

}  // namespace

bool run_selftest(std::ostream& out, bool verbose) {
  const std::vector<std::pair<std::string, std::function<bool()>>> checks{
      {"wilcoxon exact vs sign enumeration", wilcoxon_check},
      {"holm worked examples and step-down oracle", holm_check},
      {"rank sums and sorted-rank oracle", rank_check},
      {"friedman vs textbook formula", friedman_check},
      {"nemenyi constants vs studentized-range quadrature", nemenyi_check},
      {"bayesian draws vs weighted double sum", bayes_check},
  };
  bool all = true;
  for (const auto& [name, check] : checks) {
    const bool ok = check();
    all = all && ok;
    if (verbose || !ok) out << (ok ? "PASS " : "FAIL ") << name << "\n";
  }
  out << (all ? "selftest passed" : "selftest FAILED") << " (" << checks.size() << " checks)\n";
  return all;
}

}  // namespace mcm::cli
