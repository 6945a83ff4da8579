// Seeded search for small matrices that exhibit the set-dependence of
// average ranks and Holm decisions. Writes one CSV and one JSON descriptor per
// witness into the output directory; the test fixtures are produced by
//
//   find_witnesses tests/fixtures
//
// and a test reruns the search to confirm they are reproducible.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "mcm/data.hpp"
#include "mcm/random.hpp"
#include "mcm/stability.hpp"
#include "mcm/stats.hpp"

namespace {

using json = nlohmann::ordered_json;
using mcm::ResultsMatrix;

constexpr std::uint64_t kSeed = 20240601;

ResultsMatrix integer_matrix(mcm::Xoshiro256& rng, const std::vector<std::string>& names, std::size_t tasks,
                             std::uint64_t levels) {
  std::vector<std::string> task_names;
  for (std::size_t t = 0; t < tasks; ++t) task_names.push_back(fmt::format("task{}", t + 1));
  std::vector<double> scores(names.size() * tasks);
  for (auto& s : scores) s = static_cast<double>(rng.below(levels));
  return {names, task_names, scores, mcm::Direction::HigherIsBetter};
}

void write(const std::filesystem::path& dir, const std::string& stem, const ResultsMatrix& m, json descriptor) {
  std::ofstream(dir / (stem + ".csv"), std::ios::binary) << mcm::to_csv(m);
  descriptor["data"] = stem + ".csv";
  descriptor["direction"] = mcm::to_string(m.direction());
  std::ofstream(dir / (stem + ".json"), std::ios::binary) << descriptor.dump(2) << "\n";
}

double ar(const ResultsMatrix& m, const std::string& name) {
  return mcm::compute_ranks(m).average_ranks[m.index_of(name)];
}

// Four comparates on three tasks: A ahead of B among {A, B, C}, behind B once
// D joins.
json find_rank_swap(const std::filesystem::path& dir) {
  mcm::Xoshiro256 rng(kSeed, 1);
  const std::vector<std::string> names{"A", "B", "C", "D"};
  const std::vector<std::string> set_a{"A", "B", "C"};
  for (std::size_t attempt = 0;; ++attempt) {
    const auto m = integer_matrix(rng, names, 3, 4);
    const auto small = m.select(set_a);
    if (!(ar(small, "A") < ar(small, "B"))) continue;
    if (!(ar(m, "A") > ar(m, "B"))) continue;
    json d;
    d["pair"] = {"A", "B"};
    d["set_a"] = set_a;
    d["set_b"] = names;
    d["search_seed"] = kSeed;
    d["attempts"] = attempt + 1;
    write(dir, "rank_swap", m, d);
    return d;
  }
}

// A pair whose raw Wilcoxon p is fixed but whose Holm decision differs between
// two comparate sets that both contain it.
json find_holm_flip(const std::filesystem::path& dir) {
  mcm::Xoshiro256 rng(kSeed, 2);
  const std::vector<std::string> names{"A", "B", "C", "D", "E", "F"};
  constexpr double alpha = 0.05;
  for (std::size_t attempt = 0;; ++attempt) {
    const auto m = integer_matrix(rng, names, 10, 10);
    std::optional<std::vector<std::string>> significant_in;
    std::optional<std::vector<std::string>> not_significant_in;
    for (std::uint32_t mask = 0; mask < (1U << 4); ++mask) {
      std::vector<std::string> subset{"A", "B"};
      for (std::size_t k = 0; k < 4; ++k) {
        if ((mask >> k) & 1U) subset.push_back(names[2 + k]);
      }
      const auto sub = m.select(subset);
      const auto family = mcm::holm_all_pairs(sub, alpha);
      const bool flag = family.is_significant(0, 1);
      auto& slot = flag ? significant_in : not_significant_in;
      if (!slot || subset.size() < slot->size()) slot = subset;
    }
    if (!significant_in || !not_significant_in) continue;
    json d;
    d["pair"] = {"A", "B"};
    d["alpha"] = alpha;
    d["significant_in"] = *significant_in;
    d["not_significant_in"] = *not_significant_in;
    d["raw_p"] = mcm::pairwise_comparison(m, "A", "B").p_value;
    d["search_seed"] = kSeed;
    d["attempts"] = attempt + 1;
    write(dir, "holm_flip", m, d);
    return d;
  }
}

// Adding a variant that is strictly worse than the target on every task moves
// the target ahead of a rival in average rank.
json find_weakened_variant(const std::filesystem::path& dir) {
  mcm::Xoshiro256 rng(kSeed, 3);
  const std::vector<std::string> names{"Target", "Rival", "Other", "Weak"};
  const std::vector<std::string> context{"Target", "Rival", "Other"};
  constexpr double weight = 0.5;
  for (std::size_t attempt = 0;; ++attempt) {
    const auto m = integer_matrix(rng, names, 6, 10);
    bool weaker = true;
    for (std::size_t t = 0; t < m.task_count(); ++t) weaker = weaker && m.score(3, t) < m.score(0, t);
    if (!weaker) continue;
    const auto before = m.select(context);
    if (!(ar(before, "Target") > ar(before, "Rival"))) continue;
    const auto augmented = mcm::weaken_comparate(m, "Target", "Weak", weight, "Target*");
    std::vector<std::string> with_variant = context;
    with_variant.push_back("Target*");
    const auto after = augmented.select(with_variant);
    if (!(ar(after, "Target") < ar(after, "Rival"))) continue;
    json d;
    d["target"] = "Target";
    d["reference"] = "Weak";
    d["rival"] = "Rival";
    d["weight"] = weight;
    d["context"] = context;
    d["search_seed"] = kSeed;
    d["attempts"] = attempt + 1;
    write(dir, "weakened_variant", m, d);
    return d;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: find_witnesses OUTPUT_DIR\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<const char*, std::function<json(const std::filesystem::path&)>>> searches{
      {"rank_swap", find_rank_swap},
      {"holm_flip", find_holm_flip},
      {"weakened_variant", find_weakened_variant},
  };
  for (const auto& [name, search] : searches) {
    const json d = search(dir);
    std::cout << name << ": found after " << d["attempts"].get<std::size_t>() << " attempts\n";
  }
  return 0;
}
