#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "mcm/error.hpp"
#include "mcm/mcm_report.hpp"
#include "mcm/stability.hpp"
#include "test_util.hpp"

using namespace mcm;

namespace {

std::vector<std::string> random_superset(Xoshiro256& rng, const ResultsMatrix& m,
                                         const std::vector<std::string>& pair) {
  std::vector<std::string> out = pair;
  for (const auto& c : m.comparates()) {
    if (std::find(pair.begin(), pair.end(), c) == pair.end() && rng.below(2)) out.push_back(c);
  }
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.below(i)]);
  return out;
}

const ResultsMatrix kFive({"A", "B", "C", "D", "E"}, {"t1", "t2", "t3", "t4"},
                          {0.9, 0.8, 0.7, 0.95,   //
                           0.85, 0.82, 0.6, 0.9,  //
                           0.5, 0.4, 0.45, 0.3,   //
                           0.7, 0.75, 0.8, 0.65,  //
                           0.9, 0.8, 0.7, 0.1},
                          Direction::HigherIsBetter);

}  // namespace

TEST(Mcm, AllPairsFiveComparates) {
  const auto r = build_mcm(kFive, {});
  EXPECT_TRUE(r.all_pairs);
  EXPECT_EQ(r.comparison_count, 10u);
  EXPECT_EQ(r.cells.size(), 25u);
  std::size_t filled = 0;
  std::set<std::pair<std::string, std::string>> distinct;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(r.cell(i, j).has_value(), i != j);
      if (r.cell(i, j)) {
        ++filled;
        distinct.insert(std::minmax(r.row_order[i], r.column_order[j]));
      }
    }
  }
  EXPECT_EQ(filled, 20u);
  EXPECT_EQ(distinct.size(), 10u);
}

TEST(Mcm, OrderedByMeanThenName) {
  const auto r = build_mcm(kFive, {});
  // Means: A 0.8375, B 0.7925, C 0.4125, D 0.725, E 0.625
  EXPECT_EQ(r.row_order, (std::vector<std::string>{"A", "B", "D", "E", "C"}));
  EXPECT_EQ(r.column_order, r.row_order);
  EXPECT_NEAR(r.mean_of("A"), 0.8375, 1e-12);

  const ResultsMatrix tied({"b", "a", "c"}, {"x"}, {1, 1, 2}, Direction::LowerIsBetter);
  EXPECT_EQ(build_mcm(tied, {}).row_order, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Mcm, FocusedLayouts) {
  MCMConfig c;
  c.row_comparates = {"A", "B"};
  c.column_comparates = {"C", "D", "E"};
  const auto disjoint = build_mcm(kFive, c);
  EXPECT_FALSE(disjoint.all_pairs);
  EXPECT_EQ(disjoint.comparison_count, 6u);
  EXPECT_EQ(disjoint.cells.size(), 6u);
  for (const auto& cell : disjoint.cells) EXPECT_TRUE(cell.has_value());
  EXPECT_EQ(disjoint.mean_performance.size(), 5u);

  c.column_comparates = {"A", "B", "C"};
  const auto overlap = build_mcm(kFive, c);
  EXPECT_EQ(overlap.comparison_count, 4u);
  std::size_t filled = 0;
  for (const auto& cell : overlap.cells) filled += cell.has_value();
  EXPECT_EQ(filled, 4u);
}

TEST(Mcm, ComparisonCountFormula) {
  using V = std::vector<std::string>;
  EXPECT_EQ(comparison_count(V{"A", "B"}, V{"C", "D", "E"}), 6u);
  EXPECT_EQ(comparison_count(V{"A", "B"}, V{"A", "B", "C"}), 4u);
  EXPECT_EQ(comparison_count(V{"A", "B", "C"}, V{"C", "B", "A"}), 3u);
  EXPECT_EQ(comparison_count(V{"A"}, V{"B"}), 1u);
}

TEST(Mcm, Errors) {
  MCMConfig c;
  c.alpha = 1.0;
  try {
    build_mcm(kFive, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidAlpha);
  }
  c.alpha = 0.05;
  c.row_comparates = {"A", "Nope"};
  try {
    build_mcm(kFive, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownComparate);
  }
}

TEST(Mcm, SignificanceIsUncorrectedP) {
  Xoshiro256 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = testutil::random_matrix(rng, 6, 15, 0);
    MCMConfig c;
    c.alpha = 0.2;
    const auto r = build_mcm(m, c);
    for (const auto& cell : r.cells) {
      if (cell) EXPECT_EQ(cell->significant, cell->comparison.p_value < 0.2);
    }
  }
}

TEST(Mcm, AntisymmetricGrid) {
  Xoshiro256 rng(2);
  const auto m = testutil::random_matrix(rng, 7, 20, 4);
  const auto r = build_mcm(m, {});
  for (const auto& a : r.row_order) {
    for (const auto& b : r.row_order) {
      if (a == b) continue;
      const auto& ab = r.find_cell(a, b)->comparison;
      const auto& ba = r.find_cell(b, a)->comparison;
      EXPECT_EQ(ab.mean_difference, -ba.mean_difference);
      EXPECT_EQ(ab.wins, ba.losses);
      EXPECT_EQ(ab.ties, ba.ties);
      EXPECT_EQ(ab.p_value, ba.p_value);
    }
  }
}

TEST(Mcm, CellInvarianceAcrossSupersets) {
  Xoshiro256 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = testutil::random_matrix(rng, 3 + rng.below(8), 5 + rng.below(30), trial % 2 ? 0 : 5);
    const std::vector<std::string> pair{"c0", "c1"};
    std::vector<std::vector<std::string>> subsets;
    for (int s = 0; s < 20; ++s) subsets.push_back(random_superset(rng, m, pair));
    EXPECT_TRUE(mcm_cell_invariance_check(m, {"c0", "c1"}, subsets));
    MCMConfig withb;
    withb.include_bayes = true;
    withb.bayes.mc_samples = 200;
    EXPECT_TRUE(mcm_cell_invariance_check(m, {"c1", "c0"}, std::span(subsets).first(3), withb));
  }
}

TEST(Mcm, CellInvarianceSingleSubset) {
  const std::vector<std::vector<std::string>> subsets{kFive.comparates()};
  EXPECT_TRUE(mcm_cell_invariance_check(kFive, {"A", "E"}, subsets));
}

TEST(Mcm, CellInvarianceRejectsSubsetWithoutPair) {
  const std::vector<std::vector<std::string>> subsets{{"A", "C"}};
  try {
    mcm_cell_invariance_check(kFive, {"A", "B"}, subsets);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PairNotInSubset);
  }
}

TEST(Mcm, HolmFlagsAreNotInvariant) {
  const auto w = testutil::load_witness("holm_flip");
  const std::vector<std::vector<std::string>> subsets{w.descriptor["significant_in"],
                                                      w.descriptor["not_significant_in"]};
  const std::pair<std::string, std::string> pair{"A", "B"};
  EXPECT_TRUE(mcm_cell_invariance_check(w.matrix, pair, subsets));
  EXPECT_FALSE(holm_flag_invariance_check(w.matrix, pair, subsets, w.descriptor["alpha"]));
}

TEST(Mcm, RelativeOrderIsContextFree) {
  Xoshiro256 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = testutil::random_matrix(rng, 8, 10, 3);
    const auto full = build_mcm(m, {}).row_order;
    const auto sub = random_superset(rng, m, {"c2", "c5"});
    const auto part = order_by_mean(m, sub);
    auto pos = [](const std::vector<std::string>& v, const std::string& s) {
      return std::find(v.begin(), v.end(), s) - v.begin();
    };
    EXPECT_EQ(pos(full, "c2") < pos(full, "c5"), pos(part, "c2") < pos(part, "c5"));
  }
}

TEST(Mcm, WorkerCountDoesNotMatter) {
  Xoshiro256 rng(5);
  const auto m = testutil::random_matrix(rng, 6, 12, 0);
  MCMConfig c;
  c.include_bayes = true;
  c.bayes.mc_samples = 3000;
  const auto one = build_mcm(m, c, 1);
  const auto four = build_mcm(m, c, 4);
  EXPECT_EQ(report_to_json(one).dump(), report_to_json(four).dump());
}

TEST(Mcm, JsonSchema) {
  MCMConfig c;
  c.include_bayes = true;
  c.bayes.mc_samples = 100;
  const auto doc = report_to_json(build_mcm(kFive, c));
  for (const char* key : {"ordering", "mean_performance", "alpha", "cells", "comparison_count"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["multiple_testing_correction"], "none");
  EXPECT_EQ(doc["cells"].size(), 20u);
  const auto& cell = doc["cells"][0];
  for (const char* key :
       {"row", "col", "mean_diff", "wins", "ties", "losses", "p", "p_method", "significant", "bayes"}) {
    EXPECT_TRUE(cell.contains(key)) << key;
  }
  EXPECT_TRUE(doc["mean_performance"].is_object());
  EXPECT_NEAR(doc["mean_performance"]["A"].get<double>(), 0.8375, 1e-12);
}
