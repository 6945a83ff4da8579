#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mcm/data.hpp"
#include "mcm/error.hpp"
#include "mcm/random.hpp"
#include "test_util.hpp"

using namespace mcm;

namespace {

template <typename E>
E capture(const std::string& text, InputFormat format = InputFormat::CSV) {
  try {
    load_results_text(text, format, Direction::HigherIsBetter);
  } catch (const E& e) {
    return e;
  }
  ADD_FAILURE() << "no exception for:\n" << text;
  throw std::runtime_error("expected exception");
}

}  // namespace

TEST(LoadCsv, MinimalMatrix) {
  const auto m = load_results_text("comparate,t1,t2,t3\nA,0.9,0.8,0.7\nB,0.5,0.6,0.4\n", InputFormat::CSV,
                                   Direction::HigherIsBetter);
  EXPECT_EQ(m.comparate_count(), 2u);
  EXPECT_EQ(m.task_count(), 3u);
  EXPECT_EQ(m.comparates(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.tasks(), (std::vector<std::string>{"t1", "t2", "t3"}));
  EXPECT_EQ(m.score(1, 2), 0.4);
}

TEST(LoadCsv, QuotedFieldsAndCrlf) {
  const auto m = load_results_text("comparate,\"task, one\",t2\r\n\"Algo \"\"X\"\"\",1,2\r\nB,+3,-4e-1\r\n",
                                   InputFormat::CSV, Direction::LowerIsBetter);
  EXPECT_EQ(m.tasks()[0], "task, one");
  EXPECT_EQ(m.comparates()[0], "Algo \"X\"");
  EXPECT_EQ(m.score(1, 0), 3.0);
  EXPECT_EQ(m.score(1, 1), -0.4);
  EXPECT_EQ(m.direction(), Direction::LowerIsBetter);
}

TEST(LoadCsv, DuplicateComparateNamesTheDuplicate) {
  const auto e = capture<ValidationError>("comparate,t1\nA,1\nB,2\nA,3\n");
  EXPECT_NE(std::string(e.what()).find("'A'"), std::string::npos) << e.what();
  ASSERT_TRUE(e.where());
  EXPECT_EQ(e.where()->row, 4u);
  EXPECT_EQ(e.where()->column, 1u);
}

TEST(LoadCsv, DuplicateTaskIsRejected) {
  const auto e = capture<ValidationError>("comparate,t1,t1\nA,1,2\nB,2,3\n");
  ASSERT_TRUE(e.where());
  EXPECT_EQ(e.where()->row, 1u);
  EXPECT_EQ(e.where()->column, 3u);
}

TEST(LoadCsv, EmptyCellCarriesCoordinates) {
  const auto e = capture<ValidationError>("comparate,t1,t2,t3\nA,1,,3\nB,1,2,3\n");
  ASSERT_TRUE(e.where());
  EXPECT_EQ(e.where()->row, 2u);
  EXPECT_EQ(e.where()->column, 3u);
  EXPECT_NE(std::string(e.what()).find("row 2, column 3"), std::string::npos) << e.what();
}

TEST(LoadCsv, ShortRowIsMissingCell) {
  const auto e = capture<ValidationError>("comparate,t1,t2\nA,1,2\nB,1\n");
  ASSERT_TRUE(e.where());
  EXPECT_EQ(e.where()->row, 3u);
  EXPECT_EQ(e.where()->column, 3u);
}

TEST(LoadCsv, NonFiniteValuesAreValidationErrors) {
  for (const char* bad : {"nan", "inf", "-inf", "1e999"}) {
    const auto e = capture<ValidationError>(std::string("comparate,t1,t2\nA,1,2\nB,1,") + bad + "\n");
    ASSERT_TRUE(e.where()) << bad;
    EXPECT_EQ(e.where()->row, 3u) << bad;
    EXPECT_EQ(e.where()->column, 3u) << bad;
  }
}

TEST(LoadCsv, SyntaxErrorsAreParseErrors) {
  capture<ParseError>("comparate,t1\nA,abc\nB,1\n");
  capture<ParseError>("comparate,t1\nA,1,2\nB,1\n");
  capture<ParseError>("comparate,t1\nA,\"1\nB,1\n");
  capture<ParseError>("comparate,t1\nA,1,5\n");
  capture<ParseError>("comparate,t1\nA,0,5\n");
  capture<ParseError>("");
  const auto e = capture<ParseError>("comparate,t1,t2\nA,1,2\nB,3,x7\n");
  ASSERT_TRUE(e.where());
  EXPECT_EQ(e.where()->row, 3u);
  EXPECT_EQ(e.where()->column, 3u);
}

TEST(LoadCsv, DecimalCommaIsNotAccepted) {
  EXPECT_THROW(load_results_text("comparate,t1\nA,\"0,5\"\nB,1\n", InputFormat::CSV, Direction::HigherIsBetter),
               ParseError);
}

TEST(LoadCsv, SingleComparateIsRejected) {
  EXPECT_THROW(load_results_text("comparate,t1\nA,1\n", InputFormat::CSV, Direction::HigherIsBetter),
               ValidationError);
}

TEST(LoadJson, ReadsSpecLayout) {
  const std::string text = R"({"direction":"lower","comparates":["A","B"],"tasks":["x","y"],
                               "scores":[[1,2],[3.5,4]]})";
  const auto m = load_results_text(text, InputFormat::JSON, Direction::LowerIsBetter);
  EXPECT_EQ(m.score(1, 0), 3.5);
  EXPECT_EQ(m.direction(), Direction::LowerIsBetter);
}

TEST(LoadJson, DeclaredDirectionMustMatch) {
  const std::string text = R"({"direction":"lower","comparates":["A","B"],"tasks":["x"],"scores":[[1],[2]]})";
  EXPECT_THROW(load_results_text(text, InputFormat::JSON, Direction::HigherIsBetter), ValidationError);
}

TEST(LoadJson, Errors) {
  EXPECT_THROW(load_results_text("{", InputFormat::JSON, Direction::HigherIsBetter), ParseError);
  EXPECT_THROW(load_results_text(R"({"comparates":["A","A"],"tasks":["x"],"scores":[[1],[2]]})", InputFormat::JSON,
                                 Direction::HigherIsBetter),
               ValidationError);
  EXPECT_THROW(load_results_text(R"({"comparates":["A","B"],"tasks":["x"],"scores":[[1],[null]]})",
                                 InputFormat::JSON, Direction::HigherIsBetter),
               ValidationError);
  EXPECT_THROW(load_results_text(R"({"comparates":["A","B"],"tasks":["x"],"scores":[[1],["q"]]})",
                                 InputFormat::JSON, Direction::HigherIsBetter),
               ParseError);
}

TEST(RoundTrip, CsvAndJsonOnRandomMatrices) {
  Xoshiro256 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = testutil::random_matrix(rng, 2 + rng.below(6), 1 + rng.below(10), 0,
                                           trial % 2 ? Direction::LowerIsBetter : Direction::HigherIsBetter);
    EXPECT_EQ(load_results_text(to_csv(m), InputFormat::CSV, m.direction()), m);
    EXPECT_EQ(load_results_text(to_json_text(m), InputFormat::JSON, m.direction()), m);
    std::istringstream stream(to_csv(m));
    EXPECT_EQ(load_results(stream, InputFormat::CSV, m.direction()), m);
  }
}

TEST(RoundTrip, ExtremeDoublesSurvive) {
  const ResultsMatrix m({"A", "B"}, {"t1", "t2", "t3"},
                        {0.1 + 0.2, 5e-324, -1.7976931348623157e308, 1.0 / 3.0, -0.0, 123456789.125},
                        Direction::HigherIsBetter);
  const auto back = load_results_text(to_csv(m), InputFormat::CSV, m.direction());
  for (std::size_t i = 0; i < m.scores().size(); ++i) {
    EXPECT_EQ(std::signbit(back.scores()[i]), std::signbit(m.scores()[i]));
    EXPECT_EQ(back.scores()[i], m.scores()[i]);
  }
}

namespace {

ResultsMatrix frag(std::vector<std::string> c, std::vector<std::string> t, std::vector<double> s) {
  return {std::move(c), std::move(t), std::move(s), Direction::HigherIsBetter};
}

}  // namespace

TEST(RestrictToCompleteTasks, SharedTasks) {
  const std::vector<ResultsMatrix> fragments{frag({"X", "Y"}, {"A", "B", "C"}, {1, 2, 3, 4, 5, 6}),
                                             frag({"Z", "W"}, {"B", "A"}, {7, 8, 9, 10})};
  const auto m = restrict_to_complete_tasks(fragments);
  EXPECT_EQ(m.tasks(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.comparates(), (std::vector<std::string>{"X", "Y", "Z", "W"}));
  EXPECT_EQ(m.score(2, 0), 8.0);
  EXPECT_EQ(m.score(2, 1), 7.0);
  EXPECT_EQ(m.score(1, 1), 5.0);
}

TEST(RestrictToCompleteTasks, DisjointTasksFail) {
  const std::vector<ResultsMatrix> fragments{frag({"X", "Y"}, {"A"}, {1, 2}), frag({"Z", "W"}, {"B"}, {3, 4})};
  try {
    restrict_to_complete_tasks(fragments);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyIntersection);
  }
}

TEST(RestrictToCompleteTasks, SingleFragmentIsIdentity) {
  const auto m = frag({"X", "Y"}, {"A", "B"}, {1, 2, 3, 4});
  EXPECT_EQ(restrict_to_complete_tasks(std::vector<ResultsMatrix>{m}), m);
}

TEST(RestrictToCompleteTasks, ComparateSplitAcrossFragments) {
  const std::vector<ResultsMatrix> fragments{frag({"X", "Y"}, {"A", "B"}, {1, 2, 3, 4}),
                                             frag({"X", "Y"}, {"C"}, {5, 6}),
                                             frag({"X", "Z"}, {"C", "A"}, {5, 1, 8, 9})};
  const auto m = restrict_to_complete_tasks(fragments);
  EXPECT_EQ(m.tasks(), (std::vector<std::string>{"A", "C"}));
  EXPECT_EQ(m.comparates(), (std::vector<std::string>{"X", "Y", "Z"}));
  EXPECT_EQ(m.score(0, 1), 5.0);
  EXPECT_EQ(m.score(2, 0), 9.0);
}

TEST(RestrictToCompleteTasks, ConflictingDuplicateScore) {
  const std::vector<ResultsMatrix> fragments{frag({"X", "Y"}, {"A"}, {1, 2}), frag({"X", "Z"}, {"A"}, {1.5, 3})};
  EXPECT_THROW(restrict_to_complete_tasks(fragments), ValidationError);
}

TEST(RestrictToCompleteTasks, OutputTasksCoveredByEveryComparate) {
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ResultsMatrix> fragments;
    const std::vector<std::string> all_tasks{"a", "b", "c", "d", "e", "f"};
    for (int f = 0; f < 3; ++f) {
      std::vector<std::string> tasks;
      for (const auto& t : all_tasks) {
        if (rng.below(4) != 0) tasks.push_back(t);
      }
      if (tasks.empty()) tasks.push_back("a");
      std::vector<double> scores(2 * tasks.size(), 1.0);
      fragments.push_back(frag({"P" + std::to_string(f), "Q" + std::to_string(f)}, tasks, scores));
    }
    try {
      const auto m = restrict_to_complete_tasks(fragments);
      for (const auto& t : m.tasks()) {
        for (const auto& fr : fragments) {
          EXPECT_NE(std::find(fr.tasks().begin(), fr.tasks().end(), t), fr.tasks().end());
        }
      }
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptyIntersection);
    }
  }
}

TEST(WeakenComparate, Endpoints) {
  const auto m = frag({"T", "R"}, {"a", "b", "c"}, {0.1 + 0.2, 0.7, 1.0 / 3.0, 0.5, 0.123456789, 0.9});
  const auto one = weaken_comparate(m, "T", "R", 1.0, "V");
  const auto zero = weaken_comparate(m, "T", "R", 0.0, "V");
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(one.score(2, t), m.score(0, t));
    EXPECT_EQ(zero.score(2, t), m.score(1, t));
  }
  EXPECT_EQ(one.select(std::vector<std::string>{"T", "R"}), m);
}

TEST(WeakenComparate, HalfWeight) {
  const auto m = frag({"T", "R"}, {"a", "b"}, {0.9, 0.7, 0.5, 0.5});
  const auto w = weaken_comparate(m, "T", "R", 0.5, "V");
  EXPECT_NEAR(w.score(2, 0), 0.7, 1e-15);
  EXPECT_NEAR(w.score(2, 1), 0.6, 1e-15);
}

TEST(WeakenComparate, StaysBetweenParents) {
  Xoshiro256 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = testutil::random_matrix(rng, 3, 8, 0);
    const double w = rng.uniform();
    const auto v = weaken_comparate(m, "c0", "c1", w, "v");
    for (std::size_t t = 0; t < 8; ++t) {
      EXPECT_LE(std::min(m.score(0, t), m.score(1, t)), v.score(3, t));
      EXPECT_GE(std::max(m.score(0, t), m.score(1, t)), v.score(3, t));
    }
  }
}

TEST(WeakenComparate, Errors) {
  const auto m = frag({"T", "R"}, {"a"}, {1, 2});
  auto code = [&](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Parse;
  };
  EXPECT_EQ(code([&] { weaken_comparate(m, "T", "R", 0.5, "R"); }), ErrorCode::NameCollision);
  EXPECT_EQ(code([&] { weaken_comparate(m, "T", "Q", 0.5, "V"); }), ErrorCode::UnknownComparate);
  EXPECT_EQ(code([&] { weaken_comparate(m, "T", "T", 0.5, "V"); }), ErrorCode::SameComparate);
  EXPECT_EQ(code([&] { weaken_comparate(m, "T", "R", 1.5, "V"); }), ErrorCode::InvalidConfig);
}
