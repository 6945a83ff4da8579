#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <regex>

#include "fixtures.hpp"
#include "mcm/error.hpp"
#include "mcm/render.hpp"
#include "test_util.hpp"

using namespace mcm;

namespace {

std::filesystem::path golden_dir() { return MCM_GOLDEN_DIR; }

ResultsMatrix golden_input() {
  return load_results_text(testutil::read_file(testutil::fixture_dir() / "golden_input.csv"), InputFormat::CSV,
                           Direction::HigherIsBetter);
}

void expect_golden(const std::string& name, const std::string& actual) {
  const auto path = golden_dir() / name;
  if (std::getenv("MCM_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << path << " missing; rerun with MCM_UPDATE_GOLDEN=1";
  EXPECT_TRUE(testutil::read_file(path) == actual) << name << " differs from the golden file";
}

struct CellView {
  std::string fill;
  bool bold = false;
};

// Fill colour and boldness of the cell group for (row, col).
CellView find_cell(const std::string& svg, const std::string& row, const std::string& col) {
  const std::string open = "<g class=\"cell\" data-row=\"" + row + "\" data-col=\"" + col + "\">";
  const auto begin = svg.find(open);
  EXPECT_NE(begin, std::string::npos) << row << "/" << col;
  const auto end = svg.find("</g>", begin);
  const std::string group = svg.substr(begin, end - begin);
  std::smatch fill;
  std::regex_search(group, fill, std::regex("fill=\"(#[0-9a-f]{6})\""));
  return {fill[1], group.find("font-weight=\"bold\"") != std::string::npos};
}

}  // namespace

TEST(Format, FixedAndP) {
  EXPECT_EQ(format_fixed(0.5, 4), "0.5000");
  EXPECT_EQ(format_fixed(-0.00001, 4), "0.0000");
  EXPECT_EQ(format_fixed(-0.0, 2), "0.00");
  EXPECT_EQ(format_fixed(-1.25, 1), "-1.2");
  EXPECT_EQ(format_p(0.03125, 4), "0.0312");
  EXPECT_EQ(format_p(0.00001234, 4), "1.2e-05");
  EXPECT_EQ(format_p(1.0, 4), "1.0000");
}

TEST(Color, DivergingScale) {
  const RenderStyle s;
  EXPECT_EQ(diverging_color(0.0, 1.0, s), s.color_neutral);
  EXPECT_EQ(diverging_color(-0.0, 1.0, s), s.color_neutral);
  EXPECT_EQ(diverging_color(1.0, 1.0, s), s.color_positive);
  EXPECT_EQ(diverging_color(2.0, 1.0, s), s.color_positive);
  EXPECT_EQ(diverging_color(-1.0, 1.0, s), s.color_negative);
  const Rgb half = diverging_color(0.5, 1.0, s);
  EXPECT_GT(half.r, half.b);
  EXPECT_EQ(diverging_color(0.3, 0.0, s), s.color_neutral);
  EXPECT_EQ(s.color_positive.hex(), "#b2182b");
  EXPECT_EQ(s.color_negative.hex(), "#2166ac");
}

TEST(RenderMcm, ZeroDifferenceIsNeutralAndSignificantIsBold) {
  const auto report = build_mcm(golden_input(), {});
  const auto svg = render_mcm(report, {}, DocumentFormat::SVG);
  const auto zero = find_cell(svg, "Bravo", "Echo");
  EXPECT_EQ(report.find_cell("Bravo", "Echo")->comparison.mean_difference, 0.0);
  EXPECT_EQ(zero.fill, "#ffffff");
  EXPECT_FALSE(zero.bold);

  const auto* strong = report.find_cell("Alpha", "Delta");
  ASSERT_LT(strong->comparison.p_value, 0.001);
  const auto sig = find_cell(svg, "Alpha", "Delta");
  EXPECT_TRUE(sig.bold);
  EXPECT_EQ(find_cell(svg, "Alpha", "Delta").fill, RenderStyle{}.color_positive.hex());
  EXPECT_EQ(find_cell(svg, "Delta", "Alpha").fill, RenderStyle{}.color_negative.hex());

  for (const auto& a : report.row_order) {
    for (const auto& b : report.column_order) {
      if (a == b) continue;
      EXPECT_EQ(find_cell(svg, a, b).bold, report.find_cell(a, b)->significant) << a << "/" << b;
    }
  }
  RenderStyle plain;
  plain.bold_significant = false;
  EXPECT_FALSE(find_cell(render_mcm(report, plain, DocumentFormat::SVG), "Alpha", "Delta").bold);
}

TEST(RenderMcm, MeanPerformanceNextToLabels) {
  const auto report = build_mcm(golden_input(), {});
  const auto svg = render_mcm(report, {}, DocumentFormat::SVG);
  EXPECT_NE(svg.find(format_fixed(report.mean_of("Alpha"), 4)), std::string::npos);
}

TEST(RenderMcm, HtmlEmbedsTheSvg) {
  const auto report = build_mcm(golden_input(), {});
  auto svg = render_mcm(report, {}, DocumentFormat::SVG);
  svg.erase(0, svg.find('\n') + 1);
  const auto html = render_mcm(report, {}, DocumentFormat::HTML, R"({"k":"</script>"})");
  EXPECT_NE(html.find(svg), std::string::npos);
  EXPECT_NE(html.find("<table>"), std::string::npos);
  EXPECT_EQ(html.find("</script>\"}"), std::string::npos);
}

TEST(RenderMcm, MetadataIsEscaped) {
  const auto report = build_mcm(golden_input(), {});
  const auto svg = render_mcm(report, {}, DocumentFormat::SVG, R"({"a":"<&>"})");
  EXPECT_NE(svg.find("<metadata>{&quot;a&quot;:&quot;&lt;&amp;&gt;&quot;}</metadata>"), std::string::npos);
}

TEST(RenderMcm, EmptyReport) {
  MCMReport empty;
  try {
    render_mcm(empty, {}, DocumentFormat::SVG);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyReport);
  }
}

TEST(RenderMcm, DeterministicAcrossRunsAndThreads) {
  const auto m = golden_input();
  MCMConfig c;
  c.include_bayes = true;
  c.bayes.mc_samples = 2000;
  const auto a = render_mcm(build_mcm(m, c, 1), {}, DocumentFormat::HTML);
  const auto b = render_mcm(build_mcm(m, c, 1), {}, DocumentFormat::HTML);
  const auto d = render_mcm(build_mcm(m, c, 5), {}, DocumentFormat::HTML);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
}

TEST(Golden, McmSvgAndHtml) {
  const auto report = build_mcm(golden_input(), {});
  expect_golden("mcm.svg", render_mcm(report, {}, DocumentFormat::SVG));
  expect_golden("mcm.html", render_mcm(report, {}, DocumentFormat::HTML));
  expect_golden("mcm.svg", render_mcm(build_mcm(golden_input(), {}, 4), {}, DocumentFormat::SVG));
}

TEST(Golden, FocusedMcm) {
  MCMConfig c;
  c.row_comparates = {"Alpha", "Delta"};
  c.column_comparates = {"Bravo", "Charlie", "Echo"};
  expect_golden("mcm_focused.svg", render_mcm(build_mcm(golden_input(), c), {}, DocumentFormat::SVG));
}

TEST(Golden, CdDiagrams) {
  const auto m = golden_input();
  expect_golden("cd_nemenyi.svg", render_cd_diagram(m, 0.05, PairwiseMethod::Nemenyi));
  expect_golden("cd_wilcoxon_holm.svg", render_cd_diagram(m, 0.05, PairwiseMethod::WilcoxonHolm));
}

// CD layout -----------------------------------------------------------------

TEST(CdLayout, AllIdenticalSingleBar) {
  const ResultsMatrix m({"A", "B", "C", "D"}, {"x", "y"}, std::vector<double>(8, 0.5), Direction::HigherIsBetter);
  for (auto method : {PairwiseMethod::Nemenyi, PairwiseMethod::WilcoxonHolm}) {
    const auto l = compute_cd_layout(m, 0.05, method);
    for (double ar : l.average_ranks) EXPECT_EQ(ar, 2.5);
    ASSERT_EQ(l.cliques.size(), 1u);
    EXPECT_EQ(l.cliques[0], (std::pair<std::size_t, std::size_t>{0, 3}));
  }
}

TEST(CdLayout, DominantComparateIsRightmost) {
  Xoshiro256 rng(4);
  auto base = testutil::random_matrix(rng, 4, 6, 0);
  const auto m = base.with_row("Winner", std::vector<double>(6, 2.0));
  const auto l = compute_cd_layout(m, 0.05, PairwiseMethod::Nemenyi);
  EXPECT_EQ(l.names.front(), "Winner");
  EXPECT_EQ(l.average_ranks.front(), 1.0);
  const RenderStyle style;
  double best_x = cd_axis_x(l.average_ranks.front(), 5, style);
  for (double ar : l.average_ranks) EXPECT_LE(cd_axis_x(ar, 5, style), best_x);
  EXPECT_EQ(best_x, style.cd_width - style.cd_axis_inset);
}

TEST(CdLayout, AxisIsAffineAndOrderPreserving) {
  const RenderStyle s;
  const double a = cd_axis_x(1.0, 7, s), b = cd_axis_x(2.5, 7, s), c = cd_axis_x(4.0, 7, s);
  EXPECT_GT(a, b);
  EXPECT_GT(b, c);
  EXPECT_NEAR(a - b, b - c, 1e-9);
  EXPECT_EQ(cd_axis_x(7.0, 7, s), s.cd_axis_inset);
}

TEST(CdLayout, ConstructedCliques) {
  // Rank order 0..4; only (1,2) and (2,3) are non-significant.
  auto ns = [](std::size_t a, std::size_t b) {
    return (a == 1 && b == 2) || (a == 2 && b == 3);
  };
  const auto cliques = contiguous_cliques(5, ns);
  EXPECT_EQ(cliques, (std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}, {2, 3}}));
  auto chain = [](std::size_t, std::size_t) { return true; };
  EXPECT_EQ(contiguous_cliques(5, chain), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 4}}));
  auto none = [](std::size_t, std::size_t) { return false; };
  EXPECT_TRUE(contiguous_cliques(5, none).empty());
}

TEST(CdLayout, BarsMatchCliques) {
  const auto m = golden_input();
  const auto l = compute_cd_layout(m, 0.05, PairwiseMethod::WilcoxonHolm);
  const auto svg = render_cd_diagram(l, {});
  std::size_t bars = 0;
  for (auto pos = svg.find("class=\"clique\""); pos != std::string::npos; pos = svg.find("class=\"clique\"", pos + 1)) {
    ++bars;
  }
  EXPECT_EQ(bars, l.cliques.size());
  const auto n = compute_cd_layout(m, 0.05, PairwiseMethod::Nemenyi);
  ASSERT_TRUE(n.critical_difference);
  EXPECT_NEAR(*n.critical_difference, nemenyi_critical_difference(5, 12, NemenyiAlpha::P05), 1e-15);
  for (const auto& [i, j] : n.cliques) EXPECT_LE(n.average_ranks[j] - n.average_ranks[i], *n.critical_difference);
}

TEST(CdLayout, Errors) {
  const ResultsMatrix two({"A", "B"}, {"x", "y"}, {1, 2, 3, 4}, Direction::HigherIsBetter);
  const ResultsMatrix one({"A", "B", "C"}, {"x"}, {1, 2, 3}, Direction::HigherIsBetter);
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Parse;
  };
  EXPECT_EQ(code([&] { compute_cd_layout(two, 0.05, PairwiseMethod::Nemenyi); }), ErrorCode::TooFewComparates);
  EXPECT_EQ(code([&] { compute_cd_layout(one, 0.05, PairwiseMethod::WilcoxonHolm); }), ErrorCode::TooFewTasks);
  EXPECT_EQ(code([&] { compute_cd_layout(golden_input(), 0.01, PairwiseMethod::Nemenyi); }),
            ErrorCode::UnsupportedAlpha);
}
