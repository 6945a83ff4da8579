#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mcm/mcm_report.hpp"
#include "mcm/results_matrix.hpp"

namespace mcm {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::string hex() const;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Visual parameters. Every geometry constant is documented in
/// docs/style_reference.md; defaults there and here must agree.
struct RenderStyle {
  Rgb color_positive{0xB2, 0x18, 0x2B};  // row better on average
  Rgb color_negative{0x21, 0x66, 0xAC};  // column better on average
  Rgb color_neutral{0xFF, 0xFF, 0xFF};
  /// Symmetric saturation point of the diverging scale. Absent: the largest
  /// |mean difference| over the shown cells.
  std::optional<double> color_scale_limit;
  bool bold_significant = true;
  int cell_decimal_places = 4;
  int rank_decimal_places = 4;

  std::string font_family = "DejaVu Sans, Arial, Helvetica, sans-serif";
  double font_size = 12.0;
  double margin = 20.0;

  // MCM heatmap
  double cell_width = 130.0;
  double cell_height = 62.0;
  double row_label_width = 190.0;
  double column_header_height = 56.0;
  double legend_height = 56.0;

  // CD diagram
  double cd_width = 820.0;
  double cd_axis_inset = 150.0;  ///< distance from each side to the axis ends
  double cd_axis_y = 90.0;
  double cd_bar_spacing = 9.0;
  double cd_label_spacing = 22.0;
};

enum class DocumentFormat { SVG, HTML };

/// Fill for a mean difference on the diverging scale; zero is exactly the
/// neutral color.
Rgb diverging_color(double mean_difference, double limit, const RenderStyle& style);

/// Fixed-point with `places` decimals, '.' separator and ASCII minus; a value
/// that rounds to zero is printed without a sign.
std::string format_fixed(double value, int places);
/// p values: fixed-point, or one-decimal scientific when too small to show.
std::string format_p(double p, int places);

/// The MCM as an SVG document or as a standalone HTML page embedding the same
/// SVG plus an accessible data table. `metadata_json`, when non-empty, is
/// embedded verbatim (escaped) in the document. Throws Error{EmptyReport}.
std::string render_mcm(const MCMReport& report, const RenderStyle& style, DocumentFormat format,
                       std::string_view metadata_json = {});

enum class PairwiseMethod { Nemenyi, WilcoxonHolm };

std::string_view to_string(PairwiseMethod method) noexcept;

/// Geometry-independent content of a CD diagram.
struct CdLayout {
  PairwiseMethod method = PairwiseMethod::Nemenyi;
  double alpha = 0.05;
  std::size_t task_count = 0;
  /// Best (lowest average rank) first.
  std::vector<std::string> names;
  std::vector<double> average_ranks;
  /// Inclusive index ranges into `names` joined by a bar.
  std::vector<std::pair<std::size_t, std::size_t>> cliques;
  std::optional<double> critical_difference;
};

/// Maximal runs [i, j] (i < j) of consecutive positions whose members are all
/// pairwise non-significant; runs contained in another run are dropped.
/// `nonsignificant(a, b)` is queried with a < b.
template <typename Predicate>
std::vector<std::pair<std::size_t, std::size_t>> contiguous_cliques(std::size_t count, Predicate nonsignificant) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t end = i;
    for (std::size_t j = i + 1; j < count; ++j) {
      bool joins = true;
      for (std::size_t a = i; a < j && joins; ++a) joins = nonsignificant(a, j);
      if (!joins) break;
      end = j;
    }
    if (end > i) runs.emplace_back(i, end);
  }
  std::vector<std::pair<std::size_t, std::size_t>> maximal;
  for (const auto& r : runs) {
    bool contained = false;
    for (const auto& o : runs) {
      if (o != r && o.first <= r.first && r.second <= o.second) {
        contained = true;
        break;
      }
    }
    if (!contained) maximal.push_back(r);
  }
  return maximal;
}

/// Requires m >= 3 and n >= 2. Nemenyi supports alpha 0.05 and 0.10.
CdLayout compute_cd_layout(const ResultsMatrix& matrix, double alpha, PairwiseMethod method);

/// Horizontal position of an average rank: affine, best rank rightmost.
double cd_axis_x(double average_rank, std::size_t comparate_count, const RenderStyle& style);

std::string render_cd_diagram(const CdLayout& layout, const RenderStyle& style,
                              std::string_view metadata_json = {});
std::string render_cd_diagram(const ResultsMatrix& matrix, double alpha, PairwiseMethod method,
                              const RenderStyle& style = {}, std::string_view metadata_json = {});

}  // namespace mcm
