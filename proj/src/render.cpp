#include "mcm/render.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mcm/error.hpp"
#include "mcm/stats.hpp"

namespace mcm {

std::string Rgb::hex() const { return fmt::format("#{:02x}{:02x}{:02x}", r, g, b); }

Rgb diverging_color(double mean_difference, double limit, const RenderStyle& style) {
  if (mean_difference == 0.0 || !(limit > 0.0)) return style.color_neutral;
  const double t = std::min(1.0, std::fabs(mean_difference) / limit);
  const Rgb& end = mean_difference > 0.0 ? style.color_positive : style.color_negative;
  auto mix = [t](std::uint8_t from, std::uint8_t to) {
    return static_cast<std::uint8_t>(std::lround(from + t * (static_cast<double>(to) - from)));
  };
  return {mix(style.color_neutral.r, end.r), mix(style.color_neutral.g, end.g),
          mix(style.color_neutral.b, end.b)};
}

std::string format_fixed(double value, int places) {
  std::string s = fmt::format("{:.{}f}", value, places);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_p(double p, int places) {
  if (p >= std::pow(10.0, -places) || p == 0.0) return format_fixed(p, places);
  return fmt::format("{:.1e}", p);
}

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Coordinates are always printed with two decimals so documents are stable
// byte for byte.
std::string num(double v) { return format_fixed(v, 2); }

void svg_open(std::string& out, double width, double height, const RenderStyle& style,
              std::string_view metadata_json) {
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"{2}\" font-size=\"{3}\">\n",
      num(width), num(height), xml_escape(style.font_family), num(style.font_size));
  if (!metadata_json.empty()) {
    out += "<metadata>";
    out += xml_escape(metadata_json);
    out += "</metadata>\n";
  }
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", num(width),
                     num(height));
}

void text(std::string& out, double x, double y, std::string_view anchor, std::string_view content,
          bool bold = false, std::string_view extra = {}) {
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"{}\"{}{}>{}</text>\n", num(x), num(y), anchor,
                     bold ? " font-weight=\"bold\"" : "", extra, xml_escape(content));
}

double color_limit(const MCMReport& report, const RenderStyle& style) {
  if (style.color_scale_limit) return *style.color_scale_limit;
  double limit = 0.0;
  for (const auto& c : report.cells) {
    if (c) limit = std::max(limit, std::fabs(c->comparison.mean_difference));
  }
  return limit;
}

std::string mcm_svg(const MCMReport& report, const RenderStyle& style, std::string_view metadata_json) {
  const std::size_t rows = report.row_order.size();
  const std::size_t cols = report.column_order.size();
  const double grid_x = style.margin + style.row_label_width;
  const double grid_y = style.margin + style.column_header_height;
  const double width = grid_x + static_cast<double>(cols) * style.cell_width + style.margin;
  const double legend_y = grid_y + static_cast<double>(rows) * style.cell_height + 14.0;
  const double height = legend_y + style.legend_height + style.margin;
  const double line = style.font_size * 1.25;
  const double limit = color_limit(report, style);
  const int places = style.cell_decimal_places;

  std::string out;
  svg_open(out, width, height, style, metadata_json);

  for (std::size_t c = 0; c < cols; ++c) {
    const auto& name = report.column_order[c];
    const double cx = grid_x + (static_cast<double>(c) + 0.5) * style.cell_width;
    text(out, cx, grid_y - 8.0 - line, "middle", name, true);
    text(out, cx, grid_y - 8.0, "middle", format_fixed(report.mean_of(name), places));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& name = report.row_order[r];
    const double cy = grid_y + (static_cast<double>(r) + 0.5) * style.cell_height;
    text(out, grid_x - 10.0, cy - 0.15 * line, "end", name, true);
    text(out, grid_x - 10.0, cy + 0.85 * line, "end", format_fixed(report.mean_of(name), places));
  }

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = grid_x + static_cast<double>(c) * style.cell_width;
      const double y = grid_y + static_cast<double>(r) * style.cell_height;
      const auto& slot = report.cell(r, c);
      const Rgb fill = slot ? diverging_color(slot->comparison.mean_difference, limit, style) : style.color_neutral;
      if (slot) {
        out += fmt::format("<g class=\"cell\" data-row=\"{}\" data-col=\"{}\">\n", xml_escape(slot->comparison.row),
                           xml_escape(slot->comparison.column));
      }
      out += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#bdbdbd\" "
          "stroke-width=\"1\"/>\n",
          num(x), num(y), num(style.cell_width), num(style.cell_height), fill.hex());
      if (!slot) continue;
      const auto& cmp = slot->comparison;
      const bool bold = style.bold_significant && slot->significant;
      const double cx = x + style.cell_width / 2.0;
      const double top = y + (style.cell_height - 3.0 * line) / 2.0 + style.font_size;
      text(out, cx, top, "middle", format_fixed(cmp.mean_difference, places), bold);
      text(out, cx, top + line, "middle", fmt::format("{} / {} / {}", cmp.wins, cmp.ties, cmp.losses), bold);
      text(out, cx, top + 2.0 * line, "middle", format_p(cmp.p_value, places), bold);
      out += "</g>\n";
    }
  }

  // Legend: diverging bar from -limit (column better) to +limit (row better).
  const double bar_w = std::max(160.0, std::min(360.0, static_cast<double>(cols) * style.cell_width));
  const double bar_x = grid_x + (static_cast<double>(cols) * style.cell_width - bar_w) / 2.0;
  out += "<defs><linearGradient id=\"mcm-scale\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"0\">";
  out += fmt::format("<stop offset=\"0\" stop-color=\"{}\"/>", style.color_negative.hex());
  out += fmt::format("<stop offset=\"0.5\" stop-color=\"{}\"/>", style.color_neutral.hex());
  out += fmt::format("<stop offset=\"1\" stop-color=\"{}\"/>", style.color_positive.hex());
  out += "</linearGradient></defs>\n";
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"12.00\" fill=\"url(#mcm-scale)\" stroke=\"#bdbdbd\" "
      "stroke-width=\"1\"/>\n",
      num(bar_x), num(legend_y), num(bar_w));
  const double ly = legend_y + 12.0 + line;
  text(out, bar_x, ly, "start", format_fixed(-limit, places));
  text(out, bar_x + bar_w / 2.0, ly, "middle", format_fixed(0.0, places));
  text(out, bar_x + bar_w, ly, "end", format_fixed(limit, places));
  text(out, bar_x + bar_w / 2.0, ly + line, "middle",
       fmt::format("mean difference (row - column); bold: p < {}", report.alpha));
  out += "</svg>\n";
  return out;
}

std::string mcm_html(const MCMReport& report, const RenderStyle& style, std::string_view metadata_json) {
  const int places = style.cell_decimal_places;
  std::string out;
  out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  out += "<title>Multi-Comparison Matrix</title>\n<style>\n";
  out += fmt::format("body {{ font-family: {}; margin: 24px; }}\n", xml_escape(style.font_family));
  out += "table { border-collapse: collapse; margin-top: 24px; }\n";
  out += "th, td { border: 1px solid #bdbdbd; padding: 4px 8px; text-align: right; }\n";
  out += "td.name { text-align: left; }\ntr.significant td { font-weight: bold; }\n</style>\n";
  if (!metadata_json.empty()) {
    std::string safe;
    for (char c : metadata_json) {
      if (c == '<') {
        safe += "\\u003c";
      } else {
        safe.push_back(c);
      }
    }
    out += "<script type=\"application/json\" id=\"mcm-metadata\">";
    out += safe;
    out += "</script>\n";
  }
  out += "</head>\n<body>\n<figure>\n";
  std::string svg = mcm_svg(report, style, {});
  svg.erase(0, svg.find('\n') + 1);  // drop the XML declaration when inlined
  out += svg;
  out += "<figcaption>Cells show the mean difference (row minus column), wins / ties / losses for the row "
         "comparate, and the Wilcoxon signed-rank p value.</figcaption>\n</figure>\n";
  out += "<table>\n<thead><tr><th>row</th><th>column</th><th>mean difference</th><th>wins</th><th>ties</th>"
         "<th>losses</th><th>p</th><th>significant</th></tr></thead>\n<tbody>\n";
  for (const auto& slot : report.cells) {
    if (!slot) continue;
    const auto& c = slot->comparison;
    out += fmt::format(
        "<tr{}><td class=\"name\">{}</td><td class=\"name\">{}</td><td>{}</td><td>{}</td><td>{}</td>"
        "<td>{}</td><td>{}</td><td>{}</td></tr>\n",
        slot->significant && style.bold_significant ? " class=\"significant\"" : "", xml_escape(c.row),
        xml_escape(c.column), format_fixed(c.mean_difference, places), c.wins, c.ties, c.losses,
        format_p(c.p_value, places), slot->significant ? "yes" : "no");
  }
  out += "</tbody>\n</table>\n</body>\n</html>\n";
  return out;
}

}  // namespace

std::string render_mcm(const MCMReport& report, const RenderStyle& style, DocumentFormat format,
                       std::string_view metadata_json) {
  if (report.row_order.empty() || report.column_order.empty() ||
      std::none_of(report.cells.begin(), report.cells.end(), [](const auto& c) { return c.has_value(); })) {
    throw Error(ErrorCode::EmptyReport, "report has no comparisons to render");
  }
  return format == DocumentFormat::SVG ? mcm_svg(report, style, metadata_json)
                                       : mcm_html(report, style, metadata_json);
}

std::string_view to_string(PairwiseMethod method) noexcept {
  return method == PairwiseMethod::Nemenyi ? "nemenyi" : "wilcoxon-holm";
}

CdLayout compute_cd_layout(const ResultsMatrix& matrix, double alpha, PairwiseMethod method) {
  const std::size_t m = matrix.comparate_count();
  if (m < 3) throw Error(ErrorCode::TooFewComparates, "CD diagram needs at least 3 comparates");
  if (matrix.task_count() < 2) throw Error(ErrorCode::TooFewTasks, "CD diagram needs at least 2 tasks");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, fmt::format("alpha must lie in (0, 1), got {}", alpha));
  }

  const RankTable ranks = compute_ranks(matrix);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ranks.average_ranks[a] != ranks.average_ranks[b]) return ranks.average_ranks[a] < ranks.average_ranks[b];
    return matrix.comparates()[a] < matrix.comparates()[b];
  });

  CdLayout layout;
  layout.method = method;
  layout.alpha = alpha;
  layout.task_count = matrix.task_count();
  for (auto i : order) {
    layout.names.push_back(matrix.comparates()[i]);
    layout.average_ranks.push_back(ranks.average_ranks[i]);
  }

  if (method == PairwiseMethod::Nemenyi) {
    const double cd = nemenyi_critical_difference(m, matrix.task_count(), nemenyi_alpha(alpha));
    layout.critical_difference = cd;
    layout.cliques = contiguous_cliques(m, [&](std::size_t a, std::size_t b) {
      return std::fabs(layout.average_ranks[b] - layout.average_ranks[a]) <= cd;
    });
  } else {
    const HolmFamily family = holm_all_pairs(matrix, alpha);
    layout.cliques = contiguous_cliques(
        m, [&](std::size_t a, std::size_t b) { return !family.is_significant(order[a], order[b]); });
  }
  return layout;
}

double cd_axis_x(double average_rank, std::size_t comparate_count, const RenderStyle& style) {
  const double left = style.cd_axis_inset;
  const double right = style.cd_width - style.cd_axis_inset;
  const auto m = static_cast<double>(comparate_count);
  return left + (m - average_rank) / (m - 1.0) * (right - left);
}

std::string render_cd_diagram(const CdLayout& layout, const RenderStyle& style, std::string_view metadata_json) {
  const std::size_t m = layout.names.size();
  const double axis_y = style.cd_axis_y;
  const double left = style.cd_axis_inset;
  const double right = style.cd_width - style.cd_axis_inset;
  const double bars_top = axis_y + 12.0;
  const double labels_top =
      bars_top + static_cast<double>(layout.cliques.size()) * style.cd_bar_spacing + style.cd_label_spacing;
  const std::size_t right_count = (m + 1) / 2;  // best half labelled on the right
  const std::size_t left_count = m - right_count;
  const double height =
      labels_top + static_cast<double>(std::max(right_count, left_count)) * style.cd_label_spacing + style.margin;
  const int places = style.rank_decimal_places;

  std::string out;
  svg_open(out, style.cd_width, height, style, metadata_json);

  // Axis with one tick per integer rank; rank m on the left, rank 1 on the right.
  out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n",
                     num(left), num(axis_y), num(right), num(axis_y));
  for (std::size_t r = 1; r <= m; ++r) {
    const double x = cd_axis_x(static_cast<double>(r), m, style);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
                       num(x), num(axis_y - 6.0), num(axis_y));
    text(out, x, axis_y - 10.0, "middle", std::to_string(r));
  }

  if (layout.critical_difference) {
    const double cd = *layout.critical_difference;
    const double x0 = left;
    const double x1 = left + cd / (static_cast<double>(m) - 1.0) * (right - left);
    const double y = axis_y - 50.0;
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"2\"/>\n",
                       num(x0), num(y), num(x1), num(y));
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
                       num(x0), num(y - 4.0), num(y + 4.0));
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
                       num(x1), num(y - 4.0), num(y + 4.0));
    text(out, (x0 + x1) / 2.0, y - 7.0, "middle", fmt::format("CD = {}", format_fixed(cd, 3)));
  }

  for (std::size_t k = 0; k < m; ++k) {
    const double x = cd_axis_x(layout.average_ranks[k], m, style);
    const bool on_right = k < right_count;
    const std::size_t slot = on_right ? k : m - 1 - k;
    const double y = labels_top + static_cast<double>(slot) * style.cd_label_spacing;
    const double end_x = on_right ? right + 20.0 : left - 20.0;
    out += fmt::format(
        "<polyline points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n", num(x),
        num(axis_y), num(x), num(y), num(end_x), num(y));
    const std::string label =
        fmt::format("{} ({})", layout.names[k], format_fixed(layout.average_ranks[k], places));
    text(out, on_right ? end_x + 4.0 : end_x - 4.0, y + style.font_size / 3.0, on_right ? "start" : "end", label);
  }

  for (std::size_t b = 0; b < layout.cliques.size(); ++b) {
    const auto [i, j] = layout.cliques[b];
    const double y = bars_top + static_cast<double>(b) * style.cd_bar_spacing;
    // names are best first, so position i sits right of position j.
    const double x_right = cd_axis_x(layout.average_ranks[i], m, style) + 4.0;
    const double x_left = cd_axis_x(layout.average_ranks[j], m, style) - 4.0;
    out += fmt::format(
        "<line class=\"clique\" data-from=\"{}\" data-to=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" "
        "stroke=\"#000000\" stroke-width=\"4\" stroke-linecap=\"round\"/>\n",
        i, j, num(x_left), num(y), num(x_right), num(y));
  }

  const std::string caption = layout.method == PairwiseMethod::Nemenyi
                                  ? fmt::format("Nemenyi, alpha = {}, n = {}", layout.alpha,
                                                layout.task_count)
                                  : fmt::format("Wilcoxon signed-rank with Holm correction, alpha = {}, n = {}",
                                                layout.alpha, layout.task_count);
  text(out, style.cd_width / 2.0, height - style.margin / 2.0, "middle", caption, false,
       " fill=\"#555555\"");
  out += "</svg>\n";
  return out;
}

std::string render_cd_diagram(const ResultsMatrix& matrix, double alpha, PairwiseMethod method,
                              const RenderStyle& style, std::string_view metadata_json) {
  return render_cd_diagram(compute_cd_layout(matrix, alpha, method), style, metadata_json);
}

}  // namespace mcm
