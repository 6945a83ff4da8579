#include "mcm/data.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "mcm/error.hpp"

namespace mcm {

namespace {

using Row = std::vector<std::string>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

// Splits CSV text into records. Double-quoted fields may contain commas,
// newlines and doubled quotes. Unquoted fields are trimmed.
std::vector<Row> split_csv(std::string_view text) {
  std::vector<Row> records;
  Row current;
  std::string field;
  bool quoted_field = false;
  bool in_quotes = false;
  std::size_t line = 1;
  std::size_t quote_line = 0;

  auto finish_field = [&] {
    current.push_back(quoted_field ? field : std::string(trim(field)));
    field.clear();
    quoted_field = false;
  };
  auto finish_record = [&] {
    finish_field();
    const bool blank = current.size() == 1 && current.front().empty();
    if (!blank) records.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!trim(field).empty()) {
          throw ParseError("quote inside an unquoted field",
                           CellLocation{records.size() + 1, current.size() + 1});
        }
        field.clear();
        in_quotes = true;
        quoted_field = true;
        quote_line = line;
        break;
      case ',':
        finish_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        finish_record();
        break;
      default:
        if (quoted_field) {
          if (c == ' ' || c == '\t') break;
          throw ParseError("text after closing quote",
                           CellLocation{records.size() + 1, current.size() + 1});
        }
        field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError(fmt::format("unterminated quoted field opened on line {}", quote_line));
  if (!field.empty() || quoted_field || !current.empty()) finish_record();
  return records;
}

// Returns nullopt for an empty cell.
std::optional<double> parse_score(std::string_view cell, CellLocation where) {
  if (cell.empty()) return std::nullopt;
  std::string_view digits = cell;
  if (digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw ValidationError(fmt::format("score '{}' is out of range", cell), where);
  }
  if (ec != std::errc{} || end != digits.data() + digits.size()) {
    throw ParseError(fmt::format("cannot parse '{}' as a number", cell), where);
  }
  return value;
}

ResultsMatrix load_csv(std::string_view text, Direction direction) {
  const auto records = split_csv(text);
  if (records.empty()) throw ParseError("empty CSV input");

  const Row& header = records.front();
  if (header.size() < 2) throw ValidationError("header must name at least one task", CellLocation{1, 2});
  std::vector<std::string> tasks(header.begin() + 1, header.end());
  const std::size_t n = tasks.size();

  std::vector<std::string> comparates;
  std::vector<double> scores;
  comparates.reserve(records.size() - 1);
  scores.reserve((records.size() - 1) * n);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const Row& record = records[r];
    const std::size_t row_number = r + 1;
    if (record.size() > n + 1) {
      throw ParseError(fmt::format("row has {} cells, header has {}", record.size(), n + 1),
                       CellLocation{row_number, n + 2});
    }
    comparates.push_back(record.front());
    for (std::size_t j = 0; j < n; ++j) {
      const CellLocation where{row_number, j + 2};
      const std::optional<double> value =
          j + 1 < record.size() ? parse_score(record[j + 1], where) : std::nullopt;
      if (!value) {
        throw ValidationError(
            fmt::format("missing score for '{}' on task '{}'", record.front(), tasks[j]), where);
      }
      scores.push_back(*value);
    }
  }
  return ResultsMatrix(std::move(comparates), std::move(tasks), std::move(scores), direction);
}

std::vector<std::string> json_names(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw ParseError(fmt::format("JSON member '{}' must be an array of strings", key));
  }
  std::vector<std::string> names;
  for (const auto& item : doc[key]) {
    if (!item.is_string()) throw ParseError(fmt::format("JSON member '{}' must contain only strings", key));
    names.push_back(item.get<std::string>());
  }
  return names;
}

ResultsMatrix load_json(std::string_view text, Direction direction) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ParseError("JSON results must be an object");

  if (doc.contains("direction")) {
    const auto& d = doc["direction"];
    const auto parsed = d.is_string() ? parse_direction(d.get<std::string>()) : std::nullopt;
    if (!parsed) throw ParseError("JSON member 'direction' must be \"higher\" or \"lower\"");
    if (*parsed != direction) {
      throw ValidationError(fmt::format("file declares direction '{}' but '{}' was requested",
                                        to_string(*parsed), to_string(direction)));
    }
  }

  auto comparates = json_names(doc, "comparates");
  auto tasks = json_names(doc, "tasks");
  if (!doc.contains("scores") || !doc["scores"].is_array()) {
    throw ParseError("JSON member 'scores' must be an array of rows");
  }
  const auto& rows = doc["scores"];
  if (rows.size() != comparates.size()) {
    throw ValidationError(fmt::format("'scores' has {} rows for {} comparates", rows.size(),
                                      comparates.size()));
  }
  std::vector<double> scores;
  scores.reserve(comparates.size() * tasks.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!row.is_array()) throw ParseError("each 'scores' row must be an array", CellLocation{i + 1, 0});
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      const CellLocation where{i + 1, j + 1};
      if (j >= row.size() || row[j].is_null()) {
        throw ValidationError(fmt::format("missing score for comparate {} task {}", i + 1, j + 1), where);
      }
      if (!row[j].is_number()) throw ParseError("score must be a number", where);
      scores.push_back(row[j].get<double>());
    }
    if (row.size() > tasks.size()) {
      throw ParseError(fmt::format("row has {} scores for {} tasks", row.size(), tasks.size()),
                       CellLocation{i + 1, tasks.size() + 1});
    }
  }
  return ResultsMatrix(std::move(comparates), std::move(tasks), std::move(scores), direction);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string shortest(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace

ResultsMatrix load_results_text(std::string_view text, InputFormat format, Direction direction) {
  return format == InputFormat::CSV ? load_csv(text, direction) : load_json(text, direction);
}

ResultsMatrix load_results(std::istream& source, InputFormat format, Direction direction) {
  const std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (source.bad()) throw ParseError("failed to read input stream");
  return load_results_text(text, format, direction);
}

std::string to_csv(const ResultsMatrix& matrix) {
  std::string out = "comparate";
  for (const auto& task : matrix.tasks()) {
    out += ',';
    out += csv_field(task);
  }
  out += '\n';
  for (std::size_t i = 0; i < matrix.comparate_count(); ++i) {
    out += csv_field(matrix.comparates()[i]);
    for (double v : matrix.row(i)) {
      out += ',';
      out += shortest(v);
    }
    out += '\n';
  }
  return out;
}

std::string to_json_text(const ResultsMatrix& matrix) {
  nlohmann::ordered_json doc;
  doc["direction"] = std::string(to_string(matrix.direction()));
  doc["comparates"] = matrix.comparates();
  doc["tasks"] = matrix.tasks();
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < matrix.comparate_count(); ++i) {
    rows.push_back(std::vector<double>(matrix.row(i).begin(), matrix.row(i).end()));
  }
  doc["scores"] = std::move(rows);
  return doc.dump(2) + "\n";
}

ResultsMatrix restrict_to_complete_tasks(std::span<const ResultsMatrix> fragments) {
  if (fragments.empty()) throw Error(ErrorCode::EmptyIntersection, "no fragments supplied");
  const Direction direction = fragments.front().direction();

  std::vector<std::string> comparates;
  std::vector<std::string> tasks;
  std::unordered_map<std::string, std::size_t> comparate_index;
  std::unordered_map<std::string, std::size_t> task_index;
  // (comparate, task) -> score
  std::map<std::pair<std::size_t, std::size_t>, double> cells;

  for (const auto& fragment : fragments) {
    if (fragment.direction() != direction) {
      throw ValidationError("fragments disagree on direction");
    }
    for (const auto& t : fragment.tasks()) {
      if (task_index.emplace(t, tasks.size()).second) tasks.push_back(t);
    }
    for (std::size_t i = 0; i < fragment.comparate_count(); ++i) {
      const auto& name = fragment.comparates()[i];
      const auto [it, inserted] = comparate_index.emplace(name, comparates.size());
      if (inserted) comparates.push_back(name);
      for (std::size_t j = 0; j < fragment.task_count(); ++j) {
        const auto key = std::make_pair(it->second, task_index.at(fragment.tasks()[j]));
        const double v = fragment.score(i, j);
        const auto [cell, fresh] = cells.emplace(key, v);
        if (!fresh && cell->second != v) {
          throw ValidationError(fmt::format("conflicting scores for '{}' on '{}'", name,
                                            fragment.tasks()[j]));
        }
      }
    }
  }

  std::vector<std::size_t> kept;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const bool complete = std::all_of(comparates.begin(), comparates.end(), [&](const std::string& c) {
      return cells.contains({comparate_index.at(c), t});
    });
    if (complete) kept.push_back(t);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyIntersection, "no task has results for every comparate");
  }

  std::vector<std::string> kept_names;
  for (auto t : kept) kept_names.push_back(tasks[t]);
  std::vector<double> grid;
  grid.reserve(comparates.size() * kept.size());
  for (std::size_t c = 0; c < comparates.size(); ++c) {
    for (auto t : kept) grid.push_back(cells.at({c, t}));
  }
  return ResultsMatrix(std::move(comparates), std::move(kept_names), std::move(grid), direction);
}

ResultsMatrix weaken_comparate(const ResultsMatrix& matrix, std::string_view target,
                               std::string_view reference, double weight, std::string new_name) {
  const std::size_t t = matrix.index_of(target);
  const std::size_t r = matrix.index_of(reference);
  if (t == r) throw Error(ErrorCode::SameComparate, "target and reference must differ");
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("weight {} is outside [0, 1]", weight));
  }
  if (matrix.find(new_name)) {
    throw Error(ErrorCode::NameCollision, fmt::format("comparate '{}' already exists", new_name));
  }
  std::vector<double> mixed(matrix.task_count());
  for (std::size_t j = 0; j < mixed.size(); ++j) {
    const double a = matrix.score(t, j);
    const double b = matrix.score(r, j);
    // Clamped so rounding never leaves the segment between the two scores.
    mixed[j] = std::clamp(weight * a + (1.0 - weight) * b, std::min(a, b), std::max(a, b));
  }
  return matrix.with_row(std::move(new_name), std::move(mixed));
}

}  // namespace mcm
