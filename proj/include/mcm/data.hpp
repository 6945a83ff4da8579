#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcm/results_matrix.hpp"

namespace mcm {

enum class InputFormat { CSV, JSON };

/// Reads a results table.
///
/// CSV is the wide layout: a header row whose first cell labels the comparate
/// column followed by the task names, then one row per comparate holding its
/// name and one score per task. Fields may be double-quoted. Cells are split on
/// ',' and numbers use '.' as the decimal separator regardless of locale.
///
/// JSON is {"direction": "higher"|"lower", "comparates": [...], "tasks": [...],
/// "scores": [[...], ...]} with row-major scores. The "direction" member is
/// optional; when present it must agree with `direction`.
///
/// Throws ParseError for malformed syntax and ValidationError for structural
/// problems (duplicate names, missing cells, non-finite values). Both carry
/// the offending (row, column) when one exists.
ResultsMatrix load_results(std::istream& source, InputFormat format, Direction direction);
ResultsMatrix load_results_text(std::string_view text, InputFormat format, Direction direction);

/// CSV serialization in the same wide layout. Scores are written with the
/// shortest representation that round-trips to the same double.
std::string to_csv(const ResultsMatrix& matrix);
std::string to_json_text(const ResultsMatrix& matrix);

/// Joins per-source fragments into a single matrix covering only the tasks
/// every comparate has a score for. Comparate order and task order follow
/// first appearance across the fragments. A comparate that appears in several
/// fragments contributes the union of its tasks; if it scores the same task
/// twice with different values, that is a ValidationError.
///
/// Throws Error{EmptyIntersection} when no task is covered by all comparates.
ResultsMatrix restrict_to_complete_tasks(std::span<const ResultsMatrix> fragments);

/// Appends a synthetic comparate whose score on every task is
/// weight * target + (1 - weight) * reference.
ResultsMatrix weaken_comparate(const ResultsMatrix& matrix, std::string_view target,
                               std::string_view reference, double weight, std::string new_name);

}  // namespace mcm
