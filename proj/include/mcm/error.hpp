#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mcm {

enum class ErrorCode {
  Parse,
  Validation,
  EmptyIntersection,
  NameCollision,
  UnknownComparate,
  SameComparate,
  EmptyInput,
  TooFewComparates,
  TooFewTasks,
  UnsupportedAlpha,
  MOutOfTableRange,
  InvalidAlpha,
  InvalidP,
  InvalidConfig,
  PairNotInSubset,
  OverlappingSets,
  PoolTooSmall,
  PairNotInBothSets,
  EmptyReport,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base of every error raised by the library. Carries a machine-readable code
/// so callers (the CLI in particular) can map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Location of a problem inside a tabular input. Rows and columns are 1-based
/// and count the header, so they match what a spreadsheet shows.
struct CellLocation {
  std::size_t row = 0;
  std::size_t column = 0;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::optional<CellLocation> where = std::nullopt)
      : Error(ErrorCode::Parse, decorate(message, where)), where_(where) {}

  const std::optional<CellLocation>& where() const noexcept { return where_; }

 private:
  static std::string decorate(const std::string& message, const std::optional<CellLocation>& where);
  std::optional<CellLocation> where_;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::optional<CellLocation> where = std::nullopt)
      : Error(ErrorCode::Validation, decorate(message, where)), where_(where) {}

  const std::optional<CellLocation>& where() const noexcept { return where_; }

 private:
  static std::string decorate(const std::string& message, const std::optional<CellLocation>& where);
  std::optional<CellLocation> where_;
};

}  // namespace mcm
