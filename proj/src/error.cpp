#include "mcm/error.hpp"

#include <fmt/format.h>

namespace mcm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::UnknownComparate: return "UnknownComparate";
    case ErrorCode::SameComparate: return "SameComparate";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooFewComparates: return "TooFewComparates";
    case ErrorCode::TooFewTasks: return "TooFewTasks";
    case ErrorCode::UnsupportedAlpha: return "UnsupportedAlpha";
    case ErrorCode::MOutOfTableRange: return "MOutOfTableRange";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::PairNotInSubset: return "PairNotInSubset";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::PoolTooSmall: return "PoolTooSmall";
    case ErrorCode::PairNotInBothSets: return "PairNotInBothSets";
    case ErrorCode::EmptyReport: return "EmptyReport";
  }
  return "Error";
}

namespace {

std::string with_location(const std::string& message, const std::optional<CellLocation>& where) {
  if (!where) return message;
  return fmt::format("{} (row {}, column {})", message, where->row, where->column);
}

}  // namespace

std::string ParseError::decorate(const std::string& message, const std::optional<CellLocation>& where) {
  return with_location(message, where);
}

std::string ValidationError::decorate(const std::string& message,
                                      const std::optional<CellLocation>& where) {
  return with_location(message, where);
}

}  // namespace mcm
