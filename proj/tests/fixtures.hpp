#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <json.hpp>

#include "mcm/data.hpp"

namespace testutil {

inline std::filesystem::path fixture_dir() { return MCM_FIXTURE_DIR; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Witness {
  nlohmann::json descriptor;
  mcm::ResultsMatrix matrix;
};

inline Witness load_witness(const std::string& stem) {
  auto descriptor = nlohmann::json::parse(read_file(fixture_dir() / (stem + ".json")));
  const auto direction = *mcm::parse_direction(descriptor["direction"].get<std::string>());
  auto matrix = mcm::load_results_text(read_file(fixture_dir() / descriptor["data"].get<std::string>()),
                                       mcm::InputFormat::CSV, direction);
  return {std::move(descriptor), std::move(matrix)};
}

}  // namespace testutil
