#include "mcm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace mcm {

std::size_t default_worker_count() {
  if (const char* env = std::getenv("MCM_THREADS"); env != nullptr && *env != '\0') {
    try {
      const auto value = std::stoul(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
      // fall through to the hardware count
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace mcm
