#include "supermarket/ensemble.hpp"

#include <cstdlib>

namespace supermarket {

int resolve_workers(int requested) {
  if (const char* env = std::getenv("SUPERMARKET_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw std::invalid_argument("SUPERMARKET_WORKERS must be a positive integer");
    return static_cast<int>(v);
  }
  if (requested >= 1) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace supermarket
