#include "shuffleparity/parallel.hpp"

#include <cstdlib>
#include <string>

namespace shuffleparity {

int default_thread_count() {
  if (const char* env = std::getenv("SHUFFLEPARITY_THREADS")) {
    try {
      const int parsed = std::stoi(env);
      if (parsed > 0) return parsed;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace shuffleparity
