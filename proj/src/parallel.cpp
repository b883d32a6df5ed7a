#include "febb/parallel.hpp"

#include <cstdlib>
#include <string>

namespace febb {

unsigned worker_count() {
  constexpr long kMaxWorkers = 256;
  if (const char* env = std::getenv("FEBB_THREADS")) {
    try {
      const long requested = std::stol(env);
      if (requested > 0) return static_cast<unsigned>(std::min(requested, kMaxWorkers));
    } catch (const std::exception&) {
      // unparsable values fall through to the default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace febb
