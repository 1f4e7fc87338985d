#include "allocsim/trials.hpp"

#include <cstdlib>
#include <string>

namespace allocsim {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ALLOCSIM_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
      // fall through to the default
    }
  }
  return 1;
}

}  // namespace allocsim
