#include "ergokit/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ergokit {

int thread_budget() {
  if (const char* env = std::getenv("ERGOKIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // Unparsable values fall back to the hardware count.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x65726b6fu};
  return std::mt19937_64(seq);
}

}  // namespace ergokit
