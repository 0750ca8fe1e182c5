#include "flipmix/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace flipmix {

unsigned resolve_threads(std::optional<unsigned> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("FLIPMIX_THREADS")) {
    const std::string_view text(env);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && ptr == text.data() + text.size() && value > 0) return value;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace flipmix
