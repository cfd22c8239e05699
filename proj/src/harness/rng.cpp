#include "vgrasp/harness/rng.hpp"

#include "vgrasp/errors.hpp"

namespace vgrasp {

std::uint64_t Xoshiro256::below(std::uint64_t bound)
{
  if (bound == 0)
    throw InvalidInput("random bound must be positive");
  // Reject the low residue so every value in [0, bound) is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold)
      return r % bound;
  }
}

}  // namespace vgrasp
