#pragma once

#include <cstdint>
#include <random>

namespace modleach {

// Independent random streams derived from one run seed. Deployment does not
// depend on the variant, so runs sharing a seed share node placement.
enum class Stream : std::uint32_t { Deployment = 1, Election = 2, Sensing = 3 };

// mt19937_64 plus a portable [0, 1) mapping; std distributions are not
// reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace modleach
