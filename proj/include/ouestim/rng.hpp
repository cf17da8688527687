#pragma once

#include <cstdint>
#include <random>

namespace ouestim {

// Independent normal stream keyed by (seed, replicate, stream). The key is
// mixed with SplitMix64 and seeds a Mersenne Twister, so the draws for one
// replicate never depend on which other replicates were generated or in
// which order.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream = 0);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace ouestim
