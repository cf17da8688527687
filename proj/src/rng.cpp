#include "ouestim/rng.hpp"

#include <array>

namespace ouestim {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t replicate,
                             std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (replicate * 0xD1B54A32D192ED03ULL);
  key = splitmix64(state);
  state = key ^ (stream * 0x8CB92BA72F3D8DD7ULL);
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < words.size(); i += 2) {
    const std::uint64_t w = splitmix64(state);
    words[i] = static_cast<std::uint32_t>(w);
    words[i + 1] = static_cast<std::uint32_t>(w >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream)
    : engine_(keyed_engine(seed, replicate, stream)) {}

}  // namespace ouestim
