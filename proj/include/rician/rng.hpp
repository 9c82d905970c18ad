#ifndef RICIAN_RNG_HPP
#define RICIAN_RNG_HPP

// Random streams. Every stochastic routine draws from std::mt19937_64
// seeded through std::seed_seq with the 64-bit user seed split into two
// 32-bit words, followed by a purpose tag and a stream index. Distinct
// (purpose, index) pairs give independent streams for the same seed.
// Variates come from the libstdc++ <random> distributions, so bit-exact
// replay is guaranteed for a given standard library build.

#include <cstdint>
#include <random>

namespace rician {

using Engine = std::mt19937_64;

enum class StreamPurpose : std::uint32_t {
  kSampling = 1,
  kMcmcChain = 2,
  kPredictive = 3,
  kStudyReplicate = 4,
  kTest = 99,
};

inline Engine make_engine(std::uint64_t seed, StreamPurpose purpose,
                          std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose),
                    static_cast<std::uint32_t>(index & 0xffffffffu),
                    static_cast<std::uint32_t>(index >> 32)};
  return Engine(seq);
}

/// Derives a child seed, e.g. the seed of replicate i of a study.
inline std::uint64_t derive_seed(std::uint64_t seed, StreamPurpose purpose,
                                 std::uint64_t index) {
  Engine e = make_engine(seed, purpose, index);
  return e();
}

}  // namespace rician

#endif
