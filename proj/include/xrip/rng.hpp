#pragma once

#include <cstdint>

namespace xrip {

// Identifies one reproducible random stream. (master_seed, stream_index)
// fully determines every value drawn from the stream.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    SeedSpec derived(std::uint64_t sub) const {
        // Stable substream derivation; used e.g. for the mask/value pair of
        // the Bernoulli-subgaussian model and for per-trial seeds.
        return SeedSpec{master_seed, stream_index * 0x9e3779b97f4a7c15ULL + sub + 1};
    }
};

// Counter-based generator: value i of a stream is a pure function of
// (master_seed, stream_index, i), so parallel generation is order-independent.
class CounterRng {
  public:
    explicit CounterRng(SeedSpec seed) : seed_(seed) {}

    // Raw 64 uniform bits at the given counter.
    std::uint64_t bits(std::uint64_t counter) const;

    // Uniform double in [0, 1).
    double uniform(std::uint64_t counter) const;

    // Uniform double in (0, 1] (never exactly 0; safe under log()).
    double uniform_pos(std::uint64_t counter) const;

    // Standard normal via Box-Muller on counters (2c, 2c+1) of a sub-domain,
    // so normal and uniform draws never collide.
    double normal(std::uint64_t counter) const;

    // Fair sign in {-1, +1}.
    int sign(std::uint64_t counter) const;

  private:
    SeedSpec seed_;
};

}  // namespace xrip
