#include "xrip/rng.hpp"

#include <cmath>
#include <numbers>

namespace xrip {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
    std::uint64_t h = mix64(seed_.master_seed);
    h = mix64(h ^ seed_.stream_index);
    h = mix64(h ^ counter);
    return h;
}

double CounterRng::uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_pos(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
    // Box-Muller; the pair lives in a disjoint counter sub-domain.
    const std::uint64_t base = 2 * counter;
    const double u1 = (static_cast<double>(bits(base ^ 0x8000000000000000ULL) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(bits((base + 1) ^ 0x8000000000000000ULL) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int CounterRng::sign(std::uint64_t counter) const {
    return (bits(counter) & 1) ? 1 : -1;
}

}  // namespace xrip
