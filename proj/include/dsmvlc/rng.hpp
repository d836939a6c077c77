#pragma once

#include <cstdint>
#include <random>

namespace dsmvlc {

// splitmix64 finalizer; used to derive independent per-trial seeds so that
// results do not depend on how trials are scheduled across workers.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t v) {
    return mix64(seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2)));
}

// Streams: 0 = payload bits, 1 = channel noise, 2 = detector randomness.
inline std::mt19937_64 make_trial_engine(std::uint64_t master, std::uint64_t snr_index,
                                         std::uint64_t block_index, std::uint64_t stream) {
    std::uint64_t s = master;
    s = combine_seed(s, snr_index);
    s = combine_seed(s, block_index);
    s = combine_seed(s, stream);
    return std::mt19937_64(s);
}

} // namespace dsmvlc
