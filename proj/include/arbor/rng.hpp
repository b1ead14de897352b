#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace arbor {

/// Derive a child seed from a root seed and a stream name (FNV-1a over the
/// name, mixed with the root). Every module draws from its own named stream
/// so the pipeline stays reproducible end to end.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stream) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : stream) {
        h ^= c;
        h *= 1099511628211ull;
    }
    h ^= root + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    // splitmix64 finalizer
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index) {
    return derive_seed(derive_seed(root, stream) ^ (index * 0x9e3779b97f4a7c15ull), stream);
}

using Rng = std::mt19937_64;

}  // namespace arbor
