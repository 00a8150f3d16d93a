#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gaw {

/// 64-bit FNV-1a. Used for content-addressed ids, so the value must never
/// change between releases.
constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Sixteen lowercase hex digits.
std::string hex64(std::uint64_t v);

inline std::string content_hash(std::string_view bytes) { return hex64(fnv1a64(bytes)); }

/// splitmix64 finalizer; derives independent RNG seeds from (seed, stream).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace gaw
