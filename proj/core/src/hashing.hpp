#pragma once

#include <cstdint>
#include <string_view>

namespace segsynth::detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xCBF29CE484222325ull) {
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

inline constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

/// Counter-based stream: the n-th value depends only on (key, n).
inline constexpr std::uint64_t stream(std::uint64_t key, std::uint64_t n) { return splitmix64(key + 0x632BE59BD9B4E019ull * (n + 1)); }

}  // namespace segsynth::detail
