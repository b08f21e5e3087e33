#ifndef ARBENCH_RNG_HPP
#define ARBENCH_RNG_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace arbench {

/// Deterministic 64-bit generator (splitmix64). The algorithm is fixed so
/// that identical seeds produce identical datasets across platforms and
/// reimplementations; do not swap for std::mt19937 or similar.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, n). Multiply-shift reduction; n must be > 0.
    uint64_t bounded(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Uniform value in [lo, hi] inclusive.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(bounded(static_cast<uint64_t>(hi - lo + 1)));
    }

    char pick(std::string_view alphabet) {
        return alphabet[bounded(alphabet.size())];
    }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[bounded(items.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            size_t j = bounded(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    uint64_t state_;
};

/// FNV-1a 64-bit. Stable across runs and platforms (std::hash is not).
inline uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Derives an independent seed from a base seed and a tag string.
inline uint64_t derive_seed(uint64_t seed, std::string_view tag) {
    return SplitMix64(seed ^ fnv1a64(tag)).next();
}

inline std::string to_hex(uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[value & 0xF];
        value >>= 4;
    }
    return s;
}

}  // namespace arbench

#endif
