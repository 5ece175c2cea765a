#pragma once

#include <cstdint>
#include <string_view>

namespace vnlw {

/// SplitMix64 finalizer; the 64-bit mixing function used for every seed split.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::string_view kSeedMixName = "splitmix64";

/// seed_i = H(master || i).
constexpr std::uint64_t split_seed(std::uint64_t master, std::uint64_t index)
{
    return mix64(mix64(master) ^ mix64(index + 0xD1B54A32D192ED03ULL));
}

/// Counter-based stream: the k-th output is a pure function of (key, k).
class CounterStream {
public:
    explicit CounterStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next() { return mix64(key_ ^ mix64(counter_++)); }
    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace vnlw
