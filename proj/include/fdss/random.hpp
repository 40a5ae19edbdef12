#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fdss {

/// Named random stream of a master seed. Each (stream, index) pair yields an
/// independent engine, so per-trial draws do not depend on how trials are
/// scheduled across threads or on how many trials other streams consume.
class SeedStream {
public:
    SeedStream(std::uint64_t master, std::string_view name);

    std::uint64_t seed_for(std::uint64_t index) const;
    std::mt19937_64 engine(std::uint64_t index) const { return std::mt19937_64(seed_for(index)); }
    SeedStream substream(std::string_view name) const;

    std::uint64_t key() const { return key_; }

private:
    explicit SeedStream(std::uint64_t key) : key_(key) {}
    std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stream names used across the library.
inline constexpr std::string_view kSymbolStream = "symbols";
inline constexpr std::string_view kChannelStream = "channel";
inline constexpr std::string_view kNoiseStream = "noise";

}  // namespace fdss
