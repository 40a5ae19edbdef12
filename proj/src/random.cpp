#include "fdss/random.hpp"

namespace fdss {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

// FNV-1a; stream names are short literals.
std::uint64_t hash_name(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : name) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

SeedStream::SeedStream(std::uint64_t master, std::string_view name)
    : key_(splitmix64(splitmix64(master) ^ hash_name(name))) {}

std::uint64_t SeedStream::seed_for(std::uint64_t index) const { return splitmix64(key_ ^ splitmix64(index)); }

SeedStream SeedStream::substream(std::string_view name) const {
    return SeedStream(splitmix64(key_ ^ hash_name(name)));
}

}  // namespace fdss
