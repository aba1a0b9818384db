#pragma once

#include <cstdint>
#include <random>

namespace pldpc {

// SplitMix64 mixing step. Used to derive well-separated engine seeds from a
// master seed plus stream identifiers (block index, purpose tag, ...).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc909ULL);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    return s;
}

// Independent substream keyed by (master, a, b). Results depend only on the
// key, never on which worker draws from it.
inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return std::mt19937_64(derive_seed(master, a, b));
}

} // namespace pldpc
