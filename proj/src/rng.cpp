#include "invsrc/rng.hpp"

namespace invsrc {

uint64_t splitmix64_at(uint64_t seed, uint64_t n) {
    uint64_t x = seed + (n + 1) * 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform_pm1(uint64_t seed, uint64_t counter) {
    // 53 mantissa bits, centered so both endpoints are excluded.
    const double u = (double(splitmix64_at(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

}  // namespace invsrc
