#pragma once

#include <cstdint>

namespace invsrc {

// Counter-based noise draws.
//
// splitmix64_at(seed, n) is the n-th output (n >= 0) of the SplitMix64
// sequence initialized with `seed`: state advances by the 64-bit golden
// gamma 0x9E3779B97F4A7C15 and is finalized with the standard two
// xor-shift-multiply rounds.  Because each output depends only on
// (seed, n), draws can be generated for any record independently and in
// any order, which keeps noisy synthesis deterministic under threading.
uint64_t splitmix64_at(uint64_t seed, uint64_t n);

// Uniform draw in the open interval (-1, 1) keyed by (seed, counter).
double uniform_pm1(uint64_t seed, uint64_t counter);

}  // namespace invsrc
