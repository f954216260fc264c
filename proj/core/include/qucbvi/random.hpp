#pragma once

#include <cstdint>
#include <random>

namespace qucbvi {

/// Random stream used everywhere a draw is needed. One stream per run.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
/// Used instead of std::uniform_real_distribution so streams are reproducible
/// across standard library implementations.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qucbvi
