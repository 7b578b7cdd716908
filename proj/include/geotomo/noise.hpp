#pragma once

#include <cstdint>

#include "geotomo/projector.hpp"

namespace geotomo {

/// Additive Gaussian noise on non-zero intensities, one parameter sigma.
struct NoiseSpec {
    double sigma = 0.0;
    uint64_t seed = 0;
};

/// Adds an independent N(0, sigma^2) draw to every bin with value > 0 and
/// clamps negative results to 0; bins that are exactly 0 stay 0. Draws are
/// counter-based on (seed, angle index, bin index), so the output does not
/// depend on iteration order and is bitwise reproducible.
Sinogram add_noise(const Sinogram& sino, const NoiseSpec& spec);

/// The raw draw used for (angle i, bin j); exposed for the statistics tests.
double noise_draw(const NoiseSpec& spec, uint64_t angle_index, uint64_t bin_index);

/// SplitMix64 mixing, also used to derive per-trial seeds in the harness.
uint64_t mix_seed(uint64_t x);

}  // namespace geotomo
