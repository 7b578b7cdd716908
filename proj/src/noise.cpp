#include "geotomo/noise.hpp"

#include <cmath>

namespace geotomo {

uint64_t mix_seed(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double noise_draw(const NoiseSpec& spec, uint64_t angle_index, uint64_t bin_index) {
    uint64_t key = mix_seed(spec.seed ^ mix_seed(angle_index * 0x100000001b3ULL + bin_index));
    uint64_t a = mix_seed(key);
    uint64_t b = mix_seed(key + 1);
    // Box-Muller on two uniforms in (0, 1)
    double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
    double u2 = (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
    return spec.sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Sinogram add_noise(const Sinogram& sino, const NoiseSpec& spec) {
    Sinogram out = sino;
    if (spec.sigma == 0.0) return out;
    for (size_t a = 0; a < out.values.size(); ++a)
        for (size_t j = 0; j < out.values[a].size(); ++j) {
            double v = out.values[a][j];
            if (v <= 0.0) continue;
            v += noise_draw(spec, a, j);
            out.values[a][j] = v < 0.0 ? 0.0 : v;
        }
    return out;
}

}  // namespace geotomo
