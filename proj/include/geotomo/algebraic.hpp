#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "geotomo/projector.hpp"

namespace geotomo {

struct SirtConfig {
    int iterations = 50;
    double lambda = 1.0;  // relaxation, in (0, 2]
    double threshold = 0.5;
};

struct SirtResult {
    ImageGrid gray;
    ImageGrid binary;
};

/// Additive SIRT: x <- x - lambda * C * A^T * D * (A x - b) with
/// C = diag(1/column sums), D = diag(1/row sums), starting from x = 0.
/// Zero row/column sums leave the corresponding factor at 0 so untouched
/// pixels and empty rays never update. Row and column sums are computed
/// matrix-free by projecting all-ones inputs. The optional callback sees the
/// iterate after every update.
SirtResult sirt(const Sinogram& sino, const SirtConfig& cfg,
                const std::function<void(int, const ImageGrid&)>& callback = {});

struct BartConfig {
    int art_sweeps = 5;
    double relaxation = 0.3;
    double lower = 0.0;
    double upper = 1.0;
    double contour_threshold = 0.5;
    int filter_rounds = 7;
    std::array<double, 3> smooth_weights{2.0, 1.0, 1.0};  // center, edge, corner
};

/// Binary ART: row-action sweeps with per-update clipping to
/// [lower, upper], a post-sweep snap of out-of-band values to the nearest
/// bound, contouring at the threshold, then filter_rounds repetitions of
/// {3x3 weighted smoothing, re-contour} to exclude isolated pixels.
ImageGrid bart(const Sinogram& sino, const BartConfig& cfg);

struct DartConfig {
    int init_sirt_iters = 25;
    int dart_iters = 25;
    int inner_sirt_iters = 10;
    double rho = 1.0;  // object gray level; segmentation threshold is rho/2
    double fix_fraction = 0.85;
    double lambda = 1.0;
    uint64_t seed = 0;
};

/// Observer for the DART inner solves: (iterate, free-pixel mask, class mask).
using DartObserver =
    std::function<void(const ImageGrid&, const std::vector<uint8_t>&, const std::vector<uint8_t>&)>;

/// DART: SIRT start, segmentation at rho/2, then alternating steps that fix
/// a random fix_fraction of the non-boundary pixels at their class gray
/// levels and re-solve with SIRT updates restricted to the free pixels.
/// Boundary pixels are those with a 4-neighbor in a different class.
/// Deterministic given cfg.seed. Returns the final segmentation.
ImageGrid dart(const Sinogram& sino, const DartConfig& cfg, const DartObserver& observer = {});

/// || D^(1/2) (A x - b) ||, the weighted projection error SIRT minimizes.
double sirt_weighted_residual(const ImageGrid& x, const Sinogram& sino);

}  // namespace geotomo
