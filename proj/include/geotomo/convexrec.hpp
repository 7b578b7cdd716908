#pragma once

#include <optional>
#include <string>

#include "geotomo/projector.hpp"
#include "geotomo/solvers.hpp"

namespace geotomo {

/// Parallel strip {x : -hw_neg <= v(angle) . x <= hw_pos} derived from one
/// shadow interval (or synthesized, in the 2n-GON fallback).
struct Strip {
    double angle_deg = 0.0;
    double lo = 0.0;  // v . x >= lo
    double hi = 0.0;  // v . x <= hi
};

/// Unfiltered backprojection: intersect the strips bounded by the shadows.
/// Throws "insufficient shadows" with fewer than 2 usable angles. The result
/// may be empty.
ConvexPolygon ufbp(const ShadowSet& shadows);

/// U-FBP core on explicit strips (also used by the 2n-GON fallback).
ConvexPolygon intersect_strips(const std::vector<Strip>& strips, double bound);

/// Strips of the shadow set, one per angle with a non-empty interval.
std::vector<Strip> shadow_strips(const ShadowSet& shadows);

/// Modified Prince-Willsky: project the support measurements onto the cone
/// of consistent support vectors (constrained least squares), then intersect
/// the halfspaces u_i . x <= y*_i.
ConvexPolygon mpw(const ShadowSet& shadows);

/// MPW with the consistent support values returned as well (for tests).
ConvexPolygon mpw_detail(const ShadowSet& shadows, SupportMeasurements* consistent);

struct GkxrConfig {
    std::vector<double> direction_angles{1.0, 28.0, 91.0, 118.0};
    int lines_per_direction = 40;        // k
    double pair_merge_threshold = 1.0;   // detector spacings
    int iir_rounds = 50;                 // 0 in the 0-noise case
    double window_fraction = 0.45;       // window radius / detector width
    AnnealConfig anneal{0.0, 0.95, 50, 1e-6, 25.0, 0};
};

/// Gardner-Kiderlen X-ray reconstruction from projections in four
/// directions. Measurements are IIR pre-smoothed, resampled to k lines per
/// direction across a circular window, and fitted by annealing the positions
/// of one point pair per measurement line; pairs closer than the merge
/// threshold are inactive. Returns the hull of the active points; an empty
/// polygon means "no object".
ConvexPolygon gkxr(const Sinogram& sino, const GkxrConfig& cfg);

struct NgonConfig {
    int n = 3;                      // object close to a regular 2n-gon
    int poly_degree = 0;            // 0 means 2n + 5
    double omega = 140.0;           // upper end of the tilt range, degrees
    double spacing_tolerance = 10.0;
};

/// Outcome of ngon_2n: either a polygon or a deliberate refusal.
struct NgonResult {
    std::optional<ConvexPolygon> polygon;
    std::string no_reconstruction_reason;  // "m<2" | "r_empty" | "t_out_of_range"
    std::vector<double> detected_minima;   // width-function minima, degrees

    bool ok() const { return polygon.has_value(); }
};

/// 2n-GON: fit the measured widths with a polynomial, detect its local
/// minima in [0, omega), keep consecutive minima spaced 180/n +- tolerance
/// apart, and reconstruct by unfiltered backprojection from those angles,
/// synthesizing shadows beyond the tilt range from the two-strip
/// parallelogram when needed.
NgonResult ngon_2n(const ShadowSet& shadows, const NgonConfig& cfg);

}  // namespace geotomo
