#pragma once

#include <optional>
#include <vector>

#include "geotomo/grid.hpp"

namespace geotomo {

/// Ordered tilt angles in degrees, each in [0, 180], strictly increasing.
struct TiltSchedule {
    std::vector<double> angles;

    TiltSchedule() = default;
    explicit TiltSchedule(std::vector<double> a);

    size_t count() const { return angles.size(); }

    /// {1, 1+step, ...} up to and including range_deg degrees.
    static TiltSchedule regular(double range_deg, double step_deg);
};

/// Per-angle line sums. Detector bin j measures the world line through
/// offset (j - (count-1)/2) * detector_spacing along the detector axis
/// v(theta), with direction u(theta).
struct Sinogram {
    TiltSchedule schedule;
    int detector_count = 0;
    double detector_spacing = 1.0;
    std::vector<std::vector<double>> values;  // [angle][bin]

    double bin_offset(int j) const {
        return (j - 0.5 * (detector_count - 1)) * detector_spacing;
    }
};

/// Inclusive detector index range [lo, hi] with non-zero signal.
struct ShadowInterval {
    int lo = 0;
    int hi = 0;
    int length() const { return hi - lo + 1; }
};

/// Per-angle support intervals of the projections.
struct ShadowSet {
    TiltSchedule schedule;
    int detector_count = 0;
    double detector_spacing = 1.0;
    std::vector<std::vector<ShadowInterval>> intervals;  // [angle][interval]
};

/// Support-function measurements: unit directions u_i and values h_i.
struct SupportMeasurements {
    std::vector<Vec2> directions;
    std::vector<double> values;
};

/// Forward projection: for each tilt angle, rotate the image clockwise by
/// theta about its center (bilinear interpolation, cropped to the original
/// frame) and sum columns. detector_count = size; angle 0 projects along
/// the vertical direction.
Sinogram project(const ImageGrid& img, const TiltSchedule& schedule);

/// Exact adjoint of project: <project(x), y> == <x, backproject(y)>.
/// Throws when the detector count does not match `size`.
ImageGrid backproject(const Sinogram& sino, int size, double spacing = 1.0);

/// Sum every `factor` consecutive detector bins of each projection row.
Sinogram bin_sinogram(const Sinogram& sino, int factor);

/// Per angle: 1x3 median filter, strict threshold at t, maximal runs of 1s.
/// In convex mode only the longest run is kept (first on ties).
ShadowSet extract_shadows(const Sinogram& sino, double t, bool convex_mode = true);

/// Shadow extraction across a stack of slice sinograms sharing one schedule.
/// For each angle the (slice x detector) binary matrix is median filtered
/// row-wise, thresholded, then morphologically opened (radius-2 diamond) so
/// neighboring slices interact. Returns one ShadowSet per slice.
std::vector<ShadowSet> extract_shadows_stack(const std::vector<Sinogram>& slices, double t,
                                             bool opening = true);

struct WidthSample {
    double angle_deg = 0.0;
    double width = 0.0;  // world units
};

struct WidthMeasurements {
    std::vector<WidthSample> samples;
    std::vector<double> omitted_angles;  // angles with empty shadow
};

/// Shadow length per angle in world units: interval bin count times the
/// detector spacing. Angles with an empty shadow are omitted and flagged.
WidthMeasurements widths(const ShadowSet& shadows);

/// Two support measurements per angle, for the directions +/- v(theta):
/// the signed distance from the world origin to the far edge of the shadow
/// interval (outer bin edge). Angles with empty shadows contribute nothing.
SupportMeasurements support_measurements(const ShadowSet& shadows);

}  // namespace geotomo
