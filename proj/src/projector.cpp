#include "geotomo/projector.hpp"

#include <cmath>
#include <stdexcept>

namespace geotomo {

TiltSchedule::TiltSchedule(std::vector<double> a) : angles(std::move(a)) {
    for (size_t i = 0; i < angles.size(); ++i) {
        if (angles[i] < 0.0 || angles[i] > 180.0)
            throw std::invalid_argument("tilt angle outside [0, 180]");
        if (i > 0 && angles[i] <= angles[i - 1])
            throw std::invalid_argument("tilt angles must be strictly increasing");
    }
}

TiltSchedule TiltSchedule::regular(double range_deg, double step_deg) {
    std::vector<double> a;
    for (double t = 1.0; t <= range_deg + 1e-9; t += step_deg) a.push_back(t);
    return TiltSchedule(a);
}

namespace {

// Shared sampling geometry of the rotate-and-sum projector. For output pixel
// (r, c) of the rotated frame the source point in pixel coordinates is
//   sc = cos*(c-half) - sin*(half-r) + half
//   sr = half - sin*(c-half) - cos*(half-r)
// which rotates the object clockwise by theta (world y axis points up).
struct RotationPass {
    int n;
    double cosv, sinv, half;

    RotationPass(int size, double theta_deg)
        : n(size),
          cosv(std::cos(deg2rad(theta_deg))),
          sinv(std::sin(deg2rad(theta_deg))),
          half(0.5 * (size - 1)) {}

    // Column span of row r whose whole 2x2 stencil is safely in bounds;
    // sc/sr accumulate exactly as in the main loop, so membership only
    // shortcuts the bounds checks and never changes a weight.
    std::pair<int, int> interior_span(double sc0, double sr0) const {
        double lo = 0.0, hi = n - 1.0;
        auto clip = [&](double base, double slope) {
            const double margin = 1e-6;
            if (std::abs(slope) < 1e-15) {
                if (base < margin || base > n - 1 - margin) hi = -1.0;
                return;
            }
            double c1 = (margin - base) / slope;
            double c2 = (n - 1 - margin - base) / slope;
            lo = std::max(lo, std::min(c1, c2));
            hi = std::min(hi, std::max(c1, c2));
        };
        clip(sc0, cosv);
        clip(sr0, -sinv);
        if (hi < lo) return {0, -1};
        return {static_cast<int>(std::ceil(lo)), static_cast<int>(std::floor(hi))};
    }

    // Calls fast(c, r0, c0, fr, fc) on interior samples and slow(...) on the
    // frame-boundary remainder, in column order.
    template <typename Slow, typename Fast>
    void for_each_sample(Slow&& slow, Fast&& fast) const {
        for (int r = 0; r < n; ++r) {
            double sc = cosv * (0.0 - half) - sinv * (half - r) + half;
            double sr = half - sinv * (0.0 - half) - cosv * (half - r);
            auto [c_lo, c_hi] = interior_span(sc, sr);
            int c = 0;
            auto slow_range = [&](int end) {
                for (; c < end; ++c, sc += cosv, sr -= sinv) {
                    int r0 = static_cast<int>(std::floor(sr));
                    int c0 = static_cast<int>(std::floor(sc));
                    if (r0 < -1 || r0 >= n || c0 < -1 || c0 >= n) continue;
                    slow(c, r0, c0, sr - r0, sc - c0);
                }
            };
            slow_range(std::min(n, std::max(c_lo, 0)));
            for (; c <= c_hi; ++c, sc += cosv, sr -= sinv) {
                int r0 = static_cast<int>(sr);
                int c0 = static_cast<int>(sc);
                fast(c, r0, c0, sr - r0, sc - c0);
            }
            slow_range(n);
        }
    }
};

}  // namespace

Sinogram project(const ImageGrid& img, const TiltSchedule& schedule) {
    const int n = img.size;
    Sinogram sino;
    sino.schedule = schedule;
    sino.detector_count = n;
    sino.detector_spacing = img.spacing;
    sino.values.assign(schedule.count(), std::vector<double>(n, 0.0));
    const double* px = img.pixels.data();

    for (size_t a = 0; a < schedule.count(); ++a) {
        RotationPass pass(n, schedule.angles[a]);
        double* proj = sino.values[a].data();
        pass.for_each_sample(
            [&](int c, int r0, int c0, double fr, double fc) {
                double v00 = 0.0, v01 = 0.0, v10 = 0.0, v11 = 0.0;
                if (r0 >= 0) {
                    const double* row = px + static_cast<size_t>(r0) * n;
                    if (c0 >= 0) v00 = row[c0];
                    if (c0 + 1 < n) v01 = row[c0 + 1];
                }
                if (r0 + 1 < n) {
                    const double* row = px + static_cast<size_t>(r0 + 1) * n;
                    if (c0 >= 0) v10 = row[c0];
                    if (c0 + 1 < n) v11 = row[c0 + 1];
                }
                double top = v00 + fc * (v01 - v00);
                double bot = v10 + fc * (v11 - v10);
                proj[c] += top + fr * (bot - top);
            },
            [&](int c, int r0, int c0, double fr, double fc) {
                const double* row0 = px + static_cast<size_t>(r0) * n + c0;
                const double* row1 = row0 + n;
                double top = row0[0] + fc * (row0[1] - row0[0]);
                double bot = row1[0] + fc * (row1[1] - row1[0]);
                proj[c] += top + fr * (bot - top);
            });
    }
    return sino;
}

ImageGrid backproject(const Sinogram& sino, int size, double spacing) {
    if (sino.detector_count != size)
        throw std::invalid_argument("backproject: detector count does not match image size");
    ImageGrid img(size, spacing);
    double* px = img.pixels.data();
    const int n = size;

    for (size_t a = 0; a < sino.schedule.count(); ++a) {
        RotationPass pass(n, sino.schedule.angles[a]);
        const double* proj = sino.values[a].data();
        pass.for_each_sample(
            [&](int c, int r0, int c0, double fr, double fc) {
                double y = proj[c];
                if (r0 >= 0) {
                    double* row = px + static_cast<size_t>(r0) * n;
                    if (c0 >= 0) row[c0] += (1.0 - fr) * (1.0 - fc) * y;
                    if (c0 + 1 < n) row[c0 + 1] += (1.0 - fr) * fc * y;
                }
                if (r0 + 1 < n) {
                    double* row = px + static_cast<size_t>(r0 + 1) * n;
                    if (c0 >= 0) row[c0] += fr * (1.0 - fc) * y;
                    if (c0 + 1 < n) row[c0 + 1] += fr * fc * y;
                }
            },
            [&](int c, int r0, int c0, double fr, double fc) {
                double y = proj[c];
                double* row0 = px + static_cast<size_t>(r0) * n + c0;
                double* row1 = row0 + n;
                row0[0] += (1.0 - fr) * (1.0 - fc) * y;
                row0[1] += (1.0 - fr) * fc * y;
                row1[0] += fr * (1.0 - fc) * y;
                row1[1] += fr * fc * y;
            });
    }
    return img;
}

Sinogram bin_sinogram(const Sinogram& sino, int factor) {
    if (factor <= 0 || sino.detector_count % factor != 0)
        throw std::invalid_argument("bin factor mismatch");
    Sinogram out;
    out.schedule = sino.schedule;
    out.detector_count = sino.detector_count / factor;
    out.detector_spacing = sino.detector_spacing * factor;
    out.values.assign(sino.values.size(), std::vector<double>(out.detector_count, 0.0));
    for (size_t a = 0; a < sino.values.size(); ++a)
        for (int j = 0; j < sino.detector_count; ++j)
            out.values[a][j / factor] += sino.values[a][j];
    return out;
}

namespace {

std::vector<ShadowInterval> runs_of_ones(const std::vector<uint8_t>& bits) {
    std::vector<ShadowInterval> runs;
    int start = -1;
    for (int j = 0; j <= static_cast<int>(bits.size()); ++j) {
        bool on = j < static_cast<int>(bits.size()) && bits[j];
        if (on && start < 0) start = j;
        if (!on && start >= 0) {
            runs.push_back({start, j - 1});
            start = -1;
        }
    }
    return runs;
}

std::vector<ShadowInterval> keep_longest(std::vector<ShadowInterval> runs) {
    if (runs.size() <= 1) return runs;
    size_t best = 0;
    for (size_t i = 1; i < runs.size(); ++i)
        if (runs[i].length() > runs[best].length()) best = i;
    return {runs[best]};
}

}  // namespace

ShadowSet extract_shadows(const Sinogram& sino, double t, bool convex_mode) {
    ShadowSet shadows;
    shadows.schedule = sino.schedule;
    shadows.detector_count = sino.detector_count;
    shadows.detector_spacing = sino.detector_spacing;
    shadows.intervals.resize(sino.values.size());
    for (size_t a = 0; a < sino.values.size(); ++a) {
        std::vector<double> med = median_filter_1x3(sino.values[a]);
        std::vector<uint8_t> bits(med.size());
        for (size_t j = 0; j < med.size(); ++j) bits[j] = med[j] > t ? 1 : 0;
        auto runs = runs_of_ones(bits);
        shadows.intervals[a] = convex_mode ? keep_longest(std::move(runs)) : runs;
    }
    return shadows;
}

std::vector<ShadowSet> extract_shadows_stack(const std::vector<Sinogram>& slices, double t,
                                             bool opening) {
    if (slices.empty()) return {};
    const size_t n_angles = slices[0].schedule.count();
    const int bins = slices[0].detector_count;
    for (const Sinogram& s : slices)
        if (s.schedule.count() != n_angles || s.detector_count != bins)
            throw std::invalid_argument("stack slices disagree on geometry");

    std::vector<ShadowSet> out(slices.size());
    for (size_t s = 0; s < slices.size(); ++s) {
        out[s].schedule = slices[s].schedule;
        out[s].detector_count = bins;
        out[s].detector_spacing = slices[s].detector_spacing;
        out[s].intervals.resize(n_angles);
    }

    const int rows = static_cast<int>(slices.size());
    for (size_t a = 0; a < n_angles; ++a) {
        std::vector<uint8_t> matrix(static_cast<size_t>(rows) * bins, 0);
        for (int s = 0; s < rows; ++s) {
            std::vector<double> med = median_filter_1x3(slices[s].values[a]);
            for (int j = 0; j < bins; ++j)
                matrix[static_cast<size_t>(s) * bins + j] = med[j] > t ? 1 : 0;
        }
        if (opening) morphological_open_matrix(matrix, rows, bins);
        for (int s = 0; s < rows; ++s) {
            std::vector<uint8_t> bits(matrix.begin() + static_cast<size_t>(s) * bins,
                                      matrix.begin() + static_cast<size_t>(s + 1) * bins);
            out[s].intervals[a] = keep_longest(runs_of_ones(bits));
        }
    }
    return out;
}

namespace {

const ShadowInterval* single_interval(const ShadowSet& shadows, size_t a) {
    const auto& list = shadows.intervals[a];
    if (list.empty()) return nullptr;
    if (list.size() > 1)
        throw std::invalid_argument("shadow has multiple intervals; convex pipeline expects one");
    return &list[0];
}

}  // namespace

WidthMeasurements widths(const ShadowSet& shadows) {
    WidthMeasurements result;
    for (size_t a = 0; a < shadows.intervals.size(); ++a) {
        const ShadowInterval* iv = single_interval(shadows, a);
        if (!iv) {
            result.omitted_angles.push_back(shadows.schedule.angles[a]);
            continue;
        }
        result.samples.push_back(
            {shadows.schedule.angles[a], iv->length() * shadows.detector_spacing});
    }
    return result;
}

SupportMeasurements support_measurements(const ShadowSet& shadows) {
    SupportMeasurements m;
    const double half = 0.5 * (shadows.detector_count - 1);
    const double sp = shadows.detector_spacing;
    for (size_t a = 0; a < shadows.intervals.size(); ++a) {
        const ShadowInterval* iv = single_interval(shadows, a);
        if (!iv) continue;
        Vec2 v = detector_axis(shadows.schedule.angles[a]);
        double hi_edge = (iv->hi - half + 0.5) * sp;
        double lo_edge = (iv->lo - half - 0.5) * sp;
        m.directions.push_back(v);
        m.values.push_back(hi_edge);
        m.directions.push_back({-v.x, -v.y});
        m.values.push_back(-lo_edge);
    }
    return m;
}

}  // namespace geotomo
