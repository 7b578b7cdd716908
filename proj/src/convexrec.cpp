#include "geotomo/convexrec.hpp"

#include "geotomo/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace geotomo {

std::vector<Strip> shadow_strips(const ShadowSet& shadows) {
    std::vector<Strip> strips;
    const double half = 0.5 * (shadows.detector_count - 1);
    const double sp = shadows.detector_spacing;
    for (size_t a = 0; a < shadows.intervals.size(); ++a) {
        const auto& list = shadows.intervals[a];
        if (list.empty()) continue;
        if (list.size() > 1)
            throw std::invalid_argument("shadow has multiple intervals; convex pipeline expects one");
        Strip s;
        s.angle_deg = shadows.schedule.angles[a];
        s.lo = (list[0].lo - half - 0.5) * sp;
        s.hi = (list[0].hi - half + 0.5) * sp;
        strips.push_back(s);
    }
    return strips;
}

ConvexPolygon intersect_strips(const std::vector<Strip>& strips, double bound) {
    std::vector<Halfspace> hs;
    hs.reserve(2 * strips.size());
    for (const Strip& s : strips) {
        Vec2 v = detector_axis(s.angle_deg);
        hs.push_back({v, s.hi});
        hs.push_back({{-v.x, -v.y}, -s.lo});
    }
    return halfspace_intersection(hs, bound);
}

namespace {

double detector_bound(const ShadowSet& shadows) {
    return 0.5 * shadows.detector_count * shadows.detector_spacing;
}

}  // namespace

ConvexPolygon ufbp(const ShadowSet& shadows) {
    std::vector<Strip> strips = shadow_strips(shadows);
    if (strips.size() < 2) throw std::invalid_argument("insufficient shadows");
    return intersect_strips(strips, detector_bound(shadows));
}

ConvexPolygon mpw_detail(const ShadowSet& shadows, SupportMeasurements* consistent) {
    SupportMeasurements m = support_measurements(shadows);
    if (m.directions.size() < 4) throw std::invalid_argument("insufficient shadows");

    // Sort the measurements by direction angle in [0, 360).
    const size_t n = m.directions.size();
    std::vector<double> dir_angle(n);
    for (size_t i = 0; i < n; ++i) {
        double a = std::atan2(m.directions[i].y, m.directions[i].x) * 180.0 / M_PI;
        if (a < 0.0) a += 360.0;
        dir_angle[i] = a;
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return dir_angle[i] < dir_angle[j]; });

    ConstrainedLsqProblem problem;
    std::vector<size_t> kept;
    for (size_t i : order) {
        if (!problem.angles_deg.empty() && dir_angle[i] - problem.angles_deg.back() < 1e-9) {
            // duplicate direction: keep the tighter (smaller) measurement
            if (m.values[i] < problem.targets.back()) problem.targets.back() = m.values[i];
            continue;
        }
        problem.angles_deg.push_back(dir_angle[i]);
        problem.targets.push_back(m.values[i]);
        kept.push_back(i);
    }

    std::vector<double> y = constrained_lsq(problem);

    if (consistent) {
        consistent->directions.clear();
        consistent->values = y;
        for (size_t j = 0; j < kept.size(); ++j)
            consistent->directions.push_back(m.directions[kept[j]]);
    }

    std::vector<Halfspace> hs;
    for (size_t j = 0; j < y.size(); ++j) {
        Vec2 u = detector_axis(problem.angles_deg[j]);
        hs.push_back({u, y[j]});
    }
    return halfspace_intersection(hs, detector_bound(shadows));
}

ConvexPolygon mpw(const ShadowSet& shadows) { return mpw_detail(shadows, nullptr); }

namespace {

// Iterated IIR smoothing y'_i = (y_i + y'_{i-1}) / 2 applied to the
// non-zero entries of the row. The traversal direction alternates between
// rounds: each causal pass delays the profile by about one bin, so iterating
// it 50 times one-way would displace the shadow by ~50 bins; alternating
// keeps the passes' group delays cancelling while smoothing the same way.
std::vector<double> iir_smooth_nonzero(std::vector<double> row, int rounds) {
    std::vector<size_t> idx;
    for (size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0.0) idx.push_back(j);
    for (int r = 0; r < rounds; ++r) {
        double prev = 0.0;
        if (r % 2 == 0) {
            for (size_t i = 0; i < idx.size(); ++i) {
                double& y = row[idx[i]];
                y = 0.5 * (y + prev);
                prev = y;
            }
        } else {
            for (size_t i = idx.size(); i-- > 0;) {
                double& y = row[idx[i]];
                y = 0.5 * (y + prev);
                prev = y;
            }
        }
    }
    return row;
}

}  // namespace

ConvexPolygon gkxr(const Sinogram& sino, const GkxrConfig& cfg) {
    if (cfg.direction_angles.size() != 4)
        throw std::invalid_argument("gkxr: exactly 4 directions required");
    const int k = cfg.lines_per_direction;
    if (k < 2) throw std::invalid_argument("gkxr: need k >= 2 lines per direction");

    // Locate the configured directions in the sinogram.
    std::vector<size_t> rows;
    for (double want : cfg.direction_angles) {
        bool found = false;
        for (size_t a = 0; a < sino.schedule.count(); ++a)
            if (std::abs(sino.schedule.angles[a] - want) < 1e-9) {
                rows.push_back(a);
                found = true;
                break;
            }
        if (!found) throw std::invalid_argument("gkxr: sinogram lacks a configured direction");
    }

    const double window_radius =
        cfg.window_fraction * sino.detector_count * sino.detector_spacing;
    const double cell = 2.0 * window_radius / k;
    const double half = 0.5 * (sino.detector_count - 1);

    // Per direction: smooth, then read each of the k equally spaced
    // measurement lines off the detector by averaging the bins within half a
    // detector spacing of the line position (the 1-2 nearest bins).
    std::vector<std::vector<double>> measured(4, std::vector<double>(k, 0.0));
    for (int d = 0; d < 4; ++d) {
        std::vector<double> row =
            iir_smooth_nonzero(sino.values[rows[d]], cfg.iir_rounds);
        for (int c = 0; c < k; ++c) {
            double t = -window_radius + (c + 0.5) * cell;
            double j_center = t / sino.detector_spacing + half;
            double acc = 0.0;
            int hits = 0;
            for (int j = static_cast<int>(std::floor(j_center - 0.5));
                 j <= static_cast<int>(std::ceil(j_center + 0.5)); ++j) {
                if (j < 0 || j >= sino.detector_count) continue;
                if (std::abs(j - j_center) > 0.5 + 1e-12) continue;
                acc += row[j];
                hits += 1;
            }
            if (hits > 0) measured[d][c] = acc / hits;
        }
    }

    double total_signal = 0.0;
    for (int d = 0; d < 4; ++d)
        for (int c = 0; c < k; ++c) total_signal += measured[d][c];
    if (total_signal <= 0.0) return {};  // no signal anywhere: no object

    struct Line {
        Vec2 point;  // t * v(theta)
        Vec2 dir;    // u(theta)
        double value;
        double s_max;  // half-chord of the window circle on this line
    };
    std::vector<Line> lines;
    lines.reserve(static_cast<size_t>(4) * k);
    for (int d = 0; d < 4; ++d) {
        Vec2 v = detector_axis(cfg.direction_angles[d]);
        Vec2 u = beam_direction(cfg.direction_angles[d]);
        for (int c = 0; c < k; ++c) {
            double t = -window_radius + (c + 0.5) * cell;
            double s_max = std::sqrt(std::max(0.0, window_radius * window_radius - t * t));
            lines.push_back({v * t, u, measured[d][c], s_max});
        }
    }

    const double merge = cfg.pair_merge_threshold * sino.detector_spacing;
    auto active_points = [&](const std::vector<double>& z) {
        std::vector<Vec2> pts;
        pts.reserve(2 * lines.size());
        for (size_t i = 0; i < lines.size(); ++i) {
            double sa = z[2 * i], sb = z[2 * i + 1];
            if (std::abs(sa - sb) < merge) continue;
            pts.push_back(lines[i].point + lines[i].dir * sa);
            pts.push_back(lines[i].point + lines[i].dir * sb);
        }
        return pts;
    };
    auto objective = [&](const std::vector<double>& z) {
        ConvexPolygon hull = convex_hull(active_points(z));
        double acc = 0.0;
        for (const Line& line : lines) {
            double chord = hull.empty() ? 0.0 : chord_length(hull, line.point, line.dir);
            double diff = line.value - chord;
            acc += diff * diff;
        }
        return acc;
    };

    std::mt19937_64 rng(cfg.anneal.seed);
    std::vector<double> z0(2 * lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        std::uniform_real_distribution<double> pos(-lines[i].s_max, lines[i].s_max);
        z0[2 * i] = pos(rng);
        z0[2 * i + 1] = pos(rng);
    }

    AnnealConfig anneal_cfg = cfg.anneal;
    anneal_cfg.seed = mix_seed(cfg.anneal.seed + 1);
    std::vector<double> best = anneal_minimize(objective, std::move(z0), anneal_cfg);
    return convex_hull(active_points(best));
}

namespace {

// Nearest measured angle with a usable shadow strip.
const Strip* nearest_strip(const std::vector<Strip>& strips, double angle) {
    const Strip* best = nullptr;
    double best_d = 1e300;
    for (const Strip& s : strips) {
        double d = std::abs(s.angle_deg - angle);
        if (d < best_d) {
            best_d = d;
            best = &s;
        }
    }
    return best;
}

}  // namespace

NgonResult ngon_2n(const ShadowSet& shadows, const NgonConfig& cfg) {
    if (cfg.n < 3) throw std::invalid_argument("ngon_2n: n must be >= 3");
    const int degree = cfg.poly_degree > 0 ? cfg.poly_degree : 2 * cfg.n + 5;

    WidthMeasurements wm = widths(shadows);
    if (static_cast<int>(wm.samples.size()) < degree + 1) {
        // not enough usable shadows to fit the width curve, so no minima can
        // be detected (all-zero slices land here)
        NgonResult out;
        out.no_reconstruction_reason = "m<2";
        return out;
    }

    std::vector<std::array<double, 2>> samples;
    samples.reserve(wm.samples.size());
    for (const WidthSample& s : wm.samples) samples.push_back({s.angle_deg, s.width});

    Polynomial fit = polyfit_ls(samples, degree);
    NgonResult result;
    result.detected_minima = poly_local_minima(fit, 0.0, cfg.omega);
    const std::vector<double>& t = result.detected_minima;
    const int m = static_cast<int>(t.size());
    if (m < 2) {
        result.no_reconstruction_reason = "m<2";
        return result;
    }

    const double ideal = 180.0 / cfg.n;
    std::vector<int> big_r;  // i (0-based) with |t[i+1] - t[i]| near 180/n
    for (int i = 0; i + 1 < m; ++i) {
        double gap = t[i + 1] - t[i];
        if (gap >= ideal - cfg.spacing_tolerance && gap <= ideal + cfg.spacing_tolerance)
            big_r.push_back(i);
    }
    if (big_r.empty()) {
        result.no_reconstruction_reason = "r_empty";
        return result;
    }

    std::vector<Strip> measured = shadow_strips(shadows);
    if (measured.size() < 2) throw std::invalid_argument("insufficient shadows");
    double max_measured = measured.back().angle_deg;
    const double bound = detector_bound(shadows);

    std::vector<double> recon_angles;
    std::vector<double> synth_angles;
    if (static_cast<int>(big_r.size()) >= cfg.n - 1) {
        // All edge directions found: reconstruct from the properly spaced
        // pairs (the n-1 with spacing closest to 180/n when there are more).
        std::vector<int> chosen = big_r;
        std::sort(chosen.begin(), chosen.end(), [&](int i, int j) {
            return std::abs(t[i + 1] - t[i] - ideal) < std::abs(t[j + 1] - t[j] - ideal);
        });
        chosen.resize(cfg.n - 1);
        for (int i : chosen) {
            recon_angles.push_back(t[i]);
            recon_angles.push_back(t[i + 1]);
        }
        std::sort(recon_angles.begin(), recon_angles.end());
        recon_angles.erase(std::unique(recon_angles.begin(), recon_angles.end()),
                           recon_angles.end());
    } else {
        // 1 <= r < n-1 properly spaced pairs cover r+1 of the n edge
        // directions; complete the set upward from the last good minimum.
        int r = static_cast<int>(big_r.size());
        int b = big_r.back() + 1;  // index of the last good minimum
        recon_angles = t;
        for (int i = 1; i <= cfg.n - r - 1; ++i) {
            double t_new = t[b] + ideal * i;
            if (t_new >= 180.0) {
                result.no_reconstruction_reason = "t_out_of_range";
                return result;
            }
            if (t_new <= max_measured)
                recon_angles.push_back(t_new);
            else
                synth_angles.push_back(t_new);
        }
        // The two-strip parallelogram positions the synthesized shadows.
        if (!synth_angles.empty()) {
            const Strip* sa = nearest_strip(measured, t[b - 1]);
            const Strip* sb = nearest_strip(measured, t[b]);
            ConvexPolygon par = intersect_strips({*sa, *sb}, bound);
            if (par.empty()) {
                result.no_reconstruction_reason = "t_out_of_range";
                return result;
            }
            Vec2 center{0.0, 0.0};
            for (Vec2 v : par.vertices) center = center + v;
            center = center * (1.0 / par.vertices.size());
            double length = sb->hi - sb->lo;
            std::vector<Strip> strips;
            for (double angle : recon_angles) strips.push_back(*nearest_strip(measured, angle));
            for (double angle : synth_angles) {
                double c = center.dot(detector_axis(angle));
                strips.push_back({angle, c - 0.5 * length, c + 0.5 * length});
            }
            result.polygon = intersect_strips(strips, bound);
            return result;
        }
    }

    std::vector<Strip> strips;
    for (double angle : recon_angles) strips.push_back(*nearest_strip(measured, angle));
    result.polygon = intersect_strips(strips, bound);
    return result;
}

}  // namespace geotomo
