#include "geotomo/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace geotomo {

namespace {

void check_finite(const Sinogram& sino) {
    for (const auto& row : sino.values)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("sinogram has non-finite entries");
}

// Matrix-free SIRT machinery shared by sirt() and dart(): the inverse row
// and column sums of the projection operator at this geometry.
struct SirtWorkspace {
    TiltSchedule schedule;
    int size;
    double spacing;
    std::vector<std::vector<double>> inv_row;  // 1/d_i, 0 where d_i = 0
    std::vector<double> inv_col;               // 1/c_j, 0 where c_j = 0

    explicit SirtWorkspace(const Sinogram& sino)
        : schedule(sino.schedule), size(sino.detector_count), spacing(sino.detector_spacing) {
        ImageGrid ones(size, spacing, 1.0);
        Sinogram row_sums = project(ones, schedule);
        inv_row.assign(row_sums.values.size(), {});
        for (size_t a = 0; a < row_sums.values.size(); ++a) {
            inv_row[a].assign(row_sums.values[a].size(), 0.0);
            for (size_t j = 0; j < row_sums.values[a].size(); ++j) {
                double d = row_sums.values[a][j];
                if (d > 1e-12) inv_row[a][j] = 1.0 / d;
            }
        }
        Sinogram ones_sino = row_sums;
        for (auto& row : ones_sino.values) std::fill(row.begin(), row.end(), 1.0);
        ImageGrid col_sums = backproject(ones_sino, size, spacing);
        inv_col.assign(col_sums.pixels.size(), 0.0);
        for (size_t j = 0; j < col_sums.pixels.size(); ++j)
            if (col_sums.pixels[j] > 1e-12) inv_col[j] = 1.0 / col_sums.pixels[j];
    }

    // One SIRT update; when free_mask is given only those pixels change.
    void update(ImageGrid& x, const Sinogram& b, double lambda,
                const std::vector<uint8_t>* free_mask) const {
        Sinogram residual = project(x, schedule);
        for (size_t a = 0; a < residual.values.size(); ++a)
            for (size_t j = 0; j < residual.values[a].size(); ++j)
                residual.values[a][j] =
                    (residual.values[a][j] - b.values[a][j]) * inv_row[a][j];
        ImageGrid grad = backproject(residual, size, spacing);
        for (size_t j = 0; j < x.pixels.size(); ++j) {
            if (free_mask && !(*free_mask)[j]) continue;
            x.pixels[j] -= lambda * inv_col[j] * grad.pixels[j];
        }
    }
};

}  // namespace

SirtResult sirt(const Sinogram& sino, const SirtConfig& cfg,
                const std::function<void(int, const ImageGrid&)>& callback) {
    check_finite(sino);
    if (cfg.iterations < 1) throw std::invalid_argument("sirt: iterations must be >= 1");
    SirtWorkspace ws(sino);
    ImageGrid x(ws.size, ws.spacing);
    for (int k = 0; k < cfg.iterations; ++k) {
        ws.update(x, sino, cfg.lambda, nullptr);
        if (callback) callback(k, x);
    }
    return {x, threshold(x, cfg.threshold)};
}

double sirt_weighted_residual(const ImageGrid& x, const Sinogram& sino) {
    SirtWorkspace ws(sino);
    Sinogram proj = project(x, sino.schedule);
    double acc = 0.0;
    for (size_t a = 0; a < proj.values.size(); ++a)
        for (size_t j = 0; j < proj.values[a].size(); ++j) {
            double r = proj.values[a][j] - sino.values[a][j];
            acc += r * r * ws.inv_row[a][j];
        }
    return std::sqrt(acc);
}

namespace {

// Gather/scatter along the rays of one projection angle; same sampling as
// project()/backproject(), organized column-by-column for row-action ART.
struct RayPass {
    int n;
    double cosv, sinv, half;

    RayPass(int size, double theta_deg)
        : n(size),
          cosv(std::cos(deg2rad(theta_deg))),
          sinv(std::sin(deg2rad(theta_deg))),
          half(0.5 * (size - 1)) {}

    template <typename F>
    void for_each_tap(int column, F&& f) const {
        double sc = cosv * (column - half) - sinv * half + half;
        double sr = half - sinv * (column - half) - cosv * half;
        for (int r = 0; r < n; ++r, sc += sinv, sr += cosv) {
            int r0 = static_cast<int>(std::floor(sr));
            int c0 = static_cast<int>(std::floor(sc));
            if (r0 < -1 || r0 >= n || c0 < -1 || c0 >= n) continue;
            f(r0, c0, sr - r0, sc - c0);
        }
    }
};

ImageGrid smooth_3x3(const ImageGrid& img, const std::array<double, 3>& w) {
    ImageGrid out(img.size, img.spacing);
    const int n = img.size;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double acc = 0.0, norm = 0.0;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= n || cc < 0 || cc >= n) continue;
                    double wt = (dr == 0 && dc == 0) ? w[0] : ((dr == 0 || dc == 0) ? w[1] : w[2]);
                    acc += wt * img.at(rr, cc);
                    norm += wt;
                }
            out.at(r, c) = acc / norm;
        }
    return out;
}

}  // namespace

ImageGrid bart(const Sinogram& sino, const BartConfig& cfg) {
    check_finite(sino);
    const int n = sino.detector_count;
    ImageGrid x(n, sino.detector_spacing);
    double* px = x.pixels.data();

    // Row sums normalize the relaxed row updates.
    ImageGrid ones(n, sino.detector_spacing, 1.0);
    Sinogram row_sums = project(ones, sino.schedule);

    for (int sweep = 0; sweep < cfg.art_sweeps; ++sweep) {
        for (size_t a = 0; a < sino.schedule.count(); ++a) {
            RayPass pass(n, sino.schedule.angles[a]);
            for (int j = 0; j < n; ++j) {
                double d = row_sums.values[a][j];
                if (d <= 1e-12) continue;
                double val = 0.0;
                pass.for_each_tap(j, [&](int r0, int c0, double fr, double fc) {
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
                    val += top + fr * (bot - top);
                });
                double alpha = cfg.relaxation * (sino.values[a][j] - val) / d;
                if (alpha == 0.0) continue;
                pass.for_each_tap(j, [&](int r0, int c0, double fr, double fc) {
                    auto bump = [&](int r, int c, double wt) {
                        if (r < 0 || r >= n || c < 0 || c >= n) return;
                        double& p = px[static_cast<size_t>(r) * n + c];
                        p = std::clamp(p + alpha * wt, cfg.lower, cfg.upper);
                    };
                    bump(r0, c0, (1.0 - fr) * (1.0 - fc));
                    bump(r0, c0 + 1, (1.0 - fr) * fc);
                    bump(r0 + 1, c0, fr * (1.0 - fc));
                    bump(r0 + 1, c0 + 1, fr * fc);
                });
            }
        }
        for (double& v : x.pixels) v = std::clamp(v, cfg.lower, cfg.upper);
    }

    ImageGrid result = threshold(x, cfg.contour_threshold);
    for (int round = 0; round < cfg.filter_rounds; ++round)
        result = threshold(smooth_3x3(result, cfg.smooth_weights), cfg.contour_threshold);
    return result;
}

namespace {

std::vector<uint8_t> boundary_pixels(const std::vector<uint8_t>& cls, int n) {
    std::vector<uint8_t> boundary(cls.size(), 0);
    auto at = [&](int r, int c) { return cls[static_cast<size_t>(r) * n + c]; };
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            uint8_t v = at(r, c);
            bool edge = (r > 0 && at(r - 1, c) != v) || (r + 1 < n && at(r + 1, c) != v) ||
                        (c > 0 && at(r, c - 1) != v) || (c + 1 < n && at(r, c + 1) != v);
            if (edge) boundary[static_cast<size_t>(r) * n + c] = 1;
        }
    return boundary;
}

}  // namespace

ImageGrid dart(const Sinogram& sino, const DartConfig& cfg, const DartObserver& observer) {
    check_finite(sino);
    if (cfg.rho <= 0.0) throw std::invalid_argument("dart: rho must be > 0");
    const double seg_threshold = 0.5 * cfg.rho;

    SirtWorkspace ws(sino);
    ImageGrid x(ws.size, ws.spacing);
    for (int k = 0; k < cfg.init_sirt_iters; ++k) ws.update(x, sino, cfg.lambda, nullptr);

    const size_t npix = x.pixels.size();
    std::vector<uint8_t> cls(npix);
    auto segment = [&]() {
        for (size_t j = 0; j < npix; ++j) cls[j] = x.pixels[j] > seg_threshold ? 1 : 0;
    };
    segment();

    std::mt19937_64 rng(cfg.seed);
    std::vector<uint8_t> free_mask(npix);
    std::vector<uint32_t> non_boundary;
    non_boundary.reserve(npix);

    for (int it = 0; it < cfg.dart_iters; ++it) {
        std::vector<uint8_t> boundary = boundary_pixels(cls, ws.size);
        non_boundary.clear();
        for (size_t j = 0; j < npix; ++j) {
            free_mask[j] = boundary[j];
            if (!boundary[j]) non_boundary.push_back(static_cast<uint32_t>(j));
        }
        std::shuffle(non_boundary.begin(), non_boundary.end(), rng);
        size_t fixed_count = static_cast<size_t>(
            std::ceil(cfg.fix_fraction * static_cast<double>(non_boundary.size())));
        for (size_t i = fixed_count; i < non_boundary.size(); ++i)
            free_mask[non_boundary[i]] = 1;

        // Fixed pixels are pinned to their class gray level for this solve.
        for (size_t j = 0; j < npix; ++j)
            if (!free_mask[j]) x.pixels[j] = cls[j] ? cfg.rho : 0.0;

        for (int k = 0; k < cfg.inner_sirt_iters; ++k) {
            ws.update(x, sino, cfg.lambda, &free_mask);
            if (observer) observer(x, free_mask, cls);
        }
        segment();
    }

    ImageGrid out(ws.size, ws.spacing);
    for (size_t j = 0; j < npix; ++j) out.pixels[j] = cls[j] ? 1.0 : 0.0;
    return out;
}

}  // namespace geotomo
