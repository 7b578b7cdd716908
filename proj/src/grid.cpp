#include "geotomo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace geotomo {

double ImageGrid::sum() const {
    return std::accumulate(pixels.begin(), pixels.end(), 0.0);
}

bool ImageGrid::is_binary() const {
    return std::all_of(pixels.begin(), pixels.end(),
                       [](double v) { return v == 0.0 || v == 1.0; });
}

long long PixelSet::count() const {
    long long n = 0;
    for (uint8_t m : mask) n += m;
    return n;
}

std::vector<std::array<int, 2>> PixelSet::members() const {
    std::vector<std::array<int, 2>> out;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            if (contains(r, c)) out.push_back({r, c});
    return out;
}

PixelSet pixel_set(const ImageGrid& img) {
    PixelSet set(img.size);
    for (size_t i = 0; i < img.pixels.size(); ++i)
        if (img.pixels[i] > 0.5) set.mask[i] = 1;
    return set;
}

ImageGrid to_image(const PixelSet& set, double spacing) {
    ImageGrid img(set.size, spacing);
    for (size_t i = 0; i < set.mask.size(); ++i) img.pixels[i] = set.mask[i] ? 1.0 : 0.0;
    return img;
}

ImageGrid threshold(const ImageGrid& img, double t) {
    ImageGrid out = img;
    for (double& v : out.pixels) v = (v > t) ? 1.0 : 0.0;
    return out;
}

ImageGrid bin(const ImageGrid& img, int factor) {
    if (factor <= 0 || img.size % factor != 0)
        throw std::invalid_argument("bin factor mismatch");
    ImageGrid out(img.size / factor, img.spacing * factor);
    out.origin = img.origin;
    for (int r = 0; r < img.size; ++r)
        for (int c = 0; c < img.size; ++c)
            out.at(r / factor, c / factor) += img.at(r, c);
    return out;
}

std::vector<double> median_filter_1x3(const std::vector<double>& row) {
    size_t n = row.size();
    if (n <= 1) return row;
    std::vector<double> out(n);
    out[0] = 0.5 * (row[0] + row[1]);
    out[n - 1] = 0.5 * (row[n - 2] + row[n - 1]);
    for (size_t i = 1; i + 1 < n; ++i) {
        double a = row[i - 1], b = row[i], c = row[i + 1];
        out[i] = std::max(std::min(a, b), std::min(std::max(a, b), c));
    }
    return out;
}

StructuringElement diamond_se(int rad) {
    StructuringElement se;
    for (int dr = -rad; dr <= rad; ++dr)
        for (int dc = -rad; dc <= rad; ++dc)
            if (std::abs(dr) + std::abs(dc) <= rad) se.push_back({dr, dc});
    return se;
}

void morphological_open_matrix(std::vector<uint8_t>& data, int rows, int cols,
                               const StructuringElement& se) {
    auto idx = [cols](int r, int c) { return static_cast<size_t>(r) * cols + c; };
    std::vector<uint8_t> eroded(data.size(), 0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            uint8_t keep = 1;
            for (auto [dr, dc] : se) {
                int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;  // pad 1
                if (!data[idx(rr, cc)]) {
                    keep = 0;
                    break;
                }
            }
            eroded[idx(r, c)] = keep;
        }
    std::fill(data.begin(), data.end(), uint8_t{0});
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (!eroded[idx(r, c)]) continue;
            for (auto [dr, dc] : se) {
                int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;  // pad 0
                data[idx(rr, cc)] = 1;
            }
        }
}

ImageGrid morphological_open(const ImageGrid& img, const StructuringElement& se) {
    std::vector<uint8_t> data(img.pixels.size());
    for (size_t i = 0; i < data.size(); ++i) data[i] = img.pixels[i] > 0.5 ? 1 : 0;
    morphological_open_matrix(data, img.size, img.size, se);
    ImageGrid out(img.size, img.spacing);
    out.origin = img.origin;
    for (size_t i = 0; i < data.size(); ++i) out.pixels[i] = data[i] ? 1.0 : 0.0;
    return out;
}

PixelSet rasterize(const ConvexPolygon& poly, int size, double spacing) {
    PixelSet set(size);
    if (poly.empty()) return set;

    ImageGrid frame(size, spacing);  // for the world mapping only
    // Bounding box in pixel indices keeps the scan cheap.
    double minx = poly.vertices[0].x, maxx = minx, miny = poly.vertices[0].y, maxy = miny;
    for (Vec2 v : poly.vertices) {
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
    }
    double half = 0.5 * (size - 1);
    int cmin = std::max(0, static_cast<int>(std::floor(minx / spacing + half)) - 1);
    int cmax = std::min(size - 1, static_cast<int>(std::ceil(maxx / spacing + half)) + 1);
    int rmin = std::max(0, static_cast<int>(std::floor(half - maxy / spacing)) - 1);
    int rmax = std::min(size - 1, static_cast<int>(std::ceil(half - miny / spacing)) + 1);

    for (int r = rmin; r <= rmax; ++r)
        for (int c = cmin; c <= cmax; ++c)
            if (poly.contains(frame.pixel_center(r, c))) set.add(r, c);
    return set;
}

}  // namespace geotomo
