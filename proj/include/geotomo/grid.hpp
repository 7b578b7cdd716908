#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "geotomo/geometry.hpp"

namespace geotomo {

/// Square grayscale raster. Pixel (r, c) has world coordinates
///   x = origin.x + (c - (size-1)/2) * spacing
///   y = origin.y + ((size-1)/2 - r) * spacing
/// i.e. the image center sits at `origin`, rows grow downward.
struct ImageGrid {
    int size = 0;
    double spacing = 1.0;
    Vec2 origin{0.0, 0.0};
    std::vector<double> pixels;  // row-major, size*size entries

    ImageGrid() = default;
    ImageGrid(int n, double sp = 1.0, double fill = 0.0)
        : size(n), spacing(sp), pixels(static_cast<size_t>(n) * n, fill) {}

    double& at(int r, int c) { return pixels[static_cast<size_t>(r) * size + c]; }
    double at(int r, int c) const { return pixels[static_cast<size_t>(r) * size + c]; }

    Vec2 pixel_center(int r, int c) const {
        double half = 0.5 * (size - 1);
        return {origin.x + (c - half) * spacing, origin.y + (half - r) * spacing};
    }

    double sum() const;
    bool is_binary() const;
};

/// Set of (row, col) pixels of a size x size grid, stored as a mask.
struct PixelSet {
    int size = 0;
    std::vector<uint8_t> mask;

    PixelSet() = default;
    explicit PixelSet(int n) : size(n), mask(static_cast<size_t>(n) * n, 0) {}

    bool contains(int r, int c) const { return mask[static_cast<size_t>(r) * size + c] != 0; }
    void add(int r, int c) { mask[static_cast<size_t>(r) * size + c] = 1; }
    long long count() const;
    bool empty() const { return count() == 0; }
    std::vector<std::array<int, 2>> members() const;
};

/// Binary mask of a (possibly gray) image: pixel set where value > 0.5.
PixelSet pixel_set(const ImageGrid& img);

/// Binary image from a pixel set (1 on members, 0 elsewhere).
ImageGrid to_image(const PixelSet& set, double spacing = 1.0);

/// Output pixel = 1 iff input pixel > t (strict), else 0.
ImageGrid threshold(const ImageGrid& img, double t);

/// Block binning: each output pixel is the sum of the factor x factor block.
/// Throws "bin factor mismatch" when size is not divisible by factor.
ImageGrid bin(const ImageGrid& img, int factor);

/// 1x3 horizontal median filter; boundary entries use the mean of the
/// 2-element window. Length preserved.
std::vector<double> median_filter_1x3(const std::vector<double>& row);

/// Structuring element as a list of (dr, dc) offsets.
using StructuringElement = std::vector<std::array<int, 2>>;

/// Diamond of radius rad: all (dr, dc) with |dr| + |dc| <= rad.
StructuringElement diamond_se(int rad);

/// Erosion followed by dilation on a binary image. Erosion treats pixels
/// outside the frame as 1, dilation as 0, so a full-ones image is a fixed
/// point. Default element is the radius-2 diamond.
ImageGrid morphological_open(const ImageGrid& img, const StructuringElement& se = diamond_se(2));

/// Same opening on an arbitrary rows x cols binary matrix (row-major).
/// Used for the per-angle (slice x detector) shadow matrices in stack mode.
void morphological_open_matrix(std::vector<uint8_t>& data, int rows, int cols,
                               const StructuringElement& se = diamond_se(2));

/// Pixels of a size x size grid (spacing `spacing`, centered at the world
/// origin) whose centers lie inside or on the polygon.
PixelSet rasterize(const ConvexPolygon& poly, int size, double spacing);

}  // namespace geotomo
