#pragma once

#include <string>

#include "geotomo/geometry.hpp"
#include "geotomo/grid.hpp"
#include "geotomo/projector.hpp"

namespace geotomo {

/// PGM export. Binary images map {0,1} to {0,255}; grayscale images are
/// scaled so the maximum value maps to 255. `ascii` selects P2 over P5.
void write_pgm(const std::string& path, const ImageGrid& img, bool ascii = false);

/// Reads a P2/P5 PGM; values are returned in [0, maxval] as doubles.
ImageGrid read_pgm(const std::string& path);

/// Pixel set from an image file: member iff value > maxval/2.
PixelSet read_pgm_mask(const std::string& path);

/// Sinogram CSV: header "angle_deg,d0,...,d{n-1}", one row per angle.
void write_sinogram_csv(const std::string& path, const Sinogram& sino);
Sinogram read_sinogram_csv(const std::string& path);

/// Polygon CSV: header "x,y", one vertex per line.
void write_polygon_csv(const std::string& path, const ConvexPolygon& poly);
ConvexPolygon read_polygon_csv(const std::string& path);

/// Pixel set CSV: header "row,col", one member per line.
void write_pixelset_csv(const std::string& path, const PixelSet& set);
PixelSet read_pixelset_csv(const std::string& path, int size);

}  // namespace geotomo
