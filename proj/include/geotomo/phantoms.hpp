#pragma once

#include <string>

#include "geotomo/geometry.hpp"
#include "geotomo/grid.hpp"

namespace geotomo {

/// Test object: an exact convex polygon in world units (pixels at the
/// 512-pixel reconstruction scale), centered on the origin.
struct PhantomSpec {
    int id = 0;
    ConvexPolygon polygon;
    std::string description;
};

/// Phantoms 1-6. Throws on any other id.
///   1  regular hexagon, flat top (edge normal at 90 degrees), circumradius 60
///   2  regular hexagon rotated 15 degrees, circumradius 70
///   3  hexagon 1 with fixed radial vertex perturbations (slightly irregular)
///   4  regular octagon, circumradius 65, one edge normal at 0 degrees
///   5  hexagon 1 with two corners truncated at 20% of the edge length
///   6  14-gon: hexagon 2 with all corners truncated plus two shallow facets
PhantomSpec make_phantom(int id);

/// Ground-truth raster of the phantom on a size x size grid whose pixels
/// have world extent (base_size/size); size = base_size gives unit pixels,
/// size = 4*base_size the high-resolution generation grid.
PixelSet rasterize_phantom(const PhantomSpec& phantom, int size, int base_size = 512);

}  // namespace geotomo
