#include "geotomo/phantoms.hpp"

#include <cmath>
#include <stdexcept>

namespace geotomo {

namespace {

ConvexPolygon regular_polygon(int sides, double circumradius, double first_vertex_deg) {
    ConvexPolygon poly;
    for (int k = 0; k < sides; ++k) {
        double a = deg2rad(first_vertex_deg + k * 360.0 / sides);
        poly.vertices.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
    }
    return poly;
}

// Replaces the vertices at the given indices by a chord cutting the corner
// at `fraction` of the way along each adjacent edge.
ConvexPolygon truncate_corners(const ConvexPolygon& poly, const std::vector<int>& corners,
                               double fraction) {
    const auto& v = poly.vertices;
    const int n = static_cast<int>(v.size());
    ConvexPolygon out;
    for (int i = 0; i < n; ++i) {
        bool cut = false;
        for (int c : corners)
            if (c == i) cut = true;
        if (!cut) {
            out.vertices.push_back(v[i]);
            continue;
        }
        Vec2 prev = v[(i + n - 1) % n];
        Vec2 next = v[(i + 1) % n];
        out.vertices.push_back(v[i] + (prev - v[i]) * fraction);
        out.vertices.push_back(v[i] + (next - v[i]) * fraction);
    }
    return out;
}

}  // namespace

PhantomSpec make_phantom(int id) {
    switch (id) {
        case 1:
            return {1, regular_polygon(6, 60.0, 0.0), "regular hexagon, flat top"};
        case 2:
            return {2, regular_polygon(6, 70.0, 15.0), "regular hexagon rotated 15 deg"};
        case 3: {
            ConvexPolygon hex = regular_polygon(6, 60.0, 0.0);
            const double factors[6] = {1.00, 0.93, 1.05, 0.97, 1.04, 0.95};
            for (int k = 0; k < 6; ++k) hex.vertices[k] = hex.vertices[k] * factors[k];
            return {3, hex, "slightly irregular hexagon"};
        }
        case 4:
            return {4, regular_polygon(8, 65.0, 22.5), "regular octagon"};
        case 5: {
            ConvexPolygon hex = regular_polygon(6, 60.0, 0.0);
            // truncate the vertices at 0 and 120 degrees (indices 0 and 2)
            return {5, truncate_corners(hex, {0, 2}, 0.20), "hexagon with two minor facets"};
        }
        case 6: {
            ConvexPolygon hex = regular_polygon(6, 70.0, 15.0);
            ConvexPolygon twelve = truncate_corners(hex, {0, 1, 2, 3, 4, 5}, 0.15);
            // two extra shallow facets on the 12-gon
            return {6, truncate_corners(twelve, {0, 6}, 0.10), "faceted 14-gon"};
        }
        default:
            throw std::invalid_argument("phantom id must be 1..6");
    }
}

PixelSet rasterize_phantom(const PhantomSpec& phantom, int size, int base_size) {
    double spacing = static_cast<double>(base_size) / size;
    return rasterize(phantom.polygon, size, spacing);
}

}  // namespace geotomo
