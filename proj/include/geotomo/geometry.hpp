#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace geotomo {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline double deg2rad(double deg) { return deg * (M_PI / 180.0); }

/// Detector-axis unit vector for tilt angle theta (degrees). A tilt of theta
/// rotates the object clockwise about the frame center; the beam direction in
/// world coordinates is then u(theta) = (-sin, cos) and the detector axis is
/// v(theta) = (cos, sin). Detector offsets are measured along v(theta).
inline Vec2 detector_axis(double theta_deg) {
    double t = deg2rad(theta_deg);
    return {std::cos(t), std::sin(t)};
}

/// Beam (measurement line) direction for tilt angle theta (degrees).
inline Vec2 beam_direction(double theta_deg) {
    double t = deg2rad(theta_deg);
    return {-std::sin(t), std::cos(t)};
}

/// Convex polygon with counterclockwise, strictly convex vertex list.
/// An empty vertex list represents "no object" (area 0); degenerate inputs
/// (points, segments) collapse to empty on construction.
struct ConvexPolygon {
    std::vector<Vec2> vertices;

    bool empty() const { return vertices.empty(); }
    double area() const;
    /// Inside-or-on test; eps is the boundary slack in world units.
    bool contains(Vec2 p, double eps = 1e-9) const;
};

/// Halfspace {x : normal . x <= offset}; normal is unit length.
struct Halfspace {
    Vec2 normal;
    double offset = 0.0;
};

/// Convex hull (Andrew monotone chain). Collinear triples are merged so the
/// result is strictly convex; fewer than 3 non-collinear points give an
/// empty polygon.
ConvexPolygon convex_hull(const std::vector<Vec2>& points);

/// Intersection of the halfspaces with the centered axis-aligned square of
/// half-width `bound`, by successive polygon clipping. Infeasible systems
/// give an empty polygon.
ConvexPolygon halfspace_intersection(const std::vector<Halfspace>& hs, double bound);

/// Length of the intersection of poly with the line {point + t * dir}.
/// `dir` need not be unit length; the result is in world units.
double chord_length(const ConvexPolygon& poly, Vec2 point, Vec2 dir);

/// Support function h(u) = max over vertices of u . x. Throws on empty input.
double support(const ConvexPolygon& poly, Vec2 u);

/// Width orthogonal to tilt angle theta: support(v) + support(-v) for the
/// detector axis v(theta).
double width(const ConvexPolygon& poly, double theta_deg);

}  // namespace geotomo
