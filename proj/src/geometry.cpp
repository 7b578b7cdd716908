#include "geotomo/geometry.hpp"

#include <algorithm>
#include <limits>

namespace geotomo {

namespace {

constexpr double kOrientEps = 1e-9;

// Removes consecutive duplicates and collinear triples from a ccw ring.
std::vector<Vec2> clean_ring(std::vector<Vec2> ring) {
    bool changed = true;
    while (changed && ring.size() >= 3) {
        changed = false;
        std::vector<Vec2> out;
        out.reserve(ring.size());
        size_t n = ring.size();
        for (size_t i = 0; i < n; ++i) {
            Vec2 prev = ring[(i + n - 1) % n];
            Vec2 cur = ring[i];
            Vec2 next = ring[(i + 1) % n];
            if ((cur - prev).norm() < kOrientEps) {
                changed = true;
                continue;
            }
            if ((next - prev).cross(cur - prev) >= -kOrientEps) {
                // a strict ccw corner lies right of the prev->next chord
                changed = true;
                continue;
            }
            out.push_back(cur);
        }
        ring = std::move(out);
    }
    if (ring.size() < 3) ring.clear();
    return ring;
}

}  // namespace

double ConvexPolygon::area() const {
    if (vertices.size() < 3) return 0.0;
    double a = 0.0;
    for (size_t i = 0; i < vertices.size(); ++i) {
        Vec2 p = vertices[i];
        Vec2 q = vertices[(i + 1) % vertices.size()];
        a += p.cross(q);
    }
    return 0.5 * a;
}

bool ConvexPolygon::contains(Vec2 p, double eps) const {
    if (vertices.size() < 3) return false;
    for (size_t i = 0; i < vertices.size(); ++i) {
        Vec2 a = vertices[i];
        Vec2 b = vertices[(i + 1) % vertices.size()];
        if ((b - a).cross(p - a) < -eps) return false;
    }
    return true;
}

ConvexPolygon convex_hull(const std::vector<Vec2>& points) {
    std::vector<Vec2> pts = points;
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return {};

    auto build = [&](auto begin, auto end) {
        std::vector<Vec2> chain;
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   (chain[chain.size() - 1] - chain[chain.size() - 2])
                           .cross(*it - chain[chain.size() - 2]) <= kOrientEps)
                chain.pop_back();
            chain.push_back(*it);
        }
        return chain;
    };

    std::vector<Vec2> lower = build(pts.begin(), pts.end());
    std::vector<Vec2> upper = build(pts.rbegin(), pts.rend());
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());

    ConvexPolygon hull{clean_ring(std::move(lower))};
    return hull;
}

ConvexPolygon halfspace_intersection(const std::vector<Halfspace>& hs, double bound) {
    if (bound <= 0.0) throw std::invalid_argument("halfspace_intersection: bound must be > 0");
    std::vector<Vec2> ring = {
        {-bound, -bound}, {bound, -bound}, {bound, bound}, {-bound, bound}};

    for (const Halfspace& h : hs) {
        if (ring.empty()) break;
        std::vector<Vec2> next;
        next.reserve(ring.size() + 1);
        size_t n = ring.size();
        for (size_t i = 0; i < n; ++i) {
            Vec2 a = ring[i];
            Vec2 b = ring[(i + 1) % n];
            double da = h.normal.dot(a) - h.offset;
            double db = h.normal.dot(b) - h.offset;
            if (da <= 0.0) next.push_back(a);
            if ((da < 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0)) {
                double t = da / (da - db);
                next.push_back(a + (b - a) * t);
            }
        }
        ring = std::move(next);
    }
    return ConvexPolygon{clean_ring(std::move(ring))};
}

double chord_length(const ConvexPolygon& poly, Vec2 point, Vec2 dir) {
    if (poly.vertices.size() < 3) return 0.0;
    double len = dir.norm();
    if (len == 0.0) throw std::invalid_argument("chord_length: zero direction");
    Vec2 u = dir * (1.0 / len);

    // Clip the parameter t of point + t*u against every edge halfplane.
    double tlo = -std::numeric_limits<double>::infinity();
    double thi = std::numeric_limits<double>::infinity();
    size_t n = poly.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = poly.vertices[i];
        Vec2 b = poly.vertices[(i + 1) % n];
        Vec2 edge = b - a;
        // inside: edge x (p - a) >= 0
        double denom = edge.cross(u);
        double num = edge.cross(point - a);
        if (std::abs(denom) < 1e-15) {
            if (num < 0.0) return 0.0;  // parallel and outside
            continue;
        }
        double t = -num / denom;
        if (denom > 0.0)
            tlo = std::max(tlo, t);
        else
            thi = std::min(thi, t);
    }
    return std::max(0.0, thi - tlo);
}

double support(const ConvexPolygon& poly, Vec2 u) {
    if (poly.empty()) throw std::invalid_argument("support: empty polygon");
    double best = -std::numeric_limits<double>::infinity();
    for (Vec2 v : poly.vertices) best = std::max(best, u.dot(v));
    return best;
}

double width(const ConvexPolygon& poly, double theta_deg) {
    Vec2 v = detector_axis(theta_deg);
    return support(poly, v) + support(poly, {-v.x, -v.y});
}

}  // namespace geotomo
