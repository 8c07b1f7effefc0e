#pragma once

/// @file geometry.hpp
/// Planar geometry primitives used by the generation pipeline: area,
/// perimeter, centroid, minimum enclosing circle, rectangle clipping,
/// shape/size classification and the relative-position predicates.
///
/// All coordinates are metric (meters). The y axis grows northward, so
/// "top of" means greater y. Polygons are stored as one outer ring plus
/// optional hole rings; every ring is closed (first vertex == last).
/// Polylines are open chains. All functions here are pure and safe to
/// call concurrently.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace geoqa {

struct Point {
    double x = 0.0;
    double y = 0.0;

    constexpr bool operator==(const Point&) const = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Axis-aligned rectangle. Invalid until extended (min > max).
struct Rect {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    constexpr bool operator==(const Rect&) const = default;

    [[nodiscard]] bool valid() const { return min_x <= max_x && min_y <= max_y; }
    [[nodiscard]] double width() const { return max_x - min_x; }
    [[nodiscard]] double height() const { return max_y - min_y; }
    [[nodiscard]] double area() const { return valid() ? width() * height() : 0.0; }
    [[nodiscard]] Point center() const { return {(min_x + max_x) / 2, (min_y + max_y) / 2}; }

    void extend(Point p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    void extend(const Rect& r) {
        min_x = std::min(min_x, r.min_x);
        min_y = std::min(min_y, r.min_y);
        max_x = std::max(max_x, r.max_x);
        max_y = std::max(max_y, r.max_y);
    }

    /// Boundary contact counts as containment/overlap throughout.
    [[nodiscard]] bool contains(Point p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
    [[nodiscard]] bool overlaps(const Rect& r) const {
        return min_x <= r.max_x && r.min_x <= max_x && min_y <= r.max_y && r.min_y <= max_y;
    }

    /// Separation between two rectangles; 0 when they touch or overlap.
    [[nodiscard]] double gap_to(const Rect& r) const {
        const double dx = std::max({0.0, r.min_x - max_x, min_x - r.max_x});
        const double dy = std::max({0.0, r.min_y - max_y, min_y - r.max_y});
        return std::hypot(dx, dy);
    }
};

enum class GeometryKind : std::uint8_t { polygon, polyline };

/// A polygon (parts = closed rings, index 0 outer, rest holes) or a
/// polyline (parts = open chains; more than one part only after clipping).
struct Geometry {
    GeometryKind kind = GeometryKind::polygon;
    std::vector<std::vector<Point>> parts;

    bool operator==(const Geometry&) const = default;

    [[nodiscard]] bool empty() const { return parts.empty(); }
    [[nodiscard]] Rect bounds() const {
        Rect r;
        for (const auto& part : parts)
            for (const Point& p : part) r.extend(p);
        return r;
    }
};

inline Geometry make_polygon(std::vector<Point> ring) {
    if (!ring.empty() && !(ring.front() == ring.back())) ring.push_back(ring.front());
    Geometry g;
    g.kind = GeometryKind::polygon;
    g.parts.push_back(std::move(ring));
    return g;
}

inline Geometry make_polyline(std::vector<Point> chain) {
    Geometry g;
    g.kind = GeometryKind::polyline;
    g.parts.push_back(std::move(chain));
    return g;
}

// ---------------------------------------------------------------------------
// Measurements
// ---------------------------------------------------------------------------

/// Signed shoelace area of one closed ring (positive for CCW winding).
inline double ring_signed_area(const std::vector<Point>& ring) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        acc += cross(ring[i], ring[i + 1]);
    return acc / 2.0;
}

/// Nonnegative polygon area in m²; hole rings subtract from the outer
/// ring. Polylines have zero area.
inline double polygon_area(const Geometry& g) {
    if (g.kind != GeometryKind::polygon) return 0.0;
    double area = 0.0;
    for (std::size_t r = 0; r < g.parts.size(); ++r) {
        const double a = std::abs(ring_signed_area(g.parts[r]));
        area += (r == 0) ? a : -a;
    }
    return std::max(area, 0.0);
}

/// Total edge length in meters over every part (rings and chains alike).
inline double perimeter(const Geometry& g) {
    double len = 0.0;
    for (const auto& part : g.parts)
        for (std::size_t i = 0; i + 1 < part.size(); ++i)
            len += distance(part[i], part[i + 1]);
    return len;
}

struct Centroid {
    Point position;
    bool degenerate = false;  ///< true when the vertex-mean fallback was used
};

namespace detail {

inline Point vertex_mean(const Geometry& g) {
    Point acc;
    std::size_t n = 0;
    for (const auto& part : g.parts) {
        // skip the closing duplicate so it does not get double weight
        const std::size_t stop =
            (g.kind == GeometryKind::polygon && part.size() > 1) ? part.size() - 1 : part.size();
        for (std::size_t i = 0; i < stop; ++i) {
            acc = acc + part[i];
            ++n;
        }
    }
    return n ? Point{acc.x / double(n), acc.y / double(n)} : Point{};
}

}  // namespace detail

/// Area-weighted centroid for polygons (holes subtract), length-weighted
/// midpoint for polylines. Zero-area / zero-length input falls back to the
/// vertex mean and flags the result.
inline Centroid centroid(const Geometry& g) {
    if (g.kind == GeometryKind::polygon) {
        double area2 = 0.0;  // twice the signed area, hole rings negated
        double cx = 0.0, cy = 0.0;
        for (std::size_t r = 0; r < g.parts.size(); ++r) {
            const auto& ring = g.parts[r];
            const double sign =
                (r == 0) == (ring_signed_area(ring) >= 0.0) ? 1.0 : -1.0;  // holes oppose outer
            for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
                const double w = sign * cross(ring[i], ring[i + 1]);
                area2 += w;
                cx += w * (ring[i].x + ring[i + 1].x);
                cy += w * (ring[i].y + ring[i + 1].y);
            }
        }
        if (std::abs(area2) < 1e-12) return {detail::vertex_mean(g), true};
        return {{cx / (3.0 * area2), cy / (3.0 * area2)}, false};
    }
    // polyline: weight segment midpoints by segment length
    double total = 0.0;
    double cx = 0.0, cy = 0.0;
    for (const auto& part : g.parts) {
        for (std::size_t i = 0; i + 1 < part.size(); ++i) {
            const double len = distance(part[i], part[i + 1]);
            total += len;
            cx += len * (part[i].x + part[i + 1].x) / 2.0;
            cy += len * (part[i].y + part[i + 1].y) / 2.0;
        }
    }
    if (total < 1e-12) return {detail::vertex_mean(g), true};
    return {{cx / total, cy / total}, false};
}

// ---------------------------------------------------------------------------
// Minimum enclosing circle (Welzl)
// ---------------------------------------------------------------------------

struct Circle {
    Point center;
    double radius = 0.0;
};

namespace detail {

inline Circle circle_two(Point a, Point b) {
    const Point c{(a.x + b.x) / 2, (a.y + b.y) / 2};
    return {c, distance(a, b) / 2};
}

inline Circle circle_three(Point a, Point b, Point c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    if (std::abs(d) < 1e-14) {
        // collinear: span of the farthest pair
        Circle best = circle_two(a, b);
        for (const Circle& cand : {circle_two(a, c), circle_two(b, c)})
            if (cand.radius > best.radius) best = cand;
        return best;
    }
    const double ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / d;
    const double uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / d;
    const Point center{a.x + ux, a.y + uy};
    return {center, distance(center, a)};
}

inline bool in_circle(Point p, const Circle& c) {
    return distance(p, c.center) <= c.radius * (1.0 + 1e-12) + 1e-12;
}

inline Circle circle_of_support(const std::vector<Point>& support) {
    switch (support.size()) {
        case 0: return {};
        case 1: return {support[0], 0.0};
        case 2: return circle_two(support[0], support[1]);
        default: {
            // three support points, but the circle may be defined by two
            for (int i = 0; i < 3; ++i) {
                const Circle c = circle_two(support[i], support[(i + 1) % 3]);
                if (in_circle(support[(i + 2) % 3], c)) return c;
            }
            return circle_three(support[0], support[1], support[2]);
        }
    }
}

inline Circle welzl(std::vector<Point>& pts, std::size_t n, std::vector<Point>& support) {
    if (n == 0 || support.size() == 3) return circle_of_support(support);
    const Point p = pts[n - 1];
    Circle c = welzl(pts, n - 1, support);
    if (in_circle(p, c)) return c;
    support.push_back(p);
    c = welzl(pts, n - 1, support);
    support.pop_back();
    return c;
}

}  // namespace detail

/// Smallest circle containing every vertex of the geometry. Uses Welzl's
/// expected-linear algorithm over a deterministically shuffled copy of the
/// vertices, so repeated calls yield identical results.
inline Circle min_enclosing_circle(const Geometry& g) {
    std::vector<Point> pts;
    for (const auto& part : g.parts) pts.insert(pts.end(), part.begin(), part.end());
    if (pts.empty()) return {};

    // fixed-key xorshift shuffle keeps the recursion shallow without
    // introducing run-to-run nondeterminism
    std::uint64_t s = 0x9E3779B97F4A7C15ull ^ (pts.size() * 0x2545F4914F6CDD1Dull);
    for (std::size_t i = pts.size() - 1; i > 0; --i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        std::swap(pts[i], pts[s % (i + 1)]);
    }
    std::vector<Point> support;
    support.reserve(3);
    return detail::welzl(pts, pts.size(), support);
}

// ---------------------------------------------------------------------------
// Convex hull / oriented bounding box
// ---------------------------------------------------------------------------

/// Andrew monotone chain; returns CCW hull without the closing vertex.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Area of the minimum-area oriented bounding rectangle of the vertex set
/// (rotating calipers over the convex hull). 0 for degenerate input.
inline double min_oriented_bbox_area(const Geometry& g) {
    std::vector<Point> pts;
    for (const auto& part : g.parts) pts.insert(pts.end(), part.begin(), part.end());
    const std::vector<Point> hull = convex_hull(std::move(pts));
    if (hull.size() < 3) return 0.0;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point e = hull[(i + 1) % hull.size()] - hull[i];
        const double len = std::hypot(e.x, e.y);
        if (len < 1e-12) continue;
        const Point u{e.x / len, e.y / len};
        const Point v{-u.y, u.x};
        double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
        double lo_v = lo_u, hi_v = -lo_u;
        for (const Point& p : hull) {
            lo_u = std::min(lo_u, dot(p, u));
            hi_u = std::max(hi_u, dot(p, u));
            lo_v = std::min(lo_v, dot(p, v));
            hi_v = std::max(hi_v, dot(p, v));
        }
        best = std::min(best, (hi_u - lo_u) * (hi_v - lo_v));
    }
    return std::isfinite(best) ? best : 0.0;
}

// ---------------------------------------------------------------------------
// Shape & size classification
// ---------------------------------------------------------------------------

/// Unitless thresholds for the shape attribute. All ratios live in (0, 1].
struct ShapeConfig {
    double circle_isoperimetric_min = 0.85;   ///< min of 4πA/P²
    double circle_coverage_min = 0.85;        ///< min of A/(π·r_mec²)
    double square_window_lo = 0.90;           ///< window on 16A/P²
    double square_window_hi = 1.0;
    double rectangle_rectangularity_min = 0.85;  ///< min of A/obb_area
};

enum class ShapeClass : std::uint8_t { none, square, rectangular, circular };

inline const char* to_string(ShapeClass s) {
    switch (s) {
        case ShapeClass::square: return "square";
        case ShapeClass::rectangular: return "rectangular";
        case ShapeClass::circular: return "circular";
        default: return "none";
    }
}

/// Classify a polygon as circular, square or rectangular, in that
/// precedence order; anything failing all three tests is none.
inline ShapeClass classify_shape(const Geometry& g, const ShapeConfig& cfg) {
    if (g.kind != GeometryKind::polygon) return ShapeClass::none;
    const double area = polygon_area(g);
    const double perim = perimeter(g);
    if (area <= 0.0 || perim <= 0.0) return ShapeClass::none;

    const Circle mec = min_enclosing_circle(g);
    const double circle_iso = 4.0 * std::numbers::pi * area / (perim * perim);
    const double circle_cov =
        mec.radius > 0.0 ? area / (std::numbers::pi * mec.radius * mec.radius) : 0.0;
    if (circle_iso >= cfg.circle_isoperimetric_min && circle_cov >= cfg.circle_coverage_min)
        return ShapeClass::circular;

    const double obb = min_oriented_bbox_area(g);
    const double rectangularity = obb > 0.0 ? area / obb : 0.0;
    const double square_iso = 16.0 * area / (perim * perim);
    if (square_iso >= cfg.square_window_lo && square_iso <= cfg.square_window_hi &&
        rectangularity >= cfg.rectangle_rectangularity_min)
        return ShapeClass::square;
    if (rectangularity >= cfg.rectangle_rectangularity_min) return ShapeClass::rectangular;
    return ShapeClass::none;
}

/// Area thresholds (m²) for the size attribute; both bounds exclusive for
/// the class below them.
struct SizeProfile {
    double small_max = 3000.0;
    double medium_max = 10000.0;
};

enum class SizeClass : std::uint8_t { small, medium, large };

inline const char* to_string(SizeClass s) {
    switch (s) {
        case SizeClass::small: return "small";
        case SizeClass::medium: return "medium";
        default: return "large";
    }
}

inline SizeClass classify_size(double area, const SizeProfile& profile) {
    if (area < profile.small_max) return SizeClass::small;
    if (area < profile.medium_max) return SizeClass::medium;
    return SizeClass::large;
}

// ---------------------------------------------------------------------------
// Intersection, clipping, distance
// ---------------------------------------------------------------------------

namespace detail {

inline int orientation(Point a, Point b, Point c) {
    const double v = cross(b - a, c - a);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

inline bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

/// Closed-segment intersection, collinear touch included.
inline bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

inline bool segment_touches_rect(Point a, Point b, const Rect& r) {
    if (r.contains(a) || r.contains(b)) return true;
    const Point c1{r.min_x, r.min_y}, c2{r.max_x, r.min_y};
    const Point c3{r.max_x, r.max_y}, c4{r.min_x, r.max_y};
    return segments_intersect(a, b, c1, c2) || segments_intersect(a, b, c2, c3) ||
           segments_intersect(a, b, c3, c4) || segments_intersect(a, b, c4, c1);
}

}  // namespace detail

/// Even-odd point-in-polygon over every ring, so holes exclude.
/// Boundary points may land on either side; exact boundary handling is
/// the edge tests' job.
inline bool point_in_polygon(Point p, const Geometry& g) {
    bool inside = false;
    for (const auto& ring : g.parts) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            const Point a = ring[i], b = ring[i + 1];
            if ((a.y > p.y) != (b.y > p.y)) {
                const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if (x > p.x) inside = !inside;
            }
        }
    }
    return inside;
}

/// Does the geometry's region touch the rectangle? Boundary contact counts.
inline bool intersects_rect(const Geometry& g, const Rect& rect) {
    if (!g.bounds().overlaps(rect)) return false;
    for (const auto& part : g.parts) {
        for (const Point& p : part)
            if (rect.contains(p)) return true;
        for (std::size_t i = 0; i + 1 < part.size(); ++i)
            if (detail::segment_touches_rect(part[i], part[i + 1], rect)) return true;
    }
    // no boundary contact: rect is fully inside or fully outside the region
    if (g.kind == GeometryKind::polygon && point_in_polygon(rect.center(), g)) return true;
    return false;
}

namespace detail {

/// Sutherland–Hodgman of one closed ring against an axis-aligned
/// half-plane. side picks the clip edge, keep(p) tests the inside.
template <typename Keep, typename Lerp>
std::vector<Point> clip_ring_halfplane(const std::vector<Point>& ring, Keep keep, Lerp lerp) {
    std::vector<Point> out;
    if (ring.size() < 2) return out;
    out.reserve(ring.size() + 4);
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const Point cur = ring[i], nxt = ring[i + 1];
        const bool cin = keep(cur), nin = keep(nxt);
        if (cin) {
            out.push_back(cur);
            if (!nin) out.push_back(lerp(cur, nxt));
        } else if (nin) {
            out.push_back(lerp(cur, nxt));
        }
    }
    if (!out.empty()) out.push_back(out.front());
    return out;
}

inline std::vector<Point> clip_ring_to_rect(std::vector<Point> ring, const Rect& r) {
    auto lerp_x = [](Point a, Point b, double x) {
        const double t = (x - a.x) / (b.x - a.x);
        return Point{x, a.y + t * (b.y - a.y)};
    };
    auto lerp_y = [](Point a, Point b, double y) {
        const double t = (y - a.y) / (b.y - a.y);
        return Point{a.x + t * (b.x - a.x), y};
    };
    ring = clip_ring_halfplane(
        ring, [&](Point p) { return p.x >= r.min_x; },
        [&](Point a, Point b) { return lerp_x(a, b, r.min_x); });
    ring = clip_ring_halfplane(
        ring, [&](Point p) { return p.x <= r.max_x; },
        [&](Point a, Point b) { return lerp_x(a, b, r.max_x); });
    ring = clip_ring_halfplane(
        ring, [&](Point p) { return p.y >= r.min_y; },
        [&](Point a, Point b) { return lerp_y(a, b, r.min_y); });
    ring = clip_ring_halfplane(
        ring, [&](Point p) { return p.y <= r.max_y; },
        [&](Point a, Point b) { return lerp_y(a, b, r.max_y); });
    // fewer than 3 distinct vertices cannot bound area
    if (ring.size() < 4) return {};
    return ring;
}

/// Liang–Barsky; returns the clipped [t0,t1] of segment a→b inside r.
inline bool clip_segment_to_rect(Point a, Point b, const Rect& r, Point& out_a, Point& out_b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    double t0 = 0.0, t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - r.min_x, r.max_x - a.x, a.y - r.min_y, r.max_y - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
        } else {
            const double t = q[i] / p[i];
            if (p[i] < 0.0) {
                if (t > t1) return false;
                t0 = std::max(t0, t);
            } else {
                if (t < t0) return false;
                t1 = std::min(t1, t);
            }
        }
    }
    out_a = {a.x + t0 * dx, a.y + t0 * dy};
    out_b = {a.x + t1 * dx, a.y + t1 * dy};
    return true;
}

}  // namespace detail

/// Intersection of the geometry with a rectangle. Polygons use
/// ring-by-ring Sutherland–Hodgman; polylines use per-segment clipping,
/// stitching contiguous pieces back into chains. May return an empty
/// geometry when the overlap is a single point or degenerate sliver.
inline Geometry clip_to_rect(const Geometry& g, const Rect& rect) {
    Geometry out;
    out.kind = g.kind;
    if (g.kind == GeometryKind::polygon) {
        for (std::size_t r = 0; r < g.parts.size(); ++r) {
            std::vector<Point> ring = detail::clip_ring_to_rect(g.parts[r], rect);
            if (ring.empty()) {
                if (r == 0) return out;  // outer ring gone, holes are moot
                continue;
            }
            out.parts.push_back(std::move(ring));
        }
        return out;
    }
    for (const auto& chain : g.parts) {
        std::vector<Point> piece;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            Point a, b;
            if (!detail::clip_segment_to_rect(chain[i], chain[i + 1], rect, a, b)) {
                if (piece.size() >= 2) out.parts.push_back(std::move(piece));
                piece.clear();
                continue;
            }
            if (piece.empty()) {
                piece.push_back(a);
            } else if (!(piece.back() == a)) {
                if (piece.size() >= 2) out.parts.push_back(std::move(piece));
                piece.clear();
                piece.push_back(a);
            }
            piece.push_back(b);
        }
        if (piece.size() >= 2) out.parts.push_back(std::move(piece));
    }
    return out;
}

namespace detail {

inline double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 < 1e-24) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

inline double segment_segment_distance(Point p1, Point p2, Point q1, Point q2) {
    if (segments_intersect(p1, p2, q1, q2)) return 0.0;
    return std::min({point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2),
                     point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)});
}

}  // namespace detail

/// Minimum boundary-to-boundary distance between two geometries; 0 when
/// they intersect or one contains the other.
inline double distance(const Geometry& a, const Geometry& b) {
    if (a.empty() || b.empty()) return 0.0;
    // containment short-circuit: a vertex inside the other region
    if (b.kind == GeometryKind::polygon && !a.parts.empty() && !a.parts[0].empty() &&
        point_in_polygon(a.parts[0][0], b))
        return 0.0;
    if (a.kind == GeometryKind::polygon && !b.parts.empty() && !b.parts[0].empty() &&
        point_in_polygon(b.parts[0][0], a))
        return 0.0;

    double best = std::numeric_limits<double>::infinity();
    for (const auto& pa : a.parts) {
        for (const auto& pb : b.parts) {
            for (std::size_t i = 0; i + 1 < pa.size() || (pa.size() == 1 && i == 0); ++i) {
                const Point a1 = pa[i];
                const Point a2 = pa[std::min(i + 1, pa.size() - 1)];
                for (std::size_t j = 0; j + 1 < pb.size() || (pb.size() == 1 && j == 0); ++j) {
                    const Point b1 = pb[j];
                    const Point b2 = pb[std::min(j + 1, pb.size() - 1)];
                    best = std::min(best, detail::segment_segment_distance(a1, a2, b1, b2));
                    if (best == 0.0) return 0.0;
                }
            }
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

// ---------------------------------------------------------------------------
// Relative position
// ---------------------------------------------------------------------------

enum class RelationKind : std::uint8_t { left_of, top_of, right_of, bottom_of, next_to };

inline const char* to_string(RelationKind k) {
    switch (k) {
        case RelationKind::left_of: return "left_of";
        case RelationKind::top_of: return "top_of";
        case RelationKind::right_of: return "right_of";
        case RelationKind::bottom_of: return "bottom_of";
        default: return "next_to";
    }
}

inline std::optional<RelationKind> relation_from_string(const std::string& s) {
    if (s == "left_of") return RelationKind::left_of;
    if (s == "top_of") return RelationKind::top_of;
    if (s == "right_of") return RelationKind::right_of;
    if (s == "bottom_of") return RelationKind::bottom_of;
    if (s == "next_to") return RelationKind::next_to;
    return std::nullopt;
}

/// Distance below which two objects count as "next to" each other.
inline constexpr double kNextToMaxDistance = 1000.0;

struct RelationSet {
    bool left_of = false;
    bool top_of = false;
    bool right_of = false;
    bool bottom_of = false;
    bool next_to = false;

    [[nodiscard]] bool has(RelationKind k) const {
        switch (k) {
            case RelationKind::left_of: return left_of;
            case RelationKind::top_of: return top_of;
            case RelationKind::right_of: return right_of;
            case RelationKind::bottom_of: return bottom_of;
            default: return next_to;
        }
    }
};

/// Directional relations compare centroids (strictly, so coincident
/// centroids produce none); next_to tests boundary distance < 1000 m.
inline RelationSet relative_position(const Geometry& a, const Geometry& b) {
    RelationSet rel;
    const Point ca = centroid(a).position;
    const Point cb = centroid(b).position;
    rel.left_of = ca.x < cb.x;
    rel.right_of = ca.x > cb.x;
    rel.top_of = ca.y > cb.y;
    rel.bottom_of = ca.y < cb.y;
    rel.next_to = distance(a, b) < kNextToMaxDistance;
    return rel;
}

}  // namespace geoqa
