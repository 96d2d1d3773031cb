#ifndef M2C_GEOM_HPP
#define M2C_GEOM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace m2c {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
    bool operator!=(const Vec3& o) const { return !(*this == o); }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    return n > 0.0 ? v / n : Vec3{0, 0, 0};
}

inline Vec3 min3(const Vec3& a, const Vec3& b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}

inline Vec3 max3(const Vec3& a, const Vec3& b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}

struct Triangle {
    Vec3 a, b, c;
    Vec3 normal; // unit face normal

    Vec3 vertex(int i) const { return i == 0 ? a : (i == 1 ? b : c); }
    double area() const { return 0.5 * norm(cross(b - a, c - a)); }
    Vec3 geometric_normal() const { return normalized(cross(b - a, c - a)); }
};

inline Triangle make_triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
    Triangle t;
    t.a = a;
    t.b = b;
    t.c = c;
    t.normal = t.geometric_normal();
    return t;
}

struct Aabb {
    Vec3 min{std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
    Vec3 max{-std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};

    bool empty() const { return min.x > max.x || min.y > max.y || min.z > max.z; }

    void expand(const Vec3& p) {
        min = min3(min, p);
        max = max3(max, p);
    }

    void expand(const Aabb& b) {
        min = min3(min, b.min);
        max = max3(max, b.max);
    }

    Vec3 center() const { return (min + max) * 0.5; }
    Vec3 extent() const { return max - min; }
};

// Grows every face outward by r (r >= 0).
inline Aabb dilate(const Aabb& box, double r) {
    Aabb out = box;
    out.min -= Vec3{r, r, r};
    out.max += Vec3{r, r, r};
    return out;
}

// Closed-interval containment.
inline bool contains(const Aabb& box, const Vec3& p) {
    return p.x >= box.min.x && p.x <= box.max.x &&
           p.y >= box.min.y && p.y <= box.max.y &&
           p.z >= box.min.z && p.z <= box.max.z;
}

inline Aabb triangle_bounds(const Triangle& t) {
    Aabb b;
    b.expand(t.a);
    b.expand(t.b);
    b.expand(t.c);
    return b;
}

// Squared distance from p to the box (0 when inside).
inline double aabb_distance2(const Aabb& box, const Vec3& p) {
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        double v = p[i];
        double lo = box.min[i], hi = box.max[i];
        if (v < lo) d2 += (lo - v) * (lo - v);
        else if (v > hi) d2 += (v - hi) * (v - hi);
    }
    return d2;
}

// Which feature of the triangle realizes the closest point.
enum class TriFeature : std::uint8_t {
    VertA = 0, VertB = 1, VertC = 2,
    EdgeAB = 3, EdgeBC = 4, EdgeCA = 5,
    Face = 6,
};

struct ClosestPointResult {
    Vec3 point;
    double dist2;
    TriFeature feature;
};

// Closest point on a triangle via Voronoi-region classification
// (Ericson, Real-Time Collision Detection, 5.1.5). The region also
// identifies the feature, which the signed-distance test needs to pick
// the right pseudonormal.
inline ClosestPointResult closest_point_on_triangle(const Triangle& t, const Vec3& p) {
    const Vec3 ab = t.b - t.a;
    const Vec3 ac = t.c - t.a;
    const Vec3 ap = p - t.a;

    const double d1 = dot(ab, ap);
    const double d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0)
        return {t.a, norm2(p - t.a), TriFeature::VertA};

    const Vec3 bp = p - t.b;
    const double d3 = dot(ab, bp);
    const double d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3)
        return {t.b, norm2(p - t.b), TriFeature::VertB};

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double v = d1 / (d1 - d3);
        Vec3 q = t.a + ab * v;
        return {q, norm2(p - q), TriFeature::EdgeAB};
    }

    const Vec3 cp = p - t.c;
    const double d5 = dot(ab, cp);
    const double d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6)
        return {t.c, norm2(p - t.c), TriFeature::VertC};

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double w = d2 / (d2 - d6);
        Vec3 q = t.a + ac * w;
        return {q, norm2(p - q), TriFeature::EdgeCA};
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        Vec3 q = t.b + (t.c - t.b) * w;
        return {q, norm2(p - q), TriFeature::EdgeBC};
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom;
    const double w = vc * denom;
    Vec3 q = t.a + ab * v + ac * w;
    return {q, norm2(p - q), TriFeature::Face};
}

} // namespace m2c

#endif
