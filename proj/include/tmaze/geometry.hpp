#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace tmaze {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;

    double norm() const { return std::sqrt(x * x + y * y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Axis-aligned rectangle, used for walls and obstacles.
struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    bool operator==(const Rect&) const = default;

    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }

    Vec2 closest_point(Vec2 p) const {
        return {std::clamp(p.x, xmin, xmax), std::clamp(p.y, ymin, ymax)};
    }
};

constexpr double kNoHit = std::numeric_limits<double>::infinity();

// Slab-method ray/rect intersection. Returns the entry distance along the
// (unit) direction, or kNoHit when the ray misses. A ray starting inside
// the rect reports distance 0.
inline double ray_rect(Vec2 origin, Vec2 dir, const Rect& r) {
    double tmin = 0.0;
    double tmax = kNoHit;
    const double o[2] = {origin.x, origin.y};
    const double d[2] = {dir.x, dir.y};
    const double lo[2] = {r.xmin, r.ymin};
    const double hi[2] = {r.xmax, r.ymax};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return kNoHit;
            continue;
        }
        double t1 = (lo[axis] - o[axis]) / d[axis];
        double t2 = (hi[axis] - o[axis]) / d[axis];
        if (t1 > t2) std::swap(t1, t2);
        tmin = std::max(tmin, t1);
        tmax = std::min(tmax, t2);
        if (tmin > tmax) return kNoHit;
    }
    return tmin;
}

inline double wrap_angle(double a) {
    // wrap to (-pi, pi]
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

}  // namespace tmaze
