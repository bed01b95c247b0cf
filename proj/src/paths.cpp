#include "gauge_lab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gauge_lab {

Path::Path(std::vector<Vec2> v, bool closed) : vertices_(std::move(v)), closed_(closed) {
    if (vertices_.size() < 2) throw Error("path needs at least 2 vertices");
    for (const auto& p : vertices_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("path vertex is not finite");
    if (closed_ && !(vertices_.front() == vertices_.back()))
        throw Error("loop must end on its first vertex");
}

Path Path::open(std::vector<Vec2> vertices) { return Path(std::move(vertices), false); }

Path Path::loop(std::vector<Vec2> vertices) { return Path(std::move(vertices), true); }

Path Path::circle(Vec2 center, double radius, int segments, int turns) {
    if (segments < 3 || turns == 0 || !(radius > 0.0)) throw Error("circle needs radius > 0, >= 3 segments, turns != 0");
    const int total = segments * std::abs(turns);
    const double dir = turns > 0 ? 1.0 : -1.0;
    std::vector<Vec2> v;
    v.reserve(static_cast<std::size_t>(total) + 1);
    for (int k = 0; k < total; ++k) {
        const double th = dir * 2.0 * std::numbers::pi * (k % segments) / segments;
        v.push_back({center.x + radius * std::cos(th), center.y + radius * std::sin(th)});
    }
    v.push_back(v.front());
    return Path(std::move(v), true);
}

Path Path::arc(Vec2 center, double radius, double theta0, double theta1, int segments) {
    if (segments < 1 || !(radius > 0.0)) throw Error("arc needs radius > 0 and >= 1 segment");
    std::vector<Vec2> v;
    for (int k = 0; k <= segments; ++k) {
        const double th = theta0 + (theta1 - theta0) * k / segments;
        v.push_back({center.x + radius * std::cos(th), center.y + radius * std::sin(th)});
    }
    return Path(std::move(v), false);
}

Path Path::reversed() const {
    std::vector<Vec2> v(vertices_.rbegin(), vertices_.rend());
    return Path(std::move(v), closed_);
}

bool coincident(Vec2 a, Vec2 b) {
    const double scale = std::max({1.0, norm(a), norm(b)});
    return norm(a - b) <= 1e-12 * scale;
}

Path Path::then(const Path& next) const {
    if (!coincident(back(), next.front())) throw Error("paths do not join");
    std::vector<Vec2> v = vertices_;
    v.insert(v.end(), next.vertices_.begin() + 1, next.vertices_.end());
    const bool closes = coincident(v.front(), v.back());
    if (closes) v.back() = v.front();
    return Path(std::move(v), closes);
}

double Path::signed_area() const {
    double a = 0.0;
    for (std::size_t k = 0; k + 1 < vertices_.size(); ++k) a += cross(vertices_[k], vertices_[k + 1]);
    return 0.5 * a;
}

namespace {

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

double point_segment_distance(Vec2 a, Vec2 b, Vec2 p) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double s = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + s * ab));
}

}  // namespace

bool Path::is_simple() const {
    const std::size_t n = segment_count();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const bool adjacent = b == a + 1 || (closed_ && a == 0 && b == n - 1);
            if (adjacent) {
                // adjacent segments may only share their joint; folding back overlaps
                const Vec2 p = vertices_[a], q = vertices_[a + 1], s = vertices_[b + 1];
                if (b == a + 1 && orient(p, q, s) == 0.0 && dot(q - p, s - q) < 0.0) return false;
                continue;
            }
            if (segments_touch(vertices_[a], vertices_[a + 1], vertices_[b], vertices_[b + 1])) return false;
        }
    }
    return true;
}

double Path::distance_to(Vec2 p) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < vertices_.size(); ++k)
        d = std::min(d, point_segment_distance(vertices_[k], vertices_[k + 1], p));
    return d;
}

void Path::require_outside(const Disk& disk) const {
    for (const auto& p : vertices_)
        if (disk.contains(p)) throw Error("path vertex lies inside the excluded disk");
}

double unwrapped_angle(const Path& path, Vec2 center) {
    double total = 0.0;
    const auto& v = path.vertices();
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const Vec2 a = v[k] - center;
        const Vec2 b = v[k + 1] - center;
        // angle subtended by one straight segment is below pi unless it crosses the center
        total += std::atan2(cross(a, b), dot(a, b));
    }
    return total;
}

int winding_number(const Path& loop, Vec2 center) {
    if (!loop.closed()) throw Error("winding_number needs a closed loop");
    if (loop.distance_to(center) == 0.0) throw Error("loop passes through the winding center");
    return static_cast<int>(std::lround(unwrapped_angle(loop, center) / (2.0 * std::numbers::pi)));
}

bool point_in_polygon(const Path& loop, Vec2 p) {
    bool inside = false;
    const auto& v = loop.vertices();
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const Vec2 a = v[k], b = v[k + 1];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

}  // namespace gauge_lab
