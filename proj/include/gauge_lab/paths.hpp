#pragma once

#include "gauge_lab/grid.hpp"

#include <string>
#include <vector>

namespace gauge_lab {

/// Polyline path. Loops repeat their first vertex at the end and are
/// counterclockwise-positive.
class Path {
public:
    Path() = default;

    static Path open(std::vector<Vec2> vertices);
    static Path loop(std::vector<Vec2> vertices);
    /// Polygonal circle with `segments` segments per turn; `turns` may be
    /// negative (clockwise). |turns| > 1 retraces the circle.
    static Path circle(Vec2 center, double radius, int segments, int turns = 1);
    /// Open arc from angle theta0 to theta1 (radians, either direction).
    static Path arc(Vec2 center, double radius, double theta0, double theta1, int segments);

    [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
    [[nodiscard]] bool closed() const { return closed_; }
    [[nodiscard]] std::size_t segment_count() const { return vertices_.size() - 1; }
    [[nodiscard]] Vec2 front() const { return vertices_.front(); }
    [[nodiscard]] Vec2 back() const { return vertices_.back(); }

    [[nodiscard]] Path reversed() const;
    /// Traverse this path then `next`; the result is a loop when it returns to its start.
    [[nodiscard]] Path then(const Path& next) const;

    /// Shoelace area; positive for counterclockwise loops.
    [[nodiscard]] double signed_area() const;
    /// No two non-adjacent segments touch.
    [[nodiscard]] bool is_simple() const;
    [[nodiscard]] double distance_to(Vec2 p) const;
    /// Throws if a vertex lies inside the disk.
    void require_outside(const Disk& disk) const;

private:
    Path(std::vector<Vec2> v, bool closed);
    std::vector<Vec2> vertices_;
    bool closed_{false};
};

/// Points equal up to 1e-12 relative to their magnitude (at least 1e-12 absolute).
[[nodiscard]] bool coincident(Vec2 a, Vec2 b);

/// Continuously unwrapped change of the polar angle about `center` along the path.
[[nodiscard]] double unwrapped_angle(const Path& path, Vec2 center);
/// Signed number of turns about `center`; exact for valid loops.
[[nodiscard]] int winding_number(const Path& loop, Vec2 center);
/// Even-odd point-in-polygon test.
[[nodiscard]] bool point_in_polygon(const Path& loop, Vec2 p);

}  // namespace gauge_lab
