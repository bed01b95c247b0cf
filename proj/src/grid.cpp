#include "gauge_lab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace gauge_lab {

void Grid2::validate() const {
    if (nx < 8 || ny < 8) {
        throw Error("grid needs at least 8 nodes per axis (got " + std::to_string(nx) + "x" +
                    std::to_string(ny) + ")");
    }
    if (!(dx > 0.0) || !(dy > 0.0)) throw Error("grid spacing must be positive");
    if (excluded) {
        const auto& d = *excluded;
        if (!(d.radius >= 0.0)) throw Error("excluded disk radius must be non-negative");
        const bool inside = d.center.x - d.radius > x0 && d.center.x + d.radius < x_max() &&
                            d.center.y - d.radius > y0 && d.center.y + d.radius < y_max();
        if (!inside) throw Error("excluded disk must lie strictly inside the domain");
    }
}

bool Grid2::same_lattice(const Grid2& o) const {
    return nx == o.nx && ny == o.ny && dx == o.dx && dy == o.dy && x0 == o.x0 && y0 == o.y0;
}

Grid2 Grid2::centered(int nx, int ny, double h, Vec2 center) {
    Grid2 g;
    g.nx = nx;
    g.ny = ny;
    g.dx = h;
    g.dy = h;
    g.x0 = center.x - h * (nx / 2);
    g.y0 = center.y - h * (ny / 2);
    return g;
}

double PotentialState::dt() const {
    if (!a_prev) throw Error("state has no previous time level");
    return time - a_prev->time;
}

PotentialState PotentialState::static_from(const VectorField2& a) {
    PotentialState s;
    s.a = a;
    s.phi = ScalarField2(a.grid, a.time);
    s.time = a.time;
    s.is_static = true;
    return s;
}

PotentialState PotentialState::zero(const Grid2& g, double t) {
    auto s = static_from(VectorField2(g, t));
    s.a_exact = [](Vec2) { return Vec2{}; };
    return s;
}

void PotentialState::validate() const {
    const Grid2& g = a.grid;
    g.validate();
    auto check_lattice = [&](const Grid2& other, const char* what) {
        if (!g.same_lattice(other)) throw Error(std::string("state field '") + what + "' is on a different grid");
    };
    check_lattice(phi.grid, "phi");
    if (a.x.size() != g.size() || a.y.size() != g.size() || phi.values.size() != g.size())
        throw Error("state field shape does not match its grid");
    if (phi.time != time || a.time != time) throw Error("state time stamps are inconsistent");
    if (phi_prev.has_value() != a_prev.has_value())
        throw Error("previous level must carry both phi and A");
    if (a_prev) {
        check_lattice(a_prev->grid, "a_prev");
        check_lattice(phi_prev->grid, "phi_prev");
        if (phi_prev->time != a_prev->time) throw Error("previous-level time stamps are inconsistent");
        if (!(a_prev->time < time)) throw Error("previous level must be earlier than the current level");
    }
}

NormMask::NormMask(const Grid2& g, int skirt, int outer_layer) : grid_(g), keep_(g.size(), 0) {
    const int margin = std::max(skirt, outer_layer);
    for (int j = margin; j < g.ny - margin; ++j) {
        for (int i = margin; i < g.nx - margin; ++i) {
            if (!g.is_excluded(i, j)) keep_[g.index(i, j)] = 1;
        }
    }
}

NormMask& NormMask::exclude_disk(Vec2 center, double radius) {
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i)
            if (norm(grid_.point(i, j) - center) < radius) keep_[grid_.index(i, j)] = 0;
    return *this;
}

NormMask& NormMask::keep_disk(Vec2 center, double radius) {
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i)
            if (norm(grid_.point(i, j) - center) >= radius) keep_[grid_.index(i, j)] = 0;
    return *this;
}

std::size_t NormMask::count() const {
    return static_cast<std::size_t>(std::count(keep_.begin(), keep_.end(), 1));
}

double max_abs(const ScalarField2& f, const NormMask& mask) {
    double m = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k)
        if (mask.at(k)) m = std::max(m, std::abs(f.values[k]));
    return m;
}

double max_abs(const VectorField2& v, const NormMask& mask) {
    double m = 0.0;
    for (std::size_t k = 0; k < v.x.size(); ++k)
        if (mask.at(k)) m = std::max(m, std::hypot(v.x[k], v.y[k]));
    return m;
}

double max_abs_difference(const ScalarField2& a, const ScalarField2& b, const NormMask& mask) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        if (mask.at(k)) m = std::max(m, std::abs(a.values[k] - b.values[k]));
    return m;
}

double max_abs_difference(const VectorField2& a, const VectorField2& b, const NormMask& mask) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.x.size(); ++k)
        if (mask.at(k)) m = std::max(m, std::hypot(a.x[k] - b.x[k], a.y[k] - b.y[k]));
    return m;
}

}  // namespace gauge_lab
