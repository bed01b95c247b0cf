#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gauge_lab {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Disk removed from the probe-accessible region (the solenoid interior).
struct Disk {
    Vec2 center;
    double radius{0.0};

    [[nodiscard]] bool contains(Vec2 p) const { return norm(p - center) < radius; }
};

/// Uniform node-centred 2D grid. Node (i, j) sits at (x0 + i*dx, y0 + j*dy).
struct Grid2 {
    int nx{0};
    int ny{0};
    double dx{1.0};
    double dy{1.0};
    double x0{0.0};
    double y0{0.0};
    std::optional<Disk> excluded;

    /// Throws gauge_lab::Error if the grid is unusable.
    void validate() const;

    [[nodiscard]] double x(int i) const { return x0 + i * dx; }
    [[nodiscard]] double y(int j) const { return y0 + j * dy; }
    [[nodiscard]] Vec2 point(int i, int j) const { return {x(i), y(j)}; }
    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    [[nodiscard]] double x_max() const { return x(nx - 1); }
    [[nodiscard]] double y_max() const { return y(ny - 1); }
    [[nodiscard]] double h() const { return dx > dy ? dx : dy; }
    [[nodiscard]] bool is_excluded(int i, int j) const {
        return excluded && excluded->contains(point(i, j));
    }

    /// Same sampling lattice (the excluded disk is not compared).
    [[nodiscard]] bool same_lattice(const Grid2& other) const;

    /// nx*ny grid with spacing h whose middle node sits at `center`.
    static Grid2 centered(int nx, int ny, double h, Vec2 center = {});
};

struct ScalarField2 {
    Grid2 grid;
    std::vector<double> values;
    double time{0.0};

    ScalarField2() = default;
    explicit ScalarField2(const Grid2& g, double t = 0.0)
        : grid(g), values(g.size(), 0.0), time(t) {}

    [[nodiscard]] double& operator()(int i, int j) { return values[grid.index(i, j)]; }
    [[nodiscard]] double operator()(int i, int j) const { return values[grid.index(i, j)]; }
};

struct VectorField2 {
    Grid2 grid;
    std::vector<double> x;
    std::vector<double> y;
    double time{0.0};

    VectorField2() = default;
    explicit VectorField2(const Grid2& g, double t = 0.0)
        : grid(g), x(g.size(), 0.0), y(g.size(), 0.0), time(t) {}

    [[nodiscard]] Vec2 at(int i, int j) const {
        const auto k = grid.index(i, j);
        return {x[k], y[k]};
    }
    void set(int i, int j, Vec2 v) {
        const auto k = grid.index(i, j);
        x[k] = v.x;
        y[k] = v.y;
    }
};

/// Fill a field by evaluating `f(point)` at every node.
template <class F>
ScalarField2 sample_scalar(const Grid2& g, F&& f, double t = 0.0) {
    ScalarField2 out(g, t);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out(i, j) = f(g.point(i, j));
    return out;
}

template <class F>
VectorField2 sample_vector(const Grid2& g, F&& f, double t = 0.0) {
    VectorField2 out(g, t);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.set(i, j, f(g.point(i, j)));
    return out;
}

/// Potentials (phi, A) at one time level plus, optionally, the previous level.
///
/// The previous level supplies dA/dt and dphi/dt by backward differences.
/// A state without a previous level must be declared static.
struct PotentialState {
    ScalarField2 phi;
    VectorField2 a;
    std::optional<ScalarField2> phi_prev;
    std::optional<VectorField2> a_prev;
    double time{0.0};
    bool is_static{false};
    /// Closed form of A at `time`, when known. Loop integrals use it instead of
    /// interpolating the samples. Empty when unknown.
    std::function<Vec2(Vec2)> a_exact;

    [[nodiscard]] const Grid2& grid() const { return a.grid; }
    [[nodiscard]] bool has_previous() const { return a_prev.has_value(); }
    /// Spacing between the current and previous levels.
    [[nodiscard]] double dt() const;

    /// Static state with phi = 0 and the given A.
    static PotentialState static_from(const VectorField2& a);
    static PotentialState zero(const Grid2& g, double t = 0.0);

    /// Throws if the fields do not share one lattice or time stamps disagree.
    void validate() const;
};

/// Node mask used by every norm: skips a boundary skirt, the excluded disk and
/// an optional outer layer (the damping sponge).
class NormMask {
public:
    NormMask() = default;
    explicit NormMask(const Grid2& g, int skirt = 2, int outer_layer = 0);

    /// Additionally drop nodes within `radius` of `center`.
    NormMask& exclude_disk(Vec2 center, double radius);
    /// Keep only nodes within `radius` of `center`.
    NormMask& keep_disk(Vec2 center, double radius);

    [[nodiscard]] bool operator()(int i, int j) const { return keep_[grid_.index(i, j)] != 0; }
    [[nodiscard]] bool at(std::size_t k) const { return keep_[k] != 0; }
    [[nodiscard]] const Grid2& grid() const { return grid_; }
    [[nodiscard]] std::size_t count() const;

private:
    Grid2 grid_;
    std::vector<unsigned char> keep_;
};

[[nodiscard]] double max_abs(const ScalarField2& f, const NormMask& mask);
[[nodiscard]] double max_abs(const VectorField2& v, const NormMask& mask);
[[nodiscard]] double max_abs_difference(const ScalarField2& a, const ScalarField2& b, const NormMask& mask);
[[nodiscard]] double max_abs_difference(const VectorField2& a, const VectorField2& b, const NormMask& mask);

}  // namespace gauge_lab
