#pragma once

// Closed-form potentials, fields and gauge functions for the solenoid geometry,
// plus the smoothed retarded point kernel. These are the exact references the
// grid computations are tested against.

#include "gauge_lab/grid.hpp"
#include "gauge_lab/paths.hpp"

#include <variant>
#include <vector>

namespace gauge_lab {

/// Straight solenoid along z. radius == 0 is the ideal thin solenoid.
struct SolenoidSpec {
    Vec2 center;
    double radius{0.0};
    double flux{0.0};
    double t_on{0.0};   // switch-on time
    double ramp{0.0};   // ramp duration; 0 is a step

    void validate() const;
    /// Smooth 0 -> 1 switch-on profile, (1 - cos(pi s)) / 2 over the ramp.
    [[nodiscard]] double ramp_value(double t) const;
    [[nodiscard]] double ramp_end() const { return t_on + ramp; }
    [[nodiscard]] Disk disk() const { return {center, radius}; }
};

/// A = flux / (2 pi r^2) * (-(y - yc), x - xc). Throws at the center.
[[nodiscard]] Vec2 thin_solenoid_A(Vec2 p, const SolenoidSpec& s);

struct SolenoidSample {
    Vec2 a;
    double bz{0.0};
};

/// Uniform-interior solenoid of radius R > 0: azimuthal A of magnitude
/// flux*r/(2 pi R^2) inside and flux/(2 pi r) outside; B_z = flux/(pi R^2) inside.
[[nodiscard]] SolenoidSample finite_solenoid(Vec2 p, const SolenoidSpec& s);

struct PolynomialTerm {
    double coeff{0.0};
    int px{0};
    int py{0};
    int pt{0};
};

/// Gauge function chi(x, y, t) with closed-form derivatives.
class GaugeChi {
public:
    enum class Kind { polynomial, plane_wave, polar_angle };

    /// sum coeff * x^px * y^py * t^pt
    static GaugeChi polynomial(std::vector<PolynomialTerm> terms);
    static GaugeChi constant(double value) { return polynomial({{value, 0, 0, 0}}); }
    /// amplitude * sin(k.x - omega t + phase) with omega = c |k| enforced here.
    static GaugeChi plane_wave(Vec2 k, double amplitude, double phase, double c = 1.0);
    /// -(flux / 2 pi) * theta, theta = atan2 about `center` in (-pi, pi].
    /// The branch cut is the ray theta = pi; crossing it from below (theta -> -pi)
    /// to above (theta -> pi) the value jumps by -flux.
    static GaugeChi polar_angle(double flux, Vec2 center);

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] double value(Vec2 p, double t = 0.0) const;
    [[nodiscard]] Vec2 gradient(Vec2 p, double t = 0.0) const;
    [[nodiscard]] double time_derivative(Vec2 p, double t = 0.0) const;
    [[nodiscard]] double laplacian(Vec2 p, double t = 0.0) const;
    [[nodiscard]] double second_time_derivative(Vec2 p, double t = 0.0) const;

    /// Polar kind only.
    [[nodiscard]] Vec2 center() const;
    [[nodiscard]] double flux() const;
    /// Plane-wave kind only.
    [[nodiscard]] Vec2 wave_vector() const;
    [[nodiscard]] double omega() const;

private:
    struct Polynomial {
        std::vector<PolynomialTerm> terms;
    };
    struct PlaneWave {
        Vec2 k;
        double omega;
        double amplitude;
        double phase;
    };
    struct Polar {
        double flux;
        Vec2 center;
    };
    explicit GaugeChi(std::variant<Polynomial, PlaneWave, Polar> v) : impl_(std::move(v)) {}
    std::variant<Polynomial, PlaneWave, Polar> impl_;
};

/// Integral of grad(chi) along the path for the polar kind, i.e. the
/// continuously unwrapped change -(flux/2pi) * dtheta. A closed loop with
/// winding w about the center gives -flux * w. Throws if the path comes
/// within `min_distance` of the center.
[[nodiscard]] double polar_chi_line_integral(const GaugeChi& chi, const Path& path, double min_distance);
/// Same, with the minimum distance set to one grid cell.
[[nodiscard]] double polar_chi_line_integral(const GaugeChi& chi, const Path& path, const Grid2& grid);

/// Smoothed retarded point kernel -G(t - r/c) / (4 pi r), where G is a unit-area
/// Gaussian whose full width at half maximum is `width`. Throws for r <= 0 or width <= 0.
[[nodiscard]] double retarded_point_kernel(double r, double t, double width, double c = 1.0);

}  // namespace gauge_lab
