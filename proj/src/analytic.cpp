#include "gauge_lab/analytic.hpp"

#include <cmath>
#include <numbers>

namespace gauge_lab {

using std::numbers::pi;

void SolenoidSpec::validate() const {
    if (!(radius >= 0.0)) throw Error("solenoid radius must be >= 0");
    if (!(ramp >= 0.0)) throw Error("solenoid ramp duration must be >= 0");
    if (!std::isfinite(flux)) throw Error("solenoid flux must be finite");
}

double SolenoidSpec::ramp_value(double t) const {
    if (t <= t_on) return 0.0;
    if (ramp <= 0.0 || t >= t_on + ramp) return 1.0;
    return 0.5 * (1.0 - std::cos(pi * (t - t_on) / ramp));
}

Vec2 thin_solenoid_A(Vec2 p, const SolenoidSpec& s) {
    const Vec2 d = p - s.center;
    const double r2 = dot(d, d);
    if (r2 == 0.0) throw Error("thin_solenoid_A: evaluated at the solenoid axis");
    const double f = s.flux / (2.0 * pi * r2);
    return {-f * d.y, f * d.x};
}

SolenoidSample finite_solenoid(Vec2 p, const SolenoidSpec& s) {
    if (!(s.radius > 0.0)) throw Error("finite_solenoid: radius must be positive");
    const Vec2 d = p - s.center;
    const double r2 = dot(d, d);
    const double R2 = s.radius * s.radius;
    if (r2 < R2) {
        const double f = s.flux / (2.0 * pi * R2);
        return {{-f * d.y, f * d.x}, s.flux / (pi * R2)};
    }
    const double f = s.flux / (2.0 * pi * r2);
    return {{-f * d.y, f * d.x}, 0.0};
}

// --- GaugeChi -------------------------------------------------------------

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

// d^m/dx^m of x^n
double dpow(double x, int n, int m) {
    if (m > n) return 0.0;
    double c = 1.0;
    for (int k = 0; k < m; ++k) c *= n - k;
    return c * ipow(x, n - m);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

GaugeChi GaugeChi::polynomial(std::vector<PolynomialTerm> terms) {
    for (const auto& t : terms)
        if (t.px < 0 || t.py < 0 || t.pt < 0) throw Error("polynomial chi: negative exponent");
    return GaugeChi(Polynomial{std::move(terms)});
}

GaugeChi GaugeChi::plane_wave(Vec2 k, double amplitude, double phase, double c) {
    const double kn = norm(k);
    if (!(kn > 0.0)) throw Error("plane-wave chi: wave vector must be nonzero");
    if (!(c > 0.0)) throw Error("plane-wave chi: c must be positive");
    return GaugeChi(PlaneWave{k, c * kn, amplitude, phase});
}

GaugeChi GaugeChi::polar_angle(double flux, Vec2 center) { return GaugeChi(Polar{flux, center}); }

GaugeChi::Kind GaugeChi::kind() const {
    return std::visit(overloaded{[](const Polynomial&) { return Kind::polynomial; },
                                 [](const PlaneWave&) { return Kind::plane_wave; },
                                 [](const Polar&) { return Kind::polar_angle; }},
                      impl_);
}

double GaugeChi::value(Vec2 p, double t) const {
    return std::visit(
        overloaded{[&](const Polynomial& q) {
                       double v = 0.0;
                       for (const auto& m : q.terms) v += m.coeff * ipow(p.x, m.px) * ipow(p.y, m.py) * ipow(t, m.pt);
                       return v;
                   },
                   [&](const PlaneWave& w) { return w.amplitude * std::sin(dot(w.k, p) - w.omega * t + w.phase); },
                   [&](const Polar& q) {
                       const Vec2 d = p - q.center;
                       if (d.x == 0.0 && d.y == 0.0) throw Error("polar chi: evaluated at its center");
                       return -q.flux / (2.0 * pi) * std::atan2(d.y, d.x);
                   }},
        impl_);
}

Vec2 GaugeChi::gradient(Vec2 p, double t) const {
    return std::visit(
        overloaded{[&](const Polynomial& q) {
                       Vec2 g;
                       for (const auto& m : q.terms) {
                           const double tt = ipow(t, m.pt);
                           g.x += m.coeff * dpow(p.x, m.px, 1) * ipow(p.y, m.py) * tt;
                           g.y += m.coeff * ipow(p.x, m.px) * dpow(p.y, m.py, 1) * tt;
                       }
                       return g;
                   },
                   [&](const PlaneWave& w) {
                       const double c = w.amplitude * std::cos(dot(w.k, p) - w.omega * t + w.phase);
                       return Vec2{c * w.k.x, c * w.k.y};
                   },
                   [&](const Polar& q) {
                       const Vec2 d = p - q.center;
                       const double r2 = dot(d, d);
                       if (r2 == 0.0) throw Error("polar chi: gradient at its center");
                       const double f = q.flux / (2.0 * pi * r2);
                       return Vec2{f * d.y, -f * d.x};
                   }},
        impl_);
}

double GaugeChi::time_derivative(Vec2 p, double t) const {
    return std::visit(
        overloaded{[&](const Polynomial& q) {
                       double v = 0.0;
                       for (const auto& m : q.terms) v += m.coeff * ipow(p.x, m.px) * ipow(p.y, m.py) * dpow(t, m.pt, 1);
                       return v;
                   },
                   [&](const PlaneWave& w) {
                       return -w.omega * w.amplitude * std::cos(dot(w.k, p) - w.omega * t + w.phase);
                   },
                   [&](const Polar&) { return 0.0; }},
        impl_);
}

double GaugeChi::laplacian(Vec2 p, double t) const {
    return std::visit(
        overloaded{[&](const Polynomial& q) {
                       double v = 0.0;
                       for (const auto& m : q.terms) {
                           const double tt = ipow(t, m.pt);
                           v += m.coeff * tt * (dpow(p.x, m.px, 2) * ipow(p.y, m.py) + ipow(p.x, m.px) * dpow(p.y, m.py, 2));
                       }
                       return v;
                   },
                   [&](const PlaneWave& w) {
                       return -dot(w.k, w.k) * w.amplitude * std::sin(dot(w.k, p) - w.omega * t + w.phase);
                   },
                   [&](const Polar&) { return 0.0; }},
        impl_);
}

double GaugeChi::second_time_derivative(Vec2 p, double t) const {
    return std::visit(
        overloaded{[&](const Polynomial& q) {
                       double v = 0.0;
                       for (const auto& m : q.terms) v += m.coeff * ipow(p.x, m.px) * ipow(p.y, m.py) * dpow(t, m.pt, 2);
                       return v;
                   },
                   [&](const PlaneWave& w) {
                       return -w.omega * w.omega * w.amplitude * std::sin(dot(w.k, p) - w.omega * t + w.phase);
                   },
                   [&](const Polar&) { return 0.0; }},
        impl_);
}

Vec2 GaugeChi::center() const {
    if (const auto* q = std::get_if<Polar>(&impl_)) return q->center;
    throw Error("gauge chi: center() needs the polar kind");
}

double GaugeChi::flux() const {
    if (const auto* q = std::get_if<Polar>(&impl_)) return q->flux;
    throw Error("gauge chi: flux() needs the polar kind");
}

Vec2 GaugeChi::wave_vector() const {
    if (const auto* w = std::get_if<PlaneWave>(&impl_)) return w->k;
    throw Error("gauge chi: wave_vector() needs the plane-wave kind");
}

double GaugeChi::omega() const {
    if (const auto* w = std::get_if<PlaneWave>(&impl_)) return w->omega;
    throw Error("gauge chi: omega() needs the plane-wave kind");
}

double polar_chi_line_integral(const GaugeChi& chi, const Path& path, double min_distance) {
    if (chi.kind() != GaugeChi::Kind::polar_angle) throw Error("polar_chi_line_integral: chi is not of polar kind");
    const Vec2 c = chi.center();
    if (path.distance_to(c) < min_distance)
        throw Error("polar_chi_line_integral: path passes too close to the singular center");
    return -chi.flux() / (2.0 * pi) * unwrapped_angle(path, c);
}

double polar_chi_line_integral(const GaugeChi& chi, const Path& path, const Grid2& grid) {
    return polar_chi_line_integral(chi, path, grid.h());
}

double retarded_point_kernel(double r, double t, double width, double c) {
    if (!(r > 0.0)) throw Error("retarded_point_kernel: r must be positive");
    if (!(width > 0.0)) throw Error("retarded_point_kernel: width must be positive");
    const double sigma = width / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double s = t - r / c;
    const double g = std::exp(-0.5 * (s / sigma) * (s / sigma)) / (sigma * std::sqrt(2.0 * pi));
    return -g / (4.0 * pi * r);
}

}  // namespace gauge_lab
