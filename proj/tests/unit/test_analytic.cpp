#include "gauge_lab/analytic.hpp"
#include "gauge_lab/operators.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace gauge_lab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

SolenoidSpec solenoid(double flux, double radius = 0.0, Vec2 center = {}) {
    SolenoidSpec s;
    s.flux = flux;
    s.radius = radius;
    s.center = center;
    return s;
}

}  // namespace

TEST_CASE("thin solenoid closed form", "[analytic]") {
    const Vec2 a1 = thin_solenoid_A({1.0, 0.0}, solenoid(2 * pi));
    CHECK_THAT(a1.x, WithinAbs(0.0, 1e-15));
    CHECK_THAT(a1.y, WithinAbs(1.0, 1e-15));

    const Vec2 a2 = thin_solenoid_A({0.0, 2.0}, solenoid(4 * pi));
    CHECK_THAT(a2.x, WithinAbs(-1.0, 1e-15));
    CHECK_THAT(a2.y, WithinAbs(0.0, 1e-15));

    const Vec2 a0 = thin_solenoid_A({0.3, -0.7}, solenoid(0.0));
    CHECK(a0.x == 0.0);
    CHECK(a0.y == 0.0);

    CHECK_THROWS_AS(thin_solenoid_A({1.0, 1.0}, solenoid(1.0, 0.0, {1.0, 1.0})), Error);
}

TEST_CASE("finite solenoid closed form", "[analytic]") {
    const auto s = solenoid(2 * pi, 1.0);
    const auto out = finite_solenoid({0.0, 2.0}, s);
    CHECK_THAT(norm(out.a), WithinAbs(0.5, 1e-15));
    CHECK(out.bz == 0.0);

    const auto axis = finite_solenoid({0.0, 0.0}, s);
    CHECK(axis.a.x == 0.0);
    CHECK(axis.a.y == 0.0);
    CHECK_THAT(axis.bz, WithinAbs(2.0, 1e-15));

    const double eps = 1e-12;
    const auto in = finite_solenoid({1.0 - eps, 0.0}, s);
    const auto outside = finite_solenoid({1.0 + eps, 0.0}, s);
    CHECK_THAT(norm(in.a), WithinAbs(1.0, 1e-10));
    CHECK_THAT(norm(outside.a), WithinAbs(1.0, 1e-10));

    // exterior matches the thin form
    const Vec2 p{2.5, -1.5};
    const Vec2 thin = thin_solenoid_A(p, s);
    CHECK_THAT(finite_solenoid(p, s).a.x, WithinAbs(thin.x, 1e-15));
    CHECK_THAT(finite_solenoid(p, s).a.y, WithinAbs(thin.y, 1e-15));
}

TEST_CASE("curl of the finite solenoid potential is the core field", "[analytic][operators]") {
    const auto s = solenoid(1.7, 2.0);
    const double b_in = 1.7 / (pi * 4.0);
    auto err = [&](int n) {
        const Grid2 g = Grid2::centered(n, n, 12.0 / n);
        const auto a = sample_vector(g, [&](Vec2 p) { return finite_solenoid(p, s).a; });
        const auto bz = curl_z(a);
        double e = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double r = norm(g.point(i, j));
                if (std::abs(r - 2.0) < 0.5 || i < 2 || j < 2 || i >= n - 2 || j >= n - 2) continue;
                e = std::max(e, std::abs(bz(i, j) - (r < 2.0 ? b_in : 0.0)));
            }
        return e;
    };
    const double e1 = err(64);
    const double e2 = err(128);
    CHECK(e1 < 0.02 * b_in);
    CHECK(e1 / e2 > 3.0);
}

TEST_CASE("polar gauge function", "[analytic]") {
    const double flux = 2 * pi;
    const auto chi = GaugeChi::polar_angle(flux, {});
    REQUIRE(chi.kind() == GaugeChi::Kind::polar_angle);

    SECTION("line integrals unwrap the angle") {
        const auto circle = Path::circle({}, 1.0, 64);
        CHECK_THAT(polar_chi_line_integral(chi, circle, 0.1), WithinAbs(-2 * pi, 1e-12));
        const auto twice = Path::circle({}, 1.0, 64, -2);
        CHECK_THAT(polar_chi_line_integral(chi, twice, 0.1), WithinAbs(4 * pi, 1e-12));
        const auto quarter = Path::arc({}, 1.0, 0.0, pi / 2, 16);
        CHECK_THAT(polar_chi_line_integral(chi, quarter, 0.1), WithinAbs(-pi / 2, 1e-12));
        const auto aside = Path::circle({3.0, 0.0}, 1.0, 32);
        CHECK_THAT(polar_chi_line_integral(chi, aside, 0.1), WithinAbs(0.0, 1e-12));
    }

    SECTION("endpoint values lose the holonomy") {
        const auto circle = Path::circle({}, 1.0, 64);
        const double naive = chi.value(circle.back()) - chi.value(circle.front());
        CHECK_THAT(naive, WithinAbs(0.0, 1e-12));
    }

    SECTION("value jumps by -flux across the cut") {
        const double above = chi.value({-1.0, 1e-9});
        const double below = chi.value({-1.0, -1e-9});
        CHECK_THAT(above - below, WithinAbs(-flux, 1e-6));
    }

    SECTION("gradient cancels the thin solenoid potential") {
        const auto s = solenoid(flux);
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const double th = 0.0314 * k - pi + 0.01;
            const double r = 0.2 + 0.05 * k;
            const Vec2 p{r * std::cos(th), r * std::sin(th)};
            const Vec2 sum = chi.gradient(p) + thin_solenoid_A(p, s);
            worst = std::max(worst, norm(sum));
        }
        CHECK(worst < 1e-10);
        CHECK(chi.time_derivative({1.0, 1.0}) == 0.0);
    }

    SECTION("paths near the center are refused") {
        const auto tiny = Path::circle({}, 0.05, 16);
        CHECK_THROWS_AS(polar_chi_line_integral(chi, tiny, 0.1), Error);
        Grid2 g = Grid2::centered(16, 16, 0.1);
        CHECK_THROWS_AS(polar_chi_line_integral(chi, tiny, g), Error);
        CHECK_THROWS_AS(polar_chi_line_integral(GaugeChi::constant(1.0), tiny, 0.01), Error);
    }
}

TEST_CASE("plane-wave gauge function solves the wave equation", "[analytic]") {
    const double c = 1.5;
    const auto chi = GaugeChi::plane_wave({0.6, -0.8}, 0.3, 0.2, c);
    CHECK_THAT(chi.omega(), WithinAbs(1.5, 1e-15));
    for (Vec2 p : {Vec2{0.1, 0.2}, Vec2{-3.0, 1.0}, Vec2{2.2, -0.7}})
        for (double t : {0.0, 0.4, 3.0}) {
            const double lhs = chi.laplacian(p, t);
            const double rhs = chi.second_time_derivative(p, t) / (c * c);
            CHECK_THAT(lhs - rhs, WithinAbs(0.0, 1e-14));
        }

    // discrete check: five-point Laplacian and centred second time difference
    auto residual = [&](double h) {
        const double dt = 0.5 * h;
        double worst = 0.0;
        for (Vec2 p : {Vec2{0.1, 0.2}, Vec2{-1.3, 0.9}}) {
            const double t = 0.7;
            const double lap = (chi.value({p.x + h, p.y}, t) + chi.value({p.x - h, p.y}, t) + chi.value({p.x, p.y + h}, t) +
                                chi.value({p.x, p.y - h}, t) - 4.0 * chi.value(p, t)) / (h * h);
            const double tt = (chi.value(p, t + dt) - 2.0 * chi.value(p, t) + chi.value(p, t - dt)) / (dt * dt);
            worst = std::max(worst, std::abs(lap - tt / (c * c)));
        }
        return worst;
    };
    CHECK_THAT(residual(0.1) / residual(0.05), WithinAbs(4.0, 0.2));

    CHECK_THROWS_AS(GaugeChi::plane_wave({0.0, 0.0}, 1.0, 0.0), Error);
}

TEST_CASE("polynomial gauge function derivatives", "[analytic]") {
    // chi = 2 x^2 y - 3 t y + 0.5
    const auto chi = GaugeChi::polynomial({{2.0, 2, 1, 0}, {-3.0, 0, 1, 1}, {0.5, 0, 0, 0}});
    const Vec2 p{1.5, -0.5};
    const double t = 2.0;
    CHECK_THAT(chi.value(p, t), WithinAbs(2 * 2.25 * -0.5 + 3.0 + 0.5, 1e-14));
    CHECK_THAT(chi.gradient(p, t).x, WithinAbs(4 * 1.5 * -0.5, 1e-14));
    CHECK_THAT(chi.gradient(p, t).y, WithinAbs(2 * 2.25 - 6.0, 1e-14));
    CHECK_THAT(chi.time_derivative(p, t), WithinAbs(1.5, 1e-14));
    CHECK_THAT(chi.laplacian(p, t), WithinAbs(4 * -0.5, 1e-14));
}

TEST_CASE("smoothed retarded kernel", "[analytic]") {
    const double w = 0.05;
    // independent Gaussian with full width at half maximum w
    auto oracle = [&](double r, double t) {
        const double sigma = w / std::sqrt(8.0 * std::log(2.0));
        const double s = t - r;
        return -std::exp(-s * s / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * pi)) / (4 * pi * r);
    };
    CHECK_THAT(retarded_point_kernel(1.3, 1.31, w), WithinRel(oracle(1.3, 1.31), 1e-12));
    CHECK_THAT(retarded_point_kernel(1.0, 1.0 + w / 2, w) / retarded_point_kernel(1.0, 1.0, w), WithinAbs(0.5, 1e-12));

    const double peak1 = std::abs(retarded_point_kernel(1.0, 1.0, w));
    CHECK(std::abs(retarded_point_kernel(1.0, 0.0, w)) < 1e-12 * peak1);
    CHECK(std::abs(retarded_point_kernel(1.0, 1.0 - 5 * w, w)) < 1e-12 * peak1);
    CHECK_THAT(std::abs(retarded_point_kernel(2.0, 2.0, w)) / peak1, WithinAbs(0.5, 1e-14));

    // c scales the arrival
    CHECK_THAT(retarded_point_kernel(3.0, 1.5, w, 2.0), WithinRel(retarded_point_kernel(3.0, 3.0, w), 1e-14));

    CHECK_THROWS_AS(retarded_point_kernel(0.0, 1.0, w), Error);
    CHECK_THROWS_AS(retarded_point_kernel(1.0, 1.0, 0.0), Error);
}

TEST_CASE("switch-on ramp", "[analytic]") {
    SolenoidSpec s = solenoid(1.0, 1.0);
    s.t_on = 1.0;
    s.ramp = 2.0;
    CHECK(s.ramp_value(0.5) == 0.0);
    CHECK_THAT(s.ramp_value(2.0), WithinAbs(0.5, 1e-15));
    CHECK(s.ramp_value(3.5) == 1.0);
    s.ramp = 0.0;
    CHECK(s.ramp_value(1.0 + 1e-12) == 1.0);

    s.radius = -1.0;
    CHECK_THROWS_AS(s.validate(), Error);
}
