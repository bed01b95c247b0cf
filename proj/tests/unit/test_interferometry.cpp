#include "gauge_lab/analytic.hpp"
#include "gauge_lab/interferometry.hpp"
#include "gauge_lab/operators.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace gauge_lab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

AnalyticVector thin_a(double flux, Vec2 center = {}) {
    SolenoidSpec s;
    s.flux = flux;
    s.center = center;
    return [s](Vec2 p) { return thin_solenoid_A(p, s); };
}

InterferometerSpec unit_spec(double kappa = 1.0) {
    InterferometerSpec spec;
    spec.kappa = kappa;
    return spec;
}

// Independent winding count: sum of principal-value angle increments.
int count_turns(const std::vector<Vec2>& v, Vec2 c) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const Vec2 a = v[k] - c, b = v[k + 1] - c;
        total += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
    }
    return static_cast<int>(std::lround(total / (2 * pi)));
}

}  // namespace

TEST_CASE("loop integrals of the thin solenoid", "[interferometry]") {
    const auto a = thin_a(1.0);
    CHECK_THAT(line_integral_A(a, Path::circle({}, 1.0, 64)), WithinAbs(1.0, 1e-10));
    CHECK_THAT(line_integral_A(a, Path::circle({}, 1.0, 64, 2)), WithinAbs(2.0, 1e-10));
    CHECK_THAT(line_integral_A(a, Path::circle({3.0, 0.5}, 1.0, 64)), WithinAbs(0.0, 1e-8));

    // a loop that passes close to the axis still integrates correctly
    CHECK_THAT(line_integral_A(a, Path::loop({{0.01, -1.0}, {0.01, 1.0}, {-1.0, 0.0}, {0.01, -1.0}})),
               WithinAbs(1.0, 1e-8));

    // straight pass just above the axis: -(1/pi) atan(1/y)
    for (double y : {1e-3, 1e-6, 1e-9})
        CHECK_THAT(line_integral_A(a, Path::open({{-1.0, y}, {1.0, y}})), WithinAbs(-std::atan(1.0 / y) / pi, 1e-8));
    CHECK_THROWS_AS(line_integral_A(a, Path::open({{-1.0, 1e-15}, {1.0, 1e-15}})), Error);
}

TEST_CASE("random polyline loops pick up winding times flux", "[interferometry]") {
    const double flux = 0.83;
    const auto a = thin_a(flux, {0.1, -0.2});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> radius(0.5, 3.0);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::uniform_int_distribution<int> windings(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = windings(rng);
        const int n = 7 + trial % 5;
        std::vector<Vec2> v;
        const int turns = w == 0 ? 1 : std::abs(w);
        const Vec2 c = w == 0 ? Vec2{5.0, 4.0} : Vec2{0.1, -0.2};
        const double dir = w < 0 ? -1.0 : 1.0;
        for (int k = 0; k < n * turns; ++k) {
            const double th = dir * 2 * pi * (k + jitter(rng)) / n;
            const double r = radius(rng);
            v.push_back(c + Vec2{r * std::cos(th), r * std::sin(th)});
        }
        v.push_back(v.front());
        const Path loop = Path::loop(v);
        REQUIRE(count_turns(v, {0.1, -0.2}) == w);
        CHECK(winding_number(loop, {0.1, -0.2}) == w);
        const double value = line_integral_A(a, loop);
        if (w == 0)
            CHECK(std::abs(value) < 1e-6 * flux);
        else
            CHECK_THAT(value, WithinRel(w * flux, 1e-6));
    }
}

TEST_CASE("winding numbers", "[interferometry]") {
    const auto circle = Path::circle({}, 1.0, 40);
    CHECK(winding_number(circle, {}) == 1);
    CHECK(winding_number(circle.reversed(), {}) == -1);
    CHECK(winding_number(Path::loop({{3, 3}, {4, 3}, {4, 4}, {3, 4}, {3, 3}}), {}) == 0);
    CHECK(winding_number(Path::circle({}, 1.0, 40, -3), {}) == -3);
}

TEST_CASE("integral depends only on endpoints within a winding class", "[interferometry]") {
    const auto a = thin_a(1.3);
    const Path straight = Path::open({{2.0, -1.0}, {2.0, 1.0}});
    const Path bent = Path::open({{2.0, -1.0}, {3.5, -0.5}, {4.0, 2.0}, {2.0, 1.0}});
    CHECK_THAT(line_integral_A(a, bent), WithinAbs(line_integral_A(a, straight), 1e-6));
    // going around the other side changes the class by one turn
    const Path around = Path::open({{2.0, -1.0}, {-2.0, -2.0}, {-2.0, 2.0}, {2.0, 1.0}});
    CHECK_THAT(line_integral_A(a, straight) - line_integral_A(a, around), WithinAbs(1.3, 1e-6));
}

TEST_CASE("Dirac phase and holonomy", "[interferometry]") {
    const Path loop = Path::circle({}, 1.0, 64);
    const auto spec = unit_spec();
    CHECK(std::abs(dirac_phase(spec, thin_a(0.0), loop) - 1.0) < 1e-15);
    CHECK(std::abs(dirac_phase(spec, thin_a(2 * pi), loop) - 1.0) < 1e-9);
    CHECK(std::abs(dirac_phase(spec, thin_a(pi), loop) + 1.0) < 1e-9);
    CHECK(std::abs(dirac_phase(unit_spec(0.5), thin_a(2 * pi), loop) + 1.0) < 1e-9);

    CHECK(std::abs(holonomy(AnalyticVector([](Vec2) { return Vec2{}; }), loop) - 1.0) < 1e-15);
    CHECK(std::abs(holonomy(thin_a(pi), loop) + 1.0) < 1e-9);
    CHECK(std::abs(holonomy(thin_a(1.0), loop, pi) + 1.0) < 1e-9);
}

TEST_CASE("loop phase difference", "[interferometry]") {
    const auto a = thin_a(2 * pi);
    const auto spec = unit_spec();
    const Path lower = Path::arc({}, 1.0, pi, 2 * pi, 64);
    const Path upper = Path::arc({}, 1.0, pi, 0.0, 64);

    const auto same = loop_phase_diff(spec, a, lower, lower);
    CHECK(same.delta_s_over_hbar == 0.0);

    const auto r = loop_phase_diff(spec, a, lower, upper);
    CHECK_THAT(r.delta_s_over_hbar, WithinAbs(-2 * pi, 1e-6));
    CHECK_THAT(r.loop_integral, WithinAbs(2 * pi, 1e-6));
    CHECK_THAT(r.flux_equivalent, WithinAbs(2 * pi, 1e-6));
    REQUIRE(r.path_integrals.size() == 2);
    CHECK_THAT(r.path_integrals[0], WithinAbs(pi, 1e-6));
    CHECK_THAT(r.path_integrals[1], WithinAbs(-pi, 1e-6));

    const Path p1 = Path::open({{2.0, -1.0}, {3.0, 0.0}, {2.0, 1.0}});
    const Path p2 = Path::open({{2.0, -1.0}, {2.5, 0.0}, {2.0, 1.0}});
    CHECK_THAT(loop_phase_diff(spec, a, p1, p2).delta_s_over_hbar, WithinAbs(0.0, 1e-6));

    CHECK_THROWS_AS(loop_phase_diff(spec, a, p1, Path::open({{2.0, -1.0}, {2.0, 1.1}})), Error);
}

TEST_CASE("flux through a loop from the field", "[interferometry]") {
    SolenoidSpec s;
    s.flux = 1.0;
    s.radius = 1.0;
    auto stokes = [&](int n, double loop_r) {
        const Grid2 g = Grid2::centered(n, n, 6.0 / n);
        const auto bz = sample_scalar(g, [&](Vec2 p) { return finite_solenoid(p, s).bz; });
        return flux_via_stokes(bz, Path::circle({}, loop_r, 256));
    };
    const double e1 = std::abs(stokes(128, 2.0) - 1.0);
    const double e2 = std::abs(stokes(256, 2.0) - 1.0);
    CHECK(e1 < 0.05);
    CHECK(e2 < e1);
    CHECK_THAT(stokes(256, 0.5), WithinAbs(0.25, 0.05));

    const Grid2 g = Grid2::centered(128, 128, 6.0 / 128);
    const auto bz = sample_scalar(g, [&](Vec2 p) { return finite_solenoid(p, s).bz; });
    CHECK(flux_via_stokes(bz, Path::circle({2.0, 1.5}, 0.5, 64)) == 0.0);
    CHECK_THAT(flux_via_stokes(bz, Path::circle({}, 2.0, 256).reversed()), WithinAbs(-1.0, 0.05));

    const Path bow = Path::loop({{-2, -2}, {2, 2}, {2, -2}, {-2, 2}, {-2, -2}});
    CHECK_THROWS_AS(flux_via_stokes(bz, bow), Error);
}

TEST_CASE("Stokes flux matches the grid loop integral", "[interferometry]") {
    SolenoidSpec s;
    s.flux = 1.0;
    s.radius = 1.0;
    const Grid2 g = Grid2::centered(192, 192, 6.0 / 192);
    const auto a = sample_vector(g, [&](Vec2 p) { return finite_solenoid(p, s).a; });
    const auto loop = Path::circle({}, 2.0, 256);
    const double line = line_integral_A(VectorSource(a), loop);
    const double surface = flux_via_stokes(curl_z(a), loop);
    CHECK_THAT(line, WithinAbs(1.0, 1e-3));
    CHECK_THAT(surface, WithinRel(line, 0.01));
}

TEST_CASE("fringe shift and intensity pattern", "[interferometry]") {
    InterferometerSpec spec;
    CHECK_THAT(fringe_shift(spec, 2 * pi), WithinAbs(-1.0, 1e-15));
    CHECK(fringe_shift(spec, 0.0) == 0.0);
    spec.lambda_b = 0.5;
    spec.l = 3.0;
    spec.d = 0.7;
    spec.kappa = 1.2;
    CHECK_THAT(fringe_shift(spec, 2.0), WithinAbs(2.0 * fringe_shift(spec, 1.0), 1e-15));
    CHECK_THAT(fringe_shift(spec, 1.0), WithinAbs(-(0.5 * 3.0 / (2 * pi * 0.7)) * 1.2, 1e-15));

    std::vector<double> xs;
    const double dx = 0.001;
    for (int k = -1000; k <= 1000; ++k) xs.push_back(k * dx);
    auto argmax = [&](const std::vector<double>& v) { return xs[std::max_element(v.begin(), v.end()) - v.begin()]; };
    auto argmin = [&](const std::vector<double>& v) { return xs[std::min_element(v.begin(), v.end()) - v.begin()]; };

    const auto base = interference_pattern(spec, 0.0, xs);
    CHECK(argmax(base) == 0.0);
    CHECK_THAT(*std::max_element(base.begin(), base.end()), WithinAbs(1.0, 1e-15));
    const auto flipped = interference_pattern(spec, pi, xs);
    CHECK(std::abs(argmin(flipped)) < dx / 2);

    for (double flux : {-0.6, -0.3, 0.0, 0.3, 0.6}) {
        const double ds = -spec.kappa * flux;
        const auto pattern = interference_pattern(spec, ds, xs);
        CHECK(std::abs(argmax(pattern) - fringe_shift(spec, flux)) <= dx);
        const auto shifted = interference_pattern(spec, ds + 2 * pi, xs);
        for (std::size_t k = 0; k < xs.size(); ++k) CHECK_THAT(shifted[k], WithinAbs(pattern[k], 1e-14));
    }

    spec.d = 0.0;
    CHECK_THROWS_AS(spec.validate(), Error);
}
