#include "gauge_lab/analytic.hpp"
#include "gauge_lab/operators.hpp"
#include "gauge_lab/propagation.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace gauge_lab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

double max_interior(const ScalarField2& f, int skirt = 1) {
    return max_abs(f, NormMask(f.grid, skirt));
}

// Half-step difference quotient, an independent check on the grid gradient.
Vec2 half_step_gradient(double (*f)(Vec2), Vec2 p, double h) {
    return {(f({p.x + h / 2, p.y}) - f({p.x - h / 2, p.y})) / h, (f({p.x, p.y + h / 2}) - f({p.x, p.y - h / 2})) / h};
}

double bowl(Vec2 p) { return p.x * p.x + p.y * p.y; }

}  // namespace

TEST_CASE("gradient of simple fields", "[operators]") {
    const Grid2 g = Grid2::centered(24, 20, 0.25);
    const auto c = grad(sample_scalar(g, [](Vec2) { return 3.0; }));
    CHECK(max_abs(c, NormMask(g, 0)) == 0.0);

    const auto lin = grad(sample_scalar(g, [](Vec2 p) { return p.x; }));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            CHECK_THAT(lin.at(i, j).x, WithinAbs(1.0, 1e-12));
            CHECK_THAT(lin.at(i, j).y, WithinAbs(0.0, 1e-12));
        }

    // (1, 2) is node (12 + 4, 10 + 8) on this grid
    const Grid2 fine = Grid2::centered(24, 24, 0.25);
    const auto gb = grad(sample_scalar(fine, bowl));
    const Vec2 p = fine.point(16, 20);
    REQUIRE(p == Vec2{1.0, 2.0});
    const Vec2 oracle = half_step_gradient(bowl, p, fine.dx);
    CHECK_THAT(gb.at(16, 20).x, WithinAbs(2.0, 1e-12));
    CHECK_THAT(gb.at(16, 20).y, WithinAbs(4.0, 1e-12));
    CHECK_THAT(gb.at(16, 20).x, WithinAbs(oracle.x, 1e-12));
    CHECK_THAT(gb.at(16, 20).y, WithinAbs(oracle.y, 1e-12));
    // one-sided edges are exact for quadratics too
    CHECK_THAT(gb.at(0, 20).x, WithinAbs(2.0 * fine.x(0), 1e-11));
}

TEST_CASE("curl and divergence examples", "[operators]") {
    const Grid2 g = Grid2::centered(20, 20, 0.5);
    const auto sym = sample_vector(g, [](Vec2 p) { return Vec2{-p.y / 2, p.x / 2}; });
    const auto c1 = curl_z(sym);
    for (double v : c1.values) CHECK_THAT(v, WithinAbs(1.0, 1e-12));
    CHECK(max_abs(div(sym), NormMask(g, 0)) < 1e-12);

    const auto c2 = curl_z(sample_vector(g, [](Vec2 p) { return Vec2{0.0, p.x}; }));
    for (double v : c2.values) CHECK_THAT(v, WithinAbs(1.0, 1e-12));

    const auto d = div(sample_vector(g, [](Vec2 p) { return p; }));
    for (double v : d.values) CHECK_THAT(v, WithinAbs(2.0, 1e-12));
}

TEST_CASE("thin solenoid potential is divergence and curl free off the core", "[operators][analytic]") {
    SolenoidSpec s;
    s.flux = 1.3;
    auto err = [&](int n) {
        Grid2 g = Grid2::centered(n, n, 8.0 / n, {0.013, -0.021});
        g.excluded = Disk{{0.0, 0.0}, 1.0};
        const auto a = sample_vector(g, [&](Vec2 p) { return norm(p) < 0.5 ? Vec2{} : thin_solenoid_A(p, s); });
        NormMask m(g, 2);
        m.exclude_disk({0.0, 0.0}, 1.5);
        return std::pair{max_abs(div(a), m), max_abs(curl_z(a), m)};
    };
    const auto [d1, c1] = err(64);
    const auto [d2, c2] = err(128);
    CHECK(d1 < 0.05);
    CHECK(c1 < 0.05);
    CHECK(d1 / d2 > 3.0);
    CHECK(c1 / c2 > 3.0);
}

TEST_CASE("operators are linear", "[operators]") {
    const Grid2 g = Grid2::centered(31, 27, 0.2);
    const auto f = sample_scalar(g, [](Vec2 p) { return std::sin(p.x) * std::exp(-p.y * p.y); });
    const auto h = sample_scalar(g, [](Vec2 p) { return p.x * p.y * p.y - std::cos(3 * p.y); });
    const double a = 1.7, b = -0.45;
    ScalarField2 mix(g);
    for (std::size_t k = 0; k < g.size(); ++k) mix.values[k] = a * f.values[k] + b * h.values[k];

    const auto gf = grad(f), gh = grad(h), gm = grad(mix);
    const auto u = VectorField2{gf};
    const auto v = VectorField2{gh};
    VectorField2 vmix(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK_THAT(gm.x[k], WithinAbs(a * gf.x[k] + b * gh.x[k], 1e-12));
        CHECK_THAT(gm.y[k], WithinAbs(a * gf.y[k] + b * gh.y[k], 1e-12));
        vmix.x[k] = a * u.x[k] + b * v.y[k];
        vmix.y[k] = a * u.y[k] + b * v.x[k];
    }
    VectorField2 swapped(g);
    swapped.x = v.y;
    swapped.y = v.x;
    const auto du = div(u), ds = div(swapped), dm = div(vmix);
    const auto cu = curl_z(u), cs = curl_z(swapped), cm = curl_z(vmix);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK_THAT(dm.values[k], WithinAbs(a * du.values[k] + b * ds.values[k], 1e-10));
        CHECK_THAT(cm.values[k], WithinAbs(a * cu.values[k] + b * cs.values[k], 1e-10));
    }
}

TEST_CASE("curl of a gradient vanishes", "[operators]") {
    auto gaussian = [](Vec2 p) { return std::exp(-(p.x - 0.3) * (p.x - 0.3) - 2.0 * p.y * p.y); };
    auto poly = [](Vec2 p) { return p.x * p.x * p.y - 3.0 * p.y * p.y * p.y + p.x; };
    for (int n : {32, 64}) {
        const Grid2 g = Grid2::centered(n, n, 8.0 / n);
        CHECK(max_interior(curl_z(grad(sample_scalar(g, gaussian)))) < 1e-12);
        CHECK(max_interior(curl_z(grad(sample_scalar(g, poly)))) < 1e-10);
    }
}

TEST_CASE("div and curl converge at second order", "[operators]") {
    auto field = [](Vec2 p) { return Vec2{std::sin(1.3 * p.x) * std::cos(0.7 * p.y), std::cos(0.8 * p.x) * std::sin(1.7 * p.y)}; };
    auto div_exact = [](Vec2 p) { return 1.3 * std::cos(1.3 * p.x) * std::cos(0.7 * p.y) + 1.7 * std::cos(0.8 * p.x) * std::cos(1.7 * p.y); };
    auto curl_exact = [](Vec2 p) { return -0.8 * std::sin(0.8 * p.x) * std::sin(1.7 * p.y) + 0.7 * std::sin(1.3 * p.x) * std::sin(0.7 * p.y); };
    auto errors = [&](int n) {
        const Grid2 g = Grid2::centered(n + 1, n + 1, 6.0 / n);
        const auto v = sample_vector(g, field);
        const auto d = div(v);
        const auto c = curl_z(v);
        double ed = 0.0, ec = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                ed = std::max(ed, std::abs(d(i, j) - div_exact(g.point(i, j))));
                ec = std::max(ec, std::abs(c(i, j) - curl_exact(g.point(i, j))));
            }
        return std::pair{ed, ec};
    };
    auto [d1, c1] = errors(32);
    auto [d2, c2] = errors(64);
    auto [d3, c3] = errors(128);
    for (double r : {d1 / d2, d2 / d3, c1 / c2, c2 / c3}) {
        CHECK(r > 3.0);
        CHECK(r < 5.0);
    }
}

TEST_CASE("derive_fields examples", "[operators]") {
    const Grid2 g = Grid2::centered(16, 16, 0.5);
    const auto a = sample_vector(g, [](Vec2 p) { return Vec2{-0.35 * p.y, 0.35 * p.x}; });

    const auto st = derive_fields(PotentialState::static_from(a));
    CHECK(max_abs(st.e, NormMask(g, 0)) == 0.0);
    for (double v : st.bz.values) CHECK_THAT(v, WithinAbs(0.7, 1e-12));

    PotentialState lin = PotentialState::zero(g);
    lin.is_static = true;
    lin.phi = sample_scalar(g, [](Vec2 p) { return -2.5 * p.x; });
    const auto ef = derive_fields(lin);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK_THAT(ef.e.x[k], WithinAbs(2.5, 1e-12));
        CHECK_THAT(ef.e.y[k], WithinAbs(0.0, 1e-12));
    }

    PotentialState moving = PotentialState::zero(g, 1.0);
    moving.a = sample_vector(g, [](Vec2) { return Vec2{1.0, 0.0}; }, 1.0);
    moving.a_prev = VectorField2(g, 0.75);
    moving.phi_prev = ScalarField2(g, 0.75);
    const auto em = derive_fields(moving);
    CHECK_THAT(em.e.time, WithinAbs(0.875, 1e-15));
    for (double v : em.e.x) CHECK_THAT(v, WithinAbs(-4.0, 1e-12));

    PotentialState broken = PotentialState::zero(g);
    broken.is_static = false;
    CHECK_THROWS_AS(derive_fields(broken), Error);
}

TEST_CASE("vacuum residuals of a plane wave", "[operators]") {
    CHECK_THROWS_AS(maxwell_residuals({}), Error);

    auto residual = [](int n) {
        const double len = 2.0 * pi;
        const double h = len / n;
        const double dt = 0.5 * h;
        const Grid2 g = Grid2::centered(n + 1, 9, h);
        std::vector<FieldFrame> series;
        for (int s = 0; s < 5; ++s) {
            const double t = s * dt;
            FieldFrame f;
            f.e = sample_vector(g, [&](Vec2 p) { return Vec2{0.0, std::cos(p.x - t)}; }, t);
            f.bz = sample_scalar(g, [&](Vec2 p) { return std::cos(p.x - t); }, t);
            series.push_back(std::move(f));
        }
        return maxwell_residuals(series, 1.0);
    };
    const auto r1 = residual(32);
    const auto r2 = residual(64);
    CHECK(r1.gauss < 1e-12);
    CHECK(r1.gauss_magnetic == 0.0);
    CHECK(r1.faraday < 0.02);
    CHECK(r1.ampere < 0.02);
    CHECK_THAT(r1.faraday / r2.faraday, WithinAbs(4.0, 0.5));
    CHECK_THAT(r1.ampere / r2.ampere, WithinAbs(4.0, 0.5));

    const Grid2 g = Grid2::centered(12, 12, 1.0);
    std::vector<FieldFrame> zero(3, FieldFrame{VectorField2(g), ScalarField2(g)});
    for (int s = 0; s < 3; ++s) zero[s].e.time = zero[s].bz.time = s;
    const auto rz = maxwell_residuals(zero);
    CHECK(rz.gauss == 0.0);
    CHECK(rz.faraday == 0.0);
    CHECK(rz.ampere == 0.0);

    zero[2].e.time = zero[2].bz.time = 3.0;
    CHECK_THROWS_AS(maxwell_residuals(zero), Error);
}

TEST_CASE("field energy of a free pulse is conserved", "[operators][propagation]") {
    FdtdConfig cfg;
    cfg.grid = Grid2::centered(128, 128, 1.0);
    cfg.dt = 0.35;
    const FdtdStepper stepper(cfg);

    // divergence-free pulse: A = curl of a Gaussian, released at rest
    const double w = 4.0;
    auto pulse = [&](Vec2 p) {
        const double e = std::exp(-(p.x * p.x + p.y * p.y) / (w * w));
        return Vec2{-2.0 * p.y / (w * w) * e, 2.0 * p.x / (w * w) * e};
    };
    PotentialState init = PotentialState::zero(cfg.grid, 0.0);
    init.is_static = false;
    init.a = sample_vector(cfg.grid, pulse, 0.0);
    init.a_prev = sample_vector(cfg.grid, pulse, -cfg.dt);
    init.phi_prev = ScalarField2(cfg.grid, -cfg.dt);
    FdtdState s = stepper.make_state(init);

    const NormMask mask(cfg.grid, 2);
    std::vector<double> energy;
    // from the time the released pulse has left its starting region until the front nears the edge
    for (int n = 0; n <= 140; ++n) {
        if (n * cfg.dt >= 3.0 * w) energy.push_back(field_energy(derive_fields(s.potentials), 1.0, mask));
        stepper.advance(s);
    }
    const double e0 = energy.front();
    REQUIRE(e0 > 0.0);
    double worst = 0.0;
    for (double e : energy) worst = std::max(worst, std::abs(e - e0) / e0);
    CHECK(worst < 0.01);
    CHECK(max_abs(s.potentials.phi, mask) == 0.0);
}
