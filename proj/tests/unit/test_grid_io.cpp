#include "gauge_lab/field_io.hpp"
#include "gauge_lab/grid.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace gauge_lab;
using Catch::Matchers::WithinAbs;

TEST_CASE("grid rejects degenerate shapes", "[grid]") {
    Grid2 g = Grid2::centered(16, 16, 0.5);
    REQUIRE_NOTHROW(g.validate());

    Grid2 small = g;
    small.nx = 7;
    CHECK_THROWS_AS(small.validate(), Error);

    Grid2 flat = g;
    flat.dy = 0.0;
    CHECK_THROWS_AS(flat.validate(), Error);

    Grid2 outside = g;
    outside.excluded = Disk{{3.5, 0.0}, 1.0};
    CHECK_THROWS_AS(outside.validate(), Error);

    Grid2 inside = g;
    inside.excluded = Disk{{0.0, 0.0}, 1.0};
    CHECK_NOTHROW(inside.validate());
}

TEST_CASE("centered grid puts the middle node on the center", "[grid]") {
    const Grid2 g = Grid2::centered(33, 17, 0.25, {1.0, -2.0});
    CHECK_THAT(g.x(16), WithinAbs(1.0, 1e-15));
    CHECK_THAT(g.y(8), WithinAbs(-2.0, 1e-15));
    CHECK(g.index(3, 2) == 2u * 33u + 3u);
    CHECK(g.size() == 33u * 17u);
}

TEST_CASE("norm mask drops the skirt, the excluded disk and the outer layer", "[grid]") {
    Grid2 g = Grid2::centered(20, 20, 1.0);
    const NormMask plain(g, 2);
    CHECK(plain.count() == 16u * 16u);
    const NormMask layered(g, 2, 4);
    CHECK(layered.count() == 12u * 12u);
    CHECK_FALSE(layered(3, 10));

    g.excluded = Disk{{0.0, 0.0}, 1.5};
    const NormMask holed(g, 2);
    CHECK_FALSE(holed(10, 10));
    CHECK(holed(15, 10));

    ScalarField2 f(g);
    f(10, 10) = 100.0;
    f(15, 10) = -3.0;
    CHECK(max_abs(f, holed) == 3.0);
}

TEST_CASE("potential state checks its levels", "[grid]") {
    const Grid2 g = Grid2::centered(12, 12, 1.0);
    PotentialState s = PotentialState::zero(g, 1.0);
    CHECK_NOTHROW(s.validate());
    CHECK_THROWS_AS(s.dt(), Error);

    s.is_static = false;
    s.a_prev = VectorField2(g, 0.75);
    s.phi_prev = ScalarField2(g, 0.75);
    CHECK_NOTHROW(s.validate());
    CHECK_THAT(s.dt(), WithinAbs(0.25, 1e-15));

    s.a_prev->time = 1.5;
    s.phi_prev->time = 1.5;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("field CSV round trip", "[io]") {
    Grid2 g = Grid2::centered(9, 11, 0.3, {0.5, 0.25});
    const auto f = sample_scalar(g, [](Vec2 p) { return std::sin(p.x) * std::exp(p.y) / 3.0; }, 2.5);
    const auto v = sample_vector(g, [](Vec2 p) { return Vec2{p.x * p.y, -1.0 / 7.0 + p.x}; }, 2.5);

    std::stringstream ss;
    write_csv(ss, f, 4);
    const std::string text = ss.str();
    CHECK(text.rfind("# grid 9 11 ", 0) == 0);
    CHECK(text.find("frame 4") != std::string::npos);

    std::istringstream in(text);
    const auto back = read_scalar_csv(in);
    REQUIRE(back.grid.same_lattice(g));
    CHECK(back.time == 2.5);
    for (std::size_t k = 0; k < f.values.size(); ++k)
        CHECK_THAT(back.values[k], WithinAbs(f.values[k], 1e-11 * (1.0 + std::abs(f.values[k]))));

    std::stringstream vs;
    write_csv(vs, v);
    const auto vb = read_vector_csv(vs);
    for (std::size_t k = 0; k < v.x.size(); ++k) {
        CHECK_THAT(vb.x[k], WithinAbs(v.x[k], 1e-11));
        CHECK_THAT(vb.y[k], WithinAbs(v.y[k], 1e-11));
    }
}

TEST_CASE("field CSV rejects malformed input", "[io]") {
    std::istringstream bad_header("grid 2 2 1 1 0 0 0\n");
    CHECK_THROWS_AS(read_scalar_csv(bad_header), Error);

    std::istringstream short_rows("# grid 8 8 1 1 0 0 0\n0,0,0,0,1\n");
    CHECK_THROWS_AS(read_scalar_csv(short_rows), Error);

    std::istringstream wrong_cols("# grid 8 8 1 1 0 0 0\n0,0,0,0,1,2\n");
    CHECK_THROWS_AS(read_scalar_csv(wrong_cols), Error);
}

TEST_CASE("heatmap export downsamples", "[io]") {
    const Grid2 g = Grid2::centered(16, 16, 1.0);
    const auto f = sample_scalar(g, [](Vec2 p) { return p.x + 2.0 * p.y; });
    std::stringstream ss;
    write_heatmap_csv(ss, f, 4);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "x,y,value");
    int rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 16);
}
