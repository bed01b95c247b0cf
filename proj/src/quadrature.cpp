#include "gauge_lab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace gauge_lab {

namespace {

// Gauss-Legendre order 8 on [-1, 1].
constexpr std::array<double, 8> kNodes = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975362};
constexpr std::array<double, 8> kWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct Rule {
    double value;
    double scale;  // sum of |w| |v.dl|, guards the relative test near zero
};

template <class F>
Rule gauss8(const F& v, Vec2 a, Vec2 b) {
    const Vec2 mid = 0.5 * (a + b);
    const Vec2 half = 0.5 * (b - a);
    Rule r{0.0, 0.0};
    for (std::size_t k = 0; k < kNodes.size(); ++k) {
        const double f = dot(v(mid + kNodes[k] * half), half);
        r.value += kWeights[k] * f;
        r.scale += kWeights[k] * std::abs(f);
    }
    return r;
}

double adapt(const AnalyticVector& v, Vec2 a, Vec2 b, const Rule& whole, int depth, const QuadratureOptions& opt) {
    const Vec2 m = 0.5 * (a + b);
    const Rule left = gauss8(v, a, m);
    const Rule right = gauss8(v, m, b);
    const double refined = left.value + right.value;
    const double scale = std::max({std::abs(refined), left.scale + right.scale, 1e-300});
    if (std::abs(refined - whole.value) <= opt.rel_tol * scale) return refined;
    if (depth >= opt.max_depth) throw Error("line integral: adaptive refinement did not converge (path grazes a singularity?)");
    return adapt(v, a, m, left, depth + 1, opt) + adapt(v, m, b, right, depth + 1, opt);
}

}  // namespace

Vec2 VectorSource::operator()(Vec2 p) const { return field_ ? bilinear(*field_, p) : analytic_(p); }

namespace {

struct Cell {
    int i, j;
    double fx, fy;
};

Cell locate(const Grid2& g, Vec2 p) {
    const double u = (p.x - g.x0) / g.dx;
    const double w = (p.y - g.y0) / g.dy;
    const double eps = 1e-9;
    if (u < -eps || w < -eps || u > g.nx - 1 + eps || w > g.ny - 1 + eps)
        throw Error("bilinear interpolation outside the grid");
    const int i = std::clamp(static_cast<int>(std::floor(u)), 0, g.nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor(w)), 0, g.ny - 2);
    return {i, j, u - i, w - j};
}

}  // namespace

Vec2 bilinear(const VectorField2& v, Vec2 p) {
    const auto c = locate(v.grid, p);
    const Vec2 a = v.at(c.i, c.j), b = v.at(c.i + 1, c.j), d = v.at(c.i, c.j + 1), e = v.at(c.i + 1, c.j + 1);
    return (1 - c.fy) * ((1 - c.fx) * a + c.fx * b) + c.fy * ((1 - c.fx) * d + c.fx * e);
}

double bilinear(const ScalarField2& f, Vec2 p) {
    const auto c = locate(f.grid, p);
    return (1 - c.fy) * ((1 - c.fx) * f(c.i, c.j) + c.fx * f(c.i + 1, c.j)) +
           c.fy * ((1 - c.fx) * f(c.i, c.j + 1) + c.fx * f(c.i + 1, c.j + 1));
}

double segment_integral(const AnalyticVector& v, Vec2 a, Vec2 b, const QuadratureOptions& opt) {
    if (a == b) return 0.0;
    return adapt(v, a, b, gauss8(v, a, b), 0, opt);
}

double path_integral(const VectorSource& v, const Path& path, const QuadratureOptions& opt) {
    const auto& pts = path.vertices();
    double total = 0.0;
    if (!v.is_grid()) {
        const AnalyticVector f = [&v](Vec2 p) { return v(p); };
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) total += segment_integral(f, pts[k], pts[k + 1], opt);
        return total;
    }
    const Grid2& g = v.field().grid;
    const auto& field = v.field();
    auto integrand = [&field](Vec2 p) { return bilinear(field, p); };
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const Vec2 a = pts[k], b = pts[k + 1];
        // parameters where the segment crosses grid lines
        std::vector<double> cuts = {0.0, 1.0};
        auto add_crossings = [&](double pa, double pb, double origin, double step) {
            if (pa == pb) return;
            const double lo = std::min(pa, pb), hi = std::max(pa, pb);
            for (double n = std::ceil((lo - origin) / step); origin + n * step < hi; n += 1.0) {
                const double s = (origin + n * step - pa) / (pb - pa);
                if (s > 0.0 && s < 1.0) cuts.push_back(s);
            }
        };
        add_crossings(a.x, b.x, g.x0, g.dx);
        add_crossings(a.y, b.y, g.y0, g.dy);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            if (cuts[c + 1] - cuts[c] <= 0.0) continue;
            total += gauss8(integrand, a + cuts[c] * (b - a), a + cuts[c + 1] * (b - a)).value;
        }
    }
    return total;
}

}  // namespace gauge_lab
