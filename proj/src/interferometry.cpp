#include "gauge_lab/interferometry.hpp"

#include <cmath>
#include <numbers>

namespace gauge_lab {

using std::numbers::pi;

void InterferometerSpec::validate() const {
    if (!(lambda_b > 0.0) || !(l > 0.0) || !(d > 0.0))
        throw Error("interferometer: lambda_b, l and d must be positive");
    if (!std::isfinite(kappa)) throw Error("interferometer: kappa must be finite");
}

double line_integral_A(const VectorSource& a, const Path& path, const QuadratureOptions& opt) {
    return path_integral(a, path, opt);
}

std::complex<double> dirac_phase(const InterferometerSpec& spec, const VectorSource& a, const Path& path) {
    spec.validate();
    return std::polar(1.0, spec.kappa * line_integral_A(a, path));
}

PhaseResult loop_phase_diff(const InterferometerSpec& spec, const VectorSource& a, const Path& path1,
                            const Path& path2) {
    spec.validate();
    if (!coincident(path1.front(), path2.front()) || !coincident(path1.back(), path2.back()))
        throw Error("loop_phase_diff: paths must share source and screen endpoints");
    PhaseResult r;
    const double i1 = line_integral_A(a, path1);
    const double i2 = line_integral_A(a, path2);
    r.path_integrals = {i1, i2};
    r.flux_equivalent = i1 - i2;
    r.delta_s_over_hbar = -spec.kappa * r.flux_equivalent;
    r.loop_integral = line_integral_A(a, path1.then(path2.reversed()));
    return r;
}

std::complex<double> holonomy(const VectorSource& a, const Path& loop, double kappa) {
    if (!loop.closed()) throw Error("holonomy needs a closed loop");
    return std::polar(1.0, kappa * line_integral_A(a, loop));
}

double flux_via_stokes(const ScalarField2& bz, const Path& loop) {
    if (!loop.closed()) throw Error("flux_via_stokes needs a closed loop");
    if (!loop.is_simple()) throw Error("flux_via_stokes: loop is self-intersecting");
    const Grid2& g = bz.grid;
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (point_in_polygon(loop, g.point(i, j))) sum += bz(i, j);
    const double sign = loop.signed_area() >= 0.0 ? 1.0 : -1.0;
    return sign * sum * g.dx * g.dy;
}

double fringe_shift(const InterferometerSpec& spec, double flux) {
    spec.validate();
    return -(spec.lambda_b * spec.l / (2.0 * pi * spec.d)) * spec.kappa * flux;
}

std::vector<double> interference_pattern(const InterferometerSpec& spec, double delta_s,
                                         const std::vector<double>& screen_xs) {
    spec.validate();
    std::vector<double> out;
    out.reserve(screen_xs.size());
    for (double x : screen_xs) {
        const double c = std::cos(0.5 * (2.0 * pi * x * spec.d / (spec.lambda_b * spec.l) - delta_s));
        out.push_back(c * c);
    }
    return out;
}

}  // namespace gauge_lab
