#pragma once

#include "gauge_lab/grid.hpp"
#include "gauge_lab/paths.hpp"
#include "gauge_lab/quadrature.hpp"

#include <complex>
#include <vector>

namespace gauge_lab {

/// Equal-amplitude two-path interferometer. kappa is the coupling q/hbar.
struct InterferometerSpec {
    double lambda_b{1.0};  // de Broglie wavelength
    double l{1.0};         // slits-to-screen distance
    double d{1.0};         // slit separation
    double kappa{1.0};

    void validate() const;
};

struct PhaseResult {
    double delta_s_over_hbar{0.0};
    std::vector<double> path_integrals;  // one per input path
    double flux_equivalent{0.0};         // integral(path1) - integral(path2)
    double loop_integral{0.0};           // closed loop path1 + reversed(path2), for cross-checking
};

/// Integral of A . dl along the path.
[[nodiscard]] double line_integral_A(const VectorSource& a, const Path& path, const QuadratureOptions& opt = {});

/// exp(i kappa integral A . dl)
[[nodiscard]] std::complex<double> dirac_phase(const InterferometerSpec& spec, const VectorSource& a, const Path& path);

/// Delta S / hbar = -kappa (int_path1 A.dl - int_path2 A.dl). The paths must
/// share their endpoints; path1 followed by reversed path2 forms the loop.
[[nodiscard]] PhaseResult loop_phase_diff(const InterferometerSpec& spec, const VectorSource& a, const Path& path1,
                                          const Path& path2);

/// exp(i kappa loop integral A . dl). kappa = 1 is the bare holonomy.
[[nodiscard]] std::complex<double> holonomy(const VectorSource& a, const Path& loop, double kappa = 1.0);

/// Integral of B_z over the region enclosed by a simple loop (node-in-polygon
/// masking times the cell area), signed by the loop orientation.
[[nodiscard]] double flux_via_stokes(const ScalarField2& bz, const Path& loop);

/// Screen displacement of the two-path fringes: -(lambda_b l / (2 pi d)) kappa flux.
[[nodiscard]] double fringe_shift(const InterferometerSpec& spec, double flux);

/// I(x) = cos^2[(2 pi x d / (lambda_b l) - delta_s) / 2], peak 1. With this sign
/// the central maximum sits at x = (lambda_b l / (2 pi d)) delta_s, which equals
/// fringe_shift() for delta_s = -kappa flux.
[[nodiscard]] std::vector<double> interference_pattern(const InterferometerSpec& spec, double delta_s,
                                                       const std::vector<double>& screen_xs);

}  // namespace gauge_lab
