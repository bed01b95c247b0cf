#pragma once

#include "gauge_lab/grid.hpp"
#include "gauge_lab/paths.hpp"

#include <functional>

namespace gauge_lab {

using AnalyticVector = std::function<Vec2(Vec2)>;

/// A vector potential given either in closed form or sampled on a grid
/// (bilinear interpolation between nodes).
class VectorSource {
public:
    VectorSource(AnalyticVector f) : analytic_(std::move(f)) {}  // NOLINT: implicit by intent
    VectorSource(const VectorField2& field) : field_(&field) {}  // NOLINT: implicit by intent

    [[nodiscard]] bool is_grid() const { return field_ != nullptr; }
    [[nodiscard]] Vec2 operator()(Vec2 p) const;
    [[nodiscard]] const VectorField2& field() const { return *field_; }

private:
    AnalyticVector analytic_;
    const VectorField2* field_{nullptr};
};

/// Bilinear interpolation; throws outside the grid.
[[nodiscard]] Vec2 bilinear(const VectorField2& v, Vec2 p);
[[nodiscard]] double bilinear(const ScalarField2& f, Vec2 p);

struct QuadratureOptions {
    double rel_tol{1e-8};
    int max_depth{40};
};

/// Integral of v . dl along one straight segment with 8-point Gauss-Legendre,
/// bisected adaptively until successive refinements agree to `rel_tol`.
/// Throws if the refinement does not converge (path grazes a singularity).
[[nodiscard]] double segment_integral(const AnalyticVector& v, Vec2 a, Vec2 b, const QuadratureOptions& opt = {});

/// Integral of v . dl over a polyline. Grid sources are split at cell
/// boundaries, where the bilinear integrand is a quadratic polynomial and
/// Gauss-Legendre is exact.
[[nodiscard]] double path_integral(const VectorSource& v, const Path& path, const QuadratureOptions& opt = {});

}  // namespace gauge_lab
