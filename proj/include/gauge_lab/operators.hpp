#pragma once

#include "gauge_lab/grid.hpp"
#include "gauge_lab/kernels.hpp"

#include <vector>

namespace gauge_lab {

[[nodiscard]] Lattice lattice_of(const Grid2& g);

/// Central differences inside, second-order one-sided differences on the edges.
[[nodiscard]] VectorField2 grad(const ScalarField2& f);
[[nodiscard]] ScalarField2 div(const VectorField2& v);
/// z-component of the curl of an in-plane field: d_x v_y - d_y v_x.
[[nodiscard]] ScalarField2 curl_z(const VectorField2& v);
/// Zero on nodes closer than the stencil radius to the edge.
[[nodiscard]] ScalarField2 laplacian(const ScalarField2& f, LaplacianStencil stencil = LaplacianStencil::five_point);

/// In-plane E and B_z derived from a potential state.
struct FieldFrame {
    VectorField2 e;
    ScalarField2 bz;
};

/// E = -grad(phi) - dA/dt and B_z = curl_z(A).
///
/// dA/dt is the backward difference over the state's two levels, so E is
/// centred half a step before the current level; phi is averaged over both
/// levels to match and E.time is set to that midpoint. A static state gives
/// dA/dt = 0 and E.time = state time. A non-static state without a previous
/// level throws.
[[nodiscard]] FieldFrame derive_fields(const PotentialState& s);

/// Max-norm residuals of the vacuum Maxwell equations in the 2D (E_x, E_y, B_z) reduction.
struct MaxwellResiduals {
    double gauss{0.0};            // div E
    double faraday{0.0};          // dB_z/dt + curl_z E
    double gauss_magnetic{0.0};   // div B: identically zero for B = B_z z-hat
    double ampere{0.0};           // dE/dt - c^2 (d_y B_z, -d_x B_z)
};

/// Residuals over interior time levels of a uniformly spaced series (>= 3 frames).
/// E and B may share time stamps or E may lag B by half a step (as produced by
/// derive_fields); in the latter case E is averaged onto the B stamps.
[[nodiscard]] MaxwellResiduals maxwell_residuals(const std::vector<FieldFrame>& series, double c,
                                                 const NormMask& mask);
[[nodiscard]] MaxwellResiduals maxwell_residuals(const std::vector<FieldFrame>& series, double c = 1.0);

/// Integral of |E|^2 + c^2 B_z^2 over the masked nodes.
[[nodiscard]] double field_energy(const FieldFrame& frame, double c, const NormMask& mask);

}  // namespace gauge_lab
