#pragma once

#include "gauge_lab/grid.hpp"
#include "gauge_lab/kernels.hpp"

#include <span>

namespace gauge_lab {

struct CgOptions {
    /// Stop when max|residual| <= rel_tol * max(max|rhs|, reference).
    double rel_tol{1e-8};
    /// Scale the residual is measured against when the right-hand side is
    /// itself at rounding level; 0 uses max|rhs| alone.
    double reference{0.0};
    /// 0 picks 40 * max(nx, ny).
    int max_iterations{0};
};

struct CgResult {
    int iterations{0};
    double rel_residual{0.0};
};

class SolverError : public Error {
public:
    using Error::Error;
};

/// Solves lap(x) = rhs on the interior nodes with x = 0 on (and beyond) the
/// boundary, by conjugate gradients on the SPD operator -lap. `x` holds the
/// initial guess on entry; its boundary entries are ignored and zeroed.
/// Throws SolverError when the iteration cap is reached.
CgResult solve_poisson_dirichlet(const Grid2& grid, LaplacianStencil stencil, std::span<const double> rhs,
                                 std::span<double> x, const CgOptions& opt = {});

}  // namespace gauge_lab
