#include "gauge_lab/poisson.hpp"

#include "gauge_lab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gauge_lab {

CgResult solve_poisson_dirichlet(const Grid2& grid, LaplacianStencil stencil, std::span<const double> rhs,
                                 std::span<double> x, const CgOptions& opt) {
    const Lattice lat = lattice_of(grid);
    const std::size_t n = lat.size();
    if (rhs.size() != n || x.size() != n) throw Error("poisson: vector sizes do not match the grid");

    // CG on -lap x = -rhs, restricted to interior nodes.
    std::vector<double> b(n, 0.0), r(n), p(n), q(n);
    for (int j = 1; j < lat.ny - 1; ++j)
        for (int i = 1; i < lat.nx - 1; ++i) b[lat.index(i, j)] = -rhs[lat.index(i, j)];
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i)
            if (i == 0 || j == 0 || i == lat.nx - 1 || j == lat.ny - 1) x[lat.index(i, j)] = 0.0;

    const double b_max = std::max(kernels::max_abs(b), opt.reference);
    if (b_max == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {0, 0.0};
    }
    const int cap = opt.max_iterations > 0 ? opt.max_iterations : 40 * std::max(lat.nx, lat.ny);

    kernels::neg_laplacian_dirichlet(lat, stencil, x, q);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
    p = r;
    double rr = kernels::dot(r, r);
    CgResult res;
    for (int it = 0; it <= cap; ++it) {
        res.iterations = it;
        res.rel_residual = kernels::max_abs(r) / b_max;
        if (res.rel_residual <= opt.rel_tol) {
            // confirm with the true residual, not the recurrence
            kernels::neg_laplacian_dirichlet(lat, stencil, x, q);
            for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
            res.rel_residual = kernels::max_abs(r) / b_max;
            if (res.rel_residual <= opt.rel_tol) return res;
            p = r;
            rr = kernels::dot(r, r);
        }
        if (it == cap) break;
        kernels::neg_laplacian_dirichlet(lat, stencil, p, q);
        const double alpha = rr / kernels::dot(p, q);
        kernels::axpy(alpha, p, x);
        kernels::axpy(-alpha, q, r);
        const double rr_new = kernels::dot(r, r);
        kernels::xpby(r, rr_new / rr, p);
        rr = rr_new;
    }
    throw SolverError("poisson: conjugate gradients did not converge in " + std::to_string(cap) +
                      " iterations (relative residual " + std::to_string(res.rel_residual) + ")");
}

}  // namespace gauge_lab
