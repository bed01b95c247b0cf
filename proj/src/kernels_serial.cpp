#include "gauge_lab/kernels.hpp"

#include "stencils.hpp"

#include <algorithm>
#include <cmath>

namespace gauge_lab::serial {

void gradient(const Lattice& lat, std::span<const double> f, std::span<double> gx, std::span<double> gy) {
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            gx[lat.index(i, j)] = detail::d_dx(lat, f, i, j);
            gy[lat.index(i, j)] = detail::d_dy(lat, f, i, j);
        }
    }
}

void divergence(const Lattice& lat, std::span<const double> vx, std::span<const double> vy, std::span<double> out) {
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i)
            out[lat.index(i, j)] = detail::d_dx(lat, vx, i, j) + detail::d_dy(lat, vy, i, j);
}

void curl_z(const Lattice& lat, std::span<const double> vx, std::span<const double> vy, std::span<double> out) {
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i)
            out[lat.index(i, j)] = detail::d_dx(lat, vy, i, j) - detail::d_dy(lat, vx, i, j);
}

void laplacian(const Lattice& lat, LaplacianStencil stencil, std::span<const double> f, std::span<double> out) {
    const int r = stencil == LaplacianStencil::wide ? 2 : 1;
    std::fill(out.begin(), out.end(), 0.0);
    for (int j = r; j < lat.ny - r; ++j)
        for (int i = r; i < lat.nx - r; ++i)
            out[lat.index(i, j)] = detail::lap_raw(lat, stencil, f, i, j);
}

void neg_laplacian_dirichlet(const Lattice& lat, LaplacianStencil stencil, std::span<const double> x,
                             std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int j = 1; j < lat.ny - 1; ++j)
        for (int i = 1; i < lat.nx - 1; ++i)
            out[lat.index(i, j)] = detail::neg_lap_dirichlet(lat, stencil, x, i, j);
}

void leapfrog(const Lattice& lat, double c2dt2, bool periodic, std::span<const double> u,
              std::span<const double> u_prev, std::span<const double> src, std::span<const double> sigma_dt,
              std::span<double> u_next) {
    if (!periodic) std::fill(u_next.begin(), u_next.end(), 0.0);
    const int lo = periodic ? 0 : 1;
    for (int j = lo; j < lat.ny - lo; ++j) {
        for (int i = lo; i < lat.nx - lo; ++i) {
            const auto k = lat.index(i, j);
            const double lap = periodic ? detail::lap5_periodic(lat, u, i, j) : detail::lap5(lat, u, i, j);
            u_next[k] = detail::leapfrog_node(c2dt2, lap, u[k], u_prev[k], src[k], sigma_dt[k]);
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double total = 0.0;
    for (int s = 0; s < kReductionSlabs; ++s) {
        const std::size_t lo = n * static_cast<std::size_t>(s) / kReductionSlabs;
        const std::size_t hi = n * static_cast<std::size_t>(s + 1) / kReductionSlabs;
        double acc = 0.0;
        for (std::size_t k = lo; k < hi; ++k) acc += a[k] * b[k];
        total += acc;
    }
    return total;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] + beta * y[k];
}

}  // namespace gauge_lab::serial
