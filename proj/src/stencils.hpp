#pragma once

// Per-node stencil formulas shared by the OpenMP and serial kernel loops.

#include "gauge_lab/kernels.hpp"

#include <span>

namespace gauge_lab::detail {

// Second-order derivative along x: central inside, one-sided at the edges.
inline double d_dx(const Lattice& l, std::span<const double> f, int i, int j) {
    const std::size_t k = l.index(i, j);
    if (i == 0) return (-3.0 * f[k] + 4.0 * f[k + 1] - f[k + 2]) / (2.0 * l.dx);
    if (i == l.nx - 1) return (3.0 * f[k] - 4.0 * f[k - 1] + f[k - 2]) / (2.0 * l.dx);
    return (f[k + 1] - f[k - 1]) / (2.0 * l.dx);
}

inline double d_dy(const Lattice& l, std::span<const double> f, int i, int j) {
    const std::size_t k = l.index(i, j);
    const std::size_t s = static_cast<std::size_t>(l.nx);
    if (j == 0) return (-3.0 * f[k] + 4.0 * f[k + s] - f[k + 2 * s]) / (2.0 * l.dy);
    if (j == l.ny - 1) return (3.0 * f[k] - 4.0 * f[k - s] + f[k - 2 * s]) / (2.0 * l.dy);
    return (f[k + s] - f[k - s]) / (2.0 * l.dy);
}

inline bool interior(const Lattice& l, int i, int j) {
    return i > 0 && j > 0 && i < l.nx - 1 && j < l.ny - 1;
}

inline double lap5(const Lattice& l, std::span<const double> f, int i, int j) {
    const std::size_t k = l.index(i, j);
    const std::size_t s = static_cast<std::size_t>(l.nx);
    return (f[k + 1] - 2.0 * f[k] + f[k - 1]) / (l.dx * l.dx) +
           (f[k + s] - 2.0 * f[k] + f[k - s]) / (l.dy * l.dy);
}

// Plain stencil; valid for nodes at least r = 1 (five-point) or 2 (wide) from the edge.
inline double lap_raw(const Lattice& l, LaplacianStencil st, std::span<const double> f, int i, int j) {
    const std::size_t r = st == LaplacianStencil::wide ? 2 : 1;
    const std::size_t k = l.index(i, j);
    const std::size_t s = r * static_cast<std::size_t>(l.nx);
    const double hx2 = (static_cast<double>(r) * l.dx) * (static_cast<double>(r) * l.dx);
    const double hy2 = (static_cast<double>(r) * l.dy) * (static_cast<double>(r) * l.dy);
    return (f[k + r] - 2.0 * f[k] + f[k - r]) / hx2 + (f[k + s] - 2.0 * f[k] + f[k - s]) / hy2;
}

inline double lap5_periodic(const Lattice& l, std::span<const double> f, int i, int j) {
    const int ip = i + 1 == l.nx ? 0 : i + 1;
    const int im = i == 0 ? l.nx - 1 : i - 1;
    const int jp = j + 1 == l.ny ? 0 : j + 1;
    const int jm = j == 0 ? l.ny - 1 : j - 1;
    const double c = f[l.index(i, j)];
    return (f[l.index(ip, j)] - 2.0 * c + f[l.index(im, j)]) / (l.dx * l.dx) +
           (f[l.index(i, jp)] - 2.0 * c + f[l.index(i, jm)]) / (l.dy * l.dy);
}

// Value at (i, j) with homogeneous Dirichlet data: anything that is not an
// interior node reads as zero.
inline double dirichlet_value(const Lattice& l, std::span<const double> x, int i, int j) {
    return interior(l, i, j) ? x[l.index(i, j)] : 0.0;
}

inline double neg_lap_dirichlet(const Lattice& l, LaplacianStencil st, std::span<const double> x, int i, int j) {
    const int r = st == LaplacianStencil::wide ? 2 : 1;
    const double hx2 = (r * l.dx) * (r * l.dx);
    const double hy2 = (r * l.dy) * (r * l.dy);
    const double c = x[l.index(i, j)];
    return -(dirichlet_value(l, x, i + r, j) - 2.0 * c + dirichlet_value(l, x, i - r, j)) / hx2 -
           (dirichlet_value(l, x, i, j + r) - 2.0 * c + dirichlet_value(l, x, i, j - r)) / hy2;
}

inline double leapfrog_node(double c2dt2, double lap, double u, double u_prev, double src, double s) {
    return (2.0 * u - (1.0 - s) * u_prev + c2dt2 * (lap + src)) / (1.0 + s);
}

}  // namespace gauge_lab::detail
