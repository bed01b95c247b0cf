#pragma once

// Stencil and vector kernels shared by the operators, the Poisson solver and
// the FDTD stepper. `gauge_lab::kernels` holds the OpenMP versions; the plain
// loop versions in `gauge_lab::serial` are kept as the reference the tests and
// the benchmark compare against. Both produce bit-identical output: stencil
// kernels write each node independently, and reductions use a fixed slab
// partition that does not depend on the thread count.

#include <cstddef>
#include <span>

namespace gauge_lab {

struct Lattice {
    int nx{0};
    int ny{0};
    double dx{1.0};
    double dy{1.0};

    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
};

enum class LaplacianStencil {
    five_point,  // (f[i+1] - 2 f[i] + f[i-1]) / dx^2
    wide,        // (f[i+2] - 2 f[i] + f[i-2]) / (2 dx)^2, i.e. central-difference div of grad
};

/// Number of slabs used by deterministic reductions.
inline constexpr int kReductionSlabs = 64;

/// Caps OpenMP threads used by the kernels; <= 0 restores the runtime default.
void set_thread_cap(int threads);
/// Reads GAUGE_LAB_THREADS and applies it, if set.
void apply_thread_env();
[[nodiscard]] int thread_cap();

namespace kernels {

void gradient(const Lattice& lat, std::span<const double> f, std::span<double> gx, std::span<double> gy);
void divergence(const Lattice& lat, std::span<const double> vx, std::span<const double> vy, std::span<double> out);
void curl_z(const Lattice& lat, std::span<const double> vx, std::span<const double> vy, std::span<double> out);
/// Laplacian on interior nodes; boundary nodes of `out` are set to zero.
void laplacian(const Lattice& lat, LaplacianStencil stencil, std::span<const double> f, std::span<double> out);
/// -Laplacian with homogeneous Dirichlet data: nodes outside the interior count as zero.
void neg_laplacian_dirichlet(const Lattice& lat, LaplacianStencil stencil, std::span<const double> x,
                             std::span<double> out);

/// One leapfrog update of u_tt = c^2 (lap u + src) with a sponge:
///   u_next = (2u - (1 - s) u_prev + c2dt2 (lap u + src)) / (1 + s),  s = sigma_dt[k].
/// Non-periodic lattices hold the outer ring of nodes at zero.
void leapfrog(const Lattice& lat, double c2dt2, bool periodic, std::span<const double> u,
              std::span<const double> u_prev, std::span<const double> src, std::span<const double> sigma_dt,
              std::span<double> u_next);

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double max_abs(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);

}  // namespace kernels

namespace serial {

void gradient(const Lattice& lat, std::span<const double> f, std::span<double> gx, std::span<double> gy);
void divergence(const Lattice& lat, std::span<const double> vx, std::span<const double> vy, std::span<double> out);
void curl_z(const Lattice& lat, std::span<const double> vx, std::span<const double> vy, std::span<double> out);
void laplacian(const Lattice& lat, LaplacianStencil stencil, std::span<const double> f, std::span<double> out);
void neg_laplacian_dirichlet(const Lattice& lat, LaplacianStencil stencil, std::span<const double> x,
                             std::span<double> out);
void leapfrog(const Lattice& lat, double c2dt2, bool periodic, std::span<const double> u,
              std::span<const double> u_prev, std::span<const double> src, std::span<const double> sigma_dt,
              std::span<double> u_next);
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double max_abs(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);

}  // namespace serial

}  // namespace gauge_lab
