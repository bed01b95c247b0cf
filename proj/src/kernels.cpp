#include "gauge_lab/kernels.hpp"

#include "stencils.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace gauge_lab {

namespace {
int g_thread_cap = 0;
int g_default_threads = 0;
}  // namespace

void set_thread_cap(int threads) {
    if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
    g_thread_cap = threads > 0 ? threads : 0;
    omp_set_num_threads(g_thread_cap > 0 ? g_thread_cap : g_default_threads);
}

void apply_thread_env() {
    if (const char* env = std::getenv("GAUGE_LAB_THREADS")) {
        try {
            set_thread_cap(std::stoi(env));
        } catch (const std::exception&) {
            // unparsable value: keep the runtime default
        }
    }
}

int thread_cap() { return g_thread_cap > 0 ? g_thread_cap : omp_get_max_threads(); }

namespace kernels {

void gradient(const Lattice& lat, std::span<const double> f, std::span<double> gx, std::span<double> gy) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const auto k = lat.index(i, j);
            gx[k] = detail::d_dx(lat, f, i, j);
            gy[k] = detail::d_dy(lat, f, i, j);
        }
    }
}

void divergence(const Lattice& lat, std::span<const double> vx, std::span<const double> vy, std::span<double> out) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i)
            out[lat.index(i, j)] = detail::d_dx(lat, vx, i, j) + detail::d_dy(lat, vy, i, j);
}

void curl_z(const Lattice& lat, std::span<const double> vx, std::span<const double> vy, std::span<double> out) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i)
            out[lat.index(i, j)] = detail::d_dx(lat, vy, i, j) - detail::d_dy(lat, vx, i, j);
}

void laplacian(const Lattice& lat, LaplacianStencil stencil, std::span<const double> f, std::span<double> out) {
    const int r = stencil == LaplacianStencil::wide ? 2 : 1;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const bool inside = i >= r && j >= r && i < lat.nx - r && j < lat.ny - r;
            out[lat.index(i, j)] = inside ? detail::lap_raw(lat, stencil, f, i, j) : 0.0;
        }
    }
}

void neg_laplacian_dirichlet(const Lattice& lat, LaplacianStencil stencil, std::span<const double> x,
                             std::span<double> out) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            out[lat.index(i, j)] =
                detail::interior(lat, i, j) ? detail::neg_lap_dirichlet(lat, stencil, x, i, j) : 0.0;
        }
    }
}

void leapfrog(const Lattice& lat, double c2dt2, bool periodic, std::span<const double> u,
              std::span<const double> u_prev, std::span<const double> src, std::span<const double> sigma_dt,
              std::span<double> u_next) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const auto k = lat.index(i, j);
            if (periodic) {
                u_next[k] = detail::leapfrog_node(c2dt2, detail::lap5_periodic(lat, u, i, j), u[k], u_prev[k],
                                                  src[k], sigma_dt[k]);
            } else if (detail::interior(lat, i, j)) {
                u_next[k] = detail::leapfrog_node(c2dt2, detail::lap5(lat, u, i, j), u[k], u_prev[k], src[k],
                                                  sigma_dt[k]);
            } else {
                u_next[k] = 0.0;
            }
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::array<double, kReductionSlabs> partial{};
#pragma omp parallel for schedule(static)
    for (int s = 0; s < kReductionSlabs; ++s) {
        const std::size_t lo = n * static_cast<std::size_t>(s) / kReductionSlabs;
        const std::size_t hi = n * static_cast<std::size_t>(s + 1) / kReductionSlabs;
        double acc = 0.0;
        for (std::size_t k = lo; k < hi; ++k) acc += a[k] * b[k];
        partial[static_cast<std::size_t>(s)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, std::abs(a[static_cast<std::size_t>(k)]));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) y[static_cast<std::size_t>(k)] += alpha * x[static_cast<std::size_t>(k)];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto u = static_cast<std::size_t>(k);
        y[u] = x[u] + beta * y[u];
    }
}

}  // namespace kernels
}  // namespace gauge_lab
