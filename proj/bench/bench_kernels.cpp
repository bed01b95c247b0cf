// Serial reference kernels against the OpenMP versions.

#include "gauge_lab/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

using namespace gauge_lab;

struct Fixture {
    Lattice lat;
    std::vector<double> a, b, c, d, out, out2;

    explicit Fixture(int n) : lat{n, n, 1.0, 1.0} {
        const auto size = lat.size();
        a.resize(size);
        b.resize(size);
        c.resize(size);
        d.assign(size, 0.0);
        out.assign(size, 0.0);
        out2.assign(size, 0.0);
        for (std::size_t k = 0; k < size; ++k) {
            a[k] = std::sin(0.01 * static_cast<double>(k));
            b[k] = std::cos(0.013 * static_cast<double>(k));
            c[k] = 1e-3 * std::sin(0.007 * static_cast<double>(k));
        }
    }
};

template <bool Parallel>
void bm_leapfrog(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::leapfrog(f.lat, 0.1, false, f.a, f.b, f.c, f.d, f.out);
        else
            serial::leapfrog(f.lat, 0.1, false, f.a, f.b, f.c, f.d, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.lat.size()));
}

template <bool Parallel>
void bm_gradient(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::gradient(f.lat, f.a, f.out, f.out2);
        else
            serial::gradient(f.lat, f.a, f.out, f.out2);
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.lat.size()));
}

template <bool Parallel>
void bm_divergence(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::divergence(f.lat, f.a, f.b, f.out);
        else
            serial::divergence(f.lat, f.a, f.b, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.lat.size()));
}

template <bool Parallel>
void bm_cg_matvec(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::neg_laplacian_dirichlet(f.lat, LaplacianStencil::wide, f.a, f.out);
        else
            serial::neg_laplacian_dirichlet(f.lat, LaplacianStencil::wide, f.a, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.lat.size()));
}

template <bool Parallel>
void bm_dot(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        double v = Parallel ? kernels::dot(f.a, f.b) : serial::dot(f.a, f.b);
        benchmark::DoNotOptimize(v);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.lat.size()));
}

}  // namespace

BENCHMARK(bm_leapfrog<false>)->Name("leapfrog/serial")->Arg(256)->Arg(512);
BENCHMARK(bm_leapfrog<true>)->Name("leapfrog/omp")->Arg(256)->Arg(512);
BENCHMARK(bm_gradient<false>)->Name("gradient/serial")->Arg(256)->Arg(512);
BENCHMARK(bm_gradient<true>)->Name("gradient/omp")->Arg(256)->Arg(512);
BENCHMARK(bm_divergence<false>)->Name("divergence/serial")->Arg(256)->Arg(512);
BENCHMARK(bm_divergence<true>)->Name("divergence/omp")->Arg(256)->Arg(512);
BENCHMARK(bm_cg_matvec<false>)->Name("cg_matvec/serial")->Arg(256)->Arg(512);
BENCHMARK(bm_cg_matvec<true>)->Name("cg_matvec/omp")->Arg(256)->Arg(512);
BENCHMARK(bm_dot<false>)->Name("dot/serial")->Arg(256)->Arg(512);
BENCHMARK(bm_dot<true>)->Name("dot/omp")->Arg(256)->Arg(512);

BENCHMARK_MAIN();
