#include "gauge_lab/operators.hpp"

#include <algorithm>
#include <cmath>

namespace gauge_lab {

Lattice lattice_of(const Grid2& g) { return {g.nx, g.ny, g.dx, g.dy}; }

VectorField2 grad(const ScalarField2& f) {
    VectorField2 out(f.grid, f.time);
    kernels::gradient(lattice_of(f.grid), f.values, out.x, out.y);
    return out;
}

ScalarField2 div(const VectorField2& v) {
    ScalarField2 out(v.grid, v.time);
    kernels::divergence(lattice_of(v.grid), v.x, v.y, out.values);
    return out;
}

ScalarField2 curl_z(const VectorField2& v) {
    ScalarField2 out(v.grid, v.time);
    kernels::curl_z(lattice_of(v.grid), v.x, v.y, out.values);
    return out;
}

ScalarField2 laplacian(const ScalarField2& f, LaplacianStencil stencil) {
    ScalarField2 out(f.grid, f.time);
    kernels::laplacian(lattice_of(f.grid), stencil, f.values, out.values);
    return out;
}

FieldFrame derive_fields(const PotentialState& s) {
    FieldFrame out;
    out.bz = curl_z(s.a);
    if (!s.has_previous()) {
        if (!s.is_static) throw Error("derive_fields: non-static state has no previous time level");
        out.e = grad(s.phi);
        for (auto& v : out.e.x) v = -v;
        for (auto& v : out.e.y) v = -v;
        out.e.time = s.time;
        return out;
    }
    const double dt = s.dt();
    ScalarField2 phi_mid(s.phi.grid, s.time - 0.5 * dt);
    for (std::size_t k = 0; k < phi_mid.values.size(); ++k)
        phi_mid.values[k] = 0.5 * (s.phi.values[k] + s.phi_prev->values[k]);
    out.e = grad(phi_mid);
    const auto& a = s.a;
    const auto& ap = *s.a_prev;
    for (std::size_t k = 0; k < out.e.x.size(); ++k) {
        out.e.x[k] = -out.e.x[k] - (a.x[k] - ap.x[k]) / dt;
        out.e.y[k] = -out.e.y[k] - (a.y[k] - ap.y[k]) / dt;
    }
    out.e.time = s.time - 0.5 * dt;
    return out;
}

namespace {

VectorField2 average(const VectorField2& a, const VectorField2& b, double t) {
    VectorField2 out(a.grid, t);
    for (std::size_t k = 0; k < a.x.size(); ++k) {
        out.x[k] = 0.5 * (a.x[k] + b.x[k]);
        out.y[k] = 0.5 * (a.y[k] + b.y[k]);
    }
    return out;
}

}  // namespace

MaxwellResiduals maxwell_residuals(const std::vector<FieldFrame>& series, double c, const NormMask& mask) {
    if (series.size() < 3) throw Error("maxwell_residuals: need at least 3 time levels");
    const double dt = series[1].bz.time - series[0].bz.time;
    if (!(dt > 0.0)) throw Error("maxwell_residuals: time levels must increase");
    for (std::size_t n = 1; n < series.size(); ++n) {
        const double step = series[n].bz.time - series[n - 1].bz.time;
        if (std::abs(step - dt) > 1e-9 * dt) throw Error("maxwell_residuals: time levels are not uniform");
    }
    const double lag = series[0].bz.time - series[0].e.time;
    const bool staggered = std::abs(lag) > 1e-12 * dt;
    if (staggered && std::abs(lag - 0.5 * dt) > 1e-9 * dt)
        throw Error("maxwell_residuals: E must share B's time stamps or lag by half a step");

    // E on the B time stamps; the staggered case loses the last level.
    std::vector<VectorField2> e_at_b;
    e_at_b.reserve(series.size());
    for (std::size_t n = 0; n < series.size(); ++n) {
        if (!staggered) {
            e_at_b.push_back(series[n].e);
        } else if (n + 1 < series.size()) {
            e_at_b.push_back(average(series[n].e, series[n + 1].e, series[n].bz.time));
        }
    }
    const std::size_t levels = e_at_b.size();
    if (levels < 3) throw Error("maxwell_residuals: need at least 3 usable time levels");

    MaxwellResiduals r;
    const Grid2& g = series[0].bz.grid;
    const double c2 = c * c;
    for (std::size_t n = 1; n + 1 < levels; ++n) {
        const auto div_e = div(e_at_b[n]);
        const auto curl_e = curl_z(e_at_b[n]);
        const auto grad_b = grad(series[n].bz);
        const auto& bm = series[n - 1].bz.values;
        const auto& bp = series[n + 1].bz.values;
        const auto& em = e_at_b[n - 1];
        const auto& ep = e_at_b[n + 1];
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (!mask.at(k)) continue;
            r.gauss = std::max(r.gauss, std::abs(div_e.values[k]));
            const double db_dt = (bp[k] - bm[k]) / (2.0 * dt);
            r.faraday = std::max(r.faraday, std::abs(db_dt + curl_e.values[k]));
            const double dex = (ep.x[k] - em.x[k]) / (2.0 * dt) - c2 * grad_b.y[k];
            const double dey = (ep.y[k] - em.y[k]) / (2.0 * dt) + c2 * grad_b.x[k];
            r.ampere = std::max(r.ampere, std::hypot(dex, dey));
        }
    }
    return r;
}

MaxwellResiduals maxwell_residuals(const std::vector<FieldFrame>& series, double c) {
    if (series.empty()) throw Error("maxwell_residuals: empty series");
    return maxwell_residuals(series, c, NormMask(series.front().bz.grid));
}

double field_energy(const FieldFrame& frame, double c, const NormMask& mask) {
    const Grid2& g = frame.bz.grid;
    double sum = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!mask.at(k)) continue;
        const double ex = frame.e.x[k];
        const double ey = frame.e.y[k];
        const double b = frame.bz.values[k];
        sum += ex * ex + ey * ey + c * c * b * b;
    }
    return sum * g.dx * g.dy;
}

}  // namespace gauge_lab
