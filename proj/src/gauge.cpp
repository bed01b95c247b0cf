#include "gauge_lab/gauge.hpp"

#include "gauge_lab/interferometry.hpp"
#include "gauge_lab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gauge_lab {

double GaugeTolerances::resolve(const Grid2& g, double scale) const {
    if (absolute) return *absolute;
    const double h = g.h();
    return std::max(floor, factor * h * h * scale);
}

NormMask probe_mask(const Grid2& g) {
    NormMask mask(g);
    if (g.excluded) mask.exclude_disk(g.excluded->center, g.excluded->radius + 2.0 * g.h());
    return mask;
}

namespace {

void add_gradient(VectorField2& a, const GaugeChi& chi, double t, bool skip_excluded) {
    const Grid2& g = a.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (skip_excluded && g.is_excluded(i, j)) continue;
            const Vec2 d = chi.gradient(g.point(i, j), t);
            const auto k = g.index(i, j);
            a.x[k] += d.x;
            a.y[k] += d.y;
        }
    }
}

void sub_time_derivative(ScalarField2& phi, const GaugeChi& chi, double t, bool skip_excluded) {
    const Grid2& g = phi.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (skip_excluded && g.is_excluded(i, j)) continue;
            phi(i, j) -= chi.time_derivative(g.point(i, j), t);
        }
    }
}

void add_into(VectorField2& a, const VectorField2& b) {
    for (std::size_t k = 0; k < a.x.size(); ++k) {
        a.x[k] += b.x[k];
        a.y[k] += b.y[k];
    }
}

void require_same_lattice(const Grid2& a, const Grid2& b, const char* what) {
    if (!a.same_lattice(b)) throw Error(std::string(what) + ": fields are on different grids");
}

}  // namespace

PotentialState apply_narrow(const PotentialState& s, const GaugeChi& chi) {
    const Grid2& g = s.grid();
    const bool polar = chi.kind() == GaugeChi::Kind::polar_angle;
    if (polar && !(g.excluded && g.excluded->contains(chi.center())))
        throw Error("apply_narrow: polar gauge function must be centred inside the excluded disk");

    PotentialState out = s;
    add_gradient(out.a, chi, s.time, polar);
    sub_time_derivative(out.phi, chi, s.time, polar);
    if (s.has_previous()) {
        add_gradient(*out.a_prev, chi, s.a_prev->time, polar);
        sub_time_derivative(*out.phi_prev, chi, s.phi_prev->time, polar);
    }
    if (s.a_exact) {
        const double t = s.time;
        out.a_exact = [base = s.a_exact, chi, t](Vec2 p) { return base(p) + chi.gradient(p, t); };
    }
    return out;
}

PotentialState apply_narrow(const PotentialState& s, const ScalarField2& chi, const ScalarField2* chi_prev) {
    require_same_lattice(s.grid(), chi.grid, "apply_narrow");
    PotentialState out = s;
    out.a_exact = nullptr;
    add_into(out.a, grad(chi));
    if (!chi_prev) {
        if (s.has_previous()) add_into(*out.a_prev, grad(chi));
        return out;
    }
    if (!s.has_previous()) throw Error("apply_narrow: a two-level chi needs a state with a previous level");
    require_same_lattice(s.grid(), chi_prev->grid, "apply_narrow");
    add_into(*out.a_prev, grad(*chi_prev));
    const double dt = s.dt();
    for (std::size_t k = 0; k < chi.values.size(); ++k) {
        const double rate = (chi.values[k] - chi_prev->values[k]) / dt;
        out.phi.values[k] -= rate;
        out.phi_prev->values[k] -= rate;
    }
    return out;
}

WideGaugeElement WideGaugeElement::sampled(const Grid2& g, const std::function<Vec2(Vec2)>& c, double c0) {
    WideGaugeElement e;
    e.c = VectorField2(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (!g.is_excluded(i, j)) e.c.set(i, j, c(g.point(i, j)));
    e.c0 = ScalarField2(g);
    std::fill(e.c0.values.begin(), e.c0.values.end(), c0);
    e.c_exact = c;
    return e;
}

WideResiduals wide_residuals(const WideGaugeElement& e, double dt, const GaugeTolerances& tol) {
    const Grid2& g = e.c.grid;
    require_same_lattice(g, e.c0.grid, "wide gauge element");
    if (e.c_prev.has_value() != e.c0_prev.has_value())
        throw Error("wide gauge element: previous level must carry both C and C0");
    const NormMask mask = probe_mask(g);

    WideResiduals r;
    r.tolerance = tol.resolve(g, max_abs(e.c, mask));
    r.curl = max_abs(curl_z(e.c), mask);

    // grad C0 = dC/dt, both centred half a step back for a two-level element
    ScalarField2 c0_mid = e.c0;
    if (e.c0_prev)
        for (std::size_t k = 0; k < c0_mid.values.size(); ++k)
            c0_mid.values[k] = 0.5 * (e.c0.values[k] + e.c0_prev->values[k]);
    VectorField2 res = grad(c0_mid);
    if (e.c_prev) {
        if (!(dt > 0.0)) throw Error("wide gauge element: a two-level element needs dt > 0");
        for (std::size_t k = 0; k < res.x.size(); ++k) {
            res.x[k] -= (e.c.x[k] - e.c_prev->x[k]) / dt;
            res.y[k] -= (e.c.y[k] - e.c_prev->y[k]) / dt;
        }
    }
    r.companion = max_abs(res, mask);
    return r;
}

PotentialState apply_wide(const PotentialState& s, const WideGaugeElement& e, const GaugeTolerances& tol) {
    require_same_lattice(s.grid(), e.c.grid, "apply_wide");
    if (e.c_prev && !s.has_previous())
        throw Error("apply_wide: a two-level element needs a state with a previous level");
    const auto r = wide_residuals(e, s.has_previous() ? s.dt() : 0.0, tol);
    if (r.curl > r.tolerance)
        throw GaugeConstraintError("apply_wide: curl C = " + std::to_string(r.curl) + " exceeds tolerance " +
                                       std::to_string(r.tolerance),
                                   r.curl, r.tolerance);
    if (r.companion > r.tolerance)
        throw GaugeConstraintError("apply_wide: |grad C0 - dC/dt| = " + std::to_string(r.companion) +
                                       " exceeds tolerance " + std::to_string(r.tolerance),
                                   r.companion, r.tolerance);

    PotentialState out = s;
    add_into(out.a, e.c);
    for (std::size_t k = 0; k < out.phi.values.size(); ++k) out.phi.values[k] -= e.c0.values[k];
    if (s.has_previous()) {
        add_into(*out.a_prev, e.c_prev ? *e.c_prev : e.c);
        const auto& c0p = e.c0_prev ? *e.c0_prev : e.c0;
        for (std::size_t k = 0; k < out.phi_prev->values.size(); ++k) out.phi_prev->values[k] -= c0p.values[k];
    }
    if (s.a_exact && e.c_exact && !e.c_prev) {
        out.a_exact = [base = s.a_exact, c = e.c_exact](Vec2 p) { return base(p) + c(p); };
    } else {
        out.a_exact = nullptr;
    }
    return out;
}

namespace {

ScalarField2 solve_gauge_function(const VectorField2& a, const ScalarField2* guess, const CgOptions& opt,
                                  CgResult& info) {
    ScalarField2 rhs = div(a);
    for (auto& v : rhs.values) v = -v;
    ScalarField2 chi(a.grid, a.time);
    if (guess) chi.values = guess->values;
    info = solve_poisson_dirichlet(a.grid, LaplacianStencil::wide, rhs.values, chi.values, opt);
    return chi;
}

}  // namespace

CoulombProjection coulomb_project(const PotentialState& s, const CoulombOptions& opt) {
    s.grid().validate();
    const NormMask mask(s.grid());
    CoulombProjection out;
    out.div_before = max_abs(div(s.a), mask);
    out.chi = solve_gauge_function(s.a, opt.guess, opt.cg, out.solve);
    if (s.has_previous()) {
        CgResult prev_info;
        out.chi_prev = solve_gauge_function(*s.a_prev, &out.chi, opt.cg, prev_info);
        out.chi_prev->time = s.a_prev->time;
        out.solve.iterations += prev_info.iterations;
        out.solve.rel_residual = std::max(out.solve.rel_residual, prev_info.rel_residual);
        out.state = apply_narrow(s, out.chi, &*out.chi_prev);
    } else {
        out.state = apply_narrow(s, out.chi);
    }
    out.div_after = max_abs(div(out.state.a), mask);
    return out;
}

ScalarField2 lorenz_residual(const PotentialState& s, double c) {
    if (!s.has_previous()) {
        if (!s.is_static) throw Error("lorenz_residual: non-static state has no previous time level");
        return div(s.a);
    }
    const double dt = s.dt();
    VectorField2 a_mid(s.grid(), s.time - 0.5 * dt);
    for (std::size_t k = 0; k < a_mid.x.size(); ++k) {
        a_mid.x[k] = 0.5 * (s.a.x[k] + s.a_prev->x[k]);
        a_mid.y[k] = 0.5 * (s.a.y[k] + s.a_prev->y[k]);
    }
    ScalarField2 r = div(a_mid);
    const double inv = 1.0 / (c * c * dt);
    for (std::size_t k = 0; k < r.values.size(); ++k)
        r.values[k] += (s.phi.values[k] - s.phi_prev->values[k]) * inv;
    return r;
}

GaugeChi residual_lorenz_chi(Vec2 k, double amplitude, double phase, double c) {
    return GaugeChi::plane_wave(k, amplitude, phase, c);
}

std::string to_string(EquivalenceLabel label) {
    switch (label) {
        case EquivalenceLabel::identical: return "IDENTICAL";
        case EquivalenceLabel::narrow_equivalent: return "NARROW_EQUIVALENT";
        case EquivalenceLabel::wide_only: return "WIDE_ONLY";
        case EquivalenceLabel::inequivalent: return "INEQUIVALENT";
    }
    return "INEQUIVALENT";
}

namespace {

double loop_integral(const PotentialState& s, const Path& loop) {
    if (s.a_exact) return path_integral(VectorSource(AnalyticVector(s.a_exact)), loop);
    return path_integral(VectorSource(s.a), loop);
}

std::optional<double> lorenz_norm(const PotentialState& s, double c, const NormMask& mask) {
    if (!s.is_static && !s.has_previous()) return std::nullopt;
    return max_abs(lorenz_residual(s, c), mask);
}

}  // namespace

EquivalenceVerdict classify_equivalence(const PotentialState& s1, const PotentialState& s2,
                                        const std::vector<ClassifyLoop>& loops, const ClassifyOptions& opt) {
    const Grid2& g = s1.grid();
    require_same_lattice(g, s2.grid(), "classify_equivalence");
    const NormMask mask = probe_mask(g);

    EquivalenceVerdict v;
    for (const auto& l : loops) {
        if (!l.path.closed()) throw Error("classify_equivalence: loop '" + l.id + "' is not closed");
        LoopIntegral li;
        li.id = l.id;
        if (g.excluded) {
            l.path.require_outside(*g.excluded);
            li.winding = winding_number(l.path, g.excluded->center);
        }
        li.value = loop_integral(s2, l.path) - loop_integral(s1, l.path);
        v.loop_integrals.push_back(li);
    }
    if (g.excluded) {
        const bool enclosing = std::any_of(v.loop_integrals.begin(), v.loop_integrals.end(),
                                           [](const LoopIntegral& li) { return li.winding != 0; });
        if (!enclosing)
            throw Error("classify_equivalence: the domain has an excluded disk but no loop winds around it");
    }

    VectorField2 d(g, s1.time);
    for (std::size_t k = 0; k < d.x.size(); ++k) {
        d.x[k] = s2.a.x[k] - s1.a.x[k];
        d.y[k] = s2.a.y[k] - s1.a.y[k];
    }
    v.potential_residual = max_abs(d, mask);
    v.curl_residual = max_abs(curl_z(d), mask);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = 0; k < d.x.size(); ++k) {
        if (!mask.at(k)) continue;
        const double dp = s2.phi.values[k] - s1.phi.values[k];
        lo = std::min(lo, dp);
        hi = std::max(hi, dp);
    }
    v.scalar_residual = hi >= lo ? 0.5 * (hi - lo) : 0.0;

    v.tolerance = opt.tolerances.resolve(g, std::max(max_abs(s1.a, mask), max_abs(s2.a, mask)));
    v.lorenz_residuals[0] = lorenz_norm(s1, opt.c, mask);
    v.lorenz_residuals[1] = lorenz_norm(s2, opt.c, mask);

    const double tol = v.tolerance;
    const bool loops_vanish = std::all_of(v.loop_integrals.begin(), v.loop_integrals.end(),
                                          [tol](const LoopIntegral& li) { return std::abs(li.value) <= tol; });
    if (v.potential_residual <= tol && v.scalar_residual <= tol && loops_vanish) {
        v.label = EquivalenceLabel::identical;
    } else if (v.curl_residual <= tol && loops_vanish) {
        v.label = EquivalenceLabel::narrow_equivalent;
    } else if (v.curl_residual <= tol) {
        v.label = EquivalenceLabel::wide_only;
    } else {
        v.label = EquivalenceLabel::inequivalent;
    }
    return v;
}

}  // namespace gauge_lab
