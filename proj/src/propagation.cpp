#include "gauge_lab/propagation.hpp"

#include "gauge_lab/gauge.hpp"
#include "gauge_lab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace gauge_lab {

double FdtdConfig::courant() const {
    return c * dt * std::sqrt(1.0 / (grid.dx * grid.dx) + 1.0 / (grid.dy * grid.dy));
}

void FdtdConfig::validate() const {
    grid.validate();
    if (!(c > 0.0)) throw Error("fdtd: c must be positive");
    if (!(dt > 0.0)) throw Error("fdtd: dt must be positive");
    if (!(cfl_max > 0.0)) throw Error("fdtd: cfl_max must be positive");
    if (courant() > cfl_max)
        throw CflError("fdtd: Courant number " + std::to_string(courant()) + " exceeds the limit " +
                       std::to_string(cfl_max));
    if (damping_cells < 0) throw Error("fdtd: damping width must be non-negative");
    if (2 * damping_cells + 8 > std::min(grid.nx, grid.ny)) throw Error("fdtd: damping layer leaves no interior");
    if (damping_cells > 0 && !(damping_strength > 0.0)) throw Error("fdtd: damping strength must be positive");
    if (periodic && damping_cells > 0) throw Error("fdtd: a periodic domain takes no damping layer");
    if (source) {
        source->validate();
        if (periodic) throw Error("fdtd: the solenoid source needs a non-periodic domain");
        if (source->radius < 4.0 * grid.h()) throw Error("fdtd: solenoid radius must span at least 4 cells");
        const Disk d = source->disk();
        const double reach = d.radius + 4.0 * grid.h();
        if (d.center.x - reach < grid.x0 || d.center.x + reach > grid.x_max() || d.center.y - reach < grid.y0 ||
            d.center.y + reach > grid.y_max())
            throw Error("fdtd: solenoid must lie inside the domain");
    }
}

namespace {

double magnetization(double r, double radius, double h) {
    const double inner = radius - 2.0 * h;
    if (r <= inner) return 1.0;
    if (r >= radius) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (r - inner) / (2.0 * h)));
}

}  // namespace

FdtdStepper::FdtdStepper(FdtdConfig config) : cfg_(std::move(config)) {
    cfg_.validate();
    const Grid2& g = cfg_.grid;
    const Lattice lat = lattice_of(g);
    zero_.assign(g.size(), 0.0);

    sigma_dt_.assign(g.size(), 0.0);
    if (cfg_.damping_cells > 0) {
        const int w = cfg_.damping_cells;
        const double sigma_max = cfg_.damping_strength * cfg_.c / (w * g.h());
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const int edge = std::min({i, j, g.nx - 1 - i, g.ny - 1 - j});
                const double depth = std::max(0, w - edge) / static_cast<double>(w);
                sigma_dt_[g.index(i, j)] = sigma_max * depth * depth * cfg_.dt;
            }
        }
    }

    if (!cfg_.source) return;
    ramp_ = cfg_.source->ramp > 0.0 ? cfg_.source->ramp : 5.0 * cfg_.dt;
    cfg_.source->ramp = ramp_;
    const SolenoidSpec& s = *cfg_.source;

    const ScalarField2 m = sample_scalar(g, [&](Vec2 p) { return magnetization(norm(p - s.center), s.radius, g.h()); });
    // J = curl(M z) = (d_y M, -d_x M): zero discrete divergence
    std::vector<double> mx(g.size()), my(g.size());
    kernels::gradient(lat, m.values, mx, my);
    jx_unit_ = my;
    jy_unit_.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) jy_unit_[k] = -mx[k];

    // static response: lap psi = -M, A = curl(psi z)
    std::vector<double> rhs(g.size()), psi(g.size(), 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) rhs[k] = -m.values[k];
    solve_poisson_dirichlet(g, LaplacianStencil::five_point, rhs, psi, CgOptions{1e-12, 0});
    std::vector<double> px(g.size()), py(g.size());
    kernels::gradient(lat, psi, px, py);
    VectorField2 a(g);
    a.x = py;
    for (std::size_t k = 0; k < g.size(); ++k) a.y[k] = -px[k];
    const double loop_r = s.radius + 4.0 * g.h();
    unit_flux_ = path_integral(VectorSource(a), Path::circle(s.center, loop_r, 512));
    if (!(unit_flux_ > 0.0)) throw Error("fdtd: source calibration failed");
}

VectorField2 FdtdStepper::source_current(double t) const {
    VectorField2 j(cfg_.grid, t);
    if (!cfg_.source) return j;
    const double amp = cfg_.source->ramp_value(t) * cfg_.source->flux / unit_flux_;
    if (amp == 0.0) return j;
    for (std::size_t k = 0; k < j.x.size(); ++k) {
        j.x[k] = amp * jx_unit_[k];
        j.y[k] = amp * jy_unit_[k];
    }
    return j;
}

FdtdState FdtdStepper::initial_state(double t0) const {
    PotentialState p = PotentialState::zero(cfg_.grid, t0);
    p.a_exact = nullptr;
    p.is_static = false;
    p.a_prev = VectorField2(cfg_.grid, t0 - cfg_.dt);
    p.phi_prev = ScalarField2(cfg_.grid, t0 - cfg_.dt);
    return {std::move(p), 0};
}

FdtdState FdtdStepper::make_state(const PotentialState& levels) const {
    levels.validate();
    if (!cfg_.grid.same_lattice(levels.grid())) throw Error("fdtd: state is on a different grid");
    if (!levels.has_previous()) throw Error("fdtd: state needs a previous level");
    if (std::abs(levels.dt() - cfg_.dt) > 1e-12 * cfg_.dt) throw Error("fdtd: state levels are not dt apart");
    FdtdState s{levels, 0};
    s.potentials.is_static = false;
    s.potentials.a_exact = nullptr;
    return s;
}

void FdtdStepper::advance(FdtdState& s) const {
    PotentialState& p = s.potentials;
    const Grid2& g = cfg_.grid;
    const Lattice lat = lattice_of(g);
    const double c2dt2 = cfg_.c * cfg_.c * cfg_.dt * cfg_.dt;
    const double t_next = p.time + cfg_.dt;

    const VectorField2 j = source_current(p.time);
    ScalarField2 phi_next(g, t_next);
    VectorField2 a_next(g, t_next);
    kernels::leapfrog(lat, c2dt2, cfg_.periodic, p.phi.values, p.phi_prev->values, zero_, sigma_dt_,
                      phi_next.values);
    kernels::leapfrog(lat, c2dt2, cfg_.periodic, p.a.x, p.a_prev->x, j.x, sigma_dt_, a_next.x);
    kernels::leapfrog(lat, c2dt2, cfg_.periodic, p.a.y, p.a_prev->y, j.y, sigma_dt_, a_next.y);

    p.phi_prev = std::move(p.phi);
    p.a_prev = std::move(p.a);
    p.phi = std::move(phi_next);
    p.a = std::move(a_next);
    p.time = t_next;
    ++s.step;
}

FdtdState FdtdStepper::step(const FdtdState& s) const {
    FdtdState next = s;
    advance(next);
    return next;
}

FdtdState fdtd_lorenz_step(const FdtdStepper& stepper, const FdtdState& s) { return stepper.step(s); }

std::vector<double> FrameSeries::times() const {
    std::vector<double> t;
    t.reserve(frames.size());
    for (const auto& f : frames) t.push_back(f.time);
    return t;
}

double free_radius(const Grid2& g, Vec2 center, int damping_cells) {
    const int margin = std::max(damping_cells, 2);
    const double left = center.x - g.x(margin);
    const double right = g.x(g.nx - 1 - margin) - center.x;
    const double bottom = center.y - g.y(margin);
    const double top = g.y(g.ny - 1 - margin) - center.y;
    return std::min({left, right, bottom, top});
}

FrameSeries switch_on_scenario(const SwitchOnConfig& cfg) {
    if (!cfg.fdtd.source) throw Error("switch_on_scenario: no solenoid source configured");
    if (cfg.frame_every < 1) throw Error("switch_on_scenario: frame cadence must be at least 1");
    const FdtdStepper stepper(cfg.fdtd);
    const FdtdConfig& fc = stepper.config();
    const SolenoidSpec& src = *fc.source;
    if (!(cfg.t_end > 0.0)) throw Error("switch_on_scenario: t_end must be positive");

    FrameSeries out;
    out.source = src;
    out.c = fc.c;
    out.step_dt = fc.dt * cfg.frame_every;
    out.ramp = stepper.ramp_duration();
    out.damping_cells = fc.damping_cells;

    if (cfg.front_margin < 0) throw Error("switch_on_scenario: front margin must be non-negative");
    const double limit = free_radius(fc.grid, src.center, fc.damping_cells) - cfg.front_margin * fc.grid.h();
    FdtdState s = stepper.initial_state(0.0);
    out.frames.push_back(s.potentials);
    const long steps = std::lround(std::ceil(cfg.t_end / fc.dt - 1e-9));
    for (long n = 0; n < steps; ++n) {
        const double t_next = s.potentials.time + fc.dt;
        const double front = src.radius + fc.c * (t_next - src.t_on);
        if (front >= limit) {
            out.truncated = true;
            out.warnings.push_back("front nears the damping layer at t = " + std::to_string(t_next) +
                                   "; series truncated before t_end = " + std::to_string(cfg.t_end));
            break;
        }
        stepper.advance(s);
        if (s.step % cfg.frame_every == 0) out.frames.push_back(s.potentials);
    }
    return out;
}

FrameSeries coulomb_companion(const FrameSeries& series, const CgOptions& cg) {
    FrameSeries out = series;
    out.frames.clear();
    out.frames.reserve(series.frames.size());
    std::optional<ScalarField2> guess;
    for (const auto& f : series.frames) {
        CoulombOptions opt;
        opt.cg = cg;
        if (opt.cg.reference == 0.0) {
            // div A of a Lorenz run with a charge-free source is rounding noise;
            // measure the solve against the natural size of div A instead
            const NormMask all(f.grid(), 0, 0);
            opt.cg.reference = std::max(max_abs(f.a, all), max_abs(*f.a_prev, all)) / f.grid().h();
        }
        if (guess) opt.guess = &*guess;
        auto proj = coulomb_project(f, opt);
        guess = std::move(proj.chi);
        out.frames.push_back(std::move(proj.state));
    }
    return out;
}

std::string to_string(Channel ch) {
    switch (ch) {
        case Channel::potential_a: return "A";
        case Channel::potential_phi: return "phi";
        case Channel::field_e: return "E";
        case Channel::field_b: return "Bz";
    }
    return "A";
}

namespace {

std::vector<double> magnitude(const PotentialState& f, Channel ch) {
    const std::size_t n = f.grid().size();
    std::vector<double> m(n);
    switch (ch) {
        case Channel::potential_a:
            for (std::size_t k = 0; k < n; ++k) m[k] = std::hypot(f.a.x[k], f.a.y[k]);
            break;
        case Channel::potential_phi:
            for (std::size_t k = 0; k < n; ++k) m[k] = std::abs(f.phi.values[k]);
            break;
        case Channel::field_e: {
            const auto fr = derive_fields(f);
            for (std::size_t k = 0; k < n; ++k) m[k] = std::hypot(fr.e.x[k], fr.e.y[k]);
            break;
        }
        case Channel::field_b: {
            const auto bz = curl_z(f.a);
            for (std::size_t k = 0; k < n; ++k) m[k] = std::abs(bz.values[k]);
            break;
        }
    }
    return m;
}

double ring_max(const Grid2& g, const std::vector<double>& m, Vec2 center, double r) {
    const double half = 0.5 * g.h();
    const int i0 = std::max(0, static_cast<int>(std::floor((center.x - r - g.h() - g.x0) / g.dx)));
    const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((center.x + r + g.h() - g.x0) / g.dx)));
    const int j0 = std::max(0, static_cast<int>(std::floor((center.y - r - g.h() - g.y0) / g.dy)));
    const int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((center.y + r + g.h() - g.y0) / g.dy)));
    double best = 0.0;
    bool any = false;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            if (std::abs(norm(g.point(i, j) - center) - r) > half) continue;
            best = std::max(best, m[g.index(i, j)]);
            any = true;
        }
    }
    if (!any) throw Error("probe: no grid nodes near radius " + std::to_string(r));
    return best;
}

std::vector<std::vector<double>> probe_histories(const FrameSeries& series, Channel ch,
                                                 const std::vector<double>& radii) {
    std::vector<std::vector<double>> h(radii.size());
    for (const auto& f : series.frames) {
        const auto m = magnitude(f, ch);
        for (std::size_t p = 0; p < radii.size(); ++p)
            h[p].push_back(ring_max(f.grid(), m, series.source.center, radii[p]));
    }
    return h;
}

double crossing_time(const std::vector<double>& t, const std::vector<double>& v, double level) {
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (v[n] < level) continue;
        if (n == 0) return t[0];
        const double frac = (level - v[n - 1]) / (v[n] - v[n - 1]);
        return t[n - 1] + frac * (t[n] - t[n - 1]);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

struct LineFit {
    double slope{0.0};
    double slope_stderr{0.0};
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    if (x.size() > 2) {
        double ssr = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double e = y[k] - (my + f.slope * (x[k] - mx));
            ssr += e * e;
        }
        f.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
    }
    return f;
}

}  // namespace

double probe_value(const PotentialState& frame, Channel ch, Vec2 center, double r, double /*c*/) {
    return ring_max(frame.grid(), magnitude(frame, ch), center, r);
}

std::vector<double> probe_history(const FrameSeries& series, Channel ch, double r) {
    return probe_histories(series, ch, {r}).front();
}

LocalityReport signal_locality_report(const FrameSeries& series, const std::vector<double>& radii, double threshold,
                                      Channel ch, const std::string& gauge) {
    if (series.frames.size() < 2) throw Error("signal_locality_report: need at least 2 frames");
    if (radii.size() < 2) throw Error("signal_locality_report: need at least 2 probe radii");
    if (!(threshold > 0.0 && threshold < 1.0)) throw Error("signal_locality_report: threshold must lie in (0, 1)");
    const Grid2& g = series.grid();
    const double limit = free_radius(g, series.source.center, series.damping_cells);
    for (double r : radii)
        if (r + g.h() > limit)
            throw Error("signal_locality_report: probe radius " + std::to_string(r) + " lies in the damping layer");

    const auto times = series.times();
    const auto hist = probe_histories(series, ch, radii);
    double first_post = times.back();
    for (double t : times)
        if (t > series.source.t_on) {
            first_post = t;
            break;
        }

    LocalityReport rep;
    rep.gauge = gauge;
    rep.channel = ch;
    rep.threshold = threshold;
    rep.sensitivity_thresholds = {0.005, 0.01, 0.02};

    auto arrivals = [&](double thr) {
        std::vector<double> t_arr;
        for (std::size_t p = 0; p < radii.size(); ++p) {
            const double peak = *std::max_element(hist[p].begin(), hist[p].end());
            if (!(peak > 0.0))
                throw Error("signal_locality_report: channel " + to_string(ch) + " never rises at radius " +
                            std::to_string(radii[p]));
            t_arr.push_back(crossing_time(times, hist[p], thr * peak));
        }
        return t_arr;
    };
    auto speed_of = [&](const std::vector<double>& t_arr, double* stderr_out) {
        const LineFit f = fit_line(radii, t_arr);
        if (!(f.slope > 0.0)) {
            if (stderr_out) *stderr_out = 0.0;
            return std::numeric_limits<double>::infinity();
        }
        if (stderr_out) *stderr_out = f.slope_stderr / (f.slope * f.slope);
        return 1.0 / f.slope;
    };

    const auto t_arr = arrivals(threshold);
    bool all_instant = true;
    for (std::size_t p = 0; p < radii.size(); ++p) {
        ArrivalRecord r;
        r.radius = radii[p];
        r.t_arrival = t_arr[p];
        r.threshold = threshold;
        r.gauge = gauge;
        r.flag = t_arr[p] <= first_post + 1e-9 * series.step_dt ? ArrivalFlag::instantaneous : ArrivalFlag::arrived;
        all_instant = all_instant && r.flag == ArrivalFlag::instantaneous;
        rep.records.push_back(r);
    }
    rep.instantaneous = all_instant;
    rep.fitted_speed = speed_of(t_arr, &rep.speed_stderr);
    for (double thr : rep.sensitivity_thresholds) rep.sensitivity_speeds.push_back(speed_of(arrivals(thr), nullptr));
    return rep;
}

double channel_peak(const FrameSeries& series, Channel ch) {
    const NormMask mask(series.grid(), 2, series.damping_cells);
    double peak = 0.0;
    for (const auto& f : series.frames) {
        const auto m = magnitude(f, ch);
        for (std::size_t k = 0; k < m.size(); ++k)
            if (mask.at(k)) peak = std::max(peak, m[k]);
    }
    return peak;
}

std::optional<double> first_exceedance(const FrameSeries& series, Channel ch, double r, double floor) {
    const auto h = probe_history(series, ch, r);
    for (std::size_t n = 0; n < h.size(); ++n)
        if (h[n] > floor) return series.frames[n].time;
    return std::nullopt;
}

NormMask vacuum_mask(const FrameSeries& series) {
    NormMask m(series.grid(), 2, series.damping_cells);
    m.exclude_disk(series.source.center, series.source.radius + 3.0 * series.grid().h());
    return m;
}

namespace {

void require_uniform(const FrameSeries& series) {
    if (series.frames.size() < 3) throw Error("wave diagnostics: need at least 3 frames");
    const auto t = series.times();
    const double d = t[1] - t[0];
    for (std::size_t n = 1; n < t.size(); ++n)
        if (std::abs(t[n] - t[n - 1] - d) > 1e-9 * d) throw Error("wave diagnostics: frames are not uniformly spaced");
}

struct Components {
    std::vector<ScalarField2> parts;
};

Components components(const PotentialState& f, Channel ch) {
    Components c;
    switch (ch) {
        case Channel::potential_a: {
            ScalarField2 ax(f.grid(), f.time), ay(f.grid(), f.time);
            ax.values = f.a.x;
            ay.values = f.a.y;
            c.parts = {std::move(ax), std::move(ay)};
            break;
        }
        case Channel::potential_phi: c.parts = {f.phi}; break;
        case Channel::field_e: {
            const auto fr = derive_fields(f);
            ScalarField2 ex(f.grid(), fr.e.time), ey(f.grid(), fr.e.time);
            ex.values = fr.e.x;
            ey.values = fr.e.y;
            c.parts = {std::move(ex), std::move(ey)};
            break;
        }
        case Channel::field_b: c.parts = {curl_z(f.a)}; break;
    }
    return c;
}

}  // namespace

std::vector<double> wave_residual(const FrameSeries& series, Channel ch) {
    require_uniform(series);
    const NormMask mask = vacuum_mask(series);
    const auto t = series.times();
    const double d = t[1] - t[0];
    const double c2 = series.c * series.c;
    std::vector<double> out;
    Components prev = components(series.frames[0], ch);
    Components cur = components(series.frames[1], ch);
    for (std::size_t n = 1; n + 1 < series.frames.size(); ++n) {
        Components next = components(series.frames[n + 1], ch);
        std::vector<double> r2(series.grid().size(), 0.0);
        for (std::size_t p = 0; p < cur.parts.size(); ++p) {
            const auto lap = laplacian(cur.parts[p], LaplacianStencil::five_point);
            for (std::size_t k = 0; k < r2.size(); ++k) {
                const double utt =
                    (next.parts[p].values[k] - 2.0 * cur.parts[p].values[k] + prev.parts[p].values[k]) / (d * d);
                const double r = utt - c2 * lap.values[k];
                r2[k] += r * r;
            }
        }
        double m = 0.0;
        for (std::size_t k = 0; k < r2.size(); ++k)
            if (mask.at(k)) m = std::max(m, std::sqrt(r2[k]));
        out.push_back(m);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return out;
}

std::vector<double> laplace_residual(const FrameSeries& series) {
    const NormMask mask = vacuum_mask(series);
    std::vector<double> out;
    for (const auto& f : series.frames) out.push_back(max_abs(laplacian(f.phi, LaplacianStencil::five_point), mask));
    return out;
}

std::vector<double> lorenz_history(const FrameSeries& series) {
    const NormMask mask(series.grid(), 2, series.damping_cells);
    std::vector<double> out;
    for (const auto& f : series.frames) out.push_back(max_abs(lorenz_residual(f, series.c), mask));
    return out;
}

std::vector<double> confinement_ratios(const FrameSeries& series) {
    const Grid2& g = series.grid();
    const NormMask outer = NormMask(g, 2, series.damping_cells)
                               .exclude_disk(series.source.center, series.source.radius + 2.0 * g.h());
    NormMask inner(g, 0, 0);
    inner.keep_disk(series.source.center, series.source.radius);
    std::vector<double> out;
    for (const auto& f : series.frames) {
        const auto bz = curl_z(f.a);
        const double in = max_abs(bz, inner);
        const double ex = max_abs(bz, outer);
        if (in == 0.0) {
            out.push_back(ex == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        } else {
            out.push_back(ex / in);
        }
    }
    return out;
}

}  // namespace gauge_lab
