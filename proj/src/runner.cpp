#include "gauge_lab/runner.hpp"

#include "gauge_lab/analytic.hpp"
#include "gauge_lab/field_io.hpp"
#include "gauge_lab/gauge.hpp"
#include "gauge_lab/interferometry.hpp"
#include "gauge_lab/operators.hpp"
#include "gauge_lab/paths.hpp"
#include "gauge_lab/propagation.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace gauge_lab {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round12(v);
}

ordered_json metric_json(const MetricValue& m) {
    if (const auto* d = std::get_if<double>(&m)) return number(*d);
    return std::get<std::string>(m);
}

class Run {
public:
    Run(const Scenario& s, fs::path out, const RunOptions& opt, RunReport& report)
        : s_(s), out_(std::move(out)), opt_(opt), report_(report) {}

    const Scenario& scenario() const { return s_; }
    std::uint64_t seed() const {
        if (opt_.seed) return *opt_.seed;
        return static_cast<std::uint64_t>(s_.integer_or("experiment", "seed", 12345));
    }

    void metric(const std::string& name, double v) { report_.metrics[name] = v; }
    void label(const std::string& name, std::string v) { report_.metrics[name] = std::move(v); }
    void warn(std::string w) { report_.warnings.push_back(std::move(w)); }

    /// Stream for an artifact, or nullptr when artifacts are off.
    std::unique_ptr<std::ofstream> artifact(const std::string& name) {
        if (out_.empty() || !opt_.write_artifacts) return nullptr;
        auto os = std::make_unique<std::ofstream>(out_ / name);
        if (!*os) throw RunError("cannot write artifact " + (out_ / name).string());
        os->precision(12);
        report_.artifacts.push_back(name);
        return os;
    }

    template <class Field>
    void field_artifact(const std::string& name, const Field& f) {
        if (auto os = artifact(name)) write_csv(*os, f);
    }

private:
    const Scenario& s_;
    fs::path out_;
    RunOptions opt_;
    RunReport& report_;
};

// ---- declarations --------------------------------------------------------

SolenoidSpec solenoid_of(const Scenario& s) {
    SolenoidSpec sol;
    sol.center = s.vec2_or("solenoid", "center", {});
    sol.radius = s.real_or("solenoid", "radius", 0.0);
    sol.flux = s.real("solenoid", "flux");
    sol.t_on = s.real_or("solenoid", "t_on", 0.0);
    sol.ramp = s.real_or("solenoid", "ramp", 0.0);
    return sol;
}

bool finite_model(const Scenario& s) { return s.text_or("solenoid", "model", "thin") == "finite"; }

/// Closed-form A of the declared solenoid. The thin form is cut to zero within
/// `core` of the axis so it can be sampled on a grid.
AnalyticVector solenoid_a(const Scenario& s, double core = 0.0) {
    const SolenoidSpec sol = solenoid_of(s);
    if (finite_model(s)) return [sol](Vec2 p) { return finite_solenoid(p, sol).a; };
    return [sol, core](Vec2 p) {
        if (norm(p - sol.center) <= core) return Vec2{};
        return thin_solenoid_A(p, sol);
    };
}

InterferometerSpec interferometer_of(const Scenario& s) {
    InterferometerSpec spec;
    spec.kappa = s.real_or("physics", "kappa", 1.0);
    spec.lambda_b = s.real_or("physics", "lambda_b", 1.0);
    spec.l = s.real_or("physics", "l", 1.0);
    spec.d = s.real_or("physics", "d", 1.0);
    spec.validate();
    return spec;
}

Path path_of(const Scenario& s, const std::string& id) {
    const std::string sec = "path." + id;
    const std::string type = s.text_or(sec, "type", s.has(sec, "vertices") ? "polyline" : "circle");
    if (type == "polyline") {
        std::vector<Vec2> v;
        for (const auto& t : s.tuples(sec, "vertices")) v.push_back({t[0], t[1]});
        if (s.text_or(sec, "closed", "false") == "true") {
            if (!(v.front() == v.back())) v.push_back(v.front());
            return Path::loop(std::move(v));
        }
        return Path::open(std::move(v));
    }
    const Vec2 c = s.vec2_or(sec, "center", s.vec2_or("solenoid", "center", {}));
    const double r = s.real(sec, "radius");
    const int segments = static_cast<int>(s.integer_or(sec, "segments", 256));
    if (type == "arc") return Path::arc(c, r, s.real(sec, "theta0"), s.real(sec, "theta1"), segments);
    return Path::circle(c, r, segments, static_cast<int>(s.integer_or(sec, "turns", 1)));
}

GaugeChi chi_of(const Scenario& s, const std::string& id) {
    const std::string sec = "gauge." + id;
    const std::string type = s.text(sec, "type");
    const double c = s.real_or("physics", "c", 1.0);
    if (type == "polynomial") {
        std::vector<PolynomialTerm> terms;
        for (const auto& t : s.tuples(sec, "terms"))
            terms.push_back({t[0], static_cast<int>(t[1]), static_cast<int>(t[2]), static_cast<int>(t[3])});
        return GaugeChi::polynomial(std::move(terms));
    }
    if (type == "plane_wave")
        return GaugeChi::plane_wave(s.vec2(sec, "k"), s.real_or(sec, "amplitude", 1.0), s.real_or(sec, "phase", 0.0), c);
    if (type == "polar")
        return GaugeChi::polar_angle(s.real_or(sec, "flux", s.real("solenoid", "flux")),
                                     s.vec2_or(sec, "center", s.vec2_or("solenoid", "center", {})));
    throw RunError("gauge '" + id + "' of type '" + type + "' is not a scalar gauge function");
}

WideGaugeElement wide_of(const Scenario& s, const std::string& id, const Grid2& g) {
    const std::string sec = "gauge." + id;
    const std::string field = s.text_or(sec, "field", "solenoid");
    const double amp = s.real_or(sec, "amplitude", 1.0);
    AnalyticVector c;
    if (field == "solenoid") {
        SolenoidSpec sol = solenoid_of(s);
        sol.flux = s.real_or(sec, "flux", sol.flux);
        sol.center = s.vec2_or(sec, "center", sol.center);
        c = [sol](Vec2 p) { return norm(p - sol.center) > 0.0 ? thin_solenoid_A(p, sol) : Vec2{}; };
    } else if (field == "gradient_xy") {
        c = [amp](Vec2 p) { return Vec2{amp * p.y, amp * p.x}; };
    } else {
        c = [amp](Vec2 p) { return Vec2{-0.5 * amp * p.y, 0.5 * amp * p.x}; };
    }
    return WideGaugeElement::sampled(g, c, s.real_or(sec, "c0", 0.0));
}

// ---- ab-phase -------------------------------------------------------------

Path random_loop(std::mt19937_64& rng, Vec2 center, double r_lo, double r_hi, int winding) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(6, 16);
    std::vector<Vec2> v;
    if (winding == 0) {
        const double a = 2.0 * kPi * u(rng);
        const Vec2 c = center + Vec2{3.0 * r_hi * std::cos(a), 3.0 * r_hi * std::sin(a)};
        const int n = count(rng);
        const double th0 = 2.0 * kPi * u(rng);
        for (int k = 0; k < n; ++k) {
            const double th = th0 + 2.0 * kPi * (k + 0.4 * (u(rng) - 0.5)) / n;
            const double r = r_hi * (0.2 + 0.8 * u(rng));
            v.push_back(c + Vec2{r * std::cos(th), r * std::sin(th)});
        }
    } else {
        const int turns = std::abs(winding);
        const int n = count(rng) * turns;
        const double th0 = 2.0 * kPi * u(rng);
        for (int k = 0; k < n; ++k) {
            const double th = th0 + 2.0 * kPi * turns * (k + 0.4 * (u(rng) - 0.5)) / n;
            const double r = r_lo + (r_hi - r_lo) * u(rng);
            v.push_back(center + Vec2{r * std::cos(th), r * std::sin(th)});
        }
        if (winding < 0) std::reverse(v.begin(), v.end());
    }
    v.push_back(v.front());
    return Path::loop(std::move(v));
}

void run_ab_phase(Run& run) {
    const Scenario& s = run.scenario();
    const SolenoidSpec sol = solenoid_of(s);
    const InterferometerSpec spec = interferometer_of(s);
    const std::string ex = "experiment";

    std::optional<VectorField2> grid_a;
    const bool on_grid = s.text_or(ex, "source", "analytic") == "grid" || s.has(ex, "stokes_loop");
    if (on_grid) {
        const Grid2 g = s.grid();
        grid_a = sample_vector(g, solenoid_a(s, 0.5 * g.h()));
    }
    const bool use_grid = s.text_or(ex, "source", "analytic") == "grid";
    const VectorSource a = use_grid ? VectorSource(*grid_a) : VectorSource(solenoid_a(s));

    if (s.has(ex, "paths")) {
        const auto ids = s.words(ex, "paths");
        const Path p1 = path_of(s, ids[0]);
        const Path p2 = path_of(s, ids[1]);
        const PhaseResult r = loop_phase_diff(spec, a, p1, p2);
        const int w = winding_number(p1.then(p2.reversed()), sol.center);
        const double expected = -spec.kappa * sol.flux * w;
        run.metric("delta_s", r.delta_s_over_hbar);
        run.metric("expected_delta_s", expected);
        run.metric("delta_s_error", std::abs(r.delta_s_over_hbar - expected));
        if (auto os = run.artifact("phase.json")) {
            ordered_json j;
            j["paths"] = ids;
            j["path_integrals"] = ordered_json::array();
            for (double v : r.path_integrals) j["path_integrals"].push_back(number(v));
            j["delta_s_over_hbar"] = number(r.delta_s_over_hbar);
            j["flux_equivalent"] = number(r.flux_equivalent);
            j["fringe_shift"] = number(fringe_shift(spec, r.flux_equivalent));
            *os << j.dump(2) << '\n';
        }
    }

    const double flux_scale = std::max(std::abs(sol.flux), std::numeric_limits<double>::min());
    if (s.has(ex, "loops")) {
        double worst = 0.0;
        auto os = run.artifact("loops.csv");
        if (os) *os << "id,winding,value,expected\n";
        for (const auto& id : s.words(ex, "loops")) {
            const Path loop = path_of(s, id);
            if (!loop.closed()) throw RunError("loop '" + id + "' is not closed");
            const double v = line_integral_A(a, loop);
            const int w = winding_number(loop, sol.center);
            worst = std::max(worst, std::abs(v - w * sol.flux) / flux_scale);
            run.metric("loop." + id, v);
            if (os) *os << id << ',' << w << ',' << v << ',' << w * sol.flux << '\n';
        }
        run.metric("loop_max_error", worst);
    }

    if (s.has(ex, "random_loops")) {
        std::mt19937_64 rng(run.seed());
        std::uniform_int_distribution<int> wind(-2, 2);
        const double scale = std::max(sol.radius, 1.0);
        const double r_lo = sol.radius + 0.5 * scale;
        const double r_hi = sol.radius + 3.0 * scale;
        double worst = 0.0;
        auto os = run.artifact("random_loops.csv");
        if (os) *os << "index,winding,vertices,value,expected,rel_error\n";
        const long n = s.integer(ex, "random_loops");
        for (long k = 0; k < n; ++k) {
            const int w = wind(rng);
            const Path loop = random_loop(rng, sol.center, r_lo, r_hi, w);
            if (winding_number(loop, sol.center) != w) throw RunError("random loop generator produced a wrong winding");
            const double v = line_integral_A(VectorSource(AnalyticVector([sol](Vec2 p) { return thin_solenoid_A(p, sol); })), loop);
            const double err = std::abs(v - w * sol.flux) / flux_scale;
            worst = std::max(worst, err);
            if (os) *os << k << ',' << w << ',' << loop.vertices().size() << ',' << v << ',' << w * sol.flux << ',' << err << '\n';
        }
        run.metric("random_max_rel_error", worst);
    }

    if (s.has(ex, "stokes_loop")) {
        const Path loop = path_of(s, s.text(ex, "stokes_loop"));
        const ScalarField2 bz = curl_z(*grid_a);
        const double surface = flux_via_stokes(bz, loop);
        const double line = path_integral(VectorSource(*grid_a), loop);
        run.metric("stokes_flux", surface);
        run.metric("stokes_line", line);
        run.metric("stokes_rel_diff", std::abs(surface - line) / std::max(std::abs(line), flux_scale * 1e-300));
        run.field_artifact("bz.csv", bz);
    }
}

// ---- gauge-classify -------------------------------------------------------

PotentialState state_of(const Scenario& s, const std::string& id, const Grid2& g) {
    const std::string sec = "state." + id;
    PotentialState st = PotentialState::zero(g);
    if (s.text_or(sec, "base", "zero") == "solenoid") {
        const AnalyticVector a = solenoid_a(s);
        st = PotentialState::static_from(sample_vector(g, solenoid_a(s, 0.5 * g.h())));
        st.a_exact = a;
    }
    if (s.text_or(sec, "perturb", "none") == "bump") {
        const double amp = s.real_or(sec, "perturb_amplitude", 0.1);
        const Vec2 p0 = s.vec2_or("solenoid", "center", {}) + Vec2{0.25 * (g.x_max() - g.x0), 0.0};
        const double w = 0.08 * (g.x_max() - g.x0);
        auto bump = [amp, p0, w](Vec2 p) {
            const Vec2 d = p - p0;
            return Vec2{0.0, amp * p.x * std::exp(-dot(d, d) / (w * w))};
        };
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) st.a.set(i, j, st.a.at(i, j) + bump(g.point(i, j)));
        if (st.a_exact) st.a_exact = [base = st.a_exact, bump](Vec2 p) { return base(p) + bump(p); };
    }
    if (s.has(sec, "gauges")) {
        for (const auto& gid : s.words(sec, "gauges")) {
            if (s.text("gauge." + gid, "type") == "wide")
                st = apply_wide(st, wide_of(s, gid, g));
            else
                st = apply_narrow(st, chi_of(s, gid));
        }
    }
    return st;
}

void run_gauge_classify(Run& run) {
    const Scenario& s = run.scenario();
    const Grid2 g = s.grid();
    std::vector<ClassifyLoop> loops;
    for (const auto& id : s.words("experiment", "loops")) loops.push_back({id, path_of(s, id)});
    ClassifyOptions opt;
    opt.c = s.real_or("physics", "c", 1.0);

    ordered_json verdicts = ordered_json::array();
    for (const auto& pair : s.words("experiment", "pairs")) {
        const auto slash = pair.find('/');
        const auto s1 = state_of(s, pair.substr(0, slash), g);
        const auto s2 = state_of(s, pair.substr(slash + 1), g);
        const EquivalenceVerdict v = classify_equivalence(s1, s2, loops, opt);
        run.label(pair + ".label", to_string(v.label));
        run.metric(pair + ".curl_residual", v.curl_residual);
        run.metric(pair + ".potential_residual", v.potential_residual);
        run.metric(pair + ".scalar_residual", v.scalar_residual);
        run.metric(pair + ".tolerance", v.tolerance);
        ordered_json j;
        j["pair"] = pair;
        j["label"] = to_string(v.label);
        j["curl_residual"] = number(v.curl_residual);
        j["potential_residual"] = number(v.potential_residual);
        j["scalar_residual"] = number(v.scalar_residual);
        j["tolerance"] = number(v.tolerance);
        j["loop_integrals"] = ordered_json::array();
        for (const auto& li : v.loop_integrals) {
            run.metric(pair + ".loop." + li.id, li.value);
            j["loop_integrals"].push_back({{"id", li.id}, {"winding", li.winding}, {"value", number(li.value)}});
        }
        j["lorenz_residuals"] = ordered_json::array();
        for (const auto& r : v.lorenz_residuals) j["lorenz_residuals"].push_back(r ? number(*r) : ordered_json(nullptr));
        verdicts.push_back(std::move(j));
    }
    if (auto os = run.artifact("verdicts.json")) *os << verdicts.dump(2) << '\n';
}

// ---- time-domain runs -----------------------------------------------------

SwitchOnConfig switch_on_of(const Scenario& s) {
    SwitchOnConfig cfg;
    cfg.fdtd.grid = s.grid();
    cfg.fdtd.grid.excluded.reset();
    cfg.fdtd.c = s.real_or("physics", "c", 1.0);
    cfg.fdtd.dt = s.real("fdtd", "dt");
    cfg.fdtd.cfl_max = s.real_or("fdtd", "cfl_max", 0.5);
    cfg.fdtd.damping_cells = static_cast<int>(s.integer_or("fdtd", "damping_cells", 0));
    cfg.fdtd.damping_strength = s.real_or("fdtd", "damping_strength", 12.0);
    cfg.fdtd.source = solenoid_of(s);
    cfg.t_end = s.real("fdtd", "t_end");
    cfg.frame_every = static_cast<int>(s.integer_or("fdtd", "frame_every", 1));
    cfg.front_margin = static_cast<int>(s.integer_or("fdtd", "front_margin", 16));
    return cfg;
}

ordered_json locality_json(const LocalityReport& r) {
    ordered_json j;
    j["gauge"] = r.gauge;
    j["channel"] = to_string(r.channel);
    j["threshold"] = number(r.threshold);
    j["probes"] = ordered_json::array();
    for (const auto& p : r.records)
        j["probes"].push_back({{"radius", number(p.radius)},
                               {"t_arrival", number(p.t_arrival)},
                               {"flag", p.flag == ArrivalFlag::instantaneous ? "INSTANTANEOUS" : "ARRIVED"}});
    j["fitted_speed"] = number(r.fitted_speed);
    j["stderr"] = number(r.speed_stderr);
    j["instantaneous"] = r.instantaneous;
    j["sensitivity"] = ordered_json::array();
    for (std::size_t k = 0; k < r.sensitivity_thresholds.size(); ++k)
        j["sensitivity"].push_back(
            {{"threshold", number(r.sensitivity_thresholds[k])}, {"fitted_speed", number(r.sensitivity_speeds[k])}});
    return j;
}

std::size_t first_post_ramp(const FrameSeries& series) {
    const double ramp_end = series.source.t_on + series.ramp;
    for (std::size_t n = 0; n < series.frames.size(); ++n)
        if (series.frames[n].time >= ramp_end - 1e-9) return n;
    throw RunError("the run ends before the source ramp does");
}

void run_propagate(Run& run) {
    const Scenario& s = run.scenario();
    const SwitchOnConfig cfg = switch_on_of(s);
    const FrameSeries series = switch_on_scenario(cfg);
    for (const auto& w : series.warnings) run.warn(w);
    const auto radii = s.reals("probes", "radii");
    const double threshold = s.real_or("probes", "threshold", 0.01);
    const double c = cfg.fdtd.c;

    const LocalityReport ra = signal_locality_report(series, radii, threshold, Channel::potential_a, "LORENZ");
    const LocalityReport re = signal_locality_report(series, radii, threshold, Channel::field_e, "FIELDS");
    run.metric("speed_a", ra.fitted_speed);
    run.metric("speed_e", re.fitted_speed);
    run.metric("speed_a_error", std::abs(ra.fitted_speed / c - 1.0));
    run.metric("speed_e_error", std::abs(re.fitted_speed / c - 1.0));
    run.metric("speed_a_stderr", ra.speed_stderr);
    run.metric("speed_e_stderr", re.speed_stderr);

    const auto lorenz = lorenz_history(series);
    const auto conf = confinement_ratios(series);
    const std::size_t n0 = first_post_ramp(series);
    const double l0 = lorenz[n0];
    const double lmax = *std::max_element(lorenz.begin() + static_cast<std::ptrdiff_t>(n0), lorenz.end());
    double amax = 0.0;
    const NormMask mask(series.grid());
    for (const auto& f : series.frames) amax = std::max(amax, max_abs(f.a, mask));
    const double steps = std::round(series.frames.back().time / cfg.fdtd.dt);
    const double rounding = std::numeric_limits<double>::epsilon() * amax / series.grid().h() * std::sqrt(steps);
    run.metric("lorenz_growth_raw", l0 > 0.0 ? lmax / l0 : std::numeric_limits<double>::infinity());
    run.metric("lorenz_growth", lmax / std::max(l0, rounding));
    run.metric("lorenz_max", lmax);
    run.metric("confinement_max", *std::max_element(conf.begin() + static_cast<std::ptrdiff_t>(n0), conf.end()));
    run.metric("truncated", series.truncated ? 1.0 : 0.0);
    run.metric("frames", static_cast<double>(series.frames.size()));
    if (s.has("probes", "late_loop_radius")) {
        const Path loop = Path::circle(series.source.center, s.real("probes", "late_loop_radius"), 512);
        const double v = path_integral(VectorSource(series.frames.back().a), loop);
        run.metric("late_loop_error", std::abs(v - series.source.flux) / std::abs(series.source.flux));
    }

    if (auto os = run.artifact("arrivals.json")) {
        ordered_json j;
        j["reports"] = {locality_json(ra), locality_json(re)};
        *os << j.dump(2) << '\n';
    }
    if (auto os = run.artifact("history.csv")) {
        *os << "t,lorenz_residual,confinement_ratio\n";
        for (std::size_t n = 0; n < series.frames.size(); ++n)
            *os << series.frames[n].time << ',' << lorenz[n] << ',' << conf[n] << '\n';
    }
    run.field_artifact("a_final.csv", series.frames.back().a);
    run.field_artifact("bz_final.csv", derive_fields(series.frames.back()).bz);
}

void run_locality(Run& run) {
    const Scenario& s = run.scenario();
    const SwitchOnConfig cfg = switch_on_of(s);
    const FrameSeries lorenz = switch_on_scenario(cfg);
    for (const auto& w : lorenz.warnings) run.warn(w);
    const FrameSeries coulomb = coulomb_companion(lorenz);
    const auto radii = s.reals("probes", "radii");
    const double threshold = s.real_or("probes", "threshold", 0.01);
    const double c = cfg.fdtd.c;
    const SolenoidSpec& src = lorenz.source;

    const LocalityReport rl = signal_locality_report(lorenz, radii, threshold, Channel::potential_a, "LORENZ");
    const LocalityReport rc = signal_locality_report(coulomb, radii, threshold, Channel::potential_a, "COULOMB");
    run.metric("speed_lorenz", rl.fitted_speed);
    run.metric("speed_lorenz_error", std::abs(rl.fitted_speed / c - 1.0));
    run.metric("speed_coulomb", rc.fitted_speed);
    run.metric("coulomb_instantaneous", rc.instantaneous ? 1.0 : 0.0);

    const double floor = s.real_or("probes", "noise_floor", 1e-9) * channel_peak(lorenz, Channel::potential_a);
    int coulomb_early = 0;
    int lorenz_early = 0;
    auto os = run.artifact("first_exceedance.csv");
    if (os) *os << "radius,t_light_limit,t_lorenz,t_coulomb\n";
    for (double r : radii) {
        const double limit = src.t_on + (r - src.radius) / c - 3.0 * lorenz.ramp;
        const auto tl = first_exceedance(lorenz, Channel::potential_a, r, floor);
        const auto tc = first_exceedance(coulomb, Channel::potential_a, r, floor);
        const bool lorenz_quiet = !tl || *tl >= limit;
        if (!lorenz_quiet) ++lorenz_early;
        if (tc && *tc < limit && lorenz_quiet) ++coulomb_early;
        if (os) *os << r << ',' << limit << ',' << (tl ? *tl : kNaN) << ',' << (tc ? *tc : kNaN) << '\n';
    }
    run.metric("coulomb_pre_front", coulomb_early);
    run.metric("lorenz_pre_front", lorenz_early);

    // largest probe value ahead of the light-cone limit, relative to the peak
    const double peak_a = channel_peak(lorenz, Channel::potential_a);
    auto precursor = [&](const FrameSeries& series) {
        double worst = 0.0;
        for (double r : radii) {
            const double limit = src.t_on + (r - src.radius) / c - 3.0 * lorenz.ramp;
            const auto hist = probe_history(series, Channel::potential_a, r);
            for (std::size_t n = 0; n < hist.size(); ++n)
                if (series.frames[n].time < limit) worst = std::max(worst, hist[n] / peak_a);
        }
        return worst;
    };
    run.metric("lorenz_precursor_max", precursor(lorenz));
    run.metric("coulomb_precursor_max", precursor(coulomb));

    const Grid2& g = lorenz.grid();
    const NormMask mask(g, 2, lorenz.damping_cells);
    double diff = 0.0;
    double peak = 0.0;
    double div_max = 0.0;
    double a_max = 0.0;
    for (std::size_t n = 0; n < lorenz.frames.size(); ++n) {
        const FieldFrame fl = derive_fields(lorenz.frames[n]);
        const FieldFrame fc = derive_fields(coulomb.frames[n]);
        diff = std::max({diff, max_abs_difference(fl.e, fc.e, mask), max_abs_difference(fl.bz, fc.bz, mask)});
        peak = std::max({peak, max_abs(fl.e, mask), max_abs(fl.bz, mask)});
        div_max = std::max(div_max, max_abs(div(coulomb.frames[n].a), NormMask(g)));
        a_max = std::max(a_max, max_abs(lorenz.frames[n].a, NormMask(g)));
    }
    run.metric("field_agreement", peak > 0.0 ? diff / peak : diff);
    run.metric("coulomb_divergence_max", a_max > 0.0 ? div_max * g.h() / a_max : div_max);
    run.metric("frames", static_cast<double>(lorenz.frames.size()));

    if (auto js = run.artifact("arrivals.json")) {
        ordered_json j;
        j["reports"] = {locality_json(rl), locality_json(rc)};
        *js << j.dump(2) << '\n';
    }
}

// ---- pattern --------------------------------------------------------------

void run_pattern(Run& run) {
    const Scenario& s = run.scenario();
    const InterferometerSpec spec = interferometer_of(s);
    const double half = s.real_or("pattern", "screen_half_width", 0.5 * spec.lambda_b * spec.l / spec.d);
    const long n = s.integer_or("pattern", "screen_points", 2001);
    const auto fluxes = s.has("pattern", "fluxes") ? s.reals("pattern", "fluxes")
                                                   : std::vector<double>{s.real("solenoid", "flux")};
    std::vector<double> xs(static_cast<std::size_t>(n));
    const double cell = 2.0 * half / static_cast<double>(n - 1);
    for (long k = 0; k < n; ++k) xs[static_cast<std::size_t>(k)] = -half + cell * static_cast<double>(k);
    const double period = spec.lambda_b * spec.l / spec.d;

    double worst = 0.0;
    double periodicity = 0.0;
    double largest = 0.0;
    std::size_t show = 0;
    auto sweep = run.artifact("pattern_sweep.csv");
    if (sweep) *sweep << "flux,delta_s,expected_shift,argmax_x,error_cells\n";
    for (std::size_t f = 0; f < fluxes.size(); ++f) {
        const double delta_s = -spec.kappa * fluxes[f];
        const auto intensity = interference_pattern(spec, delta_s, xs);
        const auto shifted = interference_pattern(spec, delta_s + 2.0 * kPi, xs);
        for (std::size_t k = 0; k < xs.size(); ++k) periodicity = std::max(periodicity, std::abs(intensity[k] - shifted[k]));
        const auto top = static_cast<std::size_t>(std::max_element(intensity.begin(), intensity.end()) - intensity.begin());
        const double expected = fringe_shift(spec, fluxes[f]);
        // fringe positions are defined modulo one period
        double d = std::remainder(xs[top] - expected, period);
        const double err = std::abs(d) / cell;
        worst = std::max(worst, err);
        largest = std::max(largest, std::abs(expected));
        if (std::abs(fluxes[f]) >= std::abs(fluxes[show])) show = f;
        if (sweep) *sweep << fluxes[f] << ',' << delta_s << ',' << expected << ',' << xs[top] << ',' << err << '\n';
    }
    run.metric("max_shift_error_cells", worst);
    run.metric("periodicity_error", periodicity);
    run.metric("max_expected_shift", largest);

    if (auto os = run.artifact("pattern.csv")) {
        const double delta_s = -spec.kappa * fluxes[show];
        *os << "# flux " << fluxes[show] << " delta_s " << delta_s << " lambda_b " << spec.lambda_b << " l " << spec.l
            << " d " << spec.d << " kappa " << spec.kappa << '\n';
        *os << "x,intensity\n";
        const auto intensity = interference_pattern(spec, delta_s, xs);
        for (std::size_t k = 0; k < xs.size(); ++k) *os << xs[k] << ',' << intensity[k] << '\n';
    }
}

// ---- gauge-invariance -----------------------------------------------------

struct RatioStats {
    double lo{std::numeric_limits<double>::infinity()};
    double hi{-std::numeric_limits<double>::infinity()};
    int count{0};

    void add(double coarse, double fine, double noise) {
        if (coarse <= noise || fine <= 0.0) return;
        const double r = coarse / fine;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        ++count;
    }
    [[nodiscard]] double min() const { return count ? lo : kNaN; }
    [[nodiscard]] double max() const { return count ? hi : kNaN; }
};

void run_gauge_invariance(Run& run) {
    const Scenario& s = run.scenario();
    const std::string ex = "experiment";
    const SolenoidSpec sol = solenoid_of(s);
    const auto levels = s.integers(ex, "levels");
    const auto family = s.words(ex, "family");
    const double width = s.real_or(ex, "width", 8.0 * std::max(sol.radius, 1.0));
    const double dt_ratio = s.real_or(ex, "dt_ratio", 0.5);
    const double t = s.real_or(ex, "time", 1.0);
    const double kappa = s.real_or("physics", "kappa", 1.0);
    const Path loop = Path::circle(sol.center, s.real(ex, "loop_radius"), 256);
    const AnalyticVector a_closed = solenoid_a(s);
    const std::complex<double> h0 = holonomy(VectorSource(a_closed), loop, kappa);

    std::vector<std::vector<double>> de(family.size()), db(family.size());
    double hol = 0.0;
    for (long n : levels) {
        const double h = width / static_cast<double>(n - 1);
        Grid2 g = Grid2::centered(static_cast<int>(n), static_cast<int>(n), h, sol.center);
        if (sol.radius > 0.0) g.excluded = Disk{sol.center, sol.radius};
        const double dt = dt_ratio * h;
        PotentialState base;
        base.a = sample_vector(g, solenoid_a(s, 0.5 * h), t);
        base.a_prev = base.a;
        base.a_prev->time = t - dt;
        base.phi = ScalarField2(g, t);
        base.phi_prev = ScalarField2(g, t - dt);
        base.time = t;
        base.a_exact = a_closed;
        const FieldFrame f0 = derive_fields(base);
        const NormMask mask = probe_mask(g);
        for (std::size_t m = 0; m < family.size(); ++m) {
            const PotentialState moved = apply_narrow(base, chi_of(s, family[m]));
            const FieldFrame f1 = derive_fields(moved);
            de[m].push_back(max_abs_difference(f0.e, f1.e, mask));
            db[m].push_back(max_abs_difference(f0.bz, f1.bz, mask));
            hol = std::max(hol, std::abs(holonomy(VectorSource(moved.a_exact), loop, kappa) - h0));
        }
    }

    RatioStats er, br;
    double e_max = 0.0;
    double b_max = 0.0;
    constexpr double noise = 1e-10;
    auto os = run.artifact("invariance.csv");
    if (os) {
        *os << "gauge";
        for (long n : levels) *os << ",e_change_" << n << ",b_change_" << n;
        *os << '\n';
    }
    for (std::size_t m = 0; m < family.size(); ++m) {
        for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
            er.add(de[m][k], de[m][k + 1], noise);
            br.add(db[m][k], db[m][k + 1], noise);
        }
        e_max = std::max(e_max, de[m].back());
        b_max = std::max(b_max, db[m].back());
        if (os) {
            *os << family[m];
            for (std::size_t k = 0; k < levels.size(); ++k) *os << ',' << de[m][k] << ',' << db[m][k];
            *os << '\n';
        }
    }
    run.metric("e_change_max", e_max);
    run.metric("b_change_max", b_max);
    run.metric("e_ratio_min", er.min());
    run.metric("e_ratio_max", er.max());
    run.metric("b_ratio_min", br.min());
    run.metric("b_ratio_max", br.max());
    run.metric("holonomy_change_max", hol);
}

// ---- residual-freedom -----------------------------------------------------

void run_residual_freedom(Run& run) {
    const Scenario& s = run.scenario();
    const std::string ex = "experiment";
    SwitchOnConfig cfg = switch_on_of(s);
    const FdtdStepper stepper(cfg.fdtd);
    const double t_mid = s.real_or(ex, "time", 0.5 * cfg.t_end);
    FdtdState st = stepper.initial_state(0.0);
    while (st.potentials.time < t_mid - 0.5 * cfg.fdtd.dt) stepper.advance(st);
    const PotentialState& before = st.potentials;

    const double c = cfg.fdtd.c;
    const Vec2 k = s.vec2(ex, "k");
    const double amp = s.real(ex, "amplitude");
    const GaugeChi chi = residual_lorenz_chi(k, amp, s.real_or(ex, "phase", 0.0), c);
    const PotentialState after = apply_narrow(before, chi);

    const Grid2& g = before.grid();
    const NormMask mask(g);
    const double h = g.h();
    const double dt = cfg.fdtd.dt;
    const double kn = norm(k);
    const double w = chi.omega();

    const double dl = max_abs_difference(lorenz_residual(before, c), lorenz_residual(after, c), mask);
    const double l_bound = 2.0 * amp *
                           (std::pow(kn, 4) * h * h / 3.0 + kn * kn * w * w * dt * dt / 8.0 +
                            std::pow(w, 4) * dt * dt / (24.0 * c * c));
    const FieldFrame f0 = derive_fields(before);
    const FieldFrame f1 = derive_fields(after);
    const double de = max_abs_difference(f0.e, f1.e, mask);
    const double e_bound = 2.0 * amp * (w * std::pow(kn, 3) * h * h / 6.0 + kn * std::pow(w, 3) * dt * dt * (1.0 / 24.0 + 1.0 / 8.0));
    const double dbz = max_abs_difference(f0.bz, f1.bz, mask);
    const double b_bound = amp * std::pow(kn, 4) * h * h / 6.0;

    const double radius = s.real(ex, "loop_radius");
    const Path loop = Path::circle(solenoid_of(s).center, radius, 512);
    const double dh = std::abs(holonomy(VectorSource(after.a), loop) - holonomy(VectorSource(before.a), loop));
    const double h_bound = 2.0 * kPi * radius * h * h * amp * std::pow(kn, 3) / 4.0;

    run.metric("lorenz_change", dl);
    run.metric("lorenz_bound", l_bound);
    run.metric("lorenz_change_ratio", dl / l_bound);
    run.metric("e_change_ratio", de / e_bound);
    run.metric("b_change_ratio", dbz / b_bound);
    run.metric("holonomy_change_ratio", dh / h_bound);
    if (auto os = run.artifact("residual_freedom.csv")) {
        *os << "quantity,change,bound\n";
        *os << "lorenz," << dl << ',' << l_bound << '\n';
        *os << "e," << de << ',' << e_bound << '\n';
        *os << "bz," << dbz << ',' << b_bound << '\n';
        *os << "holonomy," << dh << ',' << h_bound << '\n';
    }
}

// ---- convergence ----------------------------------------------------------

double periodic_wave_error(int n, double length, double c, double t_end) {
    Grid2 g;
    g.nx = g.ny = n;
    g.dx = g.dy = length / n;
    g.x0 = g.y0 = -0.5 * length;
    const Vec2 k{4.0 * kPi / length, 2.0 * kPi / length};
    const double w = c * norm(k);
    const long steps = std::lround(std::ceil(t_end / (0.3 * g.dx / c)));
    FdtdConfig cfg;
    cfg.grid = g;
    cfg.c = c;
    cfg.dt = t_end / static_cast<double>(steps);
    cfg.periodic = true;
    const FdtdStepper stepper(cfg);
    auto wave = [&](double t) { return sample_scalar(g, [&](Vec2 p) { return std::cos(dot(k, p) - w * t); }, t); };
    PotentialState levels = PotentialState::zero(g);
    levels.is_static = false;
    levels.a_exact = nullptr;
    levels.phi = wave(0.0);
    levels.phi_prev = wave(-cfg.dt);
    levels.a_prev = VectorField2(g, -cfg.dt);
    FdtdState st = stepper.make_state(levels);
    for (long m = 0; m < steps; ++m) stepper.advance(st);
    return max_abs_difference(st.potentials.phi, wave(st.potentials.time), NormMask(g, 0));
}

void run_convergence(Run& run) {
    const Scenario& s = run.scenario();
    const std::string ex = "experiment";
    const auto levels = s.integers(ex, "levels");
    const double width = s.real_or(ex, "width", 2.0);
    const double c = s.real_or("physics", "c", 1.0);
    const double t_end = s.real_or(ex, "time", width / c);

    auto f = [](Vec2 p) { return std::sin(2.0 * p.x + 0.3) * std::cos(1.5 * p.y - 0.2); };
    auto grad_f = [](Vec2 p) {
        return Vec2{2.0 * std::cos(2.0 * p.x + 0.3) * std::cos(1.5 * p.y - 0.2),
                    -1.5 * std::sin(2.0 * p.x + 0.3) * std::sin(1.5 * p.y - 0.2)};
    };
    auto v = [](Vec2 p) {
        return Vec2{std::sin(1.3 * p.x) * std::cos(0.7 * p.y), std::cos(0.8 * p.x) * std::sin(1.7 * p.y)};
    };
    auto div_v = [](Vec2 p) {
        return 1.3 * std::cos(1.3 * p.x) * std::cos(0.7 * p.y) + 1.7 * std::cos(0.8 * p.x) * std::cos(1.7 * p.y);
    };
    auto curl_v = [](Vec2 p) {
        return -0.8 * std::sin(0.8 * p.x) * std::sin(1.7 * p.y) + 0.7 * std::sin(1.3 * p.x) * std::sin(0.7 * p.y);
    };

    std::vector<double> eg, ed, ec, ew;
    for (long n : levels) {
        const Grid2 g = Grid2::centered(static_cast<int>(n), static_cast<int>(n), width / static_cast<double>(n - 1));
        const NormMask all(g, 0);
        eg.push_back(max_abs_difference(grad(sample_scalar(g, f)), sample_vector(g, grad_f), all));
        const VectorField2 vs = sample_vector(g, v);
        ed.push_back(max_abs_difference(div(vs), sample_scalar(g, div_v), all));
        ec.push_back(max_abs_difference(curl_z(vs), sample_scalar(g, curl_v), all));
        ew.push_back(periodic_wave_error(static_cast<int>(n), width, c, t_end));
    }
    auto os = run.artifact("convergence.csv");
    if (os) *os << "n,grad_error,div_error,curl_error,fdtd_error\n";
    for (std::size_t k = 0; k < levels.size(); ++k)
        if (os) *os << levels[k] << ',' << eg[k] << ',' << ed[k] << ',' << ec[k] << ',' << ew[k] << '\n';
    auto ratios = [&](const std::string& name, const std::vector<double>& e) {
        RatioStats r;
        for (std::size_t k = 0; k + 1 < e.size(); ++k) r.add(e[k], e[k + 1], 0.0);
        run.metric(name + "_ratio_min", r.min());
        run.metric(name + "_ratio_max", r.max());
    };
    ratios("grad", eg);
    ratios("div", ed);
    ratios("curl", ec);
    ratios("fdtd", ew);
}

// ---- kernel-causality -----------------------------------------------------

void run_kernel_causality(Run& run) {
    const Scenario& s = run.scenario();
    const std::string ex = "experiment";
    const auto radii = s.reals(ex, "radii");
    const double width = s.real(ex, "width");
    const double c = s.real_or("physics", "c", 1.0);

    double early = 0.0;
    double peak_err = 0.0;
    double spread = 0.0;
    double ref = 0.0;
    auto os = run.artifact("kernel.csv");
    if (os) *os << "radius,t_peak,peak,early_max_ratio\n";
    for (std::size_t n = 0; n < radii.size(); ++n) {
        const double r = radii[n];
        const double t0 = r / c;
        constexpr int samples = 8000;
        double best = 0.0;
        double t_best = t0;
        for (int k = 0; k <= samples; ++k) {
            const double t = t0 - 2.0 * width + 4.0 * width * k / samples;
            const double v = std::abs(retarded_point_kernel(r, t, width, c));
            if (v > best) {
                best = v;
                t_best = t;
            }
        }
        double quiet = 0.0;
        const double t_lo = std::max(0.0, t0 - 20.0 * width);
        const double t_hi = t0 - 5.0 * width;
        if (t_hi > t_lo) {
            for (int k = 0; k <= 1000; ++k) {
                const double t = t_lo + (t_hi - t_lo) * k / 1000.0;
                quiet = std::max(quiet, std::abs(retarded_point_kernel(r, t, width, c)));
            }
        }
        early = std::max(early, quiet / best);
        peak_err = std::max(peak_err, std::abs(t_best - t0) / (0.1 * width));
        if (n == 0) ref = best * r;
        spread = std::max(spread, std::abs(best * r / ref - 1.0));
        if (os) *os << r << ',' << t_best << ',' << best << ',' << quiet / best << '\n';
    }
    run.metric("early_max_ratio", early);
    run.metric("peak_time_error", peak_err);
    run.metric("amplitude_spread", spread);
}

std::string describe(const CheckResult& c) {
    std::ostringstream os;
    os.precision(12);
    if (c.comparison == "equals") return "== " + c.equals;
    if (c.comparison == "expect") {
        os << "= " << *c.expect << " +- " << *c.tol;
        return os.str();
    }
    if (c.min) os << ">= " << *c.min;
    if (c.min && c.max) os << " and ";
    if (c.max) os << "<= " << *c.max;
    return os.str();
}

}  // namespace

CheckResult evaluate_check(const Scenario& s, const std::string& id, const std::map<std::string, MetricValue>& metrics) {
    const std::string sec = "check." + id;
    CheckResult c;
    c.id = id;
    c.metric = s.text(sec, "metric");
    const auto it = metrics.find(c.metric);
    if (it != metrics.end()) c.measured = it->second;
    const double* value = std::get_if<double>(&c.measured);
    if (s.has(sec, "equals")) {
        c.comparison = "equals";
        c.equals = s.text(sec, "equals");
        const auto* text = std::get_if<std::string>(&c.measured);
        c.pass = text && *text == c.equals;
    } else if (s.has(sec, "expect")) {
        c.comparison = "expect";
        c.expect = s.real(sec, "expect");
        c.tol = s.real(sec, "tol");
        c.pass = value && std::isfinite(*value) && std::abs(*value - *c.expect) <= *c.tol;
    } else {
        if (s.has(sec, "min")) c.min = s.real(sec, "min");
        if (s.has(sec, "max")) c.max = s.real(sec, "max");
        c.comparison = c.min && c.max ? "range" : (c.max ? "max" : "min");
        c.pass = value && !std::isnan(*value) && (!c.max || *value <= *c.max) && (!c.min || *value >= *c.min);
    }
    return c;
}

RunReport run(const Scenario& scenario, const fs::path& out_dir, const RunOptions& options) {
    RunReport report;
    report.scenario = scenario.name();
    report.kind = scenario.kind();
    if (!out_dir.empty()) fs::create_directories(out_dir);
    const auto start = std::chrono::steady_clock::now();
    Run ctx(scenario, out_dir, options, report);
    try {
        const std::string& k = scenario.kind();
        if (k == "ab-phase") run_ab_phase(ctx);
        else if (k == "gauge-classify") run_gauge_classify(ctx);
        else if (k == "propagate") run_propagate(ctx);
        else if (k == "locality-report") run_locality(ctx);
        else if (k == "pattern") run_pattern(ctx);
        else if (k == "gauge-invariance") run_gauge_invariance(ctx);
        else if (k == "residual-freedom") run_residual_freedom(ctx);
        else if (k == "convergence") run_convergence(ctx);
        else if (k == "kernel-causality") run_kernel_causality(ctx);
        else throw RunError("unknown experiment kind '" + k + "'");
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw RunError("scenario '" + scenario.name() + "' (" + scenario.kind() + "): " + e.what());
    }
    for (const auto& id : scenario.ids("check")) report.checks.push_back(evaluate_check(scenario, id, report.metrics));
    report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out_dir.empty()) {
        std::ofstream os(out_dir / "report.json");
        if (!os) throw RunError("cannot write " + (out_dir / "report.json").string());
        os << report_json(report);
    }
    return report;
}

std::string report_json(const RunReport& r) {
    ordered_json j;
    j["scenario"] = r.scenario;
    j["kind"] = r.kind;
    j["passed"] = r.passed();
    j["checks"] = ordered_json::array();
    for (const auto& c : r.checks) {
        ordered_json cj;
        cj["id"] = c.id;
        cj["metric"] = c.metric;
        cj["measured"] = metric_json(c.measured);
        cj["comparison"] = c.comparison;
        cj["threshold"] = describe(c);
        cj["pass"] = c.pass;
        j["checks"].push_back(std::move(cj));
    }
    j["metrics"] = ordered_json::object();
    for (const auto& [name, v] : r.metrics) j["metrics"][name] = metric_json(v);
    j["artifacts"] = r.artifacts;
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

PlotKind parse_plot_kind(const std::string& name) {
    if (name == "pattern") return PlotKind::pattern;
    if (name == "arrivals") return PlotKind::arrivals;
    if (name == "heatmap") return PlotKind::heatmap;
    throw Error("unknown plot kind '" + name + "' (pattern, arrivals, heatmap)");
}

namespace {

std::ifstream open_in(const fs::path& p) {
    std::ifstream is(p);
    if (!is) throw Error("cannot open " + p.string());
    return is;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw Error("cannot write " + p.string());
    os.precision(12);
    return os;
}

void plot_pattern(const fs::path& artifact, const fs::path& out) {
    auto is = open_in(artifact);
    std::string line;
    std::getline(is, line);
    std::istringstream hs(line);
    std::string hash, key;
    double value = 0.0;
    InterferometerSpec spec;
    hs >> hash;
    if (hash != "#") throw Error("pattern CSV: missing parameter line");
    while (hs >> key >> value) {
        if (key == "lambda_b") spec.lambda_b = value;
        else if (key == "l") spec.l = value;
        else if (key == "d") spec.d = value;
        else if (key == "kappa") spec.kappa = value;
    }
    std::getline(is, line);
    if (line != "x,intensity") throw Error("pattern CSV: expected 'x,intensity' columns");
    std::vector<double> xs, on;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        xs.push_back(std::stod(line.substr(0, comma)));
        on.push_back(std::stod(line.substr(comma + 1)));
    }
    const auto off = interference_pattern(spec, 0.0, xs);
    auto os = open_out(out);
    os << "x,intensity_flux_on,intensity_flux_off\n";
    for (std::size_t k = 0; k < xs.size(); ++k) os << xs[k] << ',' << on[k] << ',' << off[k] << '\n';
}

void plot_arrivals(const fs::path& artifact, const fs::path& out) {
    auto is = open_in(artifact);
    const auto j = nlohmann::json::parse(is);
    std::map<double, std::pair<std::string, std::string>> rows;
    auto cell = [](const nlohmann::json& t) {
        if (t.is_null()) return std::string();
        std::ostringstream os;
        os.precision(12);
        os << t.get<double>();
        return os.str();
    };
    for (const auto& r : j.at("reports")) {
        if (r.at("channel") != "A") continue;
        const bool coulomb = r.at("gauge") == "COULOMB";
        for (const auto& p : r.at("probes")) {
            auto& row = rows[p.at("radius").get<double>()];
            (coulomb ? row.second : row.first) = cell(p.at("t_arrival"));
        }
    }
    auto os = open_out(out);
    os << "radius,t_arrival_lorenz,t_arrival_coulomb\n";
    for (const auto& [r, t] : rows) os << r << ',' << t.first << ',' << t.second << '\n';
}

void plot_heatmap(const fs::path& artifact, const fs::path& out, int stride) {
    std::string header, first;
    {
        auto is = open_in(artifact);
        std::getline(is, header);
        std::getline(is, first);
    }
    const auto columns = static_cast<std::size_t>(std::count(first.begin(), first.end(), ',')) + 1;
    auto is = open_in(artifact);
    ScalarField2 f;
    if (columns == 6) {
        const VectorField2 v = read_vector_csv(is);
        f = ScalarField2(v.grid, v.time);
        for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = std::hypot(v.x[k], v.y[k]);
    } else {
        f = read_scalar_csv(is);
    }
    auto os = open_out(out);
    write_heatmap_csv(os, f, stride);
}

}  // namespace

void emit_plot_data(const fs::path& artifact, PlotKind kind, const fs::path& out, int stride) {
    switch (kind) {
        case PlotKind::pattern: plot_pattern(artifact, out); break;
        case PlotKind::arrivals: plot_arrivals(artifact, out); break;
        case PlotKind::heatmap: plot_heatmap(artifact, out, stride); break;
    }
}

}  // namespace gauge_lab
