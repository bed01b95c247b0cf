#pragma once

// Time-domain Lorenz-gauge potentials driven by a switched-on solenoid, the
// Coulomb-gauge companion of a run, and wavefront diagnostics.

#include "gauge_lab/analytic.hpp"
#include "gauge_lab/grid.hpp"
#include "gauge_lab/operators.hpp"
#include "gauge_lab/poisson.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gauge_lab {

class CflError : public Error {
public:
    using Error::Error;
};

struct FdtdConfig {
    Grid2 grid;
    double c{1.0};
    double dt{0.0};
    double cfl_max{0.5};
    /// Width of the absorbing sponge in cells; 0 disables it.
    int damping_cells{0};
    /// Peak sponge rate is strength * c / (damping_cells * h).
    double damping_strength{12.0};
    bool periodic{false};
    /// Solenoid driven by a ring current; a ramp of 0 means 5 steps.
    std::optional<SolenoidSpec> source;

    /// c dt sqrt(1/dx^2 + 1/dy^2)
    [[nodiscard]] double courant() const;
    /// Throws CflError when the Courant number exceeds cfl_max, Error otherwise.
    void validate() const;
};

/// Current and previous potential levels of a run.
struct FdtdState {
    PotentialState potentials;
    long step{0};
};

/// Leapfrog integrator for phi_tt = c^2 (lap phi + c^2 rho) and
/// A_tt = c^2 (lap A + J) with the five-point Laplacian.
///
/// The solenoid current is the discrete curl of a magnetization that is 1
/// inside R - 2h and falls smoothly to 0 at R, so J is a ring of width 2h and
/// its discrete divergence vanishes: the source carries no charge and the
/// scheme keeps the discrete Lorenz condition. The amplitude is scaled so that
/// the static exterior loop integral equals the solenoid flux; the scale comes
/// from one static Poisson solve per grid.
class FdtdStepper {
public:
    explicit FdtdStepper(FdtdConfig config);

    [[nodiscard]] const FdtdConfig& config() const { return cfg_; }
    [[nodiscard]] double ramp_duration() const { return ramp_; }
    /// Source current density at time t (zero without a source).
    [[nodiscard]] VectorField2 source_current(double t) const;
    /// Loop integral of the static unit-amplitude response.
    [[nodiscard]] double unit_flux() const { return unit_flux_; }
    /// Sponge rate times dt at every node.
    [[nodiscard]] const std::vector<double>& sponge() const { return sigma_dt_; }

    /// Quiescent state at t0 (previous level at t0 - dt).
    [[nodiscard]] FdtdState initial_state(double t0 = 0.0) const;
    /// State from explicit levels; the previous level must sit dt earlier.
    [[nodiscard]] FdtdState make_state(const PotentialState& levels) const;

    [[nodiscard]] FdtdState step(const FdtdState& s) const;
    void advance(FdtdState& s) const;

private:
    FdtdConfig cfg_;
    double ramp_{0.0};
    double unit_flux_{1.0};
    std::vector<double> sigma_dt_;
    std::vector<double> jx_unit_;
    std::vector<double> jy_unit_;
    std::vector<double> zero_;
};

/// One step of the Lorenz-gauge wave equations.
[[nodiscard]] FdtdState fdtd_lorenz_step(const FdtdStepper& stepper, const FdtdState& s);

struct SwitchOnConfig {
    FdtdConfig fdtd;
    double t_end{0.0};
    /// Keep every n-th step as a frame.
    int frame_every{1};
    /// Cells of clearance kept between the nominal front and the sponge; the
    /// leading tail of the discrete front runs ahead of R + c t.
    int front_margin{16};
};

/// Uniformly spaced snapshots of a run. Each frame carries its previous step,
/// so fields can be derived from a single frame.
struct FrameSeries {
    std::vector<PotentialState> frames;
    SolenoidSpec source;
    double c{1.0};
    double step_dt{0.0};
    double ramp{0.0};
    int damping_cells{0};
    bool truncated{false};
    std::vector<std::string> warnings;

    [[nodiscard]] const Grid2& grid() const { return frames.front().grid(); }
    [[nodiscard]] std::vector<double> times() const;
};

/// Radius the front reaches when it touches the sponge (or the skirt), measured from the source.
[[nodiscard]] double free_radius(const Grid2& g, Vec2 center, int damping_cells);

/// Runs from a quiescent state at t = 0 to t_end. The run stops early, with a
/// warning, once the front R + c (t - t_on) comes within front_margin cells of
/// the sponge.
[[nodiscard]] FrameSeries switch_on_scenario(const SwitchOnConfig& cfg);

/// Coulomb-gauge representative of every frame (both levels projected).
[[nodiscard]] FrameSeries coulomb_companion(const FrameSeries& series, const CgOptions& cg = {});

enum class Channel { potential_a, potential_phi, field_e, field_b };
[[nodiscard]] std::string to_string(Channel ch);

/// Max of |channel| over the nodes within half a cell of radius r about the source center.
[[nodiscard]] double probe_value(const PotentialState& frame, Channel ch, Vec2 center, double r, double c = 1.0);

/// Probe history: one value per frame.
[[nodiscard]] std::vector<double> probe_history(const FrameSeries& series, Channel ch, double r);

enum class ArrivalFlag { arrived, instantaneous };

struct ArrivalRecord {
    double radius{0.0};
    double t_arrival{0.0};
    double threshold{0.0};  // fraction of the probe's peak
    std::string gauge;      // LORENZ, COULOMB or FIELDS
    ArrivalFlag flag{ArrivalFlag::arrived};
};

struct LocalityReport {
    std::string gauge;
    Channel channel{Channel::potential_a};
    double threshold{0.01};
    std::vector<ArrivalRecord> records;
    double fitted_speed{0.0};
    double speed_stderr{0.0};
    bool instantaneous{false};
    /// Fitted speed at each threshold in `sensitivity_thresholds`.
    std::vector<double> sensitivity_thresholds;
    std::vector<double> sensitivity_speeds;
};

/// First time each probe's value reaches threshold times its peak over the
/// run (linear interpolation between frames), and the least-squares front
/// speed of arrival time against radius. A probe whose arrival is no later
/// than the first frame after the switch-on starts is flagged instantaneous;
/// the report is instantaneous when every probe is. Throws when a probe sits
/// in the sponge or a channel never rises above zero.
[[nodiscard]] LocalityReport signal_locality_report(const FrameSeries& series, const std::vector<double>& radii,
                                                    double threshold, Channel ch, const std::string& gauge);

/// Largest |channel| over all frames, outside the skirt and sponge.
[[nodiscard]] double channel_peak(const FrameSeries& series, Channel ch);

/// Earliest frame time at which the probe exceeds `floor`; nullopt if never.
[[nodiscard]] std::optional<double> first_exceedance(const FrameSeries& series, Channel ch, double r, double floor);

/// Mask for wave diagnostics: skirt, sponge and the source support (r < R + 3h).
[[nodiscard]] NormMask vacuum_mask(const FrameSeries& series);

/// Max-norm of u_tt - c^2 lap(u) per interior frame, using the frame spacing for
/// the time difference and the five-point Laplacian. Vacuum region only.
[[nodiscard]] std::vector<double> wave_residual(const FrameSeries& series, Channel ch);

/// Max-norm of lap(phi) per frame in the vacuum region.
[[nodiscard]] std::vector<double> laplace_residual(const FrameSeries& series);

/// Max-norm of lorenz_residual per frame outside the skirt and sponge.
[[nodiscard]] std::vector<double> lorenz_history(const FrameSeries& series);

/// max |B_z| outside R + 2h (and inside the sponge edge) over max |B_z| inside R, per frame.
[[nodiscard]] std::vector<double> confinement_ratios(const FrameSeries& series);

}  // namespace gauge_lab
