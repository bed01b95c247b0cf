#pragma once

#include "gauge_lab/analytic.hpp"
#include "gauge_lab/grid.hpp"
#include "gauge_lab/paths.hpp"
#include "gauge_lab/poisson.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gauge_lab {

/// Thresholds for constraint checks and classification. Unset values default
/// to max(floor, factor * h^2 * scale), h = max(dx, dy), scale = max-norm of
/// the potentials involved.
struct GaugeTolerances {
    std::optional<double> absolute;
    double floor{1e-6};
    double factor{10.0};

    [[nodiscard]] double resolve(const Grid2& g, double scale) const;
};

/// Nodes used for gauge-level norms: the default skirt, minus the excluded
/// disk widened by two cells so no stencil reaches into it.
[[nodiscard]] NormMask probe_mask(const Grid2& g);

/// Raised when a wide gauge element fails its constraints.
class GaugeConstraintError : public Error {
public:
    GaugeConstraintError(const std::string& what, double residual, double tolerance)
        : Error(what), residual_(residual), tolerance_(tolerance) {}
    [[nodiscard]] double residual() const { return residual_; }
    [[nodiscard]] double tolerance() const { return tolerance_; }

private:
    double residual_;
    double tolerance_;
};

/// A -> A + grad(chi), phi -> phi - dchi/dt on both time levels, with the
/// analytic derivatives. The polar kind is rejected unless its center lies
/// inside the grid's excluded disk.
[[nodiscard]] PotentialState apply_narrow(const PotentialState& s, const GaugeChi& chi);

/// Discrete chi. With only `chi`, A gains grad(chi) on both levels and phi is
/// unchanged. With `chi_prev` too, the previous level gains grad(chi_prev) and
/// both phi levels lose (chi - chi_prev) / dt.
[[nodiscard]] PotentialState apply_narrow(const PotentialState& s, const ScalarField2& chi,
                                          const ScalarField2* chi_prev = nullptr);

/// Curl-free C with its companion C0. A time-dependent element carries C on
/// the previous level as well.
struct WideGaugeElement {
    VectorField2 c;
    ScalarField2 c0;
    std::optional<VectorField2> c_prev;
    std::optional<ScalarField2> c0_prev;
    std::function<Vec2(Vec2)> c_exact;

    /// Static element sampled from a closed form; nodes inside the grid's
    /// excluded disk are set to zero.
    static WideGaugeElement sampled(const Grid2& g, const std::function<Vec2(Vec2)>& c, double c0 = 0.0);
};

struct WideResiduals {
    double curl{0.0};      // max |curl_z C|
    double companion{0.0}; // max |grad C0 - dC/dt|
    double tolerance{0.0};
};

[[nodiscard]] WideResiduals wide_residuals(const WideGaugeElement& g, double dt, const GaugeTolerances& tol = {});

/// (phi - C0, A + C). Throws GaugeConstraintError with the measured residual
/// when the element is not admissible.
[[nodiscard]] PotentialState apply_wide(const PotentialState& s, const WideGaugeElement& g,
                                        const GaugeTolerances& tol = {});

struct CoulombOptions {
    CgOptions cg{};
    /// Initial guess for chi on the current level.
    const ScalarField2* guess{nullptr};
};

struct CoulombProjection {
    PotentialState state;
    ScalarField2 chi;
    std::optional<ScalarField2> chi_prev;
    CgResult solve;
    double div_before{0.0};
    double div_after{0.0};
};

/// Solves lap(chi) = -div(A) with chi = 0 on the boundary and applies chi.
/// The Laplacian is the composition of the discrete div and grad, so div(A')
/// equals the solver residual away from the two outermost rings of nodes.
/// A state with a previous level has both levels projected. The result is
/// exact only up to the truncation of the domain at the Dirichlet boundary.
[[nodiscard]] CoulombProjection coulomb_project(const PotentialState& s, const CoulombOptions& opt = {});

/// div A + (1/c^2) dphi/dt, centred between the two levels. A static state gives div A.
[[nodiscard]] ScalarField2 lorenz_residual(const PotentialState& s, double c = 1.0);

/// Plane-wave chi obeying the free wave equation (omega = c |k|).
[[nodiscard]] GaugeChi residual_lorenz_chi(Vec2 k, double amplitude, double phase, double c = 1.0);

enum class EquivalenceLabel { identical, narrow_equivalent, wide_only, inequivalent };

[[nodiscard]] std::string to_string(EquivalenceLabel label);

struct ClassifyLoop {
    std::string id;
    Path path;
};

struct LoopIntegral {
    std::string id;
    int winding{0};
    double value{0.0};
};

struct EquivalenceVerdict {
    EquivalenceLabel label{EquivalenceLabel::inequivalent};
    double curl_residual{0.0};
    double potential_residual{0.0};  // max |A2 - A1|
    double scalar_residual{0.0};     // max |phi2 - phi1 - const|
    double tolerance{0.0};
    std::vector<LoopIntegral> loop_integrals;
    std::optional<double> lorenz_residuals[2];
};

struct ClassifyOptions {
    GaugeTolerances tolerances{};
    double c{1.0};
};

/// Relation between two states on one grid. Loop integrals of A2 - A1 use the
/// closed forms when the states carry them and bilinear interpolation otherwise.
/// Throws when the grid has an excluded disk and no loop winds around it.
[[nodiscard]] EquivalenceVerdict classify_equivalence(const PotentialState& s1, const PotentialState& s2,
                                                      const std::vector<ClassifyLoop>& loops,
                                                      const ClassifyOptions& opt = {});

}  // namespace gauge_lab
