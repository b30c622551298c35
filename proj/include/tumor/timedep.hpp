#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tumor/model.hpp"
#include "tumor/stationary.hpp"

namespace tumor {

/// Scalar field sampled on the uniform unit grid r_i = i/n (scaled radius).
using RadialProfile = std::vector<double>;

struct SimOptions {
    bool paper_verbatim_transform = false; // sigma advection without the c factor
    bool pin_radius = false;               // freeze R (manufactured-solution runs)
    bool linear_interp = false;            // debugging fallback for transport
    bool enforce_invariants = true;        // throw on a violated discrete bound
    double radius_collapse = 1e-6;
};

/// Time-dependent state on the fixed unit domain. u, v are derived from
/// (sigma, E) and recomputed every step.
struct SimState {
    double t = 0.0;
    double R = 0.0;
    RadialProfile sigma, m, E;
    RadialProfile u, v;
    double m_bound = 0.0; // max{ ||m0||_inf, alpha/beta }, fixed at start

    int n() const { return int(sigma.size()) - 1; }
};

struct InitialData {
    double R0 = 0.0;
    RadialProfile sigma0, m0, E0;

    /// Nonnegativity, sigma0(1) = 1, and discrete compatibility at the ends.
    void validate() const;
};

struct Scalars {
    double t, R, u1;
    double dist_sigma, dist_E, dist_m; // sup distances to the reference (NaN if none)
};

struct Snapshot {
    double t, R;
    RadialProfile sigma, m, E, u;
};

struct TimeSeries {
    std::vector<Snapshot> snapshots;
    std::vector<Scalars> scalars; // one row per step
};

/// u(r) = r^-2 \int_0^r mu(E)(sigma - sigma_bar) rho^2 drho and v = u - r u(1).
/// The quadrature interpolates the integrand linearly and integrates the
/// rho^2 moments exactly, so constant integrands are reproduced to roundoff.
std::pair<RadialProfile, RadialProfile> velocity_from_profiles(const RadialProfile& sigma,
                                                               const RadialProfile& E,
                                                               const ConstitutiveSet& laws,
                                                               const ModelParams& p);

/// One backward-Euler step of the radial sigma equation with sigma(1) = 1 and
/// symmetry at r = 0; uses state.R and R'/R = u(1). Throws StepTooLarge if the
/// system matrix loses its M-matrix sign pattern.
RadialProfile parabolic_step_sigma(const SimState& state, double dt, const ModelParams& p,
                                   const SimOptions& opts = {});

/// Same for m with Neumann ends; alpha explicit, beta m implicit.
RadialProfile parabolic_step_m(const SimState& state, double dt, const ModelParams& p,
                               const SimOptions& opts = {});

/// Semi-Lagrangian step of E_t + v E_r = Q along characteristics: second-order
/// backward foot trace, monotone-cubic interpolation at the feet, Heun update
/// of dE/ds = Q with sigma, m frozen at their current profiles.
RadialProfile transport_E(const SimState& state, double dt, const ConstitutiveSet& laws,
                          const ModelParams& p, const SimOptions& opts = {});

/// Operator-split step: (u,v) -> R <- R exp(u(1) dt) -> implicit sigma, m -> E.
SimState advance(const SimState& state, double dt, const ModelParams& p,
                 const ConstitutiveSet& laws, const SimOptions& opts = {});

struct DistanceReport {
    double sup_sigma = 0.0, sup_E = 0.0, sup_m = 0.0;
    double l2_sigma = 0.0, l2_E = 0.0, l2_m = 0.0;
    double dR = 0.0;

    double sup_combined() const;
};

/// Field distances with the reference resampled onto the state grid through
/// r_physical = r * R (clamped at R_star).
DistanceReport distance_to_stationary(const SimState& state, const StationarySolution& sol,
                                      const ModelParams& p);

SimState make_state(const InitialData& init, const ModelParams& p, const ConstitutiveSet& laws);

/// Repeated advance with per-step scalar records and cadence snapshots;
/// distances are filled when a reference solution is supplied. Throws
/// RadiusCollapse if R drops under opts.radius_collapse.
TimeSeries simulate(const ModelParams& p, const ConstitutiveSet& laws, const InitialData& init,
                    double T, double dt, double cadence, const SimOptions& opts = {},
                    const StationarySolution* reference = nullptr);

/// Initial data equal to the stationary solution resampled to n+1 nodes.
InitialData stationary_init(const StationarySolution& sol, const ModelParams& p, int n);

/// Stationary data with E multiplied by (1 + amplitude * w): w = 1 for seed 0,
/// otherwise a seeded smooth cosine bump normalized to max|w| = 1 (keeps the
/// zero-slope compatibility at both ends).
InitialData perturbed_init(const StationarySolution& sol, const ModelParams& p, int n,
                           double amplitude, std::uint64_t seed);

struct ConvergenceVerdict {
    bool converged = false;
    double final_distance = 0.0;
    bool monotone_tail = false; // decreasing (or under the floor) over the last half
};

/// The convergence test used by the experiment drivers: final combined sup
/// distance <= tol and a tail that decreases except below `floor`.
ConvergenceVerdict assess_convergence(const TimeSeries& series, double tol = 1e-2,
                                      double floor = 1e-4);

} // namespace tumor
