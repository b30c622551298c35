#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "tumor/model.hpp"

namespace tumor {

enum class ShootTermination { ReachedZero, DenominatorVanished, BoundViolated };

const char* to_string(ShootTermination t);

struct ShootOptions {
    int grid_n = 1024;            // uniform inward steps from R to 0
    double tol_I_factor = 1e-12;  // tau threshold tol_I = factor * R^3 * mu(E_cap)
    int max_newton = 30;
    double newton_tol = 1e-13;
};

/// One inward shooting pass at fixed R: the pair (E, I) with I(r) = r^2 u(r),
///   dE/dr = Q(sigma, m, E) r^2 / I,   dI/dr = mu(E) (sigma - sigma_bar) r^2,
/// seeded at r = R by E(R) = h(1, alpha/beta), I(R) = 0 and the closed-form slopes.
struct ShootResult {
    double R = 0.0;
    std::vector<double> r_grid; // descending from R to the stopping radius
    std::vector<double> E;
    std::vector<double> u;      // I / r^2, with u = 0 at r = 0
    std::vector<double> I;
    double tau = 0.0;           // blow-down radius (0 when the shoot reaches the center)
    double I0 = std::numeric_limits<double>::quiet_NaN(); // terminal I when ReachedZero
    double E_at_R = 0.0;
    ShootTermination termination = ShootTermination::ReachedZero;
};

ShootResult shoot(double R, const ModelParams& p, const ConstitutiveSet& laws,
                  const ShootOptions& opts = {});

/// Blow-down radius tau(R) = inf{tau' : I < 0 on (tau', R)}.
double tau_of(double R, const ModelParams& p, const ConstitutiveSet& laws,
              const ShootOptions& opts = {});

struct BracketOptions {
    double R_lo = 0.1;
    double R_hi = 10.0;
    int max_expansions = 24;
    double tol_R = 1e-6;
    int max_bisections = 200;
};

/// Stationary radius: the unique flip of the indicator "tau(R) > 0 or
/// I(0,R) >= -tol_I", located by bisection (monotone by the scaled-velocity
/// comparison lemma). Returns the tau = 0 side of the final bracket, driven
/// until |I(0)| <= 2 tol_I so the returned radius re-shoots cleanly.
double find_R_star(const ModelParams& p, const ConstitutiveSet& laws,
                   const ShootOptions& shoot_opts = {}, const BracketOptions& bracket = {});

struct StationarySolution {
    double R_star = 0.0;
    std::vector<double> r;      // ascending uniform grid on [0, R_star]
    std::vector<double> sigma;
    std::vector<double> m;      // constant alpha/beta
    std::vector<double> E;
    std::vector<double> u;
    struct Residuals {
        double sigma = 0.0, E = 0.0, u = 0.0;
    } residuals;
};

/// Re-shoots at R_star on grid_n+1 points, reverses orientation, fills sigma
/// by the closed form and m = alpha/beta, and attaches residuals.
StationarySolution assemble_stationary(const ModelParams& p, const ConstitutiveSet& laws,
                                       double R_star, int grid_n);

/// Sup-norm residuals of the stationary system on the solution grid:
/// |u E' - Q|, |u' + 2u/r - mu(E)(sigma - sigma_bar)| and the analytic
/// sigma-equation residual (machine zero).
StationarySolution::Residuals residual_report(const StationarySolution& sol, const ModelParams& p,
                                              const ConstitutiveSet& laws);

/// Scaled-velocity comparison of two shoots on the common s = r/R grid:
/// u~(s,R) = I(sR,R)/R^3; reports min over s in (max tau~, 1) of the difference.
struct MonotonicityProbe {
    std::vector<double> s;
    std::vector<double> du;    // u~(s,R2) - u~(s,R1)
    double min_difference = 0.0;
    double s_min = 1.0;        // lower end of the compared range
};
MonotonicityProbe monotonicity_probe(double R1, double R2, const ModelParams& p,
                                     const ConstitutiveSet& laws, const ShootOptions& opts = {});

/// CSV columns (r, sigma, m, E, u).
void write_profile_csv(const StationarySolution& sol, std::ostream& os);

} // namespace tumor
