#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tumor {

/// Singular integro-differential IVP  dx/dt = f(x,t) / \int_0^t g(x(s),s) ds,
/// x(0) = x0, well posed in the C1 class when theta = f_x(x0,0)/g(x0,0) < 1.
struct SingularProblem {
    std::function<double(double, double)> f;   // (x,t)
    std::function<double(double, double)> f_x;
    std::function<double(double, double)> f_t;
    std::function<double(double, double)> g;
    double x0 = 0.0;
    double t_max = 1.0;

    /// Checks f(x0,0)=0, g(x0,0)!=0 and theta < 1; throws on violation.
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;  // increasing, starting at 0
    std::vector<double> values; // x at each time
    double slope0 = 0.0;        // computed x'(0)

    double endpoint() const { return values.back(); }
    /// Two-column CSV (t,x).
    void write_csv(std::ostream& os) const;
};

struct SolveOptions {
    double blow_up_factor = 1e6;  // BlowUp bound = factor * (|x0| + 1)
    int max_refinements = 12;     // Richardson halving budget
    double first_step_fraction = 1.0 / 64.0;
    double start_scale = 1.0;     // multiplies the Taylor-start offset t0
};

/// x'(0) = f_t(x0,0) / (g(x0,0) - f_x(x0,0)).
double initial_slope(const SingularProblem& p);

/// C1 slope limit F_r / (v' - F_phi) at a vanishing-velocity endpoint of
/// v(r) phi' = F(phi, r). Caller checks gamma = F_phi/v' is outside [0,1)
/// or that the solution is Lipschitz.
double boundary_slope_limit(double F_r, double F_phi, double v_prime);

/// Core fixed-step kernel: classical 4th-order steps of the auxiliary system
/// x' = f(x,t)/y, y' = g(x,t) from (t0, x_at_t0, y_at_t0) to T in `steps`
/// uniform steps. Exposed so convergence order is measurable in isolation.
Trajectory integrate_pair(const SingularProblem& p, double t0, double x_at_t0, double y_at_t0,
                          double T, int steps, const SolveOptions& opts = {});

/// Regularized family: x_eps = x0 on [0, eps], then the non-singular system with
/// the running denominator seeded by \int_0^eps g(x0, s) ds.
Trajectory solve_regularized(const SingularProblem& p, double eps, double step, double T,
                             const SolveOptions& opts = {});

/// C1-branch solve: first-order Taylor start at t0 = max(step, sqrt(tol)*scale),
/// then fixed-step integration with Richardson step-halving until the endpoint
/// moves by <= tol. Throws NonConvergent if halving does not settle.
Trajectory solve(const SingularProblem& p, double T, double tol, const SolveOptions& opts = {});

/// Negative-time problem via the reflection t -> -t.
SingularProblem reflected(const SingularProblem& p);

struct SweepRow {
    double param = 0.0;
    double endpoint = 0.0;
    bool ok = false;
    std::string error;
};

/// Solves each family member and tabulates endpoints; member failures are
/// captured per row, tagged by parameter value.
std::vector<SweepRow> continuation_sweep(const std::function<SingularProblem(double)>& family,
                                         std::span<const double> param_grid, double T, double tol);

} // namespace tumor
