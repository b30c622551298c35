#include "tumor/singular_ivp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "tumor/errors.hpp"
#include "tumor/numerics.hpp"

namespace tumor {

void SingularProblem::validate() const {
    double scale = std::abs(x0) + 1.0;
    if (std::abs(f(x0, 0.0)) > 1e-12 * scale)
        fail(ErrorKind::InvalidParams, "f(x0,0) must vanish");
    double g0 = g(x0, 0.0);
    if (g0 == 0.0)
        fail(ErrorKind::InvalidParams, "g(x0,0) must be nonzero");
    if (f_x(x0, 0.0) / g0 >= 1.0)
        fail(ErrorKind::InvalidParams, "theta = f_x(x0,0)/g(x0,0) must be < 1");
}

void Trajectory::write_csv(std::ostream& os) const {
    os << "t,x\n";
    char buf[64];
    for (size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", times[i], values[i]);
        os << buf;
    }
}

double initial_slope(const SingularProblem& p) {
    double g0 = p.g(p.x0, 0.0);
    double fx0 = p.f_x(p.x0, 0.0);
    double den = g0 - fx0;
    if (den == 0.0 || std::abs(den) < 1e-14 * (std::abs(g0) + std::abs(fx0)))
        fail(ErrorKind::DegenerateDenominator, "g - f_x vanishes at the origin (theta = 1)");
    return p.f_t(p.x0, 0.0) / den;
}

double boundary_slope_limit(double F_r, double F_phi, double v_prime) {
    double den = v_prime - F_phi;
    if (den == 0.0 || std::abs(den) < 1e-14 * (std::abs(v_prime) + std::abs(F_phi)))
        fail(ErrorKind::DegenerateDenominator, "v' - F_phi vanishes at the endpoint");
    return F_r / den;
}

namespace {

struct PairState {
    double x, y;
};

// One RK4 step of x' = f/y, y' = g; throws on a vanishing stage denominator
// or a blown-up state.
PairState rk4_step(const SingularProblem& p, double t, PairState s, double h, double y_sign,
                   double bound) {
    auto deriv = [&](double tt, PairState st) -> PairState {
        if (st.y * y_sign <= 0.0)
            fail(ErrorKind::DenominatorVanished,
                 "running integral crossed zero at t=" + std::to_string(tt));
        return {p.f(st.x, tt) / st.y, p.g(st.x, tt)};
    };
    PairState k1 = deriv(t, s);
    PairState k2 = deriv(t + h / 2, {s.x + h / 2 * k1.x, s.y + h / 2 * k1.y});
    PairState k3 = deriv(t + h / 2, {s.x + h / 2 * k2.x, s.y + h / 2 * k2.y});
    PairState k4 = deriv(t + h, {s.x + h * k3.x, s.y + h * k3.y});
    PairState out{s.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                  s.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y)};
    if (!std::isfinite(out.x) || !std::isfinite(out.y) || std::abs(out.x) > bound)
        fail(ErrorKind::BlowUp, "|x| exceeded the blow-up bound at t=" + std::to_string(t + h));
    return out;
}

} // namespace

Trajectory integrate_pair(const SingularProblem& p, double t0, double x_at_t0, double y_at_t0,
                          double T, int steps, const SolveOptions& opts) {
    Trajectory traj;
    traj.times.push_back(t0);
    traj.values.push_back(x_at_t0);
    double bound = opts.blow_up_factor * (std::abs(p.x0) + 1.0);
    double y_sign = y_at_t0 >= 0.0 ? 1.0 : -1.0;
    double h = (T - t0) / steps;
    PairState s{x_at_t0, y_at_t0};
    for (int i = 0; i < steps; ++i) {
        double t = t0 + i * h;
        s = rk4_step(p, t, s, h, y_sign, bound);
        traj.times.push_back(t0 + (i + 1) * h);
        traj.values.push_back(s.x);
    }
    return traj;
}

Trajectory solve_regularized(const SingularProblem& p, double eps, double step, double T,
                             const SolveOptions& opts) {
    double y_eps = simpson([&](double s) { return p.g(p.x0, s); }, 0.0, eps,
                           std::max(8, int(std::ceil(eps / step))));
    if (y_eps == 0.0)
        fail(ErrorKind::DenominatorVanished, "integral of g over [0, eps] vanishes");
    int steps = std::max(1, int(std::ceil((T - eps) / step)));
    Trajectory tail = integrate_pair(p, eps, p.x0, y_eps, T, steps, opts);
    Trajectory traj;
    traj.times = {0.0};
    traj.values = {p.x0};
    traj.times.insert(traj.times.end(), tail.times.begin(), tail.times.end());
    traj.values.insert(traj.values.end(), tail.values.begin(), tail.values.end());
    traj.slope0 = initial_slope(p);
    return traj;
}

Trajectory solve(const SingularProblem& p, double T, double tol, const SolveOptions& opts) {
    p.validate();
    double slope = initial_slope(p);
    double scale = std::abs(p.x0) + 1.0;
    double bound = opts.blow_up_factor * scale;

    auto run = [&](double h) -> Trajectory {
        double t0 = std::max(h, std::sqrt(tol) * scale) * opts.start_scale;
        t0 = std::min(t0, T / 8.0);
        double x0t = p.x0 + slope * t0;
        if (std::abs(x0t) > bound)
            fail(ErrorKind::BlowUp, "Taylor start exceeds the blow-up bound");
        // denominator along the Taylor line, consistent with the start order
        double y0t = simpson([&](double s) { return p.g(p.x0 + slope * s, s); }, 0.0, t0, 16);
        int steps = std::max(2, int(std::ceil((T - t0) / h)));
        Trajectory tr = integrate_pair(p, t0, x0t, y0t, T, steps, opts);
        Trajectory out;
        out.times = {0.0};
        out.values = {p.x0};
        out.times.insert(out.times.end(), tr.times.begin(), tr.times.end());
        out.values.insert(out.values.end(), tr.values.begin(), tr.values.end());
        out.slope0 = slope;
        return out;
    };

    double h = T * opts.first_step_fraction;
    Trajectory prev = run(h);
    for (int k = 0; k < opts.max_refinements; ++k) {
        h *= 0.5;
        Trajectory next = run(h);
        if (std::abs(next.endpoint() - prev.endpoint()) <= tol)
            return next;
        prev = std::move(next);
    }
    fail(ErrorKind::NonConvergent, "step halving did not settle within tol");
}

SingularProblem reflected(const SingularProblem& p) {
    SingularProblem q;
    q.f = [f = p.f](double x, double t) { return f(x, -t); };
    q.f_x = [fx = p.f_x](double x, double t) { return fx(x, -t); };
    q.f_t = [ft = p.f_t](double x, double t) { return -ft(x, -t); };
    q.g = [g = p.g](double x, double t) { return g(x, -t); };
    q.x0 = p.x0;
    q.t_max = p.t_max;
    return q;
}

std::vector<SweepRow> continuation_sweep(const std::function<SingularProblem(double)>& family,
                                         std::span<const double> param_grid, double T,
                                         double tol) {
    std::vector<SweepRow> rows;
    rows.reserve(param_grid.size());
    for (double mu : param_grid) {
        SweepRow row;
        row.param = mu;
        try {
            row.endpoint = solve(family(mu), T, tol).endpoint();
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace tumor
