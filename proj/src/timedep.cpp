#include "tumor/timedep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "tumor/errors.hpp"
#include "tumor/numerics.hpp"

namespace tumor {

void InitialData::validate() const {
    if (!(R0 > 0.0)) fail(ErrorKind::InvalidParams, "R0 must be positive");
    size_t np = sigma0.size();
    if (np < 5 || m0.size() != np || E0.size() != np)
        fail(ErrorKind::InvalidParams, "initial profiles must share a grid with >= 5 nodes");
    auto nonneg = [](const RadialProfile& f, const char* name) {
        double mx = 0.0;
        for (double v : f) {
            if (v < 0.0) fail(ErrorKind::InvalidParams, std::string(name) + " must be nonnegative");
            mx = std::max(mx, v);
        }
        if (mx == 0.0) fail(ErrorKind::InvalidParams, std::string(name) + " vanishes identically");
    };
    nonneg(sigma0, "sigma0");
    nonneg(m0, "m0");
    nonneg(E0, "E0");
    if (std::abs(sigma0.back() - 1.0) > 1e-12)
        fail(ErrorKind::InvalidParams, "sigma0(1) must equal 1");

    // Loose discrete compatibility screen: one-sided slopes at the symmetry
    // ends should be small for data satisfying the continuous conditions.
    double h = 1.0 / double(np - 1);
    auto slope0 = [&](const RadialProfile& f) {
        return std::abs(-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    };
    auto slope1 = [&](const RadialProfile& f) {
        size_t n = np - 1;
        return std::abs(3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * h);
    };
    auto amp = [](const RadialProfile& f) {
        return 1.0 + *std::max_element(f.begin(), f.end());
    };
    double tol = 4.0 * std::sqrt(h);
    if (slope0(sigma0) > tol * amp(sigma0))
        fail(ErrorKind::InvalidParams, "sigma0 violates the zero-slope condition at r=0");
    if (slope0(m0) > tol * amp(m0) || slope1(m0) > tol * amp(m0))
        fail(ErrorKind::InvalidParams, "m0 violates a Neumann compatibility condition");
    if (slope0(E0) > tol * amp(E0))
        fail(ErrorKind::InvalidParams, "E0 violates the zero-slope condition at r=0");
}

std::pair<RadialProfile, RadialProfile> velocity_from_profiles(const RadialProfile& sigma,
                                                               const RadialProfile& E,
                                                               const ConstitutiveSet& laws,
                                                               const ModelParams& p) {
    size_t np = sigma.size();
    size_t n = np - 1;
    std::vector<double> r(np), f(np);
    for (size_t i = 0; i < np; ++i) {
        r[i] = (i == n) ? 1.0 : double(i) / n;
        f[i] = laws.mu_of_E(E[i]) * (sigma[i] - p.sigma_bar);
    }
    RadialProfile u = cumulative_r2_integral(r, f);
    RadialProfile v(np, 0.0);
    for (size_t i = 1; i < np; ++i) u[i] /= r[i] * r[i];
    u[0] = 0.0; // limit of r^-2 \int_0^r
    double u1 = u[n];
    for (size_t i = 0; i < np; ++i) v[i] = u[i] - r[i] * u1;
    v[0] = 0.0;
    v[n] = 0.0; // exact by construction; pinned against roundoff
    return {std::move(u), std::move(v)};
}

namespace {

// Backward-Euler step of  coef_t F_t = (D/R^2)(1/r^2)(r^2 F_r)_r + A r F_r
//                         - react F + source
// with the conservative flux stencil (limit row 3 F_rr at r = 0) and either a
// Dirichlet or a reflected-ghost Neumann right end.
RadialProfile radial_implicit_step(const RadialProfile& F, double dt, double coef_t, double D,
                                   double R, double A, double react, double source,
                                   const double* dirichlet_right) {
    size_t np = F.size();
    size_t n = np - 1;
    double h = 1.0 / double(n);
    double Dc = D / (R * R);

    std::vector<double> lower(np, 0.0), diag(np, 0.0), upper(np, 0.0), rhs(np, 0.0);

    diag[0] = coef_t / dt + 6.0 * Dc / (h * h) + react;
    upper[0] = -6.0 * Dc / (h * h);
    rhs[0] = coef_t / dt * F[0] + source;

    for (size_t i = 1; i < n; ++i) {
        double r = i * h;
        double rm = r - h / 2, rp = r + h / 2;
        double dW = Dc * rm * rm / (r * r * h * h);
        double dE = Dc * rp * rp / (r * r * h * h);
        double ad = A * r / (2.0 * h);
        lower[i] = -(dW - ad);
        upper[i] = -(dE + ad);
        diag[i] = coef_t / dt + dW + dE + react;
        rhs[i] = coef_t / dt * F[i] + source;
        if (lower[i] > 0.0 || upper[i] > 0.0)
            fail(ErrorKind::StepTooLarge,
                 "advection dominates diffusion at r=" + std::to_string(r) +
                     "; the implicit matrix is not monotone");
    }

    if (dirichlet_right) {
        lower[n] = 0.0;
        diag[n] = 1.0;
        rhs[n] = *dirichlet_right;
    } else {
        double rm = 1.0 - h / 2, rp = 1.0 + h / 2;
        double dWE = Dc * (rm * rm + rp * rp) / (h * h);
        lower[n] = -dWE;
        diag[n] = coef_t / dt + dWE + react;
        rhs[n] = coef_t / dt * F[n] + source;
    }

    solve_tridiag(lower, diag, upper, rhs);
    return rhs;
}

} // namespace

RadialProfile parabolic_step_sigma(const SimState& state, double dt, const ModelParams& p,
                                   const SimOptions& opts) {
    double u1 = state.u.back();
    // Self-consistent transform carries the factor c on the advection term;
    // the verbatim flag reproduces the published form without it.
    double A = opts.paper_verbatim_transform ? u1 : p.c * u1;
    double one = 1.0;
    return radial_implicit_step(state.sigma, dt, p.c, 1.0, state.R, A, p.lambda, 0.0, &one);
}

RadialProfile parabolic_step_m(const SimState& state, double dt, const ModelParams& p,
                               const SimOptions&) {
    double u1 = state.u.back();
    return radial_implicit_step(state.m, dt, 1.0, p.D_m, state.R, u1, p.beta, p.alpha, nullptr);
}

RadialProfile transport_E(const SimState& state, double dt, const ConstitutiveSet& laws,
                          const ModelParams& p, const SimOptions& opts) {
    size_t np = state.E.size();
    size_t n = np - 1;
    double h = 1.0 / double(n);
    std::vector<double> r(np);
    for (size_t i = 0; i < np; ++i) r[i] = (i == n) ? 1.0 : i * h;

    PchipInterpolant v_itp, E_itp, s_itp, m_itp;
    if (!opts.linear_interp) {
        v_itp = PchipInterpolant(r, state.v);
        E_itp = PchipInterpolant(r, state.E);
        s_itp = PchipInterpolant(r, state.sigma);
        m_itp = PchipInterpolant(r, state.m);
    }
    auto at = [&](const PchipInterpolant& itp, const RadialProfile& f, double x) {
        return opts.linear_interp ? lerp(r, f, x) : itp(x);
    };

    RadialProfile out(np);
    for (size_t i = 0; i < np; ++i) {
        // second-order backward trace of dxi/ds = v(xi)
        double mid = r[i] - 0.5 * dt * state.v[i];
        double foot = r[i] - dt * at(v_itp, state.v, std::clamp(mid, 0.0, 1.0));
        foot = std::clamp(foot, 0.0, 1.0); // characteristics cannot exit: v(0)=v(1)=0

        double Ef = at(E_itp, state.E, foot);
        double sf = at(s_itp, state.sigma, foot);
        double mf = at(m_itp, state.m, foot);
        double k1 = eval_Q(sf, mf, Ef, p, laws);
        double Ep = Ef + dt * k1;
        double k2 = eval_Q(state.sigma[i], state.m[i], Ep, p, laws);
        out[i] = Ef + 0.5 * dt * (k1 + k2);
    }
    return out;
}

namespace {

void check_invariants(const SimState& s, const ModelParams& p) {
    size_t np = s.sigma.size();
    if (s.sigma[np - 1] != 1.0)
        fail(ErrorKind::InvalidParams, "sigma(1) != 1 after a step");
    if (s.v[0] != 0.0 || s.v[np - 1] != 0.0)
        fail(ErrorKind::InvalidParams, "v(0) or v(1) nonzero after a step");
    for (size_t i = 0; i < np; ++i) {
        if (!(s.sigma[i] > 0.0))
            fail(ErrorKind::InvalidParams, "discrete maximum principle: sigma <= 0");
        if (s.m[i] > s.m_bound + 1e-12)
            fail(ErrorKind::InvalidParams, "discrete maximum principle: m exceeded its bound");
        if (s.m[i] < -1e-14)
            fail(ErrorKind::InvalidParams, "discrete maximum principle: m < 0");
        if (s.E[i] < 0.0)
            fail(ErrorKind::InvalidParams, "E < 0 after transport");
    }
    (void)p;
}

} // namespace

SimState advance(const SimState& state, double dt, const ModelParams& p,
                 const ConstitutiveSet& laws, const SimOptions& opts) {
    SimState next = state;
    auto [u, v] = velocity_from_profiles(state.sigma, state.E, laws, p);
    next.u = std::move(u);
    next.v = std::move(v);
    double u1 = next.u.back();

    if (!opts.pin_radius) next.R = state.R * std::exp(u1 * dt); // exact for frozen u(1)
    next.sigma = parabolic_step_sigma(next, dt, p, opts);
    next.m = parabolic_step_m(next, dt, p, opts);
    next.E = transport_E(SimState{state.t, next.R, next.sigma, next.m, state.E, next.u, next.v,
                                  state.m_bound},
                         dt, laws, p, opts);
    next.t = state.t + dt;
    if (opts.enforce_invariants) check_invariants(next, p);
    return next;
}

double DistanceReport::sup_combined() const {
    return std::max({sup_sigma, sup_E, sup_m});
}

namespace {

DistanceReport distance_impl(const SimState& state, const StationarySolution& sol,
                             const ModelParams& p, const PchipInterpolant& E_ref) {
    DistanceReport d;
    size_t np = state.sigma.size();
    size_t n = np - 1;
    double h = 1.0 / double(n);
    double m_eq = p.mde_equilibrium();
    double s2 = 0, e2 = 0, m2 = 0;
    for (size_t i = 0; i < np; ++i) {
        double r = (i == n) ? 1.0 : i * h;
        double phys = std::min(r * state.R, sol.R_star);
        double ds = std::abs(state.sigma[i] - sigma_stationary(phys, sol.R_star, p.lambda));
        double de = std::abs(state.E[i] - E_ref(phys));
        double dm = std::abs(state.m[i] - m_eq);
        d.sup_sigma = std::max(d.sup_sigma, ds);
        d.sup_E = std::max(d.sup_E, de);
        d.sup_m = std::max(d.sup_m, dm);
        s2 += ds * ds;
        e2 += de * de;
        m2 += dm * dm;
    }
    d.l2_sigma = std::sqrt(s2 * h);
    d.l2_E = std::sqrt(e2 * h);
    d.l2_m = std::sqrt(m2 * h);
    d.dR = std::abs(state.R - sol.R_star);
    return d;
}

} // namespace

DistanceReport distance_to_stationary(const SimState& state, const StationarySolution& sol,
                                      const ModelParams& p) {
    return distance_impl(state, sol, p, PchipInterpolant(sol.r, sol.E));
}

SimState make_state(const InitialData& init, const ModelParams& p, const ConstitutiveSet& laws) {
    init.validate();
    SimState s;
    s.t = 0.0;
    s.R = init.R0;
    s.sigma = init.sigma0;
    s.m = init.m0;
    s.E = init.E0;
    s.m_bound = std::max(p.mde_equilibrium(), *std::max_element(init.m0.begin(), init.m0.end()));
    auto [u, v] = velocity_from_profiles(s.sigma, s.E, laws, p);
    s.u = std::move(u);
    s.v = std::move(v);
    return s;
}

TimeSeries simulate(const ModelParams& p, const ConstitutiveSet& laws, const InitialData& init,
                    double T, double dt, double cadence, const SimOptions& opts,
                    const StationarySolution* reference) {
    SimState state = make_state(init, p, laws);
    PchipInterpolant E_ref;
    if (reference) E_ref = PchipInterpolant(reference->r, reference->E);

    TimeSeries series;
    long steps = std::lround(T / dt);
    long every = std::max(1L, std::lround(cadence / dt));

    auto record_scalars = [&](const SimState& s) {
        Scalars row{s.t, s.R, s.u.back(), std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN()};
        if (reference) {
            DistanceReport d = distance_impl(s, *reference, p, E_ref);
            row.dist_sigma = d.sup_sigma;
            row.dist_E = d.sup_E;
            row.dist_m = d.sup_m;
        }
        series.scalars.push_back(row);
    };
    auto record_snapshot = [&](const SimState& s) {
        series.snapshots.push_back(Snapshot{s.t, s.R, s.sigma, s.m, s.E, s.u});
    };

    record_scalars(state);
    record_snapshot(state);
    for (long k = 0; k < steps; ++k) {
        state = advance(state, dt, p, laws, opts);
        if (state.R < opts.radius_collapse)
            fail(ErrorKind::RadiusCollapse,
                 "R(t) fell below " + std::to_string(opts.radius_collapse) + " at t=" +
                     std::to_string(state.t));
        record_scalars(state);
        if ((k + 1) % every == 0 || (k + 1 == steps && steps % every != 0))
            record_snapshot(state);
    }
    return series;
}

InitialData stationary_init(const StationarySolution& sol, const ModelParams& p, int n) {
    InitialData init;
    init.R0 = sol.R_star;
    size_t np = size_t(n) + 1;
    init.sigma0.resize(np);
    init.m0.assign(np, p.mde_equilibrium());
    init.E0.resize(np);
    PchipInterpolant E_itp(sol.r, sol.E);
    for (size_t i = 0; i < np; ++i) {
        double r = (i == np - 1) ? 1.0 : double(i) / n;
        double phys = std::min(r * sol.R_star, sol.R_star);
        init.sigma0[i] = sigma_stationary(phys, sol.R_star, p.lambda);
        init.E0[i] = E_itp(phys);
    }
    init.sigma0.back() = 1.0;
    return init;
}

InitialData perturbed_init(const StationarySolution& sol, const ModelParams& p, int n,
                           double amplitude, std::uint64_t seed) {
    InitialData init = stationary_init(sol, p, n);
    size_t np = init.E0.size();
    if (seed == 0) {
        for (double& e : init.E0) e *= 1.0 + amplitude;
        return init;
    }
    // Smooth seeded bump: cosine modes have zero slope at both ends, so the
    // compatibility conditions survive the perturbation.
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    double c[4];
    for (double& ck : c) ck = unit();
    double norm = 0.0;
    std::vector<double> w(np);
    for (size_t i = 0; i < np; ++i) {
        double r = double(i) / (np - 1);
        double wi = 0.0;
        for (int k = 0; k < 4; ++k) wi += c[k] * std::cos((k + 1) * std::numbers::pi * r);
        w[i] = wi;
        norm = std::max(norm, std::abs(wi));
    }
    for (size_t i = 0; i < np; ++i) init.E0[i] *= 1.0 + amplitude * w[i] / norm;
    return init;
}

ConvergenceVerdict assess_convergence(const TimeSeries& series, double tol, double floor) {
    ConvergenceVerdict v;
    const auto& sc = series.scalars;
    if (sc.empty() || std::isnan(sc.back().dist_sigma)) return v;
    auto combined = [](const Scalars& s) {
        return std::max({s.dist_sigma, s.dist_E, s.dist_m});
    };
    v.final_distance = combined(sc.back());
    v.monotone_tail = true;
    size_t half = sc.size() / 2;
    for (size_t i = half + 1; i < sc.size(); ++i) {
        double prev = combined(sc[i - 1]);
        double cur = combined(sc[i]);
        if (cur > prev && cur > floor) {
            v.monotone_tail = false;
            break;
        }
    }
    v.converged = v.final_distance <= tol && v.monotone_tail;
    return v;
}

} // namespace tumor
