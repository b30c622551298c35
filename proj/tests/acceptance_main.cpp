// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not calibrated at run time.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "tumor/model.hpp"
#include "tumor/oracles.hpp"
#include "tumor/stationary.hpp"
#include "tumor/timedep.hpp"

using namespace tumor;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelParams params_with_mu(double mu) {
    ModelParams p;
    p.mu = mu;
    return p;
}

struct StationaryCase {
    ModelParams p;
    ConstitutiveSet laws;
    double R_star = 0.0;
    StationarySolution sol;
};

StationaryCase make_case(double mu, int shoot_n) {
    StationaryCase c{params_with_mu(mu), default_laws(params_with_mu(mu))};
    c.R_star = find_R_star(c.p, c.laws, ShootOptions{.grid_n = shoot_n});
    c.sol = assemble_stationary(c.p, c.laws, c.R_star, shoot_n);
    return c;
}

struct RunArtifacts {
    TimeSeries series;
    ConvergenceVerdict verdict;
    double R0 = 0.0;
};

RunArtifacts perturbed_run(const StationaryCase& c, double m0_factor = 1.0) {
    InitialData init = perturbed_init(c.sol, c.p, 512, 0.05, 0);
    if (m0_factor != 1.0)
        init.m0.assign(init.m0.size(), m0_factor * c.p.mde_equilibrium());
    RunArtifacts out;
    out.R0 = init.R0;
    out.series = simulate(c.p, c.laws, init, 40.0, 1e-3, 0.5, {}, &c.sol);
    out.verdict = assess_convergence(out.series, 1e-2, 1e-4);
    return out;
}

} // namespace

int main() {
    const double kPaperR05 = 1.9635, kPaperR3 = 1.9715, kPaperR10 = 1.99282;

    // ---- criteria 1 & 2: stationary radii against the published values ----
    auto t0 = std::chrono::steady_clock::now();
    StationaryCase c05 = make_case(0.5, 1024);
    double sec1 = seconds_since(t0);
    report(1,
           std::abs(c05.R_star - kPaperR05) <= 0.01 * kPaperR05 && sec1 <= 5.0,
           fmt("R*(mu=0.5) = %.6f (target %.4f +/- 1%%), %.2f s", c05.R_star, kPaperR05, sec1));

    t0 = std::chrono::steady_clock::now();
    StationaryCase c3 = make_case(3.0, 1024);
    StationaryCase c10 = make_case(10.0, 1024);
    double sec2 = seconds_since(t0);
    report(2,
           std::abs(c3.R_star - kPaperR3) <= 0.01 * kPaperR3 &&
               std::abs(c10.R_star - kPaperR10) <= 0.01 * kPaperR10 &&
               c05.R_star < c3.R_star && c3.R_star < c10.R_star && sec2 <= 15.0,
           fmt("R*(3.0) = %.6f, R*(10) = %.6f, ordering %s, %.2f s", c3.R_star, c10.R_star,
               (c05.R_star < c3.R_star && c3.R_star < c10.R_star) ? "strict" : "VIOLATED", sec2));

    // ---- criterion 3: stationary residuals halve under grid doubling ----
    {
        ModelParams p = params_with_mu(0.5);
        ConstitutiveSet laws = default_laws(p);
        StationarySolution sols[3];
        int grids[3] = {512, 1024, 2048};
        for (int i = 0; i < 3; ++i) {
            double R = find_R_star(p, laws, ShootOptions{.grid_n = grids[i]});
            sols[i] = assemble_stationary(p, laws, R, grids[i]);
        }
        const auto& fine = sols[2].residuals;
        bool small = fine.E <= 1e-5 && fine.u <= 1e-5 && fine.sigma <= 1e-5;
        bool halving = true;
        for (int i = 1; i < 3; ++i) {
            halving = halving && sols[i].residuals.E <= 0.5 * sols[i - 1].residuals.E;
            halving = halving && sols[i].residuals.u <= 0.5 * sols[i - 1].residuals.u;
        }
        bool sigma_floor = fine.sigma <= 1e-12;
        report(3, small && halving && sigma_floor,
               fmt("residuals at n=2048: E %.2e, u %.2e, sigma %.2e; halving %s",
                   fine.E, fine.u, fine.sigma, halving ? "yes" : "NO"));
    }

    // ---- criterion 4: stability at mu = 0.5 ----
    t0 = std::chrono::steady_clock::now();
    RunArtifacts run05 = perturbed_run(c05);
    double sec4 = seconds_since(t0);
    report(4, run05.verdict.converged && sec4 <= 60.0,
           fmt("final sup distance %.2e (tol 1e-2), tail %s, %.1f s",
               run05.verdict.final_distance,
               run05.verdict.monotone_tail ? "monotone-to-floor" : "NOT monotone", sec4));

    // ---- criterion 5: instability case mu = 10 ----
    {
        RunArtifacts run10 = perturbed_run(c10);
        const Snapshot& last = run10.series.snapshots.back();
        bool band_dynamic = true;
        for (double e : last.E) band_dynamic = band_dynamic && e >= 0.05 && e <= 0.30;
        size_t in_band = 0;
        for (double e : c10.sol.E) in_band += (e >= 0.35 && e <= 0.55);
        bool band_stationary = in_band * 2 >= c10.sol.E.size();
        bool not_converged = !run10.verdict.converged;
        report(5, band_dynamic && band_stationary && not_converged,
               fmt("final E in [0.05,0.30]: %s; stationary E in [0.35,0.55] on >= half grid: "
                   "%s (%zu/%zu, actual range [%.3f, %.3f]); non-convergence: %s "
                   "(final distance %.2e)",
                   band_dynamic ? "yes" : "NO", band_stationary ? "yes" : "NO", in_band,
                   c10.sol.E.size(), c10.sol.E.back(), c10.sol.E.front(),
                   not_converged ? "yes" : "NO (run converged)", run10.verdict.final_distance));

        // ---- criterion 9 needs the full acceptance run set; gather it ----
        RunArtifacts run_m = perturbed_run(c05, 2.0); // criterion 6 protocol

        // ---- criterion 6: MDE relaxation bound ----
        {
            double m_gap = c05.p.mde_equilibrium(); // |m0 - alpha/beta| = alpha/beta
            bool ok = true;
            double worst = -1e300;
            for (const Scalars& s : run_m.series.scalars) {
                double bound = m_gap * std::exp(-c05.p.beta * s.t) + 1e-3;
                worst = std::max(worst, s.dist_m - bound);
                ok = ok && s.dist_m <= bound;
            }
            report(6, ok, fmt("sup|m - alpha/beta| within exp bound + 1e-3 (worst margin %.2e)",
                              worst));
        }

        // ---- criterion 7: singular-IVP oracle suite ----
        {
            t0 = std::chrono::steady_clock::now();
            auto results = run_oracle_suite();
            double sec7 = seconds_since(t0);
            auto pass_of = [&](const char* name) {
                for (const auto& r : results)
                    if (r.name == name) return r.pass;
                return false;
            };
            bool a = pass_of("integrator_order");
            bool b = pass_of("branch_selection_alpha_x");
            bool c = pass_of("slope_difference_quotients");
            bool d = pass_of("eps_family_cauchy");
            bool all = true;
            for (const auto& r : results) all = all && r.pass;
            report(7, a && b && c && d && sec7 <= 5.0,
                   fmt("order %s, C1 branch %s, slopes %s, eps-Cauchy %s; full suite %s; %.2f s",
                       a ? "ok" : "FAIL", b ? "ok" : "FAIL", c ? "ok" : "FAIL",
                       d ? "ok" : "FAIL", all ? "ok" : "FAIL", sec7));
        }

        // ---- criterion 8: shooting structure ----
        {
            ModelParams p = c05.p;
            ConstitutiveSet laws = default_laws(p);
            ShootOptions opts; // n = 1024
            bool ok = true;
            std::string detail;
            for (double R : {0.5, 1.0}) {
                ShootResult s = shoot(R, p, laws, opts);
                bool good = s.termination == ShootTermination::ReachedZero && s.tau == 0.0 &&
                            s.I0 < 0.0;
                ok = ok && good;
                detail += fmt("tau(%.1f)=%g I0=%.2e; ", R, s.tau, s.I0);
            }
            {
                ShootResult s = shoot(c05.R_star, p, laws, opts);
                double tol_I = 1e-12 * std::pow(c05.R_star, 3) * laws.mu_of_E(p.E_cap);
                bool good = s.termination == ShootTermination::ReachedZero &&
                            std::abs(s.I0) <= 2.0 * tol_I;
                ok = ok && good;
                detail += fmt("|I0(R*)|=%.2e (tol %.2e); ", std::abs(s.I0), 2.0 * tol_I);
            }
            double taut_prev = -1.0;
            for (double R : {4.0, 5.0, 6.0}) {
                double tau = tau_of(R, p, laws, opts);
                if (R != 5.0) ok = ok && tau > 0.0;
                ok = ok && tau / R >= taut_prev;
                detail += fmt("tau~(%.0f)=%.4f; ", R, tau / R);
                taut_prev = tau / R;
            }
            report(8, ok, detail);
        }

        // ---- criterion 9: invariant suites over the acceptance run set ----
        {
            bool ok = true;
            std::string note;
            // discrete maximum principle + exact boundary pins on snapshots
            auto scan_series = [&](const RunArtifacts& run, double m_bound, double R_star,
                                   const char* tag) {
                for (const Snapshot& snap : run.series.snapshots) {
                    for (double v : snap.sigma)
                        if (!(v > 0.0)) { ok = false; note += fmt("%s: sigma<=0; ", tag); return; }
                    for (double v : snap.m)
                        if (v > m_bound + 1e-12) { ok = false; note += fmt("%s: m bound; ", tag); return; }
                    if (snap.sigma.back() != 1.0) { ok = false; note += fmt("%s: sigma(1); ", tag); return; }
                    if (snap.u.front() != 0.0) { ok = false; note += fmt("%s: u(0); ", tag); return; }
                }
                double min_R = 1e300;
                for (const Scalars& s : run.series.scalars) min_R = std::min(min_R, s.R);
                if (!(min_R > 0.5 * std::min(run.R0, R_star))) {
                    ok = false;
                    note += fmt("%s: R positivity; ", tag);
                }
            };
            scan_series(run05, c05.p.mde_equilibrium(), c05.R_star, "mu=0.5");
            scan_series(run10, c10.p.mde_equilibrium(), c10.R_star, "mu=10");
            scan_series(run_m, 2.0 * c05.p.mde_equilibrium(), c05.R_star, "m-relax");

            // sandwich + sign structure on representative shoots
            for (const StationaryCase* c : {&c05, &c3, &c10}) {
                double m_eq = c->p.mde_equilibrium();
                double ER = c->sol.E.back();
                for (size_t i = 0; i < c->sol.r.size(); ++i) {
                    double h = h_root(c->sol.sigma[i], m_eq, c->p, c->laws);
                    if (!(c->sol.E[i] >= ER - 1e-8 && c->sol.E[i] <= h + 1e-8)) {
                        ok = false;
                        note += fmt("sandwich mu=%.1f at r=%.3f; ", c->p.mu, c->sol.r[i]);
                        break;
                    }
                    if (i > 0 && i + 1 < c->sol.r.size() && !(c->sol.u[i] < 0.0)) {
                        ok = false;
                        note += fmt("u sign mu=%.1f; ", c->p.mu);
                        break;
                    }
                }
            }
            report(9, ok, ok ? "maximum principle, sandwich, signs, boundary pins, R positivity"
                             : note);
        }
    }

    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
