#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tumor {

/// Physical constants and constitutive-law coefficients.
/// Defaults are the reference experiment set (gamma=10, alpha=0.5, beta=1,
/// lambda=2, sigma_bar=0.7, mu1=0.8, mu=0.5); c and D_m only set transient
/// time scales and drop out of the stationary problem.
struct ModelParams {
    double c = 1e-3;        // nutrient diffusion / growth time-scale ratio
    double lambda = 2.0;    // nutrient consumption rate
    double D_m = 1.0;       // MDE diffusivity
    double alpha = 0.5;     // MDE production rate
    double beta = 1.0;      // MDE decay rate
    double gamma = 10.0;    // ECM degradation rate
    double sigma_bar = 0.7; // apoptosis threshold, in (0,1)
    double mu = 0.5;        // mobility coefficient scale
    double mu1 = 0.8;       // ECM reorganization scale
    double E_cap = 1.0;     // upper bound N for the ECM root search

    double mde_equilibrium() const { return alpha / beta; }

    /// Throws Error(InvalidParams) if any field violates its invariant.
    void validate() const;

    /// Out-of-range fields relative to the published parameter table
    /// (warnings only; several reference runs sit outside the table).
    std::vector<std::string> range_warnings() const;
};

/// Flat JSON with exactly the ModelParams field names; unknown keys rejected.
/// With partial_ok, absent keys keep their defaults (CLI config surface).
nlohmann::json params_to_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j, bool partial_ok = false);

/// mu(E), phi(E) and their derivatives. User-supplied laws must keep
/// mu > 0 decreasing and phi decreasing with phi(0) > 0.
struct ConstitutiveSet {
    std::function<double(double)> mu_of_E;
    std::function<double(double)> mu_prime;
    std::function<double(double)> phi_of_E;
    std::function<double(double)> phi_prime;
};

/// The reference laws mu(E) = mu/(1+E), phi(E) = mu1*(1-E).
ConstitutiveSet default_laws(const ModelParams& p);

/// Reaction term Q(sigma, m, E) = -gamma*m*E + phi(E) - E*mu(E)*(sigma - sigma_bar).
double eval_Q(double sigma, double m, double E, const ModelParams& p, const ConstitutiveSet& laws);

struct QPartials {
    double dQ_dE;
    double dQ_dsigma;
};
QPartials eval_Q_partials(double sigma, double m, double E, const ModelParams& p,
                          const ConstitutiveSet& laws);

/// Unique root h in (0, E_cap] of Q(sigma, m, .) = 0 by bisection to absolute
/// width tol. Throws Error(NoSignChange) when the structural bracket fails.
double h_root(double sigma, double m, const ModelParams& p, const ConstitutiveSet& laws,
              double tol = 1e-12);

/// Closed-form stationary nutrient profile sigma(r) = R sinh(sqrt(lambda) r) / (r sinh(sqrt(lambda) R)),
/// continuous at r = 0 via the series limit.
double sigma_stationary(double r, double R, double lambda);

/// d sigma / dr of the profile above (zero at r = 0).
double sigma_stationary_dr(double r, double R, double lambda);

/// Necessary stationary-radius condition sigma(0) = sqrt(lambda) R / sinh(sqrt(lambda) R) < sigma_bar.
bool viability(double R, const ModelParams& p);

/// Sampled check of the structural conditions on (0,1] x (0,E_cap]:
///   dQ/dE + mu(E) sigma_bar < 0   and   Q(sigma, alpha/beta, E_cap) < 0.
struct StructuralReport {
    struct Violation {
        double sigma;
        double E;     // E_cap for condition-2 hits
        double value; // offending quantity (>= 0)
        int condition; // 1 or 2
    };
    long total_violations = 0;
    std::vector<Violation> samples; // first few, for reporting
    int n_sigma = 0, n_E = 0;

    bool ok() const { return total_violations == 0; }
};
StructuralReport check_structural(const ModelParams& p, const ConstitutiveSet& laws,
                                  int n_sigma = 200, int n_E = 200);

} // namespace tumor
