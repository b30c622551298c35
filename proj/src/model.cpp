#include "tumor/model.hpp"

#include <cmath>

#include "tumor/errors.hpp"
#include "tumor/numerics.hpp"

namespace tumor {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::NoSignChange: return "NoSignChange";
        case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorKind::DenominatorVanished: return "DenominatorVanished";
        case ErrorKind::BlowUp: return "BlowUp";
        case ErrorKind::NonConvergent: return "NonConvergent";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::SeedFailure: return "SeedFailure";
        case ErrorKind::StepFailure: return "StepFailure";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
        case ErrorKind::RadiusCollapse: return "RadiusCollapse";
        case ErrorKind::BadConfig: return "BadConfig";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            fail(ErrorKind::InvalidParams, std::string(name) + " must be strictly positive");
    };
    positive(c, "c");
    positive(lambda, "lambda");
    positive(D_m, "D_m");
    positive(alpha, "alpha");
    positive(beta, "beta");
    positive(gamma, "gamma");
    positive(mu, "mu");
    positive(mu1, "mu1");
    positive(E_cap, "E_cap");
    if (!(sigma_bar > 0.0 && sigma_bar < 1.0))
        fail(ErrorKind::InvalidParams, "sigma_bar must lie in (0,1)");
}

std::vector<std::string> ModelParams::range_warnings() const {
    std::vector<std::string> w;
    auto check = [&](double v, double lo, double hi, const char* name) {
        if (v < lo || v > hi)
            w.push_back(std::string(name) + "=" + std::to_string(v) +
                        " outside the tabulated range [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    };
    check(c, 1e-5, 1e-3, "c");
    check(lambda, 0.05, 2.0, "lambda");
    check(D_m, 1e-3, 10.0, "D_m");
    check(mu, 0.9, 1.45, "mu");
    check(mu1, 0.15, 2.5, "mu1");
    check(gamma, 1.0, 20.0, "gamma");
    check(alpha, 0.01, 5.0, "alpha");
    check(beta, 0.1, 10.0, "beta");
    return w;
}

namespace {
constexpr const char* kFieldNames[] = {"c",     "lambda",    "D_m", "alpha", "beta",
                                       "gamma", "sigma_bar", "mu",  "mu1",   "E_cap"};

double* field_ptr(ModelParams& p, const std::string& name) {
    if (name == "c") return &p.c;
    if (name == "lambda") return &p.lambda;
    if (name == "D_m") return &p.D_m;
    if (name == "alpha") return &p.alpha;
    if (name == "beta") return &p.beta;
    if (name == "gamma") return &p.gamma;
    if (name == "sigma_bar") return &p.sigma_bar;
    if (name == "mu") return &p.mu;
    if (name == "mu1") return &p.mu1;
    if (name == "E_cap") return &p.E_cap;
    return nullptr;
}
} // namespace

nlohmann::json params_to_json(const ModelParams& p) {
    return {
        {"c", p.c},         {"lambda", p.lambda},       {"D_m", p.D_m},
        {"alpha", p.alpha}, {"beta", p.beta},           {"gamma", p.gamma},
        {"sigma_bar", p.sigma_bar}, {"mu", p.mu},       {"mu1", p.mu1},
        {"E_cap", p.E_cap},
    };
}

ModelParams params_from_json(const nlohmann::json& j, bool partial_ok) {
    if (!j.is_object())
        fail(ErrorKind::InvalidParams, "params must be a JSON object");
    ModelParams p;
    for (auto it = j.begin(); it != j.end(); ++it) {
        double* slot = field_ptr(p, it.key());
        if (!slot)
            fail(ErrorKind::InvalidParams, "unknown params key: " + it.key());
        if (!it.value().is_number())
            fail(ErrorKind::InvalidParams, "params." + it.key() + " must be a number");
        *slot = it.value().get<double>();
    }
    if (!partial_ok) {
        for (const char* name : kFieldNames)
            if (!j.contains(name))
                fail(ErrorKind::InvalidParams, std::string("missing params key: ") + name);
    }
    return p;
}

ConstitutiveSet default_laws(const ModelParams& p) {
    double mu = p.mu, mu1 = p.mu1;
    return ConstitutiveSet{
        [mu](double E) { return mu / (1.0 + E); },
        [mu](double E) { double s = 1.0 + E; return -mu / (s * s); },
        [mu1](double E) { return mu1 * (1.0 - E); },
        [mu1](double) { return -mu1; },
    };
}

double eval_Q(double sigma, double m, double E, const ModelParams& p, const ConstitutiveSet& laws) {
    return -p.gamma * m * E + laws.phi_of_E(E) - E * laws.mu_of_E(E) * (sigma - p.sigma_bar);
}

QPartials eval_Q_partials(double sigma, double m, double E, const ModelParams& p,
                          const ConstitutiveSet& laws) {
    double muE = laws.mu_of_E(E);
    return QPartials{
        -p.gamma * m + laws.phi_prime(E) - (muE + E * laws.mu_prime(E)) * (sigma - p.sigma_bar),
        -muE * E,
    };
}

double h_root(double sigma, double m, const ModelParams& p, const ConstitutiveSet& laws,
              double tol) {
    double a = 0.0, b = p.E_cap;
    double qa = eval_Q(sigma, m, a, p, laws);
    double qb = eval_Q(sigma, m, b, p, laws);
    if (!(qa > 0.0) || !(qb < 0.0))
        fail(ErrorKind::NoSignChange,
             "Q does not change sign on (0, E_cap]; structural conditions violated at sigma=" +
                 std::to_string(sigma) + ", m=" + std::to_string(m));
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        double mid = 0.5 * (a + b);
        if (eval_Q(sigma, m, mid, p, laws) > 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

double sigma_stationary(double r, double R, double lambda) {
    double a = std::sqrt(lambda);
    return sinh_over_x(a * r) / sinh_over_x(a * R);
}

double sigma_stationary_dr(double r, double R, double lambda) {
    double a = std::sqrt(lambda);
    if (r < 1e-10) return 0.0; // symmetry: sigma_r(0) = 0
    double x = a * r;
    if (x < 1e-4) {
        // d/dr [sinh(ar)/(ar)] = a * (x/3 + x^3/30)
        return a * (x / 3.0 + x * x * x / 30.0) / sinh_over_x(a * R);
    }
    return a * (std::cosh(x) * x - std::sinh(x)) / (x * x) / sinh_over_x(a * R);
}

bool viability(double R, const ModelParams& p) {
    return 1.0 / sinh_over_x(std::sqrt(p.lambda) * R) < p.sigma_bar;
}

StructuralReport check_structural(const ModelParams& p, const ConstitutiveSet& laws,
                                  int n_sigma, int n_E) {
    StructuralReport rep;
    rep.n_sigma = n_sigma;
    rep.n_E = n_E;
    double m = p.mde_equilibrium();
    constexpr size_t kMaxSamples = 32;
    for (int j = 1; j <= n_sigma; ++j) {
        double sigma = double(j) / n_sigma;
        double q_cap = eval_Q(sigma, m, p.E_cap, p, laws);
        if (q_cap >= 0.0) {
            ++rep.total_violations;
            if (rep.samples.size() < kMaxSamples)
                rep.samples.push_back({sigma, p.E_cap, q_cap, 2});
        }
        for (int k = 1; k <= n_E; ++k) {
            double E = p.E_cap * double(k) / n_E;
            double v = eval_Q_partials(sigma, m, E, p, laws).dQ_dE + laws.mu_of_E(E) * p.sigma_bar;
            if (v >= 0.0) {
                ++rep.total_violations;
                if (rep.samples.size() < kMaxSamples)
                    rep.samples.push_back({sigma, E, v, 1});
            }
        }
    }
    return rep;
}

} // namespace tumor
