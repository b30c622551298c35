#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace tumor {

/// sinh(x)/x with a series branch below 1e-4 so the r=0 limit is exact.
inline double sinh_over_x(double x) {
    double ax = std::abs(x);
    if (ax < 1e-4) {
        double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

/// Composite Simpson on [a,b]; n is rounded up to an even count.
double simpson(const std::function<double(double)>& f, double a, double b, int n);

/// Cumulative I(r_i) = \int_0^{r_i} f(rho) rho^2 drho on an ascending grid:
/// f interpolated linearly, the rho^2 moments integrated exactly, so constant
/// and linear integrands are reproduced to roundoff.
std::vector<double> cumulative_r2_integral(std::span<const double> r, std::span<const double> f);

/// Thomas algorithm; lower[0] and upper[n-1] are ignored. Overwrites rhs with the solution.
void solve_tridiag(std::span<const double> lower, std::span<double> diag,
                   std::span<const double> upper, std::span<double> rhs);

/// Monotone cubic (Fritsch-Carlson) interpolant on a strictly increasing grid.
/// Interpolated values never leave the range of the local data, so field
/// bounds survive resampling. Queries outside [x.front(), x.back()] clamp.
class PchipInterpolant {
public:
    PchipInterpolant() = default;
    PchipInterpolant(std::span<const double> x, std::span<const double> y);

    double operator()(double xq) const;

private:
    std::vector<double> x_, y_, d_; // nodes, values, node slopes
    bool uniform_ = false;
    double h0_ = 0.0;
};

/// Piecewise-linear interpolation with clamping, shared fallback path.
double lerp(std::span<const double> x, std::span<const double> y, double xq);

} // namespace tumor
