#include "tumor/numerics.hpp"

#include <algorithm>
#include <cassert>

namespace tumor {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

std::vector<double> cumulative_r2_integral(std::span<const double> r, std::span<const double> f) {
    size_t n = r.size();
    assert(f.size() == n && n >= 2);
    std::vector<double> I(n, 0.0);
    for (size_t i = 1; i < n; ++i) {
        double a = r[i - 1], b = r[i];
        double m0 = (b * b * b - a * a * a) / 3.0;
        double m1 = (b * b * b * b - a * a * a * a) / 4.0 - a * m0;
        I[i] = I[i - 1] + f[i - 1] * m0 + (f[i] - f[i - 1]) / (b - a) * m1;
    }
    return I;
}

void solve_tridiag(std::span<const double> lower, std::span<double> diag,
                   std::span<const double> upper, std::span<double> rhs) {
    size_t n = diag.size();
    assert(lower.size() == n && upper.size() == n && rhs.size() == n);
    for (size_t i = 1; i < n; ++i) {
        double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

PchipInterpolant::PchipInterpolant(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    size_t n = x_.size();
    assert(n >= 2 && y_.size() == n);
    d_.assign(n, 0.0);

    std::vector<double> h(n - 1), del(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        del[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    if (n == 2) {
        d_[0] = d_[1] = del[0];
    } else {
        for (size_t i = 1; i + 1 < n; ++i) {
            if (del[i - 1] == 0.0 || del[i] == 0.0 || (del[i - 1] > 0) != (del[i] > 0)) {
                d_[i] = 0.0; // local extremum: flat slope keeps monotonicity
            } else {
                double w1 = 2 * h[i] + h[i - 1];
                double w2 = h[i] + 2 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        // One-sided three-point end slopes, clipped as in PCHIP.
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if ((d > 0) != (d0 > 0) || d0 == 0.0)
                d = 0.0;
            else if ((d0 > 0) != (d1 > 0) && std::abs(d) > 3 * std::abs(d0))
                d = 3 * d0;
            return d;
        };
        d_[0] = end_slope(h[0], h[1], del[0], del[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    }

    uniform_ = true;
    h0_ = h[0];
    for (size_t i = 1; i + 1 < n; ++i)
        if (std::abs(h[i] - h0_) > 1e-12 * std::abs(h0_)) { uniform_ = false; break; }
}

double PchipInterpolant::operator()(double xq) const {
    size_t n = x_.size();
    if (xq <= x_.front()) return y_.front();
    if (xq >= x_.back()) return y_.back();
    size_t i;
    if (uniform_) {
        i = static_cast<size_t>((xq - x_.front()) / h0_);
        i = std::min(i, n - 2);
        while (i > 0 && xq < x_[i]) --i;
        while (i + 2 < n && xq > x_[i + 1]) ++i;
    } else {
        i = std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin() - 1;
        i = std::min(i, n - 2);
    }
    double h = x_[i + 1] - x_[i];
    double t = (xq - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1;
    double h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2;
    double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double lerp(std::span<const double> x, std::span<const double> y, double xq) {
    size_t n = x.size();
    if (xq <= x.front()) return y.front();
    if (xq >= x.back()) return y.back();
    size_t i = std::upper_bound(x.begin(), x.end(), xq) - x.begin() - 1;
    i = std::min(i, n - 2);
    double t = (xq - x[i]) / (x[i + 1] - x[i]);
    return y[i] + t * (y[i + 1] - y[i]);
}

} // namespace tumor
