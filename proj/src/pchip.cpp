#include "otmesh/pchip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace otmesh {

namespace {

/// Index of the interval [x_k, x_{k+1}] containing t (clamped to the ends).
size_t interval_of(const std::vector<double>& x, double t) {
    if (t <= x.front()) return 0;
    if (t >= x[x.size() - 2]) return x.size() - 2;
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    return static_cast<size_t>(it - x.begin()) - 1;
}

}  // namespace

PchipSpline pchip_build(std::vector<double> x, std::vector<double> y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("pchip_build: need matching arrays, n >= 2");
    for (size_t k = 0; k + 1 < n; ++k)
        if (!(x[k + 1] > x[k])) throw std::invalid_argument("pchip_build: abscissae must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
    for (size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        delta[k] = (y[k + 1] - y[k]) / h[k];
    }

    if (n == 2) {
        d[0] = d[1] = delta[0];
    } else {
        // Interior slopes: weighted harmonic mean where the secants agree in
        // sign, zero at local extrema (Fritsch-Carlson).
        for (size_t k = 1; k + 1 < n; ++k) {
            if (delta[k - 1] * delta[k] <= 0.0) {
                d[k] = 0.0;
            } else {
                const double w1 = 2.0 * h[k] + h[k - 1];
                const double w2 = h[k] + 2.0 * h[k - 1];
                d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
        // One-sided end slopes, clipped to preserve monotonicity.
        auto end_slope = [](double h0, double h1, double del0, double del1) {
            double s = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
            if (s * del0 <= 0.0)
                s = 0.0;
            else if (del0 * del1 < 0.0 && std::abs(s) > 3.0 * std::abs(del0))
                s = 3.0 * del0;
            return s;
        };
        d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    PchipSpline s;
    s.x = std::move(x);
    s.y = std::move(y);
    s.d = std::move(d);
    return s;
}

double PchipSpline::eval(double t) const {
    if (t < x.front()) return y.front() + d.front() * (t - x.front());
    if (t > x.back()) return y.back() + d.back() * (t - x.back());
    const size_t k = interval_of(x, t);
    const double h = x[k + 1] - x[k];
    const double s = (t - x[k]) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * y[k] + h10 * h * d[k] + h01 * y[k + 1] + h11 * h * d[k + 1];
}

double PchipSpline::derivative(double t) const {
    if (t < x.front()) return d.front();
    if (t > x.back()) return d.back();
    const size_t k = interval_of(x, t);
    const double h = x[k + 1] - x[k];
    const double s = (t - x[k]) / h;
    const double dh00 = 6.0 * s * (s - 1.0) / h;
    const double dh10 = (3.0 * s - 1.0) * (s - 1.0);
    const double dh01 = -dh00;
    const double dh11 = s * (3.0 * s - 2.0);
    return dh00 * y[k] + dh10 * d[k] + dh01 * y[k + 1] + dh11 * d[k + 1];
}

}  // namespace otmesh
