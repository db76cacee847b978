#include "semirv/pchip.hpp"

#include <algorithm>
#include <cmath>

#include "semirv/errors.hpp"

namespace semirv {

PchipInterpolant::PchipInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw InvalidSpecError("pchip: need at least two nodes");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(x_[i + 1] > x_[i])) {
            throw InvalidSpecError("pchip: nodes must be strictly increasing");
        }
    }

    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        s[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    d_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            // Weighted harmonic mean (Fritsch-Carlson).
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    // One-sided endpoint slopes, clipped to preserve shape.
    auto endpoint = [](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return d;
    };
    if (n == 2) {
        d_[0] = d_[1] = s[0];
    } else {
        d_[0] = endpoint(h[0], h[1], s[0], s[1]);
        d_[n - 1] = endpoint(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
    }

    // Exact integral of each Hermite cubic piece, accumulated at the nodes.
    cum_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double piece = h[i] * (y_[i] + y_[i + 1]) * 0.5 +
                             h[i] * h[i] * (d_[i] - d_[i + 1]) / 12.0;
        cum_[i + 1] = cum_[i] + piece;
    }
}

std::size_t PchipInterpolant::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double PchipInterpolant::operator()(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double PchipInterpolant::integral_to(double t) const {
    t = std::clamp(t, x_.front(), x_.back());
    const std::size_t i = segment(t);
    double acc = cum_[i];
    const double h = x_[i + 1] - x_[i];
    const double u = (t - x_[i]) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double u4 = u3 * u;
    // Antiderivatives of the Hermite basis on [0,1], scaled by h.
    const double H00 = 0.5 * u4 - u3 + u;
    const double H10 = 0.25 * u4 - (2.0 / 3.0) * u3 + 0.5 * u2;
    const double H01 = -0.5 * u4 + u3;
    const double H11 = 0.25 * u4 - u3 / 3.0;
    acc += h * (H00 * y_[i] + H10 * h * d_[i] + H01 * y_[i + 1] + H11 * h * d_[i + 1]);
    return acc;
}

}  // namespace semirv
