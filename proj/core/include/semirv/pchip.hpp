#pragma once

#include <vector>

namespace semirv {

// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
// slopes).  Monotone data produce a monotone interpolant; nonnegative
// monotone data never overshoot below zero.
class PchipInterpolant {
  public:
    PchipInterpolant() = default;
    PchipInterpolant(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

    // Integral of the interpolant from x[0] to t (t clamped to the node range).
    double integral_to(double t) const;

    bool empty() const { return x_.empty(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;        // node derivatives
    std::vector<double> cum_;      // cumulative integral at nodes
};

}  // namespace semirv
