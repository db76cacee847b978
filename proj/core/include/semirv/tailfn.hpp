#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace semirv {

// f(x) = c
struct ConstantFamily {
    double c = 1.0;
};

// f(x) = c * (1 + x)^gamma ; regularly varying with index gamma.
struct LogPowerFamily {
    double gamma = 0.0;
    double c = 1.0;
};

// f(x) = c * (ln(e + x))^gamma ; slowly varying for every gamma.
struct LogLogPowerFamily {
    double gamma = 0.0;
    double c = 1.0;
};

// f(x) = exp(C * x^beta + D), C > 0, 0 < beta < 1 ; not regularly varying.
struct ExpPowerFamily {
    double C = 1.0;
    double beta = 0.5;
    double D = 0.0;
};

// Piecewise-linear sawtooth with f(x)/x oscillating between 1 and 2, period
// structure [4^k, 4^(k+1)).  Below x = 1 the function is held at f(1) = 2.
struct PiecewiseOscillatingFamily {};

// Karamata-built slowly varying factor: f(x) = c0 * exp(int_a^x eps(y) dy)
// with eps(y) = eps_coeff * y^(-eps_power) and a = ln(a0).  eps_power = 1
// reproduces a pure power (index eps_coeff); eps_power < 1 gives the
// exp-power shape.
struct KaramataFamily {
    double c0 = 1.0;
    double eps_coeff = 0.5;
    double eps_power = 0.5;
    double a0 = 2.718281828459045;
};

enum class FamilyKind {
    Constant,
    LogPower,
    LogLogPower,
    ExpPower,
    PiecewiseOscillating,
    KaramataBuilt,
};

// A parameterized slowly/regularly varying function f together with its
// exact class metadata.  The regular-variation index and integral
// divergence are derived analytically from the family parameters, never
// inferred numerically.
class TailFunctionSpec {
  public:
    using Family = std::variant<ConstantFamily, LogPowerFamily, LogLogPowerFamily,
                                ExpPowerFamily, PiecewiseOscillatingFamily,
                                KaramataFamily>;

    explicit TailFunctionSpec(Family family, bool lattice = false);

    // f(x) for x >= 0.  May overflow to +inf for exp-power shapes at very
    // large x; use log_eval there.
    double eval(double x) const;

    // ln f(x); exact in the log domain for every family.
    double log_eval(double x) const;

    // f'(x).  Throws OneSidedDerivativeError at a kink, with both slopes.
    double derivative(double x) const;

    // f'(x)/f(x), closed form per family; right-continuous at kinks.  Cheap
    // (no quadrature), used in Newton iterations on the tail.
    double log_derivative(double x) const;

    // f^I(x) = int_0^x f(y) dy; closed form for Constant/LogPower, adaptive
    // quadrature (rel. tol 1e-10) otherwise.
    double integral(double x) const;

    // x f(x) / f^I(x).  Requires a divergent integral; the limit is
    // gamma + 1 for regularly varying families.
    double karamata_ratio(double x) const;

    // log(f(x t) / f(x)) / log(t) along the grid; converges to the
    // regular-variation index when one exists.
    std::vector<double> rv_index_estimate(double t,
                                          const std::vector<double>& x_grid) const;

    std::optional<double> gamma_index() const { return gamma_index_; }
    bool divergent_integral() const { return divergent_integral_; }
    bool lattice() const { return lattice_; }
    FamilyKind kind() const;
    const Family& family() const { return family_; }

    // Kink locations in (0, x]; quadratures split on these.
    std::vector<double> breakpoints_up_to(double x) const;

    std::string family_name() const;

  private:
    Family family_;
    bool lattice_ = false;
    std::optional<double> gamma_index_;
    bool divergent_integral_ = false;
};

// Piecewise-oscillating branch lookup shared with tests: returns (slope,
// intercept) of the linear piece at x >= 1, so f(x) = slope*x + intercept.
std::pair<double, double> oscillating_branch(double x);

}  // namespace semirv
