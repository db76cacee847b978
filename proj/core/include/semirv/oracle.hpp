#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "semirv/dist.hpp"
#include "semirv/numeric.hpp"
#include "semirv/tailfn.hpp"

namespace semirv {

// Probability carried in the log domain so that deep tails (far below
// 1e-300) stay representable; value() may underflow to 0, the log never.
struct TailValue {
    double log_value = kNegInf;

    double value() const { return std::exp(log_value); }
    static TailValue from_value(double p) {
        return TailValue{p > 0.0 ? std::log(p) : kNegInf};
    }
    double ratio_to(const TailValue& other) const {
        return std::exp(log_value - other.log_value);
    }
};

// f1 (x) f2 = int_0^x f1(x-y) f2(y) dy by adaptive quadrature, partition
// seeded at both functions' kinks and at x/2.
double function_convolve(const TailFunctionSpec& f1, const TailFunctionSpec& f2,
                         double x, double rel_tol = 1e-9);

struct ConvolveNOptions {
    double rel_tol = 1e-6;          // Richardson step-halving target
    std::size_t initial_nodes = 256;
    std::size_t max_nodes = 1 << 14;
};

// n-fold function convolution f_1 (x) ... (x) f_n at x.  Inner folds are
// tabulated on a log-spaced grid and interpolated with a monotone cubic;
// the node count is doubled until two successive evaluations agree to
// rel_tol (Richardson step-halving).
double function_convolve_n(const std::vector<TailFunctionSpec>& fs, double x,
                           const ConvolveNOptions& opts = {});

// int_0^x (f_1 (x) ... (x) f_n)(y) dy, same machinery applied to the
// identity g_n^I = f_1^I (x) f_2 (x) ... (x) f_n.
double function_convolve_n_integral(const std::vector<TailFunctionSpec>& fs,
                                    double x, const ConvolveNOptions& opts = {});

// P(X1 + X2 > x) for two continuous distributions, computed with the
// e^(-alpha x) factor pulled out of the integrand so tails below the double
// underflow threshold keep ~10 significant digits.
TailValue conv_tail_2(const SemiRVDistribution& d1, const SemiRVDistribution& d2,
                      double x, double rel_tol = 1e-12);

// Mixed pair: exact sum over the lattice factor, closed-form tails inside.
TailValue conv_tail_lattice_continuous(const SemiRVDistribution& lattice_dist,
                                       const SemiRVDistribution& continuous_dist,
                                       double x);

enum class BoundaryRule {
    MassToCell,       // mass represented at its cell's left edge
    MassToRightEdge,  // mass pushed to the right edge
};

struct GridConvolutionPlan {
    double step = 1.0 / 1024.0;
    double x_max = 100.0;
    BoundaryRule rule = BoundaryRule::MassToCell;
    double max_bracket_rel = 0.0;  // 0 disables the width check
};

struct TailBracket {
    double lower = 0.0;
    double upper = 0.0;
    double midpoint() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
    bool contains(double v) const { return v >= lower && v <= upper; }
};

// Tail of the n-fold sum on a discretization grid under one boundary rule.
std::vector<double> conv_tail_n_grid(const std::vector<SemiRVDistribution>& ds,
                                     const GridConvolutionPlan& plan,
                                     const std::vector<double>& x_grid);

// Rigorous two-sided Stieltjes bracket: runs both boundary rules.  Throws
// AccuracyError if plan.max_bracket_rel > 0 and any bracket is wider.
std::vector<TailBracket> conv_tail_n_grid_bracket(
    const std::vector<SemiRVDistribution>& ds, const GridConvolutionPlan& plan,
    const std::vector<double>& x_grid);

// Exact finite summation of lattice pmf convolutions; error is floating
// point only (compensated summation).
double lattice_conv_tail(const std::vector<SemiRVDistribution>& ds, long long k);

struct WilsonInterval {
    double point = 0.0;
    double low = 0.0;
    double high = 0.0;
    double half_width() const { return 0.5 * (high - low); }
};

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n,
                               double z = 1.959963984540054);

struct McTailEstimate {
    double estimate = 0.0;
    double half_width_95 = 0.0;
    WilsonInterval interval;
    std::uint64_t samples = 0;
};

// Monte Carlo P(sum X_i > x) with a Wilson 95% interval.  Block-deterministic:
// the result is a pure function of (ds, x, sample_count, seed).
McTailEstimate mc_conv_tail(const std::vector<SemiRVDistribution>& ds, double x,
                            std::uint64_t sample_count, std::uint64_t seed);

}  // namespace semirv
