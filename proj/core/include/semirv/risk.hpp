#pragma once

#include <cstdint>
#include <vector>

#include "semirv/dist.hpp"
#include "semirv/oracle.hpp"

namespace semirv {

enum class NegativePartPolicy { None, ShiftedExp };

// Discrete-time risk model: per-period insurance losses X_i = e^(L_i) with
// ln-domain law insurance[i], and discount factors Y_i = e^(ln-domain draw)
// from financial[i].  S_k = sum_{i<=k} X_i prod_{j<=i} Y_j, M_k = running max.
// Under policy None, X_i >= e^(cutoff) >= 1; ShiftedExp moves the ln-domain
// head atom onto (-inf, 0] as -Exp(rate), exercising the positive-part
// operator in the recursion.
struct RiskModelConfig {
    int n = 1;
    double alpha = 1.0;
    std::vector<SemiRVDistribution> insurance;
    std::vector<SemiRVDistribution> financial;
    NegativePartPolicy negative_part = NegativePartPolicy::None;
    double shifted_exp_rate = 1.0;

    static RiskModelConfig make(double alpha,
                                std::vector<TailFunctionSpec> insurance_f,
                                std::vector<TailFunctionSpec> financial_f,
                                NegativePartPolicy policy = NegativePartPolicy::None,
                                double shifted_exp_rate = 1.0);
};

struct PathSample {
    double s_n = 0.0;  // discounted aggregate loss at the horizon
    double m_n = 0.0;  // running maximum of the partial sums
};

// Deterministic per (config, count, seed); block-parallel underneath with
// one RNG stream per path, so results do not depend on the worker count and
// estimates at nested horizons share path prefixes.
std::vector<PathSample> simulate_paths(const RiskModelConfig& config,
                                       std::uint64_t count, std::uint64_t seed);

struct RuinEstimate {
    double point = 0.0;     // psi(x, horizon) estimate
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double sn_point = 0.0;  // companion P(S_horizon > x) on the same paths
    WilsonInterval sn_interval;
};

RuinEstimate ruin_mc(const RiskModelConfig& config, double x, int horizon,
                     std::uint64_t sample_count, std::uint64_t seed);

struct SnGridOptions {
    std::size_t log_cells = 1 << 16;
    std::size_t real_cells = 1 << 17;
    double t_margin = 2.0;  // log-domain headroom above max ln(x)
};

// Non-MC oracle for P(S_n > x): backward recursion T <- Y (X + T)^+ carried
// on alternating log/real grids (grid convolution for the products, direct
// grid addition for the sums), with floor/ceil rounding runs giving a
// rigorous bracket.  Policy None only.
std::vector<TailBracket> sn_tail_oracle_grid(const RiskModelConfig& config,
                                             const std::vector<double>& x_grid,
                                             const SnGridOptions& opts = {});

struct RiskPrediction {
    TailValue value;
    bool conditions_ok = true;  // finite-range dominance diagnostic
};

// alpha^n x^(-alpha) (f_n (x) f*_1 (x) ... (x) f*_n)(ln x); the dominance
// conditions are checked on a small grid and flag the result, never block it.
// The _at_log_x variants take t = ln x directly, for x beyond double range.
RiskPrediction predict_thm31(const RiskModelConfig& config, double x);
RiskPrediction predict_thm31_at_log_x(const RiskModelConfig& config, double t);

enum class Thm32Case { I, II, III, IV };

TailValue predict_thm32(const RiskModelConfig& config, double x, Thm32Case which);
TailValue predict_thm32_at_log_x(const RiskModelConfig& config, double t,
                                 Thm32Case which);

// Gamma-quotient closed form for the pure-power parameterization
// f_i(t) = t^(gamma*-1) l*, f*_i(t) = t^(gamma_i-1) l_i with gamma*, gamma_i > 0.
TailValue predict_theoremA(const RiskModelConfig& config, double x);
TailValue predict_theoremA_at_log_x(const RiskModelConfig& config, double t);

struct DominanceReport {
    // ratios f_1(t) / (f_k (x) f*_2 ... (x) f*_k)(t), one row per k = 2..n
    std::vector<std::vector<double>> condition_31;
    // ratios f_{k-1}(t) / (f_k (x) f*_k)(t), one row per k = 2..n
    std::vector<std::vector<double>> condition_33;
    bool passes = true;  // every row decreasing over the last half of the grid
};

DominanceReport check_dominance_conditions(const RiskModelConfig& config,
                                           const std::vector<double>& t_grid);

}  // namespace semirv
