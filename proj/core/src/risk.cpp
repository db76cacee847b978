#include "semirv/risk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <thread>

#include "semirv/errors.hpp"
#include "semirv/fft.hpp"
#include "semirv/numeric.hpp"
#include "semirv/special.hpp"

namespace semirv {

namespace {

constexpr std::uint64_t kBlockSize = 1 << 16;

double draw_insurance(const RiskModelConfig& cfg, const SemiRVDistribution& L,
                      double u) {
    if (cfg.negative_part == NegativePartPolicy::ShiftedExp &&
        L.atom_mass() > 0.0 && u <= L.atom_mass()) {
        // Head-atom mass spread over (-inf, 0] as -Exp(rate); the right tail
        // and P(X > cutoff) are untouched.
        return std::log(u / L.atom_mass()) / cfg.shifted_exp_rate;
    }
    return std::exp(L.quantile(u));
}

PathSample run_path(const RiskModelConfig& cfg, int horizon, CounterRng& rng) {
    PathSample out;
    double discount = 1.0;
    double s = 0.0;
    double m = 0.0;  // S_0 = 0
    for (int i = 0; i < horizon; ++i) {
        const double y = std::exp(cfg.financial[i].quantile(rng.next_double()));
        const double x = draw_insurance(cfg, cfg.insurance[i], rng.next_double());
        discount *= y;
        s += x * discount;
        m = std::max(m, s);
    }
    out.s_n = s;
    out.m_n = m;
    return out;
}

template <typename PerBlock>
void for_each_block(std::uint64_t count, PerBlock&& body) {
    const std::uint64_t blocks = (count + kBlockSize - 1) / kBlockSize;
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(blocks)));
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    std::atomic<std::uint64_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= blocks) return;
                const std::uint64_t begin = b * kBlockSize;
                const std::uint64_t n = std::min(kBlockSize, count - begin);
                body(b, begin, n);
            }
        }));
    }
    for (auto& f : futures) f.get();
}

}  // namespace

RiskModelConfig RiskModelConfig::make(double alpha,
                                      std::vector<TailFunctionSpec> insurance_f,
                                      std::vector<TailFunctionSpec> financial_f,
                                      NegativePartPolicy policy,
                                      double shifted_exp_rate) {
    if (insurance_f.empty() || insurance_f.size() != financial_f.size()) {
        throw InvalidSpecError(
            "risk config: need equal, nonempty insurance and financial lists");
    }
    if (policy == NegativePartPolicy::ShiftedExp && !(shifted_exp_rate > 0.0)) {
        throw InvalidSpecError("risk config: shifted-exp rate must be > 0");
    }
    RiskModelConfig cfg;
    cfg.n = static_cast<int>(insurance_f.size());
    cfg.alpha = alpha;
    cfg.negative_part = policy;
    cfg.shifted_exp_rate = shifted_exp_rate;
    for (auto& f : insurance_f) {
        if (!f.divergent_integral()) {
            throw InvalidSpecError("risk config: every f must have a divergent integral");
        }
        cfg.insurance.push_back(
            SemiRVDistribution::make(alpha, std::move(f), DistKind::Continuous));
    }
    for (auto& f : financial_f) {
        if (!f.divergent_integral()) {
            throw InvalidSpecError("risk config: every f* must have a divergent integral");
        }
        cfg.financial.push_back(
            SemiRVDistribution::make(alpha, std::move(f), DistKind::Continuous));
    }
    return cfg;
}

std::vector<PathSample> simulate_paths(const RiskModelConfig& config,
                                       std::uint64_t count, std::uint64_t seed) {
    if (count < 1) throw DomainError("simulate_paths: count must be >= 1");
    std::vector<PathSample> out(count);
    for_each_block(count, [&](std::uint64_t, std::uint64_t begin,
                              std::uint64_t n) {
        for (std::uint64_t i = 0; i < n; ++i) {
            // One stream per path: estimates at different horizons stay
            // coupled on common prefixes, and the block size cannot matter.
            CounterRng rng(seed, begin + i);
            out[begin + i] = run_path(config, config.n, rng);
        }
    });
    return out;
}

RuinEstimate ruin_mc(const RiskModelConfig& config, double x, int horizon,
                     std::uint64_t sample_count, std::uint64_t seed) {
    if (!(x > 0.0)) throw DomainError("ruin_mc: x must be > 0");
    if (horizon < 1 || horizon > config.n) {
        throw DomainError("ruin_mc: horizon must be in [1, n]");
    }
    if (sample_count < 1) throw DomainError("ruin_mc: sample_count must be >= 1");

    const std::uint64_t blocks = (sample_count + kBlockSize - 1) / kBlockSize;
    std::vector<std::uint64_t> ruin_hits(blocks, 0), sn_hits(blocks, 0);
    for_each_block(sample_count, [&](std::uint64_t block, std::uint64_t begin,
                                     std::uint64_t n) {
        std::uint64_t rh = 0, sh = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            CounterRng rng(seed, begin + i);
            const PathSample p = run_path(config, horizon, rng);
            if (p.m_n > x) ++rh;
            if (p.s_n > x) ++sh;
        }
        ruin_hits[block] = rh;
        sn_hits[block] = sh;
    });
    std::uint64_t rh = 0, sh = 0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        rh += ruin_hits[b];
        sh += sn_hits[b];
    }

    RuinEstimate est;
    const auto wi = wilson_interval(rh, sample_count);
    est.point = wi.point;
    est.ci_low = wi.low;
    est.ci_high = wi.high;
    est.samples = sample_count;
    est.seed = seed;
    est.sn_interval = wilson_interval(sh, sample_count);
    est.sn_point = est.sn_interval.point;
    return est;
}

// ---------------------------------------------------------------------------
// Grid recursion oracle
// ---------------------------------------------------------------------------

namespace {

enum class Rounding { Down, Up };

// Masses on a uniform grid plus the overflow lump (values >= the grid end).
struct GridMass {
    std::vector<double> m;
    double overflow = 0.0;
};

GridMass conv_grid(const GridMass& a, const GridMass& b, std::size_t cells) {
    auto full = convolve(a.m, b.m, 4096);
    GridMass out;
    out.m.assign(cells, 0.0);
    double spill = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (i < cells) {
            out.m[i] = full[i];
        } else {
            spill += full[i];
        }
    }
    out.overflow = a.overflow + b.overflow - a.overflow * b.overflow + spill;
    return out;
}

// Real-domain discretization of X = e^L for a ln-domain distribution L.
GridMass discretize_real_exp(const SemiRVDistribution& L, double step,
                             std::size_t cells, Rounding r) {
    GridMass g;
    g.m.assign(cells, 0.0);
    const int shift = r == Rounding::Up ? 1 : 0;
    double prev = 1.0;  // P(X >= 0)
    for (std::size_t j = 0; j + 1 < cells; ++j) {
        const double t = static_cast<double>(j + 1) * step;
        const double tl = t <= 0.0 ? 1.0 : L.tail_left(std::log(t));
        const std::size_t idx = j + shift;
        g.m[idx] += std::max(0.0, prev - tl);
        prev = tl;
    }
    g.overflow = prev;
    return g;
}

// Log-domain discretization of ln Y.
GridMass discretize_log(const SemiRVDistribution& L, double step,
                        std::size_t cells, Rounding r) {
    GridMass g;
    g.m.assign(cells, 0.0);
    const int shift = r == Rounding::Up ? 1 : 0;
    double prev = 1.0;
    for (std::size_t j = 0; j + 1 < cells; ++j) {
        const double tl = L.tail_left(static_cast<double>(j + 1) * step);
        g.m[j + shift] += std::max(0.0, prev - tl);
        prev = tl;
    }
    g.overflow = prev;
    return g;
}

GridMass to_log(const GridMass& real, double real_step, double log_step,
                std::size_t log_cells, Rounding r) {
    GridMass g;
    g.m.assign(log_cells, 0.0);
    g.overflow = real.overflow;
    for (std::size_t i = 0; i < real.m.size(); ++i) {
        if (real.m[i] == 0.0) continue;
        const double v = static_cast<double>(i) * real_step;
        // The model keeps every partial value >= 1; representative values
        // rounded below 1 clamp to log cell 0 (value exactly 1).
        double j = v <= 1.0 ? 0.0
                            : (r == Rounding::Down
                                   ? std::floor(std::log(v) / log_step)
                                   : std::ceil(std::log(v) / log_step));
        if (j < 0.0) j = 0.0;
        const auto idx = static_cast<std::size_t>(j);
        if (idx >= log_cells) {
            g.overflow += real.m[i];
        } else {
            g.m[idx] += real.m[i];
        }
    }
    return g;
}

GridMass to_real(const GridMass& logm, double log_step, double real_step,
                 std::size_t real_cells, Rounding r) {
    GridMass g;
    g.m.assign(real_cells, 0.0);
    g.overflow = logm.overflow;
    for (std::size_t j = 0; j < logm.m.size(); ++j) {
        if (logm.m[j] == 0.0) continue;
        const double v = std::exp(static_cast<double>(j) * log_step);
        const double i = r == Rounding::Down ? std::floor(v / real_step)
                                             : std::ceil(v / real_step);
        const auto idx = static_cast<std::size_t>(i);
        if (idx >= real_cells) {
            g.overflow += logm.m[j];
        } else {
            g.m[idx] += logm.m[j];
        }
    }
    return g;
}

std::vector<double> sn_grid_one_rounding(const RiskModelConfig& cfg,
                                         const std::vector<double>& x_grid,
                                         const SnGridOptions& opts, Rounding r) {
    const double t_max =
        std::log(*std::max_element(x_grid.begin(), x_grid.end())) + opts.t_margin;
    const double log_step = t_max / static_cast<double>(opts.log_cells);
    const double real_max = std::exp(t_max);
    const double real_step = real_max / static_cast<double>(opts.real_cells);

    GridMass t_real;  // T_0 = 0: adding it is the identity
    GridMass t_log;
    for (int i = cfg.n - 1; i >= 0; --i) {
        const GridMass x_real =
            discretize_real_exp(cfg.insurance[i], real_step, opts.real_cells, r);
        const GridMass w_real = t_real.m.empty()
                                    ? x_real
                                    : conv_grid(x_real, t_real, opts.real_cells);
        const GridMass w_log =
            to_log(w_real, real_step, log_step, opts.log_cells, r);
        const GridMass y_log =
            discretize_log(cfg.financial[i], log_step, opts.log_cells, r);
        t_log = conv_grid(w_log, y_log, opts.log_cells);
        if (i > 0) {
            t_real = to_real(t_log, log_step, real_step, opts.real_cells, r);
        }
    }

    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        const double t = std::log(x);
        KahanSum p;
        for (std::size_t j = 0; j < t_log.m.size(); ++j) {
            if (t_log.m[j] != 0.0 && static_cast<double>(j) * log_step > t) {
                p.add(t_log.m[j]);
            }
        }
        p.add(t_log.overflow);
        out.push_back(std::min(1.0, p.value()));
    }
    return out;
}

}  // namespace

std::vector<TailBracket> sn_tail_oracle_grid(const RiskModelConfig& config,
                                             const std::vector<double>& x_grid,
                                             const SnGridOptions& opts) {
    if (config.negative_part != NegativePartPolicy::None) {
        throw UnsupportedCaseError(
            "grid recursion oracle supports the all-positive policy only");
    }
    if (x_grid.empty()) throw DomainError("sn_tail_oracle_grid: empty grid");
    for (double x : x_grid) {
        if (!(x > 1.0)) throw DomainError("sn_tail_oracle_grid: x must exceed 1");
    }
    auto lower = sn_grid_one_rounding(config, x_grid, opts, Rounding::Down);
    auto upper = sn_grid_one_rounding(config, x_grid, opts, Rounding::Up);

    const double eps = 2e-13 * static_cast<double>(config.n);
    std::vector<TailBracket> out(x_grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].lower = std::max(0.0, lower[i] - eps);
        out[i].upper = std::min(1.0, upper[i] + eps);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Predictors
// ---------------------------------------------------------------------------

namespace {

std::vector<TailFunctionSpec> thm31_chain(const RiskModelConfig& cfg) {
    std::vector<TailFunctionSpec> fs;
    fs.push_back(cfg.insurance.back().f());
    for (const auto& d : cfg.financial) fs.push_back(d.f());
    return fs;
}

double declared_gamma_of(const SemiRVDistribution& d, const char* what) {
    auto g = d.f().gamma_index();
    if (!g.has_value()) {
        throw WrongCaseError(std::string(what) +
                             ": requires a regularly varying tail function");
    }
    return *g;
}

}  // namespace

RiskPrediction predict_thm31_at_log_x(const RiskModelConfig& config, double t) {
    if (!(t > 0.0)) throw DomainError("predict_thm31: x must exceed 1");
    const auto fs = thm31_chain(config);
    const double conv = fs.size() == 1
                            ? fs[0].eval(t)
                            : function_convolve_n(fs, t);
    RiskPrediction out;
    out.value = TailValue{config.n * std::log(config.alpha) -
                          config.alpha * t + std::log(conv)};

    // Finite-range diagnostic on a short geometric grid below t.
    std::vector<double> probe;
    for (double u = t / 8.0; u <= t * 1.0001; u *= 2.0) probe.push_back(u);
    if (probe.size() >= 2) {
        const auto report = check_dominance_conditions(config, probe);
        out.conditions_ok = report.passes;
    }
    return out;
}

RiskPrediction predict_thm31(const RiskModelConfig& config, double x) {
    if (!(x > 1.0)) throw DomainError("predict_thm31: x must exceed 1");
    return predict_thm31_at_log_x(config, std::log(x));
}

TailValue predict_thm32_at_log_x(const RiskModelConfig& config, double t,
                                 Thm32Case which) {
    if (!(t > 0.0)) throw DomainError("predict_thm32: x must exceed 1");
    const int n = config.n;
    const double alpha = config.alpha;

    std::vector<double> g(n), gs(n);
    for (int i = 0; i < n; ++i) {
        g[i] = declared_gamma_of(config.insurance[i], "thm32");
        gs[i] = declared_gamma_of(config.financial[i], "thm32");
    }
    auto all_above = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x > -1.0; });
    };
    auto all_at = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == -1.0; });
    };

    const double base = n * std::log(alpha) - alpha * t;
    switch (which) {
        case Thm32Case::I: {
            if (!all_above(g) || !all_above(gs)) {
                throw WrongCaseError("thm32 case i requires every gamma > -1");
            }
            double lv = base + n * std::log(t) +
                        config.insurance[n - 1].f().log_eval(t);
            for (const auto& d : config.financial) lv += d.f().log_eval(t);
            double acc = g[n - 1];
            for (int j = 1; j <= n; ++j) {
                lv += ln_beta(acc + j, gs[j - 1] + 1.0);
                acc += gs[j - 1];
            }
            return TailValue{lv};
        }
        case Thm32Case::II: {
            if (!all_at(g) || !all_at(gs)) {
                throw WrongCaseError("thm32 case ii requires every gamma = -1");
            }
            std::vector<double> fsI(n), fsv(n);
            for (int i = 0; i < n; ++i) {
                fsI[i] = config.financial[i].f().integral(t);
                fsv[i] = config.financial[i].f().eval(t);
            }
            double first = config.insurance[n - 1].f().eval(t);
            for (int i = 0; i < n; ++i) first *= fsI[i];
            KahanSum second;
            for (int i = 0; i < n; ++i) {
                double term = fsv[i];
                for (int j = 0; j < n; ++j) {
                    if (j != i) term *= fsI[j];
                }
                second.add(term);
            }
            const double bracketed =
                first + config.insurance[n - 1].f().integral(t) * second.value();
            return TailValue{base + std::log(bracketed)};
        }
        case Thm32Case::III: {
            if (!all_at(g) || !all_above(gs)) {
                throw WrongCaseError(
                    "thm32 case iii requires insurance gammas at -1 and financial above");
            }
            double lv = base + (n - 1) * std::log(t) +
                        std::log(config.insurance[n - 1].f().integral(t));
            for (const auto& d : config.financial) lv += d.f().log_eval(t);
            double acc = 0.0;
            for (int j = 1; j <= n - 1; ++j) {
                acc += gs[j - 1];
                lv += ln_beta(acc + j, gs[j] + 1.0);
            }
            return TailValue{lv};
        }
        case Thm32Case::IV: {
            if (!all_above(g) || !all_at(gs)) {
                throw WrongCaseError(
                    "thm32 case iv requires insurance gammas above -1 and financial at -1");
            }
            double lv = base + config.insurance[n - 1].f().log_eval(t);
            for (const auto& d : config.financial) {
                lv += std::log(d.f().integral(t));
            }
            return TailValue{lv};
        }
    }
    throw WrongCaseError("thm32: unknown case");
}

TailValue predict_thm32(const RiskModelConfig& config, double x, Thm32Case which) {
    if (!(x > 1.0)) throw DomainError("predict_thm32: x must exceed 1");
    return predict_thm32_at_log_x(config, std::log(x), which);
}

TailValue predict_theoremA_at_log_x(const RiskModelConfig& config, double t) {
    if (!(t > 0.0)) throw DomainError("predict_theoremA: x must exceed 1");
    const int n = config.n;

    const double gamma_star = declared_gamma_of(config.insurance[0], "theoremA") + 1.0;
    for (const auto& d : config.insurance) {
        if (declared_gamma_of(d, "theoremA") + 1.0 != gamma_star) {
            throw WrongCaseError(
                "theoremA requires a common insurance index gamma*");
        }
    }
    if (!(gamma_star > 0.0)) {
        throw WrongCaseError("theoremA requires gamma* > 0");
    }
    std::vector<double> gammas(n);
    double gamma_bar = gamma_star;
    for (int i = 0; i < n; ++i) {
        gammas[i] = declared_gamma_of(config.financial[i], "theoremA") + 1.0;
        if (!(gammas[i] > 0.0)) {
            throw WrongCaseError("theoremA requires every financial gamma_i > 0");
        }
        gamma_bar += gammas[i];
    }

    double lv = n * std::log(config.alpha) + ln_gamma(gamma_star) - ln_gamma(gamma_bar);
    for (double gi : gammas) lv += ln_gamma(gi);
    // slowly varying parts l(t) = f(t) / t^(index), powers recombined below
    lv += config.insurance[n - 1].f().log_eval(t) - (gamma_star - 1.0) * std::log(t);
    for (int i = 0; i < n; ++i) {
        lv += config.financial[i].f().log_eval(t) - (gammas[i] - 1.0) * std::log(t);
    }
    lv += (gamma_bar - 1.0) * std::log(t) - config.alpha * t;
    return TailValue{lv};
}

TailValue predict_theoremA(const RiskModelConfig& config, double x) {
    if (!(x > 1.0)) throw DomainError("predict_theoremA: x must exceed 1");
    return predict_theoremA_at_log_x(config, std::log(x));
}

DominanceReport check_dominance_conditions(const RiskModelConfig& config,
                                           const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) {
        throw DomainError("check_dominance_conditions: need >= 2 grid points");
    }
    DominanceReport report;
    auto decreasing_last_half = [&](const std::vector<double>& v) {
        for (std::size_t i = v.size() / 2; i + 1 < v.size(); ++i) {
            if (v[i + 1] > v[i]) return false;
        }
        return true;
    };

    for (int k = 2; k <= config.n; ++k) {
        std::vector<TailFunctionSpec> chain31;
        chain31.push_back(config.insurance[k - 1].f());
        for (int j = 2; j <= k; ++j) chain31.push_back(config.financial[j - 1].f());
        std::vector<double> row31, row33;
        for (double t : t_grid) {
            const double denom31 = chain31.size() == 1
                                       ? chain31[0].eval(t)
                                       : function_convolve_n(chain31, t);
            row31.push_back(config.insurance[0].f().eval(t) / denom31);
            const double denom33 = function_convolve(
                config.insurance[k - 1].f(), config.financial[k - 1].f(), t);
            row33.push_back(config.insurance[k - 2].f().eval(t) / denom33);
        }
        report.passes = report.passes && decreasing_last_half(row31) &&
                        decreasing_last_half(row33);
        report.condition_31.push_back(std::move(row31));
        report.condition_33.push_back(std::move(row33));
    }
    return report;
}

}  // namespace semirv
