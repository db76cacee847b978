#include "semirv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "semirv/errors.hpp"
#include "semirv/fft.hpp"
#include "semirv/pchip.hpp"
#include "semirv/quadrature.hpp"

namespace semirv {

namespace {

double slope_right(const TailFunctionSpec& f, double y) {
    try {
        return f.derivative(y);
    } catch (const OneSidedDerivativeError& e) {
        return e.right_derivative();
    }
}

// alpha f(y) - f'(y) = e^(alpha y) * density(y); moderate for every family.
double density_factor(const SemiRVDistribution& d, double y) {
    return std::max(0.0, d.alpha() * d.f().eval(y) - slope_right(d.f(), y));
}

std::vector<double> pair_breakpoints(const TailFunctionSpec& f1,
                                     const TailFunctionSpec& f2, double x) {
    std::vector<double> bps = f2.breakpoints_up_to(x);
    for (double b : f1.breakpoints_up_to(x)) bps.push_back(x - b);
    bps.push_back(0.5 * x);
    return bps;
}

// Log-spaced tabulation nodes on [0, upper]: dense near the origin where
// convolutions are steep, sparse in the slowly varying far field.
std::vector<double> log_nodes(double upper, std::size_t count) {
    std::vector<double> xs(count + 1);
    const double span = std::log1p(upper);
    for (std::size_t i = 0; i <= count; ++i) {
        xs[i] = std::expm1(span * static_cast<double>(i) / count);
    }
    xs.front() = 0.0;
    xs.back() = upper;
    return xs;
}

struct ChainBase {
    std::function<double(double)> eval;
    std::vector<double> breakpoints;
};

// (base (x) fs[0] (x) ... (x) fs.back())(x) with `nodes` tabulation points
// per inner fold.
double convolve_chain(const ChainBase& base,
                      const std::vector<TailFunctionSpec>& fs, double x,
                      std::size_t nodes) {
    std::function<double(double)> g = base.eval;
    std::vector<double> g_bps = base.breakpoints;

    for (std::size_t level = 0; level < fs.size(); ++level) {
        const TailFunctionSpec& f = fs[level];
        const bool last = (level + 1 == fs.size());
        auto fold_at = [&](double s, double rel_tol) {
            if (s <= 0.0) return 0.0;
            std::vector<double> bps = f.breakpoints_up_to(s);
            for (double b : g_bps) {
                if (s - b > 0.0 && s - b < s) bps.push_back(s - b);
            }
            bps.push_back(0.5 * s);
            auto res = integrate(
                [&](double y) { return g(s - y) * f.eval(y); }, 0.0, s, bps,
                {.rel_tol = rel_tol});
            return res.value;
        };
        if (last) return fold_at(x, 1e-9);

        auto xs = log_nodes(x, nodes);
        std::vector<double> ys(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = fold_at(xs[i], 1e-8);
        auto interp = std::make_shared<PchipInterpolant>(std::move(xs), std::move(ys));
        g = [interp](double s) { return (*interp)(s); };
        g_bps.clear();
    }
    return g(x);  // fs empty: the base itself
}

double convolve_chain_richardson(const ChainBase& base,
                                 const std::vector<TailFunctionSpec>& fs,
                                 double x, const ConvolveNOptions& opts) {
    if (fs.size() <= 1) {
        // No tabulation involved; the adaptive quadrature controls the error.
        return convolve_chain(base, fs, x, opts.initial_nodes);
    }
    std::size_t nodes = opts.initial_nodes;
    double prev = convolve_chain(base, fs, x, nodes);
    while (nodes < opts.max_nodes) {
        nodes *= 2;
        const double cur = convolve_chain(base, fs, x, nodes);
        const double err = std::abs(cur - prev);
        if (err <= opts.rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    throw AccuracyError("function_convolve_n: step-halving did not converge",
                        std::abs(prev));
}

}  // namespace

double function_convolve(const TailFunctionSpec& f1, const TailFunctionSpec& f2,
                         double x, double rel_tol) {
    if (!(x >= 0.0)) throw DomainError("function_convolve: x must be >= 0");
    if (x == 0.0) return 0.0;
    auto res = integrate([&](double y) { return f1.eval(x - y) * f2.eval(y); },
                         0.0, x, pair_breakpoints(f1, f2, x), {.rel_tol = rel_tol});
    return res.value;
}

double function_convolve_n(const std::vector<TailFunctionSpec>& fs, double x,
                           const ConvolveNOptions& opts) {
    if (fs.size() < 2) throw DomainError("function_convolve_n: need >= 2 functions");
    if (!(x >= 0.0)) throw DomainError("function_convolve_n: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (fs.size() == 2) return function_convolve(fs[0], fs[1], x, 1e-9);

    ChainBase base{[f = fs[0]](double t) { return f.eval(t); },
                   fs[0].breakpoints_up_to(x)};
    std::vector<TailFunctionSpec> rest(fs.begin() + 1, fs.end());
    return convolve_chain_richardson(base, rest, x, opts);
}

double function_convolve_n_integral(const std::vector<TailFunctionSpec>& fs,
                                    double x, const ConvolveNOptions& opts) {
    if (fs.empty()) throw DomainError("function_convolve_n_integral: empty input");
    if (!(x >= 0.0)) throw DomainError("function_convolve_n_integral: x must be >= 0");
    if (fs.size() == 1) return fs[0].integral(x);

    // g_n^I = f_1^I (x) f_2 (x) ... (x) f_n
    ChainBase base{[f = fs[0]](double t) { return f.integral(t); },
                   fs[0].breakpoints_up_to(x)};
    std::vector<TailFunctionSpec> rest(fs.begin() + 1, fs.end());
    return convolve_chain_richardson(base, rest, x, opts);
}

TailValue conv_tail_2(const SemiRVDistribution& d1, const SemiRVDistribution& d2,
                      double x, double rel_tol) {
    if (d1.dist_kind() != DistKind::Continuous ||
        d2.dist_kind() != DistKind::Continuous) {
        throw UsageError("conv_tail_2 requires two continuous distributions");
    }
    if (!(x >= 0.0)) throw DomainError("conv_tail_2: x must be >= 0");

    // Integrate against the faster-decaying density so the residual
    // exponential factor in the integrand decays.
    const SemiRVDistribution* p1 = &d1;
    const SemiRVDistribution* p2 = &d2;
    if (p2->alpha() < p1->alpha()) std::swap(p1, p2);
    const double a1 = p1->alpha();
    const double a2 = p2->alpha();
    const double x01 = p1->head_cutoff();
    const double x02 = p2->head_cutoff();

    if (x - x01 < x02) return TailValue{0.0};  // X1 + X2 > x almost surely

    // Mantissa of e^(a1 x) P(X1 + X2 > x); every term stays moderate.
    KahanSum mantissa;
    if (p2->atom_mass() > 0.0) {
        mantissa.add(p2->atom_mass() * std::exp(a1 * x02) * p1->f().eval(x - x02));
    }
    mantissa.add(std::exp(a1 * x - a2 * (x - x01) + p2->f().log_eval(x - x01)));
    if (x - x01 > x02) {
        auto res = integrate(
            [&](double y) {
                const double expf = a2 == a1 ? 1.0 : std::exp(-(a2 - a1) * y);
                return p1->f().eval(x - y) * density_factor(*p2, y) * expf;
            },
            x02, x - x01, pair_breakpoints(p1->f(), p2->f(), x),
            {.rel_tol = rel_tol, .abs_tol = 1e-300});
        mantissa.add(res.value);
    }
    const double log_value = -a1 * x + std::log(mantissa.value());
    return TailValue{std::min(0.0, log_value)};
}

TailValue conv_tail_lattice_continuous(const SemiRVDistribution& lattice_dist,
                                       const SemiRVDistribution& continuous_dist,
                                       double x) {
    if (lattice_dist.dist_kind() != DistKind::Lattice ||
        continuous_dist.dist_kind() != DistKind::Continuous) {
        throw UsageError("conv_tail_lattice_continuous: wrong kinds");
    }
    if (lattice_dist.alpha() != continuous_dist.alpha()) {
        throw UnsupportedCaseError(
            "mixed decay rates are not supported for exact mixed convolution");
    }
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    const double alpha = lattice_dist.alpha();
    const long long k0 = lattice_dist.lattice_cutoff();
    const double x02 = continuous_dist.head_cutoff();
    const long long jcut = static_cast<long long>(std::floor(x - x02));
    if (jcut < k0) return TailValue{0.0};

    // e^(alpha x) * sum_j p1(j) tail2(x - j), plus the exact lattice tail
    // beyond jcut where tail2 = 1.
    KahanSum mantissa;
    const auto& f1 = lattice_dist.f();
    const auto& f2 = continuous_dist.f();
    if (lattice_dist.atom_mass() > 0.0) {
        mantissa.add(lattice_dist.atom_mass() * std::exp(alpha * k0) *
                     f2.eval(x - static_cast<double>(k0)));
    }
    const double ea = std::exp(alpha);
    for (long long j = k0 + 1; j <= jcut; ++j) {
        const double w = ea * f1.eval(static_cast<double>(j - 1)) -
                         f1.eval(static_cast<double>(j));  // e^(alpha j) p1(j)
        mantissa.add(std::max(0.0, w) * f2.eval(x - static_cast<double>(j)));
    }
    mantissa.add(std::exp(alpha * (x - jcut)) * f1.eval(static_cast<double>(jcut)));
    return TailValue{std::min(0.0, -alpha * x + std::log(mantissa.value()))};
}

namespace {

struct MassVector {
    std::vector<double> m;
    double overflow = 0.0;
    bool used_fft = false;
};

MassVector discretize(const SemiRVDistribution& d, double step, std::size_t cells,
                      int shift) {
    MassVector mv;
    mv.m.assign(cells + 2, 0.0);
    double prev = 1.0;  // P(X >= 0)
    for (std::size_t j = 0; j < cells; ++j) {
        const double tl = d.tail_left(static_cast<double>(j + 1) * step);
        mv.m[j + shift] += std::max(0.0, prev - tl);
        prev = tl;
    }
    mv.overflow = prev;
    return mv;
}

MassVector combine(const MassVector& a, const MassVector& b, std::size_t cells) {
    auto full = convolve(a.m, b.m, 4096);
    MassVector out;
    out.used_fft = a.used_fft || b.used_fft || full.size() > 4096;
    out.m.assign(cells + 2, 0.0);
    double spill = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (i < out.m.size()) {
            out.m[i] = full[i];
        } else {
            spill += full[i];
        }
    }
    out.overflow = a.overflow + b.overflow - a.overflow * b.overflow + spill;
    return out;
}

std::vector<double> grid_tails(const std::vector<SemiRVDistribution>& ds,
                               const GridConvolutionPlan& plan,
                               const std::vector<double>& x_grid, int shift,
                               bool* used_fft) {
    const std::size_t cells =
        static_cast<std::size_t>(std::ceil(plan.x_max / plan.step));
    std::vector<double> out;
    out.reserve(x_grid.size());

    if (ds.size() == 1) {
        for (double x : x_grid) out.push_back(ds[0].tail(x));
        return out;
    }

    MassVector acc = discretize(ds[0], plan.step, cells, shift);
    for (std::size_t i = 1; i + 1 < ds.size(); ++i) {
        acc = combine(acc, discretize(ds[i], plan.step, cells, shift), cells);
    }
    if (used_fft) *used_fft = acc.used_fft;

    const SemiRVDistribution& last = ds.back();
    for (double x : x_grid) {
        KahanSum p;
        for (std::size_t j = 0; j < acc.m.size(); ++j) {
            if (acc.m[j] == 0.0) continue;
            const double t = x - static_cast<double>(j) * plan.step;
            p.add(acc.m[j] * (t < 0.0 ? 1.0 : last.tail(t)));
        }
        p.add(acc.overflow);
        out.push_back(std::min(1.0, p.value()));
    }
    return out;
}

void validate_grid_inputs(const std::vector<SemiRVDistribution>& ds,
                          const GridConvolutionPlan& plan,
                          const std::vector<double>& x_grid) {
    if (ds.empty()) throw DomainError("grid convolution: empty distribution list");
    if (!(plan.step > 0.0)) throw DomainError("grid convolution: step must be > 0");
    double x0_sum = 0.0;
    for (const auto& d : ds) {
        if (d.dist_kind() != DistKind::Continuous) {
            throw UsageError("grid convolution requires continuous distributions");
        }
        x0_sum += d.head_cutoff();
    }
    const double x_need =
        (x_grid.empty() ? 0.0 : *std::max_element(x_grid.begin(), x_grid.end())) +
        x0_sum;
    if (plan.x_max < x_need) {
        throw DomainError("grid convolution: x_max must cover max(x_grid) + sum of cutoffs");
    }
}

}  // namespace

std::vector<double> conv_tail_n_grid(const std::vector<SemiRVDistribution>& ds,
                                     const GridConvolutionPlan& plan,
                                     const std::vector<double>& x_grid) {
    validate_grid_inputs(ds, plan, x_grid);
    const int shift = plan.rule == BoundaryRule::MassToRightEdge ? 1 : 0;
    return grid_tails(ds, plan, x_grid, shift, nullptr);
}

std::vector<TailBracket> conv_tail_n_grid_bracket(
    const std::vector<SemiRVDistribution>& ds, const GridConvolutionPlan& plan,
    const std::vector<double>& x_grid) {
    validate_grid_inputs(ds, plan, x_grid);
    bool used_fft = false;
    auto lower = grid_tails(ds, plan, x_grid, 0, &used_fft);
    auto upper = grid_tails(ds, plan, x_grid, 1, &used_fft);

    // FFT stages mix magnitudes, so inflate the bracket by their absolute
    // round-off footprint; the direct path is relative-accurate.
    const double eps = used_fft ? 1e-13 * static_cast<double>(ds.size()) : 0.0;
    std::vector<TailBracket> out(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        out[i].lower = std::max(0.0, lower[i] - eps);
        out[i].upper = std::min(1.0, upper[i] + eps);
        if (plan.max_bracket_rel > 0.0 &&
            out[i].width() > plan.max_bracket_rel * out[i].midpoint()) {
            throw AccuracyError(
                "grid convolution bracket too wide; decrease the step",
                out[i].width() / out[i].midpoint());
        }
    }
    return out;
}

double lattice_conv_tail(const std::vector<SemiRVDistribution>& ds, long long k) {
    if (ds.empty()) throw DomainError("lattice_conv_tail: empty distribution list");
    for (const auto& d : ds) {
        if (d.dist_kind() != DistKind::Lattice) {
            throw UsageError("lattice_conv_tail requires lattice distributions");
        }
    }
    if (k < 0) return 1.0;

    const std::size_t len = static_cast<std::size_t>(k) + 1;
    // pmf of the partial sum, truncated to 0..k; the truncated mass is
    // tracked exactly through the running tail.
    std::vector<double> partial(len, 0.0);
    for (std::size_t j = 0; j < len; ++j) {
        partial[j] = ds[0].pmf(static_cast<long long>(j));
    }
    double tail_partial = ds[0].tail(static_cast<double>(k));

    for (std::size_t i = 1; i < ds.size(); ++i) {
        KahanSum t;
        for (std::size_t j = 0; j < len; ++j) {
            if (partial[j] == 0.0) continue;
            t.add(partial[j] * ds[i].tail(static_cast<double>(k) - static_cast<double>(j)));
        }
        t.add(tail_partial);
        tail_partial = t.value();
        if (i + 1 < ds.size()) {
            std::vector<double> pmf_i(len, 0.0);
            for (std::size_t j = 0; j < len; ++j) {
                pmf_i[j] = ds[i].pmf(static_cast<long long>(j));
            }
            auto next = convolve(partial, pmf_i, 1u << 30);  // force direct
            next.resize(len);
            partial = std::move(next);
        }
    }
    return std::min(1.0, tail_partial);
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
    WilsonInterval w;
    if (n == 0) return w;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double hw =
        z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    w.point = p;
    w.low = std::max(0.0, center - hw);
    w.high = std::min(1.0, center + hw);
    return w;
}

McTailEstimate mc_conv_tail(const std::vector<SemiRVDistribution>& ds, double x,
                            std::uint64_t sample_count, std::uint64_t seed) {
    if (ds.empty()) throw DomainError("mc_conv_tail: empty distribution list");
    if (sample_count < 10000) {
        throw DomainError("mc_conv_tail: sample_count must be >= 1e4");
    }
    std::vector<CounterRng> rngs;
    rngs.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) rngs.emplace_back(seed, i);

    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < sample_count; ++s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            sum += ds[i].sample_one(rngs[i]);
        }
        if (sum > x) ++hits;
    }
    McTailEstimate est;
    est.interval = wilson_interval(hits, sample_count);
    est.estimate = est.interval.point;
    est.half_width_95 = est.interval.half_width();
    est.samples = sample_count;
    return est;
}

}  // namespace semirv
