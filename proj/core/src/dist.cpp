#include "semirv/dist.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "semirv/errors.hpp"
#include "semirv/numeric.hpp"
#include "semirv/quadrature.hpp"

namespace semirv {

namespace {

// Smallest x* from which e^(-alpha x) f(x) is nonincreasing, i.e.
// f'(x)/f(x) <= alpha for all x >= x*.  Exact per family.
double monotone_from(const TailFunctionSpec& f, double alpha) {
    switch (f.kind()) {
        case FamilyKind::Constant:
            return 0.0;
        case FamilyKind::LogPower: {
            const double g = std::get<LogPowerFamily>(f.family()).gamma;
            if (g <= 0.0) return 0.0;
            return std::max(0.0, g / alpha - 1.0);
        }
        case FamilyKind::LogLogPower: {
            const double g = std::get<LogLogPowerFamily>(f.family()).gamma;
            if (g <= 0.0) return 0.0;
            if (f.log_derivative(0.0) <= alpha) return 0.0;
            double lo = 0.0, hi = 1.0;
            while (f.log_derivative(hi) > alpha) hi *= 2.0;
            for (int i = 0; i < 200; ++i) {
                double mid = 0.5 * (lo + hi);
                (f.log_derivative(mid) > alpha ? lo : hi) = mid;
            }
            return hi;
        }
        case FamilyKind::ExpPower: {
            const auto& fam = std::get<ExpPowerFamily>(f.family());
            return std::pow(fam.C * fam.beta / alpha, 1.0 / (1.0 - fam.beta));
        }
        case FamilyKind::PiecewiseOscillating: {
            // Positive-slope branch s x + b violates f'/f <= alpha while
            // x < 1/alpha - b/s.  Ratios shrink like 4^-k, so only finitely
            // many periods can violate.
            double worst = 0.0;
            for (double p = 1.0; 5.0 / (3.0 * p) > alpha || p <= 4.0; p *= 4.0) {
                struct Branch { double lo, hi, s, b; };
                const Branch branches[3] = {
                    {p, 2.0 * p, 2.0, 0.0},
                    {2.5 * p, 3.0 * p, 1.0, 0.0},
                    {3.0 * p, 4.0 * p, 5.0, -12.0 * p},
                };
                for (const auto& br : branches) {
                    const double lim = 1.0 / alpha - br.b / br.s;
                    if (lim > br.lo) worst = std::max(worst, std::min(lim, br.hi));
                }
                if (p > 1e18) break;
            }
            return worst;
        }
        case FamilyKind::KaramataBuilt: {
            const auto& fam = std::get<KaramataFamily>(f.family());
            if (fam.eps_coeff <= 0.0) return 0.0;
            const double cross = std::pow(fam.eps_coeff / alpha, 1.0 / fam.eps_power);
            return cross > std::log(fam.a0) ? cross : 0.0;
        }
    }
    return 0.0;
}

double log_envelope(const TailFunctionSpec& f, double alpha, double x) {
    return -alpha * x + f.log_eval(x);
}

}  // namespace

void SampleBatch::write_csv(std::ostream& out) const {
    out << "# seed=" << seed << ", stream=" << stream_id << "\r\n";
    out << "value\r\n";
    for (double v : values) out << format_double(v) << "\r\n";
}

SemiRVDistribution::SemiRVDistribution(double alpha, TailFunctionSpec f, DistKind kind)
    : alpha_(alpha), f_(std::move(f)), kind_(kind),
      class_tag_(ClassTag::L2) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidSpecError("make_distribution: alpha must be positive and finite");
    }

    if (!f_.divergent_integral()) {
        class_tag_ = ClassTag::L2;
    } else if (f_.gamma_index().has_value() && *f_.gamma_index() >= -1.0) {
        class_tag_ = ClassTag::L11;
    } else {
        class_tag_ = ClassTag::L1Not11;
    }

    const double x_mono = monotone_from(f_, alpha_);
    if (!std::isfinite(x_mono)) {
        throw InvalidConstructionError(
            "tail envelope never becomes monotone", kInf);
    }
    if (log_envelope(f_, alpha_, x_mono) <= 0.0) {
        x0_ = x_mono;
    } else {
        // e^(-alpha x) f(x) decreases to 0 beyond x_mono; bisect the crossing.
        double lo = x_mono;
        double hi = std::max(2.0 * x_mono, x_mono + 2.0 / alpha_);
        while (log_envelope(f_, alpha_, hi) > 0.0) {
            lo = hi;
            hi = 2.0 * hi + 1.0;
            if (hi > 1e15) {
                throw InvalidConstructionError("tail envelope stays above 1", hi);
            }
        }
        for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
            double mid = 0.5 * (lo + hi);
            (log_envelope(f_, alpha_, mid) > 0.0 ? lo : hi) = mid;
        }
        x0_ = hi;
    }

    // Spot check that the density alpha f - f' stays positive beyond the
    // cutoff; the per-family analysis above makes this unconditionally true,
    // so a violation means a broken family extension.
    for (int i = 0; i <= 64; ++i) {
        const double x = x0_ + (10.0 * x0_ + 100.0) * (i / 64.0) + 1e-9;
        if (f_.log_derivative(x) > alpha_ * (1.0 + 1e-12)) {
            throw InvalidConstructionError("tail envelope not monotone", x);
        }
    }

    if (kind_ == DistKind::Lattice) {
        k0_ = static_cast<long long>(std::ceil(x0_ - 1e-12));
        if (k0_ < 0) k0_ = 0;
        atom_ = std::max(0.0, 1.0 - std::exp(log_envelope(f_, alpha_, static_cast<double>(k0_))));
    } else {
        atom_ = std::max(0.0, 1.0 - std::exp(log_envelope(f_, alpha_, x0_)));
        if (atom_ < 1e-12) atom_ = 0.0;
    }
}

SemiRVDistribution SemiRVDistribution::make(double alpha, TailFunctionSpec f,
                                            DistKind kind) {
    SemiRVDistribution d(alpha, std::move(f), kind);
    d.build_quantile_cache();
    return d;
}

double SemiRVDistribution::log_tail(double x) const {
    if (kind_ == DistKind::Lattice) {
        const double k = std::floor(x);
        if (k < static_cast<double>(k0_)) return 0.0;
        return std::min(0.0, log_envelope(f_, alpha_, k));
    }
    if (x < x0_) return 0.0;
    return std::min(0.0, log_envelope(f_, alpha_, x));
}

double SemiRVDistribution::tail(double x) const { return std::exp(log_tail(x)); }

double SemiRVDistribution::tail_left(double x) const {
    if (kind_ == DistKind::Lattice) {
        // P(X >= x) = P(X > ceil(x) - 1)
        return tail(std::ceil(x) - 1.0);
    }
    if (x <= x0_) return 1.0;
    return tail(x);
}

double SemiRVDistribution::density(double x) const {
    if (kind_ != DistKind::Continuous) {
        throw UsageError("density: lattice distribution has no density");
    }
    if (x < x0_) return 0.0;
    double slope;
    try {
        slope = f_.derivative(x);
    } catch (const OneSidedDerivativeError& e) {
        slope = e.right_derivative();  // tail is right-continuous
    }
    const double v = std::exp(-alpha_ * x) * (alpha_ * f_.eval(x) - slope);
    return std::max(0.0, v);
}

double SemiRVDistribution::pmf(long long k) const {
    if (kind_ != DistKind::Lattice) {
        throw UsageError("pmf: continuous distribution has no pmf");
    }
    if (k < k0_) return 0.0;
    if (k == k0_) return atom_;
    const double a = std::exp(log_envelope(f_, alpha_, static_cast<double>(k - 1)));
    const double b = std::exp(log_envelope(f_, alpha_, static_cast<double>(k)));
    return std::max(0.0, std::min(1.0, a) - std::min(1.0, b));
}

double SemiRVDistribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must be in (0,1)");
    return kind_ == DistKind::Lattice ? quantile_lattice(u) : quantile_continuous(u);
}

void SemiRVDistribution::build_quantile_cache() {
    if (kind_ != DistKind::Continuous) return;
    quantile_cache_.assign(kCacheSize + 1, x0_);
    for (std::size_t i = 1; i < kCacheSize; ++i) {
        const double u = static_cast<double>(i) / kCacheSize;
        if (u <= atom_) {
            quantile_cache_[i] = x0_;  // inside the head atom
            continue;
        }
        const double target = std::log1p(-u);  // log(1 - u)
        // Bracket by doubling the exponential scale, then bisect + Newton.
        double lo = quantile_cache_[i - 1];
        double step = 1.0 / alpha_;
        double hi = lo + step;
        while (log_tail(hi) > target) {
            lo = hi;
            step *= 2.0;
            hi += step;
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 100; ++it) {
            const double g = log_tail(x) - target;
            (g > 0.0 ? lo : hi) = x;
            const double slope = f_.log_derivative(x) - alpha_;  // d/dx log tail
            double next = x - g / slope;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - x) < 5e-13) { x = next; break; }
            x = next;
        }
        quantile_cache_[i] = x;
    }
    quantile_cache_[kCacheSize] = quantile_cache_[kCacheSize - 1];
}

double SemiRVDistribution::quantile_continuous(double u) const {
    const double p = 1.0 - u;  // target tail value
    if (p >= 1.0 - atom_) return x0_;
    const double target = std::log1p(-u);

    std::size_t cell = static_cast<std::size_t>(u * kCacheSize);
    double lo, hi;
    if (cell >= kCacheSize - 1) {
        lo = quantile_cache_[kCacheSize - 1];
        double step = 1.0 / alpha_;
        hi = lo + step;
        while (log_tail(hi) > target) {
            lo = hi;
            step *= 2.0;
            hi += step;
        }
    } else {
        lo = quantile_cache_[cell];
        hi = quantile_cache_[cell + 1];
        if (hi <= lo) hi = lo + 1e-9;
        while (log_tail(hi) > target) hi += 1.0 / alpha_;  // cache edge slack
    }

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double g = log_tail(x) - target;
        (g > 0.0 ? lo : hi) = x;
        const double slope = f_.log_derivative(x) - alpha_;
        double next = x - g / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-12 || hi - lo < 1e-12) return next;
        x = next;
    }
    return x;
}

double SemiRVDistribution::quantile_lattice(double u) const {
    const double p = 1.0 - u;
    if (p >= tail(static_cast<double>(k0_))) return static_cast<double>(k0_);
    const double target = std::log1p(-u);
    // Exponential search for the smallest k with log_tail(k) <= target.
    long long lo = k0_;  // log_tail(lo) > target
    long long span = 1;
    long long hi = lo + span;
    while (log_envelope(f_, alpha_, static_cast<double>(hi)) > target) {
        lo = hi;
        span *= 2;
        hi += span;
    }
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        if (log_envelope(f_, alpha_, static_cast<double>(mid)) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return static_cast<double>(hi);
}

SampleBatch SemiRVDistribution::sample(std::uint64_t seed, std::uint64_t stream_id,
                                       std::size_t count) const {
    if (count < 1) throw DomainError("sample: count must be >= 1");
    SampleBatch batch;
    batch.seed = seed;
    batch.stream_id = stream_id;
    batch.values.resize(count);
    CounterRng rng(seed, stream_id);
    for (std::size_t i = 0; i < count; ++i) {
        batch.values[i] = quantile(rng.next_double());
    }
    return batch;
}

double SemiRVDistribution::exp_moment_partial(double s) const {
    if (!(s > x0_)) throw DomainError("exp_moment_partial: s must exceed the cutoff");
    if (kind_ == DistKind::Lattice) {
        KahanSum sum;
        const long long kmax = static_cast<long long>(std::floor(s));
        if (atom_ > 0.0 && k0_ <= kmax) {
            sum.add(std::exp(alpha_ * static_cast<double>(k0_)) * atom_);
        }
        for (long long k = k0_ + 1; k <= kmax; ++k) {
            // e^(alpha k) p(k) = e^alpha f(k-1) - f(k), everything moderate.
            sum.add(std::exp(alpha_) * f_.eval(static_cast<double>(k - 1)) -
                    f_.eval(static_cast<double>(k)));
        }
        return sum.value();
    }
    double head = atom_ > 0.0 ? atom_ * std::exp(alpha_ * x0_) : 0.0;
    auto res = integrate(
        [this](double y) {
            double slope;
            try {
                slope = f_.derivative(y);
            } catch (const OneSidedDerivativeError& e) {
                slope = e.right_derivative();
            }
            return alpha_ * f_.eval(y) - slope;
        },
        x0_, s, f_.breakpoints_up_to(s), {.rel_tol = 1e-10});
    return head + res.value;
}

}  // namespace semirv
