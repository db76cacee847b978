#include "semirv/tailfn.hpp"

#include <algorithm>
#include <cmath>

#include "semirv/errors.hpp"
#include "semirv/numeric.hpp"
#include "semirv/quadrature.hpp"

namespace semirv {

namespace {

constexpr double kE = 2.718281828459045235;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw InvalidSpecError(std::string("non-finite parameter: ") + name);
    }
}

// Period base 4^k containing x >= 1, robust against log round-off.
double oscillating_period_base(double x) {
    double k = std::floor(std::log(x) / std::log(4.0));
    double p = std::pow(4.0, k);
    while (x < p) p /= 4.0;
    while (x >= 4.0 * p) p *= 4.0;
    return p;
}

double karamata_eps(const KaramataFamily& fam, double y) {
    return fam.eps_coeff * std::pow(y, -fam.eps_power);
}

}  // namespace

std::pair<double, double> oscillating_branch(double x) {
    const double p = oscillating_period_base(x);
    if (x < 2.0 * p) return {2.0, 0.0};
    if (x < 2.5 * p) return {-3.0, 10.0 * p};
    if (x < 3.0 * p) return {1.0, 0.0};
    return {5.0, -12.0 * p};
}

TailFunctionSpec::TailFunctionSpec(Family family, bool lattice)
    : family_(std::move(family)), lattice_(lattice) {
    std::visit(
        [this](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                require_finite(fam.c, "c");
                if (!(fam.c > 0.0)) throw InvalidSpecError("Constant: c must be > 0");
                gamma_index_ = 0.0;
                divergent_integral_ = true;
            } else if constexpr (std::is_same_v<T, LogPowerFamily>) {
                require_finite(fam.c, "c");
                require_finite(fam.gamma, "gamma");
                if (!(fam.c > 0.0)) throw InvalidSpecError("LogPower: c must be > 0");
                gamma_index_ = fam.gamma;
                divergent_integral_ = fam.gamma >= -1.0;
            } else if constexpr (std::is_same_v<T, LogLogPowerFamily>) {
                require_finite(fam.c, "c");
                require_finite(fam.gamma, "gamma");
                if (!(fam.c > 0.0)) throw InvalidSpecError("LogLogPower: c must be > 0");
                gamma_index_ = 0.0;
                divergent_integral_ = true;
            } else if constexpr (std::is_same_v<T, ExpPowerFamily>) {
                require_finite(fam.C, "C");
                require_finite(fam.beta, "beta");
                require_finite(fam.D, "D");
                if (!(fam.C > 0.0)) throw InvalidSpecError("ExpPower: C must be > 0");
                if (!(fam.beta > 0.0 && fam.beta < 1.0)) {
                    throw InvalidSpecError("ExpPower: beta must be in (0,1)");
                }
                gamma_index_ = std::nullopt;
                divergent_integral_ = true;
            } else if constexpr (std::is_same_v<T, PiecewiseOscillatingFamily>) {
                gamma_index_ = std::nullopt;
                divergent_integral_ = true;
            } else if constexpr (std::is_same_v<T, KaramataFamily>) {
                require_finite(fam.c0, "c0");
                require_finite(fam.eps_coeff, "eps_coeff");
                require_finite(fam.eps_power, "eps_power");
                require_finite(fam.a0, "a0");
                if (!(fam.c0 > 0.0)) throw InvalidSpecError("Karamata: c0 must be > 0");
                if (!(fam.a0 > 1.0)) throw InvalidSpecError("Karamata: a0 must be > 1");
                if (!(fam.eps_power > 0.0 && fam.eps_power <= 1.0)) {
                    throw InvalidSpecError("Karamata: eps_power must be in (0,1]");
                }
                if (fam.eps_power == 1.0) {
                    gamma_index_ = fam.eps_coeff;
                    divergent_integral_ = fam.eps_coeff >= -1.0;
                } else {
                    gamma_index_ = std::nullopt;
                    divergent_integral_ = fam.eps_coeff > 0.0;
                }
            }
        },
        family_);
}

FamilyKind TailFunctionSpec::kind() const {
    return static_cast<FamilyKind>(family_.index());
}

std::string TailFunctionSpec::family_name() const {
    switch (kind()) {
        case FamilyKind::Constant: return "constant";
        case FamilyKind::LogPower: return "log_power";
        case FamilyKind::LogLogPower: return "log_log_power";
        case FamilyKind::ExpPower: return "exp_power";
        case FamilyKind::PiecewiseOscillating: return "piecewise_oscillating";
        case FamilyKind::KaramataBuilt: return "karamata";
    }
    return "unknown";
}

double TailFunctionSpec::log_eval(double x) const {
    if (!(x >= 0.0)) throw DomainError("eval_f: x must be >= 0");
    return std::visit(
        [x](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                return std::log(fam.c);
            } else if constexpr (std::is_same_v<T, LogPowerFamily>) {
                return std::log(fam.c) + fam.gamma * std::log1p(x);
            } else if constexpr (std::is_same_v<T, LogLogPowerFamily>) {
                return std::log(fam.c) + fam.gamma * std::log(std::log(kE + x));
            } else if constexpr (std::is_same_v<T, ExpPowerFamily>) {
                return fam.C * std::pow(x, fam.beta) + fam.D;
            } else if constexpr (std::is_same_v<T, PiecewiseOscillatingFamily>) {
                if (x < 1.0) return std::log(2.0);
                auto [s, b] = oscillating_branch(x);
                return std::log(s * x + b);
            } else if constexpr (std::is_same_v<T, KaramataFamily>) {
                const double a = std::log(fam.a0);
                if (x <= a) return std::log(fam.c0);
                auto res = integrate([&fam](double y) { return karamata_eps(fam, y); },
                                     a, x, {}, {.rel_tol = 1e-12, .abs_tol = 1e-14});
                return std::log(fam.c0) + res.value;
            }
        },
        family_);
}

double TailFunctionSpec::eval(double x) const { return std::exp(log_eval(x)); }

double TailFunctionSpec::derivative(double x) const {
    if (!(x >= 0.0)) throw DomainError("eval_f_prime: x must be >= 0");
    return std::visit(
        [this, x](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, LogPowerFamily>) {
                return fam.c * fam.gamma * std::pow(1.0 + x, fam.gamma - 1.0);
            } else if constexpr (std::is_same_v<T, LogLogPowerFamily>) {
                const double L = std::log(kE + x);
                return fam.c * fam.gamma * std::pow(L, fam.gamma - 1.0) / (kE + x);
            } else if constexpr (std::is_same_v<T, ExpPowerFamily>) {
                if (x == 0.0) {
                    throw DomainError("ExpPower derivative is unbounded at x = 0");
                }
                return eval(x) * fam.C * fam.beta * std::pow(x, fam.beta - 1.0);
            } else if constexpr (std::is_same_v<T, PiecewiseOscillatingFamily>) {
                if (x < 1.0) return 0.0;
                const double p = oscillating_period_base(x);
                for (double bp : {1.0, p, 2.0 * p, 2.5 * p, 3.0 * p, 4.0 * p}) {
                    if (x == bp) {
                        const double left =
                            bp <= 1.0 ? 0.0 : oscillating_branch(std::nexttoward(bp, 0.0L)).first;
                        const double right = oscillating_branch(bp).first;
                        throw OneSidedDerivativeError(
                            "oscillating family has a kink here", left, right);
                    }
                }
                return oscillating_branch(x).first;
            } else if constexpr (std::is_same_v<T, KaramataFamily>) {
                const double a = std::log(fam.a0);
                if (x < a) return 0.0;
                if (x == a) {
                    throw OneSidedDerivativeError("karamata family has a kink at a",
                                                  0.0, fam.c0 * karamata_eps(fam, a));
                }
                return eval(x) * karamata_eps(fam, x);
            }
        },
        family_);
}

double TailFunctionSpec::log_derivative(double x) const {
    if (!(x >= 0.0)) throw DomainError("log_derivative: x must be >= 0");
    return std::visit(
        [x](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, LogPowerFamily>) {
                return fam.gamma / (1.0 + x);
            } else if constexpr (std::is_same_v<T, LogLogPowerFamily>) {
                return fam.gamma / ((kE + x) * std::log(kE + x));
            } else if constexpr (std::is_same_v<T, ExpPowerFamily>) {
                if (x == 0.0) return kInf;
                return fam.C * fam.beta * std::pow(x, fam.beta - 1.0);
            } else if constexpr (std::is_same_v<T, PiecewiseOscillatingFamily>) {
                if (x < 1.0) return 0.0;
                auto [s, b] = oscillating_branch(x);
                return s / (s * x + b);
            } else if constexpr (std::is_same_v<T, KaramataFamily>) {
                const double a = std::log(fam.a0);
                if (x < a) return 0.0;
                return karamata_eps(fam, x);
            }
        },
        family_);
}

double TailFunctionSpec::integral(double x) const {
    if (!(x >= 0.0)) throw DomainError("f_integral: x must be >= 0");
    if (x == 0.0) return 0.0;
    return std::visit(
        [this, x](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ConstantFamily>) {
                return fam.c * x;
            } else if constexpr (std::is_same_v<T, LogPowerFamily>) {
                if (fam.gamma == -1.0) return fam.c * std::log1p(x);
                return fam.c * (std::pow(1.0 + x, fam.gamma + 1.0) - 1.0) /
                       (fam.gamma + 1.0);
            } else {
                if (log_eval(x) > 700.0) {
                    throw AccuracyError("f_integral: integrand exceeds double range",
                                        kInf);
                }
                auto res = integrate([this](double y) { return eval(y); }, 0.0, x,
                                     breakpoints_up_to(x), {.rel_tol = 1e-10});
                return res.value;
            }
        },
        family_);
}

double TailFunctionSpec::karamata_ratio(double x) const {
    if (!(x > 0.0)) throw DomainError("karamata_ratio: x must be > 0");
    if (!divergent_integral_) {
        throw DomainError(
            "karamata_ratio requires a divergent integral (gamma >= -1)");
    }
    return x * eval(x) / integral(x);
}

std::vector<double> TailFunctionSpec::rv_index_estimate(
    double t, const std::vector<double>& x_grid) const {
    if (!(t > 1.0)) throw DomainError("rv_index_estimate: t must be > 1");
    if (x_grid.empty()) throw DomainError("rv_index_estimate: empty grid");
    std::vector<double> out;
    out.reserve(x_grid.size());
    const double log_t = std::log(t);
    for (double x : x_grid) {
        if (!(x > 0.0)) throw DomainError("rv_index_estimate: grid points must be > 0");
        out.push_back((log_eval(x * t) - log_eval(x)) / log_t);
    }
    return out;
}

std::vector<double> TailFunctionSpec::breakpoints_up_to(double x) const {
    std::vector<double> bps;
    if (kind() == FamilyKind::PiecewiseOscillating) {
        bps.push_back(1.0);
        for (double p = 1.0; p <= x; p *= 4.0) {
            for (double b : {p, 2.0 * p, 2.5 * p, 3.0 * p}) {
                if (b > 0.0 && b <= x) bps.push_back(b);
            }
        }
        std::sort(bps.begin(), bps.end());
        bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    } else if (kind() == FamilyKind::KaramataBuilt) {
        const double a = std::log(std::get<KaramataFamily>(family_).a0);
        if (a <= x) bps.push_back(a);
    }
    return bps;
}

}  // namespace semirv
