#include "semirv/asym.hpp"

#include <algorithm>
#include <cmath>

#include "semirv/errors.hpp"
#include "semirv/quadrature.hpp"
#include "semirv/special.hpp"

namespace semirv {

namespace {

double shared_alpha(const std::vector<SemiRVDistribution>& ds) {
    if (ds.empty()) throw DomainError("predictor: empty distribution list");
    const double alpha = ds.front().alpha();
    for (const auto& d : ds) {
        if (d.alpha() != alpha) {
            throw UnsupportedCaseError(
                "mixed decay rates: the lighter tail reduces to a moment "
                "constant and is not handled by these predictors");
        }
    }
    return alpha;
}

void require_divergent(const std::vector<SemiRVDistribution>& ds) {
    for (const auto& d : ds) {
        if (d.class_tag() == ClassTag::L2) {
            throw UnsupportedCaseError(
                "convergent-integral tail function (class L2): the "
                "convolution predictors require a divergent integral of f");
        }
    }
}

int lattice_count(const std::vector<SemiRVDistribution>& ds) {
    return static_cast<int>(
        std::count_if(ds.begin(), ds.end(), [](const SemiRVDistribution& d) {
            return d.dist_kind() == DistKind::Lattice;
        }));
}

double declared_gamma(const SemiRVDistribution& d) {
    auto g = d.f().gamma_index();
    if (!g.has_value()) {
        throw WrongCaseError("closed-form case requires a regularly varying f");
    }
    return *g;
}

std::vector<TailFunctionSpec> specs_of(const std::vector<SemiRVDistribution>& ds) {
    std::vector<TailFunctionSpec> fs;
    fs.reserve(ds.size());
    for (const auto& d : ds) fs.push_back(d.f());
    return fs;
}

}  // namespace

std::string predictor_case_name(PredictorCase c) {
    switch (c) {
        case PredictorCase::Thm11General: return "thm11_general";
        case PredictorCase::Thm12AllAboveMinus1: return "thm12_case_i";
        case PredictorCase::Thm12AllMinus1: return "thm12_case_ii";
        case PredictorCase::Thm12Mixed: return "thm12_case_iii";
        case PredictorCase::Lemma22CaseI: return "lemma22_case_i";
        case PredictorCase::Lemma22CaseII: return "lemma22_case_ii";
        case PredictorCase::Lemma22CaseIII: return "lemma22_case_iii";
        case PredictorCase::Prop41: return "prop41";
        case PredictorCase::Prop42Envelope: return "prop42_envelope";
    }
    return "unknown";
}

double lattice_mix_constant(double alpha, int m_lattice, int n_total) {
    if (!(alpha > 0.0)) throw DomainError("lattice_mix_constant: alpha must be > 0");
    if (m_lattice < 0 || n_total < 1 || m_lattice > n_total) {
        throw DomainError("lattice_mix_constant: need 0 <= m <= n, n >= 1");
    }
    if (m_lattice == 0) return alpha;
    if (m_lattice == n_total) return std::expm1(alpha);
    if (n_total < 2) {
        throw DomainError("lattice_mix_constant: mixed case needs n >= 2");
    }
    const double nm1 = static_cast<double>(n_total - 1);
    return std::pow(std::expm1(alpha), m_lattice / nm1) *
           std::pow(alpha, (n_total - 1 - m_lattice) / nm1);
}

TailValue predict_thm11(const std::vector<SemiRVDistribution>& ds, double x) {
    const double alpha = shared_alpha(ds);
    require_divergent(ds);
    const int n = static_cast<int>(ds.size());
    if (n == 1) {
        return TailValue{-alpha * x + ds[0].f().log_eval(x)};
    }
    const double a = lattice_mix_constant(alpha, lattice_count(ds), n);
    const double conv = function_convolve_n(specs_of(ds), x);
    return TailValue{(n - 1) * std::log(a) - alpha * x + std::log(conv)};
}

TailValue predict_thm12_case_i(const std::vector<SemiRVDistribution>& ds, double x) {
    const double alpha = shared_alpha(ds);
    require_divergent(ds);
    if (ds.size() < 2) throw DomainError("case i needs at least two distributions");
    const int n = static_cast<int>(ds.size()) - 1;

    std::vector<double> gam;
    for (const auto& d : ds) {
        const double g = declared_gamma(d);
        if (g <= -1.0) throw WrongCaseError("case i requires every gamma > -1");
        gam.push_back(g);
    }
    const double a = lattice_mix_constant(alpha, lattice_count(ds), n + 1);

    double log_val = n * std::log(a) - alpha * x + n * std::log(x);
    double gsum = 0.0;
    for (int j = 1; j <= n; ++j) {
        gsum += gam[j - 1];
        log_val += ln_beta(gsum + j, gam[j] + 1.0);
    }
    for (const auto& d : ds) log_val += d.f().log_eval(x);
    return TailValue{log_val};
}

TailValue predict_thm12_case_ii(const std::vector<SemiRVDistribution>& ds, double x) {
    const double alpha = shared_alpha(ds);
    require_divergent(ds);
    if (ds.size() < 2) throw DomainError("case ii needs at least two distributions");
    const int n = static_cast<int>(ds.size()) - 1;
    for (const auto& d : ds) {
        if (declared_gamma(d) != -1.0) {
            throw WrongCaseError("case ii requires every gamma = -1 exactly");
        }
    }
    const double a = lattice_mix_constant(alpha, lattice_count(ds), n + 1);

    std::vector<double> f_at(ds.size()), fI_at(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        f_at[i] = ds[i].f().eval(x);
        fI_at[i] = ds[i].f().integral(x);
    }
    KahanSum sum;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        double term = f_at[i];
        for (std::size_t j = 0; j < ds.size(); ++j) {
            if (j != i) term *= fI_at[j];
        }
        sum.add(term);
    }
    return TailValue{n * std::log(a) - alpha * x + std::log(sum.value())};
}

TailValue predict_thm12_case_iii(const std::vector<SemiRVDistribution>& ds,
                                 int m_split, double x) {
    const double alpha = shared_alpha(ds);
    require_divergent(ds);
    if (ds.size() < 2) throw DomainError("case iii needs at least two distributions");
    const int count = static_cast<int>(ds.size());
    const int n = count - 1;
    if (m_split < 0 || m_split > n) {
        throw WrongCaseError("case iii split must satisfy 0 <= m <= n");
    }
    for (int i = 0; i < count; ++i) {
        const double g = declared_gamma(ds[i]);
        if (i < m_split && g != -1.0) {
            throw WrongCaseError("case iii: the first m factors must have gamma = -1");
        }
        if (i >= m_split && g <= -1.0) {
            throw WrongCaseError("case iii: the remaining factors must have gamma > -1");
        }
    }
    const double a = lattice_mix_constant(alpha, lattice_count(ds), count);

    double log_val = n * std::log(a) - alpha * x + (n - m_split) * std::log(x);
    for (int i = m_split; i < count; ++i) log_val += ds[i].f().log_eval(x);
    double gsum = 0.0;
    for (int j = m_split + 1; j <= n; ++j) {
        gsum += declared_gamma(ds[j - 1]);
        log_val += ln_beta(gsum + (j - m_split), declared_gamma(ds[j]) + 1.0);
    }
    for (int r = 0; r < m_split; ++r) {
        log_val += std::log(ds[r].f().integral(x));
    }
    return TailValue{log_val};
}

double predict_lemma22(const TailFunctionSpec& f1, const TailFunctionSpec& f2,
                       double x) {
    auto g1 = f1.gamma_index();
    auto g2 = f2.gamma_index();
    if (!g1 || !g2 || *g1 < -1.0 || *g2 < -1.0 || !f1.divergent_integral() ||
        !f2.divergent_integral()) {
        throw WrongCaseError(
            "pairwise asymptotic forms require regularly varying factors with gamma >= -1 "
            "and divergent integrals");
    }
    if (*g1 > -1.0 && *g2 > -1.0) {
        return x * f1.eval(x) * f2.eval(x) * beta(*g1 + 1.0, *g2 + 1.0);
    }
    if (*g1 == -1.0 && *g2 == -1.0) {
        return f1.eval(x) * f2.integral(x) + f2.eval(x) * f1.integral(x);
    }
    // one index at -1, the other above
    if (*g1 == -1.0) return f2.eval(x) * f1.integral(x);
    return f1.eval(x) * f2.integral(x);
}

std::pair<double, double> gnI_product_check(const std::vector<TailFunctionSpec>& fs,
                                            double x) {
    if (fs.empty()) throw DomainError("gnI_product_check: empty input");
    for (const auto& f : fs) {
        auto g = f.gamma_index();
        if (!g || *g != -1.0) {
            throw WrongCaseError("gnI_product_check requires every gamma = -1");
        }
    }
    const double lhs = function_convolve_n_integral(fs, x);
    double rhs = 1.0;
    for (const auto& f : fs) rhs *= f.integral(x);
    return {lhs, rhs};
}

TailValue predict_prop41(double alpha, double C, double D, double beta_exp,
                         int n_fold, double x) {
    if (!(alpha > 0.0) || !(C > 0.0) || !(beta_exp > 0.0 && beta_exp < 1.0)) {
        throw DomainError("predict_prop41: need alpha > 0, C > 0, beta in (0,1)");
    }
    if (n_fold < 2) throw DomainError("predict_prop41: n_fold must be >= 2");
    if (!(x > 0.0)) throw DomainError("predict_prop41: x must be > 0");

    if (n_fold == 2) {
        const double scale = C * std::pow(x, beta_exp);
        const double peak = scale * std::pow(2.0, 1.0 - beta_exp);  // at t = 1/2
        auto res = integrate(
            [&](double t) {
                const double g =
                    scale * (std::pow(1.0 - t, beta_exp) + std::pow(t, beta_exp));
                return std::exp(g - peak);
            },
            0.0, 1.0, {0.5}, {.rel_tol = 1e-10});
        return TailValue{std::log(alpha) + std::log(x) - alpha * x + 2.0 * D +
                         peak + std::log(res.value)};
    }

    TailFunctionSpec f(ExpPowerFamily{C, beta_exp, D});
    std::vector<TailFunctionSpec> fs(static_cast<std::size_t>(n_fold), f);
    const double conv = function_convolve_n(fs, x);
    return TailValue{(n_fold - 1) * std::log(alpha) - alpha * x + std::log(conv)};
}

std::pair<TailValue, TailValue> envelope_prop42(
    const std::vector<EnvelopeInput>& inputs, double x) {
    if (inputs.size() < 2) throw DomainError("envelope_prop42: need >= 2 inputs");
    std::vector<SemiRVDistribution> ds;
    double log_c = 0.0, log_d = 0.0;
    std::vector<double> gam;
    for (const auto& in : inputs) {
        if (!(in.c > 0.0) || in.c > in.d) {
            throw InvalidSpecError("envelope_prop42: need 0 < c <= d");
        }
        auto g = in.f0.gamma_index();
        if (!g || *g <= -1.0) {
            throw WrongCaseError("envelope_prop42: f0 must be regularly varying "
                                 "with gamma > -1");
        }
        gam.push_back(*g);
        log_c += std::log(in.c);
        log_d += std::log(in.d);
        ds.push_back(in.dist);
    }
    const double alpha = shared_alpha(ds);
    const int n = static_cast<int>(inputs.size()) - 1;
    const double a =
        lattice_mix_constant(alpha, lattice_count(ds), n + 1);

    double center = n * std::log(a) - alpha * x + n * std::log(x);
    double gsum = 0.0;
    for (int j = 1; j <= n; ++j) {
        gsum += gam[j - 1];
        center += ln_beta(gsum + j, gam[j] + 1.0);
    }
    for (const auto& in : inputs) center += in.f0.log_eval(x);
    return {TailValue{log_c + center}, TailValue{log_d + center}};
}

AsymptoticPrediction classify_and_predict(std::vector<SemiRVDistribution> ds) {
    shared_alpha(ds);
    require_divergent(ds);

    AsymptoticPrediction pred;
    pred.a_constant = lattice_mix_constant(
        ds.front().alpha(), lattice_count(ds), static_cast<int>(ds.size()));

    const bool all_l11 = std::all_of(ds.begin(), ds.end(), [](const auto& d) {
        return d.class_tag() == ClassTag::L11;
    });
    if (!all_l11 || ds.size() < 2) {
        pred.case_tag = PredictorCase::Thm11General;
        pred.log_eval = [ds](double x) { return predict_thm11(ds, x).log_value; };
        return pred;
    }

    const bool any_minus1 = std::any_of(ds.begin(), ds.end(), [](const auto& d) {
        return *d.f().gamma_index() == -1.0;
    });
    const bool all_minus1 = std::all_of(ds.begin(), ds.end(), [](const auto& d) {
        return *d.f().gamma_index() == -1.0;
    });

    if (!any_minus1) {
        pred.case_tag = PredictorCase::Thm12AllAboveMinus1;
        pred.log_eval = [ds](double x) {
            return predict_thm12_case_i(ds, x).log_value;
        };
    } else if (all_minus1) {
        pred.case_tag = PredictorCase::Thm12AllMinus1;
        pred.log_eval = [ds](double x) {
            return predict_thm12_case_ii(ds, x).log_value;
        };
    } else {
        // Convolution is commutative: order the gamma = -1 block first.
        std::stable_partition(ds.begin(), ds.end(), [](const auto& d) {
            return *d.f().gamma_index() == -1.0;
        });
        const int m = static_cast<int>(
            std::count_if(ds.begin(), ds.end(), [](const auto& d) {
                return *d.f().gamma_index() == -1.0;
            }));
        pred.case_tag = PredictorCase::Thm12Mixed;
        pred.log_eval = [ds, m](double x) {
            return predict_thm12_case_iii(ds, m, x).log_value;
        };
    }
    return pred;
}

}  // namespace semirv
