#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "semirv/dist.hpp"
#include "semirv/oracle.hpp"

namespace semirv {

enum class PredictorCase {
    Thm11General,
    Thm12AllAboveMinus1,   // every gamma_i > -1
    Thm12AllMinus1,        // every gamma_i = -1
    Thm12Mixed,            // declared split: gamma = -1 block first
    Lemma22CaseI,
    Lemma22CaseII,
    Lemma22CaseIII,
    Prop41,
    Prop42Envelope,
};

std::string predictor_case_name(PredictorCase c);

struct AsymptoticPrediction {
    PredictorCase case_tag;
    double a_constant = 0.0;
    // log of the predicted tail at x.
    std::function<double(double)> log_eval;
    // Only set for envelope predictions: (log lower, log upper).
    std::function<std::pair<double, double>(double)> log_envelope;
};

// Theorem constant a: alpha when no convolution factor is lattice, e^alpha-1
// when all are, and the geometric mix in between.  The identity
// a^(n-1) = (e^alpha - 1)^m alpha^(n-m-1) holds for 0 <= m <= n-1.
double lattice_mix_constant(double alpha, int m_lattice, int n_total);

// a^(n-1) e^(-alpha x) f_1 (x) ... (x) f_n (x); quadrature-backed, valid for
// any divergent-integral ensemble with a shared alpha.
TailValue predict_thm11(const std::vector<SemiRVDistribution>& ds, double x);

// Closed form, all gamma_i > -1:
//   prod_j B(sum_{k<=j} gamma_k + j, gamma_{j+1}+1) a^n e^(-alpha x) x^n prod f_i(x)
TailValue predict_thm12_case_i(const std::vector<SemiRVDistribution>& ds, double x);

// Closed form, all gamma_i = -1:
//   a^n e^(-alpha x) sum_i f_i(x) prod_{j != i} f_j^I(x)
TailValue predict_thm12_case_ii(const std::vector<SemiRVDistribution>& ds, double x);

// Mixed split: ds[0..m_split) carry gamma = -1, the rest gamma > -1.
TailValue predict_thm12_case_iii(const std::vector<SemiRVDistribution>& ds,
                                 int m_split, double x);

// Pairwise function-level forms of the three asymptotic regimes; the case is
// selected from the declared indices.
double predict_lemma22(const TailFunctionSpec& f1, const TailFunctionSpec& f2,
                       double x);

// Returns (int_0^x g_n, prod f_i^I(x)) for all-gamma=-1 inputs; the two
// sides become asymptotically equal.
std::pair<double, double> gnI_product_check(const std::vector<TailFunctionSpec>& fs,
                                            double x);

// Exp-power predictor: for n_fold = 2 the exact integral representation
//   alpha x e^(-alpha x + 2D) int_0^1 exp(C x^beta ((1-t)^beta + t^beta)) dt,
// evaluated with the peak at t = 1/2 factored out; higher folds fall back to
// the quadrature form of the general theorem.
TailValue predict_prop41(double alpha, double C, double D, double beta,
                         int n_fold, double x);

struct EnvelopeInput {
    SemiRVDistribution dist;
    TailFunctionSpec f0;   // regularly varying comparison shape, gamma > -1
    double c = 1.0;        // liminf f/f0
    double d = 1.0;        // limsup f/f0
};

// (prod c_i * center, prod d_i * center) in the log domain, where center is
// the case-i closed form evaluated on the f0 shapes.
std::pair<TailValue, TailValue> envelope_prop42(
    const std::vector<EnvelopeInput>& inputs, double x);

// Dispatch over exact class tags and declared gammas; refuses mixed-alpha
// ensembles and convergent-integral members.
AsymptoticPrediction classify_and_predict(std::vector<SemiRVDistribution> ds);

}  // namespace semirv
