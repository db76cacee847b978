#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semirv/errors.hpp"
#include "semirv/json_io.hpp"
#include "semirv/oracle.hpp"
#include "semirv/risk.hpp"

using namespace semirv;

namespace {

TailFunctionSpec constant1() { return TailFunctionSpec(ConstantFamily{1.0}); }
TailFunctionSpec lp(double gamma) {
    return TailFunctionSpec(LogPowerFamily{gamma, 1.0});
}

RiskModelConfig reference_config(int n) {
    std::vector<TailFunctionSpec> ins(n, constant1());
    std::vector<TailFunctionSpec> fin(n, constant1());
    return RiskModelConfig::make(1.0, ins, fin);
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(RiskModelConfig::make(1.0, {constant1()}, {}), InvalidSpecError);
    CHECK_THROWS_AS(RiskModelConfig::make(1.0, {lp(-2.0)}, {constant1()}),
                    InvalidSpecError);
    const auto cfg = reference_config(2);
    CHECK(cfg.n == 2);
    CHECK(cfg.insurance.size() == 2);
}

TEST_CASE("paths: running max dominates the terminal sum") {
    const auto cfg = reference_config(3);
    const auto paths = simulate_paths(cfg, 5000, 99);
    for (const auto& p : paths) {
        CHECK(p.m_n >= 0.0);
        CHECK(p.m_n >= p.s_n - 1e-12);
    }
    const auto again = simulate_paths(cfg, 5000, 99);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        CHECK(paths[i].s_n == again[i].s_n);
    }
}

TEST_CASE("single-period product matches the log-domain convolution") {
    const auto cfg = reference_config(1);
    // P(X1 Y1 > x) = P(ln X1 + ln Y1 > ln x)
    const double x = std::exp(5.0);
    const auto est = ruin_mc(cfg, x, 1, 1000000, 31);
    const double exact =
        conv_tail_2(cfg.insurance[0], cfg.financial[0], std::log(x)).value();
    CHECK(exact > est.sn_interval.low);
    CHECK(exact < est.sn_interval.high);
}

TEST_CASE("ruin estimates: psi >= P(S_n > x) path-wise, monotone in x and horizon") {
    const auto cfg = reference_config(2);
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull, 5151ull}) {
        const auto est = ruin_mc(cfg, 50.0, 2, 50000, seed);
        CHECK(est.point >= est.sn_point);
        CHECK(est.ci_low <= est.point);
        CHECK(est.point <= est.ci_high);
    }
    // same seed, increasing x
    double prev = 2.0;
    for (double x : {10.0, 30.0, 90.0, 270.0}) {
        const auto est = ruin_mc(cfg, x, 2, 50000, 7);
        CHECK(est.point <= prev);
        prev = est.point;
    }
    // same seed, increasing horizon: paths share prefixes stream-wise
    const auto h1 = ruin_mc(cfg, 40.0, 1, 50000, 7);
    const auto h2 = ruin_mc(cfg, 40.0, 2, 50000, 7);
    CHECK(h2.point >= h1.point);

    // x -> 0+: every path has M_n >= X_1 Y_1 >= 1, so the estimate is 1
    const auto near_zero = ruin_mc(cfg, 1e-9, 2, 10000, 7);
    CHECK(near_zero.point == 1.0);

    CHECK_THROWS_AS(ruin_mc(cfg, -1.0, 2, 1000, 1), DomainError);
    CHECK_THROWS_AS(ruin_mc(cfg, 10.0, 3, 1000, 1), DomainError);
}

TEST_CASE("shifted-exp negative part exercises the positive-part operator") {
    std::vector<TailFunctionSpec> ins = {TailFunctionSpec(ExpPowerFamily{1.0, 0.5, -1.0})};
    std::vector<TailFunctionSpec> fin = {constant1()};
    const auto cfg = RiskModelConfig::make(1.0, ins, fin,
                                           NegativePartPolicy::ShiftedExp, 2.0);
    const double atom = cfg.insurance[0].atom_mass();
    REQUIRE(atom > 0.5);

    // X_i < 0 with probability ~ atom; M_n never dips below zero
    const auto paths = simulate_paths(cfg, 200000, 5);
    std::size_t negative = 0;
    for (const auto& p : paths) {
        CHECK(p.m_n >= 0.0);
        if (p.s_n < 0.0) ++negative;
    }
    const double frac = static_cast<double>(negative) / paths.size();
    CHECK(frac > atom - 0.01);
    CHECK(frac < atom + 0.01);

    // grid oracle refuses this policy
    CHECK_THROWS_AS(sn_tail_oracle_grid(cfg, {10.0}), UnsupportedCaseError);
}

TEST_CASE("grid recursion: n = 1 matches the pairwise quadrature oracle") {
    const auto cfg = reference_config(1);
    const std::vector<double> xs = {std::exp(2.0), std::exp(4.0), std::exp(6.0)};
    const auto brackets = sn_tail_oracle_grid(cfg, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double exact =
            conv_tail_2(cfg.insurance[0], cfg.financial[0], std::log(xs[i])).value();
        CHECK(brackets[i].lower <= exact);
        CHECK(brackets[i].upper >= exact);
        CHECK(brackets[i].width() < 0.05 * brackets[i].midpoint());
    }
}

TEST_CASE("grid recursion vs MC on three reference configs up to n = 3") {
    const std::vector<RiskModelConfig> configs = {
        reference_config(2),
        reference_config(3),
        RiskModelConfig::make(1.0, {lp(1.0)}, {constant1()}),
    };
    std::uint64_t seed = 40;
    for (const auto& cfg : configs) {
        const double x = std::exp(5.0);
        const auto bracket = sn_tail_oracle_grid(cfg, {x})[0];
        const auto est = ruin_mc(cfg, x, cfg.n, 400000, seed++);
        CHECK(bracket.lower <= est.sn_interval.high);
        CHECK(bracket.upper >= est.sn_interval.low);
    }
}

TEST_CASE("grid recursion: n = 2 brackets the Monte Carlo estimate") {
    const auto cfg = reference_config(2);
    const double x = std::exp(6.0);
    const auto bracket = sn_tail_oracle_grid(cfg, {x})[0];
    const auto est = ruin_mc(cfg, x, 2, 1000000, 12);
    // both enclose the truth, so the intervals must overlap
    CHECK(bracket.lower <= est.sn_interval.high);
    CHECK(bracket.upper >= est.sn_interval.low);

    // monotone in x
    const auto more = sn_tail_oracle_grid(cfg, {std::exp(4.0), std::exp(5.0), x});
    CHECK(more[0].midpoint() >= more[1].midpoint());
    CHECK(more[1].midpoint() >= more[2].midpoint());
}

TEST_CASE("predict_thm31") {
    const auto cfg = reference_config(1);
    // constants: prediction x^-1 ln x
    for (double x : {std::exp(4.0), std::exp(8.0)}) {
        const auto pred = predict_thm31(cfg, x);
        CHECK(pred.value.value() ==
              doctest::Approx(std::log(x) / x).epsilon(1e-9));
        CHECK(pred.conditions_ok);
    }

    // ratio against the exact pairwise oracle tightens from e^10 to e^20
    auto ratio_at = [&](double t) {
        const double oracle =
            conv_tail_2(cfg.insurance[0], cfg.financial[0], t).log_value;
        const double pred = predict_thm31(cfg, std::exp(t)).value.log_value;
        return std::exp(oracle - pred);
    };
    CHECK(std::abs(ratio_at(20.0) - 1.0) < std::abs(ratio_at(10.0) - 1.0));

    // alpha scaling: log-log slope is -alpha
    std::vector<TailFunctionSpec> ins2(1, constant1()), fin2(1, constant1());
    const auto cfg2 = RiskModelConfig::make(2.0, ins2, fin2);
    const double lx1 = 8.0, lx2 = 12.0;
    const double slope = (predict_thm31(cfg2, std::exp(lx2)).value.log_value -
                          predict_thm31(cfg2, std::exp(lx1)).value.log_value) /
                         (lx2 - lx1);
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("predict_thm32 cases") {
    // case i, n = 1, constants: equals thm31 exactly
    const auto cfg1 = reference_config(1);
    for (double x : {std::exp(3.0), std::exp(7.0)}) {
        CHECK(predict_thm32(cfg1, x, Thm32Case::I).log_value ==
              doctest::Approx(predict_thm31(cfg1, x).value.log_value).epsilon(1e-12));
    }

    // case i, n = 2, all zero gammas: alpha^2 x^-alpha (ln x)^2 / 2
    const auto cfg2 = reference_config(2);
    const double x = std::exp(9.0);
    CHECK(predict_thm32(cfg2, x, Thm32Case::I).value() ==
          doctest::Approx(81.0 / 2.0 / x).epsilon(1e-12));
    // and thm31's quadrature path agrees exactly for constants
    CHECK(predict_thm32(cfg2, x, Thm32Case::I).log_value ==
          doctest::Approx(predict_thm31(cfg2, x).value.log_value).epsilon(1e-11));

    // case iv, n = 1: alpha x^-alpha ln(1 + ln x)
    const auto cfg_iv = RiskModelConfig::make(1.0, {constant1()}, {lp(-1.0)});
    CHECK(predict_thm32(cfg_iv, x, Thm32Case::IV).value() ==
          doctest::Approx(std::log(1.0 + 9.0) / x).epsilon(1e-12));

    // case ii and iii forms at n = 1
    const auto cfg_ii = RiskModelConfig::make(1.0, {lp(-1.0)}, {lp(-1.0)});
    const double t = 9.0;
    // f(t) f*^I(t) + f^I(t) f*(t) with f = f* = 1/(1+t)
    const double want_ii = 2.0 * std::log(1.0 + t) / (1.0 + t) / x;
    CHECK(predict_thm32(cfg_ii, x, Thm32Case::II).value() ==
          doctest::Approx(want_ii).epsilon(1e-12));

    const auto cfg_iii = RiskModelConfig::make(1.0, {lp(-1.0)}, {constant1()});
    CHECK(predict_thm32(cfg_iii, x, Thm32Case::III).value() ==
          doctest::Approx(std::log(1.0 + t) / x).epsilon(1e-12));

    // gamma/case mismatches are rejected
    CHECK_THROWS_AS(predict_thm32(cfg_ii, x, Thm32Case::I), WrongCaseError);
    CHECK_THROWS_AS(predict_thm32(cfg1, x, Thm32Case::II), WrongCaseError);
    CHECK_THROWS_AS(predict_thm32(cfg_iii, x, Thm32Case::IV), WrongCaseError);
}

TEST_CASE("predict_theoremA") {
    // n = 1, gamma* = gamma_1 = 1, pure powers: x^-1 ln x
    const auto cfg = RiskModelConfig::make(1.0, {lp(0.0)}, {lp(0.0)});
    const double x = std::exp(11.0);
    CHECK(predict_theoremA(cfg, x).value() ==
          doctest::Approx(11.0 / x).epsilon(1e-12));

    // log-log slope in x equals -alpha
    const double slope =
        (predict_theoremA(cfg, std::exp(14.0)).log_value -
         predict_theoremA(cfg, std::exp(10.0)).log_value) / 4.0;
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.05));

    CHECK_THROWS_AS(
        predict_theoremA(RiskModelConfig::make(1.0, {lp(-1.0)}, {lp(0.0)}), x),
        WrongCaseError);
}

TEST_CASE("gamma-quotient form telescopes into the beta-product form") {
    CounterRng rng(20240613, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 4);
        const double gamma_star = 3.0 * rng.next_double();
        std::vector<TailFunctionSpec> ins, fin;
        for (int i = 0; i < n; ++i) {
            ins.push_back(lp(gamma_star - 1.0));
            fin.push_back(lp(3.0 * rng.next_double() - 1.0));
        }
        const auto cfg = RiskModelConfig::make(1.0, ins, fin);
        const double x = std::exp(6.0 + 40.0 * rng.next_double());
        const double ratio = std::exp(predict_theoremA(cfg, x).log_value -
                                      predict_thm32(cfg, x, Thm32Case::I).log_value);
        CHECK(std::abs(ratio - 1.0) < 1e-10);
    }
}

TEST_CASE("thm31 and thm32 agree within 2% for log-power configs at ln x = 1e3") {
    // x = e^1000 is far beyond double range; the log-domain entry points
    // keep the comparison exact.
    const auto cfg = RiskModelConfig::make(1.0, {lp(0.5)}, {lp(1.0)});
    const double t = 1000.0;
    const double log31 = predict_thm31_at_log_x(cfg, t).value.log_value;
    const double log32 = predict_thm32_at_log_x(cfg, t, Thm32Case::I).log_value;
    CHECK(std::abs(std::exp(log31 - log32) - 1.0) < 0.02);
}

TEST_CASE("dominance condition diagnostics") {
    // all-constant: both conditions produce 1/t, decreasing
    const auto cfg = reference_config(3);
    const auto report =
        check_dominance_conditions(cfg, {2.0, 4.0, 8.0, 16.0, 32.0});
    CHECK(report.passes);
    REQUIRE(report.condition_31.size() == 2);
    for (const auto& row : report.condition_33) {
        CHECK(row.front() > row.back());
    }

    // f_{k-1} = (1+t)^2 against constant f_k, f*_k: ratio grows, fails
    const auto bad = RiskModelConfig::make(
        1.0, {lp(2.0), constant1()}, {constant1(), constant1()});
    CHECK_FALSE(check_dominance_conditions(bad, {2.0, 4.0, 8.0, 16.0, 32.0}).passes);

    // theorem A parameterization with equal gamma* passes
    const auto ta = RiskModelConfig::make(1.0, {lp(0.5), lp(0.5)}, {lp(0.2), lp(0.8)});
    CHECK(check_dominance_conditions(ta, {4.0, 8.0, 16.0, 32.0, 64.0}).passes);
}

TEST_CASE("P(S_k > x) = o(P(S_{k+1} > x)) under the stronger condition") {
    const auto cfg = reference_config(2);
    double prev_ratio = 2.0;
    for (double t : {3.0, 4.5, 6.0}) {
        const double x = std::exp(t);
        const auto e1 = ruin_mc(cfg, x, 1, 400000, 77);
        const auto e2 = ruin_mc(cfg, x, 2, 400000, 77);
        const double ratio = e1.sn_point / e2.sn_point;
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
}

TEST_CASE("risk config json round trip") {
    const auto cfg = RiskModelConfig::make(1.5, {lp(0.5), lp(1.0)},
                                           {lp(0.2), lp(-1.0)},
                                           NegativePartPolicy::ShiftedExp, 3.0);
    const auto j = to_json(cfg);
    const auto back = risk_config_from_json(j);
    CHECK(back.n == 2);
    CHECK(back.alpha == 1.5);
    CHECK(back.negative_part == NegativePartPolicy::ShiftedExp);
    CHECK(back.shifted_exp_rate == 3.0);
    CHECK(back.financial[1].f().gamma_index().value() == -1.0);

    auto bad = j;
    bad["n"] = 7;
    CHECK_THROWS_AS(risk_config_from_json(bad), InvalidSpecError);
}
