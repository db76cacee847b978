#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semirv/dist.hpp"
#include "semirv/errors.hpp"
#include "semirv/json_io.hpp"
#include "semirv/quadrature.hpp"

using namespace semirv;

namespace {

SemiRVDistribution exp1() {
    return SemiRVDistribution::make(1.0, TailFunctionSpec(ConstantFamily{1.0}),
                                    DistKind::Continuous);
}

SemiRVDistribution geometric_half() {
    return SemiRVDistribution::make(std::log(2.0),
                                    TailFunctionSpec(ConstantFamily{1.0}),
                                    DistKind::Lattice);
}

SemiRVDistribution gamma2() {
    return SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{1.0, 1.0}),
                                    DistKind::Continuous);
}

// Test-side bisection on the tail, independent of the library root finder.
double bisect_tail(const SemiRVDistribution& d, double target, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (d.tail(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double ks_distance(std::vector<double> sample, const SemiRVDistribution& d) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 1.0 - d.tail(sample[i]);
        worst = std::max(worst, std::abs((i + 1) / n - cdf));
        worst = std::max(worst, std::abs(i / n - cdf));
    }
    return worst;
}

}  // namespace

TEST_CASE("exponential construction") {
    const auto d = exp1();
    CHECK(d.head_cutoff() == 0.0);
    CHECK(d.atom_mass() == 0.0);
    CHECK(d.class_tag() == ClassTag::L11);
    CHECK(d.tail(3.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
    CHECK(d.tail(-1.0) == 1.0);
    CHECK(d.density(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("geometric construction") {
    const auto d = geometric_half();
    CHECK(d.lattice_cutoff() == 0);
    for (int k = 0; k <= 12; ++k) {
        CHECK(d.tail(k) == doctest::Approx(std::pow(2.0, -k)).epsilon(1e-14));
    }
    CHECK(d.pmf(4) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(d.pmf(0) == 0.0);
    // step tail between the integers
    CHECK(d.tail(4.5) == doctest::Approx(d.tail(4.0)));
}

TEST_CASE("gamma-2 style construction (log-power, gamma = 1)") {
    const auto d = gamma2();
    // e^(-x)(1+x) <= 1 with equality only at 0, decreasing on all of [0, inf):
    // the smallest admissible cutoff is 0 and the tail is the envelope itself.
    CHECK(d.head_cutoff() == 0.0);
    CHECK(d.atom_mass() == 0.0);
    for (double x : {0.0, 0.5, 3.0, 10.0}) {
        CHECK(d.tail(x) == doctest::Approx(std::exp(-x) * (1.0 + x)).epsilon(1e-13));
    }
    CHECK(d.density(5.0) == doctest::Approx(5.0 * std::exp(-5.0)).epsilon(1e-13));
}

TEST_CASE("exp-power head: monotonicity cutoff and atom") {
    const auto d = SemiRVDistribution::make(
        1.0, TailFunctionSpec(ExpPowerFamily{1.0, 0.5, -1.0}), DistKind::Continuous);
    // x0 = (C beta / alpha)^(1/(1-beta)) = 1/4
    CHECK(d.head_cutoff() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.atom_mass() ==
          doctest::Approx(1.0 - std::exp(-0.75)).epsilon(1e-12));
    CHECK(d.tail(0.2) == 1.0);
    CHECK(d.tail(4.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("oscillating family validates against alpha") {
    const auto d = SemiRVDistribution::make(
        1.0, TailFunctionSpec(PiecewiseOscillatingFamily{}), DistKind::Continuous);
    // slope ratio 5/(5x-12) <= 1 from x = 3.4 onward
    CHECK(d.head_cutoff() == doctest::Approx(3.4).epsilon(1e-12));
    CHECK(d.tail(3.0) == 1.0);
    CHECK(d.tail(4.0) == doctest::Approx(8.0 * std::exp(-4.0)).epsilon(1e-12));
}

TEST_CASE("class tags are exact") {
    CHECK(gamma2().class_tag() == ClassTag::L11);
    CHECK(SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{-1.0, 1.0}),
                                   DistKind::Continuous)
              .class_tag() == ClassTag::L11);
    CHECK(SemiRVDistribution::make(1.0, TailFunctionSpec(ExpPowerFamily{1.0, 0.5, -1.0}),
                                   DistKind::Continuous)
              .class_tag() == ClassTag::L1Not11);
    CHECK(SemiRVDistribution::make(1.0, TailFunctionSpec(PiecewiseOscillatingFamily{}),
                                   DistKind::Continuous)
              .class_tag() == ClassTag::L1Not11);
    CHECK(SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{-2.0, 1.0}),
                                   DistKind::Continuous)
              .class_tag() == ClassTag::L2);
}

TEST_CASE("tail is nonincreasing on a dense grid for every family") {
    const std::vector<SemiRVDistribution> ds = {
        exp1(),
        gamma2(),
        geometric_half(),
        SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{-1.0, 1.0}),
                                 DistKind::Continuous),
        SemiRVDistribution::make(1.0, TailFunctionSpec(ExpPowerFamily{1.0, 0.5, -1.0}),
                                 DistKind::Continuous),
        SemiRVDistribution::make(1.0, TailFunctionSpec(PiecewiseOscillatingFamily{}),
                                 DistKind::Continuous),
        SemiRVDistribution::make(0.8, TailFunctionSpec(KaramataFamily{1.0, 0.5, 0.5,
                                                                      std::exp(1.0)}),
                                 DistKind::Continuous),
        SemiRVDistribution::make(0.5, TailFunctionSpec(LogLogPowerFamily{3.0, 2.0}),
                                 DistKind::Continuous),
    };
    for (const auto& d : ds) {
        double prev = 1.0 + 1e-15;
        for (int i = 0; i < 10000; ++i) {
            const double x = 60.0 * i / 10000.0;
            const double t = d.tail(x);
            CHECK(t <= prev * (1.0 + 1e-12));
            prev = t;
        }
    }
}

TEST_CASE("continuous normalization: atom + integral of density = 1") {
    const std::vector<SemiRVDistribution> ds = {
        exp1(),
        gamma2(),
        SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{-1.0, 1.0}),
                                 DistKind::Continuous),
        SemiRVDistribution::make(1.0, TailFunctionSpec(ExpPowerFamily{1.0, 0.5, -1.0}),
                                 DistKind::Continuous),
        SemiRVDistribution::make(1.0, TailFunctionSpec(PiecewiseOscillatingFamily{}),
                                 DistKind::Continuous),
    };
    for (const auto& d : ds) {
        const double hi = d.head_cutoff() + 200.0 / d.alpha();
        auto res = integrate([&](double x) { return d.density(x); },
                             d.head_cutoff(), hi,
                             d.f().breakpoints_up_to(hi), {.rel_tol = 1e-11});
        const double remainder = d.tail(hi);  // exponential envelope bound
        CHECK(std::abs(d.atom_mass() + res.value + remainder - 1.0) < 1e-9);
    }
}

TEST_CASE("lattice normalization identity") {
    const auto d = geometric_half();
    const double K = 200.0 / d.alpha();
    double sum = 0.0;
    for (long long k = 0; k <= static_cast<long long>(K); ++k) sum += d.pmf(k);
    const double bound =
        2.0 * std::exp(-d.alpha() * K) * d.f().eval(K);
    CHECK(std::abs(1.0 - sum) < std::max(bound, 1e-12));
}

TEST_CASE("quantile examples") {
    CHECK(exp1().quantile(1.0 - std::exp(-2.0)) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(geometric_half().quantile(0.75) == 2.0);

    const auto d = gamma2();
    const double oracle = bisect_tail(d, 0.5, 0.0, 50.0);
    CHECK(oracle == doctest::Approx(1.67835).epsilon(1e-5));
    CHECK(d.quantile(0.5) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("quantile-tail identity") {
    const std::vector<SemiRVDistribution> ds = {
        exp1(), gamma2(),
        SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{-1.0, 1.0}),
                                 DistKind::Continuous)};
    for (const auto& d : ds) {
        for (double u : {0.01, 0.1, 0.5, 0.9, 0.999}) {
            CHECK(std::abs(d.tail(d.quantile(u)) - (1.0 - u)) < 1e-10);
        }
    }
    CHECK_THROWS_AS(exp1().quantile(0.0), DomainError);
    CHECK_THROWS_AS(exp1().quantile(1.0), DomainError);
}

TEST_CASE("quantile lands on the head atom") {
    const auto d = SemiRVDistribution::make(
        1.0, TailFunctionSpec(ExpPowerFamily{1.0, 0.5, -1.0}), DistKind::Continuous);
    CHECK(d.quantile(0.1) == d.head_cutoff());
    CHECK(d.quantile(d.atom_mass() * 0.999) == d.head_cutoff());
    CHECK(d.quantile(0.99) > d.head_cutoff());
}

TEST_CASE("sampling: determinism and moments") {
    const auto d = exp1();
    const auto batch = d.sample(42, 0, 1000000);
    double mean = 0.0;
    for (double v : batch.values) mean += v;
    mean /= static_cast<double>(batch.values.size());
    CHECK(std::abs(mean - 1.0) < 4e-3);

    const auto again = d.sample(42, 0, 1000000);
    CHECK(std::equal(batch.values.begin(), batch.values.end(), again.values.begin()));
    const auto other = d.sample(42, 1, 1000);
    CHECK(other.values[0] != batch.values[0]);
    CHECK_THROWS_AS(d.sample(1, 0, 0), DomainError);
}

TEST_CASE("sampling: geometric pmf frequency") {
    const auto d = geometric_half();
    const auto batch = d.sample(7, 3, 1000000);
    const auto ones = std::count(batch.values.begin(), batch.values.end(), 1.0);
    CHECK(std::abs(static_cast<double>(ones) / 1e6 - 0.5) < 0.002);
}

TEST_CASE("sampling: KS distance below the 1% critical value") {
    const std::vector<SemiRVDistribution> ds = {
        exp1(), gamma2(),
        SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{-1.0, 1.0}),
                                 DistKind::Continuous)};
    std::uint64_t stream = 0;
    for (const auto& d : ds) {
        const auto batch = d.sample(20240612, stream++, 100000);
        CHECK(ks_distance(batch.values, d) < 0.006);
    }
}

TEST_CASE("exp_moment_partial") {
    CHECK(exp1().exp_moment_partial(10.0) == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(geometric_half().exp_moment_partial(20.0) ==
          doctest::Approx(20.0).epsilon(1e-12));
    CHECK_THROWS_AS(exp1().exp_moment_partial(0.0), DomainError);

    // a lattice head atom counts only once s reaches it
    const auto heavy = SemiRVDistribution::make(
        0.5, TailFunctionSpec(ConstantFamily{3.0}), DistKind::Lattice);
    REQUIRE(heavy.lattice_cutoff() == 3);  // ln 3 / 0.5 ~ 2.2
    REQUIRE(heavy.atom_mass() > 0.0);
    CHECK(heavy.exp_moment_partial(2.5) == 0.0);
    CHECK(heavy.exp_moment_partial(3.0) ==
          doctest::Approx(heavy.atom_mass() * std::exp(0.5 * 3.0)).epsilon(1e-12));

    // finite-range rendering of the moment/integral equivalence
    const auto d = gamma2();
    for (double s = 50.0; s <= 500.0; s += 75.0) {
        const double ratio = d.exp_moment_partial(s) / d.f().integral(s);
        CHECK(ratio > 1.0 / 8.0);
        CHECK(ratio < 4.0);
    }
}

TEST_CASE("usage errors") {
    CHECK_THROWS_AS(exp1().pmf(3), UsageError);
    CHECK_THROWS_AS(geometric_half().density(3.0), UsageError);
    CHECK_THROWS_AS(
        SemiRVDistribution::make(0.0, TailFunctionSpec(ConstantFamily{1.0}),
                                 DistKind::Continuous),
        InvalidSpecError);
}

TEST_CASE("sample batch CSV export") {
    auto batch = exp1().sample(5, 9, 3);
    std::ostringstream out;
    batch.write_csv(out);
    const std::string text = out.str();
    CHECK(text.rfind("# seed=5, stream=9\r\n", 0) == 0);
    CHECK(text.find("value\r\n") != std::string::npos);
}

TEST_CASE("distribution json round trip") {
    const auto d = SemiRVDistribution::make(
        0.75, TailFunctionSpec(LogPowerFamily{0.5, 2.0}), DistKind::Continuous);
    auto j = to_json(d);
    const auto back = dist_from_json(j);
    CHECK(back.alpha() == d.alpha());
    CHECK(back.dist_kind() == DistKind::Continuous);
    for (double x : {0.0, 1.0, 8.0}) {
        CHECK(back.tail(x) == doctest::Approx(d.tail(x)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(dist_from_json(nlohmann::json{{"alpha", 1.0}}), InvalidSpecError);
}
