#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semirv/errors.hpp"
#include "semirv/fft.hpp"
#include "semirv/numeric.hpp"
#include "semirv/pchip.hpp"
#include "semirv/quadrature.hpp"
#include "semirv/rng.hpp"

using namespace semirv;

TEST_CASE("quadrature: smooth integrands") {
    auto poly = [](double x) { return x * x; };
    CHECK(integrate(poly, 0.0, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    auto decay = [](double x) { return std::exp(-x); };
    CHECK(integrate(decay, 0.0, 40.0).value == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(integrate(poly, 2.0, 2.0).value == 0.0);
    CHECK_THROWS_AS(integrate(poly, 1.0, 0.0), DomainError);
}

TEST_CASE("quadrature: integrable endpoint singularity") {
    // int_0^1 ln(1/x) dx = 1
    auto f = [](double x) { return -std::log(x); };
    const auto res = integrate(f, 0.0, 1.0, {}, {.rel_tol = 1e-10});
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quadrature: kink handled via breakpoint seeding") {
    auto f = [](double x) { return std::abs(x - 1.0 / 3.0); };
    // exact: 1/18 + (2/3)^2/2 = 5/18
    const auto res = integrate(f, 0.0, 1.0, {1.0 / 3.0}, {.rel_tol = 1e-13});
    CHECK(res.value == doctest::Approx(5.0 / 18.0).epsilon(1e-13));
}

TEST_CASE("quadrature: starved budget reports failure") {
    auto rough = [](double x) { return std::cos(500.0 * x) + 1.000001; };
    QuadratureOptions opts;
    opts.rel_tol = 1e-14;
    opts.max_levels = 1;
    opts.throw_on_failure = false;
    const auto res = integrate(rough, 0.0, 10.0, {}, opts);
    CHECK_FALSE(res.converged);

    opts.throw_on_failure = true;
    CHECK_THROWS_AS(integrate(rough, 0.0, 10.0, {}, opts), AccuracyError);
}

TEST_CASE("pchip: reproduces linear data exactly and preserves monotonicity") {
    std::vector<double> xs = {0.0, 0.5, 1.25, 3.0, 4.0};
    std::vector<double> lin;
    for (double x : xs) lin.push_back(3.0 * x + 1.0);
    const PchipInterpolant f(xs, lin);
    for (double x = 0.0; x <= 4.0; x += 0.13) {
        CHECK(f(x) == doctest::Approx(3.0 * x + 1.0).epsilon(1e-14));
    }
    CHECK(f.integral_to(4.0) == doctest::Approx(3.0 * 8.0 + 4.0).epsilon(1e-14));

    // monotone convex data: no overshoot anywhere
    std::vector<double> ys;
    for (double x : xs) ys.push_back(x * x);
    const PchipInterpolant g(xs, ys);
    double prev = -1.0;
    for (double x = 0.0; x <= 4.0; x += 0.01) {
        const double v = g(x);
        CHECK(v >= prev - 1e-12);
        CHECK(v >= 0.0);
        CHECK(v <= 16.0 + 1e-12);
        prev = v;
    }
    // clamped outside the node range
    CHECK(g(-1.0) == g(0.0));
    CHECK(g(9.0) == g(4.0));
}

TEST_CASE("pchip: integral of a smooth shape is quadrature-accurate") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 400; ++i) {
        const double x = 2.0 * i / 400.0;
        xs.push_back(x);
        ys.push_back(std::exp(-x));
    }
    const PchipInterpolant f(xs, ys);
    CHECK(f.integral_to(2.0) ==
          doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-8));
    CHECK(f.integral_to(1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-8));
    CHECK_THROWS_AS(PchipInterpolant({1.0}, {2.0}), InvalidSpecError);
    CHECK_THROWS_AS(PchipInterpolant({1.0, 1.0}, {2.0, 3.0}), InvalidSpecError);
}

TEST_CASE("convolve: direct and FFT paths agree") {
    CounterRng rng(13, 0);
    std::vector<double> a(300), b(5000);
    for (auto& v : a) v = rng.next_double();
    for (auto& v : b) v = rng.next_double();

    const auto direct = convolve(a, b, 1u << 30);
    const auto fft = convolve(a, b, 16);  // force the FFT path
    REQUIRE(direct.size() == fft.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) {
        worst = std::max(worst, std::abs(direct[i] - fft[i]));
    }
    CHECK(worst < 1e-9);

    const auto tiny = convolve({1.0, 2.0}, {3.0, 4.0});
    REQUIRE(tiny.size() == 3);
    CHECK(tiny[0] == doctest::Approx(3.0));
    CHECK(tiny[1] == doctest::Approx(10.0));
    CHECK(tiny[2] == doctest::Approx(8.0));
}

TEST_CASE("compensated summation beats naive accumulation") {
    KahanSum sum;
    double naive = 0.0;
    const double big = 1e16;
    sum.add(big);
    naive += big;
    for (int i = 0; i < 10000; ++i) {
        sum.add(1.0);
        naive += 1.0;
    }
    sum.add(-big);
    naive += -big;
    CHECK(sum.value() == doctest::Approx(10000.0).epsilon(1e-12));
    CHECK(std::abs(naive - 10000.0) > 100.0);  // the point of compensation
}

TEST_CASE("log_add_exp and formatting") {
    CHECK(log_add_exp(0.0, 0.0) == doctest::Approx(std::log(2.0)));
    CHECK(log_add_exp(kNegInf, -1.0) == -1.0);
    CHECK(log_add_exp(-1000.0, -1000.0) == doctest::Approx(-1000.0 + std::log(2.0)));

    CHECK(format_double(0.5) == "0.5");
    const std::string huge = format_double(1e300);
    const bool scientific_or_decimal =
        huge.find('.') != std::string::npos || huge.find('e') != std::string::npos;
    CHECK(scientific_or_decimal);
    // 17 significant digits round-trip
    const double v = 0.1234567890123456789;
    CHECK(std::stod(format_double(v)) == v);
}
