#include "semirv/special.hpp"

#include <cmath>

#include "semirv/errors.hpp"

namespace semirv {

namespace {

// Lanczos g = 7, n = 9 coefficient set (Godfrey).  Relative accuracy of the
// rational part is ~1e-15 over the right half plane.
constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoef[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // log(2*pi)/2
constexpr double kLogPi = 1.1447298858494001741;

double ln_gamma_lanczos(double x) {
    // Valid for x >= 0.5.
    double z = x - 1.0;
    double a = kLanczosCoef[0];
    for (int i = 1; i < 9; ++i) {
        a += kLanczosCoef[i] / (z + i);
    }
    double t = z + kLanczosG + 0.5;
    return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("ln_gamma requires x > 0");
    }
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return kLogPi - std::log(std::sin(M_PI * x)) - ln_gamma_lanczos(1.0 - x);
    }
    return ln_gamma_lanczos(x);
}

double ln_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("beta requires positive arguments");
    }
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

double beta(double a, double b) {
    return std::exp(ln_beta(a, b));
}

}  // namespace semirv
