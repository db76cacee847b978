#pragma once

namespace semirv {

// Natural log of the Gamma function, Lanczos series (g = 7, 9 terms).
// Absolute error below 1e-12 on [0.1, 200]; reflection extends to (0, 0.5).
// Throws DomainError for x <= 0.
double ln_gamma(double x);

// Euler Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
// Throws DomainError unless a > 0 and b > 0.
double beta(double a, double b);

// log of the Beta function, same domain.
double ln_beta(double a, double b);

}  // namespace semirv
