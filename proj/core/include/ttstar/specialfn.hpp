#pragma once

// Real special functions used by the data maps and the generating function.
// All functions are pure; non-positive arguments throw DomainError.

namespace ttstar::specialfn {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kLn2Pi = 1.83787706640934548356;

// ln Gamma(z), z > 0.
double log_gamma(double z);

// ln G(z) for the Barnes G-function, 0 < z <= 4.
double log_barnes_g(double z);

// psi^(-2)(z) = int_0^z ln Gamma(t) dt via the Barnes G closed form, 0 < z <= 3.
// z == 0 is accepted as the limit value 0.
double psi_m2(double z);

// Same integral by adaptive Gauss-Legendre quadrature. Independent of log_gamma
// (uses std::lgamma); throws NumericError if the tolerance is not reached.
double psi_m2_oracle(double z, double abs_tol = 1e-13);

// zeta(k), k >= 2.
double zeta(int k);

}  // namespace ttstar::specialfn
