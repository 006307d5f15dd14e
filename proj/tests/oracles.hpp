#pragma once

// Test-side oracles. Everything here is implemented independently of the
// library code under test: its own Gamma, its own series summation, its own
// ODE stepper and quadrature. Values frozen into the tests were produced by
// these routines (and cross-checked against mpmath where applicable).

#include <complex>
#include <functional>
#include <vector>

namespace oracle {

// Lanczos approximation (g = 7, 9 coefficients) — independent of std::tgamma.
double gamma_lanczos(double x);

// E_{alpha,beta}(z) by direct Taylor summation in __float128 with its own
// local complex arithmetic. Only valid where the series itself converges
// numerically (max-term exponent |z|^(1/alpha) below ~300); the tests use it
// strictly inside that region.
std::complex<double> mittag_leffler_taylor(double alpha, double beta, std::complex<double> z,
                                           int max_terms = 4000);

// Classical (alpha = 1) Riccati solution by brute-force RK4 on
//   h' = -a(a+i)/2 + (i rho nu a - lam) h + nu^2 h^2 / 2,  h(0) = 0.
std::complex<double> classical_riccati_rk4(double nu, double rho, double lam,
                                           std::complex<double> a, double t, int steps = 200000);

// Adaptive Simpson on [lo, hi] (real integrand), basic but independent.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-10, int max_depth = 40);

// L1 discretization of the order-alpha fractional derivative of a function
// sampled on the uniform grid h[0..n], h[0] = 0, step dt: value at t_n.
std::complex<double> l1_fractional_derivative(const std::vector<std::complex<double>>& h,
                                              double dt, double alpha);

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

// Black-Scholes call (zero rates) via erfc — independent of the library's.
double bs_call_ref(double spot, double strike, double maturity, double vol);

}  // namespace oracle
