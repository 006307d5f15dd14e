#pragma once

#include <complex>

#include "mlrh/errors.hpp"

namespace mlrh {

// Rough Heston in forward-variance form. alpha = H + 1/2 is the order of the
// fractional Riccati equation; H = 0 (alpha = 1/2) is accepted as the rough
// boundary, H = 1/2 (alpha = 1) is classical Heston.
struct ModelParams {
  double H;    // Hurst exponent, [0, 1/2]
  double nu;   // vol-of-vol, > 0
  double rho;  // spot/vol correlation, |rho| < 1
  double lam;  // mean-reversion speed, >= 0

  double alpha;      // H + 1/2
  double lam_prime;  // lam / nu

  ModelParams(double H_, double nu_, double rho_, double lam_);
};

// Fourier argument a for the characteristic function; the admissible set is
// Re(a) >= 0, -1 <= Im(a) <= 0 (where the CGF stays finite for all T).
struct FourierArg {
  std::complex<double> a;
  explicit FourierArg(std::complex<double> a_);
};

// The Riccati right side factorizes as  (nu h - r_minus)(nu h - r_plus)/2
// with r_-+ = (lam' - i rho a) -+ A,  A = sqrt(a(a+i) + (lam' - i rho a)^2)
// taken on the principal branch (Re(A^2) >= 0 on the admissible set, so
// arg A lies in [-pi/4, pi/4] and r_minus is the attracting root).
struct RiccatiRoots {
  std::complex<double> A;
  std::complex<double> r_minus;
  std::complex<double> r_plus;
};

// lam' - i rho a  (the shifted mean-reversion that appears everywhere).
std::complex<double> lambda_tilde(const ModelParams& m, const FourierArg& a);

// Throws DegenerateError when |A| < 1e-14 (double root; expansions undefined).
RiccatiRoots riccati_roots(const ModelParams& m, const FourierArg& a);

// Mittag-Leffler kernel  kappa(x) = nu x^(alpha-1) E_{alpha,alpha}(-lam x^alpha),
// the resolvent of the mean-reverting convolution. x > 0.
double kernel(const ModelParams& m, double x);

// F(a, h) = -a(a+i)/2 + (i rho nu a - lam) h + nu^2 h^2 / 2, the right side of
// D^alpha h = F(a, h). Exact on the true solution, so it doubles as the
// reported value of D^alpha h.
std::complex<double> riccati_rhs(const ModelParams& m, const FourierArg& a,
                                 std::complex<double> h);

// Closed-form solution for alpha = 1 (classical Heston):
//   nu h(t) = r_minus (1 - e^(-A nu t)) / (1 - (r_minus/r_plus) e^(-A nu t)).
// Verified against a brute-force ODE integration in the tests.
std::complex<double> classical_h(const ModelParams& m, const FourierArg& a, double t);

}  // namespace mlrh
