#pragma once

#include <complex>

#include "mlrh/errors.hpp"

namespace mlrh {

// 1/Gamma(x) as an entire function: exactly 0 at x = 0, -1, -2, ...
// Reflection below x = 0.5:  1/Gamma(x) = sin(pi x) Gamma(1-x) / pi.
double reciprocal_gamma(double x);

// Gamma(num)/Gamma(den) under the 1/Gamma(nonpositive integer) = 0 convention:
// a pole of Gamma(den) sends the ratio to 0 (this is what makes every
// alpha = 1 coefficient chain terminate exactly); a pole of Gamma(num) alone
// propagates as inf.
double gamma_ratio(double num, double den);

struct MittagLefflerParams {
  double alpha;  // in (0, 1]
  double beta;   // > 0; the model uses beta = 1 (E_alpha) and beta = alpha (kernel)
  MittagLefflerParams(double alpha_, double beta_);
};

// Taylor/asymptotic handoff radius. Constant series difficulty |z|^(1/alpha):
// the largest Taylor term is ~exp(|z|^(1/alpha)), so a fixed radius in |z|
// would overflow for small alpha. Capped at 40.
double ml_switch_radius(double alpha);

// |z| beyond which the asymptotic tail with p = 5 terms is always used.
inline constexpr double ml_z_max = 1e8;

// Series evaluation of E_{alpha,beta}(z). Valid (and used by mittag_leffler)
// for |z| <= ml_switch_radius(alpha); exposed for the handoff diagnostics.
// Sums in extended precision once cancellation would eat double.
std::complex<double> ml_taylor(const MittagLefflerParams& p, std::complex<double> z);

// Truncated asymptotic tail of E_alpha (beta = 1 only):
//   E_alpha(z) ~ -sum_{k=1..p} z^{-k} / Gamma(1 - k alpha)
// valid for |arg z| in [3 pi alpha / 4, pi]. Throws SectorError outside the
// sector and AccuracyError when the truncation estimate |z|^-(p+1) misses the
// requested tolerance.
std::complex<double> ml_asymptotic(const MittagLefflerParams& p, std::complex<double> z,
                                   int p_terms, double tol = 1e-12);

// E_{alpha,beta}(z) on the region the model needs: full disc up to the switch
// radius, the sector |arg z| >= 3 pi alpha / 4 beyond it (adaptive truncation
// order), any argument beyond ml_z_max. DomainError for large |z| outside the
// sector.
std::complex<double> mittag_leffler(const MittagLefflerParams& p, std::complex<double> z);

}  // namespace mlrh
