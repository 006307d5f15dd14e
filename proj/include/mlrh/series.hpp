#pragma once

#include <complex>
#include <vector>

#include "mlrh/model.hpp"

namespace mlrh {

// Truncated expansions of h(t; a) at t -> 0+ and t -> +inf. Both are series
// in t^alpha: small time  h = sum_{j>=1} b_j t^(j alpha), large time
// h = sum_{k>=0} g_k t^(-k alpha).
enum class SeriesKind { small_time, large_time };

struct ComplexSeries {
  SeriesKind kind;
  double alpha;
  // small_time: coeffs[j-1] = b_j, j = 1..n. large_time: coeffs[k] = g_k, k = 0..n.
  std::vector<std::complex<double>> coeffs;
};

inline constexpr int max_series_order = 24;

// b_1 = -a(a+i) / (2 Gamma(1+alpha));
// b_k = [Gamma(1+(k-1)alpha)/Gamma(1+k alpha)] *
//       ( -lambda_tilde nu b_{k-1} + nu^2/2 sum_{i+j=k-1} b_i b_j ).
ComplexSeries small_time_coeffs(const ModelParams& m, const FourierArg& a, int n);

// g_0 = r_minus / nu;  g_1 = -g_0 / (A nu Gamma(1-alpha));  and for k >= 2 the
// single recursion
// g_k = -(1/(A nu)) ( [Gamma(1-(k-1)alpha)/Gamma(1-k alpha)] g_{k-1}
//                     - nu^2/2 sum_{i+j=k, i,j>=1} g_i g_j ),
// which reproduces the quadratic k = 2 formula (checked by test). At alpha = 1
// the 1/Gamma(nonpositive integer) = 0 convention makes every g_k, k >= 1,
// vanish exactly. Returns g_0..g_n.
ComplexSeries large_time_coeffs(const ModelParams& m, const FourierArg& a, int n);

// Horner evaluation in u = t^alpha (small time) or v = t^-alpha (large time).
// No convergence guarantee outside each series' regime.
std::complex<double> eval_series(const ComplexSeries& s, double t);

// Term-wise Riemann-Liouville derivative of the truncation:
//   D^alpha t^(j alpha)  = [Gamma(1+j alpha)/Gamma(1+(j-1)alpha)] t^((j-1)alpha)
//   D^alpha t^(-k alpha) = [Gamma(1-k alpha)/Gamma(1-(k+1)alpha)] t^(-(k+1)alpha)
// (the k = 0 constant term has a nonzero D^alpha: this is RL, not Caputo).
std::complex<double> eval_series_dalpha(const ComplexSeries& s, double t);

// Resummed large-time profile  nu h_inf(t) = r_minus (1 - E_alpha(-A nu t^alpha)),
// exact at both t -> 0 (h = 0) and t -> inf (h = r_minus/nu).
std::complex<double> h_infinity(const ModelParams& m, const FourierArg& a, double t);

}  // namespace mlrh
