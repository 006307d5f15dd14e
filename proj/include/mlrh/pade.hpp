#pragma once

#include <complex>
#include <vector>

#include "mlrh/model.hpp"
#include "mlrh/parallel.hpp"

namespace mlrh {

// Diagonal two-point rational approximant in y = nu t^alpha:
//   h^(n,n)(t) = P(y)/Q(y),  P = sum_{i=1..n} p_i y^i,  Q = 1 + sum_{j=1..n} q_j y^j,
// matching the small-time series to order y^n and the large-time series
// (in w = 1/y) to order w^(n-1). The scaled inputs it interpolates are kept
// so the self-check can re-expand without recomputing them:
//   beta_j = b_j / nu^j   (h = sum beta_j y^j),
//   gamma_k = g_k nu^k    (h = sum gamma_k y^-k).
struct RationalApproximant {
  int n;
  double alpha;
  double nu;
  std::vector<std::complex<double>> p;      // size n+1, p[0] = 0
  std::vector<std::complex<double>> q;      // size n+1, q[0] = 1
  std::vector<std::complex<double>> beta;   // size n+1, beta[0] = 0
  std::vector<std::complex<double>> gamma;  // size n, gamma[k] = g_k nu^k
};

// Assembles and solves the 2n x 2n complex linear system (partial pivoting;
// a row-equilibrated retry if the residual is poor). n in [1, 8].
// All-zero input (a = 0, or a = -i with the attracting root at 0) returns the
// zero approximant; any other numerically singular system throws
// SingularSystemError. DegenerateError propagates from the roots.
RationalApproximant build_pade(const ModelParams& m, const FourierArg& a, int n);

// Evaluate at y directly (the approximant depends on (nu, t) only through y).
std::complex<double> eval_pade_y(const RationalApproximant& r, double y);

// Evaluate at time t >= 0; t = 0 returns 0 exactly.
// Throws PoleError if |Q| < 1e-300 |P| at the evaluation point.
std::complex<double> eval_pade(const RationalApproximant& r, double t);

struct MatchReport {
  double max_mismatch;  // max over both expansions of |coef - target|/(1+|target|)
  bool passed;          // max_mismatch < 1e-9
};

// Re-expands P/Q at y = 0 (orders 1..n) and y = inf (orders 0..n-1) and
// compares against the stored beta/gamma targets.
MatchReport series_match_check(const RationalApproximant& r);

// Real-positive zeros of |Q| on (0, y_max]: 10,000-point scan of |Q|, local
// minima refined by ternary search, reported when |Q| falls below 1e-8 times
// the term-magnitude sum sum_j |q_j| y^j at the same point (near-total
// cancellation). Empty result == admissible approximant.
std::vector<double> pole_scan(const RationalApproximant& r, double y_max,
                              Exec exec = Exec::parallel);

// Default scan horizon: y at t = 100 (years), i.e. nu * 100^alpha.
double default_scan_ymax(const ModelParams& m);

}  // namespace mlrh
