#pragma once

#include <complex>
#include <vector>

#include "mlrh/model.hpp"
#include "mlrh/parallel.hpp"

namespace mlrh {

// Uniform-grid solution of D^alpha h = F(a, h), h(0) = 0, produced by the
// fractional Adams-Bashforth-Moulton predictor-corrector. O(N^2) because the
// fractional derivative drags the full history along.
struct HGrid {
  double T = 0.0;
  int N = 0;
  double alpha = 0.0;
  std::vector<std::complex<double>> h;  // size N+1, h[0] = 0

  double dt() const { return T / N; }

  // 4-point Lagrange interpolation on the grid, t in [0, T].
  std::complex<double> at_time(double t) const;
};

// Predictor  h^P_{k+1} = dt^alpha/Gamma(alpha+1) sum_j [(k+1-j)^a - (k-j)^a] F_j
// Corrector  h_{k+1} = dt^alpha/Gamma(alpha+2) [ F(h^P_{k+1}) + sum_j a_{j,k+1} F_j ]
// with the standard weights; weight tables are precomputed in long double
// (the finite differences of m^(alpha+1) cancel ~m^2 ulps in double).
// The history convolution is the data-parallel kernel; Exec::serial is the
// plain reference loop. Throws OverflowError once |h| > 1e10.
HGrid adams_solve(const ModelParams& m, const FourierArg& a, double T, int N,
                  Exec exec = Exec::parallel);

// Terminal value h(t) from a fresh N-step run on [0, t].
std::complex<double> adams_at(const ModelParams& m, const FourierArg& a, double t, int N,
                              Exec exec = Exec::parallel);

}  // namespace mlrh
