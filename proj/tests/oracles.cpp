#include "oracles.hpp"

#include <quadmath.h>

#include <cmath>
#include <stdexcept>

namespace oracle {

double gamma_lanczos(double x) {
  // Standard g = 7 Lanczos coefficients (Numerical Recipes lineage).
  static const double c[9] = {0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,    -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection for the left half-plane.
    return M_PI / (std::sin(M_PI * x) * gamma_lanczos(1.0 - x));
  }
  x -= 1.0;
  double acc = c[0];
  for (int i = 1; i < 9; ++i) acc += c[i] / (x + i);
  const double t = x + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

std::complex<double> mittag_leffler_taylor(double alpha, double beta, std::complex<double> z,
                                           int max_terms) {
  // Local quad complex; deliberately not shared with the library.
  __float128 sr = 0, si = 0;            // running sum
  __float128 pr = 1, pi_ = 0;           // z^k
  const __float128 zr = z.real(), zi = z.imag();
  const __float128 aq = alpha, bq = beta;
  int below = 0;
  for (int k = 0; k < max_terms; ++k) {
    const __float128 rg = __float128(1) / tgammaq(aq * k + bq);
    const __float128 tr = pr * rg, ti = pi_ * rg;
    sr += tr;
    si += ti;
    const __float128 tmag = hypotq(tr, ti);
    const __float128 smag = hypotq(sr, si);
    if (tmag < __float128(1e-36) * smag) {
      if (++below >= 40) break;
    } else {
      below = 0;
    }
    const __float128 nr = pr * zr - pi_ * zi;
    pi_ = pr * zi + pi_ * zr;
    pr = nr;
  }
  return {static_cast<double>(sr), static_cast<double>(si)};
}

std::complex<double> classical_riccati_rk4(double nu, double rho, double lam,
                                           std::complex<double> a, double t, int steps) {
  using C = std::complex<double>;
  const C i{0.0, 1.0};
  const C c0 = -0.5 * a * (a + i);
  const C c1 = i * rho * nu * a - lam;
  const double c2 = 0.5 * nu * nu;
  auto f = [&](C h) { return c0 + c1 * h + c2 * h * h; };
  C h{0.0, 0.0};
  const double dt = t / steps;
  for (int n = 0; n < steps; ++n) {
    const C k1 = f(h);
    const C k2 = f(h + 0.5 * dt * k1);
    const C k3 = f(h + 0.5 * dt * k2);
    const C k4 = f(h + dt * k3);
    h += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return h;
}

namespace {
double simpson(const std::function<double(double)>& f, double lo, double hi, double flo,
               double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double simpson_rec(const std::function<double(double)>& f, double lo, double hi, double flo,
                   double fmid, double fhi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = f(0.5 * (lo + mid));
  const double rm = f(0.5 * (mid + hi));
  const double left = simpson(f, lo, mid, flo, lm, fmid);
  const double right = simpson(f, mid, hi, fmid, rm, fhi);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, lo, mid, flo, lm, fmid, left, tol / 2.0, depth - 1) +
         simpson_rec(f, mid, hi, fmid, rm, fhi, right, tol / 2.0, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_depth) {
  const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
  const double whole = simpson(f, lo, hi, flo, fmid, fhi);
  return simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, max_depth);
}

std::complex<double> l1_fractional_derivative(const std::vector<std::complex<double>>& h,
                                              double dt, double alpha) {
  // D^alpha h(t_n) ~ dt^-alpha / Gamma(2-alpha) *
  //                  sum_{j=0}^{n-1} (h_{n-j} - h_{n-j-1}) ((j+1)^(1-alpha) - j^(1-alpha))
  const int n = static_cast<int>(h.size()) - 1;
  if (n < 1) throw std::invalid_argument("l1_fractional_derivative: need at least two samples");
  std::complex<double> acc{0.0, 0.0};
  const double e = 1.0 - alpha;
  for (int j = 0; j < n; ++j) {
    const double w = std::pow(j + 1.0, e) - std::pow(static_cast<double>(j), e);
    acc += w * (h[n - j] - h[n - j - 1]);
  }
  return acc * std::pow(dt, -alpha) / gamma_lanczos(2.0 - alpha);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double bs_call_ref(double spot, double strike, double maturity, double vol) {
  const double w = vol * std::sqrt(maturity);
  const double d1 = (std::log(spot / strike) + 0.5 * w * w) / w;
  const double d2 = d1 - w;
  auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  return spot * Phi(d1) - strike * Phi(d2);
}

}  // namespace oracle
