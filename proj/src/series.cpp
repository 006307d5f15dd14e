#include "mlrh/series.hpp"

#include <cmath>

#include "mlrh/special_functions.hpp"

namespace mlrh {

namespace {
const std::complex<double> kI{0.0, 1.0};

void check_order(int n, int lo) {
  if (n < lo || n > max_series_order) throw DomainError("series order out of range");
}
}  // namespace

ComplexSeries small_time_coeffs(const ModelParams& m, const FourierArg& a, int n) {
  check_order(n, 1);
  const std::complex<double> lt = lambda_tilde(m, a);
  std::vector<std::complex<double>> b(n + 1);  // b[j] = b_j, b[0] unused
  b[1] = -0.5 * a.a * (a.a + kI) * reciprocal_gamma(1.0 + m.alpha);
  for (int k = 2; k <= n; ++k) {
    std::complex<double> conv{0.0, 0.0};
    for (int i = 1; i <= k - 2; ++i) conv += b[i] * b[k - 1 - i];
    const double ratio = gamma_ratio(1.0 + (k - 1) * m.alpha, 1.0 + k * m.alpha);
    b[k] = ratio * (-lt * m.nu * b[k - 1] + 0.5 * m.nu * m.nu * conv);
  }
  return {SeriesKind::small_time, m.alpha, {b.begin() + 1, b.end()}};
}

ComplexSeries large_time_coeffs(const ModelParams& m, const FourierArg& a, int n) {
  check_order(n, 0);
  const RiccatiRoots r = riccati_roots(m, a);
  const std::complex<double> Anu = r.A * m.nu;
  std::vector<std::complex<double>> g(n + 1);
  g[0] = r.r_minus / m.nu;
  if (n >= 1) g[1] = -g[0] * reciprocal_gamma(1.0 - m.alpha) / Anu;
  for (int k = 2; k <= n; ++k) {
    std::complex<double> conv{0.0, 0.0};
    for (int i = 1; i <= k - 1; ++i) conv += g[i] * g[k - i];
    const double ratio = gamma_ratio(1.0 - (k - 1) * m.alpha, 1.0 - k * m.alpha);
    g[k] = -(ratio * g[k - 1] - 0.5 * m.nu * m.nu * conv) / Anu;
    // At resonant orders ((k-1) alpha a positive integer, e.g. k = 3 at
    // alpha = 1/2) the power ansatz breaks down -- the true expansion grows a
    // log t factor -- and the formal coefficient is infinite. Refuse loudly
    // rather than let the 1/Gamma pole feed NaNs downstream.
    if (!std::isfinite(g[k].real()) || !std::isfinite(g[k].imag()))
      throw DomainError("large_time_coeffs: order " + std::to_string(k) +
                        " is undefined at this alpha (resonance: (k-1)*alpha integral)");
  }
  return {SeriesKind::large_time, m.alpha, std::move(g)};
}

std::complex<double> eval_series(const ComplexSeries& s, double t) {
  if (s.kind == SeriesKind::small_time) {
    if (!(t >= 0.0)) throw DomainError("eval_series: small-time series needs t >= 0");
    const double u = std::pow(t, s.alpha);
    std::complex<double> acc{0.0, 0.0};
    for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = (acc + *it) * u;
    return acc;
  }
  if (!(t > 0.0)) throw DomainError("eval_series: large-time series needs t > 0");
  const double v = std::pow(t, -s.alpha);
  std::complex<double> acc{0.0, 0.0};
  for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = acc * v + *it;
  return acc;
}

std::complex<double> eval_series_dalpha(const ComplexSeries& s, double t) {
  if (!(t > 0.0)) throw DomainError("eval_series_dalpha: needs t > 0");
  std::complex<double> acc{0.0, 0.0};
  if (s.kind == SeriesKind::small_time) {
    for (int j = 1; j <= static_cast<int>(s.coeffs.size()); ++j) {
      const double ratio = gamma_ratio(1.0 + j * s.alpha, 1.0 + (j - 1) * s.alpha);
      acc += s.coeffs[j - 1] * ratio * std::pow(t, (j - 1) * s.alpha);
    }
    return acc;
  }
  for (int k = 0; k < static_cast<int>(s.coeffs.size()); ++k) {
    const double ratio = gamma_ratio(1.0 - k * s.alpha, 1.0 - (k + 1) * s.alpha);
    acc += s.coeffs[k] * ratio * std::pow(t, -(k + 1) * s.alpha);
  }
  return acc;
}

std::complex<double> h_infinity(const ModelParams& m, const FourierArg& a, double t) {
  if (!(t >= 0.0)) throw DomainError("h_infinity: t must be >= 0");
  const RiccatiRoots r = riccati_roots(m, a);
  const MittagLefflerParams p{m.alpha, 1.0};
  const std::complex<double> e = mittag_leffler(p, -r.A * m.nu * std::pow(t, m.alpha));
  return r.r_minus * (1.0 - e) / m.nu;
}

}  // namespace mlrh
