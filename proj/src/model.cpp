#include "mlrh/model.hpp"

#include <cmath>

#include "mlrh/special_functions.hpp"

namespace mlrh {

namespace {
const std::complex<double> kI{0.0, 1.0};
}

ModelParams::ModelParams(double H_, double nu_, double rho_, double lam_)
    : H(H_), nu(nu_), rho(rho_), lam(lam_), alpha(H_ + 0.5), lam_prime(lam_ / nu_) {
  if (!(H >= 0.0) || !(H <= 0.5)) throw DomainError("ModelParams: H must be in [0, 1/2]");
  if (!(nu > 0.0)) throw DomainError("ModelParams: nu must be > 0");
  if (!(std::abs(rho) < 1.0)) throw DomainError("ModelParams: |rho| must be < 1");
  if (!(lam >= 0.0)) throw DomainError("ModelParams: lam must be >= 0");
}

FourierArg::FourierArg(std::complex<double> a_) : a(a_) {
  if (!(a.real() >= 0.0) || !(a.imag() >= -1.0) || !(a.imag() <= 0.0))
    throw DomainError("FourierArg: need Re(a) >= 0 and Im(a) in [-1, 0]");
}

std::complex<double> lambda_tilde(const ModelParams& m, const FourierArg& a) {
  return m.lam_prime - kI * m.rho * a.a;
}

RiccatiRoots riccati_roots(const ModelParams& m, const FourierArg& a) {
  const std::complex<double> lt = lambda_tilde(m, a);
  const std::complex<double> A2 = a.a * (a.a + kI) + lt * lt;
  const std::complex<double> A = std::sqrt(A2);  // principal: arg A in [-pi/4, pi/4]
  if (std::abs(A) < 1e-14) throw DegenerateError("riccati_roots: double root (A ~ 0)");
  return {A, lt - A, lt + A};
}

double kernel(const ModelParams& m, double x) {
  if (!(x > 0.0)) throw DomainError("kernel: x must be > 0");
  const MittagLefflerParams p{m.alpha, m.alpha};
  const std::complex<double> e = mittag_leffler(p, {-m.lam * std::pow(x, m.alpha), 0.0});
  return m.nu * std::pow(x, m.alpha - 1.0) * e.real();
}

std::complex<double> riccati_rhs(const ModelParams& m, const FourierArg& a,
                                 std::complex<double> h) {
  return -0.5 * a.a * (a.a + kI) + (kI * m.rho * m.nu * a.a - m.lam) * h +
         0.5 * m.nu * m.nu * h * h;
}

std::complex<double> classical_h(const ModelParams& m, const FourierArg& a, double t) {
  if (m.alpha != 1.0) throw DomainError("classical_h: requires alpha = 1 (H = 1/2)");
  if (!(t >= 0.0)) throw DomainError("classical_h: t must be >= 0");
  const RiccatiRoots r = riccati_roots(m, a);
  if (std::abs(r.r_plus) < 1e-14) throw DegenerateError("classical_h: r_plus ~ 0");
  const std::complex<double> e = std::exp(-r.A * m.nu * t);
  return r.r_minus * (1.0 - e) / (1.0 - (r.r_minus / r.r_plus) * e) / m.nu;
}

}  // namespace mlrh
