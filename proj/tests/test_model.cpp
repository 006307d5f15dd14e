#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "mlrh/model.hpp"
#include "oracles.hpp"
#include "test_utils.hpp"

using namespace mlrh;
using C = std::complex<double>;

TEST_CASE("ModelParams: validation and derived fields") {
  const ModelParams m(0.05, 0.4, -0.65, 1.0);
  CHECK(m.alpha == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(m.lam_prime == doctest::Approx(2.5).epsilon(1e-15));

  CHECK_NOTHROW(ModelParams(0.0, 0.4, -0.65, 1.0));   // rough boundary H = 0
  CHECK_NOTHROW(ModelParams(0.5, 0.4, -0.65, 0.0));   // classical, no reversion
  CHECK_THROWS_AS(ModelParams(-0.01, 0.4, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModelParams(0.51, 0.4, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModelParams(0.1, 0.0, 0.0, 1.0), DomainError);  // nu = 0 rejected
  CHECK_THROWS_AS(ModelParams(0.1, -0.4, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModelParams(0.1, 0.4, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModelParams(0.1, 0.4, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModelParams(0.1, 0.4, 0.0, -0.1), DomainError);
}

TEST_CASE("FourierArg: admissible strip") {
  CHECK_NOTHROW(FourierArg(C(0.0, 0.0)));
  CHECK_NOTHROW(FourierArg(C(0.0, -1.0)));
  CHECK_NOTHROW(FourierArg(C(100.0, -0.5)));
  CHECK_THROWS_AS(FourierArg(C(-0.01, -0.5)), DomainError);
  CHECK_THROWS_AS(FourierArg(C(1.0, 0.01)), DomainError);
  CHECK_THROWS_AS(FourierArg(C(1.0, -1.01)), DomainError);
}

TEST_CASE("lambda_tilde: frozen value") {
  const ModelParams m(0.05, 0.4, -0.65, 1.0);
  const FourierArg a(C(3.0, -0.5));
  // lam' - i rho a = 2.5 + 0.65 i (3 - 0.5 i)
  CHECK(std::abs(lambda_tilde(m, a) - C(2.825, 1.95)) < 1e-14);
}

TEST_CASE("riccati_roots: frozen values at the reference point") {
  const ModelParams m(0.05, 0.4, -0.65, 1.0);
  const FourierArg a(C(3.0, -0.5));
  const RiccatiRoots r = riccati_roots(m, a);
  CHECK(std::abs(r.A - C(3.9241326510222672, 1.4038134002847553)) < 1e-13);
  CHECK(std::abs(r.r_minus - C(-1.0991326510222672, 0.5461865997152447)) < 1e-13);
  CHECK(std::abs(r.r_plus - C(6.7491326510222672, 3.3538134002847553)) < 1e-13);
  // A does not depend on alpha: same point, different H.
  const ModelParams m2(0.3, 0.4, -0.65, 1.0);
  CHECK(std::abs(riccati_roots(m2, a).A - r.A) < 1e-15);
}

TEST_CASE("riccati_roots: algebraic invariants on random draws") {
  testutil::Rng rng(20260816);
  for (int it = 0; it < 1000; ++it) {
    const ModelParams m = testutil::draw_params_wide(rng);
    const FourierArg a = testutil::draw_arg(rng);
    RiccatiRoots r;
    try {
      r = riccati_roots(m, a);
    } catch (const DegenerateError&) {
      continue;  // double root: excluded by contract
    }
    const C lt = lambda_tilde(m, a);
    const C target = a.a * (a.a + C(0.0, 1.0)) + lt * lt;
    const double scale = 1.0 + std::abs(target);
    // A^2 = a(a+i) + lam_tilde^2
    CHECK(std::abs(r.A * r.A - target) <= 1e-12 * scale);
    // Root sum/product: r- + r+ = 2 lam_tilde, r- r+ = -a(a+i)
    CHECK(std::abs(r.r_minus + r.r_plus - 2.0 * lt) <= 1e-12 * (1.0 + std::abs(lt)));
    CHECK(std::abs(r.r_minus * r.r_plus + a.a * (a.a + C(0.0, 1.0))) <=
          1e-12 * (1.0 + std::abs(a.a) * std::abs(a.a)));
    // Principal branch with Re(A^2) >= 0 on the admissible set: |arg A| <= pi/4.
    CHECK(r.A.real() >= std::abs(r.A.imag()) - 1e-12 * (1.0 + std::abs(r.A)));
  }
}

TEST_CASE("riccati_roots: a = 0 collapses to (lam', 0, 2 lam')") {
  const ModelParams m(0.2, 0.5, -0.3, 1.2);  // lam' = 2.4
  const RiccatiRoots r = riccati_roots(m, FourierArg(C(0.0, 0.0)));
  CHECK(std::abs(r.A - C(2.4, 0.0)) < 1e-14);
  CHECK(std::abs(r.r_minus) < 1e-14);
  CHECK(std::abs(r.r_plus - C(4.8, 0.0)) < 1e-14);
}

TEST_CASE("riccati_roots: degenerate double root throws") {
  // a = -i, rho = 0, lam = 0: a(a+i) = 0 and lam_tilde = 0, so A = 0.
  const ModelParams m(0.2, 0.5, 0.0, 0.0);
  CHECK_THROWS_AS(riccati_roots(m, FourierArg(C(0.0, -1.0))), DegenerateError);
}

TEST_CASE("riccati_rhs: factorization through the roots") {
  testutil::Rng rng(77001);
  for (int it = 0; it < 1000; ++it) {
    const ModelParams m = testutil::draw_params_wide(rng);
    const FourierArg a = testutil::draw_arg(rng);
    RiccatiRoots r;
    try {
      r = riccati_roots(m, a);
    } catch (const DegenerateError&) {
      continue;
    }
    const C h{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const C lhs = riccati_rhs(m, a, h);
    const C rhs = 0.5 * (m.nu * h - r.r_minus) * (m.nu * h - r.r_plus);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(h) * std::abs(h)));
  }
}

TEST_CASE("kernel: frozen values") {
  // nu x^(alpha-1) E_{alpha,alpha}(-lam x^alpha)
  const ModelParams m1(0.25, 0.3, 0.0, 1.0);  // alpha = 0.75
  CHECK(kernel(m1, 0.5) == doctest::Approx(0.13378087705261924).epsilon(1e-13));
  const ModelParams m2(0.05, 0.4, 0.0, 0.0);  // alpha = 0.55, lam = 0
  CHECK(kernel(m2, 1.0) == doctest::Approx(0.24750571954064362).epsilon(1e-13));
  // lam = 0, nu = 1, alpha = 1: kappa == 1 for every x.
  const ModelParams m3(0.5, 1.0, 0.0, 0.0);
  CHECK(kernel(m3, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(kernel(m1, 0.0), DomainError);
  CHECK_THROWS_AS(kernel(m1, -1.0), DomainError);
}

TEST_CASE("kernel: resolvent identity against the power kernel") {
  // kappa is the resolvent of K0(x) = nu x^(alpha-1)/Gamma(alpha):
  //   kappa(x) = K0(x) - (lam/nu) (K0 * kappa)(x).
  // The convolution is split at x/2 and each half substituted s -> tau^(1/alpha)
  // (resp. x - s), which absorbs the endpoint singularities; the integrals are
  // then smooth and done with an independent adaptive Simpson.
  const ModelParams m(0.05, 0.4, -0.65, 1.0);
  const double al = m.alpha;
  const double gamma_al = oracle::gamma_lanczos(al);
  auto k0 = [&](double y) { return m.nu * std::pow(y, al - 1.0) / gamma_al; };

  for (double x : {0.3, 0.8, 1.6}) {
    const double cut = std::pow(0.5 * x, al);
    const double i1 =
        (m.nu / al) *
        oracle::adaptive_simpson(
            [&](double tau) {
              const double e =
                  oracle::mittag_leffler_taylor(al, al, C(-m.lam * tau, 0.0)).real();
              return k0(x - std::pow(tau, 1.0 / al)) * e;
            },
            0.0, cut, 1e-9);
    const double i2 =
        (m.nu / (al * gamma_al)) *
        oracle::adaptive_simpson([&](double tau) { return kernel(m, x - std::pow(tau, 1.0 / al)); },
                                 0.0, cut, 1e-9);
    const double lhs = kernel(m, x);
    const double rhs = k0(x) - (m.lam / m.nu) * (i1 + i2);
    CHECK(std::abs(lhs - rhs) <= 1e-6 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("classical_h: frozen value and independent ODE integration") {
  const ModelParams m(0.5, 0.4, -0.65, 1.0);
  const FourierArg a(C(3.0, -0.5));
  CHECK(std::abs(classical_h(m, a, 1.0) - C(-2.4327910179255761, 0.7361084940871911)) < 1e-13);
  for (double t : {0.1, 1.0, 5.0}) {
    const C want = oracle::classical_riccati_rk4(m.nu, m.rho, m.lam, a.a, t);
    CHECK(std::abs(classical_h(m, a, t) - want) <= 1e-8 * (1.0 + std::abs(want)));
  }
  CHECK(std::abs(classical_h(m, a, 0.0)) < 1e-15);
  // Defined for alpha = 1 only.
  const ModelParams rough(0.05, 0.4, -0.65, 1.0);
  CHECK_THROWS_AS(classical_h(rough, a, 1.0), DomainError);
}

TEST_CASE("classical_h: satisfies its own ODE") {
  // Central difference h'(t) vs the Riccati right side, max over a log grid.
  const ModelParams m(0.5, 0.4, -0.65, 1.0);
  const FourierArg a(C(3.0, -0.5));
  const double eps = 1e-5;
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.01 * std::pow(10.0 / 0.01, i / 199.0);
    const C dh = (classical_h(m, a, t + eps) - classical_h(m, a, t - eps)) / (2.0 * eps);
    const C rhs = riccati_rhs(m, a, classical_h(m, a, t));
    worst = std::max(worst, std::abs(dh - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  CHECK(worst <= 1e-6 * scale);
}

TEST_CASE("classical_h: long-time limit is the attracting root") {
  testutil::Rng rng(4242);
  for (int it = 0; it < 50; ++it) {
    const ModelParams m(0.5, rng.uniform(0.1, 2.0), rng.uniform(-0.9, 0.9),
                        rng.uniform(0.0, 5.0));
    const FourierArg a = testutil::draw_arg(rng);
    RiccatiRoots r;
    try {
      r = riccati_roots(m, a);
    } catch (const DegenerateError&) {
      continue;
    }
    // nu h(inf) = r_minus; by t nu Re(A) = 40 the transient is ~e^-40.
    const double t = 40.0 / (m.nu * r.A.real());
    if (t > 1e6) continue;  // nearly degenerate direction: transient too slow
    const C want = r.r_minus / m.nu;
    CHECK(std::abs(classical_h(m, a, t) - want) <= 1e-8 * (1.0 + std::abs(want)));
  }
}
