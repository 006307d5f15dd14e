#include <complex>
#include <vector>

#include "doctest.h"
#include "mlrh/adams.hpp"
#include "mlrh/pade.hpp"
#include "mlrh/parallel.hpp"
#include "mlrh/pricer.hpp"
#include "test_utils.hpp"

using namespace mlrh;
using C = std::complex<double>;

TEST_CASE("for_each_index: covers every index exactly once under both policies") {
  for (Exec exec : {Exec::serial, Exec::parallel}) {
    std::vector<int> hits(1000, 0);
    par::for_each_index(1000, exec, [&](std::ptrdiff_t i) { hits[size_t(i)] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  int calls = 0;
  par::for_each_index(0, Exec::parallel, [&](std::ptrdiff_t) { ++calls; });
  CHECK(calls == 0);
}

TEST_CASE("for_each_index: per-slot writes are policy-independent") {
  auto fill = [](Exec exec) {
    std::vector<double> out(513);
    par::for_each_index(513, exec, [&](std::ptrdiff_t i) {
      double v = 1.0;
      for (int k = 0; k < 50; ++k) v = v * 0.99 + double(i) * 1e-3;
      out[size_t(i)] = v;
    });
    return out;
  };
  const std::vector<double> s = fill(Exec::serial);
  const std::vector<double> p = fill(Exec::parallel);
  for (size_t i = 0; i < s.size(); ++i) CHECK(s[i] == p[i]);
}

TEST_CASE("max_threads is sane") { CHECK(par::max_threads() >= 1); }

TEST_CASE("adams history kernel: policies agree on a random model") {
  testutil::Rng rng(9090);
  const ModelParams m = testutil::draw_params_wide(rng);
  const FourierArg a = testutil::draw_arg(rng, 5.0);
  HGrid s = adams_solve(m, a, 2.0, 2500, Exec::serial);
  HGrid p = adams_solve(m, a, 2.0, 2500, Exec::parallel);
  double sup = 0.0;
  for (int j = 0; j <= 2500; ++j) sup = std::max(sup, std::abs(s.h[j] - p.h[j]));
  CHECK(sup <= 1e-12);
}

TEST_CASE("pole_scan: policies return identical root lists") {
  // Hand-built denominators with known real zeros.
  RationalApproximant r;
  r.n = 2;
  r.alpha = 0.6;
  r.nu = 0.5;
  r.p = {C(0.0), C(1.0), C(0.0)};
  r.q = {C(1.0), C(-5.0 / 6.0), C(1.0 / 6.0)};  // (1 - y/2)(1 - y/3)
  r.beta = {C(0.0), C(1.0), C(0.0)};
  r.gamma = {C(1.0), C(0.0)};
  const auto s = pole_scan(r, 10.0, Exec::serial);
  const auto p = pole_scan(r, 10.0, Exec::parallel);
  REQUIRE(s.size() == 2);
  REQUIRE(p.size() == s.size());
  for (size_t i = 0; i < s.size(); ++i) CHECK(s[i] == p[i]);

  const ModelParams ref(0.05, 0.4, -0.65, 1.0);
  RationalApproximant clean = build_pade(ref, FourierArg(C(3.0, -0.5)), 5);
  CHECK(pole_scan(clean, default_scan_ymax(ref), Exec::serial).empty());
  CHECK(pole_scan(clean, default_scan_ymax(ref), Exec::parallel).empty());
}

TEST_CASE("smile grid: policies agree bitwise") {
  const ModelParams ref(0.05, 0.4, -0.65, 1.0);
  const ForwardVarianceCurve xi = ForwardVarianceCurve::flat(0.04);
  const std::vector<HMethod> methods{HMethod::pade(5)};
  const auto s = smile(ref, xi, 1.0, {0.95, 1.05}, {0.5}, methods, Exec::serial);
  const auto p = smile(ref, xi, 1.0, {0.95, 1.05}, {0.5}, methods, Exec::parallel);
  REQUIRE(s.size() == p.size());
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].price == p[i].price);
    CHECK(s[i].iv == p[i].iv);
  }
}
