// Timing harness for the data-parallel kernels: each benchmark runs the
// serial reference implementation and the parallel path on identical inputs,
// checks they agree, and reports wall times and the speedup.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mlrh/adams.hpp"
#include "mlrh/model.hpp"
#include "mlrh/pade.hpp"
#include "mlrh/parallel.hpp"
#include "mlrh/pricer.hpp"

using namespace mlrh;
using C = std::complex<double>;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool agree) {
  std::printf("%-28s %10.1f ms %10.1f ms   x%.2f  %s\n", name.c_str(), serial_ms, parallel_ms,
              parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0, agree ? "match" : "MISMATCH");
}

}  // namespace

int main() {
  const ModelParams m(0.05, 0.4, -0.65, 1.0);
  const FourierArg a(C(3.0, -0.5));

  std::printf("%d OpenMP thread(s)\n", par::max_threads());
  std::printf("%-28s %13s %13s %7s\n", "kernel", "serial", "parallel", "speedup");

  for (int n : {1000, 2000, 4000}) {
    HGrid gs, gp;
    const double ts = time_ms([&] { gs = adams_solve(m, a, 5.0, n, Exec::serial); });
    const double tp = time_ms([&] { gp = adams_solve(m, a, 5.0, n, Exec::parallel); });
    double sup = 0.0;
    for (int j = 0; j <= n; ++j) sup = std::max(sup, std::abs(gs.h[j] - gp.h[j]));
    report("adams history N=" + std::to_string(n), ts, tp, sup <= 1e-12);
  }

  {
    const RationalApproximant r = build_pade(m, a, 5);
    const double ymax = default_scan_ymax(m);
    std::vector<double> rs, rp;
    double ts = 0.0, tp = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      ts += time_ms([&] { rs = pole_scan(r, ymax, Exec::serial); });
      tp += time_ms([&] { rp = pole_scan(r, ymax, Exec::parallel); });
    }
    report("pole scan x50", ts, tp, rs == rp);
  }

  {
    const ForwardVarianceCurve xi = ForwardVarianceCurve::flat(0.04);
    const std::vector<double> strikes{0.8, 0.9, 1.0, 1.1, 1.2};
    const std::vector<double> mats{0.25, 1.0};
    const std::vector<HMethod> methods{HMethod::pade(5)};
    std::vector<SmileCell> cs, cp;
    const double ts = time_ms([&] { cs = smile(m, xi, 1.0, strikes, mats, methods, Exec::serial); });
    const double tp =
        time_ms([&] { cp = smile(m, xi, 1.0, strikes, mats, methods, Exec::parallel); });
    bool agree = cs.size() == cp.size();
    for (size_t i = 0; agree && i < cs.size(); ++i)
      agree = cs[i].price == cp[i].price && cs[i].iv == cp[i].iv;
    report("smile 5x2 grid", ts, tp, agree);
  }

  return 0;
}
