#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlrh/model.hpp"
#include "mlrh/pade.hpp"
#include "mlrh/parallel.hpp"

namespace mlrh {

// Piecewise-constant forward-variance curve xi(s): right-continuous, value
// values[i] on [times[i], times[i+1]), flat beyond the ends.
struct ForwardVarianceCurve {
  std::vector<double> times;
  std::vector<double> values;

  ForwardVarianceCurve(std::vector<double> times_, std::vector<double> values_);
  static ForwardVarianceCurve flat(double xi);

  double at(double s) const;
  double integral(double T) const;  // int_0^T xi(s) ds
};

// Which h(t; a) backend drives the characteristic function.
struct HMethod {
  enum class Kind { pade, adams, classical, h_infinity, series_small, series_large };
  Kind kind = Kind::pade;
  int order = 5;  // pade order n / adams steps N / series order

  static HMethod pade(int n) { return {Kind::pade, n}; }
  static HMethod adams(int steps) { return {Kind::adams, steps}; }
  static HMethod classical() { return {Kind::classical, 0}; }

  // "pade3", "adams:1000", "classical", "hinf", "series_small:10", ...
  static HMethod parse(const std::string& name);
  std::string str() const;
};

// g(a, h) = -a(a+i)/2 + i rho nu a h + nu^2 h^2 / 2 = D^alpha h + lam h:
// the integrand of the affine CGF.
std::complex<double> g_from_h(const ModelParams& m, const FourierArg& a, std::complex<double> h);

// phi(a) = log E exp(a-transform) = int_0^T xi(s) g(a, h(T-s; a)) ds, with h
// supplied by the caller and the integral done segment-by-segment with
// 64-node Gauss-Legendre (xi is constant per segment).
std::complex<double> cgf(const ModelParams& m, const FourierArg& a, double T,
                         const ForwardVarianceCurve& xi,
                         const std::function<std::complex<double>(double)>& h_at);

// Builds and caches per-node h backends (Pade builds keyed on a, Adams grids
// keyed on (a, T)) and the CGF values themselves keyed on (a, T). Thread-safe;
// values are independent of evaluation order, so parallel and serial pricing
// agree bitwise. A Pade build whose denominator scan finds a positive-real
// pole is replaced by an Adams(1000) backend for that node and noted in
// warnings().
class CgfEngine {
 public:
  CgfEngine(ModelParams m, ForwardVarianceCurve xi, HMethod method);

  std::complex<double> cgf_at(std::complex<double> a, double T);

  const ModelParams& params() const { return m_; }
  const ForwardVarianceCurve& curve() const { return xi_; }
  HMethod method() const { return method_; }
  std::vector<std::string> warnings() const;

 private:
  struct Key {
    double re, im, T;
    bool operator==(const Key& o) const { return re == o.re && im == o.im && T == o.T; }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const;
  };

  std::complex<double> compute(std::complex<double> a, double T);

  ModelParams m_;
  ForwardVarianceCurve xi_;
  HMethod method_;
  mutable std::mutex mu_;
  std::unordered_map<Key, std::complex<double>, KeyHash> phi_cache_;
  std::unordered_map<Key, std::shared_ptr<const RationalApproximant>, KeyHash> pade_cache_;
  std::vector<std::string> warnings_;
};

// Lewis call price, zero rates/dividends:
//   C = S - sqrt(S K)/pi * int_0^inf Re[e^(-i u k) exp(cgf(u - i/2))] du / (u^2 + 1/4),
// k = log(K/S). Adaptive panel quadrature, relative tolerance 1e-8, truncated
// once the tail bound drops below 1e-10 S; IntegrationError if u = 500 is
// reached first. Result clamped to [max(S-K, 0), S].
double lewis_call(CgfEngine& engine, double S, double K, double T);

// Same integral, put side (parity-consistent by construction: C - P = S - K).
double lewis_put(CgfEngine& engine, double S, double K, double T);

// Deterministic-variance limit (nu = 0): cgf = -a(a+i)/2 * int_0^T xi.
// Separate entry because ModelParams itself requires nu > 0.
double lewis_call_deterministic(const ForwardVarianceCurve& xi, double S, double K, double T);

// Black-Scholes call, zero rates.
double bs_price(double S, double K, double T, double vol);

struct ImpliedVolResult {
  double vol = 0.0;
  bool converged = false;
  bool at_intrinsic = false;  // price == intrinsic: vol -> 0 boundary
};

// Safeguarded Newton (bisection bracket [1e-6, 5]), |price error| < 1e-10.
// NoSolutionError when price is outside [max(S-K,0), S] or needs vol > 5.
ImpliedVolResult implied_vol(double price, double S, double K, double T);

struct SmileCell {
  double maturity = 0.0;
  double strike = 0.0;
  double price = 0.0;
  double iv = 0.0;
  std::string method;
  std::string error;  // empty on success
};

// Full (method x maturity x strike) grid, rows in that lex order. Cells are
// independent and run under the given execution policy; a cell failure is
// recorded in its error column, never thrown.
std::vector<SmileCell> smile(const ModelParams& m, const ForwardVarianceCurve& xi, double S,
                             const std::vector<double>& strikes,
                             const std::vector<double>& maturities,
                             const std::vector<HMethod>& methods, Exec exec = Exec::parallel);

}  // namespace mlrh
