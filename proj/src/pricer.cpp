#include "mlrh/pricer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>

#include "mlrh/adams.hpp"
#include "mlrh/errors.hpp"
#include "mlrh/quadrature.hpp"
#include "mlrh/series.hpp"

namespace mlrh {

// ---------------------------------------------------------------------------
// Forward-variance curve

ForwardVarianceCurve::ForwardVarianceCurve(std::vector<double> times_, std::vector<double> values_)
    : times(std::move(times_)), values(std::move(values_)) {
  if (times.empty() || times.size() != values.size())
    throw DomainError("ForwardVarianceCurve: need equally many times and values (at least one)");
  if (times.front() < 0.0)
    throw DomainError("ForwardVarianceCurve: times must be nonnegative");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw DomainError("ForwardVarianceCurve: times must be strictly increasing");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("ForwardVarianceCurve: variance values must be finite and positive");
}

ForwardVarianceCurve ForwardVarianceCurve::flat(double xi) {
  return ForwardVarianceCurve({0.0}, {xi});
}

double ForwardVarianceCurve::at(double s) const {
  if (s <= times.front()) return values.front();
  // last i with times[i] <= s
  size_t i = std::upper_bound(times.begin(), times.end(), s) - times.begin() - 1;
  return values[i];
}

double ForwardVarianceCurve::integral(double T) const {
  if (T < 0.0) throw DomainError("ForwardVarianceCurve::integral: T must be nonnegative");
  double acc = 0.0, prev = 0.0;
  for (double t : times) {
    if (t <= 0.0) continue;
    double hi = std::min(t, T);
    if (hi > prev) acc += at(0.5 * (prev + hi)) * (hi - prev);
    prev = hi;
    if (prev >= T) break;
  }
  if (prev < T) acc += at(0.5 * (prev + T)) * (T - prev);
  return acc;
}

// ---------------------------------------------------------------------------
// Method naming

HMethod HMethod::parse(const std::string& name) {
  std::string s;
  s.reserve(name.size());
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  auto tail_number = [&](size_t prefix_len, int fallback) {
    std::string rest = s.substr(prefix_len);
    if (!rest.empty() && (rest[0] == ':' || rest[0] == '-')) rest.erase(0, 1);
    if (rest.empty()) return fallback;
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(rest, &pos);
    } catch (...) {
      throw DomainError("HMethod: cannot parse order in '" + name + "'");
    }
    if (pos != rest.size()) throw DomainError("HMethod: trailing junk in '" + name + "'");
    return v;
  };

  HMethod m;
  if (s.rfind("pade", 0) == 0) {
    m.kind = Kind::pade;
    m.order = tail_number(4, 5);
    if (m.order < 1 || m.order > 8) throw DomainError("HMethod: pade order must be in [1, 8]");
  } else if (s.rfind("adams", 0) == 0) {
    m.kind = Kind::adams;
    m.order = tail_number(5, 1000);
    if (m.order < 1 || m.order > 2000000)
      throw DomainError("HMethod: adams step count must be in [1, 2000000]");
  } else if (s == "classical") {
    m.kind = Kind::classical;
    m.order = 0;
  } else if (s == "hinf" || s == "h_infinity" || s == "h-infinity") {
    m.kind = Kind::h_infinity;
    m.order = 0;
  } else if (s.rfind("series_small", 0) == 0 || s.rfind("series-small", 0) == 0) {
    m.kind = Kind::series_small;
    m.order = tail_number(12, 10);
    if (m.order < 1 || m.order > max_series_order)
      throw DomainError("HMethod: small-time series order must be in [1, 24]");
  } else if (s.rfind("series_large", 0) == 0 || s.rfind("series-large", 0) == 0) {
    m.kind = Kind::series_large;
    m.order = tail_number(12, 4);
    if (m.order < 0 || m.order > max_series_order)
      throw DomainError("HMethod: large-time series order must be in [0, 24]");
  } else {
    throw DomainError("HMethod: unknown method '" + name + "'");
  }
  return m;
}

std::string HMethod::str() const {
  char buf[48];
  switch (kind) {
    case Kind::pade:
      std::snprintf(buf, sizeof(buf), "pade%d", order);
      return buf;
    case Kind::adams:
      std::snprintf(buf, sizeof(buf), "adams:%d", order);
      return buf;
    case Kind::classical:
      return "classical";
    case Kind::h_infinity:
      return "hinf";
    case Kind::series_small:
      std::snprintf(buf, sizeof(buf), "series_small:%d", order);
      return buf;
    case Kind::series_large:
      std::snprintf(buf, sizeof(buf), "series_large:%d", order);
      return buf;
  }
  return "?";
}

// ---------------------------------------------------------------------------
// CGF

std::complex<double> g_from_h(const ModelParams& m, const FourierArg& a, std::complex<double> h) {
  // g = D^alpha h + lam h; on the solution D^alpha h equals the Riccati rhs.
  return riccati_rhs(m, a, h) + m.lam * h;
}

std::complex<double> cgf(const ModelParams& m, const FourierArg& a, double T,
                         const ForwardVarianceCurve& xi,
                         const std::function<std::complex<double>(double)>& h_at) {
  if (T < 0.0) throw DomainError("cgf: maturity must be nonnegative");
  if (T == 0.0) return {0.0, 0.0};

  static const GLRule& gl = gauss_legendre(64);

  // phi(a) = int_0^T xi(T-u) g(a, h(u)) du, split at the breakpoints of xi.
  std::vector<double> edges;
  edges.push_back(0.0);
  for (double s : xi.times) {
    double u = T - s;
    if (u > 0.0 && u < T) edges.push_back(u);
  }
  edges.push_back(T);
  std::sort(edges.begin(), edges.end());

  std::complex<double> total(0.0, 0.0);
  for (size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double lo = edges[seg], hi = edges[seg + 1];
    if (!(hi > lo)) continue;
    const double xival = xi.at(T - 0.5 * (lo + hi));

    // h(u) = h(0) + c u^alpha + ... : the panel touching u = 0 is refined
    // geometrically so every Gauss-Legendre panel sees a near-analytic
    // integrand (the innermost panel's whole contribution is ~u_min^(1+alpha)).
    std::vector<std::pair<double, double>> panels;
    if (lo == 0.0) {
      double r = hi;
      for (int level = 0; level < 28; ++level) {
        double l = 0.5 * r;
        panels.emplace_back(l, r);
        r = l;
      }
      panels.emplace_back(0.0, r);
    } else {
      panels.emplace_back(lo, hi);
    }

    for (const auto& [plo, phi] : panels) {
      const double c = 0.5 * (plo + phi), hw = 0.5 * (phi - plo);
      std::complex<double> acc(0.0, 0.0);
      for (size_t i = 0; i < gl.x.size(); ++i)
        acc += gl.w[i] * g_from_h(m, a, h_at(c + hw * gl.x[i]));
      total += (xival * hw) * acc;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Engine

size_t CgfEngine::KeyHash::operator()(const Key& k) const {
  std::hash<double> h;
  size_t s = h(k.re);
  s ^= h(k.im) + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
  s ^= h(k.T) + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
  return s;
}

CgfEngine::CgfEngine(ModelParams m, ForwardVarianceCurve xi, HMethod method)
    : m_(std::move(m)), xi_(std::move(xi)), method_(method) {
  if (method_.kind == HMethod::Kind::series_large)
    throw DomainError(
        "CgfEngine: the large-time series diverges at t -> 0 and cannot drive the CGF integral");
}

std::complex<double> CgfEngine::cgf_at(std::complex<double> a, double T) {
  const Key key{a.real(), a.imag(), T};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = phi_cache_.find(key);
    if (it != phi_cache_.end()) return it->second;
  }
  // Computed outside the lock; compute() is deterministic, so a racing
  // duplicate insert stores the identical value.
  const std::complex<double> val = compute(a, T);
  std::lock_guard<std::mutex> lock(mu_);
  return phi_cache_.emplace(key, val).first->second;
}

std::vector<std::string> CgfEngine::warnings() const {
  std::lock_guard<std::mutex> lock(mu_);
  return warnings_;
}

std::complex<double> CgfEngine::compute(std::complex<double> a, double T) {
  const FourierArg fa(a);
  std::function<std::complex<double>(double)> h_at;

  auto adams_backend = [&](int steps) {
    auto grid = std::make_shared<HGrid>(adams_solve(m_, fa, T, steps, Exec::serial));
    h_at = [grid](double t) {
      return t <= 0.0 ? std::complex<double>(0.0, 0.0) : grid->at_time(std::min(t, grid->T));
    };
  };

  switch (method_.kind) {
    case HMethod::Kind::pade: {
      std::shared_ptr<const RationalApproximant> r;
      bool fall_back = false;
      {
        std::lock_guard<std::mutex> lock(mu_);
        const Key key{a.real(), a.imag(), 0.0};
        auto it = pade_cache_.find(key);
        if (it != pade_cache_.end()) {
          r = it->second;
          fall_back = (r == nullptr);
        } else {
          // A node whose approximant cannot be trusted — denominator zero on
          // the ray, or a build failure (ill-conditioned system at extreme
          // |a|, resonant alpha) — is priced off the benchmark solver instead.
          char buf[192];
          buf[0] = '\0';
          try {
            auto built =
                std::make_shared<const RationalApproximant>(build_pade(m_, fa, method_.order));
            const auto poles = pole_scan(*built, default_scan_ymax(m_), Exec::serial);
            if (poles.empty()) {
              r = built;
            } else {
              std::snprintf(buf, sizeof(buf),
                            "pade%d denominator vanishes at y = %.6g for a = %.6g%+.6gi; "
                            "using adams:1000 for this node",
                            method_.order, poles.front(), a.real(), a.imag());
            }
          } catch (const std::runtime_error& e) {
            std::snprintf(buf, sizeof(buf),
                          "pade%d build failed for a = %.6g%+.6gi (%s); "
                          "using adams:1000 for this node",
                          method_.order, a.real(), a.imag(), e.what());
          }
          if (r == nullptr) {
            fall_back = true;
            warnings_.push_back(buf);
          }
          pade_cache_.emplace(key, r);
        }
      }
      if (fall_back)
        adams_backend(1000);
      else
        h_at = [r](double t) { return eval_pade(*r, t); };
      break;
    }
    case HMethod::Kind::adams:
      adams_backend(method_.order);
      break;
    case HMethod::Kind::classical: {
      const ModelParams* mp = &m_;
      h_at = [mp, fa](double t) {
        return t <= 0.0 ? std::complex<double>(0.0, 0.0) : classical_h(*mp, fa, t);
      };
      break;
    }
    case HMethod::Kind::h_infinity: {
      const ModelParams* mp = &m_;
      h_at = [mp, fa](double t) { return h_infinity(*mp, fa, t); };
      break;
    }
    case HMethod::Kind::series_small: {
      const ComplexSeries s = small_time_coeffs(m_, fa, method_.order);
      h_at = [s](double t) { return eval_series(s, t); };
      break;
    }
    case HMethod::Kind::series_large:
      throw DomainError("CgfEngine: large-time series cannot drive the CGF integral");
  }

  return cgf(m_, fa, T, xi_, h_at);
}

// ---------------------------------------------------------------------------
// Lewis integral

namespace {

struct PanelSum {
  double integral;
  double l1;  // sum of |w_i f(x_i)|, the attainable-accuracy scale
};

PanelSum gl15_panel(const std::function<double(double)>& f, double lo, double hi) {
  static const GLRule& gl = gauss_legendre(15);
  const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
  double acc = 0.0, l1 = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i) {
    const double term = gl.w[i] * f(c + hw * gl.x[i]);
    acc += term;
    l1 += std::abs(term);
  }
  return {hw * acc, std::abs(hw) * l1};
}

// Dyadic refinement keeps node abscissae in a fixed family per block, so the
// engine's CGF cache is shared across strikes of the same maturity. The halved
// tolerance is floored at the roundoff level of the panel's L1 mass: integrand
// values carry ~1e-13 relative noise (ML evaluation, per-node linear solves),
// so demanding less than that of a GL15 difference only recurses into noise.
double adapt_panel(const std::function<double(double)>& f, double lo, double hi, PanelSum whole,
                   double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const PanelSum left = gl15_panel(f, lo, mid);
  const PanelSum right = gl15_panel(f, mid, hi);
  const double diff = std::abs(left.integral + right.integral - whole.integral);
  const double noise = 5e-14 * (left.l1 + right.l1 + whole.l1);
  if (diff <= std::max(tol, noise)) return left.integral + right.integral;
  if (depth >= 18)
    throw IntegrationError("lewis integral: panel refinement did not converge");
  return adapt_panel(f, lo, mid, left, 0.5 * tol, depth + 1) +
         adapt_panel(f, mid, hi, right, 0.5 * tol, depth + 1);
}

// int_0^inf Re[e^{-iuk} phihat(u)] / (u^2 + 1/4) du, phihat(u) = exp(cgf(u - i/2)),
// then C = S - sqrt(SK)/pi * integral. Truncated once the tail bound
// |phihat(u_e)| sqrt(SK)/pi int_{u_e}^inf du/(u^2+1/4) drops below 1e-10 S.
double lewis_core(const std::function<std::complex<double>(double)>& phihat, double S, double K) {
  const double k = std::log(K / S);
  const double pref = std::sqrt(S * K) / M_PI;
  const auto f = [&](double u) {
    const std::complex<double> rot(std::cos(u * k), -std::sin(u * k));  // e^{-iuk}
    return (rot * phihat(u)).real() / (u * u + 0.25);
  };

  // Dyadic blocks while the integrand is structured, then geometric steps of
  // ~2^(1/4): the tail bound is re-tested at every edge, and for slowly
  // decaying short-maturity integrands a coarse 256 -> 500 jump would drag
  // quadrature nodes far past the point where truncation is already
  // justified (h evaluation gets harder as |a| grows, so stop as early as
  // the bound allows).
  static constexpr double edges[] = {0,   1,   2,   4,   8,   16,  32,  64,  76,  91,
                                     108, 128, 152, 181, 215, 256, 304, 362, 430, 500};
  constexpr size_t n_edges = sizeof(edges) / sizeof(edges[0]);
  const double tol_integral = 1e-8 * S / pref;

  double total = 0.0;
  for (size_t b = 0; b + 1 < n_edges; ++b) {
    const double lo = edges[b], hi = edges[b + 1];
    total += adapt_panel(f, lo, hi, gl15_panel(f, lo, hi), tol_integral / 32.0, 0);
    const double tail = std::abs(phihat(hi)) * (M_PI - 2.0 * std::atan(2.0 * hi)) * pref;
    if (tail < 1e-10 * S) return S - pref * total;
  }
  throw IntegrationError("lewis integral: integrand tail above truncation bound at u = 500");
}

double clamp_call(double price, double S, double K) {
  return std::min(S, std::max(price, std::max(S - K, 0.0)));
}

void check_contract(const char* who, double S, double K, double T) {
  if (!(S > 0.0) || !(K > 0.0))
    throw DomainError(std::string(who) + ": spot and strike must be positive");
  if (!(T > 0.0)) throw DomainError(std::string(who) + ": maturity must be positive");
}

}  // namespace

double lewis_call(CgfEngine& engine, double S, double K, double T) {
  check_contract("lewis_call", S, K, T);
  const auto phihat = [&engine, T](double u) {
    return std::exp(engine.cgf_at(std::complex<double>(u, -0.5), T));
  };
  return clamp_call(lewis_core(phihat, S, K), S, K);
}

double lewis_put(CgfEngine& engine, double S, double K, double T) {
  // Parity-consistent by construction.
  return lewis_call(engine, S, K, T) - S + K;
}

double lewis_call_deterministic(const ForwardVarianceCurve& xi, double S, double K, double T) {
  check_contract("lewis_call_deterministic", S, K, T);
  const double V = xi.integral(T);  // total variance
  if (V <= 0.0) return std::max(S - K, 0.0);
  // nu = 0: h solves D^alpha h = -a(a+i)/2 is irrelevant to the CGF, which
  // collapses to cgf = -a(a+i)/2 V; at a = u - i/2, a(a+i) = u^2 + 1/4.
  const auto phihat = [V](double u) {
    return std::complex<double>(std::exp(-0.5 * (u * u + 0.25) * V), 0.0);
  };
  return clamp_call(lewis_core(phihat, S, K), S, K);
}

// ---------------------------------------------------------------------------
// Black-Scholes and implied volatility

double bs_price(double S, double K, double T, double vol) {
  if (!(S > 0.0) || !(K > 0.0)) throw DomainError("bs_price: spot and strike must be positive");
  if (T < 0.0) throw DomainError("bs_price: maturity must be nonnegative");
  if (vol < 0.0) throw DomainError("bs_price: volatility must be nonnegative");
  if (T == 0.0 || vol == 0.0) return std::max(S - K, 0.0);
  const double sq = vol * std::sqrt(T);
  const double d1 = (std::log(S / K) + 0.5 * vol * vol * T) / sq;
  const double d2 = d1 - sq;
  const auto N = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  return S * N(d1) - K * N(d2);
}

ImpliedVolResult implied_vol(double price, double S, double K, double T) {
  if (!(S > 0.0) || !(K > 0.0)) throw DomainError("implied_vol: spot and strike must be positive");
  if (!(T > 0.0)) throw DomainError("implied_vol: maturity must be positive");
  const double intrinsic = std::max(S - K, 0.0);
  const double scale = std::max(S, K);
  if (price > S * (1.0 + 1e-12) || price < intrinsic - 1e-12 * scale)
    throw NoSolutionError("implied_vol: price outside the no-arbitrage band");
  if (price <= intrinsic + 1e-12 * scale) return {0.0, true, true};

  double lo = 1e-6, hi = 5.0;
  if (bs_price(S, K, T, hi) < price)
    throw NoSolutionError("implied_vol: price requires volatility above 5");
  if (bs_price(S, K, T, lo) >= price) return {lo, true, true};

  // Safeguarded Newton: the bracket [lo, hi] always contains the root; any
  // Newton step leaving it (or a degenerate vega) falls back to bisection.
  double v = std::clamp(std::sqrt(2.0 * M_PI / T) * price / S, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double diff = bs_price(S, K, T, v) - price;
    if (std::abs(diff) <= 1e-10) return {v, true, false};
    (diff > 0.0 ? hi : lo) = v;
    if (hi - lo <= 1e-15 * hi) return {v, std::abs(diff) <= 1e-8 * scale, false};
    const double sq = v * std::sqrt(T);
    const double d1 = (std::log(S / K) + 0.5 * v * v * T) / sq;
    const double vega = S * std::exp(-0.5 * d1 * d1) * std::sqrt(T / (2.0 * M_PI));
    double next = v - diff / vega;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    v = next;
  }
  return {v, false, false};
}

// ---------------------------------------------------------------------------
// Smile grid

std::vector<SmileCell> smile(const ModelParams& m, const ForwardVarianceCurve& xi, double S,
                             const std::vector<double>& strikes,
                             const std::vector<double>& maturities,
                             const std::vector<HMethod>& methods, Exec exec) {
  if (!(S > 0.0)) throw DomainError("smile: spot must be positive");
  const size_t nm = methods.size(), nt = maturities.size(), nk = strikes.size();
  std::vector<SmileCell> cells(nm * nt * nk);
  if (cells.empty()) return cells;

  // One engine per method, shared by all of that method's cells; the engine is
  // thread-safe and its cached values do not depend on evaluation order.
  std::vector<std::unique_ptr<CgfEngine>> engines(nm);
  std::vector<std::string> engine_errors(nm);
  for (size_t i = 0; i < nm; ++i) {
    try {
      engines[i] = std::make_unique<CgfEngine>(m, xi, methods[i]);
    } catch (const std::exception& e) {
      engine_errors[i] = e.what();
    }
  }

  par::for_each_index(static_cast<std::ptrdiff_t>(cells.size()), exec, [&](std::ptrdiff_t idx) {
    const size_t im = static_cast<size_t>(idx) / (nt * nk);
    const size_t it = (static_cast<size_t>(idx) / nk) % nt;
    const size_t ik = static_cast<size_t>(idx) % nk;
    SmileCell& cell = cells[idx];
    cell.maturity = maturities[it];
    cell.strike = strikes[ik];
    cell.method = methods[im].str();
    if (!engines[im]) {
      cell.error = engine_errors[im];
      return;
    }
    try {
      cell.price = lewis_call(*engines[im], S, strikes[ik], maturities[it]);
      const ImpliedVolResult iv = implied_vol(cell.price, S, strikes[ik], maturities[it]);
      cell.iv = iv.vol;
      if (!iv.converged) cell.error = "implied volatility solve did not converge";
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return cells;
}

}  // namespace mlrh
