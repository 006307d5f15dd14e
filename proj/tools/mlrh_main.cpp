// mlrh: curves, convergence tables and option prices for the rough Heston
// model with the Mittag-Leffler kernel. Subcommands: hcurve, converge, smile,
// price, selftest. Output is CSV (RFC-4180, 17 significant digits, '\n' line
// endings -- byte-identical across runs of the same config) or a JSON array
// of row objects with the same field names.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mlrh/adams.hpp"
#include "mlrh/model.hpp"
#include "mlrh/pade.hpp"
#include "mlrh/pricer.hpp"
#include "mlrh/series.hpp"
#include "selftest.hpp"

using namespace mlrh;
using C = std::complex<double>;
using ojson = nlohmann::ordered_json;

namespace {

// ------------------------------------------------------------ configuration

// Raw option values. List-valued settings are comma-separated strings so the
// same field works for a flag, a JSON string, or a JSON array. Built-in
// defaults are the reference parameter set of the convergence study.
struct RawConfig {
  double H = 0.05, nu = 0.4, rho = -0.65, lam = 1.0;
  double a_re = 3.0, a_im = -0.5;
  double t_min = 0.01, t_max = 10.0;
  int t_points = 200;
  std::string methods;  // empty -> per-command default
  std::string orders = "2,3,4,5";
  int adams_steps = 1000;
  double spot = 1.0;
  std::string strikes = "0.8,0.9,1.0,1.1,1.2";
  std::string maturities = "0.25,0.5,1.0";
  std::string xi_times = "0";
  std::string xi_values = "0.04";
  std::string out;
  std::string format = "csv";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
  std::vector<double> v;
  for (const std::string& p : split_list(s)) {
    size_t used = 0;
    double x;
    try {
      x = std::stod(p, &used);
    } catch (const std::exception&) {
      throw DomainError(what + ": cannot parse '" + p + "' as a number");
    }
    if (used != p.size()) throw DomainError(what + ": trailing junk in '" + p + "'");
    v.push_back(x);
  }
  if (v.empty()) throw DomainError(what + ": empty list");
  return v;
}

std::vector<int> parse_ints(const std::string& s, const std::string& what) {
  std::vector<int> v;
  for (double x : parse_doubles(s, what)) {
    if (x != std::floor(x)) throw DomainError(what + ": '" + std::to_string(x) + "' is not an integer");
    v.push_back(int(x));
  }
  return v;
}

// Config-file merge: a JSON value overrides the built-in default but loses to
// an explicitly given flag. List-valued keys accept arrays or strings.
void merge_config(const ojson& doc, const CLI::App& app, RawConfig& c) {
  auto list_to_string = [](const ojson& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (!v.is_array()) throw DomainError("config: expected string or array");
    std::string joined;
    for (const auto& e : v) {
      if (!joined.empty()) joined += ",";
      if (e.is_string())
        joined += e.get<std::string>();
      else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", e.get<double>());
        joined += buf;
      }
    }
    return joined;
  };

  struct DoubleKey {
    const char* key;
    const char* flag;
    double* slot;
  } dkeys[] = {
      {"H", "--H", &c.H},           {"nu", "--nu", &c.nu},
      {"rho", "--rho", &c.rho},     {"lam", "--lam", &c.lam},
      {"a_re", "--a-re", &c.a_re},  {"a_im", "--a-im", &c.a_im},
      {"t_min", "--t-min", &c.t_min}, {"t_max", "--t-max", &c.t_max},
      {"spot", "--spot", &c.spot},
  };
  for (const auto& k : dkeys)
    if (doc.contains(k.key) && app.count(k.flag) == 0) *k.slot = doc.at(k.key).get<double>();

  struct IntKey {
    const char* key;
    const char* flag;
    int* slot;
  } ikeys[] = {
      {"t_points", "--t-points", &c.t_points},
      {"adams_steps", "--adams-steps", &c.adams_steps},
  };
  for (const auto& k : ikeys)
    if (doc.contains(k.key) && app.count(k.flag) == 0) *k.slot = doc.at(k.key).get<int>();

  struct ListKey {
    const char* key;
    const char* flag;
    std::string* slot;
  } lkeys[] = {
      {"methods", "--methods", &c.methods},
      {"orders", "--orders", &c.orders},
      {"strikes", "--strikes", &c.strikes},
      {"maturities", "--maturities", &c.maturities},
      {"xi_times", "--xi-times", &c.xi_times},
      {"xi_values", "--xi-values", &c.xi_values},
  };
  for (const auto& k : lkeys)
    if (doc.contains(k.key) && app.count(k.flag) == 0) *k.slot = list_to_string(doc.at(k.key));

  if (doc.contains("out") && app.count("--out") == 0) c.out = doc.at("out").get<std::string>();
  if (doc.contains("format") && app.count("--format") == 0)
    c.format = doc.at("format").get<std::string>();
}

// ------------------------------------------------------------------- tables

struct Cell {
  enum class Kind { num, text, empty } kind = Kind::empty;
  double num = 0.0;
  std::string text;

  static Cell of(double v) { return {Kind::num, v, {}}; }
  static Cell of(const std::string& s) { return {Kind::text, 0.0, s}; }
  static Cell none() { return {}; }
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const Cell& c) {
  if (c.kind == Cell::Kind::num) return fmt_num(c.num);
  if (c.kind == Cell::Kind::empty) return "";
  const std::string& s = c.text;
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::string render_csv(const Table& t) {
  std::string s;
  for (size_t i = 0; i < t.header.size(); ++i) {
    if (i) s += ',';
    s += t.header[i];
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += csv_field(row[i]);
    }
    s += '\n';
  }
  return s;
}

std::string render_json(const Table& t) {
  ojson arr = ojson::array();
  for (const auto& row : t.rows) {
    ojson obj = ojson::object();
    for (size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (c.kind == Cell::Kind::num)
        obj[t.header[i]] = c.num;
      else if (c.kind == Cell::Kind::text)
        obj[t.header[i]] = c.text;
      else
        obj[t.header[i]] = nullptr;
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

// Companion script stub so the tables can be plotted without re-deriving the
// column layout; written next to the data file as <out>.gp.
void write_gnuplot_stub(const std::string& out, const std::string& plot_line) {
  std::ofstream gp(out + ".gp");
  gp << "# gnuplot companion stub for " << out << "\n"
     << "set datafile separator \",\"\n"
     << "set key autotitle columnhead\n"
     << plot_line << "\n";
}

int emit(const Table& t, const RawConfig& c, const std::string& plot_line) {
  const std::string body = c.format == "json" ? render_json(t) : render_csv(t);
  if (c.out.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw DomainError("cannot open output file '" + c.out + "'");
    f.write(body.data(), std::streamsize(body.size()));
    if (c.format == "csv") write_gnuplot_stub(c.out, plot_line);
  }
  return 0;
}

std::vector<double> time_grid(const RawConfig& c) {
  if (!(c.t_min > 0.0) || !(c.t_max >= c.t_min)) throw DomainError("need 0 < t-min <= t-max");
  if (c.t_points < 1) throw DomainError("t-points must be >= 1");
  std::vector<double> t;
  if (c.t_points == 1) {
    t.push_back(c.t_min);
    return t;
  }
  for (int i = 0; i < c.t_points; ++i)
    t.push_back(c.t_min * std::pow(c.t_max / c.t_min, double(i) / double(c.t_points - 1)));
  return t;
}

// ---------------------------------------------------------------- commands

// One h(t) backend per requested method; a failure to set the method up at
// all is carried in `error` and annotated on every row of that method.
struct MethodBackend {
  std::string name;
  std::function<C(double)> h_at;
  std::string error;
};

MethodBackend make_backend(const ModelParams& m, const FourierArg& a, const std::string& name,
                           double t_max) {
  MethodBackend b;
  b.name = name;
  try {
    const HMethod method = HMethod::parse(name);
    switch (method.kind) {
      case HMethod::Kind::pade: {
        auto r = std::make_shared<const RationalApproximant>(build_pade(m, a, method.order));
        b.h_at = [r](double t) { return eval_pade(*r, t); };
        break;
      }
      case HMethod::Kind::adams: {
        auto g = std::make_shared<const HGrid>(adams_solve(m, a, t_max, method.order));
        b.h_at = [g](double t) { return g->at_time(std::min(t, g->T)); };
        break;
      }
      case HMethod::Kind::classical:
        b.h_at = [m, a](double t) { return classical_h(m, a, t); };
        break;
      case HMethod::Kind::h_infinity:
        b.h_at = [m, a](double t) { return h_infinity(m, a, t); };
        break;
      case HMethod::Kind::series_small: {
        auto s = std::make_shared<const ComplexSeries>(small_time_coeffs(m, a, method.order));
        b.h_at = [s](double t) { return eval_series(*s, t); };
        break;
      }
      case HMethod::Kind::series_large: {
        auto s = std::make_shared<const ComplexSeries>(large_time_coeffs(m, a, method.order));
        b.h_at = [s](double t) { return eval_series(*s, t); };
        break;
      }
    }
  } catch (const std::exception& e) {
    b.error = e.what();
  }
  return b;
}

int cmd_hcurve(const RawConfig& c) {
  const ModelParams m(c.H, c.nu, c.rho, c.lam);
  const FourierArg a(C(c.a_re, c.a_im));
  const std::vector<double> grid = time_grid(c);
  const std::string method_list = c.methods.empty() ? "pade3,pade4,pade5,adams:1000" : c.methods;

  Table t;
  t.header = {"t", "method", "re_h", "im_h", "re_dalpha_h", "im_dalpha_h", "error"};
  for (const std::string& name : split_list(method_list)) {
    MethodBackend b = make_backend(m, a, name, grid.back());
    for (double ti : grid) {
      std::vector<Cell> row{Cell::of(ti), Cell::of(b.name)};
      std::string err = b.error;
      if (err.empty()) {
        try {
          const C h = b.h_at(ti);
          const C dh = riccati_rhs(m, a, h);  // D^alpha h, exact on the solution
          row.push_back(Cell::of(h.real()));
          row.push_back(Cell::of(h.imag()));
          row.push_back(Cell::of(dh.real()));
          row.push_back(Cell::of(dh.imag()));
        } catch (const std::exception& e) {
          err = e.what();
        }
      }
      if (!err.empty())
        for (int k = 0; k < 4; ++k) row.push_back(Cell::none());
      row.push_back(err.empty() ? Cell::of(std::string()) : Cell::of(err));
      t.rows.push_back(std::move(row));
    }
  }
  return emit(t, c, "plot \"" + (c.out.empty() ? std::string("hcurve.csv") : c.out) +
                        "\" using 1:3 with lines");
}

int cmd_converge(const RawConfig& c) {
  const ModelParams m(c.H, c.nu, c.rho, c.lam);
  const FourierArg a(C(c.a_re, c.a_im));
  const std::vector<double> grid = time_grid(c);
  const std::vector<int> orders = parse_ints(c.orders, "orders");
  if (c.adams_steps < 1) throw DomainError("adams-steps must be >= 1");

  // Benchmark: closed form in the classical limit, the time-stepped solver
  // otherwise (fresh run per point so every t gets full resolution).
  std::vector<C> bench(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    bench[i] = m.alpha == 1.0 ? classical_h(m, a, grid[i])
                              : adams_at(m, a, grid[i], c.adams_steps);

  struct RowData {
    int n;
    double err_re = 0.0, err_im = 0.0;
    std::string error;
  };
  std::vector<RowData> rows;
  std::vector<double> fit_n, fit_loge;
  for (int n : orders) {
    RowData r;
    r.n = n;
    try {
      const RationalApproximant approx = build_pade(m, a, n);
      for (size_t i = 0; i < grid.size(); ++i) {
        const C diff = eval_pade(approx, grid[i]) - bench[i];
        r.err_re = std::max(r.err_re, std::abs(diff.real()));
        r.err_im = std::max(r.err_im, std::abs(diff.imag()));
      }
      const double e = std::max(r.err_re, r.err_im);
      if (e > 0.0) {
        fit_n.push_back(double(n));
        fit_loge.push_back(std::log10(e));
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    rows.push_back(std::move(r));
  }
  // Common slope of log10(max component error) against n, repeated per row.
  double slope = 0.0;
  if (fit_n.size() >= 2) {
    const double nn = double(fit_n.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < fit_n.size(); ++i) {
      sx += fit_n[i];
      sy += fit_loge[i];
      sxx += fit_n[i] * fit_n[i];
      sxy += fit_n[i] * fit_loge[i];
    }
    slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  }

  Table t;
  t.header = {"n", "max_abs_err_re", "max_abs_err_im", "slope", "error"};
  for (const RowData& r : rows) {
    std::vector<Cell> row{Cell::of(double(r.n))};
    if (r.error.empty()) {
      row.push_back(Cell::of(r.err_re));
      row.push_back(Cell::of(r.err_im));
      row.push_back(Cell::of(slope));
    } else {
      row.push_back(Cell::none());
      row.push_back(Cell::none());
      row.push_back(Cell::none());
    }
    row.push_back(Cell::of(r.error));
    t.rows.push_back(std::move(row));
  }
  return emit(t, c, "set logscale y\nplot \"" +
                        (c.out.empty() ? std::string("converge.csv") : c.out) +
                        "\" using 1:2 with linespoints");
}

int run_smile(const RawConfig& c, bool single_cell) {
  const ModelParams m(c.H, c.nu, c.rho, c.lam);
  const ForwardVarianceCurve xi(parse_doubles(c.xi_times, "xi-times"),
                                parse_doubles(c.xi_values, "xi-values"));
  if (!(c.spot > 0.0)) throw DomainError("spot must be positive");
  std::vector<double> strikes = parse_doubles(c.strikes, "strikes");
  std::vector<double> maturities = parse_doubles(c.maturities, "maturities");
  if (single_cell) {
    strikes.resize(1);
    maturities.resize(1);
  }
  std::vector<HMethod> methods;
  for (const std::string& name : split_list(c.methods.empty() ? "pade5" : c.methods))
    methods.push_back(HMethod::parse(name));

  const auto cells = smile(m, xi, c.spot, strikes, maturities, methods);
  Table t;
  t.header = {"maturity", "strike", "price", "implied_vol", "method", "error"};
  for (const SmileCell& cell : cells) {
    std::vector<Cell> row{Cell::of(cell.maturity), Cell::of(cell.strike)};
    if (cell.error.empty()) {
      row.push_back(Cell::of(cell.price));
      row.push_back(Cell::of(cell.iv));
    } else {
      row.push_back(Cell::none());
      row.push_back(Cell::none());
    }
    row.push_back(Cell::of(cell.method));
    row.push_back(Cell::of(cell.error));
    t.rows.push_back(std::move(row));
  }
  return emit(t, c, "plot \"" + (c.out.empty() ? std::string("smile.csv") : c.out) +
                        "\" using 2:4 with linespoints");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rough Heston h(t; a) curves, convergence tables and option prices"};
  app.require_subcommand(1);

  RawConfig c;
  std::string config_path;
  app.add_option("--H", c.H, "Hurst exponent in [0, 1/2]");
  app.add_option("--nu", c.nu, "vol-of-vol (> 0)");
  app.add_option("--rho", c.rho, "spot/vol correlation (|rho| < 1)");
  app.add_option("--lam", c.lam, "mean-reversion speed (>= 0)");
  app.add_option("--a-re", c.a_re, "Re of the Fourier argument a");
  app.add_option("--a-im", c.a_im, "Im of the Fourier argument a (in [-1, 0])");
  app.add_option("--t-min", c.t_min, "left end of the log-spaced t grid");
  app.add_option("--t-max", c.t_max, "right end of the t grid");
  app.add_option("--t-points", c.t_points, "number of t grid points");
  app.add_option("--methods", c.methods,
                 "comma list: pade2..pade8, adams:N, classical, hinf, series_small:n, "
                 "series_large:n");
  app.add_option("--orders", c.orders, "comma list of approximant orders (converge)");
  app.add_option("--adams-steps", c.adams_steps, "benchmark steps for converge");
  app.add_option("--spot", c.spot, "spot price S");
  app.add_option("--strikes", c.strikes, "comma list of strikes");
  app.add_option("--maturities", c.maturities, "comma list of maturities");
  app.add_option("--xi-times", c.xi_times, "knots of the forward variance curve");
  app.add_option("--xi-values", c.xi_values, "values of the forward variance curve");
  app.add_option("--out", c.out, "output file (stdout if omitted)");
  app.add_option("--format", c.format, "csv or json");
  app.add_option("--config", config_path, "JSON config file (flags override it)");

  CLI::App* sc_hcurve = app.add_subcommand("hcurve", "h and D^alpha h on a t grid per method");
  CLI::App* sc_converge =
      app.add_subcommand("converge", "max approximation error vs order n");
  CLI::App* sc_smile = app.add_subcommand("smile", "price/IV grid over strikes x maturities");
  CLI::App* sc_price = app.add_subcommand("price", "single option price (first strike/maturity)");
  CLI::App* sc_selftest = app.add_subcommand("selftest", "run the library invariant suite");
  for (CLI::App* sc : {sc_hcurve, sc_converge, sc_smile, sc_price, sc_selftest})
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw DomainError("cannot open config file '" + config_path + "'");
      ojson doc;
      try {
        doc = ojson::parse(f);
      } catch (const std::exception& e) {
        throw DomainError(std::string("config parse error: ") + e.what());
      }
      merge_config(doc, app, c);
    }
    if (c.format != "csv" && c.format != "json")
      throw DomainError("format must be 'csv' or 'json'");

    if (sc_selftest->parsed()) return run_selftest();
    if (sc_hcurve->parsed()) return cmd_hcurve(c);
    if (sc_converge->parsed()) return cmd_converge(c);
    if (sc_smile->parsed()) return run_smile(c, false);
    if (sc_price->parsed()) return run_smile(c, true);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
