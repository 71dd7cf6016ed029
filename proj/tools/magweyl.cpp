#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "magweyl/config.hpp"
#include "magweyl/lattice.hpp"
#include "magweyl/parallel.hpp"
#include "magweyl/spectral.hpp"
#include "magweyl/verify.hpp"

using namespace magweyl;

namespace {

constexpr std::size_t kDenseCap = 4096;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw UsageError("write failed for '" + path + "'");
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void write_matrix(const std::string& path, const CMatrix& M) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f.write("MGW1", 4);
  put_u32(f, static_cast<std::uint32_t>(M.rows()));
  put_u32(f, static_cast<std::uint32_t>(M.cols()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      put_f64(f, M(i, j).real());
      put_f64(f, M(i, j).imag());
    }
  if (!f) throw UsageError("write failed for '" + path + "'");
}

Symbol named_symbol(const std::string& name, GridPtr g, double width) {
  if (name == "gaussian")
    return Symbol(g, [](const Point& x, const Point& p) {
      double s = 0.0;
      for (int a = 0; a < x.dim; ++a) s += x[a] * x[a] + p[a] * p[a];
      return Complex(std::exp(-0.5 * s), 0.0);
    });
  if (name == "harmonic")
    return Symbol(g, [](const Point& x, const Point& p) {
      double s = 0.0;
      for (int a = 0; a < x.dim; ++a) s += x[a] * x[a] + p[a] * p[a];
      return Complex(s, 0.0);
    });
  if (name == "cosine")
    return Symbol(g, [width](const Point&, const Point& p) {
      double s = 0.0;
      for (int a = 0; a < p.dim; ++a) s += p[a] * p[a];
      return Complex(std::cos(p[0]) * std::exp(-s / (2.0 * width * width)), 0.0);
    });
  throw UsageError("unknown symbol '" + name + "' (expected gaussian|harmonic|cosine)");
}

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  double tol = 0.0;
};

RunConfig resolve(const Common& c, RunConfig base) {
  RunConfig cfg = c.config.empty() ? base : RunConfig::load(c.config, base);
  if (c.seed_set) cfg.seed = c.seed;
  if (c.threads > 0) cfg.threads = c.threads;
  set_thread_count(cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  return cfg;
}

int cmd_verify(const Common& c, const std::string& suite, bool tol_set) {
  RunConfig cfg = resolve(c, RunConfig::defaults_verify());
  if (tol_set) cfg.tol.exact = cfg.tol.quadrature = cfg.tol.lattice = c.tol;
  std::vector<CheckResult> all;
  auto run = [&](const std::string& name, auto fn) {
    for (CheckResult r : fn(cfg)) {
      if (suite == "all") r.name = name + "/" + r.name;
      all.push_back(std::move(r));
    }
  };
  if (suite == "all" || suite == "exact") run("exact", exact_suite);
  if (suite == "all" || suite == "quadrature") run("quadrature", quadrature_suite);
  if (suite == "all" || suite == "lattice") run("lattice", lattice_suite);
  write_text(c.out, report_json(suite, all, cfg.seed).dump(2) + "\n");
  for (const auto& r : all)
    if (!r.passed) return 1;
  return 0;
}

int cmd_butterfly(const Common& c, int q_max, int samples, double nu, double mu) {
  resolve(c, RunConfig());
  if (q_max < 1 || q_max > 60) throw UsageError("--q-max must lie in [1, 60]");
  if (samples < 1) throw UsageError("--samples must be positive");
  write_text(c.out, butterfly_csv(butterfly(q_max, samples, nu, mu)));
  return 0;
}

int cmd_quantize(const Common& c, const std::string& symbol) {
  RunConfig cfg = resolve(c, RunConfig::defaults_quantize());
  if (c.out.empty()) throw UsageError("quantize needs --out");
  GridPtr g = share(cfg.grid.build());
  if (g->size() > kDenseCap) throw UsageError("grid has " + std::to_string(g->size()) + " points, dense cap is 4096");
  Symbol f = named_symbol(symbol, g, cfg.symbol_width);
  OperatorMatrix M;
  if (cfg.twist == TwistSource::Random) {
    TwistData tw = TwistData::derived(PhaseCochain::random_table(1, g, cfg.seed));
    M = quantize(f, tw, cfg.tau, cfg.kernel_range);
  } else {
    M = magnetic_kernel(f, cfg.vector_potential(), g, cfg.rule(), cfg.kernel_range);
  }
  write_matrix(c.out, M);
  nlohmann::json spec = nlohmann::json::array();
  if (is_hermitian(M, 1e-10)) {
    for (double v : eigh(M).values) spec.push_back(v);
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(M, false);
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (Complex z : ev) spec.push_back({z.real(), z.imag()});
  }
  write_text(c.out + ".spectrum.json", spec.dump() + "\n");
  return 0;
}

int cmd_gauge_demo(const Common& c, bool tol_set) {
  RunConfig cfg = resolve(c, RunConfig::defaults_gauge_demo());
  if (tol_set) cfg.tol.magnetic_defect = c.tol;
  GridPtr g = share(cfg.grid.build());
  if (g->size() > kDenseCap) throw UsageError("grid has " + std::to_string(g->size()) + " points, dense cap is 4096");
  if (cfg.grid.dimension < 1) throw UsageError("gauge-demo needs a grid");
  GaugeFunction rho = cfg.gauge_function();
  Symbol f = named_symbol("cosine", g, cfg.symbol_width);
  GaugeDefects d = gauge_defects(f, cfg.vector_potential(), rho, g, cfg.rule(), cfg.kernel_range);
  // For rho of degree <= 2, rho(y) - rho(x) = grad rho((x+y)/2).(y - x), so the naive kernel is covariant too.
  const bool polynomial = rho.waves.empty();
  bool ok = d.magnetic <= cfg.tol.magnetic_defect;
  if (polynomial)
    ok = ok && d.naive <= cfg.tol.magnetic_defect;
  else
    ok = ok && d.naive > cfg.tol.naive_defect;
  nlohmann::json j = {{"regime", polynomial ? "polynomial" : "nonpolynomial"},
                      {"magnetic_defect", d.magnetic},
                      {"naive_defect", d.naive},
                      {"magnetic_tolerance", cfg.tol.magnetic_defect},
                      {"naive_threshold", cfg.tol.naive_defect},
                      {"passed", ok},
                      {"seed", cfg.seed}};
  write_text(c.out, j.dump(2) + "\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magnetic Weyl calculus and twisted crossed products"};
  app.require_subcommand(1);
  Common c;
  std::string suite = "all", symbol;
  int q_max = 20, samples = 16;
  double nu = 1.0, mu = 0.0;

  auto common = [&](CLI::App* s, bool with_config) {
    if (with_config) s->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
    s->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { c.seed = v, c.seed_set = true; },
                                          "seed for every random draw");
    s->add_option("--threads", c.threads, "worker threads (default: hardware)")->check(CLI::NonNegativeNumber);
    s->add_option("--out", c.out, "output path");
  };
  CLI::App* v = app.add_subcommand("verify", "run invariant suites");
  common(v, true);
  v->add_option("--suite", suite)->check(CLI::IsMember({"all", "exact", "quadrature", "lattice"}));
  CLI::Option* vtol = v->add_option("--tol", c.tol, "override all suite tolerances");

  CLI::App* b = app.add_subcommand("butterfly", "Harper band sweep to CSV");
  common(b, false);
  b->add_option("--q-max", q_max);
  b->add_option("--samples", samples, "theta samples per axis");
  b->add_option("--nu", nu);
  b->add_option("--mu", mu);

  CLI::App* q = app.add_subcommand("quantize", "write Op^A(f) and its spectrum");
  common(q, true);
  q->add_option("symbol", symbol, "gaussian|harmonic|cosine")->required();

  CLI::App* gd = app.add_subcommand("gauge-demo", "naive vs magnetic gauge covariance");
  common(gd, true);
  CLI::Option* gtol = gd->add_option("--tol", c.tol, "bound on the magnetic defect");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "magweyl: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*v) return cmd_verify(c, suite, vtol->count() > 0);
    if (*b) return cmd_butterfly(c, q_max, samples, nu, mu);
    if (*q) return cmd_quantize(c, symbol);
    if (*gd) return cmd_gauge_demo(c, gtol->count() > 0);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "magweyl: error: " << msg << "\n";
    return 2;
  }
  return 2;
}
