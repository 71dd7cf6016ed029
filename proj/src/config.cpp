#include "magweyl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace magweyl {

namespace {

void only_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
}

Endo parse_tau(const nlohmann::json& t) {
  if (t.is_number_integer()) return Endo::rational(t.get<long>());
  if (t.is_number()) {
    double v = t.get<double>();
    // exact halves and integers stay rational so the exact backend accepts them
    if (v == 0.5) return Endo::midpoint();
    if (v == std::round(v)) return Endo::rational(static_cast<long>(v));
    return Endo::real(v);
  }
  if (t.is_string()) {
    std::string s = t.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Endo::rational(std::stol(s));
      return Endo::rational(std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("config: tau must be a number or 'p/q'");
    }
  }
  throw std::invalid_argument("config: tau must be a number or 'p/q'");
}

}  // namespace

BoxGrid GridSpec::build() const {
  if (static_cast<int>(M.size()) != dimension || static_cast<int>(L.size()) != dimension)
    throw std::invalid_argument("config: grid M and L must have 'dimension' entries");
  return mode == GridMode::ExactGroup ? BoxGrid::exact(M, L) : BoxGrid::box(M, L);
}

RunConfig RunConfig::defaults_verify() {
  RunConfig c;
  c.grid = GridSpec{2, {16, 16}, {3.0, 3.0}, GridMode::TruncatedBox};
  c.field = {{"constant", {{0.0, 1.0}, {-1.0, 0.0}}},
             {"bumps", {{{"center", {0.4, -0.3}}, {"width", 0.5}, {"pair", {0, 1}}, {"amplitude", 0.8}}}}};
  return c;
}

RunConfig RunConfig::defaults_quantize() {
  RunConfig c;
  c.grid = GridSpec{1, {64}, {8.0}, GridMode::TruncatedBox};
  c.field = {{"constant", {{0.0}}}};
  c.kernel_range = KernelRange::Periodic;
  return c;
}

RunConfig RunConfig::defaults_gauge_demo() {
  RunConfig c;
  c.grid = GridSpec{2, {40, 40}, {5.0, 5.0}, GridMode::TruncatedBox};
  c.field = {{"constant", {{0.0, 0.25}, {-0.25, 0.0}}},
             {"bumps", {{{"center", {0.5, -0.5}}, {"width", 1.0}, {"pair", {0, 1}}, {"amplitude", 0.6}}}}};
  c.gauge = {{"waves", {{{"amplitude", 0.5}, {"k", {1.0, 0.0}}, {"phase", 0.0}},
                        {{"amplitude", 0.3}, {"k", {0.6, 0.8}}, {"phase", 0.4}}}}};
  c.kernel_range = KernelRange::Window;
  return c;
}

RunConfig RunConfig::from_json(const nlohmann::json& j, RunConfig c) {
  only_keys(j, {"grid", "field", "twist", "tau", "gauge", "symbol", "quadrature", "kernel_range", "tolerances", "seed",
                "threads"},
            "config");
  try {
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      only_keys(g, {"dimension", "M", "L", "mode"}, "config.grid");
      GridSpec s = c.grid;
      if (g.contains("dimension")) s.dimension = g["dimension"].get<int>();
      if (g.contains("M")) s.M = g["M"].get<std::vector<int>>();
      if (g.contains("L")) s.L = g["L"].get<std::vector<double>>();
      if (g.contains("mode")) {
        std::string m = g["mode"].get<std::string>();
        if (m == "exact") s.mode = GridMode::ExactGroup;
        else if (m == "box") s.mode = GridMode::TruncatedBox;
        else throw std::invalid_argument("config.grid: mode must be 'exact' or 'box'");
      }
      if (s.dimension < 1 || s.dimension > kMaxDim) throw std::invalid_argument("config.grid: dimension must be 1..3");
      if (static_cast<int>(s.M.size()) != s.dimension || static_cast<int>(s.L.size()) != s.dimension)
        throw std::invalid_argument("config.grid: M and L must have 'dimension' entries");
      c.grid = s;
    }
    if (j.contains("field")) c.field = j["field"];
    if (j.contains("twist")) {
      const auto& t = j["twist"];
      only_keys(t, {"source", "potential"}, "config.twist");
      std::string s = t.value("source", std::string("transversal"));
      if (s == "transversal") c.twist = TwistSource::Transversal;
      else if (s == "potential") c.twist = TwistSource::Potential;
      else if (s == "random") c.twist = TwistSource::Random;
      else throw std::invalid_argument("config.twist: source must be transversal, potential or random");
      if (t.contains("potential")) c.potential = t["potential"].get<std::vector<double>>();
    }
    if (j.contains("tau")) c.tau = parse_tau(j["tau"]);
    if (j.contains("gauge")) c.gauge = j["gauge"];
    if (j.contains("symbol")) {
      only_keys(j["symbol"], {"width"}, "config.symbol");
      if (j["symbol"].contains("width")) c.symbol_width = j["symbol"]["width"].get<double>();
    }
    if (j.contains("quadrature")) {
      only_keys(j["quadrature"], {"nodes"}, "config.quadrature");
      if (j["quadrature"].contains("nodes")) c.quadrature_nodes = j["quadrature"]["nodes"].get<int>();
    }
    if (j.contains("kernel_range")) {
      std::string r = j["kernel_range"].get<std::string>();
      if (r == "window") c.kernel_range = KernelRange::Window;
      else if (r == "periodic") c.kernel_range = KernelRange::Periodic;
      else throw std::invalid_argument("config: kernel_range must be 'window' or 'periodic'");
    }
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      only_keys(t, {"exact", "quadrature", "lattice", "magnetic_defect", "naive_defect"}, "config.tolerances");
      c.tol.exact = t.value("exact", c.tol.exact);
      c.tol.quadrature = t.value("quadrature", c.tol.quadrature);
      c.tol.lattice = t.value("lattice", c.tol.lattice);
      c.tol.magnetic_defect = t.value("magnetic_defect", c.tol.magnetic_defect);
      c.tol.naive_defect = t.value("naive_defect", c.tol.naive_defect);
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  // validate the nested schemas now rather than at first use
  (void)c.magnetic_field();
  (void)c.gauge_function();
  if (c.twist == TwistSource::Potential && static_cast<int>(c.potential.size()) != c.grid.dimension)
    throw std::invalid_argument("config.twist: potential must have 'dimension' entries");
  if (c.quadrature_nodes < 1) throw std::invalid_argument("config.quadrature: nodes must be positive");
  return c;
}

RunConfig RunConfig::load(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }
  return from_json(j, std::move(base));
}

MagneticField RunConfig::magnetic_field() const {
  try {
    return MagneticField::from_json(field, grid.dimension);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config.field: ") + e.what());
  }
}

GaugeFunction RunConfig::gauge_function() const {
  try {
    return GaugeFunction::from_json(gauge, grid.dimension);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config.gauge: ") + e.what());
  }
}

VectorPotential RunConfig::vector_potential() const {
  switch (twist) {
    case TwistSource::Transversal:
      return transversal_gauge(magnetic_field(), rule());
    case TwistSource::Potential: {
      Point a(grid.dimension);
      for (int i = 0; i < grid.dimension; ++i) a[i] = potential.at(i);
      return VectorPotential::constant(a);
    }
    case TwistSource::Random:
      break;
  }
  throw std::invalid_argument("config: a random twist has no vector potential");
}

}  // namespace magweyl
