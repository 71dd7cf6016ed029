#include "magweyl/magnetic.hpp"

#include <stdexcept>

namespace magweyl {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

void check_dim(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

QuadratureRule::QuadratureRule(int nodes, int panels) : nodes_(nodes), panels_(panels) {
  if (nodes < 1 || panels < 1) throw std::invalid_argument("quadrature: need nodes >= 1 and panels >= 1");
  std::vector<double> gx, gw;
  gauss_legendre(nodes, gx, gw);
  double len = 1.0 / panels;
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < nodes; ++i) {
      x_.push_back(len * (p + 0.5 * (gx[i] + 1.0)));
      w_.push_back(0.5 * len * gw[i]);
    }
}

MagneticField::MagneticField(int d) : d_(d), upper_(static_cast<std::size_t>(d * d), 0.0) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("field: dimension must be 1..3");
}

MagneticField::MagneticField(const Eigen::MatrixXd& constant, std::vector<GaussianBump> bumps)
    : MagneticField(static_cast<int>(constant.rows())) {
  if (constant.cols() != constant.rows()) throw std::invalid_argument("field: constant part must be square");
  for (int j = 0; j < d_; ++j)
    for (int k = j + 1; k < d_; ++k) upper_[j * d_ + k] = constant(j, k);
  for (auto& b : bumps) {
    if (b.j == b.k || b.j < 0 || b.k < 0 || b.j >= d_ || b.k >= d_)
      throw std::invalid_argument("field: bump pair must name two distinct axes");
    if (!(b.width > 0.0)) throw std::invalid_argument("field: bump width must be positive");
    if (b.center.dim != d_) throw std::invalid_argument("field: bump centre has wrong dimension");
    if (b.j > b.k) {
      std::swap(b.j, b.k);
      b.amplitude = -b.amplitude;
    }
  }
  bumps_ = std::move(bumps);
}

double MagneticField::constant_part(int j, int k) const {
  if (j == k) return 0.0;
  return j < k ? upper_[j * d_ + k] : -upper_[k * d_ + j];
}

double MagneticField::component(int j, int k, const Point& x) const {
  if (j == k) return 0.0;
  double sign = 1.0;
  if (j > k) {
    std::swap(j, k);
    sign = -1.0;
  }
  double v = upper_[j * d_ + k];
  for (const auto& b : bumps_) {
    if (b.j != j || b.k != k) continue;
    double dj = x[j] - b.center[j], dk = x[k] - b.center[k];
    v += b.amplitude * std::exp(-(dj * dj + dk * dk) / (2.0 * b.width * b.width));
  }
  return sign * v;
}

MagneticField MagneticField::from_json(const nlohmann::json& spec, int d) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
  std::vector<GaussianBump> bumps;
  for (auto it = spec.begin(); it != spec.end(); ++it)
    if (it.key() != "constant" && it.key() != "bumps")
      throw std::invalid_argument("field: unknown key '" + it.key() + "'");
  if (spec.contains("constant")) {
    const auto& m = spec.at("constant");
    if (!m.is_array() || static_cast<int>(m.size()) != d) throw std::invalid_argument("field: constant must be d x d");
    for (int j = 0; j < d; ++j) {
      if (!m[j].is_array() || static_cast<int>(m[j].size()) != d)
        throw std::invalid_argument("field: constant must be d x d");
      for (int k = 0; k < d; ++k) c(j, k) = m[j][k].get<double>();
    }
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (std::abs(c(j, k) + c(k, j)) > 1e-12) throw std::invalid_argument("field: constant part must be antisymmetric");
  }
  if (spec.contains("bumps")) {
    for (const auto& b : spec.at("bumps")) {
      for (auto it = b.begin(); it != b.end(); ++it)
        if (it.key() != "center" && it.key() != "width" && it.key() != "pair" && it.key() != "amplitude")
          throw std::invalid_argument("field: unknown bump key '" + it.key() + "'");
      GaussianBump g;
      g.center = Point(d);
      const auto& ctr = b.at("center");
      if (static_cast<int>(ctr.size()) != d) throw std::invalid_argument("field: bump centre has wrong dimension");
      for (int a = 0; a < d; ++a) g.center[a] = ctr[a].get<double>();
      g.width = b.at("width").get<double>();
      g.j = b.at("pair").at(0).get<int>();
      g.k = b.at("pair").at(1).get<int>();
      g.amplitude = b.at("amplitude").get<double>();
      bumps.push_back(g);
    }
  }
  return MagneticField(c, std::move(bumps));
}

GaugeFunction GaugeFunction::zero(int d) {
  GaugeFunction g;
  g.dim = d;
  g.linear.assign(d, 0.0);
  g.quadratic = Eigen::MatrixXd::Zero(d, d);
  return g;
}

GaugeFunction GaugeFunction::from_json(const nlohmann::json& spec, int d) {
  GaugeFunction g = zero(d);
  for (auto it = spec.begin(); it != spec.end(); ++it)
    if (it.key() != "linear" && it.key() != "quadratic" && it.key() != "waves")
      throw std::invalid_argument("gauge: unknown key '" + it.key() + "'");
  if (spec.contains("linear")) {
    if (static_cast<int>(spec["linear"].size()) != d) throw std::invalid_argument("gauge: linear has wrong length");
    for (int a = 0; a < d; ++a) g.linear[a] = spec["linear"][a].get<double>();
  }
  if (spec.contains("quadratic")) {
    const auto& m = spec["quadratic"];
    if (static_cast<int>(m.size()) != d) throw std::invalid_argument("gauge: quadratic must be d x d");
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) g.quadratic(j, k) = m.at(j).at(k).get<double>();
    g.quadratic = 0.5 * (g.quadratic + g.quadratic.transpose()).eval();
  }
  if (spec.contains("waves")) {
    for (const auto& w : spec["waves"]) {
      for (auto it = w.begin(); it != w.end(); ++it)
        if (it.key() != "amplitude" && it.key() != "k" && it.key() != "phase")
          throw std::invalid_argument("gauge: unknown wave key '" + it.key() + "'");
      Wave wv{w.at("amplitude").get<double>(), Point(d), w.value("phase", 0.0)};
      if (static_cast<int>(w.at("k").size()) != d) throw std::invalid_argument("gauge: wave k has wrong length");
      for (int a = 0; a < d; ++a) wv.k[a] = w["k"][a].get<double>();
      g.waves.push_back(wv);
    }
  }
  return g;
}

double GaugeFunction::value(const Point& x) const {
  double v = 0.0;
  for (int a = 0; a < dim; ++a) {
    v += linear[a] * x[a];
    for (int b = 0; b < dim; ++b) v += 0.5 * x[a] * quadratic(a, b) * x[b];
  }
  for (const auto& w : waves) v += w.amplitude * std::sin(dot(w.k, x) + w.phase);
  return v;
}

Point GaugeFunction::gradient(const Point& x) const {
  Point g(dim);
  for (int a = 0; a < dim; ++a) {
    g[a] = linear[a];
    for (int b = 0; b < dim; ++b) g[a] += quadratic(a, b) * x[b];
  }
  for (const auto& w : waves) {
    double c = w.amplitude * std::cos(dot(w.k, x) + w.phase);
    for (int a = 0; a < dim; ++a) g[a] += c * w.k[a];
  }
  return g;
}

bool GaugeFunction::is_zero() const {
  for (double c : linear)
    if (c != 0.0) return false;
  if (quadratic.size() && quadratic.cwiseAbs().maxCoeff() != 0.0) return false;
  for (const auto& w : waves)
    if (w.amplitude != 0.0) return false;
  return true;
}

VectorPotential::VectorPotential(int d, std::vector<Component> comps) : comps_(std::move(comps)) {
  check_dim(d, static_cast<int>(comps_.size()), "vector potential");
}

VectorPotential VectorPotential::zero(int d) {
  return VectorPotential(d, std::vector<Component>(d, [](const Point&) { return 0.0; }));
}

VectorPotential VectorPotential::constant(const Point& a) {
  std::vector<Component> c;
  for (int j = 0; j < a.dim; ++j) {
    double v = a[j];
    c.push_back([v](const Point&) { return v; });
  }
  return VectorPotential(a.dim, std::move(c));
}

Point VectorPotential::value(const Point& x) const {
  Point r(dim());
  for (int j = 0; j < dim(); ++j) r[j] = comps_[j](x);
  return r;
}

VectorPotential VectorPotential::plus_gradient(const GaugeFunction& rho) const {
  check_dim(dim(), rho.dim, "plus_gradient");
  std::vector<Component> c;
  for (int j = 0; j < dim(); ++j) {
    Component a = comps_[j];
    c.push_back([a, rho, j](const Point& x) { return a(x) + rho.gradient(x)[j]; });
  }
  return VectorPotential(dim(), std::move(c));
}

double flux_triangle(const MagneticField& B, const Point& q, const Point& x, const Point& y,
                     const QuadratureRule& rule) {
  const int d = B.dim();
  if (d < 2) throw std::invalid_argument("flux_triangle: d >= 2 required");
  check_dim(d, q.dim, "flux_triangle");
  check_dim(d, x.dim, "flux_triangle");
  check_dim(d, y.dim, "flux_triangle");
  const auto& n = rule.nodes();
  const auto& w = rule.weights();
  double total = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      double area = x[j] * y[k] - x[k] * y[j];
      if (area == 0.0) continue;
      double integral = 0.0;
      for (std::size_t a = 0; a < n.size(); ++a) {      // s
        double inner = 0.0;
        for (std::size_t b = 0; b < n.size(); ++b) {    // t
          Point p = q + n[a] * x + (n[a] * n[b]) * y;
          inner += w[b] * B.component(j, k, p);
        }
        integral += w[a] * n[a] * inner;
      }
      total += area * integral;
    }
  return total;
}

double circulation(const VectorPotential& A, const Point& x, const Point& y, const QuadratureRule& rule) {
  check_dim(A.dim(), x.dim, "circulation");
  check_dim(A.dim(), y.dim, "circulation");
  Point dx = y - x;
  double s = 0.0;
  const auto& n = rule.nodes();
  const auto& w = rule.weights();
  for (std::size_t i = 0; i < n.size(); ++i) {
    Point p = x + n[i] * dx;
    double a = 0.0;
    for (int j = 0; j < A.dim(); ++j)
      if (dx[j] != 0.0) a += dx[j] * A.component(j, p);
    s += w[i] * a;
  }
  return s;
}

VectorPotential transversal_gauge(const MagneticField& B, const QuadratureRule& rule) {
  const int d = B.dim();
  std::vector<VectorPotential::Component> comps;
  for (int j = 0; j < d; ++j) {
    comps.push_back([B, rule, j, d](const Point& x) {
      return -rule.integrate([&](double s) {
        Point sx = s * x;
        double acc = 0.0;
        for (int k = 0; k < d; ++k)
          if (k != j) acc += B.component(j, k, sx) * x[k];
        return s * acc;
      });
    });
  }
  return VectorPotential(d, std::move(comps));
}

PhaseCochain omega_B(const MagneticField& B, GridPtr grid, const QuadratureRule& rule) {
  check_dim(B.dim(), grid->dim(), "omega_B");
  GridPtr g = grid;
  return PhaseCochain(2, grid, [B, rule, g](const Point& q, std::span<const Point> x) {
    return unit_phase(-flux_triangle(B, g->physical(q), g->physical(x[0]), g->physical(x[1]), rule));
  });
}

PhaseCochain lambda_A(const VectorPotential& A, GridPtr grid, const QuadratureRule& rule) {
  check_dim(A.dim(), grid->dim(), "lambda_A");
  GridPtr g = grid;
  return PhaseCochain(1, grid, [A, rule, g](const Point& q, std::span<const Point> x) {
    Point a = g->physical(q);
    Point b = g->is_exact() ? a + g->physical(x[0]) : q + x[0];
    return unit_phase(-circulation(A, a, b, rule));
  });
}

namespace {
double d4(const std::function<double(double)>& f, double h) {
  return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}
}  // namespace

double curl_fd(const VectorPotential& A, int j, int k, const Point& x, double step) {
  auto along = [&](int axis, int comp) {
    return d4([&](double t) {
      Point p = x;
      p[axis] += t;
      return A.component(comp, p);
    }, step);
  };
  return along(j, k) - along(k, j);
}

double closedness_fd(const MagneticField& B, int j, int k, int l, const Point& x, double step) {
  auto der = [&](int axis, int a, int b) {
    return d4([&](double t) {
      Point p = x;
      p[axis] += t;
      return B.component(a, b, p);
    }, step);
  };
  return der(j, k, l) + der(l, j, k) + der(k, l, j);
}

}  // namespace magweyl
