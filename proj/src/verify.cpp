#include "magweyl/verify.hpp"

#include <algorithm>
#include <random>

#include "magweyl/kernels.hpp"
#include "magweyl/lattice.hpp"
#include "magweyl/spectral.hpp"

namespace magweyl {

CheckResult make_check(std::string name, double err, double tol) {
  return CheckResult{std::move(name), err, tol, err <= tol};
}

double rel_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return kernels::max_abs_diff(a.data(), b.data(), static_cast<std::size_t>(a.size())) / scale;
}

nlohmann::json report_json(const std::string& suite, const std::vector<CheckResult>& checks, std::uint64_t seed) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckResult& c : checks)
    arr.push_back({{"name", c.name}, {"max_error", c.max_error}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  return {{"suite", suite}, {"checks", arr}, {"seed", seed}};
}

namespace {

std::string label(const BoxGrid& g) {
  std::string s = "Z";
  for (int a = 0; a < g.dim(); ++a) s += (a ? "x" : "") + std::to_string(g.count(a));
  return s;
}

std::string tau_label(const Endo& t) {
  return t.den() == 1 ? std::to_string(t.num()) : std::to_string(t.num()) + "/" + std::to_string(t.den());
}

OperatorMatrix diag(const BoxGrid& g, const std::function<Complex(const Point&)>& a) {
  return multiplication_operator(ScalarField(a), g);
}

void exact_grid_checks(const GridPtr& gp, std::uint64_t seed, double tol, std::vector<CheckResult>& out) {
  const BoxGrid& g = *gp;
  const std::string L = label(g);
  const auto N = static_cast<Eigen::Index>(g.size());
  std::mt19937_64 rng(seed);

  PhaseCochain lambda = PhaseCochain::random_table(1, gp, seed + 1);
  TwistData tw = TwistData::derived(lambda);
  AlgebraElement phi = AlgebraElement::random(gp, seed + 2);
  AlgebraElement psi = AlgebraElement::random(gp, seed + 3);
  AlgebraElement chi = AlgebraElement::random(gp, seed + 4);
  const std::vector<Endo> taus{Endo::origin(), Endo::identity(), Endo::midpoint()};

  // ---- cohomology
  {
    PhaseCochain c0 = PhaseCochain::random_table(0, gp, seed + 5);
    PhaseCochain c2 = PhaseCochain::random_table(2, gp, seed + 6);
    out.push_back(make_check(L + "/cohomology/d1_d0", coboundary_defect(coboundary(c0), 200, seed), tol));
    out.push_back(make_check(L + "/cohomology/d2_d1", coboundary_defect(coboundary(lambda), 200, seed), tol));
    out.push_back(make_check(L + "/cohomology/d3_d2", coboundary_defect(coboundary(c2), 200, seed), tol));
    CocycleReport rep = is_cocycle(tw.omega, 200, tol, seed);
    out.push_back(make_check(L + "/cohomology/omega_cocycle",
                             std::max(rep.cocycle_deviation, rep.normalization_deviation), tol));
    PhaseCochain lt = pseudo_trivialize(tw.omega, true, seed);
    PhaseCochain back = coboundary(lt);
    double e = 0.0;
    for (int s = 0; s < 200; ++s) {
      Point q = g.random_point(rng), x = g.random_point(rng), y = g.random_point(rng);
      e = std::max(e, std::abs(back(q, x, y) - tw.omega(q, x, y)));
    }
    out.push_back(make_check(L + "/cohomology/pseudo_trivialization", e, tol));
  }

  // ---- algebra and representation, per tau
  for (const Endo& tau : taus) {
    const std::string T = L + "/tau=" + tau_label(tau);
    AlgebraElement pp = compose(phi, psi, tw, tau).tabulate();
    AlgebraElement pc = compose(psi, chi, tw, tau).tabulate();
    out.push_back(make_check(T + "/associativity", rel_diff(compose(pp, chi, tw, tau).table(),
                                                            compose(phi, pc, tw, tau).table()), tol));
    AlgebraElement phis = involute(phi, tw, tau).tabulate();
    AlgebraElement psis = involute(psi, tw, tau).tabulate();
    out.push_back(make_check(T + "/involution_involutive", rel_diff(involute(phis, tw, tau).table(), phi.table()), tol));
    out.push_back(make_check(T + "/involution_antihomomorphism",
                             rel_diff(involute(pp, tw, tau).table(), compose(psis, phis, tw, tau).table()), tol));
    OperatorMatrix Rphi = represent(phi, tw, tau), Rpsi = represent(psi, tw, tau);
    out.push_back(make_check(T + "/rep_homomorphism", rel_diff(represent(pp, tw, tau), Rphi * Rpsi), tol));
    out.push_back(make_check(T + "/rep_involution", rel_diff(represent(phis, tw, tau), Rphi.adjoint()), tol));
    // tau-naturality and the remap isomorphism
    for (const Endo& tp : taus) {
      AlgebraElement m = remap_tau(phi, tau, tp).tabulate();
      out.push_back(make_check(T + "/naturality_to_" + tau_label(tp), rel_diff(represent(phi, tw, tp),
                                                                              represent(m, tw, tau)), tol));
    }
    {
      const Endo tp = taus[(&tau - taus.data() + 1) % taus.size()];
      AlgebraElement mphi = remap_tau(phi, tau, tp).tabulate(), mpsi = remap_tau(psi, tau, tp).tabulate();
      AlgebraElement rhs = remap_tau(compose(phi, psi, tw, tp).tabulate(), tau, tp);
      out.push_back(make_check(T + "/remap_isomorphism", rel_diff(compose(mphi, mpsi, tw, tau).table(), rhs.table()), tol));
    }
    // Weyl system relation, unitarity and the tau change of phase
    double rel = 0.0, uni = 0.0, shift = 0.0;
    for (int s = 0; s < 4; ++s) {
      Point x = g.random_point(rng), y = g.random_point(rng);
      Point k1 = g.random_point(rng), k2 = g.random_point(rng);  // dual points: same index set
      PhasePoint xi{x, k1}, eta{y, k2};
      OperatorMatrix Wx = weyl_system(xi, tw, tau), Wy = weyl_system(eta, tw, tau);
      OperatorMatrix Wxy = weyl_system({g.add(x, y), g.dual_add(k1, k2)}, tw, tau);
      Complex c = g.character(k1, tau.apply(g, y)) * g.character(k2, g.sub(tau.apply(g, x), x));
      OperatorMatrix D = diag(g, [&](const Point& q) { return c * tw.omega(q, x, y); });
      rel = std::max(rel, rel_diff(Wx * Wy, D * Wxy));
      uni = std::max(uni, rel_diff(Wx.adjoint() * Wx, OperatorMatrix::Identity(N, N)));
      for (const Endo& tp : taus) {
        Complex ph = g.character(k1, g.sub(tau.apply(g, x), tp.apply(g, x)));
        shift = std::max(shift, rel_diff(weyl_system(xi, tw, tp), ph * Wx));
      }
    }
    out.push_back(make_check(T + "/weyl_relation", rel, tol));
    out.push_back(make_check(T + "/weyl_unitary", uni, tol));
    out.push_back(make_check(T + "/weyl_tau_change", shift, tol));
    // gauge covariance of Rep and Op
    PhaseCochain c = PhaseCochain::random_table(0, gp, seed + 7);
    TwistData tmu = TwistData::derived(gauge_transform(lambda, c));
    OperatorMatrix rc = diag(g, [&](const Point& q) { return c(q); });
    out.push_back(make_check(T + "/gauge_covariance",
                             rel_diff(represent(phi, tmu, tau), rc.adjoint() * Rphi * rc), tol));
    // Op homomorphism through the transported product
    Symbol f = partial_fourier(phi).without_source(), h = partial_fourier(psi).without_source();
    Symbol fh = moyal(f, h, tw, tau);
    out.push_back(make_check(T + "/op_homomorphism",
                             rel_diff(quantize(fh, tw, tau), quantize(f, tw, tau) * quantize(h, tw, tau)), tol));
    out.push_back(make_check(T + "/op_involution",
                             rel_diff(quantize(symbol_involute(f, tw, tau), tw, tau), quantize(f, tw, tau).adjoint()), tol));
  }

  // ---- covariance T r(a) T^* = r(theta_x a)
  {
    std::normal_distribution<double> nd;
    std::vector<Complex> av(g.size());
    for (auto& z : av) z = Complex(nd(rng), nd(rng));
    auto a = [&](const Point& q) { return av[g.index_of(q)]; };
    OperatorMatrix ra = diag(g, a);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Point x = g.point(i);
      OperatorMatrix Tx = translation_operator(lambda, x);
      OperatorMatrix rt = diag(g, [&](const Point& q) { return a(g.add(q, x)); });
      e = std::max(e, rel_diff(Tx * ra * Tx.adjoint(), rt));
    }
    out.push_back(make_check(L + "/covariance", e, tol));
  }

  // ---- regular representation
  {
    OperatorMatrix W = regular_intertwiner(lambda);
    const auto D = W.rows();
    out.push_back(make_check(L + "/regular/unitary", rel_diff(W.adjoint() * W, OperatorMatrix::Identity(D, D)), tol));
    std::normal_distribution<double> nd;
    std::vector<Complex> av(g.size());
    for (auto& z : av) z = Complex(nd(rng), nd(rng));
    ScalarField a([&](const Point& q) { return av[g.index_of(q)]; });
    out.push_back(make_check(L + "/regular/multiplication",
                             rel_diff(W.adjoint() * regular_multiplication(a, g) * W,
                                      identity_tensor(multiplication_operator(a, g))), tol));
    double e = 0.0;
    for (int s = 0; s < 2; ++s) {
      Point z = g.random_point(rng);
      e = std::max(e, rel_diff(W.adjoint() * regular_translation(tw.omega, z) * W,
                               identity_tensor(translation_operator(lambda, z))));
    }
    out.push_back(make_check(L + "/regular/translation", e, tol));
  }
}

}  // namespace

std::vector<CheckResult> exact_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  const double tol = cfg.tol.exact;
  exact_grid_checks(share(BoxGrid::exact({9})), cfg.seed, tol, out);
  exact_grid_checks(share(BoxGrid::exact({5, 5})), cfg.seed + 100, tol, out);

  // quantization through the Weyl system
  {
    GridPtr gp = share(BoxGrid::exact({9}));
    const BoxGrid& g = *gp;
    TwistData tw = TwistData::derived(PhaseCochain::random_table(1, gp, cfg.seed + 11));
    std::mt19937_64 rng(cfg.seed + 12);
    std::normal_distribution<double> nd;
    double e = 0.0, ex = 0.0;
    for (int s = 0; s < 10; ++s) {
      std::vector<Complex> av(g.size()), bv(g.size());
      for (auto& z : av) z = Complex(nd(rng), nd(rng));
      for (auto& z : bv) z = Complex(nd(rng), nd(rng));
      Symbol f = Symbol::tensor(gp, [&g, av](const Point& q) { return av[g.index_of(q)]; },
                                [&g, bv](const Point& p) { return bv[g.dual_index(p)]; });
      Endo tau = s % 3 == 0 ? Endo::origin() : (s % 3 == 1 ? Endo::identity() : Endo::midpoint());
      e = std::max(e, rel_diff(quantize_via_weyl(f, tw, tau), quantize(f, tw, tau)));
      PhasePoint xi0{g.random_point(rng), g.random_point(rng)};
      ex = std::max(ex, rel_diff(quantize(exponential_symbol(xi0, gp), tw, tau), weyl_system(xi0, tw, tau)));
    }
    out.push_back(make_check("Z9/quantize_via_weyl", e, 1e-10));
    out.push_back(make_check("Z9/exponential_symbol", ex, tol));
  }

  // rotation-algebra cocycle: lambda(q;x) = omega_alpha(q,x) is its pseudo-trivialization
  {
    GridPtr lg = share(BoxGrid::lattice(2, 6));
    const double alpha = 0.3819660112501051;
    PhaseCochain om = omega_alpha_cochain(alpha, lg);
    PhaseCochain lt = pseudo_trivialize(om);
    PhaseCochain la = lambda_alpha(alpha, lg);
    PhaseCochain back = coboundary(lt);
    std::mt19937_64 rng(cfg.seed + 13);
    double e1 = 0.0, e2 = 0.0;
    for (int s = 0; s < 200; ++s) {
      Point q = lg->random_point(rng), x = lg->random_point(rng), y = lg->random_point(rng);
      e1 = std::max(e1, std::abs(lt(q, x) - la(q, x)));
      e2 = std::max(e2, std::abs(back(q, x, y) - om(q, x, y)));
    }
    out.push_back(make_check("Z2/omega_alpha_pseudo_trivialization", e1, 0.0));
    out.push_back(make_check("Z2/omega_alpha_coboundary", e2, tol));
  }
  return out;
}

// ---------------------------------------------------------------- quadrature

std::vector<CheckResult> quadrature_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  if (cfg.grid.dimension != 2) throw std::invalid_argument("quadrature suite: the configured grid must be 2-D");
  MagneticField B = cfg.magnetic_field();
  GridPtr gp = share(BoxGrid::box({16, 16}, {3.0, 3.0}));
  const double tol = cfg.tol.quadrature;
  auto stokes = [&](int nodes) {
    QuadratureRule rule(nodes);
    VectorPotential A = transversal_gauge(B, rule);
    PhaseCochain dl = coboundary(lambda_A(A, gp, rule));
    PhaseCochain om = omega_B(B, gp, rule);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double e = 0.0;
    for (int s = 0; s < 200; ++s) {
      Point q{u(rng), u(rng)}, x{u(rng), u(rng)}, y{u(rng), u(rng)};
      e = std::max(e, std::abs(dl(q, x, y) - om(q, x, y)));
    }
    return e;
  };
  const int n = cfg.quadrature_nodes;
  double e1 = stokes(n), e2 = stokes(2 * n);
  out.push_back(make_check("stokes/nodes=" + std::to_string(n), e1, tol));
  out.push_back(make_check("stokes/nodes=" + std::to_string(2 * n), e2, tol));
  out.push_back(make_check("stokes/refinement_ratio", e1 == 0.0 ? 0.0 : e2 / e1, 0.25));

  {
    VectorPotential A = transversal_gauge(B, cfg.rule());
    std::mt19937_64 rng(cfg.seed + 1);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    double e = 0.0;
    for (int s = 0; s < 200; ++s) {
      Point x{u(rng), u(rng)};
      e = std::max(e, std::abs(curl_fd(A, 0, 1, x) - B.component(0, 1, x)));
    }
    out.push_back(make_check("curl_matches_field", e, tol));
  }
  {
    double b = B.constant_part(0, 1);
    if (b == 0.0) b = 1.0;
    Eigen::MatrixXd c(2, 2);
    c << 0.0, b, -b, 0.0;
    VectorPotential A = transversal_gauge(MagneticField(c), cfg.rule());
    std::mt19937_64 rng(cfg.seed + 2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double e = 0.0;
    for (int s = 0; s < 200; ++s) {
      Point x{u(rng), u(rng)};
      e = std::max({e, std::abs(A.component(0, x) + 0.5 * b * x[1]), std::abs(A.component(1, x) - 0.5 * b * x[0])});
    }
    out.push_back(make_check("transversal_gauge_constant", e, cfg.tol.exact));
  }
  {
    // pair bumps in 3-D are closed
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
    c(0, 1) = 0.7;
    c(1, 0) = -0.7;
    std::vector<GaussianBump> bumps{{Point{0.2, 0.1, -0.3}, 0.6, 0, 1, 0.9},
                                    {Point{-0.4, 0.3, 0.5}, 0.8, 1, 2, -0.5},
                                    {Point{0.1, -0.2, 0.2}, 0.7, 0, 2, 0.4}};
    MagneticField B3(c, bumps);
    std::mt19937_64 rng(cfg.seed + 3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double e = 0.0;
    for (int s = 0; s < 100; ++s) e = std::max(e, std::abs(closedness_fd(B3, 0, 1, 2, Point{u(rng), u(rng), u(rng)})));
    out.push_back(make_check("closedness_3d", e, tol));
  }
  return out;
}

// ---------------------------------------------------------------- lattice

namespace {

LatticeElement random_element(std::mt19937_64& rng, int radius, int terms) {
  std::uniform_int_distribution<long> c(-radius, radius);
  std::normal_distribution<double> nd;
  LatticeElement e;
  for (int i = 0; i < terms; ++i) e.add({c(rng), c(rng)}, Complex(nd(rng), nd(rng)));
  return e;
}

std::vector<double> sorted_eigs(const CMatrix& H) { return eigh(H).values; }

}  // namespace

std::vector<CheckResult> lattice_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  const double tol = cfg.tol.lattice;
  const double ex = cfg.tol.exact;
  std::mt19937_64 rng(cfg.seed);
  const double alpha = 0.3819660112501051;

  out.push_back(make_check("omega/half_flux_value", std::abs(omega_alpha(0.5, {1, 0}, {0, 1}) - Complex(0.0, -1.0)), ex));
  {
    std::uniform_int_distribution<long> c(-20, 20);
    double e = 0.0, d = 0.0;
    for (int s = 0; s < 200; ++s) {
      LatticePoint x{c(rng), c(rng)}, xp{c(rng), c(rng)}, y{c(rng), c(rng)};
      e = std::max(e, std::abs(omega_alpha(alpha, x + xp, y) - omega_alpha(alpha, x, y) * omega_alpha(alpha, xp, y)));
      d = std::max(d, std::abs(omega_alpha(alpha, x, x) - 1.0));
      LatticeElement dd = twisted_convolve(LatticeElement::delta(x), LatticeElement::delta(y), alpha);
      d = std::max(d, dd.distance(LatticeElement::delta(x + y, omega_alpha(alpha, x, y))));
    }
    out.push_back(make_check("omega/biadditive", e, ex));
    out.push_back(make_check("convolution/deltas", d, ex));
  }
  {
    LatticeElement u = generator_u(), v = generator_v();
    // with this cocycle u<>v carries e^{-2 pi i alpha} relative to v<>u
    LatticeElement uv = twisted_convolve(u, v, alpha), vu = twisted_convolve(v, u, alpha);
    out.push_back(make_check("convolution/uv_commutation", uv.distance(vu * unit_phase(-2.0 * kPi * alpha)), ex));
    LatticeElement phi = random_element(rng, 2, 6);
    LatticeElement one = LatticeElement::delta({0, 0});
    out.push_back(make_check("convolution/unit", std::max(twisted_convolve(one, phi, alpha).distance(phi),
                                                          twisted_convolve(phi, one, alpha).distance(phi)), ex));
    out.push_back(make_check("involution/deltas", lattice_involute(LatticeElement::delta({2, -3})).distance(
                                                      LatticeElement::delta({-2, 3})), ex));
  }
  {
    double a = 0.0, inv = 0.0, sub = 0.0;
    for (int s = 0; s < 20; ++s) {
      LatticeElement p = random_element(rng, 2, 6), q = random_element(rng, 2, 6), r = random_element(rng, 2, 6);
      LatticeElement pq = twisted_convolve(p, q, alpha);
      LatticeElement lhs = twisted_convolve(pq, r, alpha), rhs = twisted_convolve(p, twisted_convolve(q, r, alpha), alpha);
      a = std::max(a, lhs.distance(rhs) / std::max(1.0, lhs.l1()));
      inv = std::max(inv, lattice_involute(pq).distance(twisted_convolve(lattice_involute(q), lattice_involute(p), alpha)));
      sub = std::max(sub, pq.l1() - p.l1() * q.l1());
    }
    out.push_back(make_check("convolution/associative", a, ex));
    out.push_back(make_check("involution/antihomomorphism", inv, ex));
    out.push_back(make_check("l1/submultiplicative", std::max(0.0, sub), 0.0));
  }
  {
    LatticeElement h = almost_mathieu(alpha, 0.7, 0.13);
    out.push_back(make_check("almost_mathieu/self_adjoint", h.distance(lattice_involute(h)), ex));
  }
  {
    // homomorphism on vectors supported well inside the box
    const int R = 8;
    LatticeElement p = random_element(rng, 2, 6), q = random_element(rng, 2, 6);
    CMatrix Rp = rep_lattice(p, alpha, R), Rq = rep_lattice(q, alpha, R);
    CMatrix Rpq = rep_lattice(twisted_convolve(p, q, alpha), alpha, R);
    const long n = 2 * R + 1;
    CVector u = CVector::Zero(n * n);
    std::normal_distribution<double> nd;
    for (long x1 = -R + 4; x1 <= R - 4; ++x1)
      for (long x2 = -R + 4; x2 <= R - 4; ++x2) u[(x1 + R) * n + (x2 + R)] = Complex(nd(rng), nd(rng));
    CVector a = Rpq * u, b = Rp * (Rq * u);
    out.push_back(make_check("rep/interior_homomorphism", kernels::max_abs_diff(a.data(), b.data(), a.size()) /
                                                              std::max(1.0, b.cwiseAbs().maxCoeff()), ex));
    // same operator through the general crossed-product representation
    GridPtr lg = share(BoxGrid::lattice(2, R));
    TwistData tw{lambda_alpha(alpha, lg), omega_alpha_cochain(alpha, lg)};
    AlgebraElement phi(lg, [p](const Point&, const Point& x) { return p({std::lround(x[0]), std::lround(x[1])}); });
    out.push_back(make_check("rep/matches_crossed_representation", rel_diff(represent(phi, tw, Endo::origin()), Rp), ex));
    // weighted convolution of the trigonometric polynomial with coefficients p
    auto b_of = [p](const std::vector<double>& th) {
      Complex s = 0.0;
      for (const auto& [z, c] : p.terms()) s += c * unit_phase(th[0] * z[0] + th[1] * z[1]);
      return s;
    };
    CMatrix W = weighted_convolution_op(b_of, tw.lambda, {2, 16, 1e-10});
    out.push_back(make_check("rep/weighted_convolution", rel_diff(W, Rp), ex));
    // ||Rep(phi)|| <= |||phi|||
    double worst = -INFINITY;
    for (int s = 0; s < 10; ++s) {
      LatticeElement e = random_element(rng, 2, 5);
      worst = std::max(worst, operator_norm(rep_lattice(e, alpha, 5)) - e.l1());
    }
    out.push_back(make_check("rep/norm_bound", std::max(0.0, worst), 1e-9));
  }
  {
    double rel = 0.0, herm = 0.0, sym = 0.0, shift = 0.0;
    for (long q = 1; q <= 7; ++q)
      for (long p = 0; p < q; ++p) {
        RationalFlux f(p, q);
        if (f.q != q) continue;
        std::uniform_real_distribution<double> th(0.0, 2.0 * kPi);
        double t1 = th(rng), t2 = th(rng);
        BlochGenerators g = bloch_generators(f, t1, t2);
        rel = std::max(rel, rel_diff(g.u * g.v, unit_phase(2.0 * kPi * f.alpha()) * g.v * g.u));
        CMatrix H = bloch_harper(f, 1.0, 0.0, t1, t2);
        herm = std::max(herm, hermitian_defect(H));
        std::vector<double> e = sorted_eigs(H), m = sorted_eigs(bloch_harper(f, 1.0, 0.0, t1 + kPi, t2 + kPi));
        for (std::size_t i = 0; i < e.size(); ++i) sym = std::max(sym, std::abs(e[i] + m[e.size() - 1 - i]));
        std::vector<double> sh = sorted_eigs(bloch_harper(f, 1.0, 0.0, t1 + 2.0 * kPi / q, t2));
        std::vector<double> sh2 = sorted_eigs(bloch_harper(f, 1.0, 0.0, t1, t2 + 2.0 * kPi / q));
        for (std::size_t i = 0; i < e.size(); ++i) shift = std::max({shift, std::abs(e[i] - sh[i]), std::abs(e[i] - sh2[i])});
      }
    out.push_back(make_check("bloch/commutation", rel, ex));
    out.push_back(make_check("bloch/hermitian", herm, ex));
    out.push_back(make_check("bloch/reflection_symmetry", sym, tol));
    out.push_back(make_check("bloch/theta_shift_invariance", shift, tol));
  }
  {
    double e = 0.0;
    for (int s = 0; s < 20; ++s) {
      std::uniform_real_distribution<double> th(0.0, 2.0 * kPi);
      double t1 = th(rng), t2 = th(rng);
      std::vector<double> v = sorted_eigs(bloch_harper(RationalFlux(1, 2), 1.0, 0.0, t1, t2));
      double r = 2.0 * std::sqrt(std::cos(t1) * std::cos(t1) + std::cos(t2) * std::cos(t2));
      e = std::max({e, std::abs(v[0] + r), std::abs(v[1] - r)});
    }
    out.push_back(make_check("bloch/half_flux_closed_form", e, tol));
  }
  {
    auto b0 = bloch_bands(RationalFlux(0, 1), 64, 1.0, 0.0);
    double e0 = b0.size() == 1 ? std::max(std::abs(b0[0].lo + 4.0), std::abs(b0[0].hi - 4.0)) : INFINITY;
    out.push_back(make_check("bands/alpha=0_edges", e0, 1e-6));
    auto b2 = bloch_bands(RationalFlux(1, 2), 64, 1.0, 0.0);
    double r = 2.0 * std::sqrt(2.0);
    double e2 = b2.size() == 1 ? std::max(std::abs(b2[0].lo + r), std::abs(b2[0].hi - r)) : INFINITY;
    out.push_back(make_check("bands/alpha=1/2_edges", e2, 1e-6));
    // per-index bands before merging: the touching point at 0
    double gap = INFINITY;
    {
      auto raw = bloch_bands(RationalFlux(1, 2), 64, 1.0, 0.0, 0.0);
      gap = raw.size() == 1 ? 0.0 : raw[1].lo - raw[0].hi;
    }
    out.push_back(make_check("bands/alpha=1/2_touching", std::abs(gap), 1e-6));
    auto b3 = bloch_bands(RationalFlux(1, 3), 64, 1.0, 0.0);
    out.push_back(make_check("bands/alpha=1/3_count", std::abs(static_cast<double>(b3.size()) - 3.0), 0.0));
    double sy = 0.0;
    for (long q = 2; q <= 7; ++q)
      for (long p = 1; p < q; ++p) {
        if (RationalFlux(p, q).q != q) continue;
        auto a = bloch_bands(RationalFlux(p, q), 16, 1.0, 0.0), b = bloch_bands(RationalFlux(q - p, q), 16, 1.0, 0.0);
        if (a.size() != b.size()) {
          sy = INFINITY;
          continue;
        }
        for (std::size_t i = 0; i < a.size(); ++i) sy = std::max({sy, std::abs(a[i].lo - b[i].lo), std::abs(a[i].hi - b[i].hi)});
      }
    out.push_back(make_check("bands/flux_reflection", sy, 1e-8));
    // open-boundary truncation against the Bloch bands
    BandedHermitian H = rep_lattice_banded(almost_mathieu(1.0 / 3.0, 1.0, 0.0), 1.0 / 3.0, 40);
    std::vector<double> ev = eigvalsh_banded(H);
    auto support = histogram_support(ev, -4.2, 4.2, 400, 0.05);
    out.push_back(make_check("bands/truncation_histogram_R=40", hausdorff(support, b3), 0.05));
  }
  return out;
}

}  // namespace magweyl
