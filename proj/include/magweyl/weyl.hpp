#pragma once

#include <functional>
#include <memory>

#include "magweyl/crossed.hpp"

namespace magweyl {

// (x, p): p is a dual point of the grid (integer k on the exact group, real momentum otherwise).
struct PhasePoint {
  Point x;
  Point p;
};

class Symbol {
 public:
  using Eval = std::function<Complex(const Point& q, const Point& p)>;

  Symbol(GridPtr grid, Eval f);

  // a(q) b(p)
  static Symbol tensor(GridPtr grid, std::function<Complex(const Point&)> a, std::function<Complex(const Point&)> b);
  // table(i, j) = f(point(i), dual_point(j)); exact grids.
  static Symbol from_table(GridPtr grid, const CMatrix& table);

  Complex operator()(const Point& q, const Point& p) const { return (*f_)(q, p); }
  const BoxGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  // Set when the symbol came out of partial_fourier; lets the inverse hand the
  // algebra element back instead of re-summing (an exact discrete identity).
  const std::shared_ptr<const AlgebraElement>& source() const { return source_; }
  Symbol without_source() const;
  Symbol with_source(const AlgebraElement& phi) const;

  CMatrix table() const;  // exact grids

 private:
  GridPtr grid_;
  std::shared_ptr<const Eval> f_;
  std::shared_ptr<const AlgebraElement> source_;
};

// How far an operator kernel reaches in the truncated box.
//   Periodic  every offset y - x, with the kernel read off the periodic inverse DFT
//   Window    offsets |m_a| <= (M_a - 1)/2 only; removes the wrap-around alias
enum class KernelRange { Periodic, Window };

// f(q, chi) = sum_x w chi(x) phi(q; x); box grids sum over the symmetric window.
Symbol partial_fourier(const AlgebraElement& phi);
// phi(q; x) = sum_k w' conj(chi_k(x)) f(q, chi_k)
AlgebraElement inverse_partial_fourier(const Symbol& f, KernelRange range = KernelRange::Periodic);

Symbol moyal(const Symbol& f, const Symbol& g, const TwistData& twist, const Endo& tau,
             KernelRange range = KernelRange::Periodic);
Symbol symbol_involute(const Symbol& f, const TwistData& twist, const Endo& tau);

// Direct phase-space sum for the magnetic product at tau = 1/2 (box grids only), evaluated at one point.
Complex moyal_direct(const Symbol& f, const Symbol& g, const MagneticField& B, const PhasePoint& X,
                     const QuadratureRule& rule = QuadratureRule());

OperatorMatrix quantize(const Symbol& f, const TwistData& twist, const Endo& tau,
                        KernelRange range = KernelRange::Periodic);
// Op^A(f) = Op^{lambda^A}_{1/2}(f)
OperatorMatrix quantize_magnetic(const Symbol& f, const VectorPotential& A, GridPtr grid,
                                 const QuadratureRule& rule = QuadratureRule(),
                                 KernelRange range = KernelRange::Periodic);

// entry w lambda(x; y-x) (F^{-1} b)(y-x)
OperatorMatrix op_momentum(const std::function<Complex(const Point&)>& b, const PhaseCochain& lambda,
                           KernelRange range = KernelRange::Periodic);

// [W(y, chi) u](x) = chi(-x - tau y) lambda(x; y) u(x + y)
OperatorMatrix weyl_system(const PhasePoint& xi, const TwistData& twist, const Endo& tau);

// (F_Xi g)(x, chi) = sum_{y, kappa} w w' chi(y) conj(kappa(x)) g(y, kappa); its own inverse.
CMatrix symplectic_fourier(const CMatrix& g, const BoxGrid& grid);
// sum_xi w w' (F_Xi f)(xi) W(xi); exact grids with prod M <= cap.
OperatorMatrix quantize_via_weyl(const Symbol& f, const TwistData& twist, const Endo& tau, std::size_t cap = 81);

// F_{xi0}(x, chi) = chi(x0) conj(chi0(x))
Symbol exponential_symbol(const PhasePoint& xi0, GridPtr grid);

// Kernel factorization: for each midpoint m = (x+y)/2 one inverse DFT in p, then the circulation phase.
// Equal to quantize_magnetic up to rounding.
OperatorMatrix magnetic_kernel(const Symbol& f, const VectorPotential& A, GridPtr grid,
                               const QuadratureRule& rule = QuadratureRule(),
                               KernelRange range = KernelRange::Periodic);
// f((x+y)/2, p - A((x+y)/2)) substituted into the A = 0 kernel. Not gauge covariant.
OperatorMatrix naive_minimal_coupling(const Symbol& f, const VectorPotential& A, GridPtr grid,
                                      KernelRange range = KernelRange::Periodic);

struct GaugeDefects {
  double magnetic = 0.0;
  double naive = 0.0;
};
// || e^{i rho} Op_A(f) e^{-i rho} - Op_{A + grad rho}(f) || for both prescriptions.
GaugeDefects gauge_defects(const Symbol& f, const VectorPotential& A, const GaugeFunction& rho, GridPtr grid,
                           const QuadratureRule& rule = QuadratureRule(),
                           KernelRange range = KernelRange::Window);
// e^{i rho} M e^{-i rho} - M'
OperatorMatrix conjugation_defect(const OperatorMatrix& M, const OperatorMatrix& Mprime, const GaugeFunction& rho,
                                  const BoxGrid& grid);

}  // namespace magweyl
