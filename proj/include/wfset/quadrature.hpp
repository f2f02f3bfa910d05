#ifndef WFSET_QUADRATURE_HPP
#define WFSET_QUADRATURE_HPP

#include <functional>

#include "wfset/types.hpp"

namespace wfset {

struct QuadratureRule {
  RealVec nodes;
  RealVec weights;
};

/// n-point Gauss–Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

template <typename Value>
struct QuadratureResult {
  Value value{};
  double error = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss–Kronrod (7/15) on [a, b] to the given absolute tolerance.
QuadratureResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                                   double abs_tol = 1e-10, int max_depth = 40);
QuadratureResult<Complex> integrate(const std::function<Complex(double)>& f, double a, double b,
                                    double abs_tol = 1e-10, int max_depth = 40);

/// Composite Gauss–Legendre with `panels` panels of `order` nodes each.
Complex composite_gl(const std::function<Complex(double)>& f, double a, double b, int panels, int order = 16);

}  // namespace wfset

#endif  // WFSET_QUADRATURE_HPP
