#ifndef WFSET_GABOR_HPP
#define WFSET_GABOR_HPP

#include <vector>

#include <nlohmann/json.hpp>

#include "wfset/geometry.hpp"
#include "wfset/transform.hpp"
#include "wfset/weights.hpp"
#include "wfset/windows.hpp"

namespace wfset {

/// Gabor coefficients share the STFT layout: rows are space nodes j, columns
/// frequencies ξ_l = b·l with l ∈ [−M/2, M/2)^d.
using CoefficientTable = StftGrid;

/// Window φ, painless dual ψ and a separable lattice pair aZ^d × bZ^d, used at
/// scale ε: φ^ε_{j,l}(x) = φ((x − εaj)/ε)·e^{i⟨x, bl⟩}.
struct GaborSystem {
  Window phi;
  Window psi;
  LatticePair pair;
  double eps = 1.0;
  /// C_{φ,ψ} in c_{j,l} = C·(f, ψ^ε_{j,l}); equals (ab/2π)^d.
  double constant = 1.0;

  int dim() const { return pair.dim(); }
  double spacing() const { return eps * pair.space_step(); }
  GaborSystem at_scale(double eps) const;
};

/// ψ = φ/(a^d·Σ_j φ(·−aj)²), so that Σ_j φψ(·−aj) = a^{−d}. Throws
/// PainlessViolated when diam supp φ ≥ 2π/b and IllConditioned when the
/// square sum drops below 1e-8.
Window painless_dual(const Window& phi, const LatticePair& pair);

/// Builds the pair and calibrates C by reconstructing a reference Gaussian.
GaborSystem make_gabor_system(const Window& phi, const LatticePair& pair, double eps = 1.0);

/// c_{j,l}(ε) by grid quadrature. With no explicit nodes, every j whose
/// translate meets the nonzero samples is kept.
CoefficientTable coefficients(const ComplexVec& samples, const SampleGrid& grid, const GaborSystem& sys,
                              std::vector<Eigen::VectorXi> nodes = {});
CoefficientTable coefficients(const Atom& f, const SampleGrid& grid, const GaborSystem& sys);

/// Σ c_{j,l} φ^ε_{j,l} on the grid of the table.
ComplexVec synthesize(const CoefficientTable& c, const GaborSystem& sys);

/// Indices j with x0 in the (open) support of φ^ε(·−εaj), lexicographic.
std::vector<Eigen::VectorXi> local_index_set(const Eigen::Ref<const Point>& x0, const GaborSystem& sys);

/// (Σ_l (Σ_j |c_{j,l}·ω(εx_j, ξ_l)|^p)^{q/p})^{1/q}; p, q may be infinite.
double discrete_modulation_norm(const CoefficientTable& c, const Weight& w, double p, double q);

/// sup |Σ_j φ^ε ψ^ε(x − εaj) − a^{−d}| over a dense grid of one lattice cell.
double partition_residual(const GaborSystem& sys, int per_axis = 513);

/// ‖synthesize(coefficients(f)) − f‖₂ / ‖f‖₂.
double reconstruction_error(const ComplexVec& samples, const SampleGrid& grid, const GaborSystem& sys);

/// {nnz, sup, mixed-norm} summary of a table.
nlohmann::json coefficient_summary(const CoefficientTable& c, const Weight& w, double p, double q);

}  // namespace wfset

#endif  // WFSET_GABOR_HPP
