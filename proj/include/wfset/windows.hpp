#ifndef WFSET_WINDOWS_HPP
#define WFSET_WINDOWS_HPP

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "wfset/types.hpp"

namespace wfset {

/// Real, nonnegative window and cut-off functions on R^d.
///
/// GevreyBump(σ, R) is N·exp(−(1−|x/R|²)^{−1/(σ−1)}) inside the ball of
/// radius R, normalized to unit integral; its Fourier transform decays like
/// exp(−c|ξ|^{1/σ}). TightPartition and PainlessDual are built from a bump
/// and a lattice aZ^d. Every kind can be dilated, φ^ε = φ(·/ε).
class Window {
 public:
  enum class Kind { GevreyBump, Gaussian, TightPartition, PainlessDual };

  static Window gevrey_bump(double sigma, double radius, int dim = 1);
  static Window gaussian(double width, int dim = 1);
  /// b/√(Σ_j b(·−aj)²): translates over aZ^d have squares summing to one.
  static Window tight_partition(const Window& base, double lattice_step);
  /// φ/(κ·Σ_j φ(·−aj)²); used by painless_dual.
  static Window painless_dual(const Window& base, double lattice_step, double kappa);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double sigma() const { return sigma_; }
  double radius() const { return radius_; }
  double width() const { return width_; }
  double scale() const { return scale_; }
  double lattice_step() const { return step_; }
  double kappa() const { return kappa_; }
  const Window* base() const { return base_.get(); }

  /// φ(x/ε) relative to this window.
  Window dilated(double eps) const;

  double operator()(const Eigen::Ref<const Point>& x) const;
  double operator()(double x) const;

  bool compact() const { return kind_ != Kind::Gaussian; }
  /// Radius of the support; for Gaussians the radius past which values drop below 1e-17.
  double support_radius() const;
  /// ∫φ of the undilated window (1 for bumps, (2πw²)^{d/2} for Gaussians).
  double stated_integral() const;
  /// Gevrey order of the smoothness class, 1 for Gaussians (entire).
  double gevrey_order() const;

  /// Σ_j φ(x−aj)² over the lattice aZ^d, in undilated coordinates.
  double lattice_square_sum(const Eigen::Ref<const Point>& y, double a) const;

  std::string id() const;

 private:
  double eval_undilated(const Eigen::Ref<const Point>& y) const;

  Kind kind_ = Kind::Gaussian;
  int dim_ = 1;
  double sigma_ = 2.0;
  double radius_ = 1.0;
  double width_ = 1.0;
  double norm_ = 1.0;
  double step_ = 1.0;
  double kappa_ = 1.0;
  double scale_ = 1.0;
  std::shared_ptr<const Window> base_;
};

/// Equivalent of gevrey_bump(σ, R) with the unit-integral constant returned.
double gevrey_bump_normalization(double sigma, double radius, int dim);

void to_json(nlohmann::json& j, const Window& w);
Window window_from_json(const nlohmann::json& j, int dim);

}  // namespace wfset

#endif  // WFSET_WINDOWS_HPP
