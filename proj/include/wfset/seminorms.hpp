#ifndef WFSET_SEMINORMS_HPP
#define WFSET_SEMINORMS_HPP

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfset/atoms.hpp"
#include "wfset/geometry.hpp"
#include "wfset/transform.hpp"
#include "wfset/weights.hpp"

namespace wfset {

enum class Verdict { Regular, Singular, Indeterminate };
const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// slope ≤ −τ: regular; slope ≥ τ: singular; otherwise indeterminate.
Verdict classify(double tail_slope, double tau);

struct SeminormOptions {
  double s = 2.0;         // tail slopes are taken against u = R^{1/s}
  double r_max = 256.0;
  int annuli = 6;         // dyadic annuli below r_max, plus the inner disc
  int fit_annuli = 3;
  double tau = 0.05;
  double stability = 0.01;  // relative change tolerated between node doublings
  int max_doublings = 3;
  double noise_floor = 1e-13;  // relative to the largest |f̂| seen

  /// Annulus boundaries 0 = R_{−1} < R_0 < … < R_{n−1} = r_max.
  std::vector<double> radii() const;
};

struct AnnulusStat {
  double r_inner = 0.0;
  double r_outer = 0.0;
  double log_contribution = 0.0;  // log of the truncated q-th power sum (or log max for q = ∞)
  double log_mean = 0.0;          // (1/q)·log(contribution / measure); log max for q = ∞
  double max_abs = 0.0;           // largest unweighted magnitude in the annulus
  int nodes = 0;
  bool stable = true;
};

/// Truncated cone seminorm with per-annulus bookkeeping.
struct ConeSeminormResult {
  std::vector<std::pair<double, double>> value_at_radius;  // (R, partial value)
  std::vector<AnnulusStat> annuli;
  double q = 2.0;
  std::string weight_id;
  std::string cone_id;
  double tail_slope = 0.0;
  Verdict verdict = Verdict::Indeterminate;
  bool zero = false;         // nothing but zeros: regular
  bool noise_floor = false;  // tail below the floor: regular
  bool flagged = false;      // quadrature did not stabilize

  nlohmann::json to_json() const;
};

std::string cone_id(const Cone& c);

using SpectrumFn = std::function<Complex(const Point&)>;

/// One evaluated node: unweighted |value|, its frequency, and a quadrature weight.
struct NodeValue {
  Point xi;
  double abs = 0.0;
  double weight = 1.0;
};

/// Polar Gauss–Legendre node sets over cone ∩ annulus with cached spectrum
/// values, so several weights and exponents reuse the same evaluations.
class PolarNodes {
 public:
  /// `spread` is the diameter of the function's support; it sets the initial
  /// node density so that oscillations of period 2π/spread are resolved.
  PolarNodes(SpectrumFn f, int dim, double spread);
  const std::vector<NodeValue>& nodes(const Cone& cone, double r_in, double r_out, int level);
  int dim() const { return dim_; }
  bool identically_zero() const { return zero_; }
  void set_zero(bool z) { zero_ = z; }

 private:
  SpectrumFn f_;
  int dim_;
  double spread_;
  bool zero_ = false;
  std::map<std::tuple<double, double, double, double, double, int>, std::vector<NodeValue>> cache_;
};

/// PolarNodes over the sampled Fourier transform of an atom.
PolarNodes polar_nodes(const Atom& f, const SampleGrid& grid);

/// (∫_{Γ, |ξ|≤R} |f̂ω|^q dξ)^{1/q} at the annulus radii, q ∈ [1, ∞].
ConeSeminormResult fl_cone_seminorm(PolarNodes& spectrum, const Cone& cone, const Weight& w, double q,
                                    const SeminormOptions& opt);
ConeSeminormResult fl_cone_seminorm(const Atom& f, const Cone& cone, const Weight& w, double q,
                                    const SeminormOptions& opt, const SampleGrid& grid);

/// Values |f̂(ξ_l)| at lattice points, ordered by |ξ_l|.
std::vector<NodeValue> evaluate_at(const SpectrumFn& f, const std::vector<Point>& H);

/// (Σ_{ξ_l∈H, |ξ_l|≤R} |f̂(ξ_l)ω(ξ_l)|^q)^{1/q}.
ConeSeminormResult fl_discrete_seminorm(const std::vector<NodeValue>& H, const Weight& w, double q,
                                        const SeminormOptions& opt);
ConeSeminormResult fl_discrete_seminorm(const Atom& f, const std::vector<Point>& H, const Weight& w, double q,
                                        const SeminormOptions& opt, const SampleGrid& grid);

enum class MixedOrder { Mpq, Wpq };

/// Mixed norm of V over (all x_j) × (ξ_l ∈ Γ, |ξ_l| ≤ R) with Riemann cell
/// weights (εa)^d and b^d. Mpq sums over x first; Wpq over ξ first.
/// When `rows` is nonempty only those space nodes enter.
ConeSeminormResult mod_cone_seminorm(const StftGrid& V, const Cone& cone, const Weight& w, double p, double q,
                                     MixedOrder order, const SeminormOptions& opt,
                                     const std::vector<Eigen::Index>& rows = {});

/// f·cutoff(· − x0).
Atom localize(const Atom& f, const Window& cutoff, const Point& x0);

/// log(Σ e^{v_i}) without overflow; −∞ for an empty or all −∞ input.
double log_sum_exp(const std::vector<double>& v);

}  // namespace wfset

#endif  // WFSET_SEMINORMS_HPP
