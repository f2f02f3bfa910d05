#ifndef WFSET_WAVEFRONT_HPP
#define WFSET_WAVEFRONT_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfset/atoms.hpp"
#include "wfset/gabor.hpp"
#include "wfset/geometry.hpp"
#include "wfset/seminorms.hpp"
#include "wfset/weights.hpp"

namespace wfset {

enum class Detector { WF_FL, WF_Mod, DF_FL, DF_Gabor };
inline constexpr Detector kAllDetectors[] = {Detector::WF_FL, Detector::WF_Mod, Detector::DF_FL, Detector::DF_Gabor};
const char* to_string(Detector d);
Detector detector_from_string(const std::string& s);

/// Everything a detector run depends on.
struct AnalysisParams {
  int dim = 1;
  double s = 2.0;
  double q = 2.0;
  double p = 2.0;
  std::vector<double> k_grid{0.5, 1.0, 2.0, 4.0};
  SeminormOptions seminorm;
  ConeCover cover = ConeCover::axis_aligned(1, 1.0);
  /// Γ₀ = shrink(Γ, fraction·half_angle) for the discrete detectors.
  double shrink_fraction = 0.25;
  Window cutoff = Window::gevrey_bump(1.5, 0.45, 1);
  std::vector<Window> cutoff_family;
  double space_step = 1.0;                // a
  double frequency_step = kPi / 2.0;      // b
  Window gabor_window = Window::gevrey_bump(1.5, 0.75, 1);
  std::vector<double> eps_list{1.0, 0.5};
  Window stft_window = Window::gevrey_bump(1.5, 0.75, 1);
  double stft_space_step = 0.5;
  double stft_frequency_step = kPi / 2.0;
  MixedOrder order = MixedOrder::Mpq;
  SampleGrid grid = default_grid(1);
  unsigned seed = 1;

  std::vector<Weight> weights() const;
  LatticePair pair() const { return make_pair(space_step, frequency_step, dim); }
  LatticePair stft_pair() const { return make_pair(stft_space_step, stft_frequency_step, dim); }
  Cone inner_cone(const Cone& c) const { return c.shrink(shrink_fraction * c.half_angle()); }
  nlohmann::json to_json() const;
};

/// Defaults for d ∈ {1, 2} at analysis order s. The cut-off has Gevrey order
/// 1 + (s−1)/2 and radius 0.45·a; the cut-off family adds radii {0.6, 1.0}
/// at that order and at a lower one.
AnalysisParams default_params(int dim, double s = 2.0);

/// One (point, cone, detector, k) verdict.
struct Cell {
  int point = 0;
  int cone = 0;
  Detector detector = Detector::WF_FL;
  double k = 0.0;
  Verdict verdict = Verdict::Indeterminate;
  double tail_slope = 0.0;
  nlohmann::json diagnostics;
};

/// Verdict of the intersection over k.
struct WfsCell {
  int point = 0;
  int cone = 0;
  Verdict verdict = Verdict::Indeterminate;  // singular: in the WF_s estimate
  std::vector<Verdict> k_verdicts;
  bool monotone = true;
  double decay_exponent = 0.0;  // fitted a in log|f̂| ≈ a·|ξ|^{1/s} + b·log|ξ| + c
};

/// Verdict of a localized copy g·f at a parent cell.
struct MicroCell {
  std::string cutoff;
  int point = 0;
  int cone = 0;
  double k = 0.0;
  Verdict verdict = Verdict::Indeterminate;
  Verdict parent = Verdict::Indeterminate;
  double tail_slope = 0.0;
};

struct WavefrontReport {
  std::string atom;
  int dim = 1;
  AnalysisParams params;
  std::vector<Point> points;
  std::vector<Cell> cells;
  std::vector<WfsCell> wf_s;
  std::vector<MicroCell> microlocal;

  const Cell* find(int point, int cone, Detector d, double k) const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Per-detector results for one point: results[cone][weight].
using ConeResults = std::vector<std::vector<ConeSeminormResult>>;

ConeResults detect_wf_fl(const Atom& f, const Point& x0, const ConeCover& cover, const std::vector<Weight>& w, double q,
                         const Window& cutoff, const SeminormOptions& opt, const SampleGrid& grid);
ConeResults detect_wf_mod(const Atom& f, const Point& x0, const ConeCover& cover, const std::vector<Weight>& w,
                          double p, double q, const Window& window, const LatticePair& pair, const Window& cutoff,
                          MixedOrder order, const SeminormOptions& opt, const SampleGrid& grid);
/// Discrete cones are the shrunken Γ₀ = shrink(Γ, fraction·half_angle).
ConeResults detect_df_fl(const Atom& f, const Point& x0, const ConeCover& cover, const std::vector<Weight>& w, double q,
                         const LatticePair& pair, const Window& cutoff, double shrink_fraction,
                         const SeminormOptions& opt, const SampleGrid& grid);

/// Gabor verdicts per ε and combined: regular if some ε is regular, singular
/// if every ε is singular. The combined tail slope is the minimum over ε.
struct GaborResults {
  ConeResults combined;
  std::vector<ConeResults> per_eps;
  std::vector<std::size_t> index_set_sizes;
};
GaborResults detect_df_gabor(const Atom& f, const Point& x0, const ConeCover& cover, const std::vector<Weight>& w,
                             double p, double q, const std::vector<GaborSystem>& systems, double shrink_fraction,
                             const SeminormOptions& opt, const SampleGrid& grid);

/// Intersection over k of WF_FL verdicts at one point, one entry per cone.
std::vector<WfsCell> estimate_wf_s(const Atom& f, const Point& x0, const ConeCover& cover, double s,
                                   const std::vector<double>& k_grid, double q, const Window& cutoff,
                                   const SeminormOptions& opt, const SampleGrid& grid);

struct DecayFit {
  double a = 0.0;        // coefficient of |ξ|^{1/s}
  double b = 0.0;        // coefficient of log|ξ|
  double c = 0.0;
  double residual = 0.0; // RMS of the fit
  int points = 0;
};

/// Fits log(annulus RMS of |ĥ|) ≈ a·u + b·log u + c with u = R^{1/s} over
/// annuli with outer radius ≥ r_min, for h = cutoff(·−x0)·f on one cone.
DecayFit fit_decay_exponent(const Atom& f, const Point& x0, const Cone& cone, double s, const Window& cutoff,
                            const SeminormOptions& opt, const SampleGrid& grid, double r_min = 16.0);

/// Runs every detector, the WF_s estimate and the micro-locality family.
WavefrontReport analyze(const Atom& f, const std::vector<Point>& points, const AnalysisParams& params,
                        unsigned threads = 0);

struct CrosscheckSummary {
  bool pass = true;
  int scored = 0;         // (point, cone, k) cells where all four verdicts are decided
  int indeterminate = 0;  // detector cells that are indeterminate
  int total = 0;          // detector cells
  int agreement[4][4] = {};
  int compared[4][4] = {};
  std::vector<std::string> disagreements;
  std::vector<std::string> micro_violations;
  std::vector<std::string> k_violations;
  std::vector<std::string> q_violations;

  nlohmann::json to_json() const;
};

/// Agreement matrix, micro-locality and k-monotonicity. When `other_q` is
/// given (same atom and points, larger q), q-monotonicity is also checked.
CrosscheckSummary crosscheck(const WavefrontReport& report, const WavefrontReport* larger_q = nullptr);

/// Deterministic parallel map: results[i] = fn(i), with at most `threads`
/// workers (0: hardware concurrency).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace wfset

#endif  // WFSET_WAVEFRONT_HPP
