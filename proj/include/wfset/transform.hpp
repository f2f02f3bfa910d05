#ifndef WFSET_TRANSFORM_HPP
#define WFSET_TRANSFORM_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "wfset/atoms.hpp"
#include "wfset/error.hpp"
#include "wfset/geometry.hpp"
#include "wfset/grid.hpp"
#include "wfset/types.hpp"
#include "wfset/windows.hpp"

namespace wfset {

inline bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place radix-2 decimation-in-time FFT, e^{∓2πikm/n} (forward: minus).
/// Unnormalized in both directions.
template <typename Scalar>
void fft_inplace(std::complex<Scalar>* data, Eigen::Index n, bool inverse = false, Eigen::Index stride = 1) {
  if (!is_power_of_two(n)) throw Error(ErrorKind::InvalidArgument, "fft: size must be a power of two");
  auto at = [&](Eigen::Index i) -> std::complex<Scalar>& { return data[i * stride]; };
  for (Eigen::Index i = 1, j = 0; i < n; ++i) {
    Eigen::Index bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(at(i), at(j));
  }
  const Scalar sign = inverse ? Scalar(1) : Scalar(-1);
  for (Eigen::Index len = 2; len <= n; len <<= 1) {
    const Scalar ang = sign * Scalar(2) * std::numbers::pi_v<Scalar> / static_cast<Scalar>(len);
    const Eigen::Index half = len / 2;
    for (Eigen::Index k = 0; k < half; ++k) {
      // Twiddles from the exact angle rather than a running product keep
      // round-off independent of n.
      const std::complex<Scalar> w = std::polar(Scalar(1), ang * static_cast<Scalar>(k));
      for (Eigen::Index i = k; i < n; i += len) {
        const std::complex<Scalar> u = at(i);
        const std::complex<Scalar> v = at(i + half) * w;
        at(i) = u + v;
        at(i + half) = u - v;
      }
    }
  }
}

template <typename Scalar>
void fft(Vec<std::complex<Scalar>>& x, bool inverse = false) {
  fft_inplace(x.data(), x.size(), inverse);
}

/// Row-major n×n transform stored in a flat vector.
template <typename Scalar>
void fft2(Vec<std::complex<Scalar>>& x, Eigen::Index n, bool inverse = false) {
  if (x.size() != n * n) throw Error(ErrorKind::InvalidArgument, "fft2: size mismatch");
  for (Eigen::Index r = 0; r < n; ++r) fft_inplace(x.data() + r * n, n, inverse);
  for (Eigen::Index c = 0; c < n; ++c) fft_inplace(x.data() + c, n, inverse, n);
}

/// Signed DFT index: k for k < n/2, k − n otherwise.
inline Eigen::Index signed_index(Eigen::Index k, Eigen::Index n) { return k < n / 2 ? k : k - n; }

/// f̂ on the DFT frequency lattice of a sample grid, (2π)^{−d/2} convention.
struct Spectrum {
  SampleGrid grid;
  ComplexVec values;  // FFT order along each axis, row-major in 2D

  double frequency_step() const { return kTwoPi / (grid.n * grid.step()); }
  double frequency(Eigen::Index k) const { return frequency_step() * static_cast<double>(signed_index(k, grid.n)); }
  Point xi(Eigen::Index flat) const;
  /// Σ|F|²·Δξ^d.
  double energy() const;
};

Spectrum dft(const ComplexVec& samples, const SampleGrid& grid);
Spectrum dft(const Atom& a, const SampleGrid& grid);
/// Inverse of dft.
ComplexVec idft(const Spectrum& s);

/// Σ|f|²·dx^d.
double sample_energy(const ComplexVec& samples, const SampleGrid& grid);

/// Evaluates (2π)^{−d/2}Σ f(x_m)e^{−i⟨ξ,x_m⟩}dx^d at arbitrary ξ, touching only
/// the bounding box of the nonzero samples.
class SampledFourier {
 public:
  SampledFourier(const ComplexVec& samples, const SampleGrid& grid);
  Complex operator()(const Eigen::Ref<const Point>& xi) const;
  bool is_zero() const { return zero_; }
  int dim() const { return grid_.dim; }

 private:
  SampleGrid grid_;
  bool zero_ = true;
  int lo0_ = 0, lo1_ = 0;
  ComplexMat block_;  // nonzero bounding box (rows: axis 0)
  RealVec x0_, x1_;
};

/// V_φf on (εΛ₁) × Λ₂, stored for a subset of space nodes.
///
/// ξ_l = b·l with l ∈ [−M/2, M/2)^d, where M·dx = 2π/b is the segment length;
/// values(i, l) belongs to space node `nodes[i]` (integer lattice index j,
/// position ε·a·j) and frequency index l in row-major order.
struct StftGrid {
  SampleGrid grid;
  double space_step = 1.0;  // a
  double frequency_step = kPi;  // b
  double eps = 1.0;
  int segment = 0;  // M
  std::vector<Eigen::VectorXi> nodes;
  ComplexMat values;
  std::string window_id;

  Eigen::Index frequency_count() const { return values.cols(); }
  Point x(std::size_t i) const { return eps * space_step * nodes[i].cast<double>(); }
  Point xi(Eigen::Index l) const;
  /// Inner-product weight (εab)^d of the phase-space Riemann sum.
  double cell() const { return std::pow(eps * space_step * frequency_step, grid.dim); }
};

/// Segment length M (samples) for frequency step b; throws unless 2π/b is a
/// power-of-two multiple of the sample step.
int segment_samples(const SampleGrid& grid, double frequency_step);

/// All lattice indices j whose window translate φ^ε(·−εaj) meets the box
/// [lo, hi] (padded by the window support).
std::vector<Eigen::VectorXi> nodes_meeting(const Point& lo, const Point& hi, double support_radius, double spacing);

/// STFT of samples. When `nodes` is empty every node whose window meets the
/// nonzero part of the samples is used.
StftGrid stft(const ComplexVec& samples, const SampleGrid& grid, const Window& w, const LatticePair& pair, double eps,
              std::vector<Eigen::VectorXi> nodes = {});
StftGrid stft(const Atom& f, const SampleGrid& grid, const Window& w, const LatticePair& pair, double eps);

/// Discrete V*_φ: (2π)^{−d/2}(εab)^d Σ F_{jl} φ^ε(y−εx_j)e^{i⟨ξ_l,y⟩}.
ComplexVec stft_adjoint(const StftGrid& F, const Window& w);

/// ⟨F, G⟩ with the phase-space cell weight; ⟨f, g⟩ with dx^d.
Complex phase_space_inner(const StftGrid& F, const StftGrid& G);
Complex sample_inner(const ComplexVec& f, const ComplexVec& g, const SampleGrid& grid);

struct DecayProbe {
  double h_fit = 0.0;    // x-decay rate against |x|^{1/s} (positive: decays)
  double eps_fit = 0.0;  // ξ-growth rate against |ξ|^{1/s} (negative: decays)
  int x_points = 0;
  int xi_points = 0;
};

/// Fits log|V| against −|x|^{1/s} at the smallest |ξ| and against |ξ|^{1/s}
/// at the space node carrying the most energy. Values below 1e-14 of the
/// peak are excluded; fewer than three usable points throws InsufficientRange.
DecayProbe stft_decay_probe(const Atom& f, const Window& w, double s, const SampleGrid& grid,
                            const LatticePair& pair);

/// Least-squares line through (x, y); returns {slope, intercept}.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wfset

#endif  // WFSET_TRANSFORM_HPP
