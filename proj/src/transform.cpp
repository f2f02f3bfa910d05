#include "wfset/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wfset {

namespace {

// e^{−iθ·m} for m = 0..n−1 by recurrence, re-anchored every 64 steps.
void phase_run(double start_angle, double step_angle, Eigen::Index n, ComplexVec& out) {
  out.resize(n);
  Complex w = std::polar(1.0, step_angle);
  Complex cur;
  for (Eigen::Index m = 0; m < n; ++m) {
    if (m % 64 == 0) cur = std::polar(1.0, start_angle + step_angle * static_cast<double>(m));
    out[m] = cur;
    cur *= w;
  }
}

// Index of the grid node at coordinate x, or throws when x is off-grid.
int exact_node(const SampleGrid& g, double x) {
  const double t = (x + g.half_width) / g.step();
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-6)
    throw Error(ErrorKind::InvalidArgument, "stft: lattice node " + std::to_string(x) + " is not a grid node");
  return static_cast<int>(r);
}

std::pair<Point, Point> nonzero_box(const ComplexVec& samples, const SampleGrid& grid) {
  Point lo = Point::Constant(grid.dim, std::numeric_limits<double>::infinity());
  Point hi = Point::Constant(grid.dim, -std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (samples[i] == Complex(0.0)) continue;
    const Point p = grid.node(i);
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {lo, hi};
}

}  // namespace

Point Spectrum::xi(Eigen::Index flat) const {
  if (grid.dim == 1) return point1(frequency(flat));
  return point2(frequency(flat / grid.n), frequency(flat % grid.n));
}

double Spectrum::energy() const { return values.squaredNorm() * std::pow(frequency_step(), grid.dim); }

double sample_energy(const ComplexVec& samples, const SampleGrid& grid) { return samples.squaredNorm() * grid.cell(); }

Spectrum dft(const ComplexVec& samples, const SampleGrid& grid) {
  grid.validate();
  if (samples.size() != grid.size()) throw Error(ErrorKind::InvalidArgument, "dft: sample count does not match grid");
  Spectrum s{grid, samples};
  if (grid.dim == 1) fft(s.values); else fft2(s.values, grid.n);
  const double scale = fourier_norm(grid.dim) * grid.cell();
  // x_m = −L + m·dx contributes e^{iξL} per axis.
  ComplexVec shift(grid.n);
  for (int k = 0; k < grid.n; ++k) shift[k] = std::polar(1.0, s.frequency(k) * grid.half_width);
  if (grid.dim == 1) {
    s.values = (s.values.array() * shift.array() * scale).matrix();
  } else {
    for (int r = 0; r < grid.n; ++r)
      for (int c = 0; c < grid.n; ++c) s.values[grid.flat(r, c)] *= scale * shift[r] * shift[c];
  }
  return s;
}

Spectrum dft(const Atom& a, const SampleGrid& grid) { return dft(a.sample(grid), grid); }

ComplexVec idft(const Spectrum& s) {
  const SampleGrid& g = s.grid;
  ComplexVec v = s.values;
  ComplexVec unshift(g.n);
  for (int k = 0; k < g.n; ++k) unshift[k] = std::polar(1.0, -s.frequency(k) * g.half_width);
  const double scale = 1.0 / (fourier_norm(g.dim) * g.cell() * std::pow(static_cast<double>(g.n), g.dim));
  if (g.dim == 1) {
    v = (v.array() * unshift.array() * scale).matrix();
    fft(v, true);
  } else {
    for (int r = 0; r < g.n; ++r)
      for (int c = 0; c < g.n; ++c) v[g.flat(r, c)] *= scale * unshift[r] * unshift[c];
    fft2(v, g.n, true);
  }
  return v;
}

SampledFourier::SampledFourier(const ComplexVec& samples, const SampleGrid& grid) : grid_(grid) {
  const auto [lo, hi] = nonzero_box(samples, grid);
  if (!(lo[0] <= hi[0])) return;
  zero_ = false;
  lo0_ = grid.nearest(lo[0]);
  const int hi0 = grid.nearest(hi[0]);
  x0_.resize(hi0 - lo0_ + 1);
  for (int m = lo0_; m <= hi0; ++m) x0_[m - lo0_] = grid.coord(m);
  if (grid.dim == 1) {
    block_ = samples.segment(lo0_, hi0 - lo0_ + 1);
  } else {
    lo1_ = grid.nearest(lo[1]);
    const int hi1 = grid.nearest(hi[1]);
    x1_.resize(hi1 - lo1_ + 1);
    for (int m = lo1_; m <= hi1; ++m) x1_[m - lo1_] = grid.coord(m);
    block_.resize(x0_.size(), x1_.size());
    for (Eigen::Index r = 0; r < block_.rows(); ++r)
      for (Eigen::Index c = 0; c < block_.cols(); ++c)
        block_(r, c) = samples[grid.flat(lo0_ + static_cast<int>(r), lo1_ + static_cast<int>(c))];
  }
}

Complex SampledFourier::operator()(const Eigen::Ref<const Point>& xi) const {
  if (zero_) return 0.0;
  const double h = grid_.step();
  const double scale = fourier_norm(grid_.dim) * grid_.cell();
  ComplexVec e0;
  phase_run(-xi[0] * x0_[0], -xi[0] * h, x0_.size(), e0);
  if (grid_.dim == 1) return scale * e0.transpose() * block_.col(0);
  ComplexVec e1;
  phase_run(-xi[1] * x1_[0], -xi[1] * h, x1_.size(), e1);
  return scale * (e0.transpose() * block_ * e1)(0, 0);
}

Point StftGrid::xi(Eigen::Index l) const {
  const int d = grid.dim;
  if (d == 1) return point1(frequency_step * static_cast<double>(l - segment / 2));
  return point2(frequency_step * static_cast<double>(l / segment - segment / 2),
                frequency_step * static_cast<double>(l % segment - segment / 2));
}

int segment_samples(const SampleGrid& grid, double frequency_step) {
  if (!(frequency_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "frequency step must be positive");
  const double m = kTwoPi / (frequency_step * grid.step());
  const long M = std::lround(m);
  if (std::abs(m - static_cast<double>(M)) > 1e-6 * m || !is_power_of_two(M))
    throw Error(ErrorKind::InvalidArgument,
                "frequency step b = " + std::to_string(frequency_step) +
                    " is not grid-commensurate: 2π/b must be a power-of-two multiple of dx = " +
                    std::to_string(grid.step()));
  return static_cast<int>(M);
}

std::vector<Eigen::VectorXi> nodes_meeting(const Point& lo, const Point& hi, double r, double spacing) {
  const int d = static_cast<int>(lo.size());
  std::vector<std::pair<int, int>> range(d);
  for (int i = 0; i < d; ++i) {
    // Open support ball: |c − y| < r for some y in the box.
    range[i] = {static_cast<int>(std::floor((lo[i] - r) / spacing)) + 1,
                static_cast<int>(std::ceil((hi[i] + r) / spacing)) - 1};
  }
  std::vector<Eigen::VectorXi> out;
  if (d == 1) {
    for (int j = range[0].first; j <= range[0].second; ++j) out.push_back(Eigen::VectorXi::Constant(1, j));
    return out;
  }
  for (int j0 = range[0].first; j0 <= range[0].second; ++j0)
    for (int j1 = range[1].first; j1 <= range[1].second; ++j1) {
      Eigen::VectorXi j(2);
      j << j0, j1;
      const Point c = spacing * j.cast<double>();
      const Point nearest = c.cwiseMax(lo).cwiseMin(hi);
      if ((c - nearest).norm() < r) out.push_back(j);
    }
  return out;
}

namespace {

// Window values on one segment, relative to the node at index M/2.
RealVec segment_window(const SampleGrid& grid, const Window& w, int M) {
  const int d = grid.dim;
  const double h = grid.step();
  RealVec out(d == 1 ? M : static_cast<Eigen::Index>(M) * M);
  if (d == 1) {
    for (int m = 0; m < M; ++m) out[m] = w((m - M / 2) * h);
  } else {
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b) out[static_cast<Eigen::Index>(a) * M + b] = w(point2((a - M / 2) * h, (b - M / 2) * h));
  }
  return out;
}

void check_window_fits(const SampleGrid& grid, const Window& w, int M) {
  const double diam = 2.0 * w.support_radius();
  if (diam > 2.0 * grid.half_width)
    throw Error(ErrorKind::WindowOverflow, "window support diameter " + std::to_string(diam) +
                                               " exceeds the sample box; required half-width >= " +
                                               std::to_string(0.5 * diam));
  if (diam >= M * grid.step())
    throw Error(ErrorKind::WindowOverflow, "window support diameter " + std::to_string(diam) +
                                               " exceeds the segment 2π/b = " + std::to_string(M * grid.step()) +
                                               "; required b < " + std::to_string(kTwoPi / diam));
}

}  // namespace

StftGrid stft(const ComplexVec& samples, const SampleGrid& grid, const Window& w, const LatticePair& pair, double eps,
              std::vector<Eigen::VectorXi> nodes) {
  grid.validate();
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::InvalidArgument, "stft: eps must lie in (0, 1]");
  if (pair.dim() != grid.dim) throw Error(ErrorKind::InvalidArgument, "stft: lattice and grid dimensions differ");
  const Window we = w.dilated(eps);
  StftGrid out;
  out.grid = grid;
  out.space_step = pair.space_step();
  out.frequency_step = pair.frequency_step();
  out.eps = eps;
  out.segment = segment_samples(grid, out.frequency_step);
  out.window_id = we.id();
  const int M = out.segment;
  const int d = grid.dim;
  check_window_fits(grid, we, M);
  if (nodes.empty()) {
    const auto [lo, hi] = nonzero_box(samples, grid);
    if (lo[0] <= hi[0]) nodes = nodes_meeting(lo, hi, we.support_radius(), eps * out.space_step);
  }
  out.nodes = nodes;
  const Eigen::Index F = d == 1 ? M : static_cast<Eigen::Index>(M) * M;
  out.values = ComplexMat::Zero(static_cast<Eigen::Index>(nodes.size()), F);
  const RealVec win = segment_window(grid, we, M);
  const double scale = fourier_norm(d) * grid.cell();

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Point c = out.x(i);
    std::vector<int> m0(d);
    for (int a = 0; a < d; ++a) m0[a] = exact_node(grid, c[a]) - M / 2;
    ComplexVec seg = ComplexVec::Zero(F);
    if (d == 1) {
      for (int m = 0; m < M; ++m) {
        const int idx = m0[0] + m;
        if (grid.inside(idx) && win[m] != 0.0) seg[m] = samples[idx] * win[m];
      }
      fft(seg);
    } else {
      for (int a = 0; a < M; ++a) {
        const int ia = m0[0] + a;
        if (!grid.inside(ia)) continue;
        for (int b = 0; b < M; ++b) {
          const int ib = m0[1] + b;
          const Eigen::Index k = static_cast<Eigen::Index>(a) * M + b;
          if (grid.inside(ib) && win[k] != 0.0) seg[k] = samples[grid.flat(ia, ib)] * win[k];
        }
      }
      fft2(seg, M);
    }
    // Column r holds l = r − M/2, i.e. FFT bin (r + M/2) mod M; segment origin y0.
    std::vector<double> y0(d);
    for (int a = 0; a < d; ++a) y0[a] = grid.coord(m0[a]);
    ComplexVec ph0(M), ph1(M);
    for (int r = 0; r < M; ++r) {
      const double xi = out.frequency_step * (r - M / 2);
      ph0[r] = std::polar(scale, -xi * y0[0]);
      if (d == 2) ph1[r] = std::polar(1.0, -xi * y0[1]);
    }
    if (d == 1) {
      for (int r = 0; r < M; ++r) out.values(i, r) = seg[(r + M / 2) % M] * ph0[r];
    } else {
      for (int r = 0; r < M; ++r)
        for (int t = 0; t < M; ++t)
          out.values(i, static_cast<Eigen::Index>(r) * M + t) =
              seg[static_cast<Eigen::Index>((r + M / 2) % M) * M + (t + M / 2) % M] * ph0[r] * ph1[t];
    }
  }
  return out;
}

StftGrid stft(const Atom& f, const SampleGrid& grid, const Window& w, const LatticePair& pair, double eps) {
  return stft(f.sample(grid), grid, w, pair, eps);
}

ComplexVec stft_adjoint(const StftGrid& F, const Window& w) {
  const SampleGrid& grid = F.grid;
  const int d = grid.dim;
  const int M = F.segment;
  const Window we = w.dilated(F.eps);
  const RealVec win = segment_window(grid, we, M);
  ComplexVec out = ComplexVec::Zero(grid.size());
  const double scale = fourier_norm(d) * F.cell();
  const Eigen::Index Fn = F.values.cols();
  for (std::size_t i = 0; i < F.nodes.size(); ++i) {
    const Point c = F.x(i);
    std::vector<int> m0(d);
    for (int a = 0; a < d; ++a) m0[a] = exact_node(grid, c[a]) - M / 2;
    std::vector<double> y0(d);
    for (int a = 0; a < d; ++a) y0[a] = grid.coord(m0[a]);
    ComplexVec seg = ComplexVec::Zero(Fn);
    if (d == 1) {
      for (int r = 0; r < M; ++r)
        seg[(r + M / 2) % M] = F.values(i, r) * std::polar(scale, F.frequency_step * (r - M / 2) * y0[0]);
      fft(seg, true);
      for (int m = 0; m < M; ++m) {
        const int idx = m0[0] + m;
        if (grid.inside(idx) && win[m] != 0.0) out[idx] += seg[m] * win[m];
      }
    } else {
      for (int r = 0; r < M; ++r)
        for (int t = 0; t < M; ++t) {
          const double phase = F.frequency_step * ((r - M / 2) * y0[0] + (t - M / 2) * y0[1]);
          seg[static_cast<Eigen::Index>((r + M / 2) % M) * M + (t + M / 2) % M] =
              F.values(i, static_cast<Eigen::Index>(r) * M + t) * std::polar(scale, phase);
        }
      fft2(seg, M, true);
      for (int a = 0; a < M; ++a) {
        const int ia = m0[0] + a;
        if (!grid.inside(ia)) continue;
        for (int b = 0; b < M; ++b) {
          const int ib = m0[1] + b;
          const Eigen::Index k = static_cast<Eigen::Index>(a) * M + b;
          if (grid.inside(ib) && win[k] != 0.0) out[grid.flat(ia, ib)] += seg[k] * win[k];
        }
      }
    }
  }
  return out;
}

Complex phase_space_inner(const StftGrid& F, const StftGrid& G) {
  if (F.values.rows() != G.values.rows() || F.values.cols() != G.values.cols())
    throw Error(ErrorKind::InvalidArgument, "phase_space_inner: incompatible grids");
  return (F.values.array() * G.values.array().conjugate()).sum() * F.cell();
}

Complex sample_inner(const ComplexVec& f, const ComplexVec& g, const SampleGrid& grid) {
  return (f.array() * g.array().conjugate()).sum() * grid.cell();
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorKind::InsufficientRange, "fit_line: need at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InsufficientRange, "fit_line: abscissae coincide");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

DecayProbe stft_decay_probe(const Atom& f, const Window& w, double s, const SampleGrid& grid,
                            const LatticePair& pair) {
  const ComplexVec samples = f.sample(grid);
  const auto [lo, hi] = f.support_box();
  const Point center = 0.5 * (lo + hi);
  // Every lattice node of the box, so the x-decay beyond the support is visible.
  const double spacing = pair.space_step();
  std::vector<Eigen::VectorXi> nodes =
      nodes_meeting(Point::Constant(grid.dim, -grid.half_width + spacing),
                    Point::Constant(grid.dim, grid.half_width - spacing), 0.5 * spacing, spacing);
  const StftGrid V = stft(samples, grid, w, pair, 1.0, nodes);
  const int M = V.segment;
  const Eigen::Index l0 = grid.dim == 1 ? M / 2 : static_cast<Eigen::Index>(M / 2) * M + M / 2;
  const double peak = V.values.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw Error(ErrorKind::InsufficientRange, "stft_decay_probe: transform vanishes");
  const double floor = 1e-14 * peak;

  DecayProbe out;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < V.nodes.size(); ++i) {
    const double v = std::abs(V.values(i, l0));
    if (v <= floor) continue;
    xs.push_back(-std::pow((V.x(i) - center).norm(), 1.0 / s));
    ys.push_back(std::log(v));
  }
  out.x_points = static_cast<int>(xs.size());
  if (xs.size() >= 3) {
    out.h_fit = fit_line(xs, ys).first;
  } else {
    out.h_fit = std::numeric_limits<double>::infinity();  // exact vanishing outside a compact set
  }

  Eigen::Index best = 0;
  V.values.rowwise().squaredNorm().maxCoeff(&best);
  xs.clear();
  ys.clear();
  for (int r = M / 2 + 1; r < M; ++r) {
    const Eigen::Index l = grid.dim == 1 ? r : static_cast<Eigen::Index>(r) * M + M / 2;
    const double v = std::abs(V.values(best, l));
    if (v <= floor) continue;
    xs.push_back(std::pow(V.xi(l).norm(), 1.0 / s));
    ys.push_back(std::log(v));
  }
  out.xi_points = static_cast<int>(xs.size());
  if (xs.size() < 3)
    throw Error(ErrorKind::InsufficientRange, "stft_decay_probe: fewer than three frequencies above 1e-14 of the peak");
  out.eps_fit = fit_line(xs, ys).first;
  return out;
}

}  // namespace wfset
