#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../corpus.hpp"
#include "wfset/error.hpp"
#include "wfset/transform.hpp"

using namespace wfset;

namespace {

// (2π)^{-1/2}·‖φ‖₂² for φ = gevrey_bump(1.5, 0.75), from 30-digit quadrature.
constexpr double kSelfPairing = 0.456113443007186613;

Eigen::Index column_of(const StftGrid& v, double xi) {
  for (Eigen::Index l = 0; l < v.frequency_count(); ++l)
    if (std::abs(v.xi(l)[0] - xi) < 1e-9) return l;
  return -1;
}

std::size_t row_of(const StftGrid& v, int j) {
  for (std::size_t i = 0; i < v.nodes.size(); ++i)
    if (v.nodes[i][0] == j) return i;
  return v.nodes.size();
}

}  // namespace

TEST(Fft, MatchesNaiveDft) {
  std::mt19937 rng(1);
  std::normal_distribution<double> n;
  ComplexVec x(64);
  for (auto& v : x) v = Complex(n(rng), n(rng));
  ComplexVec y = x;
  fft(y);
  for (int k = 0; k < 64; ++k) {
    Complex s = 0;
    for (int m = 0; m < 64; ++m) s += x[m] * std::polar(1.0, -kTwoPi * k * m / 64);
    EXPECT_NEAR(std::abs(y[k] - s), 0.0, 1e-11);
  }
  ComplexVec bad(12);
  EXPECT_THROW(fft(bad), Error);
}

TEST(Dft, ConstantGivesSpike) {
  const SampleGrid g{1, 256, 4.0};
  const Spectrum s = dft(ComplexVec::Ones(256), g);
  EXPECT_GT(std::abs(s.values[0]), 1.0);
  EXPECT_LT(s.values.tail(255).cwiseAbs().maxCoeff(), 1e-12 * std::abs(s.values[0]));
}

TEST(Dft, GaussianStaysGaussian) {
  const SampleGrid g = default_grid(1);
  const Spectrum s = dft(Atom::gaussian(0.4, Point::Zero(1)), g);
  EXPECT_NEAR(s.values[0].real(), 0.4, 1e-12);
  for (Eigen::Index k : {3, 10, 25}) {
    const double xi = s.frequency(k);
    EXPECT_NEAR(std::abs(s.values[k]) / std::abs(s.values[0]), std::exp(-0.08 * xi * xi), 1e-6);
  }
}

TEST(Dft, DeltaIsFlat) {
  const SampleGrid g = default_grid(1);
  const Spectrum s = dft(Atom::delta(point1(0.5)), g);
  const Eigen::ArrayXd m = s.values.array().abs();
  EXPECT_NEAR(m.minCoeff(), fourier_norm(1), 1e-12);
  EXPECT_NEAR(m.maxCoeff(), fourier_norm(1), 1e-12);
}

TEST(Dft, RoundTripAndParseval) {
  for (const auto& e : corpus::all()) {
    const SampleGrid g = default_grid(e.atom.dim());
    const ComplexVec f = e.atom.sample(g);
    const Spectrum s = dft(f, g);
    EXPECT_LE((idft(s) - f).norm(), 1e-12 * f.norm()) << e.atom.name();
    EXPECT_NEAR(s.energy() / sample_energy(f, g), 1.0, 1e-9) << e.atom.name();
  }
  EXPECT_THROW(dft(ComplexVec::Zero(100), SampleGrid{1, 100, 1.0}), Error);
}

TEST(Stft, WindowAgainstItself) {
  const SampleGrid g = default_grid(1);
  const Window w = Window::gevrey_bump(1.5, 0.75);
  const StftGrid v = stft(Atom::gevrey_bump(1.5, 0.75, Point::Zero(1)), g, w, make_pair(0.5, kPi / 2, 1), 1.0);
  const std::size_t j0 = row_of(v, 0);
  const Eigen::Index l0 = column_of(v, 0.0);
  ASSERT_LT(j0, v.nodes.size());
  ASSERT_GE(l0, 0);
  EXPECT_NEAR(v.values(j0, l0).real(), kSelfPairing, 1e-10);
}

TEST(Stft, DeltaModulusIsWindow) {
  const SampleGrid g = default_grid(1);
  const Window w = Window::gevrey_bump(2.0, 1.0);
  const double x0 = g.coord(g.nearest(0.3));  // masses sit on grid nodes
  const StftGrid v = stft(Atom::delta(point1(0.3)), g, w, make_pair(0.5, kPi / 2, 1), 1.0);
  for (std::size_t i = 0; i < v.nodes.size(); ++i) {
    const double expect = fourier_norm(1) * w(x0 - v.x(i)[0]);
    const Eigen::ArrayXd row = v.values.row(static_cast<Eigen::Index>(i)).array().abs();
    EXPECT_NEAR(row.maxCoeff(), expect, 1e-12);
    EXPECT_NEAR(row.minCoeff(), expect, 1e-12);
    if (std::abs(x0 - v.x(i)[0]) >= 1.0) EXPECT_EQ(row.maxCoeff(), 0.0);
  }
}

TEST(Stft, GaussianByGaussian) {
  // |V| = c·e^{−x²/(2(α²+β²))}·e^{−c²ξ²/2} with c = αβ/√(α²+β²).
  const double al = 0.3, be = 0.2, c = al * be / std::hypot(al, be);
  const SampleGrid g = default_grid(1);
  const StftGrid v = stft(Atom::gaussian(al, Point::Zero(1)), g, Window::gaussian(be), make_pair(0.25, kPi / 2, 1), 1.0);
  for (int j : {0, 1, 2}) {
    const std::size_t r = row_of(v, j);
    ASSERT_LT(r, v.nodes.size());
    for (double xi : {0.0, kPi / 2, 3 * kPi}) {
      const double x = v.x(r)[0];
      const double expect = c * std::exp(-x * x / (2 * (al * al + be * be))) * std::exp(-c * c * xi * xi / 2);
      EXPECT_NEAR(std::abs(v.values(static_cast<Eigen::Index>(r), column_of(v, xi))) / expect, 1.0, 1e-6);
    }
  }
}

TEST(Stft, WindowTooWideForSegment) {
  const SampleGrid g = default_grid(1);
  try {
    stft(corpus::bump(), g, Window::gevrey_bump(2.0, 1.5), make_pair(1.0, kPi, 1), 1.0);
    FAIL() << "expected an overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WindowOverflow);
  }
}

TEST(Adjoint, ZeroAndIdentity) {
  const SampleGrid g = default_grid(1);
  const Window w = Window::gevrey_bump(1.5, 0.75);
  const LatticePair pair = make_pair(0.5, kPi / 2, 1);
  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  ComplexVec h = ComplexVec::Zero(g.size());
  for (int m = g.nearest(-1.0); m <= g.nearest(1.0); ++m) h[m] = Complex(n(rng), n(rng));
  const StftGrid vh = stft(h, g, w, pair, 0.5);
  StftGrid F = vh;
  F.values.setZero();
  EXPECT_EQ(stft_adjoint(F, w).cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < F.values.size(); ++i) F.values.data()[i] = Complex(n(rng), n(rng));
  const Complex lhs = sample_inner(stft_adjoint(F, w), h, g);
  const Complex rhs = phase_space_inner(F, vh);
  EXPECT_LE(std::abs(lhs - rhs), 1e-8 * std::abs(rhs));
}

TEST(Adjoint, InvertsUpToPartitionOfSquares) {
  const SampleGrid g = default_grid(1);
  const Window w = Window::gevrey_bump(2.0, 0.9);
  const LatticePair pair = make_pair(0.5, kPi / 2, 1);
  const ComplexVec f = corpus::bump().sample(g);
  const ComplexVec back = stft_adjoint(stft(f, g, w, pair, 1.0), w);
  ComplexVec expect(f.size());
  for (Eigen::Index m = 0; m < f.size(); ++m) expect[m] = 0.5 * w.lattice_square_sum(g.node(m), 0.5) * f[m];
  EXPECT_LE((back - expect).norm(), 1e-10 * expect.norm());
}

TEST(DecayProbe, DeltaAndBump) {
  const SampleGrid g = default_grid(1);
  const LatticePair pair = make_pair(0.5, kPi / 2, 1);
  const DecayProbe d = stft_decay_probe(Atom::delta(point1(0.0)), Window::gevrey_bump(2.0, 1.0), 2.0, g, pair);
  EXPECT_NEAR(d.eps_fit, 0.0, 1e-3);
  const DecayProbe b = stft_decay_probe(corpus::bump(), Window::gaussian(0.15), 2.0, g, pair);
  EXPECT_LT(b.eps_fit, 0.0);
  EXPECT_GT(b.h_fit, 0.0);
  EXPECT_THROW(stft_decay_probe(Atom::delta(point1(0.0), 0.0), Window::gaussian(0.15), 2.0, g, pair), Error);
}
