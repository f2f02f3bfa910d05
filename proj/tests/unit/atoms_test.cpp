#include <gtest/gtest.h>

#include <cmath>

#include "../corpus.hpp"
#include "wfset/atoms.hpp"
#include "wfset/error.hpp"
#include "wfset/quadrature.hpp"
#include "wfset/seminorms.hpp"
#include "wfset/transform.hpp"
#include "wfset/windows.hpp"

using namespace wfset;

namespace {

// Reference values from 30-digit quadrature of the defining integrals.
constexpr double kBumpAtZero = 0.828568839869105152;  // gevrey_bump(2, 1) at 0
constexpr double kBumpHat3 = 0.177822042439691501;    // its transform at ξ = 3
constexpr double kBumpHat10 = 0.0131392990718995854;  // and at ξ = 10
constexpr double kEnvelopeAtJump = 0.523509272660424573;  // gevrey_bump(1.5, 2) at 0.25

}  // namespace

TEST(Windows, GevreyBumpValues) {
  const Window w = Window::gevrey_bump(2.0, 1.0);
  EXPECT_NEAR(w(0.0), kBumpAtZero, 1e-12);
  EXPECT_EQ(w(1.0), 0.0);
  EXPECT_EQ(w(-1.5), 0.0);
  EXPECT_GT(w(0.999), 0.0);
  EXPECT_THROW(Window::gevrey_bump(1.0, 1.0), Error);
}

TEST(Windows, IntegrateToStatedValue) {
  for (const Window& w : {Window::gevrey_bump(1.5, 0.75), Window::gevrey_bump(2.0, 1.0), Window::gevrey_bump(3.0, 0.8),
                          Window::gaussian(0.4)}) {
    const double r = w.support_radius();
    const double integral = integrate(std::function<double(double)>([&](double x) { return w(x); }), -r, r, 1e-13).value;
    EXPECT_NEAR(integral, w.stated_integral(), 1e-10) << w.id();
  }
}

TEST(Windows, GaussianAndDilation) {
  const Window g = Window::gaussian(0.5);
  EXPECT_NEAR(g(0.5), std::exp(-0.5), 1e-15);
  const Window b = Window::gevrey_bump(2.0, 1.0);
  const Window half = b.dilated(0.5);
  EXPECT_NEAR(half(0.2), b(0.4), 1e-15);
  EXPECT_NEAR(half.support_radius(), 0.5, 1e-15);
}

TEST(Windows, TightPartitionSquaresSumToOne) {
  const Window t = Window::tight_partition(Window::gevrey_bump(2.0, 1.0), 1.0);
  for (double x = -0.5; x <= 0.5; x += 0.01) {
    double s = 0.0;
    for (int j = -3; j <= 3; ++j) s += std::pow(t(x - j), 2);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Oracle, PointMasses) {
  const double n1 = fourier_norm(1);
  EXPECT_NEAR(std::abs(fourier_oracle(Atom::delta(point1(0)), point1(7.0)).value - n1), 0.0, 1e-15);
  const Complex v = fourier_oracle(Atom::delta(point1(0.3)), point1(5.0)).value;
  EXPECT_NEAR(std::abs(v - n1 * std::exp(Complex(0, -1.5))), 0.0, 1e-14);
  EXPECT_TRUE(fourier_oracle(Atom::delta(point2(0, 0)), point2(1, 2)).closed_form);
  EXPECT_NEAR(std::abs(fourier_oracle(Atom::delta(point2(0, 0)), point2(1, 2)).value), fourier_norm(2), 1e-15);
}

TEST(Oracle, GaussianClosedForm) {
  // (2π)^{-1/2}·w√(2π)·e^{−w²ξ²/2}: 0.5·e^{−9/8} at ξ = 3.
  const OracleValue v = fourier_oracle(Atom::gaussian(0.5, point1(0.2)), point1(3.0), false);
  EXPECT_TRUE(v.closed_form);
  EXPECT_NEAR(std::abs(v.value), 0.162326233679174865, 1e-14);
  EXPECT_NEAR(std::arg(v.value), -0.6, 1e-12);
}

TEST(Oracle, BumpByQuadrature) {
  const Atom b = Atom::gevrey_bump(2.0, 1.0, Point::Zero(1));
  EXPECT_NEAR(fourier_oracle(b, point1(3.0)).value.real(), kBumpHat3, 1e-9);
  EXPECT_NEAR(fourier_oracle(b, point1(10.0)).value.real(), kBumpHat10, 1e-9);
  EXPECT_THROW(fourier_oracle(b, point1(3.0), false), Error);
}

TEST(Oracle, JumpDecaysLikeOneOverXi) {
  // |f̂(ξ)|·|ξ| → (2π)^{-1/2}·envelope(jump).
  const double limit = fourier_norm(1) * kEnvelopeAtJump;
  const Atom j = corpus::jump();
  for (double xi : {100.0, 300.0, 1000.0}) {
    const double v = std::abs(fourier_oracle(j, point1(xi)).value) * xi;
    EXPECT_NEAR(v / limit, 1.0, 0.05) << xi;
  }
}

TEST(Oracle, SamplesAgreeWithOracle) {
  const SampleGrid g = default_grid(1);
  for (const Atom& a : {corpus::bump(), Atom::gaussian(0.3, point1(0.4))}) {
    const Spectrum s = dft(a, g);
    for (Eigen::Index k : {1, 5, 20, 40}) {
      const Complex exact = fourier_oracle(a, point1(s.frequency(k))).value;
      EXPECT_LE(std::abs(s.values[k] - exact), 1e-3 * std::abs(exact)) << a.name() << " k=" << k;
    }
  }
}

TEST(Atoms, BumpDecayFitIsNegative) {
  // Peak |φ̂| per block against −√ξ over [50, 500]; both halves decay.
  const SampleGrid g = default_grid(1);
  const SampledFourier f(corpus::bump().sample(g), g);
  auto fit = [&](double lo, double hi) {
    std::vector<double> u, y;
    for (double a = lo; a < hi; a += 10.0) {
      double peak = 0.0;
      for (double xi = a; xi < a + 10.0; xi += 0.05) peak = std::max(peak, std::abs(f(point1(xi))));
      u.push_back(-std::sqrt(a + 5.0));
      y.push_back(std::log(peak));
    }
    return fit_line(u, y).first;
  };
  const double early = fit(50, 200), late = fit(200, 500);
  EXPECT_GT(early, 0.0);
  EXPECT_GT(late, 0.0);
  EXPECT_NEAR(late / early, 1.0, 0.5);
}

TEST(Atoms, GroundTruth) {
  const Atom d = Atom::delta(point1(0));
  EXPECT_TRUE(ground_truth_wf(d, point1(0), 2.0).singular_all);
  EXPECT_FALSE(ground_truth_wf(d, point1(0.5), 2.0).any());
  const Atom b = corpus::bump();
  EXPECT_FALSE(ground_truth_wf(b, point1(1.0), 3.0).any());
  EXPECT_TRUE(ground_truth_wf(b, point1(1.0), 1.5).any());
  EXPECT_FALSE(ground_truth_wf(b, point1(0.0), 1.5).any());
  const Atom h = corpus::half_plane();
  const TruthAtPoint edge = ground_truth_wf(h, point2(0.3, 0.0), 2.0);
  ASSERT_EQ(edge.normals.size(), 1u);
  EXPECT_NEAR(std::abs(edge.normals[0][1]), 1.0, 1e-12);
  EXPECT_FALSE(ground_truth_wf(h, point2(0.0, 0.7), 2.0).any());
  EXPECT_TRUE(ground_truth_wf(corpus::jump(), point1(0.25), 2.0).singular_all);
}

TEST(Atoms, SamplingAndSupport) {
  const SampleGrid g = default_grid(1);
  const ComplexVec s = Atom::delta(point1(0.25)).sample(g);
  EXPECT_NEAR(s.sum().real() * g.step(), 1.0, 1e-12);
  EXPECT_EQ((s.array() != Complex(0)).count(), 1);
  const auto [lo, hi] = corpus::jump().support_box();
  EXPECT_NEAR(lo[0], 0.25, 1e-12);
  EXPECT_NEAR(hi[0], 2.0, 1e-12);
  EXPECT_THROW(Atom::sum("empty", {}), Error);
}

TEST(Atoms, LocalizePicksUpCutoffValue) {
  const Window g = Window::gevrey_bump(2.0, 1.0);
  const Atom loc = localize(Atom::delta(point1(0.3)), g, point1(0.0));
  ASSERT_EQ(loc.masses().size(), 1u);
  EXPECT_NEAR(loc.masses()[0].amplitude.real(), g(0.3), 1e-15);
  const Atom b = corpus::bump();
  const Atom lb = localize(b, g, point1(0.5));
  EXPECT_NEAR(std::abs(lb.density(point1(0.2))), b.density(point1(0.2)).real() * g(-0.3), 1e-15);
}

TEST(Atoms, Catalog) {
  EXPECT_EQ(make_atom("delta").masses().size(), 1u);
  EXPECT_EQ(make_atom("half_plane", 2).dim(), 2);
  EXPECT_EQ(make_atom("sum:[delta,jump]").masses().size(), 1u);
  EXPECT_THROW(make_atom("nonsense"), Error);
  EXPECT_THROW(make_atom("jump", 2), Error);
  const Atom a = atom_from_json({{"kind", "gevrey_bump"}, {"sigma", 2.5}, {"radius", 0.5}});
  EXPECT_EQ(a.dim(), 1);
  EXPECT_THROW(atom_from_json({{"kind", "delta"}, {"typo", 1}}), Error);
}
