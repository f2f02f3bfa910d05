#include <gtest/gtest.h>

#include <cmath>

#include "../corpus.hpp"
#include "wfset/error.hpp"
#include "wfset/gabor.hpp"

using namespace wfset;

namespace {

std::vector<int> flat(const std::vector<Eigen::VectorXi>& v) {
  std::vector<int> out;
  for (const auto& j : v) out.push_back(j[0]);
  return out;
}

}  // namespace

TEST(Painless, HalfOverlapDual) {
  const Window phi = Window::gevrey_bump(2.0, 1.0);
  const GaborSystem sys = make_gabor_system(phi, make_pair(1.0, kPi / 2, 1));
  EXPECT_LE(partition_residual(sys), 1e-12);
  EXPECT_NEAR(sys.constant, 0.25, 1e-15);  // ab/2π
}

TEST(Painless, Failures) {
  try {
    painless_dual(Window::gevrey_bump(2.0, 0.4), make_pair(1.0, kPi / 2, 1));
    FAIL() << "gaps between translates must be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllConditioned);
  }
  try {
    painless_dual(Window::gevrey_bump(2.0, 1.0), make_pair(1.0, kPi, 1));
    FAIL() << "support wider than 2π/b must be rejected";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PainlessViolated);
  }
}

TEST(Painless, TightWindowIsItsOwnDual) {
  const Window t = Window::tight_partition(Window::gevrey_bump(2.0, 1.0), 1.0);
  const Window psi = painless_dual(t, make_pair(1.0, kPi / 2, 1));
  for (double x : {-0.9, -0.3, 0.0, 0.45, 0.8}) EXPECT_NEAR(psi(x), t(x), 1e-12);
}

TEST(Frames, ExactAtEveryScale) {
  const SampleGrid g = default_grid(1);
  const GaborSystem base = make_gabor_system(Window::gevrey_bump(1.5, 0.75), make_pair(1.0, kPi / 2, 1));
  for (double eps : {1.0, 0.5, 0.25}) {
    const GaborSystem sys = base.at_scale(eps);
    EXPECT_LE(partition_residual(sys), 1e-10) << eps;
    for (const auto& e : corpus::one_dimensional())
      EXPECT_LE(reconstruction_error(e.atom.sample(g), g, sys), 1e-10) << e.atom.name() << " eps=" << eps;
  }
}

TEST(Coefficients, ZeroDeltaAndAtom) {
  const SampleGrid g = default_grid(1);
  const GaborSystem sys = make_gabor_system(Window::gevrey_bump(2.0, 1.0), make_pair(1.0, kPi / 2, 1), 0.5);
  EXPECT_EQ(coefficients(ComplexVec::Zero(g.size()), g, sys).values.size(), 0);

  const CoefficientTable d = coefficients(Atom::delta(point1(0.3)), g, sys);
  for (Eigen::Index j = 0; j < d.values.rows(); ++j) {
    const Eigen::ArrayXd row = d.values.row(j).array().abs();
    EXPECT_NEAR(row.maxCoeff() - row.minCoeff(), 0.0, 1e-12 * std::max(1.0, row.maxCoeff()));
  }

  // A single synthesized atom comes back exactly and dominates its own table.
  CoefficientTable one = d;
  one.values.setZero();
  one.values(1, 7) = 1.0;
  const ComplexVec atom = synthesize(one, sys);
  const std::size_t j = 1;
  const Point xl = one.xi(7);
  for (Eigen::Index m = 0; m < g.size(); m += 97) {
    const double x = g.coord(static_cast<int>(m));
    const Complex expect = sys.phi.dilated(sys.eps)(x - one.x(j)[0]) * std::exp(Complex(0, xl[0] * x));
    EXPECT_NEAR(std::abs(atom[m] - expect), 0.0, 1e-12);
  }
  EXPECT_LE(reconstruction_error(atom, g, sys), 1e-10);
}

TEST(Synthesis, Linear) {
  const SampleGrid g = default_grid(1);
  const GaborSystem sys = make_gabor_system(Window::gevrey_bump(1.5, 0.75), make_pair(1.0, kPi / 2, 1));
  const CoefficientTable a = coefficients(corpus::bump(), g, sys);
  const CoefficientTable b = coefficients(Atom::gevrey_bump(2.0, 0.8, point1(0.4)), g, sys);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  CoefficientTable s = a;
  s.values = a.values + b.values;
  EXPECT_LE((synthesize(s, sys) - synthesize(a, sys) - synthesize(b, sys)).norm(), 1e-12 * synthesize(s, sys).norm());
}

TEST(LocalIndexSet, SupportArithmetic) {
  const GaborSystem sys = make_gabor_system(Window::gevrey_bump(2.0, 1.0), make_pair(1.0, kPi / 2, 1));
  EXPECT_EQ(flat(local_index_set(point1(0.5), sys)), (std::vector<int>{0, 1}));
  EXPECT_EQ(flat(local_index_set(point1(0.5), sys.at_scale(0.5))), (std::vector<int>{1}));
  EXPECT_EQ(flat(local_index_set(point1(0.6), sys.at_scale(0.5))), (std::vector<int>{1, 2}));
  EXPECT_EQ(flat(local_index_set(point1(0.75), sys.at_scale(0.5))), (std::vector<int>{1, 2}));
  const GaborSystem s2 = make_gabor_system(Window::gevrey_bump(2.0, 1.0, 2), make_pair(1.0, kPi / 2, 2));
  EXPECT_EQ(local_index_set(point2(0.5, 0.5), s2).size(), 4u);
}

TEST(MixedNorm, Trivial) {
  CoefficientTable c;
  c.space_step = 1.0;
  c.frequency_step = kPi / 2;
  c.segment = 4;
  c.nodes = {Eigen::VectorXi::Constant(1, 0)};
  c.values = ComplexMat::Zero(1, 4);
  const Weight one = Weight::constant();
  EXPECT_EQ(discrete_modulation_norm(c, one, 2, 2), 0.0);
  c.values(0, 2) = 2.0;
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
    for (double q : {1.0, 3.0, std::numeric_limits<double>::infinity()})
      EXPECT_NEAR(discrete_modulation_norm(c, one, p, q), 2.0, 1e-14);
  c.values(0, 3) = 2.0;
  EXPECT_NEAR(discrete_modulation_norm(c, one, 1, 1), 4.0, 1e-14);
  EXPECT_NEAR(discrete_modulation_norm(c, one, 1, 2), std::sqrt(8.0), 1e-14);
}

TEST(Coefficients, FinitelyManyRows) {
  const SampleGrid g = default_grid(1);
  const GaborSystem sys = make_gabor_system(Window::gevrey_bump(2.0, 1.0), make_pair(1.0, kPi / 2, 1));
  const CoefficientTable c = coefficients(corpus::bump(), g, sys);
  int live = 0;
  for (Eigen::Index j = 0; j < c.values.rows(); ++j) live += c.values.row(j).cwiseAbs().maxCoeff() > 0.0;
  EXPECT_EQ(live, 3);
  const auto summary = coefficient_summary(c, Weight::constant(), 2, 2);
  EXPECT_TRUE(summary.contains("nnz"));
  EXPECT_TRUE(summary.contains("sup_norm"));
}
