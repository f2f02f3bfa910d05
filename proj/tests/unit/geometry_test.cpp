#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wfset/error.hpp"
#include "wfset/geometry.hpp"

using namespace wfset;

TEST(Lattice, VolumeAndMembership) {
  Mat<double> b(2, 2);
  b << 1.0, 0.5, 0.0, 2.0;
  const Lattice l(b, point2(0.1, 0.0));
  EXPECT_NEAR(l.cell_volume(), 2.0, 1e-15);
  EXPECT_TRUE(l.contains(point2(1.6, 2.0)));
  EXPECT_FALSE(l.contains(point2(1.0, 1.0)));
  // Another fundamental parallelepiped of the same lattice has the same volume.
  Eigen::Matrix2i u;
  u << 1, 1, 0, 1;
  EXPECT_NEAR(l.rebased(u).cell_volume(), l.cell_volume(), 1e-12);
}

TEST(Pairs, Classification) {
  EXPECT_EQ(make_pair(1.0, kPi, 1).classification(), PairClass::StronglyAdmissible);
  EXPECT_NEAR(make_pair(1.0, kPi, 1).pairing(), kPi, 1e-15);
  EXPECT_EQ(make_pair(1.0, kTwoPi, 1).classification(), PairClass::WeaklyAdmissible);
  try {
    make_pair(2.0, kTwoPi, 1);
    FAIL() << "expected an invalid pair";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPair);
    EXPECT_NE(std::string(e.what()).find("critical density"), std::string::npos);
  }
}

TEST(Cones, MembershipIsConic) {
  const Cone c(point2(1, 1), kPi / 6);
  EXPECT_FALSE(c.contains(point2(0, 0)));
  std::mt19937 rng(11);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    const Point xi = point2(n(rng), n(rng));
    EXPECT_EQ(c.contains(xi), c.contains(7.5 * xi));
  }
}

TEST(Cones, ShrinkComposes) {
  const Cone c(point2(0, 1), 0.6);
  const Cone once = c.shrink(0.3);
  const Cone twice = c.shrink(0.1).shrink(0.2);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0, kTwoPi);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const double t = u(rng);
    mismatches += once.contains(point2(std::cos(t), std::sin(t))) != twice.contains(point2(std::cos(t), std::sin(t)));
  }
  EXPECT_EQ(mismatches, 0);
  EXPECT_THROW(c.shrink(0.6), Error);
}

TEST(Cones, SeparationConstant) {
  const Cone outer(point2(1, 0), kPi / 4);
  EXPECT_THROW(separation_constant(outer, outer), Error);
  const Cone inner(point2(1, 0), kPi / 8);
  const double c = separation_constant(inner, outer);
  EXPECT_NEAR(c, 0.39018064403225654, 1e-12);
  // Brute force over directions ξ in the inner cone and η outside the outer one.
  double best = 1e9;
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; j <= 400; ++j) {
      const double a = -kPi / 8 + kPi / 4 * i / 200.0;
      const double b = kPi / 4 + 1.5 * kPi * j / 400.0;
      best = std::min(best, std::hypot(std::cos(a) - std::cos(b), std::sin(a) - std::sin(b)));
    }
  EXPECT_NEAR(c, best, 1e-3);
  // Widening the gap never lowers the constant.
  EXPECT_GE(separation_constant(Cone(point2(1, 0), kPi / 16), outer), c);
  // Opposite half-lines in 1D: |ξ − η| ≥ max(|ξ|, |η|).
  EXPECT_NEAR(separation_constant(Cone(point1(1), kPi / 2).shrink(kPi / 4), Cone(point1(1), kPi / 2)), 1.0, 1e-12);
}

TEST(LatticePoints, FullSpaceAndCone) {
  const Lattice z2 = Lattice::scaled_integer(1.0, 2);
  EXPECT_EQ(lattice_points_in(z2, std::nullopt, 1.5).size(), 9u);  // the origin and its 8 neighbours
  const auto pts = lattice_points_in(z2, Cone(point2(1, 0), kPi / 6), 3.0);
  const std::vector<Point> expect = {point2(1, 0), point2(2, -1), point2(2, 0), point2(2, 1), point2(3, 0)};
  ASSERT_EQ(pts.size(), expect.size());
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_TRUE(pts[i].isApprox(expect[i])) << i;
  EXPECT_TRUE(lattice_points_in(z2, Cone(point2(1, 0), 1.0), 0.0).empty());
}

TEST(Covers, AxisAlignedAndEquiangular) {
  const ConeCover one = ConeCover::axis_aligned(1, 1.0);
  EXPECT_EQ(one.size(), 2u);
  EXPECT_TRUE(one.covers());
  const ConeCover sixteen = ConeCover::equiangular(16, 1.1);
  EXPECT_EQ(sixteen.size(), 16u);
  EXPECT_TRUE(sixteen.covers());
  EXPECT_EQ(sixteen.overlap(), 2);
}

TEST(Geometry, JsonRoundTrip) {
  const Cone c(point2(0, 2), 0.4);
  nlohmann::json j = c;
  const Cone back = cone_from_json(j);
  EXPECT_TRUE(back.axis().isApprox(point2(0, 1)));
  EXPECT_EQ(back.half_angle(), 0.4);
  nlohmann::json lj = Lattice::scaled_integer(0.5, 2);
  EXPECT_NEAR(lattice_from_json(lj).cell_volume(), 0.25, 1e-15);
}
