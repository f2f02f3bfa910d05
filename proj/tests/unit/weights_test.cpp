#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wfset/weights.hpp"

using namespace wfset;

namespace {

std::vector<std::pair<Point, Point>> random_pairs(int n, int dim, double box, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<std::pair<Point, Point>> out;
  for (int i = 0; i < n; ++i) {
    Point x(dim), y(dim);
    for (int k = 0; k < dim; ++k) {
      x[k] = u(rng);
      y[k] = u(rng);
    }
    out.emplace_back(x, y);
  }
  return out;
}

}  // namespace

TEST(Weights, LogEvaluation) {
  EXPECT_EQ(evaluate_log(Weight::constant(), point2(3, 4)), 0.0);
  EXPECT_NEAR(evaluate_log(Weight::sub_exponential(2.0, 2.0), point2(3, 4)), 4.47213595499958, 1e-12);
  EXPECT_EQ(evaluate_log(Weight::polynomial(3.0), point2(0, 0)), 0.0);
  // ⟨ξ⟩^t with ⟨ξ⟩ = (1 + |ξ|²)^{1/2}.
  EXPECT_NEAR(evaluate_log(Weight::polynomial(2.0), point2(3, 4)), std::log(26.0), 1e-12);
}

TEST(Weights, HugeArgumentsStayFinite) {
  const double v = evaluate_log(Weight::sub_exponential(10.0, 2.0), 1e8);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 1e5, 1e-6);
}

TEST(Weights, ExpOfLogMatchesDirectValue) {
  const Weight w = Weight::sub_exponential(0.7, 1.5);
  for (double r : {0.0, 0.3, 2.0, 17.0}) {
    const double direct = std::exp(0.7 * std::pow(r, 1.0 / 1.5));
    EXPECT_NEAR(std::exp(evaluate_log(w, r)) / direct, 1.0, 1e-12);
  }
}

TEST(Weights, Certificates) {
  const auto& c = Weight::sub_exponential(1.5, 2.0).certificate();
  EXPECT_EQ(c.s, 2.0);
  EXPECT_EQ(c.k, 1.5);
  EXPECT_EQ(c.C, 1.0);
  EXPECT_EQ(Weight::constant(3.0).certificate().k, 0.0);
  const Weight prod = Weight::product({Weight::sub_exponential(1.0, 2.0), Weight::sub_exponential(0.5, 2.0)});
  EXPECT_NEAR(prod.certificate().k, 1.5, 1e-15);
  EXPECT_TRUE(check_moderate(prod, prod.certificate(), random_pairs(1000, 2, 10.0, 3)));
}

TEST(Weights, ModerationChecks) {
  EXPECT_TRUE(check_moderate(Weight::constant(), {2, 0, 1}, random_pairs(10, 1, 5.0, 1)));
  const Weight w = Weight::sub_exponential(1.0, 2.0);
  EXPECT_TRUE(check_moderate(w, {2, 1, 1}, random_pairs(1000, 2, 10.0, 2)));
  // log ω(x) = 10 exceeds 0.1·√100 + log ω(0) = 1.
  EXPECT_FALSE(check_moderate(w, {2, 0.1, 1}, {{point2(100, 0), point2(0, 0)}}));
}

TEST(Weights, BoundedByCertificate) {
  for (const Weight& w : {Weight::sub_exponential(0.8, 2.0), Weight::polynomial(1.5), Weight::constant()}) {
    const auto& c = w.certificate();
    const double at0 = evaluate_log(w, 0.0);
    for (double r : {0.5, 3.0, 40.0, 900.0}) {
      const double v = evaluate_log(w, r);
      const double bound = std::log(c.C) + c.k * std::pow(r, 1.0 / c.s);
      EXPECT_GE(v, -bound - 1e-12);
      EXPECT_LE(v, bound + at0 + 1e-12);
    }
  }
}

TEST(Weights, SubadditivityOfRoots) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (double s : {1.0, 1.5, 2.0, 3.0})
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng), y = u(rng);
      EXPECT_LE(std::pow(x + y, 1 / s), std::pow(x, 1 / s) + std::pow(y, 1 / s) + 1e-12);
    }
}

TEST(Weights, BeurlingDomar) {
  EXPECT_EQ(beurling_domar_partial_sum(Weight::constant(), point1(1), 100).value, 0.0);
  // Σ n^{1/2}/n² → ζ(3/2) = 2.6123753486854883; the tail beyond N is about 2/√N.
  const auto s = beurling_domar_partial_sum(Weight::sub_exponential(1.0, 2.0), point2(1, 0), 1000000);
  EXPECT_NEAR(s.value, 2.6123753486854883, 1e-2);
  EXPECT_FALSE(s.divergent);
  const auto h = beurling_domar_partial_sum(Weight::sub_exponential(1.0, 1.0), point2(1, 0), 100000);
  EXPECT_TRUE(h.divergent);
  EXPECT_FALSE(Weight::sub_exponential(1.0, 1.0).admissible());
}

TEST(Weights, JsonRoundTrip) {
  const Weight w = Weight::sub_exponential(0.25, 3.0);
  nlohmann::json j = w;
  EXPECT_EQ(j.at("kind"), "subexponential");
  const Weight back = weight_from_json(j);
  EXPECT_EQ(back.id(), w.id());
  EXPECT_EQ(evaluate_log(back, 12.0), evaluate_log(w, 12.0));
  EXPECT_THROW(weight_from_json({{"kind", "bogus"}}), std::exception);
}
