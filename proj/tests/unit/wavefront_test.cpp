#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "../corpus.hpp"
#include "wfset/wavefront.hpp"

using namespace wfset;

namespace {

std::vector<Verdict> verdicts(const ConeResults& r) {
  std::vector<Verdict> out;
  for (const auto& cone : r)
    for (const auto& res : cone) out.push_back(res.verdict);
  return out;
}

bool all_are(const ConeResults& r, Verdict v) {
  for (Verdict x : verdicts(r))
    if (x != v) return false;
  return true;
}

struct Fixture {
  AnalysisParams p = default_params(1);
  std::vector<Weight> w = p.weights();
  SeminormOptions opt = [this] {
    SeminormOptions o = p.seminorm;
    o.s = p.s;
    return o;
  }();
};

Cell cell(int point, int cone, Detector d, double k, Verdict v) {
  Cell c;
  c.point = point;
  c.cone = cone;
  c.detector = d;
  c.k = k;
  c.verdict = v;
  c.tail_slope = v == Verdict::Singular ? 1.0 : -1.0;
  return c;
}

}  // namespace

TEST(Defaults, MatchDocumentedChoices) {
  const AnalysisParams p1 = default_params(1);
  EXPECT_EQ(p1.cover.size(), 2u);
  EXPECT_EQ(p1.k_grid, (std::vector<double>{0.5, 1.0, 2.0, 4.0}));
  EXPECT_EQ(p1.q, 2.0);
  EXPECT_EQ(p1.p, 2.0);
  EXPECT_EQ(p1.cutoff_family.size(), 4u);
  EXPECT_LE(p1.cutoff.support_radius(), 0.45 * p1.space_step + 1e-12);
  const AnalysisParams p2 = default_params(2);
  EXPECT_EQ(p2.cover.size(), 16u);
  EXPECT_EQ(p2.pair().classification(), PairClass::StronglyAdmissible);
}

TEST(WfFl, DeltaJumpAndBump) {
  Fixture s;
  const SampleGrid& g = s.p.grid;
  const Atom d = corpus::delta();
  EXPECT_TRUE(all_are(detect_wf_fl(d, point1(0.25), s.p.cover, s.w, 2.0, s.p.cutoff, s.opt, g), Verdict::Singular));
  EXPECT_TRUE(all_are(detect_wf_fl(d, point1(-0.75), s.p.cover, s.w, 2.0, s.p.cutoff, s.opt, g), Verdict::Regular));
  const Atom j = corpus::jump();
  EXPECT_TRUE(all_are(detect_wf_fl(j, point1(0.25), s.p.cover, s.w, 2.0, s.p.cutoff, s.opt, g), Verdict::Singular));
  EXPECT_TRUE(all_are(detect_wf_fl(j, point1(-0.75), s.p.cover, s.w, 2.0, s.p.cutoff, s.opt, g), Verdict::Regular));

  const AnalysisParams p3 = default_params(1, 3.0);
  SeminormOptions o3 = p3.seminorm;
  o3.s = 3.0;
  const std::vector<Weight> small = {Weight::sub_exponential(0.5, 3.0)};
  for (double x : {0.0, 1.0})
    EXPECT_TRUE(all_are(detect_wf_fl(corpus::bump(), point1(x), p3.cover, small, 2.0, p3.cutoff, o3, g), Verdict::Regular));
}

TEST(DfFl, ZeroIsRegular) {
  Fixture s;
  const auto r = detect_df_fl(Atom::delta(point1(0.3), 0.0), point1(0.3), s.p.cover, s.w, 2.0, s.p.pair(), s.p.cutoff,
                              s.p.shrink_fraction, s.opt, s.p.grid);
  EXPECT_TRUE(all_are(r, Verdict::Regular));
}

TEST(DfGabor, DeltaAndFarPoint) {
  Fixture s;
  std::vector<GaborSystem> sys;
  for (double e : s.p.eps_list) sys.push_back(make_gabor_system(s.p.gabor_window, s.p.pair(), e));
  const Atom d = corpus::delta();
  const auto at = detect_df_gabor(d, point1(0.25), s.p.cover, s.w, 2, 2, sys, s.p.shrink_fraction, s.opt, s.p.grid);
  EXPECT_TRUE(all_are(at.combined, Verdict::Singular));
  const auto far = detect_df_gabor(d, point1(7.0), s.p.cover, s.w, 2, 2, sys, s.p.shrink_fraction, s.opt, s.p.grid);
  EXPECT_TRUE(all_are(far.combined, Verdict::Regular));
  for (auto n : far.index_set_sizes) EXPECT_EQ(n, 1u);  // x0 = 7 is a node at both scales
  // ε = 1 and ε = 1/2 agree at the singular point.
  ASSERT_EQ(at.per_eps.size(), 2u);
  EXPECT_EQ(verdicts(at.per_eps[0]), verdicts(at.per_eps[1]));
}

TEST(WfMod, IndependentOfExponentAtTheJump) {
  Fixture s;
  const Atom j = corpus::jump();
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
    EXPECT_TRUE(all_are(detect_wf_mod(j, point1(0.25), s.p.cover, s.w, p, 2.0, s.p.stft_window, s.p.stft_pair(),
                                      s.p.cutoff, s.p.order, s.opt, s.p.grid),
                        Verdict::Singular))
        << p;
}

TEST(WfS, OrderFlipAndMonotonicity) {
  const Atom b = corpus::bump();
  for (double s : {1.5, 3.0}) {
    const AnalysisParams p = default_params(1, s);
    const auto cells = estimate_wf_s(b, point1(1.0), p.cover, s, p.k_grid, p.q, p.cutoff, p.seminorm, p.grid);
    for (const auto& c : cells) {
      EXPECT_TRUE(c.monotone);
      EXPECT_EQ(c.verdict, s < 2 ? Verdict::Singular : Verdict::Regular) << s;
      for (std::size_t i = 1; i < c.k_verdicts.size(); ++i)
        if (c.k_verdicts[i - 1] == Verdict::Singular) EXPECT_EQ(c.k_verdicts[i], Verdict::Singular);
    }
  }
}

TEST(Crosscheck, EmptyReportPasses) {
  const CrosscheckSummary c = crosscheck(WavefrontReport{});
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.total, 0);
}

TEST(Crosscheck, ReportsPlantedViolations) {
  WavefrontReport r;
  r.params = default_params(1);
  r.points = {point1(0.0)};
  for (double k : r.params.k_grid)
    for (int c = 0; c < 2; ++c)
      for (Detector d : kAllDetectors) {
        // Regular at k = 1 only: a non-monotone pattern in k.
        Verdict v = k == 1.0 ? Verdict::Regular : Verdict::Singular;
        if (d == Detector::DF_FL && c == 1 && k == 4.0) v = Verdict::Regular;
        r.cells.push_back(cell(0, c, d, k, v));
      }
  MicroCell m;
  m.cutoff = "g";
  m.k = 1.0;
  m.verdict = Verdict::Singular;
  m.parent = Verdict::Regular;
  r.microlocal.push_back(m);
  const CrosscheckSummary s = crosscheck(r);
  EXPECT_FALSE(s.pass);
  EXPECT_FALSE(s.disagreements.empty());
  EXPECT_EQ(s.micro_violations.size(), 1u);
  EXPECT_FALSE(s.k_violations.empty());
  EXPECT_EQ(s.agreement[0][2], s.compared[0][2] - 1);
}

TEST(Analyze, DeterministicAndSerializable) {
  AnalysisParams p = default_params(1);
  p.cutoff_family.resize(1);
  const Atom d = corpus::delta();
  const WavefrontReport a = analyze(d, {point1(0.25)}, p, 1);
  const WavefrontReport b = analyze(d, {point1(0.25)}, p, 2);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.cells.size(), 4u * 2u * 4u);
  EXPECT_EQ(a.to_json().at("schema"), "wfreport/1");
  const std::string csv = a.to_csv();
  EXPECT_EQ(csv.rfind("atom,point,x0,cone,cone_id,detector,k,verdict,tail_slope\r\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), a.cells.size() + 1);
  const CrosscheckSummary c = crosscheck(a);
  EXPECT_TRUE(c.pass);
  EXPECT_THROW(analyze(d, {point2(0, 0)}, p), Error);
}

TEST(ParallelFor, OrderIndependentAndRethrows) {
  std::vector<int> out(100, 0);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
  std::atomic<int> ran{0};
  EXPECT_THROW(parallel_for(10, 3,
                            [&](std::size_t i) {
                              ++ran;
                              if (i == 5) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
