#include "wfset/wavefront.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "wfset/error.hpp"

namespace wfset {

namespace {

nlohmann::json point_json(const Point& p) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) j.push_back(p[i]);
  return j;
}

nlohmann::json slope_json(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json exponent_json(double v) { return std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v); }

ConeSeminormResult zero_result(const Weight& w, const Cone& c, double q) {
  ConeSeminormResult r;
  r.q = q;
  r.weight_id = w.id();
  r.cone_id = cone_id(c);
  r.zero = true;
  r.tail_slope = -std::numeric_limits<double>::infinity();
  r.verdict = Verdict::Regular;
  return r;
}

ConeResults wf_fl_on(PolarNodes& nodes, const ConeCover& cover, const std::vector<Weight>& w, double q,
                     const SeminormOptions& opt) {
  ConeResults out(cover.size());
  for (std::size_t c = 0; c < cover.size(); ++c)
    for (const auto& wt : w) out[c].push_back(fl_cone_seminorm(nodes, cover.cones()[c], wt, q, opt));
  return out;
}

// Three-parameter fit y ≈ a·u + b·log u + c.
DecayFit fit_three(const std::vector<double>& u, const std::vector<double>& y) {
  DecayFit f;
  f.points = static_cast<int>(u.size());
  if (u.size() < 4) throw Error(ErrorKind::InsufficientRange, "decay fit: need at least four usable radii");
  Mat<double> A(u.size(), 3);
  RealVec b(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    A(i, 0) = u[i];
    A(i, 1) = std::log(u[i]);
    A(i, 2) = 1.0;
    b[i] = y[i];
  }
  const RealVec x = A.colPivHouseholderQr().solve(b);
  f.a = x[0];
  f.b = x[1];
  f.c = x[2];
  f.residual = std::sqrt((A * x - b).squaredNorm() / static_cast<double>(u.size()));
  return f;
}

Verdict combine_k(const std::vector<Verdict>& v, bool& monotone) {
  monotone = true;
  bool seen_singular = false;
  for (Verdict x : v) {
    if (x == Verdict::Singular) seen_singular = true;
    if (x == Verdict::Regular && seen_singular) monotone = false;
  }
  if (!monotone) return Verdict::Indeterminate;
  if (std::all_of(v.begin(), v.end(), [](Verdict x) { return x == Verdict::Singular; })) return Verdict::Singular;
  if (std::any_of(v.begin(), v.end(), [](Verdict x) { return x == Verdict::Regular; })) return Verdict::Regular;
  return Verdict::Indeterminate;
}

std::vector<WfsCell> wf_s_from(const ConeResults& fl, const std::vector<double>& k_grid, int point,
                               const std::vector<double>& exponents) {
  std::vector<WfsCell> out;
  for (std::size_t c = 0; c < fl.size(); ++c) {
    WfsCell w;
    w.point = point;
    w.cone = static_cast<int>(c);
    for (std::size_t i = 0; i < k_grid.size(); ++i) w.k_verdicts.push_back(fl[c][i].verdict);
    w.verdict = combine_k(w.k_verdicts, w.monotone);
    w.decay_exponent = exponents[c];
    out.push_back(w);
  }
  return out;
}

// a from the dyadic annuli of the unweighted seminorm (NaN without range).
double coarse_exponent(PolarNodes& nodes, const Cone& cone, double s, const SeminormOptions& opt) {
  const ConeSeminormResult r = fl_cone_seminorm(nodes, cone, Weight::constant(s), 2.0, opt);
  std::vector<double> u, y;
  for (const auto& a : r.annuli) {
    if (a.r_outer < 16.0 || !std::isfinite(a.log_mean)) continue;
    u.push_back(std::pow(a.r_outer, 1.0 / s));
    y.push_back(a.log_mean);
  }
  if (u.size() < 4) return std::numeric_limits<double>::quiet_NaN();
  return fit_three(u, y).a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string point_text(const Point& p) {
  std::ostringstream os;
  os.precision(10);
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ";" : "") << p[i];
  return os.str();
}

}  // namespace

const char* to_string(Detector d) {
  switch (d) {
    case Detector::WF_FL:
      return "WF_FL";
    case Detector::WF_Mod:
      return "WF_Mod";
    case Detector::DF_FL:
      return "DF_FL";
    case Detector::DF_Gabor:
      return "DF_Gabor";
  }
  return "WF_FL";
}

Detector detector_from_string(const std::string& s) {
  for (Detector d : kAllDetectors)
    if (s == to_string(d)) return d;
  throw Error(ErrorKind::InvalidArgument, "unknown detector \"" + s + "\"");
}

std::vector<Weight> AnalysisParams::weights() const {
  std::vector<Weight> w;
  for (double k : k_grid) w.push_back(Weight::sub_exponential(k, s));
  return w;
}

nlohmann::json AnalysisParams::to_json() const {
  nlohmann::json cones = nlohmann::json::array();
  for (const auto& c : cover.cones()) {
    nlohmann::json j;
    wfset::to_json(j, c);
    cones.push_back(j);
  }
  auto win = [](const Window& w) {
    nlohmann::json j;
    wfset::to_json(j, w);
    return j;
  };
  nlohmann::json family = nlohmann::json::array();
  for (const auto& w : cutoff_family) family.push_back(win(w));
  return {{"dim", dim},
          {"s", s},
          {"q", exponent_json(q)},
          {"p", exponent_json(p)},
          {"k_grid", k_grid},
          {"tau", seminorm.tau},
          {"r_max", seminorm.r_max},
          {"annuli", seminorm.annuli},
          {"fit_annuli", seminorm.fit_annuli},
          {"cones", cones},
          {"shrink_fraction", shrink_fraction},
          {"cutoff", win(cutoff)},
          {"cutoff_family", family},
          {"lattice", {{"a", space_step}, {"b", frequency_step}}},
          {"gabor_window", win(gabor_window)},
          {"eps", eps_list},
          {"stft_window", win(stft_window)},
          {"stft_lattice", {{"a", stft_space_step}, {"b", stft_frequency_step}}},
          {"order", order == MixedOrder::Mpq ? "Mpq" : "Wpq"},
          {"grid", {{"n", grid.n}, {"half_width", grid.half_width}}},
          {"seed", seed}};
}

AnalysisParams default_params(int dim, double s) {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::InvalidArgument, "default_params: d must be 1 or 2");
  AnalysisParams p;
  p.dim = dim;
  p.s = s;
  p.grid = default_grid(dim);
  p.seminorm.s = s;
  p.seminorm.r_max = dim == 1 ? 256.0 : 128.0;
  p.cover = dim == 1 ? ConeCover::axis_aligned(1, 1.0) : ConeCover::equiangular(16, 1.1);
  const double sigma_c = 1.0 + 0.5 * (s - 1.0);
  const double sigma_low = 1.0 + 0.5 * (sigma_c - 1.0);
  p.cutoff = Window::gevrey_bump(sigma_c, (dim == 1 ? 0.45 : 0.6) * p.space_step, dim);
  p.cutoff_family.clear();
  for (double r : {0.6, 1.0})
    for (double o : {sigma_c, sigma_low}) p.cutoff_family.push_back(Window::gevrey_bump(o, r, dim));
  p.gabor_window = Window::gevrey_bump(1.5, dim == 1 ? 1.0 : 1.1, dim);
  if (dim == 1) p.eps_list = {0.5, 0.25};
  if (dim == 2) p.k_grid = {1.0, 2.0, 4.0, 8.0};
  p.stft_window = Window::gevrey_bump(1.5, 0.75, dim);
  return p;
}

const Cell* WavefrontReport::find(int point, int cone, Detector d, double k) const {
  for (const auto& c : cells)
    if (c.point == point && c.cone == cone && c.detector == d && c.k == k) return &c;
  return nullptr;
}

nlohmann::json WavefrontReport::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back(point_json(p));
  nlohmann::json cj = nlohmann::json::array();
  for (const auto& c : cells)
    cj.push_back({{"point", c.point},
                  {"x0", point_json(points[c.point])},
                  {"cone", c.cone},
                  {"cone_id", cone_id(params.cover.cones()[c.cone])},
                  {"detector", to_string(c.detector)},
                  {"k", c.k},
                  {"verdict", to_string(c.verdict)},
                  {"tail_slope", slope_json(c.tail_slope)},
                  {"diagnostics", c.diagnostics}});
  nlohmann::json wj = nlohmann::json::array();
  for (const auto& w : wf_s) {
    nlohmann::json kv = nlohmann::json::array();
    for (Verdict v : w.k_verdicts) kv.push_back(to_string(v));
    wj.push_back({{"point", w.point},
                  {"cone", w.cone},
                  {"in_wf_s", w.verdict == Verdict::Singular},
                  {"verdict", to_string(w.verdict)},
                  {"k_verdicts", kv},
                  {"monotone", w.monotone},
                  {"decay_exponent", slope_json(w.decay_exponent)}});
  }
  nlohmann::json mj = nlohmann::json::array();
  for (const auto& m : microlocal)
    mj.push_back({{"cutoff", m.cutoff},
                  {"point", m.point},
                  {"cone", m.cone},
                  {"k", m.k},
                  {"verdict", to_string(m.verdict)},
                  {"parent", to_string(m.parent)},
                  {"tail_slope", slope_json(m.tail_slope)}});
  return {{"schema", "wfreport/1"}, {"atom", atom},  {"dim", dim},    {"params", params.to_json()},
          {"points", pts},          {"cells", cj},   {"wf_s", wj},    {"microlocal", mj}};
}

std::string WavefrontReport::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "atom,point,x0,cone,cone_id,detector,k,verdict,tail_slope\r\n";
  for (const auto& c : cells) {
    os << csv_field(atom) << ',' << c.point << ',' << point_text(points[c.point]) << ',' << c.cone << ','
       << csv_field(cone_id(params.cover.cones()[c.cone])) << ',' << to_string(c.detector) << ',' << c.k << ','
       << to_string(c.verdict) << ',';
    if (std::isfinite(c.tail_slope)) os << c.tail_slope;
    os << "\r\n";
  }
  return os.str();
}

ConeResults detect_wf_fl(const Atom& f, const Point& x0, const ConeCover& cover, const std::vector<Weight>& w, double q,
                         const Window& cutoff, const SeminormOptions& opt, const SampleGrid& grid) {
  PolarNodes nodes = polar_nodes(localize(f, cutoff, x0), grid);
  return wf_fl_on(nodes, cover, w, q, opt);
}

ConeResults detect_wf_mod(const Atom& f, const Point& x0, const ConeCover& cover, const std::vector<Weight>& w,
                          double p, double q, const Window& window, const LatticePair& pair, const Window& cutoff,
                          MixedOrder order, const SeminormOptions& opt, const SampleGrid& grid) {
  const ComplexVec h = localize(f, cutoff, x0).sample(grid);
  const StftGrid V = stft(h, grid, window, pair, 1.0);
  ConeResults out(cover.size());
  for (std::size_t c = 0; c < cover.size(); ++c)
    for (const auto& wt : w)
      out[c].push_back(V.nodes.empty() ? zero_result(wt, cover.cones()[c], q)
                                       : mod_cone_seminorm(V, cover.cones()[c], wt, p, q, order, opt));
  return out;
}

ConeResults detect_df_fl(const Atom& f, const Point& x0, const ConeCover& cover, const std::vector<Weight>& w, double q,
                         const LatticePair& pair, const Window& cutoff, double shrink_fraction,
                         const SeminormOptions& opt, const SampleGrid& grid) {
  if (pair.classification() != PairClass::StronglyAdmissible)
    throw Error(ErrorKind::InvalidPair, "detect_df_fl: lattice pair must be strongly admissible");
  const SampledFourier sf(localize(f, cutoff, x0).sample(grid), grid);
  const SpectrumFn fn = [&](const Point& xi) { return sf(xi); };
  ConeResults out(cover.size());
  for (std::size_t c = 0; c < cover.size(); ++c) {
    const Cone& cone = cover.cones()[c];
    const Cone inner = cone.shrink(shrink_fraction * cone.half_angle());
    const auto H = evaluate_at(fn, lattice_points_in(pair.frequency(), inner, opt.r_max));
    for (const auto& wt : w) {
      ConeSeminormResult r = fl_discrete_seminorm(H, wt, q, opt);
      r.cone_id = cone_id(inner);
      out[c].push_back(std::move(r));
    }
  }
  return out;
}

GaborResults detect_df_gabor(const Atom& f, const Point& x0, const ConeCover& cover, const std::vector<Weight>& w,
                             double p, double q, const std::vector<GaborSystem>& systems, double shrink_fraction,
                             const SeminormOptions& opt, const SampleGrid& grid) {
  if (systems.empty()) throw Error(ErrorKind::InvalidArgument, "detect_df_gabor: no Gabor systems");
  const ComplexVec samples = f.sample(grid);
  GaborResults out;
  for (const auto& sys : systems) {
    const auto J = local_index_set(x0, sys);
    out.index_set_sizes.push_back(J.size());
    ConeResults res(cover.size());
    std::optional<CoefficientTable> table;
    if (!J.empty()) table = coefficients(samples, grid, sys, J);
    for (std::size_t c = 0; c < cover.size(); ++c) {
      const Cone& cone = cover.cones()[c];
      const Cone inner = cone.shrink(shrink_fraction * cone.half_angle());
      for (const auto& wt : w) {
        ConeSeminormResult r = table ? mod_cone_seminorm(*table, inner, wt, p, q, MixedOrder::Mpq, opt)
                                     : zero_result(wt, inner, q);
        r.cone_id = cone_id(inner);
        res[c].push_back(std::move(r));
      }
    }
    out.per_eps.push_back(std::move(res));
  }
  out.combined = out.per_eps.front();
  for (std::size_t c = 0; c < cover.size(); ++c)
    for (std::size_t i = 0; i < w.size(); ++i) {
      double slope = std::numeric_limits<double>::infinity();
      bool any_regular = false, all_singular = true;
      for (const auto& e : out.per_eps) {
        slope = std::min(slope, e[c][i].tail_slope);
        any_regular |= e[c][i].verdict == Verdict::Regular;
        all_singular &= e[c][i].verdict == Verdict::Singular;
      }
      auto& r = out.combined[c][i];
      r.tail_slope = slope;
      r.verdict = any_regular ? Verdict::Regular : (all_singular ? Verdict::Singular : Verdict::Indeterminate);
    }
  return out;
}

std::vector<WfsCell> estimate_wf_s(const Atom& f, const Point& x0, const ConeCover& cover, double s,
                                   const std::vector<double>& k_grid, double q, const Window& cutoff,
                                   const SeminormOptions& opt_in, const SampleGrid& grid) {
  if (k_grid.empty()) throw Error(ErrorKind::InvalidArgument, "estimate_wf_s: empty k grid");
  for (std::size_t i = 0; i < k_grid.size(); ++i)
    if (!(k_grid[i] > 0.0) || (i > 0 && !(k_grid[i] > k_grid[i - 1])))
      throw Error(ErrorKind::InvalidArgument, "estimate_wf_s: k grid must be positive and increasing");
  SeminormOptions opt = opt_in;
  opt.s = s;
  std::vector<Weight> w;
  for (double k : k_grid) w.push_back(Weight::sub_exponential(k, s));
  PolarNodes nodes = polar_nodes(localize(f, cutoff, x0), grid);
  const ConeResults fl = wf_fl_on(nodes, cover, w, q, opt);
  std::vector<double> exps;
  for (const auto& c : cover.cones()) exps.push_back(coarse_exponent(nodes, c, s, opt));
  return wf_s_from(fl, k_grid, 0, exps);
}

DecayFit fit_decay_exponent(const Atom& f, const Point& x0, const Cone& cone, double s, const Window& cutoff,
                            const SeminormOptions& opt, const SampleGrid& grid, double r_min) {
  PolarNodes nodes = polar_nodes(localize(f, cutoff, x0), grid);
  // Equal bins in u = R^{1/s}; the RMS over each bin smooths oscillation zeros.
  const int bins = 10;
  const double u0 = std::pow(r_min, 1.0 / s);
  const double u1 = std::pow(opt.r_max, 1.0 / s);
  std::vector<double> us, ys;
  for (int i = 0; i < bins; ++i) {
    const double ua = u0 + (u1 - u0) * i / bins;
    const double ub = u0 + (u1 - u0) * (i + 1) / bins;
    const auto& nv = nodes.nodes(cone, std::pow(ua, s), std::pow(ub, s), 1);
    double num = 0.0, den = 0.0;
    for (const auto& v : nv) {
      num += v.weight * v.abs * v.abs;
      den += v.weight;
    }
    if (!(num > 0.0)) continue;
    us.push_back(0.5 * (ua + ub));
    ys.push_back(0.5 * std::log(num / den));
  }
  return fit_three(us, ys);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = n;
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

WavefrontReport analyze(const Atom& f, const std::vector<Point>& points, const AnalysisParams& params,
                        unsigned threads) {
  if (f.dim() != params.dim) throw Error(ErrorKind::InvalidArgument, "analyze: atom and parameters differ in dimension");
  for (const auto& p : points)
    if (p.size() != params.dim) throw Error(ErrorKind::InvalidArgument, "analyze: point dimension mismatch");
  const std::vector<Weight> w = params.weights();
  SeminormOptions opt = params.seminorm;
  opt.s = params.s;
  const LatticePair pair = params.pair();
  const LatticePair spair = params.stft_pair();
  std::vector<GaborSystem> systems;
  for (double e : params.eps_list) systems.push_back(make_gabor_system(params.gabor_window, pair, e));
  const ConeCover& cover = params.cover;

  // Task t < P: all detectors at point t; afterwards (point, family member).
  const std::size_t P = points.size();
  const std::size_t F = params.cutoff_family.size();
  struct TaskOut {
    std::vector<Cell> cells;
    std::vector<WfsCell> wfs;
    std::vector<MicroCell> micro;
    ConeResults fl;
  };
  std::vector<TaskOut> outs(P + P * F);

  auto add_cells = [&](TaskOut& o, int point, Detector d, const ConeResults& res) {
    for (std::size_t c = 0; c < res.size(); ++c)
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& r = res[c][i];
        Cell cell;
        cell.point = point;
        cell.cone = static_cast<int>(c);
        cell.detector = d;
        cell.k = params.k_grid[i];
        cell.verdict = r.verdict;
        cell.tail_slope = r.tail_slope;
        cell.diagnostics = {{"zero", r.zero}, {"noise_floor", r.noise_floor}, {"flagged", r.flagged}};
        o.cells.push_back(std::move(cell));
      }
  };

  parallel_for(P, threads, [&](std::size_t t) {
    const Point& x0 = points[t];
    const int pi = static_cast<int>(t);
    TaskOut& o = outs[t];
    PolarNodes nodes = polar_nodes(localize(f, params.cutoff, x0), params.grid);
    o.fl = wf_fl_on(nodes, cover, w, params.q, opt);
    add_cells(o, pi, Detector::WF_FL, o.fl);
    add_cells(o, pi, Detector::WF_Mod,
              detect_wf_mod(f, x0, cover, w, params.p, params.q, params.stft_window, spair, params.cutoff,
                            params.order, opt, params.grid));
    add_cells(o, pi, Detector::DF_FL,
              detect_df_fl(f, x0, cover, w, params.q, pair, params.cutoff, params.shrink_fraction, opt, params.grid));
    const GaborResults g =
        detect_df_gabor(f, x0, cover, w, params.p, params.q, systems, params.shrink_fraction, opt, params.grid);
    add_cells(o, pi, Detector::DF_Gabor, g.combined);
    // Per-ε detail for the Gabor cells.
    std::size_t idx = o.cells.size() - cover.size() * w.size();
    for (std::size_t c = 0; c < cover.size(); ++c)
      for (std::size_t i = 0; i < w.size(); ++i, ++idx) {
        nlohmann::json per = nlohmann::json::array();
        for (std::size_t e = 0; e < systems.size(); ++e)
          per.push_back({{"eps", systems[e].eps},
                         {"index_set", g.index_set_sizes[e]},
                         {"verdict", to_string(g.per_eps[e][c][i].verdict)},
                         {"tail_slope", slope_json(g.per_eps[e][c][i].tail_slope)}});
        o.cells[idx].diagnostics["per_eps"] = per;
        bool vacuous = true;
        for (auto sz : g.index_set_sizes) vacuous &= sz == 0;
        if (vacuous) o.cells[idx].diagnostics["vacuous"] = true;
      }
    std::vector<double> exps;
    for (const auto& c : cover.cones()) exps.push_back(coarse_exponent(nodes, c, params.s, opt));
    o.wfs = wf_s_from(o.fl, params.k_grid, pi, exps);
  });

  parallel_for(P * F, threads, [&](std::size_t t) {
    const std::size_t pt = t / F;
    const Window& g = params.cutoff_family[t % F];
    const Atom gf = localize(f, g, points[pt]);
    const ConeResults r = detect_wf_fl(gf, points[pt], cover, w, params.q, params.cutoff, opt, params.grid);
    TaskOut& o = outs[P + t];
    for (std::size_t c = 0; c < cover.size(); ++c)
      for (std::size_t i = 0; i < w.size(); ++i) {
        MicroCell m;
        m.cutoff = g.id();
        m.point = static_cast<int>(pt);
        m.cone = static_cast<int>(c);
        m.k = params.k_grid[i];
        m.verdict = r[c][i].verdict;
        m.tail_slope = r[c][i].tail_slope;
        m.parent = outs[pt].fl[c][i].verdict;
        o.micro.push_back(m);
      }
  });

  WavefrontReport rep;
  rep.atom = f.name();
  rep.dim = f.dim();
  rep.params = params;
  rep.points = points;
  for (auto& o : outs) {
    rep.cells.insert(rep.cells.end(), o.cells.begin(), o.cells.end());
    rep.wf_s.insert(rep.wf_s.end(), o.wfs.begin(), o.wfs.end());
    rep.microlocal.insert(rep.microlocal.end(), o.micro.begin(), o.micro.end());
  }
  return rep;
}

nlohmann::json CrosscheckSummary::to_json() const {
  nlohmann::json m = nlohmann::json::object();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const std::string key = std::string(to_string(kAllDetectors[a])) + "/" + to_string(kAllDetectors[b]);
      m[key] = {{"agree", agreement[a][b]}, {"compared", compared[a][b]}};
    }
  return {{"pass", pass},
          {"scored", scored},
          {"indeterminate", indeterminate},
          {"total", total},
          {"agreement", m},
          {"disagreements", disagreements},
          {"micro_violations", micro_violations},
          {"k_violations", k_violations},
          {"q_violations", q_violations}};
}

CrosscheckSummary crosscheck(const WavefrontReport& report, const WavefrontReport* larger_q) {
  CrosscheckSummary s;
  const auto& ks = report.params.k_grid;
  const int nc = static_cast<int>(report.params.cover.size());
  auto label = [&](int p, int c, double k) {
    std::ostringstream os;
    os << report.atom << " x0=" << point_text(report.points[p]) << " cone=" << c << " k=" << k;
    return os.str();
  };
  for (const auto& c : report.cells) {
    ++s.total;
    if (c.verdict == Verdict::Indeterminate) ++s.indeterminate;
  }
  for (int p = 0; p < static_cast<int>(report.points.size()); ++p)
    for (int c = 0; c < nc; ++c) {
      for (double k : ks) {
        Verdict v[4];
        bool all = true;
        for (int d = 0; d < 4; ++d) {
          const Cell* cell = report.find(p, c, kAllDetectors[d], k);
          v[d] = cell ? cell->verdict : Verdict::Indeterminate;
          all &= v[d] != Verdict::Indeterminate;
        }
        if (all) ++s.scored;
        bool clash = false;
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b) {
            if (v[a] == Verdict::Indeterminate || v[b] == Verdict::Indeterminate) continue;
            ++s.compared[a][b];
            if (v[a] == v[b]) ++s.agreement[a][b]; else clash = true;
          }
        if (clash) {
          std::ostringstream os;
          os << label(p, c, k) << ':';
          for (int d = 0; d < 4; ++d) os << ' ' << to_string(kAllDetectors[d]) << '=' << to_string(v[d]);
          s.disagreements.push_back(os.str());
        }
      }
      // Singular at k must stay singular at every larger k.
      for (Detector d : kAllDetectors) {
        bool singular = false;
        for (double k : ks) {
          const Cell* cell = report.find(p, c, d, k);
          if (!cell) continue;
          if (cell->verdict == Verdict::Singular) singular = true;
          if (cell->verdict == Verdict::Regular && singular)
            s.k_violations.push_back(label(p, c, k) + " " + to_string(d) + " regular after singular");
        }
      }
    }
  for (const auto& m : report.microlocal)
    if (m.verdict == Verdict::Singular && m.parent == Verdict::Regular)
      s.micro_violations.push_back(label(m.point, m.cone, m.k) + " cutoff " + m.cutoff);
  if (larger_q) {
    for (const auto& c : larger_q->cells) {
      if (c.verdict != Verdict::Singular) continue;
      const Cell* base = report.find(c.point, c.cone, c.detector, c.k);
      if (base && base->verdict == Verdict::Regular)
        s.q_violations.push_back(label(c.point, c.cone, c.k) + " " + to_string(c.detector));
    }
  }
  s.pass = s.disagreements.empty() && s.micro_violations.empty() && s.k_violations.empty() && s.q_violations.empty();
  return s;
}

}  // namespace wfset
