#include "wfset/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wfset/error.hpp"
#include "wfset/quadrature.hpp"

namespace wfset {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

// Per-annulus entries: log|value·ω|, log quadrature weight, unweighted |value|.
struct Entry {
  double lv;
  double lw;
  double abs;
};

AnnulusStat reduce(const std::vector<Entry>& e, double q, double r_in, double r_out) {
  AnnulusStat a;
  a.r_inner = r_in;
  a.r_outer = r_out;
  a.nodes = static_cast<int>(e.size());
  std::vector<double> terms, measure;
  terms.reserve(e.size());
  measure.reserve(e.size());
  double mx = kNegInf;
  for (const auto& x : e) {
    terms.push_back(q * x.lv + x.lw);
    measure.push_back(x.lw);
    mx = std::max(mx, x.lv);
    a.max_abs = std::max(a.max_abs, x.abs);
  }
  if (std::isinf(q)) {
    a.log_contribution = mx;
    a.log_mean = mx;
  } else {
    a.log_contribution = log_sum_exp(terms);
    const double lm = log_sum_exp(measure);
    a.log_mean = std::isfinite(a.log_contribution) ? (a.log_contribution - lm) / q : kNegInf;
  }
  return a;
}

void finish(ConeSeminormResult& r, const SeminormOptions& opt) {
  double global = 0.0;
  for (const auto& a : r.annuli) global = std::max(global, a.max_abs);
  if (global == 0.0) {
    r.zero = true;
    r.tail_slope = kNegInf;
    r.verdict = Verdict::Regular;
    return;
  }
  const int n = static_cast<int>(r.annuli.size());
  const int k = std::min(opt.fit_annuli, n - 1);
  if (r.annuli.back().max_abs < opt.noise_floor * global) {
    r.noise_floor = true;
    r.tail_slope = kNegInf;
    r.verdict = Verdict::Regular;
    return;
  }
  std::vector<double> xs, ys;
  for (int i = n - k; i < n; ++i) {
    if (!std::isfinite(r.annuli[i].log_mean)) continue;
    xs.push_back(std::pow(r.annuli[i].r_outer, 1.0 / opt.s));
    ys.push_back(r.annuli[i].log_mean);
  }
  if (xs.size() < 2) {
    r.tail_slope = 0.0;
    r.verdict = Verdict::Indeterminate;
    return;
  }
  r.tail_slope = fit_line(xs, ys).first;
  r.verdict = classify(r.tail_slope, opt.tau);
}

// Cumulative partial values from per-annulus log contributions.
void partials_from_contributions(ConeSeminormResult& r) {
  r.value_at_radius.clear();
  std::vector<double> acc;
  double mx = kNegInf;
  for (const auto& a : r.annuli) {
    if (std::isinf(r.q)) {
      mx = std::max(mx, a.log_contribution);
      r.value_at_radius.emplace_back(a.r_outer, std::exp(mx));
    } else {
      acc.push_back(a.log_contribution);
      r.value_at_radius.emplace_back(a.r_outer, std::exp(log_sum_exp(acc) / r.q));
    }
  }
}

double log_weight(const Weight& w, const Point& x, const Point& xi) {
  if (w.domain() == Weight::Domain::PhaseSpace) {
    Point z(x.size() + xi.size());
    z << x, xi;
    return evaluate_log(w, z);
  }
  return evaluate_log(w, xi);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Regular:
      return "regular";
    case Verdict::Singular:
      return "singular";
    case Verdict::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "regular") return Verdict::Regular;
  if (s == "singular") return Verdict::Singular;
  if (s == "indeterminate") return Verdict::Indeterminate;
  throw Error(ErrorKind::InvalidArgument, "unknown verdict \"" + s + "\"");
}

Verdict classify(double slope, double tau) {
  if (slope <= -tau) return Verdict::Regular;
  if (slope >= tau) return Verdict::Singular;
  return Verdict::Indeterminate;
}

double log_sum_exp(const std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

std::vector<double> SeminormOptions::radii() const {
  std::vector<double> r(annuli + 1);
  for (int i = 0; i <= annuli; ++i) r[i] = r_max / std::pow(2.0, annuli - i);
  return r;
}

std::string cone_id(const Cone& c) {
  std::ostringstream os;
  os.precision(6);
  if (c.dim() == 1) {
    os << (c.axis()[0] > 0 ? "+" : "-");
  } else {
    os << "theta=" << std::atan2(c.axis()[1], c.axis()[0]) << ",h=" << c.half_angle();
  }
  return os.str();
}

nlohmann::json ConeSeminormResult::to_json() const {
  nlohmann::json ann = nlohmann::json::array();
  for (const auto& a : annuli)
    ann.push_back({{"r_inner", a.r_inner},
                   {"r_outer", a.r_outer},
                   {"log_mean", std::isfinite(a.log_mean) ? nlohmann::json(a.log_mean) : nlohmann::json(nullptr)},
                   {"nodes", a.nodes},
                   {"stable", a.stable}});
  nlohmann::json partial = nlohmann::json::array();
  for (const auto& [R, v] : value_at_radius) partial.push_back({R, v});
  return {{"cone_id", cone_id},
          {"weight", weight_id},
          {"q", std::isinf(q) ? nlohmann::json("inf") : nlohmann::json(q)},
          {"tail_slope", std::isfinite(tail_slope) ? nlohmann::json(tail_slope) : nlohmann::json(nullptr)},
          {"verdict", to_string(verdict)},
          {"zero", zero},
          {"noise_floor", noise_floor},
          {"flagged", flagged},
          {"annuli", ann},
          {"partials", partial}};
}

PolarNodes::PolarNodes(SpectrumFn f, int dim, double spread) : f_(std::move(f)), dim_(dim), spread_(spread) {}

const std::vector<NodeValue>& PolarNodes::nodes(const Cone& cone, double r_in, double r_out, int level) {
  const double ax0 = cone.axis()[0];
  const double ax1 = dim_ == 2 ? cone.axis()[1] : 0.0;
  const auto key = std::make_tuple(ax0, ax1, cone.half_angle(), r_in, r_out, level);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  std::vector<NodeValue> out;
  constexpr int kOrder = 8;
  // About four Gauss nodes per oscillation of period 2π/spread.
  const double density = std::max(spread_, 0.25) / (2.0 * kTwoPi);
  const int mult = 1 << level;
  const int nr = std::max(1, static_cast<int>(std::ceil((r_out - r_in) * density))) * mult;
  const QuadratureRule ref = gauss_legendre(kOrder, -1.0, 1.0);
  std::vector<double> rn, rw;
  const double hr = (r_out - r_in) / nr;
  for (int p = 0; p < nr; ++p)
    for (int i = 0; i < kOrder; ++i) {
      rn.push_back(r_in + (p + 0.5) * hr + 0.5 * hr * ref.nodes[i]);
      rw.push_back(0.5 * hr * ref.weights[i]);
    }
  if (dim_ == 1) {
    const double sgn = ax0 > 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < rn.size(); ++i) {
      NodeValue v;
      v.xi = point1(sgn * rn[i]);
      v.abs = zero_ ? 0.0 : std::abs(f_(v.xi));
      v.weight = rw[i];
      out.push_back(std::move(v));
    }
  } else {
    const double h = std::min(cone.half_angle(), kPi);
    const double th0 = std::atan2(ax1, ax0);
    const int nt = std::max(1, static_cast<int>(std::ceil(r_out * 2.0 * h * density))) * mult;
    const double ht = 2.0 * h / nt;
    for (int p = 0; p < nt; ++p)
      for (int k = 0; k < kOrder; ++k) {
        const double th = th0 - h + (p + 0.5) * ht + 0.5 * ht * ref.nodes[k];
        const double tw = 0.5 * ht * ref.weights[k];
        const double c = std::cos(th), s = std::sin(th);
        for (std::size_t i = 0; i < rn.size(); ++i) {
          NodeValue v;
          v.xi = point2(rn[i] * c, rn[i] * s);
          v.abs = zero_ ? 0.0 : std::abs(f_(v.xi));
          v.weight = rw[i] * rn[i] * tw;
          out.push_back(std::move(v));
        }
      }
  }
  return cache_.emplace(key, std::move(out)).first->second;
}

PolarNodes polar_nodes(const Atom& f, const SampleGrid& grid) {
  const ComplexVec samples = f.sample(grid);
  auto sf = std::make_shared<SampledFourier>(samples, grid);
  double spread = 0.0;
  if (!sf->is_zero()) {
    const auto [lo, hi] = f.support_box();
    spread = (hi - lo).norm();
  }
  PolarNodes nodes([sf](const Point& xi) { return (*sf)(xi); }, grid.dim, spread);
  nodes.set_zero(sf->is_zero());
  return nodes;
}

ConeSeminormResult fl_cone_seminorm(PolarNodes& spectrum, const Cone& cone, const Weight& w, double q,
                                    const SeminormOptions& opt) {
  if (!(q >= 1.0)) throw Error(ErrorKind::InvalidArgument, "fl_cone_seminorm: q must lie in [1, ∞]");
  ConeSeminormResult r;
  r.q = q;
  r.weight_id = w.id();
  r.cone_id = cone_id(cone);
  const auto radii = opt.radii();
  const Point origin = Point::Zero(spectrum.dim());
  auto entries = [&](const std::vector<NodeValue>& nv) {
    std::vector<Entry> e;
    e.reserve(nv.size());
    for (const auto& v : nv) e.push_back({safe_log(v.abs) + log_weight(w, origin, v.xi), std::log(v.weight), v.abs});
    return e;
  };
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r_in = i == 0 ? 0.0 : radii[i - 1];
    const double r_out = radii[i];
    AnnulusStat prev = reduce(entries(spectrum.nodes(cone, r_in, r_out, 0)), q, r_in, r_out);
    bool stable = false;
    for (int level = 1; level <= opt.max_doublings; ++level) {
      AnnulusStat cur = reduce(entries(spectrum.nodes(cone, r_in, r_out, level)), q, r_in, r_out);
      const double a = prev.log_contribution, b = cur.log_contribution;
      stable = (std::isinf(a) && std::isinf(b)) || std::abs(std::expm1(a - b)) <= opt.stability;
      prev = cur;
      if (stable) break;
    }
    prev.stable = stable;
    if (!stable) r.flagged = true;
    r.annuli.push_back(prev);
  }
  partials_from_contributions(r);
  finish(r, opt);
  return r;
}

ConeSeminormResult fl_cone_seminorm(const Atom& f, const Cone& cone, const Weight& w, double q,
                                    const SeminormOptions& opt, const SampleGrid& grid) {
  PolarNodes nodes = polar_nodes(f, grid);
  return fl_cone_seminorm(nodes, cone, w, q, opt);
}

std::vector<NodeValue> evaluate_at(const SpectrumFn& f, const std::vector<Point>& H) {
  std::vector<NodeValue> out;
  out.reserve(H.size());
  for (const auto& xi : H) out.push_back({xi, std::abs(f(xi)), 1.0});
  return out;
}

ConeSeminormResult fl_discrete_seminorm(const std::vector<NodeValue>& H, const Weight& w, double q,
                                        const SeminormOptions& opt) {
  if (!(q >= 1.0)) throw Error(ErrorKind::InvalidArgument, "fl_discrete_seminorm: q must lie in [1, ∞]");
  ConeSeminormResult r;
  r.q = q;
  r.weight_id = w.id();
  const auto radii = opt.radii();
  std::vector<std::vector<Entry>> bins(radii.size());
  const Point origin = H.empty() ? Point() : Point::Zero(H.front().xi.size());
  for (const auto& v : H) {
    const double n = v.xi.norm();
    const auto it = std::lower_bound(radii.begin(), radii.end(), n);
    if (it == radii.end()) continue;
    bins[it - radii.begin()].push_back({safe_log(v.abs) + log_weight(w, origin, v.xi), std::log(v.weight), v.abs});
  }
  for (std::size_t i = 0; i < radii.size(); ++i) r.annuli.push_back(reduce(bins[i], q, i == 0 ? 0.0 : radii[i - 1], radii[i]));
  partials_from_contributions(r);
  finish(r, opt);
  return r;
}

ConeSeminormResult fl_discrete_seminorm(const Atom& f, const std::vector<Point>& H, const Weight& w, double q,
                                        const SeminormOptions& opt, const SampleGrid& grid) {
  const SampledFourier sf(f.sample(grid), grid);
  return fl_discrete_seminorm(evaluate_at([&](const Point& xi) { return sf(xi); }, H), w, q, opt);
}

ConeSeminormResult mod_cone_seminorm(const StftGrid& V, const Cone& cone, const Weight& w, double p, double q,
                                     MixedOrder order, const SeminormOptions& opt,
                                     const std::vector<Eigen::Index>& rows_in) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw Error(ErrorKind::InvalidArgument, "mod_cone_seminorm: p, q must be >= 1");
  ConeSeminormResult r;
  r.q = q;
  r.weight_id = w.id();
  r.cone_id = cone_id(cone);
  const int d = V.grid.dim;
  const auto radii = opt.radii();
  const double lx = d * std::log(V.eps * V.space_step);  // log (εa)^d
  const double lxi = d * std::log(V.frequency_step);     // log b^d
  std::vector<Eigen::Index> rows = rows_in;
  if (rows.empty())
    for (Eigen::Index j = 0; j < V.values.rows(); ++j) rows.push_back(j);

  // Frequencies in the cone, binned by annulus.
  std::vector<std::vector<Eigen::Index>> bins(radii.size());
  for (Eigen::Index l = 0; l < V.values.cols(); ++l) {
    const Point xi = V.xi(l);
    const double n = xi.norm();
    if (n == 0.0 || !cone.contains(xi)) continue;
    const auto it = std::lower_bound(radii.begin(), radii.end(), n);
    if (it == radii.end()) continue;
    bins[it - radii.begin()].push_back(l);
  }
  auto lv = [&](Eigen::Index j, Eigen::Index l) {
    return safe_log(std::abs(V.values(j, l))) + log_weight(w, V.x(static_cast<std::size_t>(j)), V.xi(l));
  };
  // inner p-norm over x (log), with its unweighted maximum.
  auto inner_x = [&](Eigen::Index l, double& abs_max) {
    std::vector<double> t;
    double mx = kNegInf;
    abs_max = 0.0;
    for (Eigen::Index j : rows) {
      const double v = lv(j, l);
      mx = std::max(mx, v);
      t.push_back(p * v + lx);
      abs_max = std::max(abs_max, std::abs(V.values(j, l)));
    }
    return std::isinf(p) ? mx : log_sum_exp(t) / p;
  };

  if (order == MixedOrder::Mpq) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
      std::vector<Entry> e;
      for (Eigen::Index l : bins[i]) {
        double am = 0.0;
        const double v = inner_x(l, am);
        e.push_back({v, lxi, am});
      }
      r.annuli.push_back(reduce(e, q, i == 0 ? 0.0 : radii[i - 1], radii[i]));
    }
    partials_from_contributions(r);
  } else {
    // Per-row running ξ-sums so truncated partial values come out directly.
    std::vector<std::vector<double>> row_terms(rows.size());
    std::vector<double> row_max(rows.size(), kNegInf);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      AnnulusStat a;
      a.r_inner = i == 0 ? 0.0 : radii[i - 1];
      a.r_outer = radii[i];
      a.nodes = static_cast<int>(bins[i].size());
      std::vector<double> ann_rows, part_rows;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        std::vector<double> t;
        double mx = kNegInf;
        for (Eigen::Index l : bins[i]) {
          const double v = lv(rows[k], l);
          t.push_back(q * v + lxi);
          mx = std::max(mx, v);
          a.max_abs = std::max(a.max_abs, std::abs(V.values(rows[k], l)));
          row_terms[k].push_back(q * v + lxi);
        }
        row_max[k] = std::max(row_max[k], mx);
        const double ann = std::isinf(q) ? mx : log_sum_exp(t) / q;
        const double cum = std::isinf(q) ? row_max[k] : log_sum_exp(row_terms[k]) / q;
        ann_rows.push_back(std::isinf(p) ? ann : p * ann + lx);
        part_rows.push_back(std::isinf(p) ? cum : p * cum + lx);
      }
      auto combine = [&](const std::vector<double>& v) {
        if (std::isinf(p)) return *std::max_element(v.begin(), v.end());
        return log_sum_exp(v) / p;
      };
      const double ann_log = rows.empty() ? kNegInf : combine(ann_rows);
      const double part_log = rows.empty() ? kNegInf : combine(part_rows);
      a.log_contribution = std::isinf(q) ? ann_log : q * ann_log;
      const double measure = a.nodes > 0 ? std::log(static_cast<double>(a.nodes)) + lxi : 0.0;
      a.log_mean = std::isinf(q) ? ann_log : ann_log - measure / q;
      r.annuli.push_back(a);
      r.value_at_radius.emplace_back(a.r_outer, std::exp(part_log));
    }
  }
  finish(r, opt);
  return r;
}

Atom localize(const Atom& f, const Window& cutoff, const Point& x0) {
  if (!cutoff.compact()) throw Error(ErrorKind::InvalidArgument, "localize: cutoff must be compactly supported");
  if (cutoff(Point::Zero(x0.size())) == 0.0) throw Error(ErrorKind::InvalidArgument, "localize: cutoff vanishes at 0");
  return f.localized(cutoff, x0);
}

}  // namespace wfset
