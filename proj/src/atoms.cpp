#include "wfset/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wfset/error.hpp"
#include "wfset/quadrature.hpp"

namespace wfset {

namespace {

Point to_point(const nlohmann::json& j, int dim, const char* what) {
  if (j.is_number()) {
    if (dim != 1) throw Error(ErrorKind::Config, std::string(what) + ": expected a " + std::to_string(dim) + "-vector");
    return point1(j.get<double>());
  }
  const auto v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != dim)
    throw Error(ErrorKind::Config, std::string(what) + ": expected a " + std::to_string(dim) + "-vector");
  return Eigen::Map<const Point>(v.data(), dim);
}

Factor envelope(const Window& w, const Point& center) {
  Factor f;
  f.kind = Factor::Kind::Envelope;
  f.window = w;
  f.center = center;
  return f;
}

double half_space(const Factor& f, const Eigen::Ref<const Point>& x) {
  const double v = f.normal.dot(x) - f.offset;
  if (std::abs(v) <= 1e-12) return 0.5;
  return v > 0.0 ? 1.0 : 0.0;
}

Complex term_value(const Term& t, const Eigen::Ref<const Point>& x) {
  Complex acc = t.amplitude;
  for (const auto& f : t.factors) {
    switch (f.kind) {
      case Factor::Kind::Envelope: {
        const Point y = x - f.center;
        acc *= (*f.window)(y);
        break;
      }
      case Factor::Kind::HalfSpace:
        acc *= half_space(f, x);
        break;
      case Factor::Kind::Modulation:
        acc *= std::polar(1.0, f.frequency.dot(x));
        break;
    }
    if (acc == Complex(0.0)) return acc;
  }
  return acc;
}

std::pair<Point, Point> term_box(const Term& t, int dim) {
  Point lo = Point::Constant(dim, -std::numeric_limits<double>::infinity());
  Point hi = Point::Constant(dim, std::numeric_limits<double>::infinity());
  bool any = false;
  for (const auto& f : t.factors) {
    if (f.kind != Factor::Kind::Envelope) continue;
    const double r = f.window->support_radius();
    lo = lo.cwiseMax((f.center.array() - r).matrix());
    hi = hi.cwiseMin((f.center.array() + r).matrix());
    any = true;
  }
  if (!any) throw Error(ErrorKind::InvalidArgument, "atom term without an envelope is not compactly supported");
  for (const auto& f : t.factors) {
    if (f.kind != Factor::Kind::HalfSpace) continue;
    Eigen::Index axis = 0;
    if (f.normal.cwiseAbs().maxCoeff(&axis) != f.normal.cwiseAbs().sum()) continue;  // oblique
    const double c = f.offset / f.normal[axis];
    if (f.normal[axis] > 0.0) lo[axis] = std::max(lo[axis], c);
    else hi[axis] = std::min(hi[axis], c);
  }
  return {lo, hi};
}

// Closed form when the term is a single Gaussian envelope times modulations.
std::optional<Complex> gaussian_closed_form(const Term& t, const Eigen::Ref<const Point>& xi) {
  const Factor* env = nullptr;
  Point carrier = Point::Zero(xi.size());
  for (const auto& f : t.factors) {
    if (f.kind == Factor::Kind::HalfSpace) return std::nullopt;
    if (f.kind == Factor::Kind::Modulation) carrier += f.frequency;
    if (f.kind == Factor::Kind::Envelope) {
      if (env || f.window->kind() != Window::Kind::Gaussian) return std::nullopt;
      env = &f;
    }
  }
  if (!env) return std::nullopt;
  const double w = env->window->width() * env->window->scale();
  const Point eta = xi - carrier;
  const int d = static_cast<int>(xi.size());
  // The modulation also contributes exp(i⟨ξ_c, c⟩) at the center.
  return t.amplitude * std::pow(w, d) * std::exp(-0.5 * w * w * eta.squaredNorm()) *
         std::polar(1.0, -env->center.dot(eta)) * std::polar(1.0, 0.0);
}

QuadratureResult<Complex> term_quadrature(const Term& t, const Eigen::Ref<const Point>& xi, int dim) {
  const auto [lo, hi] = term_box(t, dim);
  QuadratureResult<Complex> total;
  if (dim == 1) {
    std::vector<double> cuts{lo[0], hi[0]};
    for (const auto& f : t.factors) {
      if (f.kind == Factor::Kind::HalfSpace && f.normal[0] != 0.0) {
        const double c = f.offset / f.normal[0];
        if (c > lo[0] && c < hi[0]) cuts.push_back(c);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    const double xi0 = xi[0];
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      // Evaluate strictly inside each piece so the half-space takes its one-sided value.
      const double mid = 0.5 * (a + b);
      const double side = [&] {
        double v = 1.0;
        for (const auto& f : t.factors)
          if (f.kind == Factor::Kind::HalfSpace) v *= (f.normal[0] * mid - f.offset) > 0.0 ? 1.0 : 0.0;
        return v;
      }();
      if (side == 0.0) continue;
      Term smooth = t;
      smooth.factors.erase(std::remove_if(smooth.factors.begin(), smooth.factors.end(),
                                          [](const Factor& f) { return f.kind == Factor::Kind::HalfSpace; }),
                           smooth.factors.end());
      auto r = integrate(
          [&](double x) { return term_value(smooth, point1(x)) * std::polar(1.0, -xi0 * x); }, a, b, 1e-10, 50);
      total.value += r.value;
      total.error += r.error;
      total.evaluations += r.evaluations;
    }
    return total;
  }
  // 2D: nested adaptive rules; the half-plane boundary splits the inner interval.
  Term smooth = t;
  std::vector<Factor> planes;
  for (const auto& f : t.factors)
    if (f.kind == Factor::Kind::HalfSpace) planes.push_back(f);
  smooth.factors.erase(std::remove_if(smooth.factors.begin(), smooth.factors.end(),
                                      [](const Factor& f) { return f.kind == Factor::Kind::HalfSpace; }),
                       smooth.factors.end());
  double inner_err = 0.0;
  auto inner = [&](double x1) -> Complex {
    double a = lo[1], b = hi[1];
    for (const auto& p : planes) {
      if (p.normal[1] == 0.0) {
        if (p.normal[0] * x1 - p.offset <= 0.0) return 0.0;
        continue;
      }
      const double c = (p.offset - p.normal[0] * x1) / p.normal[1];
      if (p.normal[1] > 0.0) a = std::max(a, c); else b = std::min(b, c);
    }
    if (!(b > a)) return 0.0;
    auto r = integrate(
        [&](double x2) { return term_value(smooth, point2(x1, x2)) * std::polar(1.0, -(xi[0] * x1 + xi[1] * x2)); }, a,
        b, 1e-11, 40);
    inner_err += r.error;
    return r.value;
  };
  std::vector<double> cuts{lo[0], hi[0]};
  for (const auto& p : planes)
    if (p.normal[1] == 0.0 && p.normal[0] != 0.0) {
      const double c = p.offset / p.normal[0];
      if (c > lo[0] && c < hi[0]) cuts.push_back(c);
    }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto r = integrate(inner, cuts[i], cuts[i + 1], 1e-9, 30);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  }
  total.error += inner_err * 1e-3;  // inner estimates are summed per outer node
  return total;
}

}  // namespace

Atom Atom::delta(const Point& at, Complex amplitude) {
  Atom a("delta", static_cast<int>(at.size()));
  a.masses_.push_back({at, amplitude});
  WfComponent c;
  c.shape = WfComponent::Shape::Point;
  c.a = at;
  a.truth_.push_back(c);
  return a;
}

Atom Atom::jump_bump(double jump, const Window& envelope_window, double center) {
  Atom a("jump", 1);
  Term t;
  t.factors.push_back(envelope(envelope_window, point1(center)));
  Factor h;
  h.kind = Factor::Kind::HalfSpace;
  h.normal = point1(1.0);
  h.offset = jump;
  t.factors.push_back(h);
  a.terms_.push_back(t);
  WfComponent c;
  c.shape = WfComponent::Shape::Point;
  c.a = point1(jump);
  a.truth_.push_back(c);
  if (envelope_window.compact()) {
    // The flat edge of the envelope on the surviving side.
    const double edge = center + envelope_window.support_radius();
    if (edge > jump) {
      WfComponent e;
      e.shape = WfComponent::Shape::Point;
      e.a = point1(edge);
      e.below_order = envelope_window.gevrey_order();
      a.truth_.push_back(e);
    }
  }
  return a;
}

Atom Atom::gevrey_bump(double sigma, double radius, const Point& center) {
  const int d = static_cast<int>(center.size());
  Atom a("gevrey_bump", d);
  Term t;
  t.factors.push_back(envelope(Window::gevrey_bump(sigma, radius, d), center));
  a.terms_.push_back(t);
  WfComponent c;
  c.shape = WfComponent::Shape::Sphere;
  c.a = center;
  c.radius = radius;
  c.below_order = sigma;
  a.truth_.push_back(c);
  return a;
}

Atom Atom::gaussian(double width, const Point& center) {
  const int d = static_cast<int>(center.size());
  Atom a("gaussian", d);
  Term t;
  t.factors.push_back(envelope(Window::gaussian(width, d), center));
  a.terms_.push_back(t);
  return a;
}

Atom Atom::modulated_bump(double sigma, double radius, const Point& center, const Point& carrier) {
  Atom a = gevrey_bump(sigma, radius, center);
  a.name_ = "modulated_bump";
  Factor m;
  m.kind = Factor::Kind::Modulation;
  m.frequency = carrier;
  a.terms_.front().factors.push_back(m);
  return a;
}

Atom Atom::half_plane_bump(const Point& normal, double offset, const Window& env, const Point& center) {
  if (normal.size() != 2) throw Error(ErrorKind::InvalidArgument, "half_plane_bump: 2D only");
  Atom a("half_plane", 2);
  const Point n = normal.normalized();
  const double off = offset / normal.norm();
  Term t;
  t.factors.push_back(envelope(env, center));
  Factor h;
  h.kind = Factor::Kind::HalfSpace;
  h.normal = n;
  h.offset = off;
  t.factors.push_back(h);
  a.terms_.push_back(t);
  // Edge segment: the line ⟨n,x⟩ = off inside the envelope ball.
  const double dist = off - n.dot(center);
  const double R = env.support_radius();
  if (std::abs(dist) < R) {
    const Point foot = center + dist * n;
    const Point tangent = point2(-n[1], n[0]);
    const double half = std::sqrt(R * R - dist * dist);
    WfComponent c;
    c.shape = WfComponent::Shape::Segment;
    c.directions = WfComponent::Directions::Normal;
    c.a = foot - half * tangent;
    c.b = foot + half * tangent;
    c.normal = n;
    a.truth_.push_back(c);
  }
  if (env.compact()) {
    WfComponent e;
    e.shape = WfComponent::Shape::Sphere;
    e.directions = WfComponent::Directions::Normal;
    e.a = center;
    e.radius = R;
    e.below_order = env.gevrey_order();
    a.truth_.push_back(e);
  }
  return a;
}

Atom Atom::sum(std::string name, const std::vector<Atom>& parts) {
  if (parts.empty()) throw Error(ErrorKind::InvalidArgument, "sum: no parts");
  Atom a(std::move(name), parts.front().dim());
  for (const auto& p : parts) {
    if (p.dim() != a.dim()) throw Error(ErrorKind::InvalidArgument, "sum: dimension mismatch");
    a.masses_.insert(a.masses_.end(), p.masses_.begin(), p.masses_.end());
    a.terms_.insert(a.terms_.end(), p.terms_.begin(), p.terms_.end());
    a.truth_.insert(a.truth_.end(), p.truth_.begin(), p.truth_.end());
  }
  return a;
}

Complex Atom::density(const Eigen::Ref<const Point>& x) const {
  Complex acc = 0.0;
  for (const auto& t : terms_) acc += term_value(t, x);
  return acc;
}

ComplexVec Atom::sample(const SampleGrid& grid) const {
  grid.validate();
  if (grid.dim != dim_) throw Error(ErrorKind::InvalidArgument, "sample: grid dimension mismatch");
  ComplexVec out = ComplexVec::Zero(grid.size());
  const double h = grid.step();
  for (const auto& t : terms_) {
    const auto [lo, hi] = term_box(t, dim_);
    const int a0 = std::max(0, static_cast<int>(std::floor((lo[0] + grid.half_width) / h)));
    const int a1 = std::min(grid.n - 1, static_cast<int>(std::ceil((hi[0] + grid.half_width) / h)));
    if (dim_ == 1) {
      for (int m = a0; m <= a1; ++m) out[m] += term_value(t, point1(grid.coord(m)));
    } else {
      const int b0 = std::max(0, static_cast<int>(std::floor((lo[1] + grid.half_width) / h)));
      const int b1 = std::min(grid.n - 1, static_cast<int>(std::ceil((hi[1] + grid.half_width) / h)));
      for (int m1 = a0; m1 <= a1; ++m1)
        for (int m2 = b0; m2 <= b1; ++m2) out[grid.flat(m1, m2)] += term_value(t, point2(grid.coord(m1), grid.coord(m2)));
    }
  }
  for (const auto& m : masses_) {
    const int i = grid.nearest(m.at[0]);
    const int k = dim_ == 2 ? grid.nearest(m.at[1]) : 0;
    if (!grid.inside(i) || !grid.inside(k)) continue;
    out[grid.flat(i, k)] += m.amplitude / grid.cell();
  }
  return out;
}

std::pair<Point, Point> Atom::support_box() const {
  Point lo = Point::Constant(dim_, std::numeric_limits<double>::infinity());
  Point hi = Point::Constant(dim_, -std::numeric_limits<double>::infinity());
  for (const auto& t : terms_) {
    const auto [a, b] = term_box(t, dim_);
    lo = lo.cwiseMin(a);
    hi = hi.cwiseMax(b);
  }
  for (const auto& m : masses_) {
    lo = lo.cwiseMin(m.at);
    hi = hi.cwiseMax(m.at);
  }
  return {lo, hi};
}

Atom Atom::localized(const Window& cutoff, const Point& x0) const {
  Atom a = *this;
  a.name_ = name_ + "@loc";
  for (auto& m : a.masses_) {
    const Point y = m.at - x0;
    m.amplitude *= cutoff(y);
  }
  a.masses_.erase(std::remove_if(a.masses_.begin(), a.masses_.end(),
                                 [](const PointMass& m) { return m.amplitude == Complex(0.0); }),
                  a.masses_.end());
  for (auto& t : a.terms_) t.factors.push_back(envelope(cutoff, x0));
  // Drop terms whose support no longer meets the cut-off.
  a.terms_.erase(std::remove_if(a.terms_.begin(), a.terms_.end(),
                                [&](const Term& t) {
                                  const auto [lo, hi] = term_box(t, dim_);
                                  return ((hi - lo).array() <= 0.0).any();
                                }),
                 a.terms_.end());
  return a;
}

OracleValue fourier_oracle(const Atom& a, const Eigen::Ref<const Point>& xi, bool allow_quadrature) {
  const int d = a.dim();
  OracleValue out;
  out.closed_form = true;
  Complex acc = 0.0;
  for (const auto& m : a.masses()) acc += m.amplitude * std::polar(1.0, -m.at.dot(xi));
  for (const auto& t : a.terms()) {
    if (auto cf = gaussian_closed_form(t, xi)) {
      // The raw integral is w^d·(2π)^{d/2}·exp(...); keep the same scale as masses.
      acc += *cf * std::pow(kTwoPi, 0.5 * d);
      continue;
    }
    if (!allow_quadrature)
      throw Error(ErrorKind::OracleUnavailable, "fourier_oracle: no closed form for a term of " + a.name());
    const auto r = term_quadrature(t, xi, d);
    acc += r.value;
    out.error_bound += r.error;
    out.closed_form = false;
  }
  const double norm = fourier_norm(d);
  out.value = norm * acc;
  out.error_bound *= norm;
  return out;
}

TruthAtPoint ground_truth_wf(const Atom& a, const Eigen::Ref<const Point>& x0, double s, double tol) {
  TruthAtPoint out;
  for (const auto& c : a.ground_truth()) {
    if (c.below_order > 0.0 && s >= c.below_order) continue;
    bool hit = false;
    Point normal;
    switch (c.shape) {
      case WfComponent::Shape::Point:
        hit = (x0 - c.a).norm() <= tol;
        break;
      case WfComponent::Shape::Segment: {
        const Point ab = c.b - c.a;
        const double t = std::clamp((x0 - c.a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        hit = (x0 - (c.a + t * ab)).norm() <= tol;
        normal = c.normal;
        break;
      }
      case WfComponent::Shape::Sphere: {
        const Point r = x0 - c.a;
        hit = std::abs(r.norm() - c.radius) <= tol;
        if (hit && r.norm() > 0.0) normal = r.normalized();
        break;
      }
    }
    if (!hit) continue;
    if (c.directions == WfComponent::Directions::All || a.dim() == 1) out.singular_all = true;
    else out.normals.push_back(normal);
  }
  return out;
}

Atom make_atom(const std::string& name, int dim, const nlohmann::json& params) {
  auto num = [&](const char* key, double dflt) { return params.contains(key) ? params.at(key).get<double>() : dflt; };
  auto pt = [&](const char* key, const Point& dflt) { return params.contains(key) ? to_point(params.at(key), dim, key) : dflt; };
  auto env = [&](double sigma, double radius) {
    return params.contains("envelope") ? window_from_json(params.at("envelope"), dim) : Window::gevrey_bump(sigma, radius, dim);
  };
  const Point origin = Point::Zero(dim);
  Atom a;
  if (name == "delta") {
    a = Atom::delta(pt("at", Point::Constant(dim, 0.25)), num("amplitude", 1.0));
  } else if (name == "jump") {
    if (dim != 1) throw Error(ErrorKind::Config, "jump: 1D atom");
    a = Atom::jump_bump(num("jump", 0.25), env(1.5, 2.0), num("center", 0.0));
  } else if (name == "gevrey_bump") {
    a = Atom::gevrey_bump(num("sigma", 2.0), num("radius", 1.0), pt("center", origin));
  } else if (name == "gaussian") {
    a = Atom::gaussian(num("width", 0.5), pt("center", origin));
  } else if (name == "modulated_bump") {
    a = Atom::modulated_bump(num("sigma", 1.5), num("radius", 1.0), pt("center", origin),
                             pt("carrier", Point::Constant(dim, 20.0)));
  } else if (name == "half_plane") {
    if (dim != 2) throw Error(ErrorKind::Config, "half_plane: 2D atom");
    a = Atom::half_plane_bump(pt("normal", point2(0.0, 1.0)), num("offset", 0.0), env(1.5, 1.5), pt("center", origin));
  } else if (name.rfind("sum:[", 0) == 0 && name.back() == ']') {
    std::vector<Atom> parts;
    const std::string inner = name.substr(5, name.size() - 6);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      const std::size_t next = inner.find(',', pos);
      const std::string part = inner.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      if (!part.empty()) parts.push_back(make_atom(part, dim));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    a = Atom::sum(name, parts);
  } else {
    throw Error(ErrorKind::Config, "unknown atom \"" + name + "\"");
  }
  return a;
}

Atom atom_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    return make_atom(name, name == "half_plane" ? 2 : 1);
  }
  if (!j.is_object() || !j.contains("kind")) throw Error(ErrorKind::Config, "atom: expected a name or an object with \"kind\"");
  static const std::vector<std::string> allowed = {"kind", "dim",    "name",   "at",       "amplitude", "jump",
                                                   "center", "sigma", "radius", "carrier", "normal",    "offset",
                                                   "envelope", "width", "terms"};
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorKind::Config, "atom: unknown key \"" + key + "\"");
  const std::string kind = j.at("kind").get<std::string>();
  const int dim = j.value("dim", kind == "half_plane" ? 2 : 1);
  Atom a;
  if (kind == "sum") {
    std::vector<Atom> parts;
    for (const auto& t : j.at("terms")) parts.push_back(atom_from_json(t));
    a = Atom::sum("sum", parts);
  } else {
    a = make_atom(kind, dim, j);
  }
  if (j.contains("name")) a.rename(j.at("name").get<std::string>());
  return a;
}

}  // namespace wfset
