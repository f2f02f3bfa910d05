#include "wfset/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wfset/error.hpp"

namespace wfset {

namespace {

// sup_{r ≥ 0} (|t|/2)·log(1+r²) − k·r^{1/s}, found on a log-spaced scan and
// refined by golden section.
double polynomial_moderation_log_constant(double t, double k, double s) {
  const double a = 0.5 * std::abs(t);
  auto g = [&](double r) { return a * std::log1p(r * r) - k * std::pow(r, 1.0 / s); };
  double best_r = 0.0;
  double best = 0.0;
  for (int i = -40; i <= 400; ++i) {
    const double r = std::pow(10.0, i / 20.0);
    const double v = g(r);
    if (v > best) {
      best = v;
      best_r = r;
    }
  }
  if (best_r == 0.0) return 0.0;
  double lo = best_r / std::pow(10.0, 0.05);
  double hi = best_r * std::pow(10.0, 0.05);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - phi * (hi - lo);
    const double m2 = lo + phi * (hi - lo);
    if (g(m1) > g(m2)) hi = m2; else lo = m1;
  }
  // Small safety margin for the scan resolution.
  return std::max(best, g(0.5 * (lo + hi))) + 1e-12;
}

}  // namespace

Weight Weight::constant(double s) {
  Weight w;
  w.kind_ = Kind::Constant;
  w.s_ = s;
  w.certify();
  return w;
}

Weight Weight::polynomial(double t, double s) {
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "polynomial weight: t must be finite");
  Weight w;
  w.kind_ = Kind::Polynomial;
  w.t_ = t;
  w.s_ = s;
  w.certify();
  return w;
}

Weight Weight::sub_exponential(double k, double s) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidArgument, "sub-exponential weight: k must be > 0");
  if (!(s >= 1.0)) throw Error(ErrorKind::InvalidArgument, "sub-exponential weight: s must be >= 1");
  Weight w;
  w.kind_ = Kind::SubExponential;
  w.k_ = k;
  w.s_ = s;
  w.certify();
  return w;
}

Weight Weight::product(std::vector<Weight> factors) {
  if (factors.empty()) throw Error(ErrorKind::InvalidArgument, "product weight needs at least one factor");
  Weight w;
  w.kind_ = Kind::Product;
  w.s_ = factors.front().s();
  for (const auto& f : factors) w.s_ = std::min(w.s_, f.certificate().s);
  w.domain_ = factors.front().domain();
  w.factors_ = std::move(factors);
  w.certify();
  return w;
}

Weight Weight::with_domain(Domain domain) const {
  Weight w = *this;
  w.domain_ = domain;
  for (auto& f : w.factors_) f = f.with_domain(domain);
  return w;
}

bool Weight::admissible() const {
  if (kind_ == Kind::Product)
    return std::all_of(factors_.begin(), factors_.end(), [](const Weight& f) { return f.admissible(); });
  return s_ > 1.0;
}

void Weight::certify() {
  switch (kind_) {
    case Kind::Constant:
      cert_ = {s_, 0.0, 1.0};
      break;
    case Kind::SubExponential:
      // |x+y|^{1/s} ≤ |x|^{1/s} + |y|^{1/s} for s ≥ 1, so C = 1 is tight.
      cert_ = {s_, k_, 1.0};
      break;
    case Kind::Polynomial: {
      // Peetre: ⟨x+y⟩^t ≤ 2^{|t|/2}⟨x⟩^{|t|}⟨y⟩^t, and ⟨x⟩^{|t|} ≤ C e^{|x|^{1/s}}.
      const double k = 1.0;
      const double log_c = 0.5 * std::abs(t_) * std::log(2.0) + polynomial_moderation_log_constant(t_, k, s_);
      cert_ = {s_, k, std::exp(log_c)};
      break;
    }
    case Kind::Product: {
      ModerationCertificate c{s_, 0.0, 1.0};
      for (const auto& f : factors_) {
        const auto& fc = f.certificate();
        c.k += fc.k;
        c.C *= fc.C;
        // |x|^{1/s_f} ≤ 1 + |x|^{1/s} when s ≤ s_f.
        if (fc.s > s_) c.C *= std::exp(fc.k);
      }
      cert_ = c;
      break;
    }
  }
}

std::string Weight::id() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant:
      os << "const";
      break;
    case Kind::Polynomial:
      os << "poly(t=" << t_ << ")";
      break;
    case Kind::SubExponential:
      os << "subexp(k=" << k_ << ",s=" << s_ << ")";
      break;
    case Kind::Product:
      os << "prod(";
      for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "," : "") << factors_[i].id();
      os << ")";
      break;
  }
  return os.str();
}

double evaluate_log(const Weight& w, double abs_xi) {
  switch (w.kind()) {
    case Weight::Kind::Constant:
      return 0.0;
    case Weight::Kind::Polynomial:
      return 0.5 * w.t() * std::log1p(abs_xi * abs_xi);
    case Weight::Kind::SubExponential:
      return w.k() * std::pow(abs_xi, 1.0 / w.s());
    case Weight::Kind::Product: {
      double acc = 0.0;
      for (const auto& f : w.factors()) acc += evaluate_log(f, abs_xi);
      return acc;
    }
  }
  return 0.0;
}

double evaluate_log(const Weight& w, const Eigen::Ref<const Point>& xi) {
  return evaluate_log(w, xi.norm());
}

bool check_moderate(const Weight& w, const ModerationCertificate& cert,
                    const std::vector<std::pair<Point, Point>>& samples) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "check_moderate: samples must be nonempty");
  const double log_c = std::log(cert.C);
  for (const auto& [x, y] : samples) {
    const Point sum = x + y;
    const double lhs = evaluate_log(w, sum);
    const double rhs = log_c + cert.k * std::pow(x.norm(), 1.0 / cert.s) + evaluate_log(w, y);
    if (lhs > rhs + 1e-9) return false;
  }
  return true;
}

BeurlingDomarSum beurling_domar_partial_sum(const Weight& w, const Eigen::Ref<const Point>& x, long N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "beurling_domar_partial_sum: N must be >= 1");
  const double r = x.norm();
  // Kahan-compensated sum; partial sums at N/4, N/2 and N feed the tail test.
  double sum = 0.0;
  double comp = 0.0;
  double s_quarter = 0.0;
  double s_half = 0.0;
  for (long n = 1; n <= N; ++n) {
    const double nn = static_cast<double>(n);
    const double term = evaluate_log(w, nn * r) / (nn * nn);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (n == N / 4) s_quarter = sum;
    if (n == N / 2) s_half = sum;
  }
  BeurlingDomarSum out;
  out.value = sum;
  const double tail = sum - s_half;
  const double prev_tail = s_half - s_quarter;
  if (N >= 16 && std::abs(prev_tail) > 0.0) {
    // Convergent series shrink their dyadic tails geometrically; harmonic-like
    // ones keep a constant tail.
    out.divergent = std::abs(tail) >= 0.95 * std::abs(prev_tail);
  }
  return out;
}

void to_json(nlohmann::json& j, const Weight& w) {
  switch (w.kind()) {
    case Weight::Kind::Constant:
      j = {{"kind", "constant"}, {"s", w.s()}};
      break;
    case Weight::Kind::Polynomial:
      j = {{"kind", "polynomial"}, {"t", w.t()}, {"s", w.s()}};
      break;
    case Weight::Kind::SubExponential:
      j = {{"kind", "subexponential"}, {"k", w.k()}, {"s", w.s()}};
      break;
    case Weight::Kind::Product: {
      j = {{"kind", "product"}};
      auto arr = nlohmann::json::array();
      for (const auto& f : w.factors()) {
        nlohmann::json fj;
        to_json(fj, f);
        arr.push_back(fj);
      }
      j["factors"] = arr;
      break;
    }
  }
  if (w.domain() == Weight::Domain::PhaseSpace) j["domain"] = "phase_space";
}

Weight weight_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw Error(ErrorKind::Config, "weight: expected an object with a \"kind\" field");
  for (const auto& [key, _] : j.items()) {
    if (key != "kind" && key != "k" && key != "s" && key != "t" && key != "factors" && key != "domain")
      throw Error(ErrorKind::Config, "weight: unknown key \"" + key + "\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const double s = j.value("s", 2.0);
  Weight w = Weight::constant(s);
  if (kind == "constant") {
    w = Weight::constant(s);
  } else if (kind == "polynomial") {
    w = Weight::polynomial(j.at("t").get<double>(), s);
  } else if (kind == "subexponential") {
    w = Weight::sub_exponential(j.at("k").get<double>(), s);
  } else if (kind == "product") {
    std::vector<Weight> fs;
    for (const auto& f : j.at("factors")) fs.push_back(weight_from_json(f));
    w = Weight::product(std::move(fs));
  } else {
    throw Error(ErrorKind::Config, "weight: unknown kind \"" + kind + "\"");
  }
  if (j.contains("domain")) {
    const std::string d = j.at("domain").get<std::string>();
    if (d == "phase_space") w = w.with_domain(Weight::Domain::PhaseSpace);
    else if (d != "frequency") throw Error(ErrorKind::Config, "weight: unknown domain \"" + d + "\"");
  }
  return w;
}

}  // namespace wfset
