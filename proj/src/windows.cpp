#include "wfset/windows.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "wfset/error.hpp"
#include "wfset/quadrature.hpp"

namespace wfset {

namespace {

double bump_profile(double r, double alpha) {
  if (r >= 1.0) return 0.0;
  const double t = 1.0 - r * r;
  return std::exp(-std::pow(t, -alpha));
}

double unit_ball_integral(double sigma, int dim) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, double> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({sigma, dim});
    if (it != cache.end()) return it->second;
  }
  const double alpha = 1.0 / (sigma - 1.0);
  double value = 0.0;
  if (dim == 1) {
    const std::function<double(double)> f = [&](double r) { return bump_profile(r, alpha); };
    value = 2.0 * integrate(f, 0.0, 1.0, 1e-16).value;
  } else {
    const std::function<double(double)> f = [&](double r) { return bump_profile(r, alpha) * r; };
    value = kTwoPi * integrate(f, 0.0, 1.0, 1e-16).value;
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(std::make_pair(sigma, dim), value);
  return value;
}

constexpr double kGaussianReach = 8.8503;  // sqrt(2 ln 1e17)

}  // namespace

double gevrey_bump_normalization(double sigma, double radius, int dim) {
  return 1.0 / (std::pow(radius, dim) * unit_ball_integral(sigma, dim));
}

Window Window::gevrey_bump(double sigma, double radius, int dim) {
  if (!(sigma > 1.0))
    throw Error(ErrorKind::InvalidArgument,
                "gevrey_bump: order must exceed 1 (quasi-analytic classes have no compactly supported members)");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "gevrey_bump: radius must be positive");
  if (dim != 1 && dim != 2) throw Error(ErrorKind::InvalidArgument, "gevrey_bump: d must be 1 or 2");
  Window w;
  w.kind_ = Kind::GevreyBump;
  w.dim_ = dim;
  w.sigma_ = sigma;
  w.radius_ = radius;
  w.norm_ = gevrey_bump_normalization(sigma, radius, dim);
  return w;
}

Window Window::gaussian(double width, int dim) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "gaussian: width must be positive");
  Window w;
  w.kind_ = Kind::Gaussian;
  w.dim_ = dim;
  w.width_ = width;
  w.sigma_ = 1.0;
  w.radius_ = kGaussianReach * width;
  return w;
}

Window Window::tight_partition(const Window& base, double lattice_step) {
  if (!(lattice_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "tight_partition: step must be positive");
  Window w;
  w.kind_ = Kind::TightPartition;
  w.dim_ = base.dim_;
  w.sigma_ = base.gevrey_order();
  w.radius_ = base.support_radius();
  w.step_ = lattice_step;
  w.base_ = std::make_shared<const Window>(base);
  return w;
}

Window Window::painless_dual(const Window& base, double lattice_step, double kappa) {
  Window w;
  w.kind_ = Kind::PainlessDual;
  w.dim_ = base.dim_;
  w.sigma_ = base.gevrey_order();
  w.radius_ = base.support_radius();
  w.step_ = lattice_step;
  w.kappa_ = kappa;
  w.base_ = std::make_shared<const Window>(base);
  return w;
}

Window Window::dilated(double eps) const {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "dilated: scale must be positive");
  Window w = *this;
  w.scale_ *= eps;
  return w;
}

double Window::lattice_square_sum(const Eigen::Ref<const Point>& y, double a) const {
  const double reach = support_radius();
  double acc = 0.0;
  if (dim_ == 1) {
    const long j0 = static_cast<long>(std::floor((y[0] - reach) / a));
    const long j1 = static_cast<long>(std::ceil((y[0] + reach) / a));
    for (long j = j0; j <= j1; ++j) {
      const double v = (*this)(y[0] - a * j);
      acc += v * v;
    }
    return acc;
  }
  const long i0 = static_cast<long>(std::floor((y[0] - reach) / a));
  const long i1 = static_cast<long>(std::ceil((y[0] + reach) / a));
  const long k0 = static_cast<long>(std::floor((y[1] - reach) / a));
  const long k1 = static_cast<long>(std::ceil((y[1] + reach) / a));
  for (long i = i0; i <= i1; ++i) {
    for (long k = k0; k <= k1; ++k) {
      const double v = (*this)(point2(y[0] - a * i, y[1] - a * k));
      acc += v * v;
    }
  }
  return acc;
}

double Window::eval_undilated(const Eigen::Ref<const Point>& y) const {
  switch (kind_) {
    case Kind::GevreyBump:
      return norm_ * bump_profile(y.norm() / radius_, 1.0 / (sigma_ - 1.0));
    case Kind::Gaussian:
      return std::exp(-y.squaredNorm() / (2.0 * width_ * width_));
    case Kind::TightPartition: {
      const double b = (*base_)(y);
      if (b == 0.0) return 0.0;
      return b / std::sqrt(base_->lattice_square_sum(y, step_));
    }
    case Kind::PainlessDual: {
      const double b = (*base_)(y);
      if (b == 0.0) return 0.0;
      return b / (kappa_ * base_->lattice_square_sum(y, step_));
    }
  }
  return 0.0;
}

double Window::operator()(const Eigen::Ref<const Point>& x) const {
  if (scale_ == 1.0) return eval_undilated(x);
  const Point y = x / scale_;
  return eval_undilated(y);
}

double Window::operator()(double x) const {
  Point p(1);
  p[0] = x;
  return (*this)(p);
}

double Window::support_radius() const { return scale_ * radius_; }

double Window::stated_integral() const {
  const double dil = std::pow(scale_, dim_);
  switch (kind_) {
    case Kind::GevreyBump:
      return dil;
    case Kind::Gaussian:
      return dil * std::pow(kTwoPi * width_ * width_, 0.5 * dim_);
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

double Window::gevrey_order() const { return sigma_; }

std::string Window::id() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::GevreyBump:
      os << "gevrey(sigma=" << sigma_ << ",R=" << radius_ << ")";
      break;
    case Kind::Gaussian:
      os << "gaussian(w=" << width_ << ")";
      break;
    case Kind::TightPartition:
      os << "tight(" << base_->id() << ",a=" << step_ << ")";
      break;
    case Kind::PainlessDual:
      os << "dual(" << base_->id() << ",a=" << step_ << ")";
      break;
  }
  if (scale_ != 1.0) os << "@eps=" << scale_;
  return os.str();
}

void to_json(nlohmann::json& j, const Window& w) {
  switch (w.kind()) {
    case Window::Kind::GevreyBump:
      j = {{"kind", "gevrey_bump"}, {"sigma", w.sigma()}, {"radius", w.radius()}};
      break;
    case Window::Kind::Gaussian:
      j = {{"kind", "gaussian"}, {"width", w.width()}};
      break;
    case Window::Kind::TightPartition: {
      nlohmann::json b;
      to_json(b, *w.base());
      j = {{"kind", "tight_partition"}, {"base", b}, {"step", w.lattice_step()}};
      break;
    }
    case Window::Kind::PainlessDual: {
      nlohmann::json b;
      to_json(b, *w.base());
      j = {{"kind", "painless_dual"}, {"base", b}, {"step", w.lattice_step()}, {"kappa", w.kappa()}};
      break;
    }
  }
  if (w.scale() != 1.0) j["scale"] = w.scale();
}

Window window_from_json(const nlohmann::json& j, int dim) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "window: expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "kind" && key != "sigma" && key != "radius" && key != "width" && key != "base" && key != "step" &&
        key != "scale")
      throw Error(ErrorKind::Config, "window: unknown key \"" + key + "\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  Window w = Window::gaussian(1.0, dim);
  if (kind == "gevrey_bump") {
    w = Window::gevrey_bump(j.at("sigma").get<double>(), j.at("radius").get<double>(), dim);
  } else if (kind == "gaussian") {
    w = Window::gaussian(j.at("width").get<double>(), dim);
  } else if (kind == "tight_partition") {
    w = Window::tight_partition(window_from_json(j.at("base"), dim), j.at("step").get<double>());
  } else {
    throw Error(ErrorKind::Config, "window: unknown kind \"" + kind + "\"");
  }
  if (j.contains("scale")) w = w.dilated(j.at("scale").get<double>());
  return w;
}

}  // namespace wfset
