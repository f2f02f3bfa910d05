#include "wfset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "wfset/error.hpp"

namespace wfset {

Lattice::Lattice(Mat<double> basis, Point offset) : basis_(std::move(basis)), offset_(std::move(offset)) {
  if (basis_.rows() != basis_.cols() || basis_.rows() != offset_.size())
    throw Error(ErrorKind::InvalidArgument, "lattice: basis must be square and match the offset");
  if (!(std::abs(basis_.determinant()) > 0.0))
    throw Error(ErrorKind::InvalidArgument, "lattice: basis must be invertible");
  inverse_ = basis_.inverse();
}

Lattice Lattice::scaled_integer(double step, int dim) {
  return Lattice(step * Mat<double>::Identity(dim, dim), Point::Zero(dim));
}

bool Lattice::contains(const Eigen::Ref<const Point>& p) const {
  const Point coords = inverse_ * (p - offset_);
  for (Eigen::Index i = 0; i < coords.size(); ++i)
    if (std::abs(coords[i] - std::round(coords[i])) > 1e-9) return false;
  return true;
}

Point Lattice::point(const Eigen::Ref<const Eigen::VectorXi>& n) const {
  return basis_ * n.cast<double>() + offset_;
}

Lattice Lattice::rebased(const Eigen::Ref<const Eigen::MatrixXi>& unimodular) const {
  const long det = std::lround(unimodular.cast<double>().determinant());
  if (std::abs(det) != 1) throw Error(ErrorKind::InvalidArgument, "rebased: matrix is not unimodular");
  return Lattice(basis_ * unimodular.cast<double>(), offset_);
}

double parallelepiped_volume(const Eigen::Ref<const Mat<double>>& spanning) {
  return std::abs(spanning.determinant());
}

LatticePair::LatticePair(Lattice space, Lattice frequency)
    : space_(std::move(space)), frequency_(std::move(frequency)) {
  if (space_.dim() != frequency_.dim())
    throw Error(ErrorKind::InvalidArgument, "lattice pair: dimension mismatch");
  const Mat<double> gram = space_.basis().transpose() * frequency_.basis();
  c_ = gram(0, 0);
  const Mat<double> expected = c_ * Mat<double>::Identity(dim(), dim());
  if ((gram - expected).cwiseAbs().maxCoeff() > 1e-9 || !(c_ > 0.0)) {
    class_ = PairClass::Invalid;
  } else if (std::abs(c_ - kTwoPi) <= 1e-9) {
    class_ = PairClass::WeaklyAdmissible;
  } else if (c_ < kTwoPi) {
    class_ = PairClass::StronglyAdmissible;
  } else {
    class_ = PairClass::Invalid;
  }
}

LatticePair make_pair(double spatial_step, double frequency_step, int dim) {
  if (!(spatial_step > 0.0) || !(frequency_step > 0.0))
    throw Error(ErrorKind::InvalidArgument, "make_pair: steps must be positive");
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "make_pair: dimension must be >= 1");
  LatticePair pair(Lattice::scaled_integer(spatial_step, dim), Lattice::scaled_integer(frequency_step, dim));
  if (pair.classification() == PairClass::Invalid) {
    throw Error(ErrorKind::InvalidPair,
                "lattice pair a*b = " + std::to_string(spatial_step * frequency_step) +
                    " exceeds the critical density 2*pi; no dual window exists");
  }
  return pair;
}

Cone::Cone(Point axis, double half_angle) : axis_(std::move(axis)), half_angle_(half_angle) {
  const double n = axis_.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "cone: axis must be nonzero");
  if (!(half_angle > 0.0 && half_angle < kPi))
    throw Error(ErrorKind::InvalidArgument, "cone: half angle must lie in (0, pi)");
  axis_ /= n;
}

double Cone::angle_to(const Eigen::Ref<const Point>& xi) const {
  const double n = xi.norm();
  if (n == 0.0) return kPi;
  return std::acos(std::clamp(axis_.dot(xi) / n, -1.0, 1.0));
}

bool Cone::contains(const Eigen::Ref<const Point>& xi) const {
  if (xi.norm() == 0.0) return false;
  return angle_to(xi) < half_angle_;
}

Cone Cone::shrink(double delta) const {
  if (!(delta > 0.0 && delta < half_angle_))
    throw Error(ErrorKind::InvalidArgument, "cone shrink: delta must lie in (0, half_angle)");
  return Cone(axis_, half_angle_ - delta);
}

double separation_constant(const Cone& inner, const Cone& outer) {
  if (inner.dim() != outer.dim()) throw Error(ErrorKind::InvalidArgument, "separation_constant: dimension mismatch");
  const double axis_angle = outer.angle_to(inner.axis());
  double gap = 0.0;
  if (inner.dim() == 1) {
    // A half-line's complement is the opposite half-line.
    if (axis_angle > 0.5 * kPi) throw Error(ErrorKind::NotNested, "separation_constant: cones are not nested");
    gap = kPi;
  } else {
    gap = outer.half_angle() - (inner.half_angle() + axis_angle);
  }
  if (!(gap > 1e-12)) throw Error(ErrorKind::NotNested, "separation_constant: inner cone closure not inside outer");
  return std::min(1.0, 2.0 * std::sin(0.5 * gap));
}

ConeCover::ConeCover(std::vector<Cone> cones) : cones_(std::move(cones)) {
  if (cones_.empty()) throw Error(ErrorKind::InvalidArgument, "cone cover: no cones");
  const int d = cones_.front().dim();
  std::vector<Point> dirs;
  if (d == 1) {
    dirs = {point1(1.0), point1(-1.0)};
  } else if (d == 2) {
    for (int i = 0; i < 3600; ++i) {
      const double t = kTwoPi * (i + 0.5) / 3600.0;
      dirs.push_back(point2(std::cos(t), std::sin(t)));
    }
  } else {
    // Deterministic quasi-random directions on the sphere.
    for (int i = 0; i < 4000; ++i) {
      Point p(d);
      for (int c = 0; c < d; ++c) p[c] = std::sin(12.9898 * (i + 1) * (c + 1) + 78.233 * c);
      dirs.push_back(p.normalized());
    }
  }
  covers_ = true;
  overlap_ = 0;
  for (const auto& u : dirs) {
    int hits = 0;
    for (const auto& c : cones_) hits += c.contains(u) ? 1 : 0;
    covers_ = covers_ && hits > 0;
    overlap_ = std::max(overlap_, hits);
  }
}

ConeCover ConeCover::axis_aligned(int dim, double widen) {
  std::vector<Cone> cones;
  const double half = dim == 1 ? 0.5 * kPi : std::min(widen * 0.25 * kPi * std::sqrt(dim - 1.0), 0.99 * kPi);
  for (int i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      Point axis = Point::Zero(dim);
      axis[i] = sign;
      cones.emplace_back(axis, half);
    }
  }
  return ConeCover(std::move(cones));
}

ConeCover ConeCover::equiangular(int count, double widen) {
  if (count < 3) throw Error(ErrorKind::InvalidArgument, "equiangular cover: need at least 3 sectors");
  std::vector<Cone> cones;
  for (int m = 0; m < count; ++m) {
    const double t = kTwoPi * m / count;
    cones.emplace_back(point2(std::cos(t), std::sin(t)), widen * kPi / count);
  }
  return ConeCover(std::move(cones));
}

std::vector<Point> lattice_points_in(const Lattice& lattice, const std::optional<Cone>& cone, double R) {
  std::vector<Point> out;
  if (!(R > 0.0)) return out;
  const int d = lattice.dim();
  const Mat<double> inv = lattice.basis().inverse();
  // Integer coordinates of points with |p| ≤ R satisfy |n_i| ≤ ‖row_i(B⁻¹)‖(R + |x₀|).
  Eigen::VectorXi lo(d), hi(d);
  const Point center = inv * (-lattice.offset());
  for (int i = 0; i < d; ++i) {
    const double reach = inv.row(i).norm() * R;
    lo[i] = static_cast<int>(std::floor(center[i] - reach)) - 1;
    hi[i] = static_cast<int>(std::ceil(center[i] + reach)) + 1;
  }
  Eigen::VectorXi n = lo;
  std::function<void(int)> walk = [&](int axis) {
    if (axis == d) {
      const Point p = lattice.point(n);
      if (p.norm() > R) return;
      if (cone) {
        if (!cone->contains(p)) return;
      }
      out.push_back(p);
      return;
    }
    for (int v = lo[axis]; v <= hi[axis]; ++v) {
      n[axis] = v;
      walk(axis + 1);
    }
  };
  walk(0);
  return out;
}

void to_json(nlohmann::json& j, const Lattice& l) {
  auto basis = nlohmann::json::array();
  for (int r = 0; r < l.basis().rows(); ++r) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < l.basis().cols(); ++c) row.push_back(l.basis()(r, c));
    basis.push_back(row);
  }
  j = {{"basis", basis}, {"offset", std::vector<double>(l.offset().data(), l.offset().data() + l.offset().size())}};
}

void to_json(nlohmann::json& j, const Cone& c) {
  j = {{"axis", std::vector<double>(c.axis().data(), c.axis().data() + c.axis().size())},
       {"half_angle", c.half_angle()}};
}

Lattice lattice_from_json(const nlohmann::json& j) {
  const auto rows = j.at("basis").get<std::vector<std::vector<double>>>();
  const int d = static_cast<int>(rows.size());
  Mat<double> basis(d, d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(rows[r].size()) != d) throw Error(ErrorKind::Config, "lattice: basis must be square");
    for (int c = 0; c < d; ++c) basis(r, c) = rows[r][c];
  }
  Point offset = Point::Zero(d);
  if (j.contains("offset")) {
    const auto o = j.at("offset").get<std::vector<double>>();
    if (static_cast<int>(o.size()) != d) throw Error(ErrorKind::Config, "lattice: offset dimension mismatch");
    offset = Eigen::Map<const Point>(o.data(), d);
  }
  return Lattice(basis, offset);
}

Cone cone_from_json(const nlohmann::json& j) {
  const auto a = j.at("axis").get<std::vector<double>>();
  return Cone(Eigen::Map<const Point>(a.data(), static_cast<Eigen::Index>(a.size())), j.at("half_angle").get<double>());
}

}  // namespace wfset
