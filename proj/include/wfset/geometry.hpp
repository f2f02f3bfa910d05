#ifndef WFSET_GEOMETRY_HPP
#define WFSET_GEOMETRY_HPP

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfset/types.hpp"

namespace wfset {

/// { basis·n + offset : n ∈ Z^d }. Columns of the basis are the generators.
class Lattice {
 public:
  Lattice(Mat<double> basis, Point offset);
  static Lattice scaled_integer(double step, int dim);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Mat<double>& basis() const { return basis_; }
  const Point& offset() const { return offset_; }

  /// ‖Λ‖, the volume of any fundamental parallelepiped.
  double cell_volume() const { return std::abs(basis_.determinant()); }
  double min_edge() const { return basis_.colwise().norm().minCoeff(); }

  /// Membership within 1e-9 in basis coordinates.
  bool contains(const Eigen::Ref<const Point>& p) const;
  Point point(const Eigen::Ref<const Eigen::VectorXi>& n) const;

  /// Same lattice described by basis·U for a unimodular U.
  Lattice rebased(const Eigen::Ref<const Eigen::MatrixXi>& unimodular) const;

 private:
  Mat<double> basis_;
  Mat<double> inverse_;
  Point offset_;
};

/// |det| of the parallelepiped spanned by the columns.
double parallelepiped_volume(const Eigen::Ref<const Mat<double>>& spanning);

enum class PairClass { StronglyAdmissible, WeaklyAdmissible, Invalid };

/// Space lattice Λ₁ and frequency lattice Λ₂ with ⟨e_j, ε_k⟩ = c·δ_jk.
class LatticePair {
 public:
  LatticePair(Lattice space, Lattice frequency);

  const Lattice& space() const { return space_; }
  const Lattice& frequency() const { return frequency_; }
  double pairing() const { return c_; }
  PairClass classification() const { return class_; }
  int dim() const { return space_.dim(); }

  /// Uniform steps for the separable pairs built by make_pair.
  double space_step() const { return space_.basis()(0, 0); }
  double frequency_step() const { return frequency_.basis()(0, 0); }

 private:
  Lattice space_;
  Lattice frequency_;
  double c_ = 0.0;
  PairClass class_ = PairClass::Invalid;
};

/// aZ^d × bZ^d. Throws InvalidPair beyond the critical density ab > 2π.
LatticePair make_pair(double spatial_step, double frequency_step, int dim);

/// Open circular cone {ξ ≠ 0 : angle(ξ, axis) < half_angle}.
class Cone {
 public:
  Cone(Point axis, double half_angle);

  int dim() const { return static_cast<int>(axis_.size()); }
  const Point& axis() const { return axis_; }
  double half_angle() const { return half_angle_; }

  bool contains(const Eigen::Ref<const Point>& xi) const;
  /// Angle between ξ and the axis, in [0, π].
  double angle_to(const Eigen::Ref<const Point>& xi) const;
  /// Γ₀ with closure(Γ₀) ⊆ Γ; requires 0 < delta < half_angle.
  Cone shrink(double delta) const;

 private:
  Point axis_;
  double half_angle_;
};

/// Largest c with |ξ−η| ≥ c for unit ξ ∈ inner, unit η ∉ outer, as the chord
/// 2·sin(gap/2) capped at 1. Throws NotNested without a positive gap.
double separation_constant(const Cone& inner, const Cone& outer);

/// Directional discretization of R^d∖0.
class ConeCover {
 public:
  explicit ConeCover(std::vector<Cone> cones);
  /// ±e_i cones (2d of them); in d = 1 these are the two half-lines.
  static ConeCover axis_aligned(int dim, double widen = 1.1);
  /// `count` sectors in the plane with axes at 2πm/count.
  static ConeCover equiangular(int count, double widen = 1.1);

  const std::vector<Cone>& cones() const { return cones_; }
  std::size_t size() const { return cones_.size(); }
  int dim() const { return cones_.front().dim(); }
  /// Largest number of cones sharing a direction (sampled).
  int overlap() const { return overlap_; }
  /// Every sampled unit direction lies in some cone.
  bool covers() const { return covers_; }

 private:
  std::vector<Cone> cones_;
  int overlap_ = 0;
  bool covers_ = false;
};

/// Lattice points ξ with |ξ| ≤ R (and ξ ∈ cone when given, which excludes 0),
/// in lexicographic order of the integer coordinates.
std::vector<Point> lattice_points_in(const Lattice& lattice, const std::optional<Cone>& cone, double R);

void to_json(nlohmann::json& j, const Lattice& l);
void to_json(nlohmann::json& j, const Cone& c);
Lattice lattice_from_json(const nlohmann::json& j);
Cone cone_from_json(const nlohmann::json& j);

}  // namespace wfset

#endif  // WFSET_GEOMETRY_HPP
