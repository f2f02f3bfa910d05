#ifndef WFSET_GRID_HPP
#define WFSET_GRID_HPP

#include <cmath>

#include "wfset/error.hpp"
#include "wfset/types.hpp"

namespace wfset {

/// Uniform grid on the box [−L, L)^d with n nodes per axis, row-major.
struct SampleGrid {
  int dim = 1;
  int n = 4096;
  double half_width = 8.0;

  double step() const { return 2.0 * half_width / n; }
  double cell() const { return std::pow(step(), dim); }
  double coord(int m) const { return -half_width + m * step(); }
  Eigen::Index size() const { return dim == 1 ? n : static_cast<Eigen::Index>(n) * n; }

  /// Nearest node index along one axis (unclamped).
  int nearest(double x) const { return static_cast<int>(std::lround((x + half_width) / step())); }
  bool inside(int m) const { return m >= 0 && m < n; }

  Point node(Eigen::Index flat) const {
    if (dim == 1) return point1(coord(static_cast<int>(flat)));
    return point2(coord(static_cast<int>(flat / n)), coord(static_cast<int>(flat % n)));
  }
  Eigen::Index flat(int m1, int m2 = 0) const { return dim == 1 ? m1 : static_cast<Eigen::Index>(m1) * n + m2; }

  void validate() const {
    if (dim != 1 && dim != 2) throw Error(ErrorKind::InvalidArgument, "grid: only d = 1, 2 are supported");
    if (n < 2 || (n & (n - 1)) != 0) throw Error(ErrorKind::InvalidArgument, "grid: size must be a power of two");
    if (!(half_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid: half width must be positive");
  }
};

inline SampleGrid default_grid(int dim) {
  return dim == 1 ? SampleGrid{1, 4096, 8.0} : SampleGrid{2, 256, 2.0};
}

}  // namespace wfset

#endif  // WFSET_GRID_HPP
