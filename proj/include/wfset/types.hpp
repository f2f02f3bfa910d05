#ifndef WFSET_TYPES_HPP
#define WFSET_TYPES_HPP

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace wfset {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Complex = std::complex<double>;
using Point = Vec<double>;
using RealVec = Vec<double>;
using ComplexVec = Vec<Complex>;
using ComplexMat = Mat<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// (2π)^{-d/2}, the Fourier normalization used throughout.
inline double fourier_norm(int dim) { return std::pow(kTwoPi, -0.5 * dim); }

inline Point point1(double x) {
  Point p(1);
  p << x;
  return p;
}

inline Point point2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

}  // namespace wfset

#endif  // WFSET_TYPES_HPP
