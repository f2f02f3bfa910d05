#include "wfset/gabor.hpp"

#include <cmath>
#include <limits>

namespace wfset {

Window painless_dual(const Window& phi, const LatticePair& pair) {
  if (pair.classification() != PairClass::StronglyAdmissible)
    throw Error(ErrorKind::InvalidPair, "painless_dual: the lattice pair must be strongly admissible (ab < 2π)");
  if (!phi.compact()) throw Error(ErrorKind::InvalidArgument, "painless_dual: window must be compactly supported");
  const double a = pair.space_step();
  const double b = pair.frequency_step();
  const double diam = 2.0 * phi.support_radius();
  if (!(diam < kTwoPi / b))
    throw Error(ErrorKind::PainlessViolated, "painless condition violated: diam supp φ = " + std::to_string(diam) +
                                                 " needs frequency step b < " + std::to_string(kTwoPi / diam));
  // Lower bound of Σ_j φ(·−aj)² over one cell.
  const int d = phi.dim();
  const int n = 257;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double t = a * i / (n - 1);
    if (d == 1) {
      m = std::min(m, phi.lattice_square_sum(point1(t), a));
    } else {
      for (int k = 0; k < n; k += 4) m = std::min(m, phi.lattice_square_sum(point2(t, a * k / (n - 1)), a));
    }
  }
  if (m < 1e-8)
    throw Error(ErrorKind::IllConditioned, "painless_dual: Σ_j φ(x−aj)² drops to " + std::to_string(m) +
                                               " (translates do not cover; decrease a or widen φ)");
  return Window::painless_dual(phi, a, std::pow(a, d));
}

GaborSystem GaborSystem::at_scale(double e) const {
  GaborSystem s = *this;
  s.eps = e;
  return s;
}

GaborSystem make_gabor_system(const Window& phi, const LatticePair& pair, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::InvalidArgument, "gabor: eps must lie in (0, 1]");
  GaborSystem sys{phi, painless_dual(phi, pair), pair, eps, 1.0};
  // Calibrate C on a reference Gaussian: reconstruction with C = 1 is a fixed
  // multiple of the input.
  const int d = pair.dim();
  const SampleGrid grid = d == 1 ? SampleGrid{1, 1024, 4.0} : SampleGrid{2, 128, 2.0};
  const double b = pair.frequency_step();
  // The calibration grid must be commensurate; fall back to the closed form.
  try {
    segment_samples(grid, b);
    const Atom ref = Atom::gaussian(0.3, Point::Zero(d));
    const ComplexVec f = ref.sample(grid);
    GaborSystem unit = sys.at_scale(1.0);
    const ComplexVec g = synthesize(coefficients(f, grid, unit), unit);
    sys.constant = f.squaredNorm() / std::real(g.dot(f));
  } catch (const Error&) {
    sys.constant = std::pow(pair.space_step() * b / kTwoPi, d);
  }
  return sys;
}

CoefficientTable coefficients(const ComplexVec& samples, const SampleGrid& grid, const GaborSystem& sys,
                              std::vector<Eigen::VectorXi> nodes) {
  // (f, ψ^ε_{j,l}) = (2π)^{d/2}·V_ψ f(εx_j, ξ_l) for real ψ.
  CoefficientTable c = stft(samples, grid, sys.psi, sys.pair, sys.eps, std::move(nodes));
  c.values *= sys.constant * std::pow(kTwoPi, 0.5 * grid.dim);
  c.window_id = sys.psi.dilated(sys.eps).id();
  return c;
}

CoefficientTable coefficients(const Atom& f, const SampleGrid& grid, const GaborSystem& sys) {
  return coefficients(f.sample(grid), grid, sys);
}

ComplexVec synthesize(const CoefficientTable& c, const GaborSystem& sys) {
  const ComplexVec v = stft_adjoint(c, sys.phi);
  return v / (fourier_norm(c.grid.dim) * c.cell());
}

std::vector<Eigen::VectorXi> local_index_set(const Eigen::Ref<const Point>& x0, const GaborSystem& sys) {
  const double r = sys.phi.dilated(sys.eps).support_radius();
  const Point p = x0;
  return nodes_meeting(p, p, r, sys.spacing());
}

double discrete_modulation_norm(const CoefficientTable& c, const Weight& w, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw Error(ErrorKind::InvalidArgument, "mixed norm: p, q must be >= 1");
  const Eigen::Index J = c.values.rows();
  const Eigen::Index L = c.values.cols();
  if (J == 0) return 0.0;
  // Work with logs of |c·ω| to keep large weights finite.
  Mat<double> lg(J, L);
  for (Eigen::Index l = 0; l < L; ++l) {
    const Point xi = c.xi(l);
    for (Eigen::Index j = 0; j < J; ++j) {
      const double a = std::abs(c.values(j, l));
      double lw;
      if (w.domain() == Weight::Domain::PhaseSpace) {
        Point z(2 * xi.size());
        z << c.x(static_cast<std::size_t>(j)), xi;
        lw = evaluate_log(w, z);
      } else {
        lw = evaluate_log(w, xi);
      }
      lg(j, l) = a > 0.0 ? std::log(a) + lw : -std::numeric_limits<double>::infinity();
    }
  }
  const double top = lg.maxCoeff();
  if (!std::isfinite(top)) return 0.0;
  const Mat<double> r = (lg.array() - top).exp().matrix();
  RealVec inner(L);
  for (Eigen::Index l = 0; l < L; ++l)
    inner[l] = std::isinf(p) ? r.col(l).maxCoeff() : std::pow(r.col(l).array().pow(p).sum(), 1.0 / p);
  const double outer = std::isinf(q) ? inner.maxCoeff() : std::pow(inner.array().pow(q).sum(), 1.0 / q);
  return std::exp(top) * outer;
}

double partition_residual(const GaborSystem& sys, int per_axis) {
  const Window phe = sys.phi.dilated(sys.eps);
  const Window pse = sys.psi.dilated(sys.eps);
  const double a = sys.spacing();
  const double target = std::pow(sys.pair.space_step(), -sys.dim());
  const double r = phe.support_radius();
  const int reach = static_cast<int>(std::ceil(r / a)) + 1;
  double worst = 0.0;
  auto sum_at = [&](const Point& y) {
    double acc = 0.0;
    if (sys.dim() == 1) {
      const int j0 = static_cast<int>(std::floor(y[0] / a));
      for (int j = j0 - reach; j <= j0 + reach; ++j) {
        const double t = y[0] - a * j;
        acc += phe(t) * pse(t);
      }
    } else {
      const int j0 = static_cast<int>(std::floor(y[0] / a));
      const int k0 = static_cast<int>(std::floor(y[1] / a));
      for (int j = j0 - reach; j <= j0 + reach; ++j)
        for (int k = k0 - reach; k <= k0 + reach; ++k) {
          const Point t = point2(y[0] - a * j, y[1] - a * k);
          acc += phe(t) * pse(t);
        }
    }
    return acc;
  };
  if (sys.dim() == 1) {
    for (int i = 0; i < per_axis; ++i) worst = std::max(worst, std::abs(sum_at(point1(a * i / (per_axis - 1))) - target));
  } else {
    const int n = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(per_axis)) * 4));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, std::abs(sum_at(point2(a * i / (n - 1), a * k / (n - 1))) - target));
  }
  return worst;
}

double reconstruction_error(const ComplexVec& samples, const SampleGrid& grid, const GaborSystem& sys) {
  const ComplexVec g = synthesize(coefficients(samples, grid, sys), sys);
  const double n = samples.norm();
  return n > 0.0 ? (g - samples).norm() / n : g.norm();
}

nlohmann::json coefficient_summary(const CoefficientTable& c, const Weight& w, double p, double q) {
  long nnz = 0;
  double sup = 0.0;
  for (Eigen::Index i = 0; i < c.values.size(); ++i) {
    const double a = std::abs(c.values.data()[i]);
    if (a > 0.0) ++nnz;
    sup = std::max(sup, a);
  }
  return {{"nnz", nnz},
          {"sup_norm", sup},
          {"space_nodes", c.nodes.size()},
          {"mixed_norm", discrete_modulation_norm(c, w, p, q)},
          {"p", std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p)},
          {"q", std::isinf(q) ? nlohmann::json("inf") : nlohmann::json(q)}};
}

}  // namespace wfset
