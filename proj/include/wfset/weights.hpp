#ifndef WFSET_WEIGHTS_HPP
#define WFSET_WEIGHTS_HPP

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfset/types.hpp"

namespace wfset {

/// Asserts ω(x+y) ≤ C·e^{k|x|^{1/s}}·ω(y) for all x, y.
struct ModerationCertificate {
  double s = 2.0;
  double k = 0.0;
  double C = 1.0;
};

/// Weights of moderate growth, evaluated in log-space.
///
/// Only four kinds exist so that every weight carries a certificate that the
/// seminorm estimates can consume. Weights are immutable once built.
class Weight {
 public:
  enum class Kind { Constant, Polynomial, SubExponential, Product };
  enum class Domain { Frequency, PhaseSpace };

  static Weight constant(double s = 2.0);
  static Weight polynomial(double t, double s = 2.0);
  /// exp(k |ξ|^{1/s}). Requires k > 0 and s ≥ 1; s == 1 is representable so
  /// that diagnostics can reject it, but is outside the admissible class.
  static Weight sub_exponential(double k, double s);
  static Weight product(std::vector<Weight> factors);

  Weight with_domain(Domain domain) const;

  Kind kind() const { return kind_; }
  Domain domain() const { return domain_; }
  double k() const { return k_; }
  double s() const { return s_; }
  double t() const { return t_; }
  const std::vector<Weight>& factors() const { return factors_; }

  /// True when the weight lies in the non-quasi-analytic class (s > 1).
  bool admissible() const;
  const ModerationCertificate& certificate() const { return cert_; }

  /// Short identifier used in reports, e.g. "subexp(k=0.5,s=2)".
  std::string id() const;

 private:
  Weight() = default;
  void certify();

  Kind kind_ = Kind::Constant;
  Domain domain_ = Domain::Frequency;
  double k_ = 0.0;
  double s_ = 2.0;
  double t_ = 0.0;
  std::vector<Weight> factors_;
  ModerationCertificate cert_;
};

/// log ω(ξ). For phase-space weights pass the concatenated (x, ξ).
double evaluate_log(const Weight& w, const Eigen::Ref<const Point>& xi);
double evaluate_log(const Weight& w, double abs_xi);

/// True iff log ω(x+y) ≤ log C + k|x|^{1/s} + log ω(y) + 1e-9 on every pair.
bool check_moderate(const Weight& w, const ModerationCertificate& cert,
                    const std::vector<std::pair<Point, Point>>& samples);

struct BeurlingDomarSum {
  double value = 0.0;
  bool divergent = false;
};

/// Σ_{n=1}^{N} log ω(n·x)/n², with a divergence flag from the dyadic tail.
BeurlingDomarSum beurling_domar_partial_sum(const Weight& w, const Eigen::Ref<const Point>& x,
                                            long N);

void to_json(nlohmann::json& j, const Weight& w);
Weight weight_from_json(const nlohmann::json& j);

}  // namespace wfset

#endif  // WFSET_WEIGHTS_HPP
