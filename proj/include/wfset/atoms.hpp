#ifndef WFSET_ATOMS_HPP
#define WFSET_ATOMS_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfset/geometry.hpp"
#include "wfset/grid.hpp"
#include "wfset/types.hpp"
#include "wfset/windows.hpp"

namespace wfset {

/// One multiplicative factor of a regular term.
struct Factor {
  enum class Kind { Envelope, HalfSpace, Modulation };
  Kind kind = Kind::Envelope;
  std::optional<Window> window;  // Envelope: window(x − center)
  Point center;                  // Envelope
  Point normal;                  // HalfSpace: H(⟨normal, x⟩ − offset), 1/2 on the boundary
  double offset = 0.0;           // HalfSpace
  Point frequency;               // Modulation: exp(i⟨frequency, x⟩)
};

/// amplitude · Π factors. At least one Envelope keeps it compactly supported.
struct Term {
  Complex amplitude = 1.0;
  std::vector<Factor> factors;
};

struct PointMass {
  Point at;
  Complex amplitude = 1.0;
};

/// Piece of a ground-truth wave-front set.
struct WfComponent {
  enum class Shape { Point, Segment, Sphere };
  enum class Directions { All, Normal };
  Shape shape = Shape::Point;
  Directions directions = Directions::All;
  Point a;             // Point location, segment start, or sphere center
  Point b;             // segment end
  double radius = 0;   // sphere radius
  Point normal;        // for Directions::Normal on segments
  /// Present only for s below this order (Gevrey-σ flat points); 0 = always.
  double below_order = 0.0;
};

/// Expected singular directions at a point.
struct TruthAtPoint {
  bool singular_all = false;
  std::vector<Point> normals;  // singular along ±normal
  bool any() const { return singular_all || !normals.empty(); }
};

struct OracleValue {
  Complex value;
  double error_bound = 0.0;
  bool closed_form = false;
};

/// A compactly supported test distribution: point masses plus piecewise
/// smooth regular terms, with known singularities.
class Atom {
 public:
  Atom() = default;
  Atom(std::string name, int dim) : name_(std::move(name)), dim_(dim) {}

  static Atom delta(const Point& at, Complex amplitude = 1.0);
  /// H(x − jump) · envelope(x − center) in 1D.
  static Atom jump_bump(double jump, const Window& envelope, double center);
  static Atom gevrey_bump(double sigma, double radius, const Point& center);
  static Atom gaussian(double width, const Point& center);
  static Atom modulated_bump(double sigma, double radius, const Point& center, const Point& carrier);
  /// H(⟨n, x⟩ − offset) · envelope(x − center) in 2D.
  static Atom half_plane_bump(const Point& normal, double offset, const Window& envelope, const Point& center);
  static Atom sum(std::string name, const std::vector<Atom>& parts);

  const std::string& name() const { return name_; }
  Atom& rename(std::string name) {
    name_ = std::move(name);
    return *this;
  }
  int dim() const { return dim_; }
  const std::vector<PointMass>& masses() const { return masses_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<WfComponent>& ground_truth() const { return truth_; }
  bool is_zero() const { return masses_.empty() && terms_.empty(); }

  /// Value of the regular part at x (point masses excluded).
  Complex density(const Eigen::Ref<const Point>& x) const;

  /// Grid samples; a point mass becomes amplitude/cell at its nearest node.
  ComplexVec sample(const SampleGrid& grid) const;

  /// Axis-aligned box containing the support.
  std::pair<Point, Point> support_box() const;

  /// f·cutoff(· − x0).
  Atom localized(const Window& cutoff, const Point& x0) const;

  void add_mass(PointMass m) { masses_.push_back(std::move(m)); }
  void add_term(Term t) { terms_.push_back(std::move(t)); }
  void add_truth(WfComponent c) { truth_.push_back(std::move(c)); }

 private:
  std::string name_;
  int dim_ = 1;
  std::vector<PointMass> masses_;
  std::vector<Term> terms_;
  std::vector<WfComponent> truth_;
};

/// f̂(ξ) = (2π)^{−d/2}∫f(x)e^{−i⟨x,ξ⟩}dx. Closed form for point masses and
/// Gaussian terms; other terms fall back to adaptive quadrature whose error
/// estimate is reported. Throws OracleUnavailable when quadrature is disabled
/// and a term has no closed form.
OracleValue fourier_oracle(const Atom& a, const Eigen::Ref<const Point>& xi, bool allow_quadrature = true);

/// Ground-truth singular directions at x0 for analysis order s.
TruthAtPoint ground_truth_wf(const Atom& a, const Eigen::Ref<const Point>& x0, double s, double tol = 1e-9);

/// Catalog lookup by name: delta, jump, gevrey_bump, modulated_bump,
/// half_plane, gaussian, sum:[name,name,...]. Parameters come from `params`.
Atom make_atom(const std::string& name, int dim = 1, const nlohmann::json& params = nlohmann::json::object());
Atom atom_from_json(const nlohmann::json& j);

}  // namespace wfset

#endif  // WFSET_ATOMS_HPP
