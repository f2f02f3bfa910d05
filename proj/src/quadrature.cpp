#include "wfset/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <vector>
#include <algorithm>

#include "wfset/error.hpp"

namespace wfset {

namespace {

// Kronrod 15-point nodes (nonnegative half) and weights; Gauss 7-point weights
// for the odd-indexed nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Value>
struct Segment {
  Value kronrod{};
  double error = 0.0;
};

template <typename Value, typename F>
Segment<Value> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const Value fc = f(c);
  Value rk = fc * kWgk[7];
  Value rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const Value f1 = f(c - h * kXgk[j]);
    const Value f2 = f(c + h * kXgk[j]);
    rk += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) rg += (f1 + f2) * kWg[j / 2];
  }
  Segment<Value> s;
  s.kronrod = rk * h;
  s.error = std::abs(rk * h - rg * h);
  return s;
}

// Globally adaptive: keep bisecting the segment with the largest error
// estimate until the total meets the tolerance or the budget runs out.
template <typename Value, typename F>
void adapt(const F& f, double a, double b, double tol, int max_depth, QuadratureResult<Value>& out) {
  struct Piece {
    double a, b;
    int depth;
    Segment<Value> s;
    bool operator<(const Piece& o) const { return s.error < o.s.error; }
  };
  constexpr int kMaxPieces = 20000;
  std::priority_queue<Piece> heap;
  std::vector<Piece> done;
  heap.push({a, b, 0, gk15<Value>(f, a, b)});
  out.evaluations += 15;
  double total = heap.top().s.error;
  while (!heap.empty() && total > tol && static_cast<int>(heap.size() + done.size()) < kMaxPieces) {
    Piece p = heap.top();
    heap.pop();
    if (p.depth >= max_depth || (p.b - p.a) < 1e-14 * std::max(1.0, std::abs(p.a))) {
      done.push_back(p);
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    Piece l{p.a, m, p.depth + 1, gk15<Value>(f, p.a, m)};
    Piece r{m, p.b, p.depth + 1, gk15<Value>(f, m, p.b)};
    out.evaluations += 30;
    total += l.s.error + r.s.error - p.s.error;
    heap.push(l);
    heap.push(r);
  }
  // Sum in interval order so results do not depend on heap layout.
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  for (const auto& p : done) {
    out.value += p.s.kronrod;
    out.error += p.s.error;
  }
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "gauss_legendre: n must be >= 1");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  QuadratureRule ref;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) ref = it->second;
  }
  if (ref.nodes.size() == 0) {
    ref.nodes.resize(n);
    ref.weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) { p1 = x; p0 = 1.0; }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      ref.nodes[i] = x;
      ref.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(n, ref);
  }
  QuadratureRule out;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  out.nodes = (c + h * ref.nodes.array()).matrix();
  out.weights = h * ref.weights;
  return out;
}

QuadratureResult<double> integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                   int max_depth) {
  QuadratureResult<double> out;
  adapt<double>(f, a, b, abs_tol, max_depth, out);
  return out;
}

QuadratureResult<Complex> integrate(const std::function<Complex(double)>& f, double a, double b, double abs_tol,
                                    int max_depth) {
  QuadratureResult<Complex> out;
  adapt<Complex>(f, a, b, abs_tol, max_depth, out);
  return out;
}

Complex composite_gl(const std::function<Complex(double)>& f, double a, double b, int panels, int order) {
  const auto ref = gauss_legendre(order, -1.0, 1.0);
  const double h = (b - a) / panels;
  Complex acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) acc += 0.5 * h * ref.weights[i] * f(c + 0.5 * h * ref.nodes[i]);
  }
  return acc;
}

}  // namespace wfset
