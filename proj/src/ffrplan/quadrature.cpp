#include "ffrplan/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "ffrplan/errors.hpp"

namespace ffr {

namespace {

QuadratureRule make_gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: node count must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n; roots are symmetric, compute the upper half.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence: (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
      double p0 = 1.0, p1 = x;
      for (int j = 1; j < n; ++j) {
        double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // exact midpoint for odd n
  return rule;
}

// Gauss-Kronrod 7/15 abscissae and weights (positive half, descending).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Segment {
  double a, b, value, error;
};

Segment gk15_segment(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double kronrod = kWgk[7] * fv[7];
  double gauss = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.value = kronrod * h;
  s.error = std::abs((kronrod - gauss) * h);
  return s;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const QuadratureRule& rule = gauss_legendre(n);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(c + h * rule.nodes[i]);
  return acc * h;
}

AdaptiveResult gk15_adaptive(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, double rel_tol, int max_subdivisions) {
  std::vector<Segment> segments{gk15_segment(f, a, b)};
  int splits = 0;
  while (true) {
    double total = 0.0, err = 0.0;
    for (const Segment& s : segments) {
      total += s.value;
      err += s.error;
    }
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) {
      return AdaptiveResult{total, err, splits};
    }
    if (splits >= max_subdivisions) {
      std::ostringstream os;
      os << "gk15_adaptive: no convergence after " << splits << " subdivisions on [" << a
         << ", " << b << "]; residual error " << err << ", value " << total;
      throw NumericalError(os.str());
    }
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const Segment& l, const Segment& r) { return l.error < r.error; });
    Segment seg = *worst;
    double mid = 0.5 * (seg.a + seg.b);
    *worst = gk15_segment(f, seg.a, mid);
    segments.push_back(gk15_segment(f, mid, seg.b));
    ++splits;
  }
}

}  // namespace ffr
