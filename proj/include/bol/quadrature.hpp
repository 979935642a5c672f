#pragma once

// Adaptive Gauss-Legendre quadrature on mapped segments, plus a nested 2-D
// driver. Every panel is integrated with a 16-point rule and compared with the
// same rule on its two halves; the panel with the largest discrepancy is split
// until the summed discrepancy meets the tolerance. Evaluation order depends
// only on the inputs, so results are reproducible bit for bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "bol/error.hpp"

namespace bol::quad {

inline constexpr int kOrder = 16;

struct GaussRule {
  std::array<double, kOrder> node{};
  std::array<double, kOrder> weight{};
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> node(n), weight(n);
  auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    node[i] = x;
    weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return {node, weight};
}

/// 16-point rule, computed once.
inline const GaussRule& gauss16() {
  static const GaussRule rule = [] {
    GaussRule r;
    auto [x, w] = gauss_legendre(kOrder);
    for (int i = 0; i < kOrder; ++i) r.node[i] = x[i], r.weight[i] = w[i];
    return r;
  }();
  return rule;
}

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_panels = 4000;
  int initial_panels = 4;  // per segment
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;
};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

enum class MapKind { linear, tan, power, sine, algebraic };

/// Parameter interval [t0, t1] together with the map t -> x and the factor
/// dx/dt * weight(x). The weight is (x - origin)^weight_alpha; the power map
/// absorbs it exactly: x = origin + span * t^(1/(weight_alpha+1)).
struct Segment {
  MapKind kind = MapKind::linear;
  double t0 = 0.0, t1 = 1.0;
  double center = 0.0;  // tan: x = center + scale*tan(t); power: origin
  double scale = 1.0;   // tan: scale; power: span
  double weight_alpha = 0.0;
  double weight_origin = 0.0;

  std::pair<double, double> eval(double t) const {
    switch (kind) {
      case MapKind::linear: {
        double w = weight_alpha == 0.0 ? 1.0 : std::pow(t - weight_origin, weight_alpha);
        return {t, w};
      }
      case MapKind::tan: {
        double c = std::cos(t);
        double x = center + scale * std::tan(t);
        double w = weight_alpha == 0.0 ? 1.0 : std::pow(x - weight_origin, weight_alpha);
        return {x, scale / (c * c) * w};
      }
      case MapKind::power: {
        double e = 1.0 / (weight_alpha + 1.0);
        double x = center + scale * std::pow(t, e);
        return {x, std::pow(scale, weight_alpha + 1.0) / (weight_alpha + 1.0)};
      }
      case MapKind::sine: {
        double x = center + scale * std::sin(t);
        double w = weight_alpha == 0.0 ? 1.0 : std::pow(x - weight_origin, weight_alpha);
        return {x, scale * std::cos(t) * w};
      }
      case MapKind::algebraic: {
        double x = center * std::pow(t, -scale);
        double w = weight_alpha == 0.0 ? 1.0 : std::pow(x - weight_origin, weight_alpha);
        return {x, scale * x / t * w};
      }
    }
    return {t, 1.0};
  }

  static Segment linear(double a, double b, double alpha = 0.0, double origin = 0.0) {
    Segment s;
    s.kind = MapKind::linear;
    s.t0 = a;
    s.t1 = b;
    s.weight_alpha = alpha;
    s.weight_origin = origin;
    return s;
  }

  /// x in [a, b] (either end may be infinite) through x = c + s*tan(t).
  static Segment tangent(double a, double b, double c, double s, double alpha = 0.0, double origin = 0.0) {
    Segment seg;
    seg.kind = MapKind::tan;
    seg.center = c;
    seg.scale = s;
    seg.t0 = std::isinf(a) ? -std::numbers::pi / 2 : std::atan((a - c) / s);
    seg.t1 = std::isinf(b) ? std::numbers::pi / 2 : std::atan((b - c) / s);
    seg.weight_alpha = alpha;
    seg.weight_origin = origin;
    return seg;
  }

  /// x in [c - r, c + r] through x = c + r*sin(t); removes square-root endpoint behaviour.
  static Segment sine(double c, double r, double alpha = 0.0, double origin = 0.0) {
    Segment seg;
    seg.kind = MapKind::sine;
    seg.t0 = -std::numbers::pi / 2;
    seg.t1 = std::numbers::pi / 2;
    seg.center = c;
    seg.scale = r;
    seg.weight_alpha = alpha;
    seg.weight_origin = origin;
    return seg;
  }

  /// x in [top, inf) through x = top t^-q, t in (0, 1]. With q = 1/(p - 1) an integrand
  /// decaying like x^-p becomes bounded at t = 0, where tan would leave (cos t)^(p-2).
  static Segment algebraic_tail(double top, double q, double alpha = 0.0, double origin = 0.0) {
    Segment seg;
    seg.kind = MapKind::algebraic;
    seg.t0 = 0.0;
    seg.t1 = 1.0;
    seg.center = top;
    seg.scale = q;
    seg.weight_alpha = alpha;
    seg.weight_origin = origin;
    return seg;
  }

  /// x in [origin, origin + span] with the weight (x - origin)^alpha absorbed.
  static Segment power(double origin, double span, double alpha) {
    Segment seg;
    seg.kind = MapKind::power;
    seg.t0 = 0.0;
    seg.t1 = 1.0;
    seg.center = origin;
    seg.scale = span;
    seg.weight_alpha = alpha;
    seg.weight_origin = origin;
    return seg;
  }
};

/// Captured 1-D rule: integral of g ~= sum w[i] * g(x[i]).
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

namespace detail {

template <class T>
struct Panel {
  int seg = 0;
  double a = 0.0, b = 0.0;
  T coarse{}, left{}, right{};
  double err = 0.0;
  T value() const { return left + right; }
};

template <class T, class F>
T apply16(F& f, const Segment& s, double a, double b, std::size_t& evals) {
  const auto& g = gauss16();
  double h = 0.5 * (b - a), m = 0.5 * (a + b);
  T acc{};
  for (int i = 0; i < kOrder; ++i) {
    auto [x, fac] = s.eval(m + h * g.node[i]);
    T v = f(x);
    if (!std::isfinite(magnitude(v))) {
      if (fac == 0.0) continue;
      fail(ErrorKind::divergence, "non-finite integrand value");
    }
    acc += v * (fac * g.weight[i]);
  }
  evals += kOrder;
  return acc * h;
}

template <class T, class F>
Panel<T> make_panel(F& f, const std::vector<Segment>& segs, int si, double a, double b, const T& coarse,
                    std::size_t& evals) {
  Panel<T> p;
  p.seg = si;
  p.a = a;
  p.b = b;
  p.coarse = coarse;
  double m = 0.5 * (a + b);
  p.left = apply16<T>(f, segs[si], a, m, evals);
  p.right = apply16<T>(f, segs[si], m, b, evals);
  p.err = magnitude(p.coarse - p.value());
  return p;
}

template <class T>
struct ByError {
  bool operator()(const Panel<T>& l, const Panel<T>& r) const { return l.err < r.err; }
};

}  // namespace detail

/// Globally adaptive integration of f over the union of mapped segments.
template <class T, class F>
Result<T> integrate(F&& f, const std::vector<Segment>& segs, const Options& opt, Rule1D* capture = nullptr) {
  using detail::Panel;
  Result<T> res;
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, detail::ByError<T>> heap;
  for (int si = 0; si < static_cast<int>(segs.size()); ++si) {
    const auto& s = segs[si];
    if (!(s.t1 > s.t0)) continue;
    int n = std::max(1, opt.initial_panels);
    for (int k = 0; k < n; ++k) {
      double a = s.t0 + (s.t1 - s.t0) * k / n;
      double b = (k + 1 == n) ? s.t1 : s.t0 + (s.t1 - s.t0) * (k + 1) / n;
      T coarse = detail::apply16<T>(f, s, a, b, res.evaluations);
      heap.push(detail::make_panel<T>(f, segs, si, a, b, coarse, res.evaluations));
    }
  }
  auto totals = [&heap]() {
    // Sum in a fixed order (by segment then position) for reproducibility.
    auto c = heap;
    std::vector<Panel<T>> all;
    all.reserve(c.size());
    while (!c.empty()) {
      all.push_back(c.top());
      c.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel<T>& l, const Panel<T>& r) {
      return l.seg != r.seg ? l.seg < r.seg : l.a < r.a;
    });
    T v{};
    double e = 0.0;
    for (const auto& p : all) {
      v += p.value();
      e += p.err;
    }
    return std::make_pair(v, e);
  };

  T value{};
  double err = 0.0;
  {
    auto [v, e] = totals();
    value = v;
    err = e;
  }
  std::size_t splits = 0;
  while (!heap.empty()) {
    double target = std::max(opt.abs_tol, opt.rel_tol * magnitude(value));
    if (err <= target) break;
    if (heap.size() >= opt.max_panels) {
      res.converged = false;
      break;
    }
    Panel<T> p = heap.top();
    heap.pop();
    double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {  // interval exhausted at machine precision
      res.converged = false;
      heap.push(p);
      break;
    }
    Panel<T> l = detail::make_panel<T>(f, segs, p.seg, p.a, m, p.left, res.evaluations);
    Panel<T> r = detail::make_panel<T>(f, segs, p.seg, m, p.b, p.right, res.evaluations);
    value += l.value() + r.value() - p.value();
    err += l.err + r.err - p.err;
    heap.push(l);
    heap.push(r);
    if (++splits % 64 == 0) {
      auto [v, e] = totals();
      value = v;
      err = e;
    }
  }
  auto [v, e] = totals();
  res.value = v;
  res.error = e;
  if (capture) {
    capture->x.clear();
    capture->w.clear();
    const auto& g = gauss16();
    auto c = heap;
    while (!c.empty()) {
      const auto& p = c.top();
      const auto& s = segs[p.seg];
      double mid = 0.5 * (p.a + p.b);
      for (auto [a, b] : {std::pair{p.a, mid}, std::pair{mid, p.b}}) {
        double h = 0.5 * (b - a), m = 0.5 * (a + b);
        for (int i = 0; i < kOrder; ++i) {
          auto [x, fac] = s.eval(m + h * g.node[i]);
          capture->x.push_back(x);
          capture->w.push_back(fac * g.weight[i] * h);
        }
      }
      c.pop();
    }
  }
  return res;
}

/// Segments covering x in [a, b]; infinite ends use the tan map around (center, scale).
inline std::vector<Segment> line_segments(double a, double b, double center = 0.0, double scale = 1.0,
                                          bool force_tan = false) {
  std::vector<Segment> segs;
  if (std::isinf(a) || std::isinf(b) || force_tan) {
    segs.push_back(Segment::tangent(a, b, center, scale));
  } else {
    segs.push_back(Segment::linear(a, b));
  }
  return segs;
}

/// Tail segment on [top, inf) for an integrand (weight included) decaying like x^-decay.
inline Segment tail_segment(double top, double decay, double alpha = 0.0, double origin = 0.0) {
  if (decay >= 2.0) return Segment::tangent(top, std::numeric_limits<double>::infinity(), top, top, alpha, origin);
  return Segment::algebraic_tail(top, 1.0 / (decay - 1.0), alpha, origin);
}

/// Segments covering y in [y0, y1] with weight y^alpha. A singular weight at
/// y0 = 0 is absorbed by the power map on [0, first_break].
inline std::vector<Segment> weighted_segments(double y0, double y1, double alpha,
                                              std::span<const double> breaks = {}) {
  require(alpha > -1.0 || y0 > 0.0, ErrorKind::divergence, "y^alpha weight with alpha <= -1 is not integrable at 0");
  std::vector<double> pts;
  pts.push_back(y0);
  for (double b : breaks)
    if (b > y0 && b < y1) pts.push_back(b);
  std::sort(pts.begin() + 1, pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  bool infinite = std::isinf(y1);
  double top = infinite ? std::max({1.0, 2.0 * y0, pts.back() * 2.0}) : y1;
  if (pts.size() == 1 && y0 == 0.0 && !infinite) pts.push_back(0.5 * y1);
  pts.push_back(top);
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    if (!(b > a)) continue;
    if (a == 0.0 && alpha < 0.0)
      segs.push_back(Segment::power(0.0, b, alpha));
    else
      segs.push_back(Segment::linear(a, b, alpha, 0.0));
  }
  if (infinite) segs.push_back(Segment::tangent(top, y1, top, top, alpha, 0.0));
  return segs;
}

struct Node2 {
  double x, y, w;
};

/// One x-interval at a fixed y, with an optional tan-map hint.
struct XPiece {
  double a, b;
  double center = 0.0;
  double scale = 1.0;
  bool tan = false;
};

/// Nested integral: outer over the y segments, inner over the x pieces that
/// `xpieces(y)` returns (a small vector). f(x, y) is evaluated without weights;
/// the y weight lives in the segments.
template <class T, class F, class XP>
Result<T> nested(F&& f, const std::vector<Segment>& ysegs, XP&& xpieces, const Options& outer, const Options& inner,
                 std::vector<Node2>* capture = nullptr) {
  bool inner_ok = true;
  std::size_t evals = 0;
  std::map<double, Rule1D> rules;
  auto fy = [&](double y) -> T {
    std::vector<XPiece> pieces = xpieces(y);
    T acc{};
    Rule1D merged;
    for (const auto& p : pieces) {
      if (!(p.b > p.a)) continue;
      std::vector<Segment> segs;
      if (p.tan || std::isinf(p.a) || std::isinf(p.b))
        segs.push_back(Segment::tangent(p.a, p.b, p.center, p.scale));
      else
        segs.push_back(Segment::linear(p.a, p.b));
      Rule1D r;
      auto g = [&](double x) -> T { return f(x, y); };
      auto res = integrate<T>(g, segs, inner, capture ? &r : nullptr);
      inner_ok = inner_ok && res.converged;
      evals += res.evaluations;
      acc += res.value;
      if (capture) {
        merged.x.insert(merged.x.end(), r.x.begin(), r.x.end());
        merged.w.insert(merged.w.end(), r.w.begin(), r.w.end());
      }
    }
    if (capture) rules[y] = std::move(merged);
    return acc;
  };
  Rule1D outer_rule;
  auto res = integrate<T>(fy, ysegs, outer, capture ? &outer_rule : nullptr);
  res.evaluations += evals;
  res.converged = res.converged && inner_ok;
  if (capture) {
    capture->clear();
    for (std::size_t i = 0; i < outer_rule.x.size(); ++i) {
      auto it = rules.find(outer_rule.x[i]);
      if (it == rules.end()) continue;
      for (std::size_t k = 0; k < it->second.x.size(); ++k)
        capture->push_back({it->second.x[k], outer_rule.x[i], outer_rule.w[i] * it->second.w[k]});
    }
  }
  return res;
}

/// Pairwise (cascade) summation over a contiguous range.
template <class T>
T pairwise_sum(std::span<const T> v) {
  if (v.size() <= 8) {
    T acc{};
    for (const auto& x : v) acc += x;
    return acc;
  }
  std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

}  // namespace bol::quad
