#pragma once

// Geometry of the upper half-plane, the weighted volume dV_alpha = y^alpha dx dy,
// and the closed-form Beta integrals.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "bol/error.hpp"
#include "bol/quadrature.hpp"

namespace bol {

using cplx = std::complex<double>;

struct HPoint {
  double x = 0.0;
  double y = 1.0;

  HPoint() = default;
  HPoint(double x_, double y_) : x(x_), y(y_) {
    require(y_ > 0.0 && std::isfinite(y_) && std::isfinite(x_), ErrorKind::domain,
            "point must lie in the upper half-plane (y > 0)");
  }
  explicit HPoint(cplx z) : HPoint(z.real(), z.imag()) {}

  cplx z() const { return {x, y}; }
  cplx conj() const { return {x, -y}; }
};

inline double distance(const HPoint& a, const HPoint& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Disk {
  HPoint center;
  double radius = 0.0;

  bool contains(const HPoint& p) const { return distance(p, center) < radius; }
  bool contains(double x, double y) const { return std::hypot(x - center.x, y - center.y) < radius; }
};

/// D_s(z) = D(z, s Im z).
inline Disk hyperbolic_disk(const HPoint& z, double s) {
  require(s > 0.0, ErrorKind::domain, "disk parameter s must be positive");
  return Disk{z, s * z.y};
}

struct CarlesonSquare {
  double interval_center = 0.0;
  double interval_length = 1.0;
};

struct Box {
  double x0, x1, y0, y1;
};

struct WholePlane {};

/// Integration region. y0 = 0 is an improper endpoint; infinite ends are allowed.
class Region {
 public:
  using Variant = std::variant<Box, Disk, CarlesonSquare, std::vector<Box>, WholePlane>;

  Region() : v_(WholePlane{}) {}
  static Region box(double x0, double x1, double y0, double y1) {
    require(x1 > x0 && y1 > y0 && y0 >= 0.0, ErrorKind::domain, "box must satisfy x0 < x1, 0 <= y0 < y1");
    return Region(Box{x0, x1, y0, y1});
  }
  static Region disk(const Disk& d) {
    require(d.radius > 0.0, ErrorKind::domain, "disk radius must be positive");
    require(d.radius < d.center.y, ErrorKind::domain, "disk must lie inside the upper half-plane");
    return Region(d);
  }
  static Region carleson(const CarlesonSquare& q) {
    require(q.interval_length > 0.0, ErrorKind::domain, "Carleson interval length must be positive");
    return Region(q);
  }
  static Region strip_union(std::vector<Box> boxes) {
    require(!boxes.empty(), ErrorKind::domain, "strip union needs at least one box");
    for (const auto& b : boxes)
      require(b.x1 > b.x0 && b.y1 > b.y0 && b.y0 >= 0.0, ErrorKind::domain, "invalid box in strip union");
    return Region(std::move(boxes));
  }
  static Region whole() { return Region(WholePlane{}); }

  const Variant& variant() const { return v_; }
  bool is_whole() const { return std::holds_alternative<WholePlane>(v_); }

  bool contains(double x, double y) const {
    if (!(y > 0.0)) return false;
    return std::visit(
        [&](const auto& r) -> bool {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, Box>) {
            return x >= r.x0 && x <= r.x1 && y >= r.y0 && y <= r.y1;
          } else if constexpr (std::is_same_v<R, Disk>) {
            return r.contains(x, y);
          } else if constexpr (std::is_same_v<R, CarlesonSquare>) {
            return std::abs(x - r.interval_center) <= 0.5 * r.interval_length && y <= r.interval_length;
          } else if constexpr (std::is_same_v<R, std::vector<Box>>) {
            for (const auto& b : r)
              if (x >= b.x0 && x <= b.x1 && y >= b.y0 && y <= b.y1) return true;
            return false;
          } else {
            return true;
          }
        },
        v_);
  }
  bool contains(const HPoint& p) const { return contains(p.x, p.y); }

  /// Boxes making up the region (a Carleson square is one box); empty for disks.
  std::vector<Box> boxes() const {
    if (const auto* b = std::get_if<Box>(&v_)) return {*b};
    if (const auto* q = std::get_if<CarlesonSquare>(&v_)) {
      double h = 0.5 * q->interval_length;
      return {Box{q->interval_center - h, q->interval_center + h, 0.0, q->interval_length}};
    }
    if (const auto* u = std::get_if<std::vector<Box>>(&v_)) return *u;
    if (std::holds_alternative<WholePlane>(v_)) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      return {Box{-inf, inf, 0.0, inf}};
    }
    return {};
  }

 private:
  explicit Region(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------
// Beta integrals

/// B(m, n) = Gamma(m) Gamma(n) / Gamma(m + n).
inline double beta(double m, double n) {
  require(m > 0.0 && n > 0.0, ErrorKind::domain, "beta: arguments must be positive");
  return std::beta(m, n);
}

/// B(m, n) from its defining integral int_0^inf u^(m-1) (1+u)^-(m+n) du, split at
/// u = 1 with u -> 1/u on the upper part.
inline double beta_by_quadrature(double m, double n, double rel_tol = 1e-12) {
  require(m > 0.0 && n > 0.0, ErrorKind::domain, "beta: arguments must be positive");
  quad::Options opt;
  opt.rel_tol = rel_tol;
  auto f = [s = m + n](double u) { return std::pow(1.0 + u, -s); };
  auto lo = quad::integrate<double>(f, quad::weighted_segments(0.0, 1.0, m - 1.0), opt);
  auto hi = quad::integrate<double>(f, quad::weighted_segments(0.0, 1.0, n - 1.0), opt);
  return lo.value + hi.value;
}

/// J_a(y) = int_R dx / |x + i y|^a = B(1/2, (a-1)/2) y^(1-a), finite iff a > 1.
inline double j_closed_form(double y, double a) {
  require(y > 0.0, ErrorKind::domain, "j_closed_form: y must be positive");
  require(a > 1.0, ErrorKind::divergence, "J_a(y) converges only for a > 1");
  return beta(0.5, 0.5 * (a - 1.0)) * std::pow(y, 1.0 - a);
}

/// I(t) = int_0^inf y^a / (t + y)^b dy = B(1 + a, b - a - 1) t^(1 + a - b).
inline double i_closed_form(double t, double a, double b) {
  require(t > 0.0, ErrorKind::domain, "i_closed_form: t must be positive");
  require(a > -1.0, ErrorKind::divergence, "I(t) needs a > -1 for convergence at 0");
  require(b - a > 1.0, ErrorKind::divergence, "I(t) needs b - a > 1 for convergence at infinity");
  return beta(1.0 + a, b - a - 1.0) * std::pow(t, 1.0 + a - b);
}

/// J_a(y) by quadrature of the defining line integral.
inline double j_by_quadrature(double y, double a, double rel_tol = 1e-12) {
  require(y > 0.0, ErrorKind::domain, "j: y must be positive");
  require(a > 1.0, ErrorKind::divergence, "J_a(y) converges only for a > 1");
  quad::Options opt;
  opt.rel_tol = rel_tol;
  auto f = [&](double x) { return std::pow(x * x + y * y, -0.5 * a); };
  std::vector<quad::Segment> segs{quad::Segment::tangent(0.0, 4.0 * y, 0.0, y), quad::tail_segment(4.0 * y, a)};
  return 2.0 * quad::integrate<double>(f, segs, opt).value;
}

/// I(t) by quadrature of the defining integral.
inline double i_by_quadrature(double t, double a, double b, double rel_tol = 1e-12) {
  require(t > 0.0, ErrorKind::domain, "i: t must be positive");
  require(a > -1.0 && b - a > 1.0, ErrorKind::divergence, "I(t) diverges for these exponents");
  quad::Options opt;
  opt.rel_tol = rel_tol;
  auto f = [&](double y) { return std::pow(t + y, -b); };
  double brk[] = {t};
  auto segs = quad::weighted_segments(0.0, std::numeric_limits<double>::infinity(), a, brk);
  segs.back() = quad::tail_segment(segs.back().center, b - a, a, 0.0);
  return quad::integrate<double>(f, segs, opt).value;
}

// ---------------------------------------------------------------------------
// Integration against dV_alpha

/// Hints for shaping the mesh around the interesting part of an integrand.
/// Unbounded x-ranges use x = x_center + (x_scale + x_scale_per_y * y) tan(t).
struct MeshHints {
  double x_center = 0.0;
  double x_scale = 1.0;
  double x_scale_per_y = 1.0;
  std::vector<double> y_breaks{0.25, 1.0, 4.0};
};

struct IntegrateOptions {
  double tol = 1e-10;
  double abs_tol = 0.0;  // for integrands that may vanish to rounding level
  std::size_t max_panels = 4000;
  bool throw_on_accuracy = true;
};

namespace detail {

/// Runs a nested integral over one box with y weight y^alpha.
template <class T, class F>
quad::Result<T> integrate_box(F& f, double alpha, const Box& b, const MeshHints& h, const quad::Options& outer,
                              const quad::Options& inner, std::vector<quad::Node2>* capture) {
  std::vector<double> breaks;
  for (double v : h.y_breaks)
    if (v > b.y0 && v < b.y1) breaks.push_back(v);
  std::vector<quad::Segment> ysegs;
  if (b.y0 == 0.0 || std::isinf(b.y1)) {
    ysegs = quad::weighted_segments(b.y0, b.y1, alpha, breaks);
  } else {
    std::vector<double> pts{b.y0};
    pts.insert(pts.end(), breaks.begin(), breaks.end());
    pts.push_back(b.y1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) ysegs.push_back(quad::Segment::linear(pts[i], pts[i + 1], alpha));
  }
  bool xinf = std::isinf(b.x0) || std::isinf(b.x1);
  auto xp = [&](double y) {
    double sc = h.x_scale + h.x_scale_per_y * y;
    if (!(sc > 0.0)) sc = 1.0;
    if (xinf) return std::vector<quad::XPiece>{{b.x0, b.x1, h.x_center, sc, true}};
    return std::vector<quad::XPiece>{{b.x0, b.x1, 0.0, 1.0, false}};
  };
  return quad::nested<T>(f, ysegs, xp, outer, inner, capture);
}

template <class T, class F>
quad::Result<T> integrate_disk(F& f, double alpha, const Disk& d, const quad::Options& outer,
                               const quad::Options& inner, std::vector<quad::Node2>* capture) {
  std::vector<quad::Segment> ysegs{quad::Segment::sine(d.center.y, d.radius, alpha, 0.0)};
  auto xp = [&](double y) {
    double dy = y - d.center.y;
    double hw = std::sqrt(std::max(0.0, d.radius * d.radius - dy * dy));
    return std::vector<quad::XPiece>{{d.center.x - hw, d.center.x + hw, 0.0, 1.0, false}};
  };
  return quad::nested<T>(f, ysegs, xp, outer, inner, capture);
}

}  // namespace detail

/// int_region f(x, y) y^alpha dx dy. Throws AccuracyError (with the best estimate)
/// when refinement stalls, unless opts.throw_on_accuracy is false.
template <class T = double, class F>
quad::Result<T> integrate(F&& f, double alpha, const Region& region, const IntegrateOptions& opts = {},
                          const MeshHints& hints = {}, std::vector<quad::Node2>* capture = nullptr) {
  require(alpha > -1.0, ErrorKind::domain, "integrate: alpha must exceed -1");
  require(opts.tol > 0.0, ErrorKind::parameter, "integrate: tol must be positive");
  quad::Options outer, inner;
  outer.rel_tol = opts.tol;
  outer.abs_tol = opts.abs_tol;
  outer.max_panels = opts.max_panels;
  inner.rel_tol = 0.1 * opts.tol;
  inner.abs_tol = 0.1 * opts.abs_tol;
  inner.max_panels = opts.max_panels;
  inner.initial_panels = 2;
  quad::Result<T> total;
  if (capture) capture->clear();
  auto accumulate = [&](const quad::Result<T>& r, std::vector<quad::Node2>& part) {
    total.value += r.value;
    total.error += r.error;
    total.converged = total.converged && r.converged;
    total.evaluations += r.evaluations;
    if (capture) capture->insert(capture->end(), part.begin(), part.end());
  };
  std::vector<quad::Node2> part;
  if (const auto* d = std::get_if<Disk>(&region.variant())) {
    accumulate(detail::integrate_disk<T>(f, alpha, *d, outer, inner, capture ? &part : nullptr), part);
  } else {
    for (const auto& b : region.boxes())
      accumulate(detail::integrate_box<T>(f, alpha, b, hints, outer, inner, capture ? &part : nullptr), part);
  }
  if (!total.converged && opts.throw_on_accuracy)
    throw AccuracyError("integrate: refinement did not reach tolerance", quad::magnitude(total.value), total.error);
  return total;
}

/// |D|_alpha for a disk inside the half-plane.
inline double disk_measure(const Disk& d, double alpha, double tol = 1e-12) {
  require(d.radius < d.center.y, ErrorKind::domain, "disk must not touch the real axis");
  auto one = [](double, double) { return 1.0; };
  IntegrateOptions o;
  o.tol = tol;
  return integrate<double>(one, alpha, Region::disk(d), o).value;
}

/// Weighted area of a box-type region, in closed form.
inline double box_measure(const Box& b, double alpha) {
  return (b.x1 - b.x0) * (std::pow(b.y1, alpha + 1.0) - std::pow(b.y0, alpha + 1.0)) / (alpha + 1.0);
}

}  // namespace bol
