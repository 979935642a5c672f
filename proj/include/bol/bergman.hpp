#pragma once

// Bergman kernel, normalized kernels, the test functions G_{eps,m}, the
// projection P_alpha and its positive companion.
//
// Complex powers use the principal branch. For z, w in the upper half-plane
// Re((z - conj w)/i) = Im z + Im w > 0, so the branch never meets its cut.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "bol/error.hpp"
#include "bol/growth.hpp"
#include "bol/halfplane.hpp"
#include "bol/orlicz.hpp"
#include "bol/quadrature.hpp"

namespace bol {

/// u^e on the right half-plane, with a multiplication fast path for small integer e.
inline cplx rpow(cplx u, double e) {
  double r = std::round(e);
  if (r == e && std::abs(r) <= 16) {
    int n = static_cast<int>(std::abs(r));
    cplx acc(1.0), b = u;
    while (n) {
      if (n & 1) acc *= b;
      b *= b;
      n >>= 1;
    }
    return r < 0 ? 1.0 / acc : acc;
  }
  return std::pow(u, e);
}

/// |u|^e for real u > 0 with the same fast path.
inline double rpow(double u, double e) {
  double r = std::round(e);
  if (r == e && std::abs(r) <= 16) {
    int n = static_cast<int>(std::abs(r));
    double acc = 1.0, b = u;
    while (n) {
      if (n & 1) acc *= b;
      b *= b;
      n >>= 1;
    }
    return r < 0 ? 1.0 / acc : acc;
  }
  return std::pow(u, e);
}

/// K_alpha(z, w) = ((z - conj w)/i)^(-alpha-2).
inline cplx kernel(cplx z, cplx w, double alpha) {
  return rpow(cplx(0.0, -1.0) * (z - std::conj(w)), -alpha - 2.0);
}
inline cplx kernel(const HPoint& z, const HPoint& w, double alpha) { return kernel(z.z(), w.z(), alpha); }

/// |K_alpha(z, w)| = |z - conj w|^(-alpha-2), without complex arithmetic.
inline double kernel_abs(double zx, double zy, double wx, double wy, double alpha) {
  double q = (zx - wx) * (zx - wx) + (zy + wy) * (zy + wy);
  return rpow(q, -0.5 * (alpha + 2.0));
}

/// k_{alpha,w}(z) = Im(w)^((2+alpha)/2) / (z - conj w)^(2+alpha).
inline cplx normalized_kernel(cplx z, cplx w, double alpha) {
  return std::pow(w.imag(), 0.5 * (2.0 + alpha)) * rpow(z - std::conj(w), -(2.0 + alpha));
}
inline cplx normalized_kernel(const HPoint& z, const HPoint& w, double alpha) {
  return normalized_kernel(z.z(), w.z(), alpha);
}

/// Constant c with c * K_alpha the reproducing kernel of A^2_alpha: 2^alpha (alpha+1) / pi.
inline double reproducing_constant(double alpha) {
  return std::exp2(alpha) * (alpha + 1.0) / std::numbers::pi;
}

/// G_{eps,m}(z) = 1/(-i eps z + 1)^m.
inline cplx g_eps_m(cplx z, double eps, double m) { return rpow(cplx(0.0, -eps) * z + 1.0, -m); }

/// int |G_{eps,m}|^p dV_alpha in closed form.
inline double g_modular_exact(double eps, double m, double p, double alpha) {
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  require(p > 0.0 && m >= 0.0, ErrorKind::domain, "need p > 0 and m >= 0");
  require(m * p > 1.0, ErrorKind::divergence, "need m p > 1 (line integrals diverge otherwise)");
  require(m * p > alpha + 2.0, ErrorKind::divergence, "need m p > alpha + 2 for a finite modular");
  return beta(0.5, 0.5 * (m * p - 1.0)) * beta(alpha + 1.0, m * p - alpha - 2.0) * std::pow(eps, -2.0 - alpha);
}

/// A function on the upper half-plane, with closed-form variants and a mesh hint
/// describing where it lives.
class AnalyticFn {
 public:
  enum class Kind { zero, kernel, normalized_kernel, g_eps_m, atom_sum, custom };

  AnalyticFn() : kind_(Kind::zero), eval_([](cplx) { return cplx(0.0); }) {}

  static AnalyticFn zero() { return AnalyticFn(); }

  static AnalyticFn kernel_at(const HPoint& w, double alpha) {
    require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
    AnalyticFn f(Kind::kernel, [w, alpha](cplx z) { return kernel(z, w.z(), alpha); });
    f.centers_ = {w};
    f.alpha_ = alpha;
    f.hints_ = point_hints(w);
    return f;
  }

  static AnalyticFn normalized_kernel_at(const HPoint& w, double alpha) {
    require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
    AnalyticFn f(Kind::normalized_kernel, [w, alpha](cplx z) { return normalized_kernel(z, w.z(), alpha); });
    f.centers_ = {w};
    f.alpha_ = alpha;
    f.hints_ = point_hints(w);
    return f;
  }

  static AnalyticFn g(double eps, double m) {
    require(eps > 0.0 && m >= 0.0, ErrorKind::domain, "G_{eps,m} needs eps > 0 and m >= 0");
    AnalyticFn f(Kind::g_eps_m, [eps, m](cplx z) { return g_eps_m(z, eps, m); });
    f.eps_ = eps;
    f.m_ = m;
    f.hints_ = point_hints(HPoint(0.0, 1.0 / eps));
    return f;
  }

  /// sum_k c_k ((z - conj w_k)/i)^(-alpha-2), evaluated in the given order with pairwise summation.
  static AnalyticFn atom_sum(std::vector<HPoint> centers, std::vector<cplx> coefs, double alpha) {
    require(centers.size() == coefs.size(), ErrorKind::parameter, "atom centers and coefficients differ in length");
    require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
    if (centers.empty()) return zero();
    auto c = std::make_shared<const std::vector<HPoint>>(centers);
    auto k = std::make_shared<const std::vector<cplx>>(coefs);
    AnalyticFn f(Kind::atom_sum, [c, k, alpha](cplx z) {
      thread_local std::vector<cplx> terms;
      terms.resize(c->size());
      for (std::size_t i = 0; i < c->size(); ++i) terms[i] = (*k)[i] * kernel(z, (*c)[i].z(), alpha);
      return quad::pairwise_sum<cplx>(terms);
    });
    f.centers_ = std::move(centers);
    f.coefs_ = std::move(coefs);
    f.alpha_ = alpha;
    f.hints_ = spread_hints(f.centers_);
    return f;
  }

  static AnalyticFn custom(std::function<cplx(cplx)> fn, MeshHints hints = {}, std::string name = "custom") {
    require(static_cast<bool>(fn), ErrorKind::parameter, "custom function is empty");
    AnalyticFn f(Kind::custom, std::move(fn));
    f.hints_ = std::move(hints);
    f.name_ = std::move(name);
    return f;
  }

  /// a F + b G as a custom function.
  static AnalyticFn combine(cplx a, const AnalyticFn& F, cplx b, const AnalyticFn& G) {
    auto fe = F.eval_, ge = G.eval_;
    MeshHints h = F.kind_ == Kind::zero ? G.hints_ : F.hints_;
    for (double v : G.hints_.y_breaks) h.y_breaks.push_back(v);
    std::sort(h.y_breaks.begin(), h.y_breaks.end());
    h.y_breaks.erase(std::unique(h.y_breaks.begin(), h.y_breaks.end()), h.y_breaks.end());
    return custom([fe, ge, a, b](cplx z) { return a * fe(z) + b * ge(z); }, h, "combination");
  }

  cplx operator()(cplx z) const { return eval_(z); }
  cplx operator()(double x, double y) const { return eval_(cplx(x, y)); }
  cplx operator()(const HPoint& p) const { return eval_(p.z()); }

  Field modulus() const {
    auto e = eval_;
    return [e](double x, double y) { return std::abs(e(cplx(x, y))); };
  }

  Kind kind() const { return kind_; }
  const MeshHints& hints() const { return hints_; }
  double eps() const { return eps_; }
  double m() const { return m_; }
  double alpha() const { return alpha_; }
  const std::vector<HPoint>& centers() const { return centers_; }
  const std::vector<cplx>& coefs() const { return coefs_; }
  const std::string& name() const { return name_; }

  /// Mesh hints centred at one point of the half-plane.
  static MeshHints point_hints(const HPoint& w) {
    MeshHints h;
    h.x_center = w.x;
    h.x_scale = w.y;
    h.x_scale_per_y = 1.0;
    h.y_breaks = {0.25 * w.y, w.y, 4.0 * w.y};
    return h;
  }

  static MeshHints spread_hints(const std::vector<HPoint>& pts) {
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    MeshHints h;
    h.x_center = 0.5 * (xmin + xmax);
    h.x_scale = std::max(ymin, 0.5 * (xmax - xmin));
    h.x_scale_per_y = 1.0;
    h.y_breaks.clear();
    for (double y = 0.25 * ymin; y < 4.0 * ymax; y *= 4.0) h.y_breaks.push_back(y);
    h.y_breaks.push_back(4.0 * ymax);
    return h;
  }

 private:
  AnalyticFn(Kind k, std::function<cplx(cplx)> e) : kind_(k), eval_(std::move(e)) {}

  Kind kind_;
  std::function<cplx(cplx)> eval_;
  MeshHints hints_;
  double eps_ = 0.0, m_ = 0.0, alpha_ = 0.0;
  std::vector<HPoint> centers_;
  std::vector<cplx> coefs_;
  std::string name_;
};

/// Luxembourg norm of F in L^Phi(dV_alpha).
inline LuxResult bergman_norm(const AnalyticFn& F, const GrowthFunction& phi, double alpha, double tol = 1e-10) {
  if (F.kind() == AnalyticFn::Kind::zero) return {};
  return luxembourg(F.modulus(), MeasureSpec::valpha(alpha), phi, tol, F.hints());
}

namespace detail {

inline MeshHints projection_hints(const AnalyticFn& F, const HPoint& z) {
  MeshHints h = F.hints();
  h.x_scale = std::max({h.x_scale, z.y, std::abs(z.x - h.x_center)});
  h.y_breaks.push_back(0.5 * z.y);
  h.y_breaks.push_back(2.0 * z.y);
  std::sort(h.y_breaks.begin(), h.y_breaks.end());
  h.y_breaks.erase(std::unique(h.y_breaks.begin(), h.y_breaks.end()), h.y_breaks.end());
  return h;
}

}  // namespace detail

/// P_alpha(F)(z) = c_alpha int K_alpha(z, w) F(w) dV_alpha(w), normalized so that
/// P_alpha F = F on A^2_alpha.
inline cplx project(const AnalyticFn& F, const HPoint& z, double alpha, double tol = 1e-8) {
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  if (F.kind() == AnalyticFn::Kind::zero) return 0.0;
  IntegrateOptions o;
  o.tol = tol;
  o.max_panels = 20000;
  auto f = [&](double x, double y) { return kernel(z.z(), cplx(x, y), alpha) * F(x, y); };
  auto r = integrate<cplx>(f, alpha, Region::whole(), o, detail::projection_hints(F, z));
  return reproducing_constant(alpha) * r.value;
}

/// P_alpha^+(F)(z) = c_alpha int |K_alpha(z, w)| |F(w)| dV_alpha(w).
inline double positive_op(const AnalyticFn& F, const HPoint& z, double alpha, double tol = 1e-8) {
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  if (F.kind() == AnalyticFn::Kind::zero) return 0.0;
  IntegrateOptions o;
  o.tol = tol;
  o.max_panels = 20000;
  auto f = [&](double x, double y) { return kernel_abs(z.x, z.y, x, y, alpha) * std::abs(F(x, y)); };
  auto r = integrate<double>(f, alpha, Region::whole(), o, detail::projection_hints(F, z));
  return reproducing_constant(alpha) * r.value;
}

/// Positive operator applied to a nonnegative field supported in a region.
inline double positive_op(const Field& f, const Region& support, const HPoint& z, double alpha, double tol = 1e-8) {
  IntegrateOptions o;
  o.tol = tol;
  auto g = [&](double x, double y) { return kernel_abs(z.x, z.y, x, y, alpha) * f(x, y); };
  return reproducing_constant(alpha) * integrate<double>(g, alpha, support, o).value;
}

/// max |F(z)| / (Phi^-1(Im(z)^(-2-alpha)) ||F||) over the given points.
inline double pointwise_bound_check(const AnalyticFn& F, const GrowthFunction& phi, double alpha,
                                    const std::vector<HPoint>& zs, double tol = 1e-10) {
  auto n = bergman_norm(F, phi, alpha, tol);
  if (n.value == 0.0) return 0.0;
  double c = 0.0;
  for (const auto& z : zs) c = std::max(c, std::abs(F(z)) / (phi.inverse(std::pow(z.y, -2.0 - alpha)) * n.value));
  return c;
}

}  // namespace bol
