#pragma once

// Growth functions Phi: [0, inf) -> [0, inf) and their calculus: indices,
// type/doubling constants, Young conjugates, compositions with inverses.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bol/error.hpp"
#include "bol/quadrature.hpp"

namespace bol {

enum class GrowthFamily { power, power_log, conjugate, composed_inverse, power_transform, custom };

inline const char* to_string(GrowthFamily f) {
  switch (f) {
    case GrowthFamily::power: return "power";
    case GrowthFamily::power_log: return "power_log";
    case GrowthFamily::conjugate: return "conjugate";
    case GrowthFamily::composed_inverse: return "composed_inverse";
    case GrowthFamily::power_transform: return "power_transform";
    case GrowthFamily::custom: return "custom";
  }
  return "unknown";
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// The standard evaluation grid: 400 log-spaced points in [1e-8, 1e8].
inline const std::vector<double>& standard_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g(400);
    for (int i = 0; i < 400; ++i) g[i] = std::pow(10.0, -8.0 + 16.0 * i / 399.0);
    return g;
  }();
  return grid;
}

/// Log-spaced points in [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = (n == 1) ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

class GrowthFunction;

namespace detail {

struct GrowthImpl {
  virtual ~GrowthImpl() = default;
  virtual double value(double t) const = 0;
  virtual double derivative(double t) const = 0;
  virtual double inverse(double y) const;
  virtual GrowthFamily family() const = 0;
  virtual std::string describe() const = 0;
  virtual double exponent() const { return std::numeric_limits<double>::quiet_NaN(); }
  virtual double coefficient() const { return std::numeric_limits<double>::quiet_NaN(); }
  /// Supremum of the finite domain (conjugates of linear-growth functions).
  virtual double finite_threshold() const { return kInf; }
};

/// Bracketed bisection for Phi(t) = y with geometric bracket growth.
inline double bisect_inverse(const std::function<double(double)>& phi, double y) {
  require(y >= 0.0 && !std::isnan(y), ErrorKind::domain, "inverse: y must be nonnegative");
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return kInf;
  double lo = 0.0, hi = 1.0;
  if (phi(hi) < y) {
    int k = 0;
    while (phi(hi) < y) {
      lo = hi;
      hi *= 2.0;
      if (++k > 1000 || std::isinf(hi)) fail(ErrorKind::overflow, "inverse: bracket not found within 1000 doublings");
    }
  } else {
    lo = 0.5;
    int k = 0;
    while (phi(lo) > y) {
      hi = lo;
      lo *= 0.5;
      if (++k > 1000) return 0.0;
    }
  }
  for (int it = 0; it < 400; ++it) {
    double mid = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (phi(mid) < y)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  double flo = phi(lo), fhi = phi(hi);
  return std::abs(flo - y) <= std::abs(fhi - y) ? lo : hi;
}

inline double GrowthImpl::inverse(double y) const {
  return bisect_inverse([this](double t) { return value(t); }, y);
}

}  // namespace detail

/// Immutable, cheaply copyable handle to a growth function.
class GrowthFunction {
 public:
  GrowthFunction() = default;
  explicit GrowthFunction(std::shared_ptr<const detail::GrowthImpl> impl) : impl_(std::move(impl)) {}

  static GrowthFunction power(double p, double coef = 1.0);
  static GrowthFunction power_log(double p, double a, double c);
  static GrowthFunction conjugate_of(const GrowthFunction& phi);
  static GrowthFunction composed_inverse(const GrowthFunction& outer, const GrowthFunction& inner);
  static GrowthFunction power_transformed(const GrowthFunction& phi, double exponent);
  static GrowthFunction custom(std::function<double(double)> f, std::function<double(double)> df,
                               std::string name = "custom");

  double operator()(double t) const { return impl_->value(t); }
  double derivative(double t) const { return impl_->derivative(t); }
  double inverse(double y) const { return impl_->inverse(y); }
  GrowthFamily family() const { return impl_->family(); }
  std::string describe() const { return impl_->describe(); }
  double exponent() const { return impl_->exponent(); }
  double coefficient() const { return impl_->coefficient(); }
  double finite_threshold() const { return impl_->finite_threshold(); }
  bool valid() const { return static_cast<bool>(impl_); }

  bool is_power(double p) const {
    return family() == GrowthFamily::power && exponent() == p && coefficient() == 1.0;
  }

 private:
  std::shared_ptr<const detail::GrowthImpl> impl_;
};

namespace detail {

struct PowerImpl final : GrowthImpl {
  double p, c;
  PowerImpl(double p_, double c_) : p(p_), c(c_) {}
  double value(double t) const override { return t <= 0.0 ? 0.0 : c * std::pow(t, p); }
  double derivative(double t) const override {
    if (t <= 0.0) return p > 1.0 ? 0.0 : (p == 1.0 ? c : kInf);
    return c * p * std::pow(t, p - 1.0);
  }
  double inverse(double y) const override {
    require(y >= 0.0, ErrorKind::domain, "inverse: y must be nonnegative");
    return y == 0.0 ? 0.0 : std::pow(y / c, 1.0 / p);
  }
  GrowthFamily family() const override { return GrowthFamily::power; }
  std::string describe() const override {
    std::ostringstream os;
    os << (c == 1.0 ? "" : std::to_string(c) + "*") << "t^" << p;
    return os.str();
  }
  double exponent() const override { return p; }
  double coefficient() const override { return c; }
};

struct PowerLogImpl final : GrowthImpl {
  double p, a, c;
  PowerLogImpl(double p_, double a_, double c_) : p(p_), a(a_), c(c_) {}
  double value(double t) const override {
    if (t <= 0.0) return 0.0;
    return std::pow(t, p) * std::pow(std::log(c + t), a);
  }
  double derivative(double t) const override {
    if (t <= 0.0) return p > 1.0 ? 0.0 : (p == 1.0 ? std::pow(std::log(c), a) : kInf);
    double L = std::log(c + t);
    return p * std::pow(t, p - 1.0) * std::pow(L, a) + std::pow(t, p) * a * std::pow(L, a - 1.0) / (c + t);
  }
  GrowthFamily family() const override { return GrowthFamily::power_log; }
  std::string describe() const override {
    std::ostringstream os;
    os << "t^" << p << "*log(" << c << "+t)^" << a;
    return os.str();
  }
  double exponent() const override { return p; }
};

/// Young conjugate Psi(s) = sup_t (s t - Phi(t)), evaluated by solving Phi'(t) = s.
struct ConjugateImpl final : GrowthImpl {
  GrowthFunction phi;
  double threshold;
  explicit ConjugateImpl(GrowthFunction f) : phi(std::move(f)) {
    double d1 = phi.derivative(1e100), d2 = phi.derivative(1e150);
    threshold = (std::isfinite(d2) && std::abs(d2 - d1) <= 1e-9 * std::abs(d2)) ? d2 : kInf;
  }
  // Maximizer t*(s); returns inf when the supremum is not attained (s past threshold).
  double argmax(double s) const {
    if (s <= 0.0) return 0.0;
    if (s > threshold) return kInf;
    double hi = 1.0;
    int k = 0;
    while (phi.derivative(hi) < s) {
      hi *= 2.0;
      if (++k > 1000 || std::isinf(hi)) return kInf;
    }
    double lo = 0.5;
    k = 0;
    while (phi.derivative(lo) > s) {
      hi = lo;
      lo *= 0.5;
      if (++k > 1000) return 0.0;
    }
    if (lo > hi) std::swap(lo, hi);
    for (int it = 0; it < 300; ++it) {
      double mid = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      if (phi.derivative(mid) < s)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-16 * hi) break;
    }
    return 0.5 * (lo + hi);
  }
  double value(double s) const override {
    if (s <= 0.0) return 0.0;
    if (s > threshold) return kInf;
    double t = argmax(s);
    if (std::isinf(t)) return kInf;
    return std::max(0.0, s * t - phi(t));
  }
  double derivative(double s) const override { return argmax(s); }
  GrowthFamily family() const override { return GrowthFamily::conjugate; }
  std::string describe() const override { return "conj(" + phi.describe() + ")"; }
  double finite_threshold() const override { return threshold; }
};

struct ComposedInverseImpl final : GrowthImpl {
  GrowthFunction outer, inner;
  ComposedInverseImpl(GrowthFunction o, GrowthFunction i) : outer(std::move(o)), inner(std::move(i)) {}
  double value(double s) const override { return s <= 0.0 ? 0.0 : outer(inner.inverse(s)); }
  double derivative(double s) const override {
    double u = inner.inverse(s);
    return outer.derivative(u) / inner.derivative(u);
  }
  double inverse(double y) const override { return y <= 0.0 ? 0.0 : inner(outer.inverse(y)); }
  GrowthFamily family() const override { return GrowthFamily::composed_inverse; }
  std::string describe() const override { return "(" + outer.describe() + ")o(" + inner.describe() + ")^-1"; }
};

struct PowerTransformImpl final : GrowthImpl {
  GrowthFunction phi;
  double e;
  PowerTransformImpl(GrowthFunction f, double e_) : phi(std::move(f)), e(e_) {}
  double value(double t) const override { return t <= 0.0 ? 0.0 : phi(std::pow(t, e)); }
  double derivative(double t) const override {
    if (t <= 0.0) return 0.0;
    return phi.derivative(std::pow(t, e)) * e * std::pow(t, e - 1.0);
  }
  double inverse(double y) const override { return y <= 0.0 ? 0.0 : std::pow(phi.inverse(y), 1.0 / e); }
  GrowthFamily family() const override { return GrowthFamily::power_transform; }
  std::string describe() const override {
    std::ostringstream os;
    os << phi.describe() << " o t^" << e;
    return os.str();
  }
};

struct CustomImpl final : GrowthImpl {
  std::function<double(double)> f, df;
  std::string name;
  CustomImpl(std::function<double(double)> f_, std::function<double(double)> df_, std::string n)
      : f(std::move(f_)), df(std::move(df_)), name(std::move(n)) {}
  double value(double t) const override { return t <= 0.0 ? 0.0 : f(t); }
  double derivative(double t) const override { return df(t); }
  GrowthFamily family() const override { return GrowthFamily::custom; }
  std::string describe() const override { return name; }
};

}  // namespace detail

inline GrowthFunction GrowthFunction::power(double p, double coef) {
  require(p > 0.0 && std::isfinite(p), ErrorKind::domain, "power: exponent must be positive");
  require(coef > 0.0 && std::isfinite(coef), ErrorKind::domain, "power: coefficient must be positive");
  return GrowthFunction(std::make_shared<detail::PowerImpl>(p, coef));
}

inline GrowthFunction GrowthFunction::power_log(double p, double a, double c) {
  require(p > 0.0, ErrorKind::domain, "power_log: exponent must be positive");
  require(c >= 1.0, ErrorKind::domain, "power_log: need c >= 1 so that log(c+t) > 0 for t > 0");
  return GrowthFunction(std::make_shared<detail::PowerLogImpl>(p, a, c));
}

inline GrowthFunction GrowthFunction::conjugate_of(const GrowthFunction& phi) {
  // Convexity: Phi' nondecreasing on the standard grid.
  const auto& g = standard_grid();
  double prev = phi.derivative(g.front());
  for (double t : g) {
    double d = phi.derivative(t);
    require(d >= prev * (1.0 - 1e-9), ErrorKind::domain, "conjugate: growth function is not convex");
    prev = d;
  }
  return GrowthFunction(std::make_shared<detail::ConjugateImpl>(phi));
}

inline GrowthFunction GrowthFunction::composed_inverse(const GrowthFunction& outer, const GrowthFunction& inner) {
  return GrowthFunction(std::make_shared<detail::ComposedInverseImpl>(outer, inner));
}

inline GrowthFunction GrowthFunction::power_transformed(const GrowthFunction& phi, double exponent) {
  require(exponent > 0.0, ErrorKind::domain, "power transform: exponent must be positive");
  return GrowthFunction(std::make_shared<detail::PowerTransformImpl>(phi, exponent));
}

inline GrowthFunction GrowthFunction::custom(std::function<double(double)> f, std::function<double(double)> df,
                                             std::string name) {
  require(static_cast<bool>(f) && static_cast<bool>(df), ErrorKind::parameter,
          "custom growth function needs both value and derivative");
  GrowthFunction phi(std::make_shared<detail::CustomImpl>(std::move(f), std::move(df), std::move(name)));
  require(std::abs(phi(0.0)) == 0.0, ErrorKind::domain, "custom: Phi(0) must be 0");
  double prev = 0.0;
  for (double t : standard_grid()) {
    double v = phi(t);
    require(std::isfinite(v) && v > prev, ErrorKind::domain, "custom: Phi must be finite and strictly increasing");
    prev = v;
  }
  return phi;
}

inline double inverse(const GrowthFunction& phi, double y) { return phi.inverse(y); }

// ---------------------------------------------------------------------------
// Indices and regularity

struct Indices {
  double a = 0.0;
  double b = 0.0;
  bool outside_LU = false;  // a <= 0: not of lower or upper type
};

/// a = inf, b = sup of t Phi'(t) / Phi(t) over the standard grid.
inline Indices indices(const GrowthFunction& phi) {
  Indices r{kInf, -kInf, false};
  for (double t : standard_grid()) {
    double v = phi(t), d = phi.derivative(t);
    double q = t * d / v;
    require(std::isfinite(q) && v > 0.0, ErrorKind::domain, "indices: non-finite evaluation at t=" + std::to_string(t));
    r.a = std::min(r.a, q);
    r.b = std::max(r.b, q);
  }
  r.outside_LU = r.a <= 0.0;
  return r;
}

/// Outcome of summing P_0 + P_1 + ... where P_k integrates over [t 2^-(k+1), t 2^-k].
struct PanelSeries {
  double value = 0.0;
  bool convergent = true;
  double decay_exponent = kInf;  // -log2 of the limiting panel ratio
  int panels = 0;
};

/// Sums dyadic panels toward 0 with geometric tail extrapolation. A limiting
/// panel ratio r >= 1 - 1e-3 is treated as divergence.
template <class PanelFn>
PanelSeries dyadic_panel_series(PanelFn&& panel, int max_panels = 400) {
  PanelSeries out;
  double prev = panel(0);
  out.value = prev;
  double r_prev = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k < max_panels; ++k) {
    double cur = panel(k);
    out.panels = k + 1;
    out.value += cur;
    if (cur == 0.0) {
      out.decay_exponent = kInf;
      return out;
    }
    if (prev == 0.0 || !std::isfinite(cur)) {
      out.convergent = false;
      out.value = kInf;
      out.decay_exponent = 0.0;
      return out;
    }
    double r = cur / prev;
    bool stable = k >= 8 && std::abs(r - r_prev) <= 1e-7 * std::max(1.0, r);
    if (stable || k + 1 == max_panels) {
      out.decay_exponent = -std::log2(r);
      if (r >= 1.0 - 1e-3) {
        out.convergent = false;
        out.value = kInf;
        return out;
      }
      if (cur <= 1e-16 * out.value) return out;
      out.value += cur * r / (1.0 - r);
      return out;
    }
    r_prev = r;
    prev = cur;
  }
  return out;
}

/// Integral of Phi(s)/s^2 over (0, t].
inline PanelSeries nabla2_integral(const GrowthFunction& phi, double t) {
  quad::Options opt;
  opt.rel_tol = 1e-12;
  opt.initial_panels = 1;
  auto panel = [&](int k) {
    double hi = std::ldexp(t, -k), lo = 0.5 * hi;
    auto f = [&](double s) { return phi(s) / (s * s); };
    return quad::integrate<double>(f, quad::line_segments(lo, hi), opt).value;
  };
  return dyadic_panel_series(panel);
}

struct TypeConstant {
  bool exists = false;
  double p = 0.0;
  double C = kInf;
};

struct RegularityReport {
  TypeConstant lower_type;
  TypeConstant upper_type;
  std::pair<bool, double> delta2{false, kInf};
  std::pair<bool, double> nabla2{false, kInf};
  Indices indices;
  std::vector<double> grid;
  bool in_U = false;  // upper type >= 1 with Phi(t)/t nondecreasing
  bool in_L = false;  // lower type <= 1 with Phi(t)/t nonincreasing
};

inline RegularityReport regularity_report(const GrowthFunction& phi) {
  RegularityReport r;
  r.grid = standard_grid();
  r.indices = indices(phi);
  const auto& g = r.grid;
  // Lower type a on t in (0,1], upper type b on t >= 1: Phi(st) <= C t^p Phi(s).
  if (r.indices.a > 0.0) {
    double C = 0.0;
    for (double s : g)
      for (double t : g) {
        if (t > 1.0) break;
        C = std::max(C, phi(s * t) / (std::pow(t, r.indices.a) * phi(s)));
      }
    r.lower_type = {std::isfinite(C), r.indices.a, C};
  }
  {
    double C = 0.0;
    for (double s : g)
      for (double t : g) {
        if (t < 1.0) continue;
        C = std::max(C, phi(s * t) / (std::pow(t, r.indices.b) * phi(s)));
      }
    r.upper_type = {std::isfinite(C), r.indices.b, C};
  }
  double K = 0.0;
  for (double t : g) K = std::max(K, phi(2.0 * t) / phi(t));
  r.delta2 = {std::isfinite(K), K};

  double C = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < g.size(); i += 10) {
    double t = g[i];
    auto s = nabla2_integral(phi, t);
    if (!s.convergent) {
      ok = false;
      break;
    }
    C = std::max(C, s.value * t / phi(t));
  }
  r.nabla2 = ok ? std::pair{true, C} : std::pair{false, kInf};

  bool up = true, down = true;
  double prev = phi(g.front()) / g.front();
  for (double t : g) {
    double q = phi(t) / t;
    if (q < prev * (1.0 - 1e-12)) up = false;
    if (q > prev * (1.0 + 1e-12)) down = false;
    prev = q;
  }
  r.in_U = up && r.indices.b >= 1.0 - 1e-12;
  r.in_L = down && r.indices.a > 0.0 && r.indices.a <= 1.0 + 1e-12;
  return r;
}

/// Young conjugate. Power functions get the closed form; everything else is
/// evaluated pointwise by root finding on Phi'.
inline GrowthFunction complementary(const GrowthFunction& phi) {
  if (phi.family() == GrowthFamily::power && phi.exponent() > 1.0) {
    double p = phi.exponent(), c = phi.coefficient();
    double q = p / (p - 1.0);
    double cq = (1.0 - 1.0 / p) * std::pow(c * p, -1.0 / (p - 1.0));
    return GrowthFunction::power(q, cq);
  }
  return GrowthFunction::conjugate_of(phi);
}

struct Condition18 {
  bool holds = false;
  double C = kInf;
  bool ratio_monotone = false;
  double divergence_exponent = kInf;  // decay exponent of the dyadic panels at 0
};

/// Checks int_0^t G(s)/s^2 ds <= C G(t)/t for G = Phi1 o Phi2^-1, and whether
/// Phi1/Phi2 is nondecreasing.
inline Condition18 condition18_check(const GrowthFunction& phi1, const GrowthFunction& phi2) {
  Condition18 out;
  auto G = GrowthFunction::composed_inverse(phi1, phi2);
  const auto& g = standard_grid();
  double C = 0.0;
  bool ok = true;
  double expo = kInf;
  for (std::size_t i = 0; i < g.size(); i += 10) {
    double t = g[i];
    auto s = nabla2_integral(G, t);
    expo = std::min(expo, s.decay_exponent);
    if (!s.convergent) {
      ok = false;
      break;
    }
    C = std::max(C, s.value * t / G(t));
  }
  out.holds = ok && std::isfinite(C);
  out.C = out.holds ? C : kInf;
  out.divergence_exponent = expo;
  bool mono = true;
  double prev = phi1(g.front()) / phi2(g.front());
  for (double t : g) {
    double q = phi1(t) / phi2(t);
    if (q < prev * (1.0 - 1e-12)) mono = false;
    prev = q;
  }
  out.ratio_monotone = mono;
  return out;
}

/// Phi_s(t) = Phi(t^(s / a_Phi)).
inline GrowthFunction power_transform(const GrowthFunction& phi, double s) {
  require(s > 0.0, ErrorKind::domain, "power_transform: s must be positive");
  double a = indices(phi).a;
  require(a > 0.0, ErrorKind::domain, "power_transform: lower index a_Phi must be positive");
  if (phi.family() == GrowthFamily::power) {
    return GrowthFunction::power(phi.exponent() * s / a, phi.coefficient());
  }
  return GrowthFunction::power_transformed(phi, s / a);
}

/// c^-1 Phi1(t/c) <= Phi2(t) <= c Phi1(c t) on the standard grid.
inline bool equivalence_check(const GrowthFunction& phi1, const GrowthFunction& phi2, double c) {
  require(c > 0.0, ErrorKind::domain, "equivalence_check: c must be positive");
  constexpr double slack = 1e-12;
  for (double t : standard_grid()) {
    double v2 = phi2(t);
    if (phi1(t / c) / c > v2 * (1.0 + slack)) return false;
    if (v2 > c * phi1(c * t) * (1.0 + slack)) return false;
  }
  return true;
}

}  // namespace bol
