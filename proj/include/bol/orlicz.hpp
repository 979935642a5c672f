#pragma once

// Measures on the half-plane, lattice sequences, modulars and Luxembourg norms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bol/error.hpp"
#include "bol/growth.hpp"
#include "bol/halfplane.hpp"
#include "bol/lattice.hpp"
#include "bol/quadrature.hpp"

namespace bol {

/// Nonnegative scalar field on the half-plane, typically |F(x + iy)|.
using Field = std::function<double(double, double)>;

struct AtomicMeasure {
  std::vector<std::pair<HPoint, double>> atoms;
};

/// dmu = weight(x, y) (y - y_shift)^alpha_base dx dy on {(x, y) : (x, y - y_shift) in support}.
struct DensityMeasure {
  std::function<double(double, double)> weight;
  Region support = Region::whole();
  double alpha_base = 0.0;
  double y_shift = 0.0;
  MeshHints hints;
  std::string label = "density";
};

/// Pullback of V_beta under phi(z) = (a z + b)/(c z + d) + i*shift.
struct MobiusMeasure {
  double a = 1, b = 0, c = 0, d = 1;
  double beta = 0.0;
  double shift = 0.0;

  double det() const { return a * d - b * c; }
  cplx phi(cplx z) const { return (a * z + b) / (c * z + d) + cplx(0.0, shift); }
  cplx phi_inverse(cplx w) const {
    w -= cplx(0.0, shift);
    return (d * w - b) / (-c * w + a);
  }
  /// h(w) = Im(phi^-1 w)^beta |(phi^-1)'(w)|^2 for Im w > shift.
  double density(double x, double y) const {
    cplx w(x, y - shift);
    double q = std::norm(a - c * w);
    double im = det() * w.imag() / q;
    return std::pow(im, beta) * det() * det() / (q * q);
  }
};

class MeasureSpec {
 public:
  using Variant = std::variant<AtomicMeasure, DensityMeasure, MobiusMeasure>;

  MeasureSpec() : v_(AtomicMeasure{}) {}
  explicit MeasureSpec(Variant v) : v_(std::move(v)) {}

  static MeasureSpec zero() { return MeasureSpec(AtomicMeasure{}); }

  static MeasureSpec atomic(std::vector<std::pair<HPoint, double>> atoms) {
    for (const auto& [p, m] : atoms)
      require(m > 0.0 && std::isfinite(m), ErrorKind::domain, "atomic masses must be positive and finite");
    return MeasureSpec(AtomicMeasure{std::move(atoms)});
  }

  static MeasureSpec density(DensityMeasure d) {
    require(static_cast<bool>(d.weight), ErrorKind::parameter, "density measure needs a weight");
    require(d.alpha_base > -1.0, ErrorKind::domain, "density alpha_base must exceed -1");
    return MeasureSpec(std::move(d));
  }

  /// y^alpha dx dy restricted to a region.
  static MeasureSpec valpha(double alpha, Region support = Region::whole()) {
    DensityMeasure d;
    d.weight = [](double, double) { return 1.0; };
    d.support = std::move(support);
    d.alpha_base = alpha;
    d.label = "valpha";
    return density(std::move(d));
  }

  static MeasureSpec mobius(double a, double b, double c, double d, double beta, double shift = 0.0) {
    require(a * d - b * c > 0.0, ErrorKind::parameter, "Mobius map needs ad - bc > 0");
    require(beta > -1.0, ErrorKind::domain, "pullback weight beta must exceed -1");
    require(shift >= 0.0, ErrorKind::parameter, "imaginary shift must be nonnegative");
    return MeasureSpec(MobiusMeasure{a, b, c, d, beta, shift});
  }

  const Variant& variant() const { return v_; }
  bool is_atomic() const { return std::holds_alternative<AtomicMeasure>(v_); }
  bool is_zero() const {
    const auto* a = std::get_if<AtomicMeasure>(&v_);
    return a && a->atoms.empty();
  }

  /// Density form of a Mobius pullback: weight det^(beta+2) / |a - c w'|^(2 beta + 4) on y' > 0.
  DensityMeasure as_density() const {
    if (const auto* d = std::get_if<DensityMeasure>(&v_)) return *d;
    const auto* m = std::get_if<MobiusMeasure>(&v_);
    require(m != nullptr, ErrorKind::parameter, "atomic measure has no density");
    MobiusMeasure mm = *m;
    DensityMeasure d;
    d.alpha_base = mm.beta;
    d.y_shift = mm.shift;
    d.weight = [mm](double x, double y) {
      cplx w(x, y - mm.shift);
      double q = std::norm(mm.a - mm.c * w);
      return std::pow(mm.det(), mm.beta + 2.0) * std::pow(q, -(mm.beta + 2.0));
    };
    d.label = "mobius";
    if (mm.c != 0.0) {
      double p = mm.a / mm.c;  // boundary point sent to infinity
      d.hints.x_center = p;
      d.hints.x_scale = 0.0;
      d.hints.y_breaks = {0.01, 0.1, 1.0, 10.0};
    }
    return d;
  }

 private:
  Variant v_;
};

/// Weighted integral of g against mu: atomic sum or adaptive quadrature.
template <class G>
double integrate_measure(G&& g, const MeasureSpec& mu, const IntegrateOptions& opts = {},
                         std::optional<MeshHints> hints = std::nullopt,
                         std::vector<quad::Node2>* capture = nullptr) {
  if (const auto* a = std::get_if<AtomicMeasure>(&mu.variant())) {
    std::vector<double> terms;
    terms.reserve(a->atoms.size());
    for (const auto& [p, m] : a->atoms) terms.push_back(m * g(p.x, p.y));
    return quad::pairwise_sum<double>(terms);
  }
  DensityMeasure d = mu.as_density();
  auto f = [&](double x, double yp) {
    double y = yp + d.y_shift;
    double w = d.weight(x, y);
    return w == 0.0 ? 0.0 : g(x, y) * w;
  };
  std::vector<quad::Node2> local;
  auto r = integrate<double>(f, d.alpha_base, d.support, opts, hints ? *hints : d.hints, capture ? &local : nullptr);
  if (capture) {
    capture->clear();
    for (const auto& n : local) capture->push_back({n.x, n.y + d.y_shift, n.w * d.weight(n.x, n.y + d.y_shift)});
  }
  return r.value;
}

/// int Phi(|f|) dmu.
inline double modular(const Field& f, const MeasureSpec& mu, const GrowthFunction& phi, double tol = 1e-10,
                      std::optional<MeshHints> hints = std::nullopt) {
  IntegrateOptions o;
  o.tol = tol;
  return integrate_measure([&](double x, double y) { return phi(f(x, y)); }, mu, o, hints);
}

struct LuxResult {
  double value = 0.0;
  double modular_at_value = 0.0;
  int iterations = 0;
  std::pair<double, double> bracket{0.0, 0.0};
};

/// Luxembourg norm of weighted point values: inf{lambda : sum w Phi(v / lambda) <= 1}.
/// Bisects in lambda, checking monotonicity of the modular at every step.
inline LuxResult lux_discrete(const std::vector<double>& v, const std::vector<double>& w, const GrowthFunction& phi) {
  require(v.size() == w.size(), ErrorKind::parameter, "values and weights differ in length");
  auto N = [&](double lam) {
    std::vector<double> t(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) t[i] = (v[i] == 0.0 || w[i] == 0.0) ? 0.0 : w[i] * phi(v[i] / lam);
    return quad::pairwise_sum<double>(t);
  };
  LuxResult r;
  double vmax = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (w[i] != 0.0) vmax = std::max(vmax, std::abs(v[i]));
  if (vmax == 0.0 || N(1e-300) <= 1.0) return r;

  double hi = vmax, lo;
  double nhi = N(hi);
  int k = 0;
  while (!(nhi <= 1.0)) {
    hi *= 2.0;
    nhi = N(hi);
    if (++k > 2000) fail(ErrorKind::not_in_space, "modular exceeds 1 for every probed lambda");
  }
  lo = hi;
  double nlo = nhi;
  while (nlo <= 1.0) {
    hi = lo;
    nhi = nlo;
    lo *= 0.5;
    nlo = N(lo);
    if (++k > 4000) return r;
  }
  for (int it = 0; it < 200; ++it) {
    double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    double nm = N(mid);
    if (nm > nlo * (1 + 1e-12) || nm < nhi * (1 - 1e-12))
      fail(ErrorKind::accuracy, "modular is not monotone in lambda");
    if (nm > 1.0) {
      lo = mid;
      nlo = nm;
    } else {
      hi = mid;
      nhi = nm;
    }
    r.iterations = it + 1;
    if (hi - lo <= 1e-15 * hi) break;
  }
  r.value = hi;
  r.modular_at_value = nhi;
  r.bracket = {lo, hi};
  return r;
}

namespace detail {

inline bool is_quadrature_failure(const Error& e) {
  return e.kind() == ErrorKind::accuracy || e.kind() == ErrorKind::divergence;
}

}  // namespace detail

/// Luxembourg norm of f in L^Phi(mu). For densities, an adaptive rule is built
/// for the integrand at the current lambda, the norm is solved exactly on that
/// rule, and the rule is rebuilt at the new lambda until it stops moving.
inline LuxResult luxembourg(const Field& f, const MeasureSpec& mu, const GrowthFunction& phi, double tol = 1e-10,
                            std::optional<MeshHints> hints = std::nullopt) {
  if (const auto* a = std::get_if<AtomicMeasure>(&mu.variant())) {
    std::vector<double> v, w;
    for (const auto& [p, m] : a->atoms) {
      v.push_back(f(p.x, p.y));
      w.push_back(m);
    }
    return lux_discrete(v, w, phi);
  }
  IntegrateOptions o;
  o.tol = tol;
  double lam = 1.0;
  LuxResult r;
  std::vector<quad::Node2> nodes;
  bool built = false;
  for (double probe : {1.0, 1e3, 1e-3, 1e8, 1e-8}) {
    try {
      integrate_measure([&](double x, double y) { return phi(f(x, y) / probe); }, mu, o, hints, &nodes);
      lam = probe;
      built = true;
      break;
    } catch (const Error& e) {
      if (!detail::is_quadrature_failure(e)) throw;
    }
  }
  if (!built) fail(ErrorKind::not_in_space, "modular integral diverges for every probed lambda");
  int total_iterations = 0;
  for (int round = 0; round < 8; ++round) {
    std::vector<double> v(nodes.size()), w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      v[i] = f(nodes[i].x, nodes[i].y);
      w[i] = nodes[i].w;
    }
    r = lux_discrete(v, w, phi);
    total_iterations += r.iterations;
    if (r.value == 0.0) return r;
    double change = std::abs(r.value - lam) / r.value;
    lam = r.value;
    if (round > 0 && change <= 1e-12) break;
    try {
      integrate_measure([&](double x, double y) { return phi(f(x, y) / lam); }, mu, o, hints, &nodes);
    } catch (const Error& e) {
      if (!detail::is_quadrature_failure(e)) throw;
      fail(ErrorKind::not_in_space, "modular integral does not converge near lambda=" + std::to_string(lam));
    }
  }
  r.iterations = total_iterations;
  return r;
}

// ---------------------------------------------------------------------------
// Lattice sequences

struct LatticeIndex {
  int l = 0, j = 0;
  bool operator<(const LatticeIndex& o) const { return j != o.j ? j < o.j : l < o.l; }
  bool operator==(const LatticeIndex& o) const = default;
};

class LatticeSequence {
 public:
  explicit LatticeSequence(DeltaLattice lat) : lat_(std::move(lat)) {}

  const DeltaLattice& lattice() const { return lat_; }
  const std::map<LatticeIndex, cplx>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  void set(int l, int j, cplx v) {
    if (!lat_.in_window(l, j)) {
      std::ostringstream os;
      os << "sequence index (" << l << ", " << j << ") outside the lattice window";
      fail(ErrorKind::range, os.str());
    }
    if (v == cplx(0.0))
      entries_.erase({l, j});
    else
      entries_[{l, j}] = v;
  }
  cplx get(int l, int j) const {
    auto it = entries_.find({l, j});
    return it == entries_.end() ? cplx(0.0) : it->second;
  }

  LatticeSequence operator*(cplx s) const {
    LatticeSequence out(lat_);
    for (const auto& [k, v] : entries_) out.set(k.l, k.j, v * s);
    return out;
  }
  LatticeSequence operator+(const LatticeSequence& o) const {
    LatticeSequence out = *this;
    for (const auto& [k, v] : o.entries_) out.set(k.l, k.j, out.get(k.l, k.j) + v);
    return out;
  }

 private:
  DeltaLattice lat_;
  std::map<LatticeIndex, cplx> entries_;
};

/// inf{lambda : sum Phi(|mu_{l,j}| / lambda) 2^(j gamma (alpha+2)) <= 1}.
inline LuxResult seq_luxembourg(const LatticeSequence& s, const GrowthFunction& phi, double alpha) {
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  std::vector<double> v, w;
  double g = s.lattice().gamma();
  for (const auto& [k, val] : s.entries()) {
    v.push_back(std::abs(val));
    w.push_back(std::exp2(k.j * g * (alpha + 2.0)));
  }
  return lux_discrete(v, w, phi);
}

// ---------------------------------------------------------------------------
// Hardy-Orlicz lines

struct HardyResult {
  double sup = 0.0;
  std::vector<double> y_grid;
  std::vector<double> per_line;
};

/// Default line heights: 16 log-spaced values in [1e-4, 10].
inline std::vector<double> default_hardy_grid() { return log_grid(1e-4, 10.0, 16); }

/// Luxembourg norm of x -> f(x, y) over the real line (Lebesgue measure).
/// `scale(y)` sets the width of the tan map used for the infinite line.
inline double line_luxembourg(const Field& f, double y, const GrowthFunction& phi,
                              const std::function<double(double)>& scale, double center = 0.0,
                              double tol = 1e-10) {
  quad::Options o;
  o.rel_tol = tol;
  o.initial_panels = 8;
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto segs = quad::line_segments(-inf, inf, center, scale(y), true);
  quad::Rule1D rule;
  auto build = [&](double lam) {
    auto r = quad::integrate<double>([&](double x) { return phi(f(x, y) / lam); }, segs, o, &rule);
    if (!r.converged) {
      std::ostringstream os;
      os << "line y=" << y << ": modular integral diverges (partial estimate " << r.value << ")";
      fail(ErrorKind::not_in_space, os.str());
    }
  };
  try {
    build(1.0);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::divergence) {
      std::ostringstream os;
      os << "line y=" << y << ": " << e.detail();
      fail(ErrorKind::not_in_space, os.str());
    }
    throw;
  }
  double lam = 1.0;
  LuxResult r;
  for (int round = 0; round < 8; ++round) {
    std::vector<double> v(rule.x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(rule.x[i], y);
    r = lux_discrete(v, rule.w, phi);
    if (r.value == 0.0) return 0.0;
    double change = std::abs(r.value - lam) / r.value;
    lam = r.value;
    if (round > 0 && change <= 1e-12) break;
    build(lam);
  }
  return r.value;
}

inline HardyResult hardy_norm(const Field& f, const GrowthFunction& phi, std::vector<double> y_grid,
                              const std::function<double(double)>& scale, double center = 0.0) {
  for (double y : y_grid) require(y > 0.0, ErrorKind::domain, "Hardy grid heights must be positive");
  std::sort(y_grid.begin(), y_grid.end());
  HardyResult h;
  h.y_grid = y_grid;
  for (double y : y_grid) {
    double v = line_luxembourg(f, y, phi, scale, center);
    h.per_line.push_back(v);
    h.sup = std::max(h.sup, v);
  }
  return h;
}

}  // namespace bol
