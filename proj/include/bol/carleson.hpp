#pragma once

// Averaging functions, Berezin transforms, the embedding-with-loss checker and
// composition operators induced by real Mobius maps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bol/atoms.hpp"
#include "bol/bergman.hpp"
#include "bol/error.hpp"
#include "bol/growth.hpp"
#include "bol/halfplane.hpp"
#include "bol/orlicz.hpp"

namespace bol {

namespace detail {

inline bool is_unit_box_density(const DensityMeasure& d, Box* out) {
  if (d.label != "valpha" || d.y_shift != 0.0) return false;
  const auto* b = std::get_if<Box>(&d.support.variant());
  const auto* q = std::get_if<CarlesonSquare>(&d.support.variant());
  if (!b && !q) return false;
  auto boxes = d.support.boxes();
  if (boxes.size() != 1) return false;
  const Box& bx = boxes[0];
  if (!std::isfinite(bx.x0) || !std::isfinite(bx.x1) || !std::isfinite(bx.y1)) return false;
  *out = bx;
  return true;
}

inline MeshHints merged_hints(const HPoint& z, const MeshHints& base) {
  MeshHints h = AnalyticFn::point_hints(z);
  for (double v : base.y_breaks) h.y_breaks.push_back(v);
  std::sort(h.y_breaks.begin(), h.y_breaks.end());
  h.y_breaks.erase(std::unique(h.y_breaks.begin(), h.y_breaks.end()), h.y_breaks.end());
  return h;
}

/// atan(x) - x / (1 + x^2), by its series near zero.
inline double atan_gap(double x) {
  if (x >= 0.5) return std::atan(x) - x / (1 + x * x);
  double x2 = x * x, term = x * x2, acc = 0.0;
  for (int k = 1; k < 60 && term > 1e-18 * acc; ++k, term *= x2)
    acc += (k % 2 ? 1.0 : -1.0) * (2.0 * k) / (2.0 * k + 1.0) * term;
  return acc;
}

/// int_A^B ds / (s^2 + t^2)^2 for 0 <= A < B <= inf. Past s = t the substitution
/// s = 1/r turns it into atan_gap differences, which avoids cancellation.
inline double s_integral_4(double A, double B, double t) {
  auto F = [t](double s) { return s / (2 * t * t * (s * s + t * t)) + std::atan(s / t) / (2 * t * t * t); };
  auto tail = [t](double a, double b) {
    double hb = std::isfinite(b) ? atan_gap(t / b) : 0.0;
    return (atan_gap(t / a) - hb) / (2 * t * t * t);
  };
  if (B <= t) return F(B) - F(A);
  if (A >= t) return tail(A, B);
  return F(t) - F(A) + tail(t, B);
}

/// int_a^b du / ((u - x)^2 + t^2)^2.
inline double x_integral_4(double a, double b, double x, double t) {
  double A = a - x, B = b - x;
  if (A < 0.0 && B > 0.0) return s_integral_4(0.0, -A, t) + s_integral_4(0.0, B, t);
  if (B <= 0.0) return s_integral_4(-B, -A, t);
  return s_integral_4(A, B, t);
}

}  // namespace detail

/// mu(D) for a disk inside the half-plane.
inline double measure_of_disk(const MeasureSpec& mu, const Disk& d, double tol = 1e-10) {
  if (const auto* a = std::get_if<AtomicMeasure>(&mu.variant())) {
    std::vector<double> m;
    for (const auto& [p, mass] : a->atoms)
      if (d.contains(p)) m.push_back(mass);
    return quad::pairwise_sum<double>(m);
  }
  DensityMeasure dm = mu.as_density();
  // the density form is written in shifted coordinates: weight(x, y) (y - shift)^alpha_base
  auto f = [&](double x, double y) {
    double yp = y - dm.y_shift;
    if (yp <= 0.0 || !dm.support.contains(x, yp)) return 0.0;
    double w = dm.weight(x, y);
    return w == 0.0 ? 0.0 : w * std::pow(yp, dm.alpha_base);
  };
  IntegrateOptions o;
  o.tol = tol;
  o.throw_on_accuracy = false;
  return integrate<double>(f, 0.0, Region::disk(d), o).value;
}

/// mu(D_s(z)) / |D_s(z)|_alpha.
inline double average(const MeasureSpec& mu, const HPoint& z, double s, double alpha, double tol = 1e-10) {
  require(s > 0.0 && s < 1.0, ErrorKind::domain, "averaging radius s must lie in (0, 1)");
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  auto d = hyperbolic_disk(z, s);
  return measure_of_disk(mu, d, tol) / disk_measure(d, alpha);
}

/// (2 + s)^(2(2+alpha)) / |D_s(i)|_alpha, a constant with average <= C berezin,
/// from |w - conj z| <= (2 + s) Im z on D_s(z).
inline double averaging_constant(double s, double alpha) {
  return std::pow(2.0 + s, 2.0 * (2.0 + alpha)) / disk_measure(hyperbolic_disk(HPoint(0, 1), s), alpha);
}

/// Berezin transform: int Im(z)^(2+alpha) / |w - conj z|^(2(2+alpha)) dmu(w).
inline double berezin(const MeasureSpec& mu, const HPoint& z, double alpha, double tol = 1e-8) {
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  const double e = 2.0 + alpha;
  const double ye = std::pow(z.y, e);
  auto kern = [&](double u, double v) {
    double q = (u - z.x) * (u - z.x) + (v + z.y) * (v + z.y);
    return ye * rpow(q, -e);
  };
  if (const auto* a = std::get_if<AtomicMeasure>(&mu.variant())) {
    std::vector<double> t;
    for (const auto& [p, m] : a->atoms) t.push_back(m * kern(p.x, p.y));
    return quad::pairwise_sum<double>(t);
  }
  DensityMeasure d = mu.as_density();
  Box bx;
  if (alpha == 0.0 && detail::is_unit_box_density(d, &bx)) {
    // x integral in closed form, then one weighted integral in v
    std::vector<double> br{0.25 * z.y, z.y, 4.0 * z.y};
    auto segs = quad::weighted_segments(bx.y0, bx.y1, d.alpha_base, br);
    quad::Options o;
    o.rel_tol = tol;
    o.initial_panels = 2;
    auto r = quad::integrate<double>([&](double v) { return detail::x_integral_4(bx.x0, bx.x1, z.x, v + z.y); },
                                     segs, o);
    if (!r.converged) throw AccuracyError("berezin: refinement did not reach tolerance", r.value * z.y * z.y, r.error);
    return z.y * z.y * r.value;
  }
  IntegrateOptions o;
  o.tol = tol;
  return integrate_measure(kern, mu, o, detail::merged_hints(z, d.hints));
}

// ---------------------------------------------------------------------------
// Membership of the Berezin transform in L^Phi3(dV_alpha)

struct MembershipOptions {
  int layers = 20;      // bottom edge goes down by 2 per layer
  int far_layers = 12;  // sides and top stop growing after this many doublings
  double tol = 1e-5;
  double inner_tol = 1e-7;
  double stability = 0.01;
};

struct MembershipResult {
  bool applicable = true;
  bool member = false;
  double lux = 0.0;
  double last_change = 0.0;
  std::vector<double> lux_by_layer;
  std::string note;
};

namespace detail {

/// Box around the bulk of a measure, used as the first region.
inline Box measure_frame(const MeasureSpec& mu) {
  if (const auto* a = std::get_if<AtomicMeasure>(&mu.variant())) {
    double x0 = kInf, x1 = -kInf, y1 = 0.0;
    for (const auto& [p, m] : a->atoms) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    if (a->atoms.empty()) return {-1, 1, 0, 1};
    return {x0, x1, 0.0, y1};
  }
  if (const auto* m = std::get_if<MobiusMeasure>(&mu.variant())) {
    double c = m->c != 0.0 ? m->a / m->c : 0.0;
    return {c - 1.0, c + 1.0, 0.0, 1.0 + m->shift};
  }
  DensityMeasure d = mu.as_density();
  auto bb = bounding_box(d.support);
  if (!std::isfinite(bb.x0) || !std::isfinite(bb.x1)) bb.x0 = -1, bb.x1 = 1;
  if (!std::isfinite(bb.y1)) bb.y1 = 1.0;
  bb.y1 += d.y_shift;
  return bb;
}

}  // namespace detail

/// Phi1 o Phi2^-1, in closed form for two powers.
inline GrowthFunction loss_function(const GrowthFunction& phi1, const GrowthFunction& phi2) {
  if (phi1.family() == GrowthFamily::power && phi2.family() == GrowthFamily::power) {
    double r = phi1.exponent() / phi2.exponent();
    return GrowthFunction::power(r, phi1.coefficient() * std::pow(phi2.coefficient(), -r));
  }
  return GrowthFunction::composed_inverse(phi1, phi2);
}

/// Phi3 = complement of Phi1 o Phi2^-1.
inline GrowthFunction third_growth(const GrowthFunction& phi1, const GrowthFunction& phi2) {
  return complementary(loss_function(phi1, phi2));
}

/// Luxembourg norm of the Berezin transform in L^Phi3(dV_alpha), Phi3 the complement
/// of Phi1 o Phi2^-1, over expanding regions. Membership means the norm moved by at
/// most `stability` (relative) on the last layer.
inline MembershipResult berezin_membership(const MeasureSpec& mu, const GrowthFunction& phi1,
                                           const GrowthFunction& phi2, double alpha,
                                           const MembershipOptions& opt = {}) {
  MembershipResult out;
  auto c18 = condition18_check(phi1, phi2);
  if (!c18.holds) {
    out.applicable = false;
    out.note = "integral growth condition fails; membership criterion does not apply";
  }
  if (mu.is_zero()) {
    out.member = true;
    out.note = out.note.empty() ? "zero measure" : out.note;
    return out;
  }
  auto phi3 = third_growth(phi1, phi2);

  Box f = detail::measure_frame(mu);
  double L = std::max({f.x1 - f.x0, f.y1, 1e-3});
  double X0 = f.x0 - L, X1 = f.x1 + L, B = 0.5 * L, T = 2.0 * L;

  // fixed product Gauss rule on cells that shrink geometrically toward the frame
  // edges in x and toward the axis in y; the transform varies on the scale Im z
  static const auto g = quad::gauss_legendre(6);
  const auto& [gn, gw] = g;
  auto breaks = [](double a, double b, auto dist, double h0) {
    std::vector<double> out{a};
    double x = a;
    while (b - x > 1e-12 * (b - a)) {
      double step = std::max(h0, 0.5 * dist(x));
      // do not step over the place where cells should be smallest
      double ahead = x + step;
      while (ahead < b && step > h0 && 0.5 * dist(ahead) < 0.5 * step) {
        step *= 0.5;
        ahead = x + step;
      }
      x = std::min(b, ahead);
      out.push_back(x);
    }
    return out;
  };
  struct Node {
    double v, w;
  };
  std::vector<Node> nodes;
  auto add_box = [&](double x0, double x1, double y0, double y1) {
    if (!(x1 > x0 && y1 > y0)) return;
    auto xd = [&](double x) { return std::min(std::abs(x - f.x0), std::abs(x - f.x1)); };
    auto yd = [](double y) { return y; };
    auto xs = breaks(x0, x1, xd, 0.5 * y0);
    auto ys = breaks(y0, y1, yd, 0.0);
    for (std::size_t j = 0; j + 1 < ys.size(); ++j)
      for (std::size_t iy = 0; iy < gn.size(); ++iy) {
        double hy = 0.5 * (ys[j + 1] - ys[j]), y = ys[j] + hy * (1 + gn[iy]);
        double wy = hy * gw[iy] * std::pow(y, alpha);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
          double hx = 0.5 * (xs[i + 1] - xs[i]);
          for (std::size_t ix = 0; ix < gn.size(); ++ix) {
            double x = xs[i] + hx * (1 + gn[ix]);
            nodes.push_back({berezin(mu, HPoint(x, y), alpha, opt.inner_tol), wy * hx * gw[ix]});
          }
        }
      }
  };
  auto lux_now = [&]() {
    std::vector<double> v, w;
    for (const auto& n : nodes) {
      v.push_back(n.v);
      w.push_back(n.w);
    }
    return lux_discrete(v, w, phi3).value;
  };

  add_box(X0, X1, B, T);
  out.lux_by_layer.push_back(lux_now());
  for (int m = 1; m <= opt.layers; ++m) {
    double grow = m <= opt.far_layers ? 2.0 : 1.0;
    double nX0 = f.x0 - (f.x0 - X0) * grow, nX1 = f.x1 + (X1 - f.x1) * grow;
    double nB = 0.5 * B, nT = T * grow;
    add_box(nX0, nX1, nB, B);   // bottom
    add_box(nX0, nX1, T, nT);   // top
    add_box(nX0, X0, B, T);     // left
    add_box(X1, nX1, B, T);     // right
    X0 = nX0, X1 = nX1, B = nB, T = nT;
    out.lux_by_layer.push_back(lux_now());
  }
  out.lux = out.lux_by_layer.back();
  double prev = out.lux_by_layer[out.lux_by_layer.size() - 2];
  out.last_change = out.lux > 0.0 ? std::abs(out.lux - prev) / out.lux : 0.0;
  out.member = out.last_change <= opt.stability;
  if (!out.member) {
    std::ostringstream os;
    os << "norm still growing on the last layer (relative change " << out.last_change << ")";
    out.note = out.note.empty() ? os.str() : out.note + "; " + os.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding checker

struct FamilySpec {
  enum class Kind { kernels, whitney };
  Kind kind = Kind::kernels;
  int kernels = 30;
  int atom_sums = 20;
  double im_min = 1e-3, im_max = 1.0;
  std::optional<double> x_center;
  int depth = 10;  // Whitney levels
  double tol = 1e-6;
};

struct EmbeddingVerdict {
  bool condition18 = false;
  double condition18_C = kInf;
  bool ratio_monotone = false;
  bool membership_checked = false;
  MembershipResult membership;
  double empirical_ratio = 0.0;
  int test_family_size = 0;
  double growth = 0.0;
  std::string trend;  // bounded | unbounded | inconclusive
  std::vector<double> heights, ratios;
  std::uint64_t seed = 0;
};

/// Bounded when the ratio grows at most 2x toward the boundary, unbounded at 10x or more.
inline std::string classify_growth(double g) {
  if (g <= 2.0) return "bounded";
  if (g >= 10.0) return "unbounded";
  return "inconclusive";
}

struct WhitneyRatios {
  std::vector<double> depth_height;  // Im of the lowest atoms at each depth
  std::vector<double> ratio;         // one entry per depth 0..N
};

/// Random-sign Whitney family: F_n = sum over Whitney boxes Q of level <= n of
/// eps_Q c_Q k_{alpha, w_Q}, with c_Q = mu(Q) Im(w_Q)^(-(2+alpha)/2). The numerator is the
/// L^Phi2(mu) norm of the square function (sum c_Q^2 |k_Q|^2)^(1/2), which is the sign
/// average of |F_n| up to Khintchine constants; the denominator is the sign average of
/// ||F_n||^2 in A^2_alpha, which is exact: sum c_Q^2 ||k_Q||^2.
inline WhitneyRatios whitney_ratios(const MeasureSpec& mu, const GrowthFunction& phi2, double alpha, int depth,
                                    std::optional<std::pair<double, double>> base = std::nullopt,
                                    double cutoff = 32.0) {
  require(depth >= 0 && depth <= 16, ErrorKind::parameter, "Whitney depth must lie in [0, 16]");
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  // quadrature nodes for mu
  std::vector<quad::Node2> nodes;
  double x0, x1, H;
  if (const auto* a = std::get_if<AtomicMeasure>(&mu.variant())) {
    for (const auto& [p, m] : a->atoms) nodes.push_back({p.x, p.y, m});
    auto b = base.value_or(std::pair{-1.0, 1.0});
    x0 = b.first, x1 = b.second, H = x1 - x0;
  } else {
    DensityMeasure d = mu.as_density();
    auto boxes = d.support.boxes();
    require(d.y_shift == 0.0 && boxes.size() == 1 && boxes[0].y0 == 0.0 && std::isfinite(boxes[0].x0) &&
                std::isfinite(boxes[0].x1) && std::isfinite(boxes[0].y1),
            ErrorKind::parameter, "Whitney family needs an atomic measure or a density on a box resting on the axis");
    const Box bx = boxes[0];
    x0 = bx.x0, x1 = bx.x1, H = bx.y1;
    if (base) x0 = base->first, x1 = base->second;
    // the square function is smooth on each Whitney box, so a 6 x 6 product rule per box suffices
    static const auto g = quad::gauss_legendre(6);
    const auto& [gn, gw] = g;
    const double tau = d.alpha_base;
    const int K = depth + 3;
    auto add_row = [&](double ya, double yb, int panels, bool bottom) {
      double wx = (bx.x1 - bx.x0) / panels;
      for (std::size_t iy = 0; iy < gn.size(); ++iy) {
        double y, wy;
        if (bottom) {
          // y = yb u^(1/(1+tau)), so y^tau dy = yb^(1+tau)/(1+tau) du on u in [0, 1]
          double u = 0.5 * (1 + gn[iy]);
          y = yb * std::pow(u, 1.0 / (1.0 + tau));
          wy = 0.5 * gw[iy] * std::pow(yb, 1.0 + tau) / (1.0 + tau);
        } else {
          y = 0.5 * (ya + yb) + 0.5 * (yb - ya) * gn[iy];
          wy = 0.5 * (yb - ya) * gw[iy] * std::pow(y, tau);
        }
        for (int p = 0; p < panels; ++p) {
          double xa = bx.x0 + p * wx;
          for (std::size_t ix = 0; ix < gn.size(); ++ix) {
            double x = xa + 0.5 * wx * (1 + gn[ix]);
            double w = wy * 0.5 * wx * gw[ix] * d.weight(x, y);
            if (w != 0.0) nodes.push_back({x, y, w});
          }
        }
      }
    };
    // rows follow the Whitney levels, with x panels aligned to the boxes of each level
    for (int k = 0; k <= K; ++k)
      add_row(H * std::ldexp(1.0, -k - 1), H * std::ldexp(1.0, -k), 1 << std::min(k, depth), false);
    add_row(0.0, H * std::ldexp(1.0, -K - 1), 1 << depth, true);
  }

  // Whitney boxes over [x0, x1] x (0, H]: level k has 2^k boxes of height H 2^(-k-1)
  const double e = 2.0 + alpha;
  const double knorm2 = std::pow(2.0, -e) / reproducing_constant(alpha);  // ||k_w||^2, the same for every w
  std::vector<std::vector<double>> c2(depth + 1);
  std::vector<double> vk(depth + 1), wk(depth + 1), denom(depth + 1, 0.0);
  for (int k = 0; k <= depth; ++k) {
    int n = 1 << k;
    wk[k] = (x1 - x0) / n;
    double ya = H * std::ldexp(1.0, -k - 1), yb = H * std::ldexp(1.0, -k);
    vk[k] = 0.75 * yb;
    std::vector<double> mass(n, 0.0);
    for (const auto& nd : nodes) {
      if (nd.y <= ya || nd.y > yb || nd.x < x0 || nd.x >= x1) continue;
      int m = std::min(n - 1, static_cast<int>((nd.x - x0) / wk[k]));
      mass[m] += nd.w;
    }
    c2[k].resize(n);
    for (int m = 0; m < n; ++m) {
      double c = mass[m] * std::pow(vk[k], -0.5 * e);
      c2[k][m] = c * c;
      denom[k] += c * c * knorm2;
    }
  }
  for (int k = 1; k <= depth; ++k) denom[k] += denom[k - 1];

  // level sums of c^2 |k_Q|^2 at each node; atoms farther than cutoff (v + y) are dropped
  std::vector<std::vector<double>> S(depth + 1, std::vector<double>(nodes.size(), 0.0));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    for (int k = 0; k <= depth; ++k) {
      double v = vk[k], ve = std::pow(v, e), reach = cutoff * (v + nd.y);
      int n = 1 << k;
      int lo = std::max(0, static_cast<int>(std::ceil((nd.x - reach - x0) / wk[k] - 0.5)));
      int hi = std::min(n - 1, static_cast<int>(std::floor((nd.x + reach - x0) / wk[k] - 0.5)));
      double acc = 0.0;
      double t2 = (nd.y + v) * (nd.y + v);
      for (int m = lo; m <= hi; ++m) {
        double dx = nd.x - (x0 + (m + 0.5) * wk[k]);
        acc += c2[k][m] * rpow(dx * dx + t2, -e);
      }
      S[k][i] = acc * ve;
    }
  }
  WhitneyRatios out;
  std::vector<double> acc(nodes.size(), 0.0), v(nodes.size()), w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = nodes[i].w;
  for (int k = 0; k <= depth; ++k) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      acc[i] += S[k][i];
      v[i] = std::sqrt(acc[i]);
    }
    double num = lux_discrete(v, w, phi2).value;
    out.depth_height.push_back(vk[k]);
    out.ratio.push_back(denom[k] > 0.0 ? num / std::sqrt(denom[k]) : 0.0);
  }
  return out;
}

/// Evidence for A^Phi1_alpha embedding into L^Phi2(mu), plus the Berezin membership verdict.
inline EmbeddingVerdict embedding_test(const MeasureSpec& mu, const GrowthFunction& phi1, const GrowthFunction& phi2,
                                       double alpha, const FamilySpec& fam = {}, std::uint64_t seed = 1,
                                       std::optional<MembershipOptions> membership = MembershipOptions{}) {
  EmbeddingVerdict v;
  v.seed = seed;
  auto c18 = condition18_check(phi1, phi2);
  v.condition18 = c18.holds;
  v.condition18_C = c18.C;
  v.ratio_monotone = c18.ratio_monotone;
  if (membership) {
    v.membership = berezin_membership(mu, phi1, phi2, alpha, *membership);
    v.membership_checked = true;
  }

  if (fam.kind == FamilySpec::Kind::whitney) {
    require(phi1.is_power(2.0), ErrorKind::parameter, "Whitney family needs Phi1(t) = t^2");
    if (mu.is_zero()) {
      v.trend = "bounded";
      v.test_family_size = fam.depth + 1;
      return v;
    }
    auto w = whitney_ratios(mu, phi2, alpha, fam.depth);
    v.heights = w.depth_height;
    v.ratios = w.ratio;
    v.test_family_size = static_cast<int>(w.ratio.size());
    v.empirical_ratio = *std::max_element(w.ratio.begin(), w.ratio.end());
    v.growth = w.ratio.front() > 0.0 ? w.ratio.back() / w.ratio.front() : 0.0;
    v.trend = classify_growth(v.growth);
    return v;
  }

  require(fam.kernels > 0 || fam.atom_sums > 0, ErrorKind::parameter, "test family is empty");
  double xc = fam.x_center.value_or(0.5 * (detail::measure_frame(mu).x0 + detail::measure_frame(mu).x1));
  auto ratio_of = [&](const AnalyticFn& F) {
    double den = bergman_norm(F, phi1, alpha, fam.tol).value;
    if (mu.is_zero() || den == 0.0) return 0.0;
    double num = luxembourg(F.modulus(), mu, phi2, fam.tol, F.hints()).value;
    return num / den;
  };
  auto hs = fam.kernels > 0 ? log_grid(fam.im_min, fam.im_max, fam.kernels) : std::vector<double>{};
  std::sort(hs.rbegin(), hs.rend());
  for (double h : hs) {
    v.heights.push_back(h);
    v.ratios.push_back(ratio_of(AnalyticFn::normalized_kernel_at(HPoint(xc, h), alpha)));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ul(std::log(fam.im_min), std::log(fam.im_max));
  std::normal_distribution<double> nd;
  double atom_max = 0.0;
  for (int i = 0; i < fam.atom_sums; ++i) {
    std::vector<HPoint> c;
    std::vector<cplx> k;
    for (int j = 0; j < 3; ++j) {
      double y = std::exp(ul(rng));
      c.emplace_back(xc + y * ux(rng), y);
      double re = nd(rng), im = nd(rng);
      k.emplace_back(std::pow(y, 0.5 * (2.0 + alpha)) * cplx(re, im));
    }
    atom_max = std::max(atom_max, ratio_of(AnalyticFn::atom_sum(c, k, alpha)));
  }
  v.test_family_size = fam.kernels + fam.atom_sums;
  v.empirical_ratio = atom_max;
  for (double r : v.ratios) v.empirical_ratio = std::max(v.empirical_ratio, r);
  if (!v.ratios.empty() && v.ratios.front() > 0.0) {
    // compare the last decade with the first
    double top = 0.0, bottom = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (hs[i] >= fam.im_max / 10.0) top = std::max(top, v.ratios[i]);
      if (hs[i] <= fam.im_min * 10.0) bottom = std::max(bottom, v.ratios[i]);
    }
    v.growth = top > 0.0 ? bottom / top : 0.0;
  }
  v.trend = mu.is_zero() ? "bounded" : classify_growth(v.growth);
  return v;
}

// ---------------------------------------------------------------------------
// Composition operators

/// mu_{phi,beta}(E) = |phi^-1(E)|_beta for phi(z) = (a z + b)/(c z + d) + i shift.
inline MeasureSpec pullback_mobius(double a, double b, double c, double d, double beta, double shift = 0.0) {
  return MeasureSpec::mobius(a, b, c, d, beta, shift);
}

struct ChangeOfVariables {
  std::string label;
  double direct = 0.0;    // int Phi2(|F o phi|) dV_beta
  double pullback = 0.0;  // int Phi2(|F|) dmu_{phi,beta}
  double rel_diff = 0.0;
};

struct CompositionReport {
  EmbeddingVerdict verdict;
  std::vector<ChangeOfVariables> checks;
};

/// Test functions for the change-of-variables identity. When phi sends infinity to a
/// finite point p, F o phi tends to F(p) at infinity and both sides diverge, so the
/// functions carry the factor ((w - p)/(w + i))^3, which vanishes at p.
inline std::vector<std::pair<std::string, AnalyticFn>> composition_test_functions(const MobiusMeasure& m) {
  std::vector<std::pair<double, double>> em{{1.0, 4.0}, {0.5, 4.0}, {2.0, 4.0}, {1.0, 5.0}, {1.0, 3.0}};
  std::vector<std::pair<std::string, AnalyticFn>> out;
  for (auto [eps, mm] : em) {
    std::ostringstream os;
    os << "G_{" << eps << "," << mm << "}";
    auto G = AnalyticFn::g(eps, mm);
    if (m.c == 0.0) {
      out.emplace_back(os.str(), G);
      continue;
    }
    cplx p = m.a / m.c + cplx(0.0, m.shift);
    os << "*((w-p)/(w+i))^3";
    auto h = G.hints();
    out.emplace_back(os.str(), AnalyticFn::custom(
                                   [G, p](cplx w) {
                                     cplx r = (w - p) / (w + cplx(0.0, 1.0));
                                     return G(w) * r * r * r;
                                   },
                                   h, os.str()));
  }
  return out;
}

/// Both sides of int Phi2(|F o phi|) dV_beta = int Phi2(|F|) dmu_{phi,beta}.
inline ChangeOfVariables change_of_variables(const MobiusMeasure& m, const AnalyticFn& F, const GrowthFunction& phi2,
                                             double tol = 1e-9) {
  ChangeOfVariables c;
  c.label = F.name();
  IntegrateOptions o;
  o.tol = tol;
  auto direct = [&](double x, double y) { return phi2(std::abs(F(m.phi(cplx(x, y))))); };
  // hints for the pulled-back function: the preimage of F's centre
  MeshHints h;
  cplx pre = m.phi_inverse(cplx(F.hints().x_center, F.hints().x_scale + m.shift));
  if (pre.imag() > 0.0) h = AnalyticFn::point_hints(HPoint(pre.real(), pre.imag()));
  c.direct = integrate<double>(direct, m.beta, Region::whole(), o, h).value;
  auto mu = MeasureSpec(MobiusMeasure(m));
  c.pullback = integrate_measure([&](double x, double y) { return phi2(std::abs(F(x, y))); }, mu, o, F.hints());
  c.rel_diff = std::abs(c.direct - c.pullback) / std::max(std::abs(c.direct), 1e-300);
  return c;
}

/// Verdict on mu_{phi,beta} plus the change-of-variables cross-check on five test functions.
inline CompositionReport composition_check(double a, double b, double c, double d, double beta,
                                           const GrowthFunction& phi1, const GrowthFunction& phi2, double alpha,
                                           const FamilySpec& fam = {}, double shift = 0.0, std::uint64_t seed = 1,
                                           std::optional<MembershipOptions> membership = std::nullopt) {
  auto mu = pullback_mobius(a, b, c, d, beta, shift);
  CompositionReport r;
  r.verdict = embedding_test(mu, phi1, phi2, alpha, fam, seed, membership);
  const auto& m = std::get<MobiusMeasure>(mu.variant());
  for (const auto& [name, F] : composition_test_functions(m)) {
    auto cv = change_of_variables(m, F, phi2);
    cv.label = name;
    r.checks.push_back(cv);
  }
  return r;
}

}  // namespace bol
