#pragma once

// The delta-lattice z_{l,j} = delta^2 l 2^(gamma j - 3) + i 2^(gamma j), its cells,
// and empirical checks of the covering, disjointness and overlap properties.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bol/error.hpp"
#include "bol/halfplane.hpp"

namespace bol {

struct Interval {
  double lo = 0.0, hi = 0.0;  // open interval ]lo, hi[
  double length() const { return hi - lo; }
  bool contains(double v) const { return v > lo && v < hi; }
  bool subset_of(const Interval& o) const { return lo >= o.lo && hi <= o.hi; }
  bool disjoint(const Interval& o) const { return hi <= o.lo || o.hi <= lo; }
};

struct Cells {
  Interval I, I_prime, J, J_prime;
};

struct GammaInterval {
  double lo, hi;
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double g) const { return g > lo && g < hi; }
};

/// Admissible open interval for gamma.
inline GammaInterval gamma_interval(double delta) {
  require(delta > 0.0 && delta < 1.0, ErrorKind::domain, "delta must lie in (0, 1)");
  double d2 = delta * delta;
  return {std::log((1 + d2 / 20) / (1 - d2 / 20)) / (4 * std::log(2.0)),
          std::log((1 + d2 / 4) / (1 - d2 / 4)) / (4 * std::log(2.0))};
}

inline double s_delta(double delta) {
  require(delta > 0.0 && delta < 1.0, ErrorKind::domain, "delta must lie in (0, 1)");
  return std::pow(1 + delta * delta / 20, 0.25) - 1;
}

/// Largest delta with (1 + 7 sqrt 2) delta < 1, used as an advisory threshold.
inline double sampling_delta_threshold() { return 1.0 / (1.0 + 7.0 * std::sqrt(2.0)); }

class DeltaLattice {
 public:
  static DeltaLattice build(double delta, int l_max, int j_max, std::optional<double> gamma = std::nullopt) {
    require(delta > 0.0 && delta < 1.0, ErrorKind::domain, "delta must lie in (0, 1)");
    require(l_max >= 0 && j_max >= 0, ErrorKind::parameter, "window (l_max, j_max) must be nonnegative");
    auto gi = gamma_interval(delta);
    DeltaLattice lat;
    lat.delta_ = delta;
    lat.gamma_ = gamma ? *gamma : gi.midpoint();
    if (!gi.contains(lat.gamma_)) {
      std::ostringstream os;
      os.precision(17);
      os << "gamma=" << lat.gamma_ << " outside the admissible interval (" << gi.lo << ", " << gi.hi << ")";
      fail(ErrorKind::parameter, os.str());
    }
    lat.s_delta_ = bol::s_delta(delta);
    lat.l_max_ = l_max;
    lat.j_max_ = j_max;
    return lat;
  }

  double delta() const { return delta_; }
  double gamma() const { return gamma_; }
  double s_delta() const { return s_delta_; }
  int l_max() const { return l_max_; }
  int j_max() const { return j_max_; }
  std::size_t size() const { return std::size_t(2 * l_max_ + 1) * std::size_t(2 * j_max_ + 1); }
  bool below_sampling_threshold() const { return delta_ < sampling_delta_threshold(); }

  bool in_window(int l, int j) const { return std::abs(l) <= l_max_ && std::abs(j) <= j_max_; }

  /// 2^(gamma j), the common height of row j.
  double height(int j) const { return std::exp2(gamma_ * j); }

  HPoint point(int l, int j) const {
    check(l, j);
    return unchecked_point(l, j);
  }
  HPoint unchecked_point(int l, int j) const {
    double y = height(j);
    return HPoint(delta_ * delta_ * l * y / 8.0, y);
  }

  Cells cells(int l, int j) const {
    check(l, j);
    double y = height(j), d2 = delta_ * delta_;
    Cells c;
    c.I = {d2 / 4 * (-1 + l / 2.0) * y, d2 / 4 * (1 + l / 2.0) * y};
    c.I_prime = {d2 / 4 * (-0.2 + l / 2.0) * y, d2 / 4 * (0.2 + l / 2.0) * y};
    c.J = {(1 - d2 / 4) * y, (1 + d2 / 4) * y};
    c.J_prime = {std::pow(1 - d2 / 20, 0.25) * y, std::pow(1 + d2 / 20, 0.25) * y};
    return c;
  }

  /// Window indices, ascending j then l.
  std::vector<std::pair<int, int>> indices() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(size());
    for (int j = -j_max_; j <= j_max_; ++j)
      for (int l = -l_max_; l <= l_max_; ++l) out.emplace_back(l, j);
    return out;
  }

  // Covered zone: union of the cells I_{l,j} x J_j fully interior to the window,
  // i.e. |l| <= max(l_max - 1, 0) and |j| <= max(j_max - 1, 0).
  int zone_l() const { return std::max(l_max_ - 1, 0); }
  int zone_j() const { return std::max(j_max_ - 1, 0); }

  bool in_covered_zone(double x, double y) const {
    if (!(y > 0.0)) return false;
    double d2 = delta_ * delta_;
    double reach = d2 / 4 * (1 + zone_l() / 2.0);
    for (int j : rows_containing(y)) {
      if (std::abs(j) > zone_j()) continue;
      if (std::abs(x) < reach * height(j)) return true;
    }
    return false;
  }

  Box covered_bbox() const {
    double d2 = delta_ * delta_;
    double top = height(zone_j());
    double xr = d2 / 4 * (1 + zone_l() / 2.0) * top;
    return Box{-xr, xr, (1 - d2 / 4) * height(-zone_j()), (1 + d2 / 4) * top};
  }

  /// Row indices j (unbounded) with y in J_j.
  std::vector<int> rows_containing(double y) const {
    double d2 = delta_ * delta_;
    // y in J_j  <=>  y / (1 + d2/4) < 2^(gamma j) < y / (1 - d2/4)
    int lo = static_cast<int>(std::floor(std::log2(y / (1 + d2 / 4)) / gamma_)) - 1;
    int hi = static_cast<int>(std::ceil(std::log2(y / (1 - d2 / 4)) / gamma_)) + 1;
    std::vector<int> out;
    for (int j = lo; j <= hi; ++j) {
      double h = height(j);
      if (y > (1 - d2 / 4) * h && y < (1 + d2 / 4) * h) out.push_back(j);
    }
    return out;
  }

  /// Card{l : x in I_{l,j}} for the full (untruncated) row j.
  int horizontal_count(double x, int j) const {
    double step = delta_ * delta_ / 8.0 * height(j);
    double half = delta_ * delta_ / 4.0 * height(j);
    int lo = static_cast<int>(std::floor((x - half) / step)) - 1;
    int hi = static_cast<int>(std::ceil((x + half) / step)) + 1;
    int n = 0;
    for (int l = lo; l <= hi; ++l) {
      double c = l * step;
      if (x > c - half && x < c + half) ++n;
    }
    return n;
  }

  /// Number of window disks D_delta(z_{l,j}) containing x + iy.
  int disks_containing(double x, double y) const {
    // |y - y_j| < delta y_j  <=>  y/(1+delta) < y_j < y/(1-delta)
    int jlo = std::max(-j_max_, static_cast<int>(std::floor(std::log2(y / (1 + delta_)) / gamma_)) - 1);
    int jhi = std::min(j_max_, static_cast<int>(std::ceil(std::log2(y / (1 - delta_)) / gamma_)) + 1);
    int n = 0;
    for (int j = jlo; j <= jhi; ++j) {
      double yj = height(j), r = delta_ * yj, dy = y - yj;
      if (std::abs(dy) >= r) continue;
      double hw = std::sqrt(r * r - dy * dy);
      double step = delta_ * delta_ / 8.0 * yj;
      int llo = std::max(-l_max_, static_cast<int>(std::floor((x - hw) / step)) - 1);
      int lhi = std::min(l_max_, static_cast<int>(std::ceil((x + hw) / step)) + 1);
      for (int l = llo; l <= lhi; ++l) {
        double dx = x - l * step;
        if (dx * dx + dy * dy < r * r) ++n;
      }
    }
    return n;
  }

 private:
  void check(int l, int j) const {
    if (!in_window(l, j)) {
      std::ostringstream os;
      os << "index (" << l << ", " << j << ") outside window (" << l_max_ << ", " << j_max_ << ")";
      fail(ErrorKind::range, os.str());
    }
  }

  double delta_ = 0.5, gamma_ = 0.0, s_delta_ = 0.0;
  int l_max_ = 0, j_max_ = 0;
};

struct CoverageReport {
  bool disjoint_ok = true;
  double cover_fraction = 0.0;
  int max_overlap = 0;
  int max_vertical = 0;  // max Card{j : y in J_j} over the samples
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> violations;
};

/// Bounding box of a region (whole plane gives an infinite box).
inline Box bounding_box(const Region& r) {
  if (const auto* d = std::get_if<Disk>(&r.variant()))
    return Box{d->center.x - d->radius, d->center.x + d->radius, d->center.y - d->radius, d->center.y + d->radius};
  auto boxes = r.boxes();
  Box b = boxes.front();
  for (const auto& o : boxes) {
    b.x0 = std::min(b.x0, o.x0);
    b.x1 = std::max(b.x1, o.x1);
    b.y0 = std::min(b.y0, o.y0);
    b.y1 = std::max(b.y1, o.y1);
  }
  return b;
}

/// Exact pairwise test |z_a - z_b| > s_delta (y_a + y_b) over the window.
inline bool window_disjoint(const DeltaLattice& lat, std::vector<std::string>* witnesses = nullptr) {
  auto idx = lat.indices();
  std::vector<HPoint> pts;
  pts.reserve(idx.size());
  for (auto [l, j] : idx) pts.push_back(lat.point(l, j));
  const double s = lat.s_delta();
  bool ok = true;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      double sum = s * (pts[a].y + pts[b].y);
      if (std::abs(pts[a].y - pts[b].y) > sum) continue;
      if (distance(pts[a], pts[b]) <= sum) {
        ok = false;
        if (witnesses && witnesses->size() < 20) {
          std::ostringstream os;
          os << "disks (" << idx[a].first << "," << idx[a].second << ") and (" << idx[b].first << ","
             << idx[b].second << ") intersect";
          witnesses->push_back(os.str());
        }
      }
    }
  }
  return ok;
}

/// Seeded sampling of region ∩ covered zone; counts disk memberships.
inline CoverageReport covering_report(const DeltaLattice& lat, const Region& region, int n_samples,
                                      std::uint64_t seed) {
  require(n_samples > 0, ErrorKind::parameter, "covering_report needs a positive sample count");
  CoverageReport rep;
  rep.seed = seed;
  rep.disjoint_ok = window_disjoint(lat, &rep.violations);

  Box zb = lat.covered_bbox(), rb = bounding_box(region);
  Box b{std::max(zb.x0, rb.x0), std::min(zb.x1, rb.x1), std::max(zb.y0, rb.y0), std::min(zb.y1, rb.y1)};
  require(b.x1 > b.x0 && b.y1 > b.y0, ErrorKind::parameter, "region does not meet the covered zone of the window");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(b.x0, b.x1), uy(b.y0, b.y1);
  int covered = 0;
  long long attempts = 0, cap = 2000LL * n_samples;
  while (rep.samples < n_samples) {
    if (++attempts > cap) fail(ErrorKind::parameter, "region meets the covered zone in a set too thin to sample");
    double x = ux(rng), y = uy(rng);
    if (!region.contains(x, y) || !lat.in_covered_zone(x, y)) continue;
    ++rep.samples;
    int k = lat.disks_containing(x, y);
    if (k > 0)
      ++covered;
    else if (rep.violations.size() < 20) {
      std::ostringstream os;
      os.precision(17);
      os << "uncovered sample (" << x << ", " << y << ")";
      rep.violations.push_back(os.str());
    }
    rep.max_overlap = std::max(rep.max_overlap, k);
    rep.max_vertical = std::max(rep.max_vertical, static_cast<int>(lat.rows_containing(y).size()));
  }
  rep.cover_fraction = double(covered) / rep.samples;
  return rep;
}

}  // namespace bol
