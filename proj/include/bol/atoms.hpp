#pragma once

// Atomic synthesis F_mu = c_alpha sum mu_{l,j} K_alpha(., z_{l,j}) 2^(j gamma (alpha+2)),
// sampling on the lattice, least-squares decomposition in A^2_alpha and the
// Rademacher (Khintchine) estimator.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "bol/bergman.hpp"
#include "bol/error.hpp"
#include "bol/growth.hpp"
#include "bol/lattice.hpp"
#include "bol/orlicz.hpp"

namespace bol {

/// c_alpha = 2^(alpha+2).
inline double synthesis_constant(double alpha) { return std::exp2(alpha + 2.0); }

/// Weight of atom (l, j): c_alpha 2^(j gamma (alpha+2)).
inline double atom_scale(const DeltaLattice& lat, int j, double alpha) {
  return synthesis_constant(alpha) * std::exp2(j * lat.gamma() * (alpha + 2.0));
}

/// F_mu as an atom sum; terms are ordered by ascending j, then l.
inline AnalyticFn synthesize(const LatticeSequence& mu, double alpha) {
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  std::vector<HPoint> c;
  std::vector<cplx> k;
  for (const auto& [idx, v] : mu.entries()) {
    c.push_back(mu.lattice().point(idx.l, idx.j));
    k.push_back(v * atom_scale(mu.lattice(), idx.j, alpha));
  }
  return AnalyticFn::atom_sum(std::move(c), std::move(k), alpha);
}

/// {F(z_{l,j})} over the whole window.
inline LatticeSequence sample(const AnalyticFn& F, const DeltaLattice& lat) {
  LatticeSequence s(lat);
  for (auto [l, j] : lat.indices()) s.set(l, j, F(lat.point(l, j)));
  return s;
}

struct Decomposition {
  LatticeSequence mu;
  double residual = 0.0;
  double condition = 0.0;  // of the diagonally scaled Gram matrix
};

/// Gram matrix <a_p, a_k> of the window atoms in A^2_alpha, from the reproducing identity
/// <K(., w), K(., w')> = K(w', w) / c with c the reproducing constant.
inline Eigen::MatrixXcd atom_gram(const DeltaLattice& lat, double alpha) {
  auto idx = lat.indices();
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd G(n, n);
  double c = reproducing_constant(alpha);
  for (Eigen::Index k = 0; k < n; ++k) {
    auto [lk, jk] = idx[k];
    HPoint zk = lat.point(lk, jk);
    for (Eigen::Index p = 0; p < n; ++p) {
      auto [lp, jp] = idx[p];
      G(k, p) = atom_scale(lat, jk, alpha) * atom_scale(lat, jp, alpha) * kernel(zk, lat.point(lp, jp), alpha) / c;
    }
  }
  return G;
}

/// min ||F - F_mu||^2 + ridge ||mu||^2 over sequences supported on the window.
/// The right-hand side uses <F, K(., w)> = F(w)/c, valid for F in A^2_alpha.
inline Decomposition decompose_l2(const AnalyticFn& F, const DeltaLattice& lat, double alpha, double ridge = 1e-10,
                                  double tol = 1e-10) {
  require(ridge >= 0.0, ErrorKind::parameter, "ridge must be nonnegative");
  require(alpha > -1.0, ErrorKind::domain, "alpha must exceed -1");
  auto idx = lat.indices();
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd G = atom_gram(lat, alpha);
  Eigen::VectorXcd b(n);
  double c = reproducing_constant(alpha);
  for (Eigen::Index k = 0; k < n; ++k) {
    auto [l, j] = idx[k];
    b(k) = atom_scale(lat, j, alpha) * F(lat.point(l, j)) / c;
  }

  Decomposition out{LatticeSequence(lat), 0.0, 0.0};
  if (b.norm() == 0.0) return out;

  // Jacobi scaling for the condition estimate
  Eigen::VectorXd d = G.diagonal().real().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXcd S = d.asDiagonal() * G * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> scaled(S, Eigen::EigenvaluesOnly);
  double lmax = scaled.eigenvalues().maxCoeff(), lmin = scaled.eigenvalues().minCoeff();
  out.condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (ridge == 0.0 && !(out.condition < 1e12)) {
    std::ostringstream os;
    os << "Gram matrix is ill-conditioned (scaled condition " << out.condition << "); use ridge > 0";
    fail(ErrorKind::conditioning, os.str());
  }

  Eigen::VectorXcd x;
  if (ridge == 0.0) {
    x = d.asDiagonal() * S.ldlt().solve(d.asDiagonal() * b);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).array() + ridge;
    x = es.eigenvectors() * (lam.cwiseInverse().asDiagonal() * (es.eigenvectors().adjoint() * b));
  }
  for (Eigen::Index k = 0; k < n; ++k) out.mu.set(idx[k].first, idx[k].second, x(k));

  // ||F - F_mu|| by quadrature; the absolute floor is set from ||F_mu||^2 = x* G x
  // so that an exact fit does not chase rounding noise
  double fmu2 = std::abs(x.dot(G * x));
  auto Fmu = synthesize(out.mu, alpha);
  auto diff = AnalyticFn::combine(1.0, F, -1.0, Fmu);
  IntegrateOptions o;
  o.tol = tol;
  o.abs_tol = 1e-16 * fmu2;
  auto r2 = integrate<double>([&](double xx, double yy) { return std::norm(diff(xx, yy)); }, alpha, Region::whole(), o,
                              diff.hints());
  out.residual = std::sqrt(std::max(0.0, r2.value));
  return out;
}

struct EquivalenceReport {
  std::vector<double> ratios_synth, ratios_sample, norms_mu, norms_F;
  std::uint64_t seed = 0;

  static double spread(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
  }
  static double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  }
};

struct EquivalenceOptions {
  int l_max = 10, j_max = 3;
  int max_support = 6;
  double tol = 1e-8;
};

/// Random finitely supported sequences: ||F_mu|| / ||mu|| and ||{F_mu(z_{l,j})}|| / ||F_mu||.
inline EquivalenceReport equivalence_experiment(const GrowthFunction& phi, double alpha, double delta, int trials,
                                                std::uint64_t seed, const EquivalenceOptions& opt = {}) {
  require(trials > 0, ErrorKind::parameter, "trials must be positive");
  auto lat = DeltaLattice::build(delta, opt.l_max, opt.j_max);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> ul(-opt.l_max, opt.l_max), uj(-opt.j_max, opt.j_max),
      us(1, std::max(1, opt.max_support));
  std::normal_distribution<double> nd;
  EquivalenceReport rep;
  rep.seed = seed;
  for (int t = 0; t < trials; ++t) {
    LatticeSequence mu(lat);
    int k = us(rng);
    for (int i = 0; i < k; ++i) {
      int l = ul(rng), j = uj(rng);
      double re = nd(rng), im = nd(rng);
      mu.set(l, j, mu.get(l, j) + cplx(re, im));
    }
    if (mu.empty()) mu.set(0, 0, 1.0);
    auto F = synthesize(mu, alpha);
    double nmu = seq_luxembourg(mu, phi, alpha).value;
    double nF = bergman_norm(F, phi, alpha, opt.tol).value;
    double ns = seq_luxembourg(sample(F, lat), phi, alpha).value;
    rep.norms_mu.push_back(nmu);
    rep.norms_F.push_back(nF);
    rep.ratios_synth.push_back(nF / nmu);
    rep.ratios_sample.push_back(ns / nF);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Khintchine

/// r_n(t) = sgn(sin(2^n pi t)) on the shifted grid t_i = (i + 0.37)/n, which avoids dyadic points.
class RademacherSampler {
 public:
  explicit RademacherSampler(int grid_size = 512, double shift = 0.37) : n_(grid_size), shift_(shift) {
    require(grid_size > 0, ErrorKind::parameter, "Rademacher grid size must be positive");
  }

  int grid_size() const { return n_; }
  double node(int i) const { return (i + shift_) / n_; }

  /// The sign of sin(2^k pi t) is set by the k-th binary digit of t.
  static int r(int k, double t) {
    require(k >= 0 && k < 52, ErrorKind::range, "Rademacher index must lie in [0, 52)");
    double v = std::floor(std::ldexp(t, k));
    return std::fmod(v, 2.0) == 0.0 ? 1 : -1;
  }

  RademacherSampler refined() const { return RademacherSampler(2 * n_, shift_); }

 private:
  int n_;
  double shift_;
};

using KhintchineInput = std::map<std::pair<int, int>, cplx>;

struct KhintchineResult {
  double middle = 0.0;
  double l2 = 0.0;
  double lower = 0.0, upper = 0.0;
  double refined_change = 0.0;
  bool sandwich = true;
};

/// Phi^-1 of the grid average of Phi(|sum x_{k,j} r_k(t) r_j(s)|).
inline double khintchine_middle(const KhintchineInput& x, const GrowthFunction& phi, const RademacherSampler& s) {
  const int n = s.grid_size();
  int kmax = 0;
  for (const auto& [kj, v] : x) {
    require(kj.first >= 0 && kj.second >= 0, ErrorKind::range, "Rademacher indices must be nonnegative");
    kmax = std::max({kmax, kj.first, kj.second});
  }
  std::vector<std::vector<int>> r(kmax + 1, std::vector<int>(n));
  for (int k = 0; k <= kmax; ++k)
    for (int i = 0; i < n; ++i) r[k][i] = RademacherSampler::r(k, s.node(i));
  std::vector<double> rows(n);
  std::vector<double> row(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      cplx acc = 0.0;
      for (const auto& [kj, v] : x) acc += v * double(r[kj.first][a] * r[kj.second][b]);
      row[b] = phi(std::abs(acc));
    }
    rows[a] = quad::pairwise_sum<double>(row);
  }
  double avg = quad::pairwise_sum<double>(rows) / (double(n) * n);
  return phi.inverse(avg);
}

/// Middle term with a refinement check; lower/upper = A, B times the l2 norm.
inline KhintchineResult khintchine_check(const KhintchineInput& x, const GrowthFunction& phi,
                                         const RademacherSampler& s, double A = 0.0, double B = kInf) {
  KhintchineResult r;
  double sq = 0.0;
  for (const auto& [kj, v] : x) sq += std::norm(v);
  r.l2 = std::sqrt(sq);
  if (r.l2 == 0.0) return r;
  r.middle = khintchine_middle(x, phi, s);
  double fine = khintchine_middle(x, phi, s.refined());
  r.refined_change = std::abs(fine - r.middle) / std::abs(fine);
  if (r.refined_change > 0.01) {
    std::ostringstream os;
    os << "Rademacher grid " << s.grid_size() << " too coarse: middle changes by " << r.refined_change
       << " under refinement";
    throw AccuracyError(os.str(), fine, std::abs(fine - r.middle));
  }
  r.lower = A * r.l2;
  r.upper = B * r.l2;
  r.sandwich = r.lower <= r.middle && r.middle <= r.upper;
  return r;
}

struct KhintchineConstants {
  double A = 0.0, B = 0.0;
  std::uint64_t seed = 0;
};

/// Fits A = min, B = max of middle / l2 over random inputs with `entries` nonzero coefficients.
inline KhintchineConstants fit_khintchine_constants(const GrowthFunction& phi, const RademacherSampler& s,
                                                    int trials, int entries, std::uint64_t seed, int max_index = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> ui(0, max_index);
  std::normal_distribution<double> nd;
  KhintchineConstants c{kInf, 0.0, seed};
  for (int t = 0; t < trials; ++t) {
    KhintchineInput x;
    while (static_cast<int>(x.size()) < entries) {
      int k = ui(rng), j = ui(rng);
      double v = nd(rng);
      x[{k, j}] = v;
    }
    auto r = khintchine_check(x, phi, s);
    c.A = std::min(c.A, r.middle / r.l2);
    c.B = std::max(c.B, r.middle / r.l2);
  }
  return c;
}

}  // namespace bol
