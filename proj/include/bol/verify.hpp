#pragma once

// The acceptance suite: twelve criteria, each against an independent oracle,
// runnable one suite at a time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bol/atoms.hpp"
#include "bol/bergman.hpp"
#include "bol/carleson.hpp"
#include "bol/growth.hpp"
#include "bol/halfplane.hpp"
#include "bol/json_io.hpp"
#include "bol/lattice.hpp"
#include "bol/orlicz.hpp"
#include "bol/quadrature.hpp"

namespace bol::verify {

using json = nlohmann::json;

struct CriterionResult {
  int id = 0;
  std::string suite;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0: none
  json metrics = json::object();
};

inline CriterionResult make(int id, const char* suite, const char* title) {
  CriterionResult r;
  r.id = id;
  r.suite = suite;
  r.title = title;
  return r;
}

namespace detail {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <class... T>
std::string str(const T&... v) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << v);
  return os.str();
}

// int f dV_alpha over a box by a fixed tensor Gauss rule, independent of the adaptive code
template <class F>
double box_gauss(F f, const Box& b, double alpha, int n = 48, int panels = 4) {
  auto [x, w] = quad::gauss_legendre(n);
  double hx = (b.x1 - b.x0) / panels, hy = (b.y1 - b.y0) / panels, acc = 0.0;
  for (int px = 0; px < panels; ++px)
    for (int py = 0; py < panels; ++py)
      for (int i = 0; i < n; ++i) {
        double xx = b.x0 + hx * (px + 0.5 * (1 + x[i]));
        for (int k = 0; k < n; ++k) {
          double yy = b.y0 + hy * (py + 0.5 * (1 + x[k]));
          acc += 0.25 * hx * hy * w[i] * w[k] * std::pow(yy, alpha) * f(xx, yy);
        }
      }
  return acc;
}

}  // namespace detail

// 1
inline CriterionResult beta_oracles(std::uint64_t seed) {
  using detail::rel;
  auto r = make(1, "beta", "Beta-integral oracles");
  r.time_limit = 1.0;
  double worst = 0.0;
  double j12 = j_by_quadrature(1.0, 2.0, 1e-10), i202 = i_by_quadrature(2.0, 0.0, 2.0, 1e-10);
  bool exact = rel(j_closed_form(1.0, 2.0), std::numbers::pi) <= 1e-14 && rel(i_closed_form(2.0, 0.0, 2.0), 0.5) <= 1e-14;
  worst = std::max({rel(j12, std::numbers::pi), rel(i202, 0.5)});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    double y = std::exp(std::log(0.1) + u(rng) * std::log(100.0)), a = 1.2 + 4.8 * u(rng);
    worst = std::max(worst, rel(j_by_quadrature(y, a, 1e-10), j_closed_form(y, a)));
    double t = std::exp(std::log(0.1) + u(rng) * std::log(100.0)), ia = -0.8 + 3.8 * u(rng),
           ib = ia + 1.2 + 3.8 * u(rng);
    worst = std::max(worst, rel(i_by_quadrature(t, ia, ib, 1e-10), i_closed_form(t, ia, ib)));
  }
  r.pass = exact && worst <= 1e-6;
  r.metrics = {{"worst_rel", worst}, {"J(1,2)", j12}, {"I(2,0,2)", i202}, {"random_cases", 20}};
  r.detail = detail::str("max relative gap ", worst, " over 22 cases");
  return r;
}

// 2
inline CriterionResult g_modular(std::uint64_t) {
  auto r = make(2, "gmodular", "G_{eps,m} exact modular");
  r.time_limit = 10.0;
  auto sq = GrowthFunction::power(2.0);
  auto mod = [&](double eps, double m, double a) {
    auto G = AnalyticFn::g(eps, m);
    return modular(G.modulus(), MeasureSpec::valpha(a), sq, 1e-10, G.hints());
  };
  double v = mod(1.0, 3.0, 0.0), exact = 3.0 * std::numbers::pi / 32.0;
  bool ok = detail::rel(v, exact) <= 1e-4;
  json slopes = json::array();
  for (auto [m, a] : {std::pair{3.0, 0.0}, {4.0, 1.0}}) {
    // least-squares slope of log value against log eps
    std::vector<double> lx, ly;
    for (double eps : {1.0, 2.0, 4.0}) {
      lx.push_back(std::log(eps));
      ly.push_back(std::log(mod(eps, m, a)));
    }
    double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3, sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    double slope = sxy / sxx, want = -2.0 - a;
    ok = ok && detail::rel(slope, want) <= 0.01;
    slopes.push_back({{"alpha", a}, {"m", m}, {"slope", slope}, {"expected", want}});
  }
  r.pass = ok;
  r.metrics = {{"modular", v}, {"exact", exact}, {"rel", detail::rel(v, exact)}, {"slopes", slopes}};
  r.detail = detail::str("modular ", v, " vs 3pi/32 = ", exact);
  return r;
}

// 3
inline CriterionResult luxembourg_pnorm(std::uint64_t seed) {
  auto r = make(3, "luxembourg", "Luxembourg norm equals the p-norm");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int cases = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    auto phi = GrowthFunction::power(p);
    for (int k = 0; k < 20; ++k) {
      double x0 = 4 * u(rng) - 2, y0 = 0.05 + u(rng), a = -0.5 + 2.5 * u(rng);
      Box b{x0, x0 + 0.2 + 2 * u(rng), y0, y0 + 0.2 + 2 * u(rng)};
      double c = 0.1 + 5 * u(rng), kx = 3 * u(rng), ky = 3 * u(rng);
      auto f = [=](double x, double y) { return c * (1.2 + std::sin(kx * x) * std::cos(ky * y)) / (1 + y); };
      auto mu = MeasureSpec::valpha(a, Region::box(b.x0, b.x1, b.y0, b.y1));
      double lux = luxembourg(f, mu, phi, 1e-12).value;
      double pn = std::pow(detail::box_gauss([&](double x, double y) { return std::pow(f(x, y), p); }, b, a), 1.0 / p);
      worst = std::max(worst, detail::rel(lux, pn));
      ++cases;
    }
  }
  r.pass = worst <= 1e-8;
  r.metrics = {{"worst_rel", worst}, {"cases", cases}};
  r.detail = detail::str("max relative gap ", worst, " over ", cases, " densities");
  return r;
}

// 4
inline CriterionResult lattice_geometry(std::uint64_t seed) {
  auto r = make(4, "lattice", "Lattice geometry");
  r.time_limit = 5.0;
  bool ok = true;
  json per = json::array();
  for (double d : {0.1, 0.3, 0.5}) {
    auto lat = DeltaLattice::build(d, 50, 10);
    bool disjoint = window_disjoint(lat);
    auto full = covering_report(lat, Region::whole(), 10000, seed);
    auto z = lat.covered_bbox();
    double cx = 0.5 * (z.x0 + z.x1), cy = 0.5 * (z.y0 + z.y1), hx = 0.25 * (z.x1 - z.x0), hy = 0.25 * (z.y1 - z.y0);
    auto small = covering_report(lat, Region::box(cx - hx / 2, cx + hx / 2, cy - hy / 2, cy + hy / 2), 10000, seed);
    auto big = covering_report(lat, Region::box(cx - hx, cx + hx, cy - hy, cy + hy), 10000, seed);
    bool here = disjoint && full.cover_fraction == 1.0 && big.max_overlap <= small.max_overlap;
    ok = ok && here;
    per.push_back({{"delta", d}, {"disjoint", disjoint}, {"cover_fraction", full.cover_fraction},
                   {"overlap_small", small.max_overlap}, {"overlap_doubled", big.max_overlap}});
  }
  r.pass = ok;
  r.metrics = {{"deltas", per}};
  r.detail = ok ? "disjoint, covered, overlap stable for all three deltas" : "see metrics";
  return r;
}

// 5
inline CriterionResult reproducing(std::uint64_t seed) {
  auto r = make(5, "reproducing", "Reproducing identity");
  r.time_limit = 60.0;
  auto G = AnalyticFn::g(1.0, 4.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), ly(std::log(0.2), std::log(5.0));
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    HPoint z(ux(rng), std::exp(ly(rng)));
    worst = std::max(worst, std::abs(project(G, z, 0.0) - G(z)) / std::abs(G(z)));
  }
  r.pass = worst <= 1e-3;
  r.metrics = {{"worst_rel", worst}, {"points", 10}};
  r.detail = detail::str("max relative gap ", worst);
  return r;
}

// 6
inline CriterionResult equivalence(std::uint64_t seed) {
  auto r = make(6, "equivalence", "Synthesis and sampling equivalence");
  auto rep = equivalence_experiment(GrowthFunction::power(2.0), 0.0, 0.1, 100, seed);
  bool finite = true;
  for (double v : rep.ratios_synth) finite = finite && std::isfinite(v) && v > 0;
  for (double v : rep.ratios_sample) finite = finite && std::isfinite(v) && v > 0;
  double s1 = EquivalenceReport::spread(rep.ratios_synth), s2 = EquivalenceReport::spread(rep.ratios_sample);
  r.pass = finite && s1 <= 1e3 && s2 <= 1e3;
  r.metrics = {{"spread_synth", s1}, {"spread_sample", s2}, {"trials", 100}, {"seed", seed}};
  r.detail = detail::str("max/min synthesis ", s1, ", sampling ", s2);
  return r;
}

// 7
inline CriterionResult berezin_closed_form(std::uint64_t) {
  auto r = make(7, "berezin", "Berezin closed form");
  double v = berezin(MeasureSpec::valpha(0.0), HPoint(0, 1), 0.0);
  double d = berezin(MeasureSpec::atomic({{HPoint(0, 1), 1.0}}), HPoint(0, 1), 0.0);
  r.pass = detail::rel(v, std::numbers::pi / 4) <= 1e-4 && d == 1.0 / 16.0;
  r.metrics = {{"V0_at_i", v}, {"dirac_at_i", d}};
  r.detail = detail::str("V_0 gives ", v, ", Dirac gives ", d);
  return r;
}

// 8
inline CriterionResult averaging(std::uint64_t seed) {
  auto r = make(8, "averaging", "Averaging bounded by Berezin");
  const double s = 0.3, alpha = 0.0, C = averaging_constant(s, alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<std::pair<HPoint, double>> atoms;
    int n = 1 + static_cast<int>(8 * u(rng));
    HPoint z(4 * u(rng) - 2, std::exp(std::log(0.01) + u(rng) * std::log(1e3)));
    for (int i = 0; i < n; ++i) {
      // half the atoms near z so that the disk is not always empty
      HPoint p = u(rng) < 0.5 ? HPoint(z.x + z.y * (0.6 * u(rng) - 0.3), z.y * (0.75 + 0.5 * u(rng)))
                              : HPoint(4 * u(rng) - 2, std::exp(std::log(0.01) + u(rng) * std::log(1e3)));
      atoms.push_back({p, 0.1 + u(rng)});
    }
    auto mu = MeasureSpec::atomic(atoms);
    double ratio = average(mu, z, s, alpha) / berezin(mu, z, alpha);
    worst = std::max(worst, ratio);
    if (ratio > C) ++violations;
  }
  r.pass = violations == 0;
  r.metrics = {{"C1", C}, {"max_ratio", worst}, {"violations", violations}, {"pairs", 1000}};
  r.detail = detail::str("C1 = ", C, ", largest ratio ", worst, ", ", violations, " violations");
  return r;
}

// 9
inline CriterionResult khintchine(std::uint64_t seed) {
  auto r = make(9, "khintchine", "Khintchine exactness");
  RademacherSampler s(512);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> ui(0, 6);
  std::normal_distribution<double> nd;
  double worst = 0.0, worst_ref = 0.0;
  for (int t = 0; t < 10; ++t) {
    KhintchineInput x;
    while (x.size() < 5) {
      int k = ui(rng), j = ui(rng);
      double re = nd(rng), im = nd(rng);
      x[{k, j}] = cplx(re, im);
    }
    auto k2 = khintchine_check(x, GrowthFunction::power(2.0), s);
    double fine = khintchine_middle(x, GrowthFunction::power(2.0), s.refined());
    worst = std::max({worst, detail::rel(k2.middle, k2.l2), detail::rel(fine, k2.l2)});
    worst_ref = std::max(worst_ref, k2.refined_change);
  }
  auto q = GrowthFunction::power(4.0);
  std::vector<double> As, Bs;
  for (std::uint64_t k = 0; k < 5; ++k) {
    auto c = fit_khintchine_constants(q, s, 20, 4, seed + k);
    As.push_back(c.A);
    Bs.push_back(c.B);
  }
  auto stable = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x / v.size();
    double d = 0;
    for (double x : v) d = std::max(d, std::abs(x - m) / m);
    return d;
  };
  double A = *std::min_element(As.begin(), As.end()), B = *std::max_element(Bs.begin(), Bs.end());
  // the sandwich with the pooled constants on fresh inputs
  bool sandwich = true;
  for (int t = 0; t < 10; ++t) {
    KhintchineInput x;
    while (x.size() < 4) {
      int k = ui(rng), j = ui(rng);
      x[{k, j}] = nd(rng);
    }
    auto kr = khintchine_check(x, q, s, A * 0.9, B * 1.1);
    sandwich = sandwich && kr.sandwich;
  }
  double sa = stable(As), sb = stable(Bs);
  r.pass = worst <= 1e-3 && sa <= 0.1 && sb <= 0.1 && sandwich;
  r.metrics = {{"t2_worst_rel", worst}, {"refinement_change", worst_ref}, {"A", As}, {"B", Bs},
               {"A_spread", sa}, {"B_spread", sb}, {"sandwich", sandwich}};
  r.detail = detail::str("t^2 gap ", worst, "; t^4 constants vary by ", sa, " (A), ", sb, " (B)");
  return r;
}

// 10
inline CriterionResult carleson_sweep(std::uint64_t seed) {
  auto r = make(10, "carleson", "Carleson consistency sweep");
  r.time_limit = 300.0;
  auto sq = GrowthFunction::power(2.0), lin = GrowthFunction::power(1.0);
  auto mu = [](double tau) { return MeasureSpec::valpha(tau, Region::box(0, 1, 0, 1)); };
  FamilySpec fam;
  fam.kind = FamilySpec::Kind::whitney;
  fam.depth = 10;
  std::map<double, double> growth_cache;
  auto growth = [&](double tau) {
    auto it = growth_cache.find(tau);
    if (it != growth_cache.end()) return it->second;
    double g = embedding_test(mu(tau), sq, lin, 0.0, fam, seed, std::nullopt).growth;
    return growth_cache[tau] = g;
  };
  auto member = [&](double tau) { return berezin_membership(mu(tau), sq, lin, 0.0).member; };
  // the predicate is false at lo and true at hi
  auto bisect = [](double lo, double hi, int steps, const std::function<bool(double)>& pred) {
    for (int i = 0; i < steps; ++i) {
      double m = 0.5 * (lo + hi);
      (pred(m) ? hi : lo) = m;
    }
    return 0.5 * (lo + hi);
  };
  const double lo = -0.9, hi = 0.0;
  bool bracket = !member(lo) && member(hi) && growth(lo) >= 10.0 && growth(hi) <= 2.0;
  double tm = bisect(lo, hi, 7, member);
  double t2 = bisect(lo, hi, 7, [&](double t) { return growth(t) <= 2.0; });
  double t10 = bisect(lo, hi, 7, [&](double t) { return growth(t) < 10.0; });
  double te = 0.5 * (t2 + t10);
  r.pass = bracket && std::abs(te - tm) <= 0.25;
  r.metrics = {{"tau_membership", tm}, {"tau_growth_2x", t2}, {"tau_growth_10x", t10}, {"tau_empirical", te},
               {"difference", std::abs(te - tm)}, {"bracketed", bracket}, {"depth", fam.depth}};
  r.detail = detail::str("membership flips at ", tm, ", empirical transition at ", te, " (2x at ", t2, ", 10x at ",
                         t10, ")");
  return r;
}

// 11
inline CriterionResult composition(std::uint64_t) {
  auto r = make(11, "composition", "Composition change of variables");
  auto sq = GrowthFunction::power(2.0);
  struct Map {
    const char* name;
    MobiusMeasure m;
  };
  std::vector<Map> maps{{"id", {1, 0, 0, 1, 0.0, 0.0}},
                        {"2z", {2, 0, 0, 1, 0.0, 0.0}},
                        {"z+1", {1, 1, 0, 1, 0.0, 0.0}},
                        {"(z-1)/(z+1)+i", {1, -1, 1, 1, 0.0, 1.0}}};
  double worst = 0.0;
  json per = json::array();
  for (const auto& [name, m] : maps) {
    auto [label, F] = composition_test_functions(m).front();
    auto cv = change_of_variables(m, F, sq);
    worst = std::max(worst, cv.rel_diff);
    per.push_back({{"map", name}, {"function", label}, {"direct", cv.direct}, {"pullback", cv.pullback},
                   {"rel_diff", cv.rel_diff}});
  }
  r.pass = worst <= 1e-4;
  r.metrics = {{"maps", per}, {"worst_rel", worst}};
  r.detail = detail::str("max relative gap ", worst, " over 4 maps");
  return r;
}

// 12
inline CriterionResult growth_suite(std::uint64_t) {
  auto r = make(12, "growth", "Growth-function suite");
  std::vector<GrowthFunction> fams{GrowthFunction::power(2.0), GrowthFunction::power(3.5, 0.2),
                                   GrowthFunction::power(1.5), GrowthFunction::power_log(2.0, 1.0, std::numbers::e),
                                   GrowthFunction::power_log(3.0, 2.0, std::numbers::e)};
  auto grid = log_grid(1e-3, 1e3, 100);
  int young = 0;
  for (const auto& phi : fams) {
    auto psi = complementary(phi);
    for (double s : grid)
      for (double t : grid)
        if (s * t > (phi(s) + psi(t)) * (1.0 + 1e-12)) ++young;
  }
  int c18 = 0;
  for (int i = 0; i < 10; ++i)
    for (int k = 0; k < 10; ++k) {
      double p = 1.0 + i / 3.0, q = 1.0 + k / 3.0;
      if (condition18_check(GrowthFunction::power(p), GrowthFunction::power(q)).holds != (p > q)) ++c18;
    }
  double idx = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.5}) {
    auto ix = indices(GrowthFunction::power(p));
    idx = std::max({idx, std::abs(ix.a - p), std::abs(ix.b - p)});
  }
  r.pass = young == 0 && c18 == 0 && idx <= 1e-9;
  r.metrics = {{"young_violations", young}, {"condition18_mismatches", c18}, {"index_error", idx}};
  r.detail = detail::str(young, " Young violations, ", c18, " condition mismatches, index error ", idx);
  return r;
}

struct Suite {
  const char* name;
  CriterionResult (*run)(std::uint64_t);
};

inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> s{{"beta", beta_oracles},       {"gmodular", g_modular},
                                    {"luxembourg", luxembourg_pnorm}, {"lattice", lattice_geometry},
                                    {"reproducing", reproducing}, {"equivalence", equivalence},
                                    {"berezin", berezin_closed_form}, {"averaging", averaging},
                                    {"khintchine", khintchine},   {"carleson", carleson_sweep},
                                    {"composition", composition}, {"growth", growth_suite}};
  return s;
}

/// Runs one criterion. Library errors count as a failure of that criterion.
inline CriterionResult run(const Suite& s, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = s.run(seed);
  } catch (const Error& e) {
    for (std::size_t i = 0; i < suites().size(); ++i)
      if (suites()[i].name == s.name) r.id = static_cast<int>(i) + 1;
    r.suite = s.name;
    r.pass = false;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.time_limit > 0.0 && r.seconds > r.time_limit) {
    r.pass = false;
    r.detail += detail::str(" (took ", r.seconds, " s, limit ", r.time_limit, " s)");
  }
  return r;
}

/// All suites, or the one named.
inline std::vector<CriterionResult> run_all(const std::string& only, std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& on_done = {}) {
  std::vector<CriterionResult> out;
  bool found = false;
  for (const auto& s : suites()) {
    if (!only.empty() && only != "all" && only != s.name) continue;
    found = true;
    out.push_back(run(s, seed));
    if (on_done) on_done(out.back());
  }
  if (!found) fail(ErrorKind::parameter, "unknown suite '" + only + "'");
  return out;
}

inline json to_json(const CriterionResult& r) {
  return {{"id", r.id},           {"suite", r.suite},     {"title", r.title},
          {"pass", r.pass},       {"detail", r.detail},   {"seconds", r.seconds},
          {"metrics", r.metrics}};
}

inline std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << ". " << r.title << " [" << r.suite << "]: " << r.detail;
  return os.str();
}

}  // namespace bol::verify
