#pragma once

// JSON readers for growth functions, regions, measures, lattices, sequences and
// analytic functions, plus writers for the report structs.

#include <json.hpp>

#include <string>
#include <vector>

#include "bol/atoms.hpp"
#include "bol/bergman.hpp"
#include "bol/carleson.hpp"
#include "bol/error.hpp"
#include "bol/growth.hpp"
#include "bol/halfplane.hpp"
#include "bol/lattice.hpp"
#include "bol/orlicz.hpp"

namespace bol::io {

using json = nlohmann::json;

namespace detail {

inline double num(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::parameter, std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) fail(ErrorKind::parameter, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline double num_or(const json& j, const char* key, double fallback) {
  return j.is_object() && j.contains(key) ? num(j, key) : fallback;
}

inline int integer(const json& j, const char* key) {
  double v = num(j, key);
  if (v != static_cast<int>(v)) fail(ErrorKind::parameter, std::string("field '") + key + "' must be an integer");
  return static_cast<int>(v);
}

inline const json& only_key(const json& j, std::string* key) {
  if (!j.is_object() || j.size() != 1) fail(ErrorKind::parameter, "expected an object with a single variant key");
  *key = j.begin().key();
  return j.begin().value();
}

}  // namespace detail

inline GrowthFunction growth_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) fail(ErrorKind::parameter, "growth function needs a 'family'");
  std::string f = j.at("family").get<std::string>();
  if (f == "power") return GrowthFunction::power(detail::num(j, "p"), detail::num_or(j, "coef", 1.0));
  if (f == "power_log")
    return GrowthFunction::power_log(detail::num(j, "p"), detail::num(j, "a"), detail::num(j, "c"));
  if (f == "conjugate") {
    if (!j.contains("of")) fail(ErrorKind::parameter, "conjugate growth function needs 'of'");
    return complementary(growth_from_json(j.at("of")));
  }
  if (f == "composed_inverse") {
    if (!j.contains("outer") || !j.contains("inner"))
      fail(ErrorKind::parameter, "composed_inverse needs 'outer' and 'inner'");
    return GrowthFunction::composed_inverse(growth_from_json(j.at("outer")), growth_from_json(j.at("inner")));
  }
  fail(ErrorKind::parameter, "unknown growth family '" + f + "'");
}

inline Region region_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "auto") return Region::whole();
    fail(ErrorKind::parameter, "unknown region '" + j.get<std::string>() + "'");
  }
  std::string k;
  const json& v = detail::only_key(j, &k);
  if (k == "box") {
    if (!v.is_array() || v.size() != 4) fail(ErrorKind::parameter, "box needs [x0, x1, y0, y1]");
    auto b = v.get<std::vector<double>>();
    require(b[1] > b[0] && b[3] > b[2] && b[2] >= 0.0, ErrorKind::domain, "box must be nonempty and in the closed half-plane");
    return Region::box(b[0], b[1], b[2], b[3]);
  }
  if (k == "carleson") {
    double len = detail::num(v, "length");
    require(len > 0.0, ErrorKind::domain, "Carleson square needs a positive length");
    return Region::carleson({detail::num(v, "center"), len});
  }
  if (k == "disk") {
    double cy = detail::num(v, "cy"), s = detail::num(v, "s");
    require(cy > 0.0, ErrorKind::domain, "disk centre must lie in the upper half-plane");
    require(s > 0.0 && s < 1.0, ErrorKind::domain, "disk radius s must lie in (0, 1)");
    return Region::disk(hyperbolic_disk(HPoint(detail::num(v, "cx"), cy), s));
  }
  if (k == "whole") return Region::whole();
  fail(ErrorKind::parameter, "unknown region kind '" + k + "'");
}

inline MeasureSpec measure_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "zero") return MeasureSpec::zero();
  std::string k;
  const json& v = detail::only_key(j, &k);
  if (k == "atomic") {
    if (!v.is_array()) fail(ErrorKind::parameter, "atomic measure needs [[x, y, mass], ...]");
    std::vector<std::pair<HPoint, double>> atoms;
    for (const auto& a : v) {
      if (!a.is_array() || a.size() != 3) fail(ErrorKind::parameter, "each atom is [x, y, mass]");
      atoms.push_back({HPoint(a[0].get<double>(), a[1].get<double>()), a[2].get<double>()});
    }
    return MeasureSpec::atomic(std::move(atoms));
  }
  if (k == "density") {
    std::string kind = v.value("kind", "valpha");
    if (kind != "valpha") fail(ErrorKind::parameter, "unknown density kind '" + kind + "'");
    double a = detail::num(v, "alpha");
    require(a > -1.0, ErrorKind::domain, "density alpha must exceed -1");
    return MeasureSpec::valpha(a, v.contains("support") ? region_from_json(v.at("support")) : Region::whole());
  }
  if (k == "mobius")
    return MeasureSpec::mobius(detail::num(v, "a"), detail::num(v, "b"), detail::num(v, "c"), detail::num(v, "d"),
                               detail::num(v, "beta"), detail::num_or(v, "shift", 0.0));
  fail(ErrorKind::parameter, "unknown measure kind '" + k + "'");
}

/// {"delta": D, "lmax": L, "jmax": J, "gamma": G (optional)}
inline DeltaLattice lattice_from_json(const json& j) {
  std::optional<double> g;
  if (j.contains("gamma")) g = detail::num(j, "gamma");
  return DeltaLattice::build(detail::num(j, "delta"), detail::integer(j, "lmax"), detail::integer(j, "jmax"), g);
}

inline json lattice_to_json(const DeltaLattice& lat) {
  return {{"delta", lat.delta()}, {"lmax", lat.l_max()}, {"jmax", lat.j_max()}, {"gamma", lat.gamma()}};
}

/// [[l, j, re, im], ...] on a given lattice.
inline LatticeSequence sequence_from_json(const json& rows, const DeltaLattice& lat) {
  if (!rows.is_array()) fail(ErrorKind::parameter, "sequence must be [[l, j, re, im], ...]");
  LatticeSequence s(lat);
  for (const auto& r : rows) {
    if (!r.is_array() || (r.size() != 3 && r.size() != 4)) fail(ErrorKind::parameter, "sequence rows are [l, j, re, im]");
    double im = r.size() == 4 ? r[3].get<double>() : 0.0;
    s.set(r[0].get<int>(), r[1].get<int>(), cplx(r[2].get<double>(), im));
  }
  return s;
}

inline json sequence_to_json(const LatticeSequence& s) {
  json rows = json::array();
  for (const auto& [k, v] : s.entries()) rows.push_back({k.l, k.j, v.real(), v.imag()});
  return rows;
}

/// {"lattice": {...}, "sequence": [...]}
inline LatticeSequence lattice_sequence_from_json(const json& j) {
  if (!j.contains("lattice") || !j.contains("sequence"))
    fail(ErrorKind::parameter, "sequence file needs 'lattice' and 'sequence'");
  return sequence_from_json(j.at("sequence"), lattice_from_json(j.at("lattice")));
}

inline AnalyticFn fn_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "zero") return AnalyticFn::zero();
  std::string k;
  const json& v = detail::only_key(j, &k);
  if (k == "kernel" || k == "normalized_kernel") {
    double wy = detail::num(v, "wy"), a = detail::num_or(v, "alpha", 0.0);
    require(wy > 0.0, ErrorKind::domain, "kernel point must lie in the upper half-plane");
    require(a > -1.0, ErrorKind::domain, "alpha must exceed -1");
    HPoint w(detail::num(v, "wx"), wy);
    return k == "kernel" ? AnalyticFn::kernel_at(w, a) : AnalyticFn::normalized_kernel_at(w, a);
  }
  if (k == "g") {
    double eps = detail::num(v, "eps"), m = detail::num(v, "m");
    require(eps > 0.0, ErrorKind::domain, "eps must be positive");
    require(m >= 0.0, ErrorKind::domain, "m must be nonnegative");
    return AnalyticFn::g(eps, m);
  }
  if (k == "atoms") {
    double a = detail::num_or(v, "alpha", 0.0);
    json lat = v.contains("lattice") ? v.at("lattice") : json{{"delta", 0.5}, {"lmax", 50}, {"jmax", 10}};
    return synthesize(sequence_from_json(v.at("sequence"), lattice_from_json(lat)), a);
  }
  fail(ErrorKind::parameter, "unknown function kind '" + k + "'");
}

/// {"kind": "kernels"|"whitney", "kernels": 30, "atom_sums": 20, "im_min": 1e-3, "im_max": 1, "depth": 10}
inline FamilySpec family_from_json(const json& j) {
  FamilySpec f;
  if (j.contains("kind")) {
    std::string k = j.at("kind").get<std::string>();
    if (k == "whitney")
      f.kind = FamilySpec::Kind::whitney;
    else if (k != "kernels")
      fail(ErrorKind::parameter, "unknown family kind '" + k + "'");
  }
  f.kernels = static_cast<int>(detail::num_or(j, "kernels", f.kernels));
  f.atom_sums = static_cast<int>(detail::num_or(j, "atom_sums", f.atom_sums));
  f.im_min = detail::num_or(j, "im_min", f.im_min);
  f.im_max = detail::num_or(j, "im_max", f.im_max);
  f.depth = static_cast<int>(detail::num_or(j, "depth", f.depth));
  f.tol = detail::num_or(j, "tol", f.tol);
  if (j.contains("x_center")) f.x_center = detail::num(j, "x_center");
  require(f.im_min > 0.0 && f.im_max > f.im_min, ErrorKind::domain, "family needs 0 < im_min < im_max");
  return f;
}

// ---------------------------------------------------------------------------
// writers

/// Non-finite numbers have no JSON literal; they are written as strings.
inline json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline json to_json(const LuxResult& r) {
  return {{"value", number(r.value)}, {"modular_at_value", number(r.modular_at_value)}, {"iterations", r.iterations}};
}

inline json to_json(const CoverageReport& r) {
  return {{"disjoint_ok", r.disjoint_ok}, {"cover_fraction", r.cover_fraction}, {"max_overlap", r.max_overlap},
          {"max_vertical", r.max_vertical}, {"samples", r.samples}, {"seed", r.seed}, {"violations", r.violations}};
}

inline json to_json(const MembershipResult& m) {
  return {{"applicable", m.applicable}, {"member", m.member}, {"lux_value", number(m.lux)},
          {"last_change", number(m.last_change)}, {"lux_by_layer", numbers(m.lux_by_layer)}, {"note", m.note}};
}

inline json to_json(const EmbeddingVerdict& v) {
  json j{{"condition18", {{"holds", v.condition18}, {"C", number(v.condition18_C)}}},
         {"ratio_monotone", v.ratio_monotone},
         {"empirical_ratio", number(v.empirical_ratio)},
         {"test_family_size", v.test_family_size},
         {"growth", number(v.growth)},
         {"trend", v.trend},
         {"heights", numbers(v.heights)},
         {"ratios", numbers(v.ratios)},
         {"seed", v.seed}};
  j["berezin_in_phi3"] = v.membership_checked ? to_json(v.membership) : json(nullptr);
  return j;
}

inline json to_json(const ChangeOfVariables& c) {
  return {{"function", c.label}, {"direct", number(c.direct)}, {"pullback", number(c.pullback)},
          {"rel_diff", number(c.rel_diff)}};
}

inline json to_json(const CompositionReport& r) {
  json j = to_json(r.verdict);
  j["change_of_variables"] = json::array();
  for (const auto& c : r.checks) j["change_of_variables"].push_back(to_json(c));
  return j;
}

inline json error_json(ErrorKind kind, const std::string& detail) {
  return {{"error", {{"kind", to_string(kind)}, {"detail", detail}}}};
}

}  // namespace bol::io
