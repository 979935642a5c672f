// bol: command-line front end to the Bergman-Orlicz library.
//
//   bol gamma --delta 0.5
//   bol luxnorm --phi '{"family":"power","p":2}' --measure data/unit_square.json --fn '{"constant":1}'
//   bol verify --suite beta
//
// Math inputs are JSON, given inline or as a file path. Reports are a single JSON
// document (or CSV with --format csv). Exit codes: 0 ok, 2 invalid input, 3 numerical
// failure, 4 acceptance criteria failed, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <bol/bol.hpp>
#include <bol/json_io.hpp>
#include <bol/verify.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

using json = nlohmann::json;
using namespace bol;

namespace {

struct Global {
  std::string format = "json";
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::string out;
  bool no_meta = false;
  bool seed_given = false;
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain:
    case ErrorKind::parameter:
    case ErrorKind::range:
      return 2;
    default:
      return 3;
  }
}

/// Inline JSON when the text looks like JSON, otherwise a file path.
json load(const std::string& arg, const char* what) {
  std::string s = arg;
  auto first = s.find_first_not_of(" \t\n");
  if (first == std::string::npos) fail(ErrorKind::parameter, std::string("empty ") + what);
  char c = s[first];
  if (c != '{' && c != '[' && c != '"') {
    std::ifstream in(arg);
    if (!in) fail(ErrorKind::parameter, std::string("cannot read ") + what + " file '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    s = ss.str();
  }
  try {
    return json::parse(s);
  } catch (const json::exception& e) {
    fail(ErrorKind::parameter, std::string("malformed JSON in ") + what + ": " + e.what());
  }
}

HPoint parse_point(const std::string& s) {
  double x, y;
  char comma;
  std::istringstream is(s);
  if (!(is >> x >> comma >> y) || comma != ',') fail(ErrorKind::parameter, "expected a point as x,y");
  require(y > 0.0, ErrorKind::domain, "point must lie in the upper half-plane");
  return {x, y};
}

std::vector<double> parse_list(const std::string& s, std::size_t n, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail(ErrorKind::parameter, std::string("bad number in ") + what);
    }
  }
  if (v.size() != n) fail(ErrorKind::parameter, std::string(what) + " needs " + std::to_string(n) + " numbers");
  return v;
}

/// A scalar field: an analytic function's modulus or {"constant": c}.
std::pair<Field, std::optional<MeshHints>> field_from_json(const json& j) {
  if (j.is_object() && j.contains("constant")) {
    double c = j.at("constant").get<double>();
    return {[c](double, double) { return std::abs(c); }, std::nullopt};
  }
  auto F = io::fn_from_json(j);
  return {F.modulus(), F.hints()};
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

/// CSV: a "rows" table if the report has one, otherwise key,value pairs of the flattened document.
std::string to_csv(const json& report) {
  std::ostringstream os;
  if (report.contains("rows") && report.at("rows").is_array() && !report.at("rows").empty()) {
    const auto& rows = report.at("rows");
    std::vector<std::string> cols = report.value("columns", std::vector<std::string>{});
    if (cols.empty())
      for (auto it = rows[0].begin(); it != rows[0].end(); ++it) cols.push_back(it.key());
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_cell(cols[i]);
    os << "\r\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << csv_cell(r.contains(cols[i]) ? cell_text(r.at(cols[i])) : "");
      os << "\r\n";
    }
    return os.str();
  }
  os << "key,value\r\n";
  json flat = report.flatten();
  for (const auto& [k, v] : flat.items()) os << csv_cell(k) << "," << csv_cell(cell_text(v)) << "\r\n";
  return os.str();
}

std::string timestamp() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void emit(const Global& g, const std::string& command, json report) {
  report["seed"] = g.seed;
  if (!g.no_meta)
    report["meta"] = {{"tool", "bol"}, {"version", kVersion}, {"command", command}, {"timestamp", timestamp()}};
  std::string text = g.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) fail(ErrorKind::parameter, "cannot write '" + g.out + "'");
    f << text;
  }
}

void emit_error(const Global& g, ErrorKind kind, const std::string& detail) {
  std::string text = io::error_json(kind, detail).dump() + "\n";
  if (!g.out.empty()) {
    std::ofstream f(g.out, std::ios::binary);
    if (f) f << text;
  }
  std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bergman-Orlicz analysis on the upper half-plane"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "seed for every random choice")->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--tol", g.tol, "relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the report here instead of stdout");
  app.add_flag("--no-meta", g.no_meta, "omit the timestamped meta block");

  std::function<json()> run;
  std::string command;
  int verify_failed = 0;

  // gamma
  auto* c_gamma = app.add_subcommand("gamma", "admissible gamma window for a delta");
  double delta = 0.5;
  c_gamma->add_option("--delta", delta)->required();
  c_gamma->callback([&] {
    command = "gamma";
    run = [&] {
      auto w = gamma_interval(delta);
      return json{{"delta", delta}, {"lo", w.lo}, {"hi", w.hi}, {"midpoint", w.midpoint()}};
    };
  });

  // lattice
  auto* c_lat = app.add_subcommand("lattice", "build a delta-lattice and optionally check its covering");
  std::optional<double> gamma;
  int lmax = 0, jmax = 0, samples = 10000;
  std::string region_arg;
  c_lat->add_option("--delta", delta)->required();
  c_lat->add_option("--gamma", gamma);
  c_lat->add_option("--lmax", lmax)->required();
  c_lat->add_option("--jmax", jmax)->required();
  c_lat->add_option("--report", region_arg, "region JSON for a covering report");
  c_lat->add_option("--samples", samples);
  c_lat->callback([&] {
    command = "lattice";
    run = [&] {
      auto lat = DeltaLattice::build(delta, lmax, jmax, gamma);
      json j{{"gamma", lat.gamma()}, {"s_delta", lat.s_delta()}, {"points_count", lat.size()},
             {"lattice", io::lattice_to_json(lat)}};
      j["report"] = region_arg.empty()
                        ? json(nullptr)
                        : io::to_json(covering_report(lat, io::region_from_json(load(region_arg, "region")), samples,
                                                      g.seed));
      return j;
    };
  });

  // luxnorm
  auto* c_lux = app.add_subcommand("luxnorm", "Luxembourg norm of |f| in L^Phi(mu)");
  std::string phi_arg, measure_arg, fn_arg;
  c_lux->add_option("--phi", phi_arg)->required();
  c_lux->add_option("--measure", measure_arg)->required();
  c_lux->add_option("--fn", fn_arg)->required();
  c_lux->callback([&] {
    command = "luxnorm";
    run = [&] {
      auto phi = io::growth_from_json(load(phi_arg, "phi"));
      auto mu = io::measure_from_json(load(measure_arg, "measure"));
      auto [f, hints] = field_from_json(load(fn_arg, "fn"));
      auto r = luxembourg(f, mu, phi, g.tol, hints);
      json j = io::to_json(r);
      j["phi"] = phi.describe();
      return j;
    };
  });

  // synthesize
  auto* c_syn = app.add_subcommand("synthesize", "evaluate the atomic synthesis F_mu at a point");
  std::string seq_arg, at_arg;
  double alpha = 0.0;
  c_syn->add_option("--seq", seq_arg, "{\"lattice\": {...}, \"sequence\": [[l, j, re, im], ...]}")->required();
  c_syn->add_option("--alpha", alpha);
  c_syn->add_option("--at", at_arg, "x,y")->required();
  c_syn->callback([&] {
    command = "synthesize";
    run = [&] {
      auto mu = io::lattice_sequence_from_json(load(seq_arg, "sequence"));
      auto z = parse_point(at_arg);
      cplx v = synthesize(mu, alpha)(z);
      return json{{"x", z.x}, {"y", z.y}, {"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}};
    };
  });

  // sample
  auto* c_smp = app.add_subcommand("sample", "values of F on the lattice points");
  std::string lat_arg;
  c_smp->add_option("--fn", fn_arg)->required();
  c_smp->add_option("--lattice", lat_arg)->required();
  c_smp->callback([&] {
    command = "sample";
    run = [&] {
      auto lat = io::lattice_from_json(load(lat_arg, "lattice"));
      auto s = sample(io::fn_from_json(load(fn_arg, "fn")), lat);
      json rows = json::array();
      for (const auto& [k, v] : s.entries()) rows.push_back({{"l", k.l}, {"j", k.j}, {"re", v.real()}, {"im", v.imag()}});
      return json{{"lattice", io::lattice_to_json(lat)}, {"sequence", io::sequence_to_json(s)}, {"rows", rows},
                  {"columns", {"l", "j", "re", "im"}}};
    };
  });

  // decompose
  auto* c_dec = app.add_subcommand("decompose", "least-squares atomic coefficients of F on a window");
  double ridge = 1e-10;
  c_dec->add_option("--fn", fn_arg)->required();
  c_dec->add_option("--lattice", lat_arg)->required();
  c_dec->add_option("--alpha", alpha);
  c_dec->add_option("--ridge", ridge)->check(CLI::NonNegativeNumber);
  c_dec->callback([&] {
    command = "decompose";
    run = [&] {
      auto lat = io::lattice_from_json(load(lat_arg, "lattice"));
      auto d = decompose_l2(io::fn_from_json(load(fn_arg, "fn")), lat, alpha, ridge, g.tol);
      return json{{"lattice", io::lattice_to_json(lat)}, {"sequence", io::sequence_to_json(d.mu)},
                  {"residual", io::number(d.residual)}, {"condition", io::number(d.condition)}, {"ridge", ridge}};
    };
  });

  // berezin
  auto* c_ber = app.add_subcommand("berezin", "Berezin transform of a measure at a point");
  c_ber->add_option("--measure", measure_arg)->required();
  c_ber->add_option("--alpha", alpha);
  c_ber->add_option("--at", at_arg, "x,y")->required();
  c_ber->callback([&] {
    command = "berezin";
    run = [&] {
      auto mu = io::measure_from_json(load(measure_arg, "measure"));
      auto z = parse_point(at_arg);
      return json{{"x", z.x}, {"y", z.y}, {"alpha", alpha}, {"value", berezin(mu, z, alpha, g.tol)}};
    };
  });

  // embed-check
  auto* c_emb = app.add_subcommand("embed-check", "evidence for A^Phi1_alpha embedding into L^Phi2(mu)");
  std::string phi1_arg, phi2_arg, family_arg;
  bool skip_membership = false;
  c_emb->add_option("--phi1", phi1_arg)->required();
  c_emb->add_option("--phi2", phi2_arg)->required();
  c_emb->add_option("--measure", measure_arg)->required();
  c_emb->add_option("--alpha", alpha);
  c_emb->add_option("--family", family_arg);
  c_emb->add_flag("--skip-membership", skip_membership, "do not compute the Berezin membership verdict");
  c_emb->callback([&] {
    command = "embed-check";
    run = [&] {
      auto fam = family_arg.empty() ? FamilySpec{} : io::family_from_json(load(family_arg, "family"));
      auto m = skip_membership ? std::nullopt : std::optional<MembershipOptions>(MembershipOptions{});
      return io::to_json(embedding_test(io::measure_from_json(load(measure_arg, "measure")),
                                        io::growth_from_json(load(phi1_arg, "phi1")),
                                        io::growth_from_json(load(phi2_arg, "phi2")), alpha, fam, g.seed, m));
    };
  });

  // comp-check
  auto* c_comp = app.add_subcommand("comp-check", "composition operator induced by a real Mobius map");
  std::string mobius_arg;
  double beta_w = 0.0, shift = 0.0;
  c_comp->add_option("--mobius", mobius_arg, "a,b,c,d")->required();
  c_comp->add_option("--beta", beta_w)->required();
  c_comp->add_option("--shift", shift, "imaginary shift added to the map");
  c_comp->add_option("--phi1", phi1_arg)->required();
  c_comp->add_option("--phi2", phi2_arg)->required();
  c_comp->add_option("--alpha", alpha);
  c_comp->add_option("--family", family_arg);
  bool membership = false;
  c_comp->add_flag("--membership", membership, "also compute the Berezin membership verdict (slow)");
  c_comp->callback([&] {
    command = "comp-check";
    run = [&] {
      auto m = parse_list(mobius_arg, 4, "--mobius");
      auto fam = family_arg.empty() ? FamilySpec{} : io::family_from_json(load(family_arg, "family"));
      auto mem = membership ? std::optional<MembershipOptions>(MembershipOptions{}) : std::nullopt;
      return io::to_json(composition_check(m[0], m[1], m[2], m[3], beta_w, io::growth_from_json(load(phi1_arg, "phi1")),
                                           io::growth_from_json(load(phi2_arg, "phi2")), alpha, fam, shift, g.seed,
                                           mem));
    };
  });

  // atoms-experiment
  auto* c_atm = app.add_subcommand("atoms-experiment", "synthesis and sampling ratios on random sequences");
  int trials = 20;
  c_atm->add_option("--phi", phi_arg)->required();
  c_atm->add_option("--delta", delta)->required();
  c_atm->add_option("--trials", trials)->check(CLI::PositiveNumber);
  c_atm->add_option("--alpha", alpha);
  c_atm->callback([&] {
    command = "atoms-experiment";
    run = [&] {
      auto rep = equivalence_experiment(io::growth_from_json(load(phi_arg, "phi")), alpha, delta, trials, g.seed);
      json rows = json::array();
      for (std::size_t i = 0; i < rep.ratios_synth.size(); ++i)
        rows.push_back({{"trial", i}, {"norm_mu", rep.norms_mu[i]}, {"norm_F", rep.norms_F[i]},
                        {"ratio_synth", rep.ratios_synth[i]}, {"ratio_sample", rep.ratios_sample[i]}});
      return json{{"rows", rows},
                  {"columns", {"trial", "norm_mu", "norm_F", "ratio_synth", "ratio_sample"}},
                  {"spread_synth", EquivalenceReport::spread(rep.ratios_synth)},
                  {"spread_sample", EquivalenceReport::spread(rep.ratios_sample)}};
    };
  });

  // verify
  auto* c_ver = app.add_subcommand("verify", "run the acceptance suite");
  std::string suite = "all";
  std::vector<std::string> names{"all"};
  for (const auto& s : verify::suites()) names.push_back(s.name);
  c_ver->add_option("--suite", suite)->check(CLI::IsMember(names));
  c_ver->callback([&] {
    command = "verify";
    run = [&] {
      std::uint64_t seed = g.seed_given ? g.seed : 20240601;
      g.seed = seed;
      json rows = json::array();
      bool all = true;
      verify::run_all(suite, seed, [&](const verify::CriterionResult& r) {
        std::cerr << verify::summary_line(r) << std::endl;
        json row = verify::to_json(r);
        if (g.no_meta) row.erase("seconds");
        rows.push_back(row);
        all = all && r.pass;
        if (!r.pass) ++verify_failed;
      });
      return json{{"suite", suite}, {"pass", all}, {"rows", rows},
                  {"columns", {"id", "suite", "title", "pass", "detail"}}};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(g, ErrorKind::parameter, e.what());
    return 2;
  }

  try {
    emit(g, command, run());
    return verify_failed ? 4 : 0;
  } catch (const Error& e) {
    emit_error(g, e.kind(), e.detail());
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    emit_error(g, ErrorKind::parameter, e.what());
    return 2;
  } catch (const std::exception& e) {
    std::cout << json{{"error", {{"kind", "internal"}, {"detail", e.what()}}}}.dump() << "\n";
    return 1;
  }
}
