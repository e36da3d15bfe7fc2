// krein: command-line front end for the string / spectral-measure library.
//
// Data (CSV or JSON) goes to --out or stdout, the one-line summary to stderr.
// Exit codes: 0 pass, 1 a report failed, 2 bad input or usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "krein/acceptance.hpp"
#include "krein/asymptotics.hpp"
#include "krein/correspondence.hpp"
#include "krein/errors.hpp"
#include "krein/io.hpp"
#include "krein/lemmas.hpp"
#include "krein/propagation.hpp"
#include "krein/scale.hpp"
#include "krein/spectral.hpp"
#include "krein/stochastic.hpp"
#include "krein/string_core.hpp"

namespace {

using namespace krein;
using nlohmann::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

// "a,b,c", "lin:lo:hi:n" or "log:lo:hi:n" (both ends included)
std::vector<double> parse_grid(const std::string& spec) {
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad number '" + t + "' in grid '" + spec + "'");
    }
    if (used != t.size()) throw InvalidInput("bad number '" + t + "' in grid '" + spec + "'");
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, sep);) parts.push_back(p);
    return parts;
  };
  if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
    const auto parts = split(spec.substr(4), ':');
    if (parts.size() != 3) throw InvalidInput("grid '" + spec + "' needs lo:hi:n");
    const double lo = num(parts[0]), hi = num(parts[1]);
    const double nd = num(parts[2]);
    if (nd < 1 || nd != std::floor(nd)) throw InvalidInput("grid point count must be a positive integer");
    const auto n = static_cast<std::size_t>(nd);
    const bool geometric = spec[1] == 'o';
    if (geometric && !(lo > 0.0 && hi > 0.0)) throw InvalidInput("log grid needs positive ends");
    std::vector<double> g;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      g.push_back(geometric ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u);
    }
    return g;
  }
  std::vector<double> g;
  for (const auto& p : split(spec, ',')) g.push_back(num(p));
  if (g.empty()) throw InvalidInput("empty grid");
  return g;
}

std::string num_str(double v) {
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidInput("cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
  void row(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os() << (i ? "," : "") << num_str(v[i]);
    os() << "\n";
  }
  void header(const std::string& h) { os() << h << "\n"; }
  void json_doc(const json& j) { os() << j.dump(2) << "\n"; }

 private:
  std::ofstream file_;
};

struct Common {
  std::string string_file, spectrum_file, out, grid, format = "csv", phi = "power:2";
  std::optional<double> a;
  double lambda = -1.0;
  double tol = 0.0;  // 0: module default
  std::uint64_t seed = 20240917;
  std::size_t samples = 200000;
};

void need(const std::string& v, const char* flag) {
  if (v.empty()) throw InvalidInput(std::string("missing ") + flag);
}

StieltjesString load_string(const Common& c) {
  need(c.string_file, "--string");
  return read_string_file(c.string_file);
}

// Dirichlet point: --a when given, else l.
double boundary_of(const StieltjesString& s, const Common& c) {
  if (c.a) return *c.a;
  if (s.infinite_length()) throw TruncationRequired("l is infinite; pass --a");
  return s.right_limit();
}

SpectralMeasure load_or_compute_spectrum(const Common& c) {
  if (!c.spectrum_file.empty()) return read_spectrum_file(c.spectrum_file);
  const auto s = load_string(c);
  if (s.infinite_length()) return spectral_measure(s, boundary_of(s, c));
  return spectral_measure(s);
}

int emit_report(const Report& r, Output& out, const std::string& format) {
  if (format == "json") {
    out.json_doc(r.to_json());
  } else {
    out.header("metric,value");
    for (const auto& [k, v] : r.metrics) out.os() << k << "," << num_str(v) << "\n";
  }
  std::cerr << r.name << ": " << (r.pass ? "PASS" : "FAIL");
  for (const auto& n : r.notes) std::cerr << "; " << n;
  std::cerr << "\n";
  return r.pass ? kPass : kFail;
}

// --- subcommands -----------------------------------------------------------

int cmd_phi(const Common& c) {
  const auto s = load_string(c);
  const auto grid = parse_grid(c.grid.empty() ? "lin:-2:0:9" : c.grid);
  for (double x : grid)
    if (x >= s.right_limit()) throw DomainError("phi grid point " + num_str(x) + " is not left of l");
  Output out(c.out);
  if (c.format == "json") {
    json rows = json::array();
    for (double x : grid) {
      const auto st = phi(s, c.lambda, x);
      rows.push_back({{"x", x}, {"phi", st.value}, {"phi_plus", st.right_derivative}});
    }
    out.json_doc({{"schema_version", "1"}, {"lambda", c.lambda}, {"rows", rows}});
  } else {
    out.header("x,phi,phi_plus");
    for (double x : grid) {
      const auto st = phi(s, c.lambda, x);
      out.row({x, st.value, st.right_derivative});
    }
  }
  std::cerr << "phi: " << grid.size() << " points at lambda " << c.lambda << "\n";
  return kPass;
}

int cmd_green(const Common& c) {
  const auto s = load_string(c);
  if (!(c.lambda < 0.0)) throw DomainError("green needs --lambda < 0");
  const auto grid = parse_grid(c.grid.empty() ? "lin:-2:0:5" : c.grid);
  Output out(c.out);
  std::vector<std::vector<double>> g(grid.size(), std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) g[i][j] = green(s, c.lambda, grid[i], grid[j]);
  if (c.format == "json") {
    out.json_doc({{"schema_version", "1"}, {"lambda", c.lambda}, {"grid", grid}, {"green", g}});
  } else {
    std::string h = "x\\y";
    for (double y : grid) h += "," + num_str(y);
    out.header(h);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<double> row{grid[i]};
      row.insert(row.end(), g[i].begin(), g[i].end());
      out.row(row);
    }
  }
  std::cerr << "green: " << grid.size() << "x" << grid.size() << " at lambda " << c.lambda << "\n";
  return kPass;
}

int cmd_eigs(const Common& c) {
  const auto s = load_string(c);
  const auto es = dirichlet_eigs(s, boundary_of(s, c));
  Output out(c.out);
  if (c.format == "json") {
    out.json_doc({{"schema_version", "1"},
                  {"a", es.boundary},
                  {"eigenvalues", es.eigenvalues},
                  {"eigennorms", es.eigennorms}});
  } else {
    out.header("k,mu,norm");
    for (std::size_t k = 0; k < es.eigenvalues.size(); ++k)
      out.row({static_cast<double>(k + 1), es.eigenvalues[k], es.eigennorms[k]});
  }
  std::cerr << "eigs: " << es.eigenvalues.size() << " eigenvalues, mu_1=" << es.eigenvalues.front() << "\n";
  return kPass;
}

int cmd_spectrum(const Common& c) {
  const auto s = load_string(c);
  const auto sigma = s.infinite_length() ? spectral_measure(s, boundary_of(s, c)) : spectral_measure(s);
  Output out(c.out);
  if (c.format == "json") {
    out.json_doc(spectrum_to_json(sigma));
  } else {
    out.header("xi,weight");
    for (const auto& at : sigma.atoms) out.row({at.xi, at.weight});
  }
  std::cerr << "spectrum: " << sigma.atoms.size() << " atoms, total mass " << sigma.total_mass() << "\n";
  return kPass;
}

int cmd_heat(const Common& c) {
  const auto sigma = load_or_compute_spectrum(c);
  const auto grid = parse_grid(c.grid.empty() ? "log:0.01:100:9" : c.grid);
  for (double t : grid)
    if (!(t > 0.0)) throw DomainError("heat trace needs t > 0");
  Output out(c.out);
  if (c.format == "json") {
    json rows = json::array();
    for (double t : grid) rows.push_back({{"t", t}, {"p", heat_trace(sigma, t)}});
    out.json_doc({{"schema_version", "1"}, {"rows", rows}});
  } else {
    out.header("t,p");
    for (double t : grid) out.row({t, heat_trace(sigma, t)});
  }
  std::cerr << "heat: " << grid.size() << " points\n";
  return kPass;
}

int cmd_roundtrip(const Common& c) {
  const double tol = c.tol > 0.0 ? c.tol : 1e-6;
  Report r("roundtrip");
  if (!c.string_file.empty()) {
    const auto s = load_string(c);
    const auto sigma = s.infinite_length() ? spectral_measure(s, boundary_of(s, c)) : spectral_measure(s);
    const auto rec = reconstruct_from_spectrum(sigma, sigma.offset);
    const auto al = align_strings(s, rec);
    const double dev = std::max({al.max_position_deviation, al.max_mass_deviation, al.right_limit_deviation});
    r.add("shift", al.shift);
    r.add("max_position_deviation", al.max_position_deviation);
    r.add("max_mass_deviation", al.max_mass_deviation);
    r.add("right_limit_deviation", al.right_limit_deviation);
    r.add("spectrum_deviation", spectral_deviation(sigma, spectral_measure(rec)));
    r.require(dev <= tol, "string recovered up to translation");
    r.require(r.get("spectrum_deviation") <= tol, "spectrum recovered");
  } else {
    need(c.spectrum_file, "--string or --spectrum");
    const auto sigma = read_spectrum_file(c.spectrum_file);
    const auto rec = reconstruct_from_spectrum(sigma, sigma.offset);
    r.add("spectrum_deviation", spectral_deviation(sigma, spectral_measure(rec)));
    r.require(r.get("spectrum_deviation") <= tol, "spectrum recovered");
  }
  Output out(c.out);
  const int code = emit_report(r, out, c.format);
  if (r.metrics.front().first == "shift")
    std::cerr << "shift " << r.get("shift") << ", max deviation "
              << std::max({r.get("max_position_deviation"), r.get("max_mass_deviation"),
                           r.get("right_limit_deviation")})
              << "\n";
  return code;
}

int cmd_scale(const Common& c, const std::string& which, const std::string& weights) {
  const auto phi_fn = ScaleFunction::parse(c.phi);
  Output out(c.out);
  if (which == "constants") {
    const auto k = scale_constants(phi_fn);
    const auto grid = parse_grid(c.grid.empty() ? "log:0.01:100:9" : c.grid);
    if (c.format == "json") {
      json rows = json::array();
      for (double x : grid) rows.push_back({{"x", x}, {"C_plus", k.C_plus(x)}, {"C_minus", k.C_minus(x)}});
      out.json_doc({{"schema_version", "1"},
                    {"phi", c.phi},
                    {"alpha_plus", k.alpha_plus},
                    {"C_phi", k.C_phi},
                    {"samples", rows}});
    } else {
      out.header("x,C_plus,C_minus");
      for (double x : grid) out.row({x, k.C_plus(x), k.C_minus(x)});
    }
    std::cerr << "scale " << c.phi << ": alpha_plus " << k.alpha_plus << ", C_phi " << k.C_phi << "\n";
    return kPass;
  }
  McParams mc;
  mc.seed = c.seed;
  mc.samples = c.samples;
  if (which == "verify-l2") {
    const auto s = load_string(c);
    return emit_report(verify_lemma_l2(s, boundary_of(s, c), c.lambda, c.tol > 0.0 ? c.tol : 1e-12), out, c.format);
  }
  if (which == "verify-l11") {
    const auto s = load_string(c);
    if (s.infinite_length()) throw TruncationRequired("verify-l11 needs a string with finite l");
    const double a = c.a ? *c.a : s.atoms().back().x;
    return emit_report(verify_lemma_l11(s, spectral_measure(s), phi_fn, c.lambda, a, 0.0, c.tol > 0.0 ? c.tol : 1e-12),
                       out, c.format);
  }
  if (which == "verify-l9") {
    std::vector<double> w;
    if (!weights.empty()) {
      w = parse_grid(weights);
    } else {
      // X = sum Y_n / mu_n for the Dirichlet problem of the string
      const auto s = load_string(c);
      for (double mu : dirichlet_eigenvalues(s, boundary_of(s, c))) w.push_back(1.0 / mu);
    }
    return emit_report(verify_lemma_l9(w, phi_fn, mc), out, c.format);
  }
  throw InvalidInput("unknown scale subcommand " + which);
}

// Manifest for `converge`. Paths are relative to the manifest file.
int cmd_converge(const Common& c, const std::string& manifest_path) {
  need(manifest_path, "--manifest");
  const json m = read_json_file(manifest_path);
  static const std::set<std::string> allowed{"strings", "spectra", "limit", "conditions", "harness", "phi", "tol",
                                             "grid", "xi_grid", "t_grid", "points", "lambdas", "boundary", "c"};
  if (!m.is_object()) throw InvalidInput("manifest must be a JSON object");
  for (const auto& [key, _] : m.items())
    if (!allowed.count(key)) throw InvalidInput("unknown key '" + key + "' in manifest");
  const bool on_strings = m.contains("strings");
  if (on_strings == m.contains("spectra")) throw InvalidInput("manifest needs exactly one of 'strings', 'spectra'");

  const auto dir = std::filesystem::path(manifest_path).parent_path();
  auto path_of = [&](const json& j) {
    if (!j.is_string()) throw InvalidInput("manifest file entries must be strings");
    return (dir / j.get<std::string>()).string();
  };
  auto numbers = [&](const char* key) {
    std::vector<double> v;
    if (!m.contains(key)) return v;
    if (!m.at(key).is_array()) throw InvalidInput(std::string("'") + key + "' must be an array");
    for (const auto& x : m.at(key)) {
      if (!x.is_number()) throw InvalidInput(std::string("'") + key + "' must hold numbers");
      v.push_back(x.get<double>());
    }
    return v;
  };
  std::vector<std::string> conditions;
  if (m.contains("conditions")) {
    if (!m.at("conditions").is_array()) throw InvalidInput("'conditions' must be an array");
    for (const auto& x : m.at("conditions")) {
      if (!x.is_string()) throw InvalidInput("condition ids must be strings");
      conditions.push_back(x.get<std::string>());
    }
  }
  const std::string harness = m.value("harness", std::string("none"));
  if (harness != "none" && harness != "forward" && harness != "inverse")
    throw InvalidInput("'harness' must be none, forward or inverse");
  if (conditions.empty() && harness == "none") throw InvalidInput("manifest asks for nothing");

  ConvergenceOptions opt;
  opt.tol = m.value("tol", c.tol > 0.0 ? c.tol : 1e-3);
  if (m.contains("phi")) opt.phi = ScaleFunction::parse(m.at("phi").get<std::string>());
  opt.grid = numbers("grid");
  opt.xi_grid = numbers("xi_grid");
  opt.t_grid = numbers("t_grid");
  opt.lambda_grid = numbers("lambdas");

  json doc{{"schema_version", "1"}};
  bool pass = true;
  if (on_strings) {
    StringSequence seq;
    for (const auto& p : m.at("strings")) seq.items.push_back(read_string_file(path_of(p)));
    if (m.contains("limit")) seq.limit = read_string_file(path_of(m.at("limit")));
    if (!conditions.empty()) {
      const auto rep = check_conditions(seq, conditions, opt);
      doc["conditions"] = rep.to_json();
      pass = pass && rep.all_pass();
    }
    if (harness == "inverse") throw InvalidInput("inverse harness needs 'spectra'");
    if (harness == "forward") {
      ForwardOptions f;
      if (m.contains("lambdas")) f.lambdas = opt.lambda_grid;
      f.points = numbers("points");
      f.xi_grid = opt.xi_grid;
      if (m.contains("boundary")) f.boundary = m.at("boundary").get<double>();
      const auto r = forward_continuity_harness(seq, f);
      doc["harness"] = r.to_json();
      pass = pass && r.pass;
    }
  } else {
    SpectrumSequence seq;
    for (const auto& p : m.at("spectra")) seq.items.push_back(read_spectrum_file(path_of(p)));
    if (m.contains("limit")) seq.limit = read_spectrum_file(path_of(m.at("limit")));
    if (!conditions.empty()) {
      const auto rep = check_conditions(seq, conditions, opt);
      doc["conditions"] = rep.to_json();
      pass = pass && rep.all_pass();
    }
    if (harness == "forward") throw InvalidInput("forward harness needs 'strings'");
    if (harness == "inverse") {
      InverseOptions inv;
      if (m.contains("c")) inv.c = m.at("c").get<double>();
      if (m.contains("tol")) inv.tol = opt.tol;
      if (m.contains("t_grid")) inv.t_grid = opt.t_grid;
      inv.xi_grid = opt.xi_grid;
      inv.phi = opt.phi;
      const auto r = inverse_continuity_harness(seq, inv);
      doc["harness"] = r.to_json();
      pass = pass && r.pass;
    }
  }
  doc["pass"] = pass;
  Output out(c.out);
  out.json_doc(doc);
  std::cerr << "converge: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kPass : kFail;
}

struct AsymptoticsArgs {
  std::string check = "t7";
  T7Params t7;
  std::vector<double> twindow;
  std::optional<double> x_min, x_max;
  std::string xi_ladder = "1e-1,1e-2,1e-3";
  std::string nu_ladder = "1,0.5,0.1,0.01";
};

int cmd_asymptotics(const Common& c, AsymptoticsArgs& a) {
  Output out(c.out);
  // small xi needs the far left tail, so p1 gets a wider window
  a.t7.x_min = a.x_min.value_or(a.check == "p1" ? -500.0 : -50.0);
  a.t7.x_max = a.x_max.value_or(a.check == "p1" ? -1e-7 : -1e-3);
  if (!a.twindow.empty()) {
    if (a.twindow.size() != 2) throw InvalidInput("--twindow takes two values");
    a.t7.t_lo = a.twindow[0];
    a.t7.t_hi = a.twindow[1];
  }
  if (a.check == "t7") {
    if (c.tol > 0.0) a.t7.tol = c.tol;
    const auto r = verify_t7(a.t7);
    if (c.format == "json") return emit_report(r, out, c.format);
    // ratio table of the finest level
    out.header("t,p_closed_form,ratio");
    const AlphaFamily fam(a.t7.alpha);
    for (const auto& [k, v] : r.metrics)
      if (k.rfind("ratio_t", 0) == 0) {
        const double t = std::stod(k.substr(7));
        out.row({t, closed_form_p(fam, t), v});
      }
    std::cerr << r.name << ": " << (r.pass ? "PASS" : "FAIL");
    for (const auto& n : r.notes) std::cerr << "; " << n;
    std::cerr << "\n";
    return r.pass ? kPass : kFail;
  }
  const AlphaFamily fam(a.t7.alpha);
  const auto s = discretize_alpha_string(fam, a.t7.x_min, a.t7.x_max, a.t7.n_atoms);
  const RegVarying rv{1.0, 1.0, 0.0};
  if (a.check == "p1")
    return emit_report(verify_p1(s, a.t7.alpha, rv, parse_grid(a.xi_ladder), c.tol > 0.0 ? c.tol : 0.05), out,
                       c.format);
  if (a.check == "l13")
    return emit_report(verify_l13_uniform(spectral_measure(s), a.t7.alpha,
                                          WeightFunction::from_scale(ScaleFunction::power(a.t7.k)), rv,
                                          parse_grid(a.nu_ladder), c.tol > 0.0 ? c.tol : 10.0),
                       out, c.format);
  throw InvalidInput("--check must be t7, p1 or l13");
}

int cmd_mc(const Common& c, const std::string& which, double eps) {
  const auto s = load_string(c);
  McParams mc;
  mc.seed = c.seed;
  mc.samples = c.samples;
  Output out(c.out);
  if (which == "verify-eq10") return emit_report(verify_eq10(s, boundary_of(s, c), c.lambda, mc), out, c.format);
  if (which == "verify-eq32")
    return emit_report(verify_eq32(s, boundary_of(s, c), c.lambda, ScaleFunction::parse(c.phi), mc), out, c.format);
  if (which == "verify-eq26") {
    if (!(eps > 0.0)) throw InvalidInput("--eps must be positive");
    Eq26Params p;
    p.eps = eps;
    p.f = [eps](double t) { return t < eps ? 0.0 : (t - eps) * std::exp(-t); };
    if (c.tol > 0.0) p.rel_tol = c.tol;
    return emit_report(verify_eq26(s, p, mc), out, c.format);
  }
  throw InvalidInput("unknown mc subcommand " + which);
}

int cmd_selftest(const Common& c, const std::vector<int>& only) {
  AcceptanceOptions opt;
  opt.seed = c.seed;
  opt.only = only;
  const auto results = run_acceptance(std::cout, opt);
  bool pass = true;
  for (const auto& r : results) pass = pass && r.pass;
  if (!c.out.empty()) {
    json rows = json::array();
    for (const auto& r : results)
      rows.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}});
    Output out(c.out);
    out.json_doc({{"schema_version", "1"}, {"pass", pass}, {"criteria", rows}});
  }
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krein strings: forward and inverse spectral maps, bounds and checks"};
  app.require_subcommand(1);
  Common c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto with_string = [&](CLI::App* sub) {
    sub->add_option("--string", c.string_file, "string description (JSON)");
    sub->add_option("--a", c.a, "Dirichlet point (default l)");
  };

  auto* phi_cmd = app.add_subcommand("phi", "phi_lambda and its right derivative on a grid");
  with_string(phi_cmd);
  phi_cmd->add_option("--lambda", c.lambda, "spectral parameter")->default_val(-1.0);
  phi_cmd->add_option("--grid", c.grid, "x grid: a,b,c | lin:lo:hi:n | log:lo:hi:n");
  common(phi_cmd);

  auto* green_cmd = app.add_subcommand("green", "Green function matrix on a grid");
  with_string(green_cmd);
  green_cmd->add_option("--lambda", c.lambda, "spectral parameter < 0")->default_val(-1.0);
  green_cmd->add_option("--grid", c.grid, "x grid");
  common(green_cmd);

  auto* eigs_cmd = app.add_subcommand("eigs", "Dirichlet eigenvalues and norms");
  with_string(eigs_cmd);
  common(eigs_cmd);

  auto* spec_cmd = app.add_subcommand("spectrum", "spectral measure atoms");
  with_string(spec_cmd);
  common(spec_cmd);

  auto* heat_cmd = app.add_subcommand("heat", "heat trace p(t)");
  with_string(heat_cmd);
  heat_cmd->add_option("--spectrum", c.spectrum_file, "spectral measure (JSON)");
  heat_cmd->add_option("--grid", c.grid, "t grid");
  common(heat_cmd);

  auto* rt_cmd = app.add_subcommand("roundtrip", "spectrum -> string -> spectrum");
  with_string(rt_cmd);
  rt_cmd->add_option("--spectrum", c.spectrum_file, "spectral measure (JSON)");
  rt_cmd->add_option("--tol", c.tol, "deviation tolerance (default 1e-6)");
  common(rt_cmd);

  std::string scale_which, weights;
  auto* scale_cmd = app.add_subcommand("scale", "scale-function constants and lemma checks");
  scale_cmd->add_option("which", scale_which, "constants | verify-l2 | verify-l9 | verify-l11")
      ->required()
      ->check(CLI::IsMember({"constants", "verify-l2", "verify-l9", "verify-l11"}));
  scale_cmd->add_option("--phi", c.phi, "power:A | powerlog:A,C | table:FILE")->default_val("power:2");
  with_string(scale_cmd);
  scale_cmd->add_option("--lambda", c.lambda, "spectral parameter < 0")->default_val(-1.0);
  scale_cmd->add_option("--weights", weights, "l9 weights (grid syntax); default 1/mu_n of --string");
  scale_cmd->add_option("--grid", c.grid, "x samples for C+ and C-");
  scale_cmd->add_option("--seed", c.seed, "Monte Carlo seed");
  scale_cmd->add_option("--samples", c.samples, "Monte Carlo samples");
  scale_cmd->add_option("--tol", c.tol, "margin tolerance");
  common(scale_cmd);

  std::string manifest;
  auto* conv_cmd = app.add_subcommand("converge", "convergence conditions and continuity harnesses");
  conv_cmd->add_option("--manifest", manifest, "manifest JSON")->required();
  conv_cmd->add_option("--tol", c.tol, "tolerance when the manifest has none");
  conv_cmd->add_option("--out", c.out, "output file (default stdout)");

  AsymptoticsArgs as;
  auto* asy_cmd = app.add_subcommand("asymptotics", "power-law string checks");
  asy_cmd->add_option("--check", as.check, "t7 | p1 | l13")->default_val("t7");
  asy_cmd->add_option("--alpha", as.t7.alpha, "alpha")->default_val(2.0);
  asy_cmd->add_option("--k", as.t7.k, "weight exponent")->default_val(3.0);
  asy_cmd->add_option("--xmin", as.x_min, "left end (default -50, p1: -500)");
  asy_cmd->add_option("--xmax", as.x_max, "right end (default -1e-3, p1: -1e-7)");
  asy_cmd->add_option("--atoms", as.t7.n_atoms, "atoms at the finest level")->default_val(2000);
  asy_cmd->add_option("--levels", as.t7.levels, "dyadic refinement levels")->default_val(3);
  asy_cmd->add_option("--twindow", as.twindow, "t window: lo hi")->expected(2);
  asy_cmd->add_option("--xi", as.xi_ladder, "xi ladder for p1");
  asy_cmd->add_option("--nu", as.nu_ladder, "nu ladder for l13");
  asy_cmd->add_option("--tol", c.tol, "tolerance");
  common(asy_cmd);

  std::string mc_which;
  double eps = 0.05;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo identities");
  mc_cmd->add_option("which", mc_which, "verify-eq10 | verify-eq32 | verify-eq26")
      ->required()
      ->check(CLI::IsMember({"verify-eq10", "verify-eq32", "verify-eq26"}));
  with_string(mc_cmd);
  mc_cmd->add_option("--lambda", c.lambda, "spectral parameter < 0")->default_val(-1.0);
  mc_cmd->add_option("--phi", c.phi, "scale function for eq32")->default_val("power:2");
  mc_cmd->add_option("--eps", eps, "eq26: f vanishes on [0, eps)")->default_val(0.05);
  mc_cmd->add_option("--seed", c.seed, "seed");
  mc_cmd->add_option("--samples", c.samples, "samples");
  mc_cmd->add_option("--tol", c.tol, "eq26 relative tolerance");
  common(mc_cmd);

  std::vector<int> only;
  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  self_cmd->add_option("--only", only, "criterion ids")->delimiter(',');
  self_cmd->add_option("--seed", c.seed, "corpus seed");
  self_cmd->add_option("--out", c.out, "JSON summary file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*phi_cmd) return cmd_phi(c);
    if (*green_cmd) return cmd_green(c);
    if (*eigs_cmd) return cmd_eigs(c);
    if (*spec_cmd) return cmd_spectrum(c);
    if (*heat_cmd) return cmd_heat(c);
    if (*rt_cmd) return cmd_roundtrip(c);
    if (*scale_cmd) return cmd_scale(c, scale_which, weights);
    if (*conv_cmd) return cmd_converge(c, manifest);
    if (*asy_cmd) return cmd_asymptotics(c, as);
    if (*mc_cmd) return cmd_mc(c, mc_which, eps);
    if (*self_cmd) return cmd_selftest(c, only);
  } catch (const krein::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
