#include "krein/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "krein/alpha_family.hpp"
#include "krein/errors.hpp"
#include "krein/propagation.hpp"
#include "krein/quadrature.hpp"

namespace krein {

namespace {

const std::vector<std::string> kStringIds{"A", "B", "C", "D"};
const std::vector<std::string> kSpectrumIds{"A'", "C'", "D'", "A''", "C''", "D''"};

std::vector<double> ladder_or(const std::vector<double>& given, double start, double factor, int count) {
  if (!given.empty()) return given;
  std::vector<double> out;
  double v = start;
  for (int i = 0; i < count; ++i, v *= factor) out.push_back(v);
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

ConditionResult deviation_result(const std::vector<double>& devs, double tol, const std::string& what) {
  const double ext = extrapolate_limit(devs);
  ConditionResult r;
  r.margin = std::max(0.0, ext);
  r.pass = r.margin < tol;
  r.witness = what + "; last deviation " + fmt(devs.back()) + ", extrapolated " + fmt(ext);
  return r;
}

// lim over the ladder of sup_n q(n, x): the sup over n is extrapolated from
// prefix suprema, then the ladder limit from the last three ladder values.
template <class Q>
ConditionResult tail_result(std::size_t n_items, const std::vector<double>& ladder, Q q, double tol,
                            const std::string& what) {
  std::vector<double> sups;
  for (double x : ladder) {
    std::vector<double> prefix;
    double best = 0.0;
    for (std::size_t n = 0; n < n_items; ++n) {
      best = std::max(best, q(n, x));
      prefix.push_back(best);
    }
    sups.push_back(extrapolate_limit(prefix));
  }
  const double ext = extrapolate_limit(sups);
  ConditionResult r;
  r.margin = std::isnan(ext) ? kInf : std::max(0.0, ext);
  r.pass = r.margin < tol;
  r.witness = what + "; sup_n at last ladder point " + fmt(sups.back()) + ", extrapolated " + fmt(ext);
  return r;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const ScaleFunction& need_phi(const ConvergenceOptions& opt, const std::string& id) {
  if (!opt.phi) throw InvalidInput("condition " + id + " needs a scale function");
  return *opt.phi;
}

// Geometric xi grid spanning the atoms of all measures, nudged off the
// atoms of `limit` so it samples continuity points.
std::vector<double> default_xi_grid(const std::vector<const SpectralMeasure*>& all,
                                    const SpectralMeasure* limit) {
  double lo = kInf, hi = 0.0;
  for (const auto* s : all)
    for (const auto& a : s->atoms) {
      lo = std::min(lo, a.xi);
      hi = std::max(hi, a.xi);
    }
  if (!std::isfinite(lo)) {
    lo = 1.0;
    hi = 1.0;
  }
  lo *= 1e-2;
  hi *= 10.0;
  std::vector<double> grid;
  const int n = 128;
  for (int i = 0; i < n; ++i) grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  if (limit)
    for (double& g : grid)
      for (const auto& a : limit->atoms)
        if (std::abs(g - a.xi) <= 1e-9 * a.xi) g = a.xi * (1.0 + 1e-6);
  return grid;
}

double S_tail(const SpectralMeasure& s, const ScaleFunction& phi, double N) {
  if (s.is_closed_form()) {
    const double alpha = s.closed_form->alpha;
    if (!(phi.exponent_at_zero() > alpha - 1.0)) return kInf;
    const double K = alpha_sigma_constant(alpha);
    return integrate([&](double xi) { return phi_tilde(phi, xi) * K * alpha * std::pow(xi, alpha - 1.0); },
                     N, kInf, 1e-8);
  }
  double acc = 0.0;
  for (const auto& a : s.atoms)
    if (a.xi >= N) acc += phi_tilde(phi, a.xi) * a.weight;
  return acc;
}

double S_shifted(const SpectralMeasure& s, const ScaleFunction& phi, double lambda) {
  if (s.is_closed_form()) {
    const double alpha = s.closed_form->alpha;
    if (!(phi.exponent_at_zero() > alpha - 1.0)) return kInf;
    const double K = alpha_sigma_constant(alpha);
    auto f = [&](double xi) { return phi_tilde(phi, xi - lambda) * K * alpha * std::pow(xi, alpha - 1.0); };
    return integrate(f, 0.0, 1.0, 1e-8) + integrate(f, 1.0, kInf, 1e-8);
  }
  double acc = 0.0;
  for (const auto& a : s.atoms) acc += phi_tilde(phi, a.xi - lambda) * a.weight;
  return acc;
}

double heat_phi_integral(const SpectralMeasure& s, const ScaleFunction& phi, double lo, double hi,
                         double lambda) {
  if (s.is_closed_form() && !(phi.exponent_at_zero() > s.closed_form->alpha - 1.0) && lo == 0.0) return kInf;
  auto f = [&](double t) { return t > 0.0 ? heat_trace(s, t) * phi(t) * std::exp(lambda * t) : 0.0; };
  return integrate(f, lo, hi, 1e-8);
}

}  // namespace

bool is_string_condition(const std::string& id) {
  return std::find(kStringIds.begin(), kStringIds.end(), id) != kStringIds.end();
}

bool is_spectrum_condition(const std::string& id) {
  return std::find(kSpectrumIds.begin(), kSpectrumIds.end(), id) != kSpectrumIds.end();
}

bool ConvergenceReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& kv) { return kv.second.pass; });
}

nlohmann::json ConvergenceReport::to_json() const {
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [id, r] : conditions) {
    nlohmann::json m;
    if (std::isfinite(r.margin))
      m = r.margin;
    else
      m = "inf";
    c[id] = {{"pass", r.pass}, {"margin", m}, {"witness", r.witness}};
  }
  return {{"schema_version", "1"}, {"pass", all_pass()}, {"conditions", c}};
}

double extrapolate_limit(const std::vector<double>& terms) {
  if (terms.empty()) throw InsufficientData("no terms to extrapolate");
  const std::size_t n = terms.size();
  if (n < 3) return terms.back();
  const double a0 = terms[n - 3], a1 = terms[n - 2], a2 = terms[n - 1];
  for (double v : {a0, a1, a2})
    if (!std::isfinite(v)) return kInf;
  const double d1 = a1 - a0, d2 = a2 - a1;
  const double scale = std::max({std::abs(a0), std::abs(a1), std::abs(a2), 1e-300});
  if (std::abs(d2) <= 1e-13 * scale) return a2;
  if (d1 == 0.0) return d2 > 0.0 ? kInf : -kInf;
  const double r = d2 / d1;
  if (r >= 1.0) return d2 > 0.0 ? kInf : -kInf;
  return a2 + d2 * r / (1.0 - r);
}

ConvergenceReport check_conditions(const StringSequence& seq, const std::vector<std::string>& which,
                                   const ConvergenceOptions& opt) {
  if (seq.items.size() < 3) throw InsufficientData("condition checks need at least three items");
  const auto& items = seq.items;
  const std::size_t n_items = items.size();
  ConvergenceReport out;
  const auto x_ladder = ladder_or(opt.x_ladder, -1.0, 2.0, 13);

  for (const auto& id : which) {
    if (!is_string_condition(id)) throw InvalidInput("not a string condition: " + id);
    if (id == "A") {
      std::vector<StieltjesString> all = items;
      if (seq.limit) all.push_back(*seq.limit);
      const auto grid = opt.grid.empty() ? default_comparison_grid(all) : nudge_off_atoms(opt.grid, all);
      std::vector<double> devs;
      if (seq.limit) {
        for (const auto& s : items) devs.push_back(compactified_distance(s, *seq.limit, grid));
        out.conditions[id] = deviation_result(devs, opt.tol, "max |m^_n - m^| on grid");
      } else {
        for (std::size_t n = 0; n + 1 < n_items; ++n) devs.push_back(compactified_distance(items[n], items[n + 1], grid));
        out.conditions[id] = deviation_result(devs, opt.tol, "no limit given, Cauchy surrogate max |m^_{n+1} - m^_n|");
      }
    } else if (id == "B") {
      out.conditions[id] = tail_result(
          n_items, x_ladder, [&](std::size_t n, double x) { return mass_integral_M(items[n], x); }, opt.tol,
          "sup_n M_n(x) as x -> -inf");
    } else if (id == "C") {
      const auto& phi = need_phi(opt, id);
      out.conditions[id] = tail_result(
          n_items, x_ladder,
          [&](std::size_t n, double x) {
            if (x >= items[n].right_limit()) return kInf;
            return membership_E_phi(items[n], phi, x).value;
          },
          opt.tol, "sup_n int_{-inf}^x phi(M_n) as x -> -inf");
    } else {  // D
      const auto& phi = need_phi(opt, id);
      std::vector<double> pts = opt.D_points;
      if (pts.empty()) {
        double lo = kInf, hi = kInf;
        std::vector<const StieltjesString*> all;
        for (const auto& s : items) all.push_back(&s);
        if (seq.limit) all.push_back(&*seq.limit);
        for (const auto* s : all) {
          lo = std::min(lo, s->left_support());
          hi = std::min(hi, std::min(s->right_limit(), s->right_support() + 1.0));
        }
        hi -= 1e-9 * (1.0 + std::abs(hi));
        for (int k = 0; k < 5; ++k) pts.push_back(lo + (hi - lo) * (k + 1) / 5.0);
      }
      auto E = [&](const StieltjesString& s, double x) { return membership_E_phi(s, phi, x).value; };
      std::vector<double> devs;
      if (seq.limit) {
        for (const auto& s : items) {
          double d = 0.0;
          for (double x : pts) d = std::max(d, relative_gap(E(s, x), E(*seq.limit, x)));
          devs.push_back(d);
        }
        out.conditions[id] = deviation_result(devs, opt.tol, "max relative gap of int phi(M_n) at declared x");
      } else {
        for (std::size_t n = 0; n + 1 < n_items; ++n) {
          double d = 0.0;
          for (double x : pts) d = std::max(d, relative_gap(E(items[n], x), E(items[n + 1], x)));
          devs.push_back(d);
        }
        out.conditions[id] = deviation_result(devs, opt.tol, "no limit given, Cauchy surrogate for int phi(M_n)");
      }
    }
  }
  return out;
}

ConvergenceReport check_conditions(const SpectrumSequence& seq, const std::vector<std::string>& which,
                                   const ConvergenceOptions& opt) {
  if (seq.items.size() < 3) throw InsufficientData("condition checks need at least three items");
  const auto& items = seq.items;
  const std::size_t n_items = items.size();
  ConvergenceReport out;

  // Deviation along the sequence of a functional evaluated on a point set.
  auto sequence_devs = [&](auto value) {
    std::vector<double> devs;
    if (seq.limit) {
      for (const auto& s : items) devs.push_back(value(s, &*seq.limit));
    } else {
      for (std::size_t n = 0; n + 1 < n_items; ++n) devs.push_back(value(items[n], &items[n + 1]));
    }
    return devs;
  };
  const std::string cauchy = seq.limit ? "" : "no limit given, Cauchy surrogate; ";
  const auto t_grid = ladder_or(opt.t_grid, 1.0 / 16.0, 2.0, 9);
  const auto lambdas = opt.lambda_grid.empty() ? std::vector<double>{-0.5, -1.0, -4.0} : opt.lambda_grid;

  for (const auto& id : which) {
    if (!is_spectrum_condition(id)) throw InvalidInput("not a spectrum condition: " + id);
    if (id == "A'") {
      std::vector<const SpectralMeasure*> all;
      for (const auto& s : items) all.push_back(&s);
      if (seq.limit) all.push_back(&*seq.limit);
      const auto grid = opt.xi_grid.empty() ? default_xi_grid(all, seq.limit ? &*seq.limit : nullptr) : opt.xi_grid;
      auto devs = sequence_devs([&](const SpectralMeasure& s, const SpectralMeasure* ref) {
        double d = 0.0;
        for (double xi : grid) d = std::max(d, relative_gap(cumulative_sigma(s, xi), cumulative_sigma(*ref, xi)));
        return d;
      });
      out.conditions[id] = deviation_result(devs, opt.tol, cauchy + "max relative gap of sigma_n(xi) on grid");
    } else if (id == "A''") {
      auto devs = sequence_devs([&](const SpectralMeasure& s, const SpectralMeasure* ref) {
        double d = 0.0;
        for (double t : t_grid) {
          const double pr = heat_trace(*ref, t);
          d = std::max(d, std::abs(heat_trace(s, t) - pr) / std::max(pr, 1e-300));
        }
        return d;
      });
      out.conditions[id] = deviation_result(devs, opt.tol, cauchy + "max relative gap of p_n(t) on t grid");
    } else if (id == "C'") {
      const auto& phi = need_phi(opt, id);
      const auto ladder = ladder_or(opt.N_ladder, 1.0, 2.0, 21);
      out.conditions[id] = tail_result(
          n_items, ladder, [&](std::size_t n, double N) { return S_tail(items[n], phi, N); }, opt.tol,
          "sup_n int_N^inf phi~ d sigma_n as N -> inf");
    } else if (id == "C''") {
      const auto& phi = need_phi(opt, id);
      const auto ladder = ladder_or(opt.eps_ladder, 1.0, 0.5, 21);
      out.conditions[id] = tail_result(
          n_items, ladder, [&](std::size_t n, double eps) { return heat_phi_integral(items[n], phi, 0.0, eps, 0.0); },
          opt.tol, "sup_n int_0^eps p_n phi as eps -> 0");
    } else if (id == "D'") {
      const auto& phi = need_phi(opt, id);
      auto devs = sequence_devs([&](const SpectralMeasure& s, const SpectralMeasure* ref) {
        double d = 0.0;
        for (double l : lambdas) d = std::max(d, relative_gap(S_shifted(s, phi, l), S_shifted(*ref, phi, l)));
        return d;
      });
      out.conditions[id] = deviation_result(devs, opt.tol, cauchy + "max relative gap of int phi~(xi - lambda) d sigma_n");
    } else {  // D''
      const auto& phi = need_phi(opt, id);
      auto W = [&](const SpectralMeasure& s, double l) {
        return heat_phi_integral(s, phi, 0.0, 1.0, l) + heat_phi_integral(s, phi, 1.0, kInf, l);
      };
      auto devs = sequence_devs([&](const SpectralMeasure& s, const SpectralMeasure* ref) {
        double d = 0.0;
        for (double l : lambdas) d = std::max(d, relative_gap(W(s, l), W(*ref, l)));
        return d;
      });
      out.conditions[id] = deviation_result(devs, opt.tol, cauchy + "max relative gap of int p_n phi e^{lambda t}");
    }
  }
  return out;
}

Report forward_continuity_harness(const StringSequence& seq, const ForwardOptions& opt) {
  if (seq.items.empty()) throw InvalidInput("empty string sequence");
  if (opt.points.empty()) throw InvalidInput("forward harness needs Green function points");
  Report r("forward_continuity");
  const auto& items = seq.items;

  auto green_dev = [&](const StieltjesString& a, const StieltjesString& b) {
    double d = 0.0;
    for (double lambda : opt.lambdas)
      for (std::size_t i = 0; i < opt.points.size(); ++i)
        for (std::size_t j = i; j < opt.points.size(); ++j) {
          const double gb = green(b, lambda, opt.points[i], opt.points[j]);
          d = std::max(d, std::abs(green(a, lambda, opt.points[i], opt.points[j]) - gb) / std::abs(gb));
        }
    return d;
  };
  auto sigma_of = [&](const StieltjesString& s) {
    return s.infinite_length() ? spectral_measure(s, opt.boundary) : spectral_measure(s);
  };

  std::vector<double> devs;
  if (seq.limit) {
    for (const auto& s : items) devs.push_back(green_dev(s, *seq.limit));
  } else {
    for (std::size_t n = 0; n + 1 < items.size(); ++n) devs.push_back(green_dev(items[n], items[n + 1]));
    r.note("no limit given; deviations are between consecutive items");
  }
  double min_ratio = kInf;
  bool monotone = true;
  for (std::size_t n = 0; n < devs.size(); ++n) {
    r.add("green_deviation_" + std::to_string(n), devs[n]);
    if (n > 0) {
      if (devs[n] > devs[n - 1]) monotone = false;
      if (devs[n] > 0.0) min_ratio = std::min(min_ratio, devs[n - 1] / devs[n]);
    }
  }
  r.add("min_ratio", min_ratio);
  r.require(monotone, "Green deviation decreases along the sequence");
  if (opt.min_ratio > 0.0 && devs.size() > 1)
    r.require(min_ratio >= opt.min_ratio, "Green deviation shrinks by at least " + fmt(opt.min_ratio) + " per step");

  // Spectral functions at continuity points of the limit.
  const StieltjesString& ref = seq.limit ? *seq.limit : items.back();
  const auto sigma_ref = sigma_of(ref);
  std::vector<double> xi_grid = opt.xi_grid;
  if (xi_grid.empty()) xi_grid = default_xi_grid({&sigma_ref}, &sigma_ref);
  for (std::size_t n = 0; n < items.size(); ++n) {
    const auto sn = sigma_of(items[n]);
    double d = 0.0;
    for (double xi : xi_grid) d = std::max(d, relative_gap(cumulative_sigma(sn, xi), cumulative_sigma(sigma_ref, xi)));
    r.add("sigma_deviation_" + std::to_string(n), d);
  }

  // liminf l_n >= l, read off the tail of the sequence.
  if (seq.limit) {
    double tail_min = kInf;
    for (std::size_t n = items.size() >= 3 ? items.size() - 3 : 0; n < items.size(); ++n)
      tail_min = std::min(tail_min, items[n].right_limit());
    const double l = seq.limit->right_limit();
    r.add("tail_min_l", tail_min);
    r.require(tail_min >= l - 1e-12 * (1.0 + std::abs(l)), "liminf l_n >= l");
  }
  return r;
}

Report inverse_continuity_harness(const SpectrumSequence& seq, const InverseOptions& opt) {
  if (seq.items.empty()) throw InvalidInput("empty spectrum sequence");
  Report r("inverse_continuity");
  std::vector<StieltjesString> strings;
  std::vector<double> M_at_l;
  for (const auto& s : seq.items) {
    if (s.is_closed_form()) throw InvalidInput("inverse harness needs atomic spectra");
    strings.push_back(reconstruct_from_spectrum(s, s.offset));
    const auto& m = strings.back();
    M_at_l.push_back(mass_integral_M(m, m.right_limit()));
  }
  for (std::size_t n = 0; n < M_at_l.size(); ++n) r.add("M_n(l_n)_" + std::to_string(n), M_at_l[n]);

  if (opt.phi) {
    double sup = 0.0;
    for (const auto& s : seq.items)
      sup = std::max(sup, integrate([&](double t) { return t > 0.0 ? heat_trace(s, t) * (*opt.phi)(t) : 0.0; }, 0.0, 1.0, 1e-8));
    r.add("sup_int_p_phi", sup);
    r.require(std::isfinite(sup), "sup_n int_0^1 p_n phi < inf");
  }

  const double M_max = *std::max_element(M_at_l.begin(), M_at_l.end());
  const bool shrinking = M_at_l.size() >= 3 && extrapolate_limit(M_at_l) <= 1e-3 * M_max;
  bool limit_trivial = !seq.limit;
  if (seq.limit) {
    double Xi = 0.0;
    for (const auto& s : seq.items)
      for (const auto& a : s.atoms) Xi = std::max(Xi, a.xi);
    limit_trivial = !(cumulative_sigma(*seq.limit, std::max(Xi, 1.0)) > 1e-12);
  }

  if (shrinking) {
    // M_n(l_n) -> 0 forces sigma_n -> 0.
    r.note("DegenerateLimit: M_n(l_n) -> 0, checking sigma_n -> 0");
    const auto grid = opt.xi_grid.empty() ? std::vector<double>{0.1, 1.0, 10.0} : opt.xi_grid;
    std::vector<double> vals;
    for (const auto& s : seq.items) {
      double v = 0.0;
      for (double xi : grid) v = std::max(v, cumulative_sigma(s, xi));
      vals.push_back(v);
    }
    const double ext = std::max(0.0, extrapolate_limit(vals));
    r.add("degenerate", 1.0);
    r.add("sigma_last", vals.back());
    r.add("sigma_extrapolated", ext);
    r.require(ext <= opt.tol, "sigma_n(xi) -> 0");
    return r;
  }
  if (limit_trivial) throw DegenerateLimit("limit spectral measure is trivial but M_n(l_n) does not vanish");

  const auto limit_string = reconstruct_from_spectrum(*seq.limit, seq.limit->offset);
  const double M_lim = mass_integral_M(limit_string, limit_string.right_limit());
  const double c = opt.c ? *opt.c : 0.5 * std::min(*std::min_element(M_at_l.begin(), M_at_l.end()), M_lim);
  r.add("c", c);
  const auto ref = normalize_to_Ec(limit_string, c);
  std::vector<StieltjesString> normalized;
  for (const auto& m : strings) normalized.push_back(normalize_to_Ec(m, c));
  std::vector<StieltjesString> all = normalized;
  all.push_back(ref);
  const auto grid = default_comparison_grid(all);

  std::vector<double> devs, pdevs;
  for (std::size_t n = 0; n < normalized.size(); ++n) {
    devs.push_back(compactified_distance(normalized[n], ref, grid));
    double pd = 0.0;
    for (double t : opt.t_grid) {
      const double p = heat_trace(*seq.limit, t);
      pd = std::max(pd, std::abs(heat_trace(seq.items[n], t) - p) / p);
    }
    pdevs.push_back(pd);
    r.add("string_deviation_" + std::to_string(n), devs.back());
    r.add("heat_deviation_" + std::to_string(n), pd);
  }
  // a ladder ending at the limit itself has its limit value in hand
  const auto& last = seq.items.back();
  const bool reaches_limit =
      last.offset == seq.limit->offset && last.atoms.size() == seq.limit->atoms.size() &&
      std::equal(last.atoms.begin(), last.atoms.end(), seq.limit->atoms.begin(),
                 [](const SpectralAtom& u, const SpectralAtom& v) { return u.xi == v.xi && u.weight == v.weight; });
  const double ext = reaches_limit ? devs.back() : std::max(0.0, extrapolate_limit(devs));
  const double pext = reaches_limit ? pdevs.back() : std::max(0.0, extrapolate_limit(pdevs));
  r.add("reaches_limit", reaches_limit ? 1.0 : 0.0);
  r.add("string_deviation_last", devs.back());
  r.add("string_deviation_extrapolated", ext);
  r.add("heat_deviation_last", pdevs.back());
  r.add("heat_deviation_extrapolated", pext);
  r.require(devs.back() <= opt.tol && ext <= opt.tol, "normalized strings converge in the compactified metric");
  r.require(pdevs.back() <= opt.tol && pext <= opt.tol, "p_n(t) -> p(t)");
  return r;
}

Report phi_space_equivalence_check(const StieltjesString& s, const ScaleFunction& phi) {
  Report r("phi_space_equivalence");
  const bool truncated = s.infinite_length();
  const auto sigma = truncated ? spectral_measure(s, s.right_support() + 1.0) : spectral_measure(s);
  if (truncated) r.note("l = inf; spectrum taken with a Dirichlet point one unit right of the last atom");
  const double a = s.size() > 1 ? 0.5 * (s.left_support() + s.right_support()) : s.right_support();
  const auto E = membership_E_phi(s, phi, a);
  const auto S = membership_S_phi(sigma, phi);
  r.add("E_phi", E.value);
  r.add("S_phi", S.value);
  r.add("E_finite", E.finite);
  r.add("S_finite", S.finite);
  r.require(E.finite == S.finite, "E_phi and S_phi agree on finiteness");
  return r;
}

Report phi_space_equivalence_check_alpha(double alpha, const ScaleFunction& phi) {
  Report r("phi_space_equivalence_alpha");
  const auto E = membership_E_phi_alpha(alpha, phi);
  const auto S = membership_S_phi(alpha_spectral_measure(alpha), phi);
  r.add("E_phi", E.value);
  r.add("S_phi", S.value);
  r.add("E_finite", E.finite);
  r.add("S_finite", S.finite);
  r.require(E.finite == S.finite, "E_phi and S_phi agree on finiteness");
  return r;
}

}  // namespace krein
