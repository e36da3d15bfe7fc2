#include "krein/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "krein/asymptotics.hpp"
#include "krein/correspondence.hpp"
#include "krein/errors.hpp"
#include "krein/lemmas.hpp"
#include "krein/propagation.hpp"
#include "krein/scale.hpp"
#include "krein/spectral.hpp"
#include "krein/stochastic.hpp"

namespace krein {

StieltjesString random_test_string(CounterRng& rng, std::size_t n) {
  std::vector<Atom> atoms;
  double x = -2.0 + 4.0 * rng.uniform();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) x += 0.05 + rng.exponential();
    atoms.push_back({x, 0.05 + rng.exponential()});
  }
  const double l = x + 0.05 + rng.exponential();
  return StieltjesString(std::move(atoms), l, "random");
}

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail << "failed: " << what << "; ";
    pass = pass && ok;
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::size_t random_size(CounterRng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next() % (hi - lo + 1));
}

// 100 strings with 1..12 atoms; the Dirichlet point is the right limit.
std::vector<StieltjesString> corpus(std::uint64_t seed) {
  CounterRng rng(seed, 1);
  std::vector<StieltjesString> out;
  for (int i = 0; i < 100; ++i) out.push_back(random_test_string(rng, random_size(rng, 1, 12)));
  return out;
}

void c1_trace(Outcome& o, std::uint64_t seed) {
  CounterRng rng(seed, 11);
  double worst = 0.0;
  for (const auto& s : corpus(seed)) {
    // random a in (first atom, l]
    const double a = s.left_support() + (s.right_limit() - s.left_support()) * rng.uniform();
    if (s.count_below(a) == 0) continue;
    double acc = 0.0;
    for (double mu : dirichlet_eigenvalues(s, a)) acc += 1.0 / mu;
    worst = std::max(worst, rel(acc, mass_integral_M(s, a)));
  }
  o.detail << "max rel " << worst << "; ";
  o.check(worst <= 1e-10, "trace identity");
}

void c2_product(Outcome& o, std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& s : corpus(seed)) {
    const double a = s.right_limit();
    const auto mu = dirichlet_eigenvalues(s, a);
    for (double lam : {-0.1, -1.0, -10.0, -100.0}) {
      double prod = 1.0;
      for (double m : mu) prod *= 1.0 - lam / m;
      worst = std::max(worst, rel(phi(s, lam, a).value, prod));
    }
  }
  o.detail << "max rel " << worst << "; ";
  o.check(worst <= 1e-8, "product formula");
}

void c3_parseval(Outcome& o, std::uint64_t seed) {
  CounterRng rng(seed, 13);
  double worst = 0.0;
  for (const auto& s : corpus(seed)) {
    const auto sigma = spectral_measure(s);
    std::vector<double> f(s.size());
    double lhs = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      f[i] = 2.0 * rng.uniform() - 1.0;
      lhs += f[i] * f[i] * s.atoms()[i].w;
    }
    const auto F = fourier_transform(s, f, sigma);
    double rhs = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) rhs += F[k] * F[k] * sigma.atoms[k].weight;
    worst = std::max(worst, rel(rhs, lhs));
  }
  o.detail << "max rel defect " << worst << "; ";
  o.check(worst <= 1e-9, "Parseval");
}

void c4_green(Outcome& o, std::uint64_t seed) {
  CounterRng rng(seed, 14);
  const auto strings = corpus(seed);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto& s = strings[static_cast<std::size_t>(k)];
    const auto sigma = spectral_measure(s);
    const double lam = -std::exp(4.0 * rng.uniform() - 2.0);
    const double x = s.atoms()[random_size(rng, 0, s.size() - 1)].x;
    const double y = s.atoms()[random_size(rng, 0, s.size() - 1)].x;
    worst = std::max(worst, rel(green_spectral(s, sigma, lam, x, y), green(s, lam, x, y)));
  }
  o.detail << "max rel " << worst << "; ";
  o.check(worst <= 1e-8, "Green expansion");
}

void c5_roundtrip(Outcome& o, std::uint64_t seed) {
  CounterRng rng(seed, 15);
  double spec = 0.0, pos = 0.0, mass = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto s = random_test_string(rng, 5);
    const auto sigma = spectral_measure(s);
    const auto rec = reconstruct_from_spectrum(sigma, sigma.offset);
    spec = std::max(spec, spectral_deviation(sigma, spectral_measure(rec)));
    const auto al = align_strings(s, rec);
    pos = std::max(pos, al.max_position_deviation);
    mass = std::max(mass, std::max(al.max_mass_deviation, al.right_limit_deviation));
  }
  o.detail << "spectrum " << spec << ", position " << pos << ", mass " << mass << "; ";
  o.check(spec <= 1e-6, "spectrum round trip");
  o.check(pos <= 1e-6 && mass <= 1e-6, "string equal up to translation");
}

void c6_shift(Outcome& o, std::uint64_t seed) {
  CounterRng rng(seed, 16);
  double worst = 0.0;
  for (const auto& s : corpus(seed)) {
    const double c = 20.0 * rng.uniform() - 10.0;
    worst = std::max(worst, spectral_deviation(spectral_measure(s), spectral_measure(shift(s, c))));
  }
  o.detail << "max deviation " << worst << "; ";
  o.check(worst <= 1e-10, "shift invariance");
}

void c7_scaling(Outcome& o, std::uint64_t seed) {
  CounterRng rng(seed, 17);
  double sig = 0.0, heat = 0.0;
  for (const auto& s : corpus(seed)) {
    const double nu = std::exp(4.0 * rng.uniform() - 2.0);
    const AlphaFamily fam(2.0 + 2.0 * rng.uniform());
    const double b = fam.rv_inverse(nu);
    const auto sigma = spectral_measure(s);
    const auto direct = spectral_measure(nu_scaling(s, nu, b));
    sig = std::max(sig, spectral_deviation(direct, nu_transform(sigma, nu, b)));
    for (double t : {0.1, 1.0, 10.0})
      heat = std::max(heat, rel(heat_trace(direct, t), heat_trace(sigma, t / b) / (nu * b)));
  }
  o.detail << "sigma " << sig << ", heat " << heat << "; ";
  o.check(sig <= 1e-10, "sigma_nu transform");
  o.check(heat <= 1e-10, "heat trace covariance");
}

void c8_lemmas(Outcome& o, std::uint64_t seed) {
  CounterRng rng(seed, 18);
  const std::vector<ScaleFunction> phis{ScaleFunction::power(1.0), ScaleFunction::power(2.0),
                                        ScaleFunction::power(3.0), ScaleFunction::power_log(2.0, 10.0)};
  std::vector<double> cphi;
  for (const auto& p : phis) cphi.push_back(c_phi(p));
  int failures = 0;
  double worst = kInf;
  for (const auto& s : corpus(seed)) {
    const double u = 0.02 + 0.96 * rng.uniform();
    const double a = s.left_support() + (s.right_limit() - s.left_support()) * u;
    const double lam = -std::exp(4.0 * rng.uniform() - 2.0);
    const auto l2 = verify_lemma_l2(s, a, lam);
    const std::size_t k = random_size(rng, 0, phis.size() - 1);
    const auto l11 = verify_lemma_l11(s, spectral_measure(s), phis[k], lam, a, cphi[k]);
    if (!l2.pass || !l11.pass) ++failures;
    for (const char* key : {"margin_lower", "margin_upper"}) worst = std::min(worst, l2.get(key));
    for (const char* key : {"margin_lower", "margin_upper", "margin_split"}) worst = std::min(worst, l11.get(key));
  }
  o.detail << "min margin " << worst << ", failing configs " << failures << "; ";
  o.check(failures == 0 && worst >= -1e-12, "lemma margins");
}

void c9_monte_carlo(Outcome& o, std::uint64_t seed) {
  McParams mc;
  mc.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  const StieltjesString single({{0.0, 2.0}}, kInf, "single");
  const auto r = verify_eq10(single, 1.0, -1.0, mc);
  o.detail << "single atom z " << r.get("z_score") << "; ";
  o.check(std::abs(r.get("exact") - 1.0 / 9.0) <= 1e-15, "exact value 1/9");
  o.check(r.pass, "single atom within 4 SE");
  CounterRng rng(seed, 19);
  for (int k = 0; k < 5; ++k) {
    const auto s = random_test_string(rng, random_size(rng, 1, 8));
    const double lam = -std::exp(2.0 * rng.uniform() - 1.0);
    McParams m = mc;
    m.seed = seed + static_cast<std::uint64_t>(k) + 1;
    o.check(verify_eq10(s, s.right_limit(), lam, m).pass, "random string within 4 SE");
  }
  const double eq10_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << "eq10 " << std::setprecision(3) << eq10_seconds << " s; " << std::setprecision(6);
  o.check(eq10_seconds < 10.0, "Monte Carlo runtime under 10 s");

  const StieltjesString s({{-1.0, 0.5}, {0.0, 1.0}, {0.7, 0.8}}, 1.5, "three");
  const auto r32 = verify_eq32(s, s.right_limit(), -1.0, ScaleFunction::power(2.0), mc);
  o.detail << "eq32 z " << r32.get("z_score") << "; ";
  o.check(r32.pass, "Eq32 within 4 SE");

  Eq26Params p;
  p.eps = 0.05;
  p.f = [](double t) { return t < 0.05 ? 0.0 : std::exp(-t); };
  McParams m26 = mc;
  m26.samples = 100000;
  const auto r26 = verify_eq26(s, p, m26);
  o.detail << "eq26 rel " << r26.get("relative_difference") << "; ";
  o.check(r26.pass, "Eq26 within 5%");
}

void c10_closed_forms(Outcome& o, std::uint64_t) {
  const double p2 = closed_form_p(AlphaFamily(2.0), 1.0);
  const double p3 = closed_form_p(AlphaFamily(3.0), 1.0);
  o.detail << "p_2(1) " << p2 << ", p_3(1) " << p3 << "; ";
  o.check(std::abs(p2 - 8.0) <= 1e-12 && std::abs(p3 - 121.5) <= 1e-10, "closed-form heat traces");
  T7Params t;
  t.tol = 0.1;
  const auto r = verify_t7(t);
  o.detail << "max dev " << r.get("max_dev_n2000") << ", truncation " << r.get("truncation_change") << "; ";
  for (const auto& n : r.notes) o.detail << n << "; ";
  o.check(r.pass, "discretized heat trace in band with monotone refinement");
}

void c11_small_xi(Outcome& o, std::uint64_t) {
  const auto s = discretize_alpha_string(AlphaFamily(2.0), -50.0, -1e-7, 2000);
  const auto r = verify_p1(s, 2.0, RegVarying{1.0, 1.0, 0.0}, {1e-1, 1e-2, 1e-3}, 0.05);
  o.detail << "ratio at 1e-3 " << r.get("ratio_xi0.001") << "; ";
  o.check(r.pass, "sigma(xi) / 4 xi^2 within 5%");
}

void c12_forward(Outcome& o, std::uint64_t) {
  // unit density on [-1, 0), 2^k cells with the mass at each midpoint
  auto level = [](int k) {
    const std::size_t n = std::size_t{1} << k;
    const double h = 1.0 / static_cast<double>(n);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < n; ++i) atoms.push_back({-1.0 + (static_cast<double>(i) + 0.5) * h, h});
    return StieltjesString(std::move(atoms), 0.0, "level" + std::to_string(k));
  };
  StringSequence seq;
  for (int k = 2; k <= 7; ++k) seq.items.push_back(level(k));
  seq.limit = level(10);
  ForwardOptions opt;
  opt.points = {-0.75, -0.5, -0.25};
  opt.xi_grid = {1.0, 30.0, 100.0};
  const auto r = forward_continuity_harness(seq, opt);
  o.detail << "min ratio " << r.get("min_ratio") << "; ";
  o.check(r.pass, "Green deviation halves per level");
}

void c13_inverse(Outcome& o, std::uint64_t seed) {
  CounterRng rng(seed, 113);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto s = random_test_string(rng, 6);
    const auto sigma = spectral_measure(s);
    SpectrumSequence seq;
    for (std::size_t n = 1; n <= sigma.atoms.size(); ++n) {
      SpectralMeasure t = sigma;
      t.atoms.resize(n);
      seq.items.push_back(t);
    }
    seq.limit = sigma;
    const auto r = inverse_continuity_harness(seq, {});
    worst = std::max(worst, r.get("string_deviation_last"));
    o.check(r.pass, "truncated spectra recover the limit string");
  }
  o.detail << "max deviation at full spectrum " << worst << "; ";
  o.check(worst <= 1e-6, "compactified deviation");
}

void c14_uniform(Outcome& o, std::uint64_t) {
  const auto s = discretize_alpha_string(AlphaFamily(2.0), -50.0, -1e-4, 1000);
  const auto r = verify_l13_uniform(spectral_measure(s), 2.0,
                                    WeightFunction::from_scale(ScaleFunction::power(2.0)),
                                    RegVarying{1.0, 1.0, 0.0}, {1.0, 0.5, 0.1, 0.01}, 10.0);
  o.detail << "max/min " << r.get("max_over_min") << "; ";
  o.check(r.pass, "uniform bound along the nu ladder");
}

struct Criterion {
  int id;
  const char* title;
  double time_limit;
  void (*run)(Outcome&, std::uint64_t);
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "trace identity", 1.0, c1_trace},
      {2, "product formula", 0.0, c2_product},
      {3, "Parseval identity", 0.0, c3_parseval},
      {4, "Green spectral expansion", 0.0, c4_green},
      {5, "spectrum round trip", 0.0, c5_roundtrip},
      {6, "shift invariance", 0.0, c6_shift},
      {7, "scaling covariance", 0.0, c7_scaling},
      {8, "trace sandwich and heat bounds", 0.0, c8_lemmas},
      {9, "Monte Carlo identities", 0.0, c9_monte_carlo},
      {10, "power-law heat trace", 60.0, c10_closed_forms},
      {11, "small-xi spectral constant", 0.0, c11_small_xi},
      {12, "forward continuity", 0.0, c12_forward},
      {13, "inverse continuity", 0.0, c13_inverse},
      {14, "uniform heat bound", 0.0, c14_uniform},
  };
  return list;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out, const AcceptanceOptions& opt) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), c.id) == opt.only.end()) continue;
    Outcome o;
    o.detail << std::setprecision(6);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o, opt.seed);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0) o.check(secs < c.time_limit, "runtime limit");
    CriterionResult r{c.id, c.title, o.pass, secs, o.detail.str()};
    out << (r.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << r.title << "  ("
        << std::fixed << std::setprecision(2) << r.seconds << " s)  " << std::defaultfloat << r.detail
        << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace krein
