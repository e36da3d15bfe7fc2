#include "krein/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "krein/errors.hpp"
#include "krein/quadrature.hpp"

namespace krein {

StieltjesString discretize_alpha_string(const AlphaFamily& fam, double x_min, double x_max,
                                        std::size_t n_atoms) {
  if (n_atoms < 2) throw InvalidInput("discretization needs at least two atoms");
  if (!(x_min < x_max)) throw InvalidInput("discretization needs x_min < x_max");
  const double C = fam.C();
  const double b = fam.beta();
  std::vector<Atom> atoms;
  atoms.reserve(n_atoms);
  if (fam.left_sided()) {
    if (!(x_max < 0.0)) throw InvalidInput("alpha > 1 needs x_min < x_max < 0");
    // geometric in u = -x, from |x_min| down to |x_max|
    const double u0 = -x_min, u1 = -x_max;
    // the tail left of x_min has finite mass and first moment (entrance
    // condition); one atom at its centre of mass keeps M exact right of x_min
    atoms.push_back({-b / (b - 1.0) * u0, C * std::pow(u0, -b)});
    const std::size_t cells = n_atoms - 1;
    const double r = std::pow(u1 / u0, 1.0 / static_cast<double>(cells));
    double ua = u0;
    for (std::size_t j = 0; j < cells; ++j) {
      const double ub = (j + 1 == cells) ? u1 : ua * r;
      const double mass = C * (std::pow(ub, -b) - std::pow(ua, -b));
      const double moment = C * b / (b - 1.0) * (std::pow(ub, 1.0 - b) - std::pow(ua, 1.0 - b));
      atoms.push_back({-moment / mass, mass});
      ua = ub;
    }
  } else {
    if (!(x_min > 0.0)) throw InvalidInput("alpha < 1 needs 0 < x_min < x_max");
    const double g = -b;
    // first cell is (0, x_min]
    const double r = std::pow(x_max / x_min, 1.0 / static_cast<double>(n_atoms - 1));
    double xa = 0.0;
    for (std::size_t j = 0; j < n_atoms; ++j) {
      const double xb = j == 0 ? x_min : (j + 1 == n_atoms) ? x_max : xa * r;
      const double mass = C * (std::pow(xb, g) - std::pow(xa, g));
      const double moment = C * g / (g + 1.0) * (std::pow(xb, g + 1.0) - std::pow(xa, g + 1.0));
      atoms.push_back({moment / mass, mass});
      xa = xb;
    }
  }
  std::ostringstream label;
  label << "alpha=" << fam.alpha << " n=" << n_atoms;
  return StieltjesString(std::move(atoms), fam.right_limit(), label.str());
}

double closed_form_sigma(const AlphaFamily& fam, double xi) {
  if (!(xi >= 0.0)) throw DomainError("sigma needs xi >= 0");
  return alpha_sigma_constant(fam.alpha) * std::pow(xi, fam.alpha);
}

double closed_form_p(const AlphaFamily& fam, double t) {
  if (!(t > 0.0)) throw DomainError("heat trace needs t > 0");
  return alpha_heat_constant(fam.alpha) * std::pow(t, -fam.alpha);
}

SpectralMeasure nu_transform(const SpectralMeasure& sigma, double nu, double b) {
  if (!(nu > 0.0) || !(b > 0.0)) throw InvalidInput("nu transform needs nu, b > 0");
  if (sigma.is_closed_form()) throw InvalidInput("nu transform is for atomic measures");
  SpectralMeasure out;
  out.atoms.reserve(sigma.atoms.size());
  for (const auto& a : sigma.atoms) out.atoms.push_back({a.xi / b, a.weight / (nu * b)});
  out.offset = sigma.offset / nu;
  out.boundary = sigma.boundary / nu;
  return out;
}

// ---------------------------------------------------------------------------

double RegVarying::operator()(double u) const {
  if (!(u > 0.0)) throw DomainError("regularly varying function needs u > 0");
  if (q == 0.0) return c * std::pow(u, rho);
  if (!(u < 1.0)) throw DomainError("log factor needs u < 1");
  return c * std::pow(u, rho) * std::pow(-std::log(u), q);
}

double RegVarying::inverse(double v) const {
  if (!(v > 0.0)) throw DomainError("inverse needs v > 0");
  if (!(rho > 0.0)) throw DomainError("inverse needs rho > 0");
  if (q == 0.0) return std::pow(v / c, 1.0 / rho);
  // log phi as a function of s = log u is increasing for s well below -q/rho
  const double s_hi = std::min(-1e-9, -q / rho - 1.0);
  const double target = std::log(v);
  auto g = [&](double s) { return std::log(c) + rho * s + q * std::log(-s) - target; };
  if (g(s_hi) < 0.0) throw DomainError("value outside the monotone range of phi");
  double s_lo = s_hi - 1.0;
  while (g(s_lo) > 0.0) {
    s_lo = s_hi - 2.0 * (s_hi - s_lo);
    if (s_lo < -1e6) throw RootBracketFailure("phi inverse bracket failed");
  }
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve(g, s_lo, s_hi, tol, it);
  return std::exp(0.5 * (r.first + r.second));
}

double RegVarying::slowly_varying(double t) const {
  if (!(t > 1.0)) throw DomainError("slowly varying part needs t > 1");
  return q == 0.0 ? c : c * std::pow(std::log(t), q);
}

double RegVarying::epsilon(double t) const {
  if (!(t > 1.0)) throw DomainError("epsilon needs t > 1");
  return q / std::log(t);
}

double RegVarying::threshold(double delta) const {
  if (!(delta > 0.0)) throw InvalidInput("threshold needs delta > 0");
  if (q == 0.0) return 1.0;
  return std::max(std::exp(std::abs(q) / delta), std::exp(1.0));
}

// ---------------------------------------------------------------------------

WeightFunction WeightFunction::from_scale(const ScaleFunction& phi) {
  return {phi.describe(), [phi](double t) { return phi(t); }};
}

WeightFunction WeightFunction::subexponential(double c, double p) {
  if (!(c > 0.0) || !(p > 1.0)) throw InvalidInput("subexponential weight needs c > 0, p > 1");
  std::ostringstream name;
  name << "subexp:" << c << "," << p;
  return {name.str(), [c, p](double t) {
            if (t >= 1.0) return std::exp(0.0);
            if (t <= 0.0) return 0.0;
            return std::exp(-c * std::pow(-std::log(t), p));
          }};
}

double estimate_weight_exponent(const WeightFunction& w) {
  // log ratios are taken in log space where possible so tiny weights survive
  auto logw = [&](double t) { return std::log(w.f(t)); };
  double k = kInf;
  for (double t : {1e-3, 1e-4, 1e-6}) {
    for (int i = 0; i <= 40; ++i) {
      const double s = std::pow(10.0, -0.25 * i);
      const double num = logw(s * t) - logw(s);
      if (!std::isfinite(num)) continue;
      k = std::min(k, num / std::log(t));
    }
  }
  return k;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i)
    g.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
  return g;
}

struct LevelResult {
  std::size_t atoms = 0;
  double max_dev = 0.0;
  std::vector<double> ratios;
};

LevelResult t7_level(const AlphaFamily& fam, double x_min, double x_max, std::size_t n,
                     const std::vector<double>& ts) {
  const auto s = discretize_alpha_string(fam, x_min, x_max, n);
  const auto sigma = spectral_measure(s, fam.right_limit());
  LevelResult r;
  r.atoms = n;
  for (double t : ts) {
    const double q = heat_trace(sigma, t) / closed_form_p(fam, t);
    r.ratios.push_back(q);
    r.max_dev = std::isfinite(q) ? std::max(r.max_dev, std::abs(q - 1.0)) : kInf;
  }
  return r;
}

}  // namespace

Report verify_t7(const T7Params& p) {
  Report rep;
  rep.name = "asymptotics.t7";
  if (!(p.alpha >= 2.0)) throw PreconditionFailed("heat trace asymptotics needs alpha >= 2");
  if (!(p.k > p.alpha - 1.0)) throw PreconditionFailed("heat trace asymptotics needs k > alpha - 1");
  if (p.levels < 1) throw InvalidInput("t7 needs at least one refinement level");
  if (!(p.t_lo > 0.0) || !(p.t_hi > p.t_lo) || p.n_t < 1)
    throw InvalidInput("t7 needs 0 < t_lo < t_hi");
  const AlphaFamily fam(p.alpha);
  // int_{-inf}^{-1} M^k dx: M ~ (-x)^{-1/(alpha-1)} so finite iff k > alpha - 1
  rep.add("k", p.k);
  rep.add("alpha", p.alpha);
  const auto ts = log_grid(p.t_lo, p.t_hi, p.n_t);

  std::vector<std::future<LevelResult>> jobs;
  for (int lv = 0; lv < p.levels; ++lv) {
    const std::size_t n = std::max<std::size_t>(1, p.n_atoms >> (p.levels - 1 - lv));
    jobs.push_back(std::async(std::launch::async, t7_level, fam, p.x_min, p.x_max, n, ts));
  }
  std::vector<LevelResult> levels;
  for (auto& j : jobs) levels.push_back(j.get());

  for (const auto& lv : levels)
    rep.add("max_dev_n" + std::to_string(lv.atoms), lv.max_dev);
  const auto& fine = levels.back();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::ostringstream key;
    key << "ratio_t" << ts[i];
    rep.add(key.str(), fine.ratios[i]);
  }
  rep.require(fine.max_dev <= p.tol, "p(t) / p_alpha(t) within tolerance on the window");
  // Past a few hundred atoms the closed-form deviation sits on the truncation
  // floor, so refinement is judged by distance to the finest level.
  double prev = kInf;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j)
      d = std::max(d, std::abs(levels[i].ratios[j] / fine.ratios[j] - 1.0));
    if (!std::isfinite(d)) d = kInf;
    rep.add("self_dev_n" + std::to_string(levels[i].atoms), d);
    rep.require(d < prev, "deviation from the finest level shrinks under refinement");
    prev = d;
  }

  if (p.check_truncation) {
    const auto doubled = t7_level(fam, 2.0 * p.x_min, p.x_max, p.n_atoms, ts);
    double change = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
      change = std::max(change, std::abs(doubled.ratios[i] / fine.ratios[i] - 1.0));
    if (!std::isfinite(change)) change = kInf;
    rep.add("truncation_change", change);
    rep.require(change < 0.02, "doubling |x_min| changes the ratio by under 2%");
  }
  return rep;
}

Report verify_p1(const StieltjesString& s, double alpha, const RegVarying& rv,
                 const std::vector<double>& xi_ladder, double tol) {
  Report rep;
  rep.name = "asymptotics.p1";
  if (xi_ladder.empty()) throw InvalidInput("p1 needs a non-empty xi ladder");
  const double K = alpha_sigma_constant(alpha);
  const auto sigma = spectral_measure(s, s.infinite_length() ? std::optional<double>(s.right_support() + 1.0)
                                                             : std::nullopt);
  double last = 0.0;
  for (double xi : xi_ladder) {
    if (!(xi > 0.0)) throw InvalidInput("xi ladder entries must be positive");
    const double ratio = cumulative_sigma(sigma, xi) / (K * xi * rv(xi));
    std::ostringstream key;
    key << "ratio_xi" << xi;
    rep.add(key.str(), ratio);
    last = ratio;
  }
  rep.add("K", K);
  rep.add("final_deviation", std::abs(last - 1.0));
  rep.require(std::abs(last - 1.0) <= tol, "sigma(xi) / (K xi phi(xi)) at the smallest xi within tolerance");
  return rep;
}

Report verify_l12(const StieltjesString& s, const RegVarying& rv, const std::vector<double>& x_grid,
                  const std::vector<double>& lambda_ladder, double tol) {
  Report rep;
  rep.name = "asymptotics.l12";
  if (x_grid.empty() || lambda_ladder.empty()) throw InvalidInput("l12 needs x and lambda grids");
  const double alpha = rv.rho + 1.0;
  if (!(alpha > 1.0)) throw InvalidInput("l12 needs an exponent above 0");
  const double beta = alpha / (alpha - 1.0);
  const MassFunction M(s);
  const double aa = std::pow(alpha, alpha);
  auto target = [&](double x) { return aa * (1.0 - std::pow(x, -(alpha - 1.0))) / (alpha - 1.0); };
  auto Q = [&](double lam, double x) { return (M.inverse(lam * x) - M.inverse(lam)) / rv(1.0 / lam); };

  double x_top = *std::max_element(x_grid.begin(), x_grid.end());
  double last_q = 0.0, last_d = 0.0, last_m = 0.0;
  for (double lam : lambda_ladder) {
    if (!(lam > 0.0)) throw InvalidInput("lambda ladder entries must be positive");
    if (lam * x_top * 1.05 >= M.at_right_limit())
      throw DomainError("lambda * x exceeds the total of M on the truncated string");
    double dq = 0.0, dd = 0.0;
    for (double x : x_grid) {
      if (!(x > 0.0) || x == 1.0) continue;
      dq = std::max(dq, std::abs(Q(lam, x) / target(x) - 1.0));
      const double h = 0.02;
      const double deriv = (Q(lam, x * (1 + h)) - Q(lam, x * (1 - h))) / (2.0 * h * x);
      dd = std::max(dd, std::abs(deriv / (aa * std::pow(x, -alpha)) - 1.0));
    }
    // Eq-(19)-style density check at u = M^{-1}(lambda)
    const double u = M.inverse(lam);
    const double dm = std::abs(mass_m(s, u) * (-u) * rv.inverse(-u) / std::pow(beta, beta) - 1.0);
    std::ostringstream sfx;
    sfx << lam;
    rep.add("quotient_dev_lambda" + sfx.str(), dq);
    rep.add("density_dev_lambda" + sfx.str(), dd);
    rep.add("mass_dev_lambda" + sfx.str(), dm);
    last_q = dq;
    last_d = dd;
    last_m = dm;
  }
  rep.require(last_q <= tol, "quotient limit within tolerance at the largest lambda");
  rep.require(last_d <= 5.0 * tol, "derivative limit within tolerance at the largest lambda");
  rep.require(last_m <= 5.0 * tol, "mass density limit within tolerance at the largest lambda");
  return rep;
}

Report verify_l13_uniform(const SpectralMeasure& sigma, double alpha, const WeightFunction& w,
                          const RegVarying& rv, const std::vector<double>& nu_ladder,
                          double max_ratio) {
  Report rep;
  rep.name = "asymptotics.l13";
  if (sigma.is_closed_form()) throw InvalidInput("uniform bound needs an atomic measure");
  if (nu_ladder.empty()) throw InvalidInput("l13 needs a nu ladder");
  const double k = estimate_weight_exponent(w);
  rep.add("weight_exponent", std::isfinite(k) ? k : 1e300);
  if (!(k > alpha - 1.0))
    throw PreconditionFailed("weight grows too slowly near 0: exponent " + std::to_string(k) +
                             " is not above alpha - 1");

  std::vector<std::future<double>> jobs;
  for (double nu : nu_ladder) {
    if (!(nu > 0.0) || !(nu <= 1.0)) throw InvalidInput("nu ladder entries must lie in (0, 1]");
    jobs.push_back(std::async(std::launch::async, [&, nu] {
      const double b = rv.inverse(nu);
      double acc = 0.0;
      for (const auto& a : sigma.atoms) {
        const double c = a.xi / b;
        acc += a.weight * integrate([&](double t) { return std::exp(-t * c) * w.f(t); }, 0.0, 1.0, 1e-8);
      }
      return acc / (nu * b);
    }));
  }
  double lo = kInf, hi = 0.0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const double v = jobs[i].get();
    std::ostringstream key;
    key << "integral_nu" << nu_ladder[i];
    rep.add(key.str(), v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.add("sup", hi);
  rep.add("max_over_min", hi / lo);
  rep.require(std::isfinite(hi), "integrals finite along the ladder");
  rep.require(hi / lo <= max_ratio, "integrals bounded uniformly along the ladder");
  return rep;
}

}  // namespace krein
