#include "krein/scale.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "krein/alpha_family.hpp"
#include "krein/errors.hpp"
#include "krein/quadrature.hpp"

namespace krein {

namespace {

constexpr double kTailFloor = -4e10;

}  // namespace

ScaleFunction ScaleFunction::power(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha))
    throw InvalidInput("power scale function needs alpha >= 1");
  ScaleFunction f;
  f.family_ = Family::Power;
  f.alpha_ = alpha;
  f.phi1_ = 1.0;
  f.slope1_ = alpha;
  return f;
}

ScaleFunction ScaleFunction::power_log(double alpha, double c) {
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    throw InvalidInput("power-log scale function needs alpha > 1");
  // phi'' = x^{alpha-2} (alpha (alpha-1) (c - log x) - (2 alpha - 1)), smallest at x = 1
  const double c_min = (2.0 * alpha - 1.0) / (alpha * (alpha - 1.0));
  if (!(c >= c_min) || !(alpha * c > 1.0))
    throw InvalidInput("power-log scale function is not convex for this c");
  ScaleFunction f;
  f.family_ = Family::PowerLog;
  f.alpha_ = alpha;
  f.c_ = c;
  f.phi1_ = c;
  f.slope1_ = alpha * c - 1.0;
  return f;
}

ScaleFunction ScaleFunction::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw InvalidInput("tabulated scale function needs two samples");
  if (samples.front().first != 0.0 || samples.front().second != 0.0)
    throw InvalidInput("tabulated scale function must start at (0, 0)");
  if (samples.back().first != 1.0) throw InvalidInput("tabulated scale function must end at x = 1");
  ScaleFunction f;
  f.family_ = Family::Tabulated;
  double prev_slope = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [x, y] = samples[i];
    if (!std::isfinite(x) || !std::isfinite(y)) throw InvalidInput("non-finite sample");
    if (i > 0) {
      const double dx = x - samples[i - 1].first;
      const double dy = y - samples[i - 1].second;
      if (!(dx > 0.0)) throw InvalidInput("tabulated x values must increase");
      const double slope = dy / dx;
      if (!(slope > 0.0)) throw InvalidInput("tabulated scale function must increase");
      if (slope < prev_slope * (1.0 - 1e-12)) throw InvalidInput("tabulated scale function is not convex");
      prev_slope = slope;
    }
    f.xs_.push_back(x);
    f.ys_.push_back(y);
  }
  f.cum_.assign(f.xs_.size(), 0.0);
  for (std::size_t i = 1; i < f.xs_.size(); ++i)
    f.cum_[i] = f.cum_[i - 1] + 0.5 * (f.ys_[i] + f.ys_[i - 1]) * (f.xs_[i] - f.xs_[i - 1]);
  f.phi1_ = f.ys_.back();
  f.slope1_ = prev_slope;
  return f;
}

ScaleFunction ScaleFunction::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidInput("scale function spec needs 'family:params': " + spec);
  const std::string fam = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  auto to_double = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad number in scale function spec: " + t);
    }
    if (used != t.size()) throw InvalidInput("bad number in scale function spec: " + t);
    return v;
  };
  if (fam == "power") return power(to_double(rest));
  if (fam == "powerlog") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw InvalidInput("powerlog needs 'alpha,c'");
    return power_log(to_double(rest.substr(0, comma)), to_double(rest.substr(comma + 1)));
  }
  if (fam == "table") {
    std::ifstream in(rest);
    if (!in) throw InvalidInput("cannot open " + rest);
    std::vector<std::pair<double, double>> samples;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double x, y;
      if (!(ls >> x >> y)) {
        if (samples.empty()) continue;  // header row
        throw InvalidInput("bad row in " + rest + ": " + line);
      }
      samples.emplace_back(x, y);
    }
    return tabulated(std::move(samples));
  }
  throw InvalidInput("unknown scale function family: " + fam);
}

double ScaleFunction::base(double x) const {
  switch (family_) {
    case Family::Power:
      return std::pow(x, alpha_);
    case Family::PowerLog:
      return x == 0.0 ? 0.0 : std::pow(x, alpha_) * (c_ - std::log(x));
    case Family::Tabulated: {
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - xs_.begin(), 1), xs_.size() - 1);
      const double t = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
      return ys_[k - 1] + t * (ys_[k] - ys_[k - 1]);
    }
  }
  return 0.0;
}

double ScaleFunction::operator()(double x) const {
  if (!(x >= 0.0)) throw DomainError("scale function evaluated at a negative point");
  if (x <= 1.0) return base(x);
  return phi1_ + slope1_ * (x - 1.0);
}

double ScaleFunction::log_at_exp(double s) const {
  if (s > 0.0) {
    if (s > 700.0) return s + std::log(slope1_) + std::log1p((phi1_ - slope1_) * std::exp(-s) / slope1_);
    return std::log(phi1_ + slope1_ * std::expm1(s));
  }
  switch (family_) {
    case Family::Power:
      return alpha_ * s;
    case Family::PowerLog:
      return alpha_ * s + std::log(c_ - s);
    case Family::Tabulated:
      if (s <= std::log(xs_[1])) return std::log(ys_[1] / xs_[1]) + s;
      return std::log(base(std::exp(s)));
  }
  return 0.0;
}

double ScaleFunction::antiderivative(double u) const {
  if (!(u >= 0.0)) throw DomainError("scale function antiderivative at a negative point");
  auto inner = [&](double v) {
    switch (family_) {
      case Family::Power:
        return std::pow(v, alpha_ + 1.0) / (alpha_ + 1.0);
      case Family::PowerLog: {
        if (v == 0.0) return 0.0;
        const double a1 = alpha_ + 1.0;
        return std::pow(v, a1) / a1 * (c_ - std::log(v) + 1.0 / a1);
      }
      case Family::Tabulated: {
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), v);
        const std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - xs_.begin(), 1), xs_.size() - 1);
        const double yv = base(v);
        return cum_[k - 1] + 0.5 * (ys_[k - 1] + yv) * (v - xs_[k - 1]);
      }
    }
    return 0.0;
  };
  if (u <= 1.0) return inner(u);
  const double d = u - 1.0;
  return inner(1.0) + phi1_ * d + 0.5 * slope1_ * d * d;
}

double ScaleFunction::exponent_at_zero() const {
  return family_ == Family::Tabulated ? 1.0 : alpha_;
}

std::string ScaleFunction::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::Power:
      os << "power(" << alpha_ << ")";
      break;
    case Family::PowerLog:
      os << "powerlog(" << alpha_ << "," << c_ << ")";
      break;
    case Family::Tabulated:
      os << "table(" << xs_.size() << " samples)";
      break;
  }
  return os.str();
}

namespace {

// Extremum of log phi(x e^s) - log phi(e^s) over s in (-inf, s_hi]. The
// ratio is scanned on a uniform grid, refined by golden section next to the
// best grid point, and followed towards y -> 0 by doubling |s|.
double extremal_log_ratio(const ScaleFunction& phi, double x, double s_hi, bool want_max,
                          bool include_infinity, const SupOptions& opt) {
  const double lx = std::log(x);
  auto f = [&](double s) {
    const double v = phi.log_at_exp(s + lx) - phi.log_at_exp(s);
    return want_max ? v : -v;
  };
  const double s_lo = -60.0;
  const int n = std::max(opt.grid_points, 11);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = s_lo + (s_hi - s_lo) * i / (n - 1);
  for (double kink : {0.0, -lx})
    if (kink > s_lo && kink < s_hi) grid.push_back(kink);
  std::sort(grid.begin(), grid.end());

  std::size_t best_i = 0;
  double best = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i > 0 && best_i + 1 < grid.size()) {
    double a = grid[best_i - 1], b = grid[best_i + 1];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && b - a > 1e-12 * (1.0 + std::abs(a)); ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    best = std::max({best, fc, fd});
  }

  // y -> infinity: both arguments sit on the linear extension, ratio -> x.
  if (include_infinity) best = std::max(best, want_max ? lx : -lx);

  // y -> 0.
  double prev = f(s_lo);
  double prev2 = prev;
  bool settled = false;
  int monotone_run = 0;
  for (double s = 2.0 * s_lo; s >= kTailFloor; s *= 2.0) {
    const double v = f(s);
    best = std::max(best, v);
    const double change = v - prev;
    monotone_run = (change > 0.0 && prev - prev2 >= 0.0) ? monotone_run + 1 : 0;
    if (std::abs(change) <= opt.rel_tol * 1e-2 * std::max(1.0, std::abs(v))) {
      // Errors decaying like 1/|s| halve per doubling; extrapolate once.
      if (monotone_run >= 2) best = std::max(best, v + change);
      settled = true;
      break;
    }
    prev2 = prev;
    prev = v;
  }
  if (!settled)
    throw NonFiniteSup("ratio phi(xy)/phi(y) does not settle as y -> 0 (x = " + std::to_string(x) + ")");
  return want_max ? best : -best;
}

}  // namespace

double c_plus(const ScaleFunction& phi, double x, const SupOptions& opt) {
  if (!(x > 0.0)) throw DomainError("C+ needs x > 0");
  if (x == 1.0) return 1.0;
  const double s_hi = std::log(opt.y_max);
  return std::exp(extremal_log_ratio(phi, x, s_hi, true, true, opt));
}

double c_minus(const ScaleFunction& phi, double x, const SupOptions& opt) {
  if (!(x > 0.0)) throw DomainError("C- needs x > 0");
  if (x == 1.0) return 1.0;
  return std::exp(extremal_log_ratio(phi, x, 0.0, false, false, opt));
}

double alpha_plus(const ScaleFunction& phi, double x_max, const SupOptions& opt) {
  double best = 0.0;
  const int n = 119;
  for (int i = 0; i <= n; ++i) {
    const double x = 1.0 + 1e-9 + (x_max - 1.0) * i / n;
    best = std::max(best, std::log(c_plus(phi, std::exp(x), opt)) / x);
  }
  return best;
}

double c_phi(const ScaleFunction& phi, const SupOptions& opt) {
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    return t * std::exp(-t) * c_plus(phi, 0.5 * t, opt);
  };
  double T = 40.0;
  while (integrand(T) > 1e-18 && T < 1e4) T *= 1.5;
  return integrate(integrand, 0.0, 2.0, 1e-9) + integrate(integrand, 2.0, T, 1e-9);
}

ScaleConstants scale_constants(const ScaleFunction& phi, const SupOptions& opt) {
  ScaleConstants out;
  out.C_plus = [phi, opt](double x) { return c_plus(phi, x, opt); };
  out.C_minus = [phi, opt](double x) { return c_minus(phi, x, opt); };
  out.alpha_plus = alpha_plus(phi, 60.0, opt);
  out.C_phi = c_phi(phi, opt);
  return out;
}

double phi_tilde(const ScaleFunction& phi, double xi) {
  if (!(xi > 0.0)) throw DomainError("phi~ needs xi > 0");
  auto f = [&](double t) { return std::exp(-t * xi) * phi(t); };
  const double cut = std::min(1.0, 50.0 / xi);
  double head = integrate(f, 0.0, cut, 1e-11);
  if (cut < 1.0) head += integrate(f, cut, 1.0, 1e-11);
  const double tail = std::exp(-xi) * (phi.value_at_one() / xi + phi.slope_at_one() / (xi * xi));
  return head + tail;
}

Membership membership_E_phi(const StieltjesString& s, const ScaleFunction& phi, double a) {
  if (a > s.right_limit()) throw DomainError("E_phi upper limit beyond l");
  const auto& atoms = s.atoms();
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size() && atoms[i].x < a; ++i) {
    const double x0 = atoms[i].x;
    const double x1 = (i + 1 < atoms.size()) ? std::min(atoms[i + 1].x, a) : a;
    if (!(x1 > x0)) continue;
    const double slope = s.cumulative_mass(i + 1);
    const double u0 = mass_integral_M(s, x0);
    const double u1 = mass_integral_M(s, x1);
    total += (phi.antiderivative(u1) - phi.antiderivative(u0)) / slope;
  }
  return {std::isfinite(total), total};
}

Membership membership_E_phi_alpha(double alpha, const ScaleFunction& phi, double a) {
  AlphaFamily fam(alpha);
  if (!fam.left_sided()) throw DomainError("E_phi for the alpha family is implemented for alpha > 1");
  if (!(a < 0.0)) throw DomainError("E_phi upper limit must lie left of l = 0");
  // Near -inf, M ~ (-x)^{1-beta} and phi(M) ~ M^k: finite iff k (beta - 1) > 1.
  const double k = phi.exponent_at_zero();
  if (!(k * (fam.beta() - 1.0) > 1.0)) return {false, kInf};
  const double v = integrate([&](double x) { return phi(fam.M(x)); }, -kInf, a, 1e-9);
  return {true, v};
}

Membership membership_S_phi(const SpectralMeasure& sigma, const ScaleFunction& phi) {
  if (sigma.is_closed_form()) {
    const double alpha = sigma.closed_form->alpha;
    // phi~(xi) ~ phi(1/xi) / xi at infinity; against alpha xi^{alpha-1} d xi
    // this converges iff the exponent of phi at 0 exceeds alpha - 1.
    if (!(phi.exponent_at_zero() > alpha - 1.0)) return {false, kInf};
    const double K = alpha_sigma_constant(alpha);
    const double v = integrate(
        [&](double xi) { return phi_tilde(phi, xi) * K * alpha * std::pow(xi, alpha - 1.0); }, 1.0,
        kInf, 1e-8);
    return {true, v};
  }
  double total = 0.0;
  for (const auto& at : sigma.atoms)
    if (at.xi >= 1.0) total += phi_tilde(phi, at.xi) * at.weight;
  return {std::isfinite(total), total};
}

}  // namespace krein
