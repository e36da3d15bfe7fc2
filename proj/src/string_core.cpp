#include "krein/string_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "krein/errors.hpp"

namespace krein {

StieltjesString::StieltjesString(std::vector<Atom> atoms, double right_limit, std::string label)
    : atoms_(std::move(atoms)), right_limit_(right_limit), label_(std::move(label)) {
  if (atoms_.empty()) throw InvalidInput("string must carry at least one atom");
  if (std::isnan(right_limit_) || right_limit_ == -kInf)
    throw InvalidInput("right limit must be a real number or +inf");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.x)) throw InvalidInput("atom position must be finite");
    if (!(a.w > 0.0) || !std::isfinite(a.w)) {
      std::ostringstream msg;
      msg << "atom " << i << " has non-positive or non-finite mass " << a.w;
      throw InvalidInput(msg.str());
    }
    if (i > 0 && !(atoms_[i - 1].x < a.x))
      throw InvalidInput("atom positions must be strictly increasing");
  }
  if (!(atoms_.back().x < right_limit_))
    throw InvalidInput("every atom must lie strictly left of the right limit");

  cum_mass_.resize(atoms_.size() + 1, 0.0);
  cum_moment_.resize(atoms_.size() + 1, 0.0);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    cum_mass_[i + 1] = cum_mass_[i] + atoms_[i].w;
    cum_moment_[i + 1] = cum_moment_[i] + atoms_[i].w * atoms_[i].x;
  }
}

std::size_t StieltjesString::count_at_or_below(double x) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                             [](double v, const Atom& a) { return v < a.x; });
  return static_cast<std::size_t>(it - atoms_.begin());
}

std::size_t StieltjesString::count_below(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.x < v; });
  return static_cast<std::size_t>(it - atoms_.begin());
}

StieltjesString StieltjesString::with_label(std::string label) const {
  return StieltjesString(atoms_, right_limit_, std::move(label));
}

double mass_m(const StieltjesString& s, double x) {
  if (x >= s.right_limit()) return kInf;
  return s.cumulative_mass(s.count_at_or_below(x));
}

double mass_integral_M(const StieltjesString& s, double x) {
  if (x > s.right_limit()) return kInf;
  if (x == kInf) return kInf;
  const std::size_t k = s.count_at_or_below(x);
  if (k == 0) return 0.0;
  // Sum of w_i (x - x_i); the closed form W x - S loses digits when x is far
  // from the atoms, so fall back to the direct sum for small strings.
  if (k <= 16) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += s.atoms()[i].w * (x - s.atoms()[i].x);
    return acc;
  }
  return std::max(0.0, s.cumulative_mass(k) * x - s.cumulative_moment(k));
}

MassFunction::MassFunction(const StieltjesString& s) : s_(s) {
  const auto& atoms = s.atoms();
  at_atoms_.resize(atoms.size());
  double value = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) value += s.cumulative_mass(i) * (atoms[i].x - atoms[i - 1].x);
    at_atoms_[i] = value;
  }
  at_l_ = s.infinite_length()
              ? kInf
              : at_atoms_.back() + s.total_mass() * (s.right_limit() - atoms.back().x);
}

double MassFunction::inverse(double u) const {
  if (!(u > 0.0)) throw DomainError("M^{-1} is only defined for positive arguments");
  if (u > at_l_) throw DomainError("argument exceeds M(l)");
  const auto& atoms = s_.atoms();
  // First atom index whose M value is >= u; the piece to its left is active.
  auto it = std::lower_bound(at_atoms_.begin(), at_atoms_.end(), u);
  std::size_t k = static_cast<std::size_t>(it - at_atoms_.begin());
  if (k == 0) k = 1;
  const std::size_t left = k - 1;
  const double slope = s_.cumulative_mass(left + 1);
  double x = atoms[left].x + (u - at_atoms_[left]) / slope;
  if (k < atoms.size()) x = std::min(x, atoms[k].x);
  return std::min(x, s_.right_limit());
}

StieltjesString shift(const StieltjesString& s, double a) {
  std::vector<Atom> atoms = s.atoms();
  for (auto& at : atoms) at.x -= a;
  return StieltjesString(std::move(atoms), s.right_limit() - a, s.label());
}

StieltjesString scale(const StieltjesString& s, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("scale factors must be positive");
  std::vector<Atom> atoms = s.atoms();
  for (auto& at : atoms) {
    at.x /= a;
    at.w *= a * b;
  }
  return StieltjesString(std::move(atoms), s.right_limit() / a, s.label());
}

StieltjesString nu_scaling(const StieltjesString& s, double nu, double phi_inv_at_nu) {
  return scale(s, nu, phi_inv_at_nu);
}

StieltjesString normalize_to_Ec(const StieltjesString& s, double c) {
  if (!(c > 0.0)) throw InvalidInput("normalization level must be positive");
  MassFunction M(s);
  if (M.at_right_limit() < c) {
    std::ostringstream msg;
    msg << "M(l) = " << M.at_right_limit() << " is below the normalization level " << c;
    throw NormalizationImpossible(msg.str());
  }
  const double at_zero = mass_integral_M(s, 0.0);
  if (std::isfinite(at_zero) && std::abs(at_zero - c) <= 4.0 * std::numeric_limits<double>::epsilon() * c)
    return s;
  return shift(s, M.inverse(c));
}

double compactified_mass(const StieltjesString& s, double x) {
  const double m = mass_m(s, x);
  if (m == kInf) return 1.0;
  return 2.0 / std::numbers::pi * std::atan(m);
}

double compactified_distance(const StieltjesString& s1, const StieltjesString& s2,
                             std::span<const double> grid) {
  double worst = 0.0;
  for (double x : grid)
    worst = std::max(worst, std::abs(compactified_mass(s1, x) - compactified_mass(s2, x)));
  return worst;
}

std::vector<double> nudge_off_atoms(std::vector<double> grid,
                                    std::span<const StieltjesString> strings, double nudge) {
  for (double& x : grid) {
    for (int pass = 0; pass < 8; ++pass) {
      bool moved = false;
      for (const auto& s : strings) {
        auto near = [&](double p) { return std::abs(x - p) <= nudge; };
        bool hit = near(s.right_limit());
        if (!hit) {
          const std::size_t k = s.count_at_or_below(x + nudge);
          hit = k > 0 && near(s.atoms()[k - 1].x);
        }
        if (hit) {
          x += 2.0 * nudge;
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  return grid;
}

std::vector<double> default_comparison_grid(std::span<const StieltjesString> strings,
                                            std::size_t n) {
  if (strings.empty() || n < 2) throw InvalidInput("grid needs strings and at least two points");
  double lo = kInf;
  double hi = -kInf;
  for (const auto& s : strings) {
    lo = std::min(lo, s.left_support());
    hi = std::max(hi, s.infinite_length() ? s.right_support() : s.right_limit());
  }
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo) + 1.0;
  const std::size_t side = n / 2;
  std::vector<double> grid;
  grid.reserve(2 * side);
  const double r0 = 1e-3;
  const double r1 = 4.0;
  for (std::size_t j = 0; j < side; ++j) {
    const double t = side == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(side - 1);
    const double r = r0 * std::pow(r1 / r0, t);
    grid.push_back(center - half * r);
    grid.push_back(center + half * r);
  }
  std::sort(grid.begin(), grid.end());
  return nudge_off_atoms(std::move(grid), strings);
}

}  // namespace krein
