#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace krein {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A point mass of the string: weight `w` placed at coordinate `x`.
struct Atom {
  double x = 0.0;
  double w = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A string of entrance type with finitely many atoms.
///
/// The mass distribution m is right continuous, vanishes left of the first
/// atom and jumps by `w` at every atom. It equals +infinity on [l, inf) when
/// the right limit l is finite. Atoms lie strictly left of l. Because the
/// atom list is finite the entrance condition holds automatically.
///
/// Instances are immutable; prefix sums backing M are built once.
class StieltjesString {
 public:
  StieltjesString(std::vector<Atom> atoms, double right_limit, std::string label = {});

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double right_limit() const { return right_limit_; }
  bool infinite_length() const { return right_limit_ == kInf; }
  double left_support() const { return atoms_.front().x; }
  double right_support() const { return atoms_.back().x; }
  const std::string& label() const { return label_; }
  double total_mass() const { return cum_mass_.back(); }

  /// Index one past the last atom with position <= x.
  std::size_t count_at_or_below(double x) const;
  /// Number of atoms strictly left of x.
  std::size_t count_below(double x) const;

  // Prefix sums: cumulative mass and cumulative first moment over atoms [0, k).
  double cumulative_mass(std::size_t k) const { return cum_mass_[k]; }
  double cumulative_moment(std::size_t k) const { return cum_moment_[k]; }

  StieltjesString with_label(std::string label) const;

  friend bool operator==(const StieltjesString& a, const StieltjesString& b) {
    return a.atoms_ == b.atoms_ && a.right_limit_ == b.right_limit_;
  }

 private:
  std::vector<Atom> atoms_;
  double right_limit_;
  std::string label_;
  std::vector<double> cum_mass_;
  std::vector<double> cum_moment_;
};

/// m(x): total mass at or left of x; +infinity for x >= l.
double mass_m(const StieltjesString& s, double x);

/// M(x) = integral of (x - y) dm(y) over y <= x; +infinity for x > l.
double mass_integral_M(const StieltjesString& s, double x);

/// Piecewise-linear view of M with an exact inverse on [0, M(l)].
class MassFunction {
 public:
  explicit MassFunction(const StieltjesString& s);

  double operator()(double x) const { return mass_integral_M(s_, x); }
  /// Smallest x with M(x) = u, for 0 < u <= M(l). Solved in closed form on
  /// the active linear piece.
  double inverse(double u) const;
  /// M evaluated at every atom position.
  const std::vector<double>& at_atoms() const { return at_atoms_; }
  /// M(l), +infinity when l is infinite.
  double at_right_limit() const { return at_l_; }

 private:
  StieltjesString s_;
  std::vector<double> at_atoms_;
  double at_l_;
};

/// Translate so that the new string has M(0) = c.
/// Throws NormalizationImpossible when M(l) < c.
StieltjesString normalize_to_Ec(const StieltjesString& s, double c);

/// m_a(x) = m(x + a): positions and l move by -a.
StieltjesString shift(const StieltjesString& s, double a);

/// String with m'(x) = a b m(a x): positions x/a, masses a b w, right limit l/a.
StieltjesString scale(const StieltjesString& s, double a, double b);

/// m_nu(x) = nu phi^{-1}(nu) m(nu x), so that M_nu(x) = phi^{-1}(nu) M(nu x).
StieltjesString nu_scaling(const StieltjesString& s, double nu, double phi_inv_at_nu);

/// (2/pi) arctan m(x), with the value 1 where m is infinite.
double compactified_mass(const StieltjesString& s, double x);

/// Max over the grid of the difference of compactified masses. Grid points
/// are expected to avoid atoms of both strings.
double compactified_distance(const StieltjesString& s1, const StieltjesString& s2,
                             std::span<const double> grid);

/// Default comparison grid: `n` points spread geometrically on both sides of
/// the joint support of `strings`, nudged off every atom by 1e-9.
std::vector<double> default_comparison_grid(std::span<const StieltjesString> strings,
                                            std::size_t n = 256);

/// Move every grid point that sits within `nudge` of an atom of any string.
std::vector<double> nudge_off_atoms(std::vector<double> grid,
                                    std::span<const StieltjesString> strings,
                                    double nudge = 1e-9);

}  // namespace krein
