#include "krein/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "krein/errors.hpp"
#include "krein/propagation.hpp"

namespace krein {

double SpectralMeasure::total_mass() const {
  if (closed_form) return kInf;
  double acc = 0.0;
  for (const auto& a : atoms) acc += a.weight;
  return acc;
}

double alpha_sigma_constant(double alpha) {
  const double g = std::tgamma(1.0 + alpha);
  return std::pow(alpha, 2.0 * alpha) / (g * g);
}

double alpha_heat_constant(double alpha) {
  return std::pow(alpha, 2.0 * alpha) / std::tgamma(1.0 + alpha);
}

namespace {

std::size_t atoms_left_of(const StieltjesString& s, double a) {
  if (a > s.right_limit()) throw DomainError("Dirichlet boundary lies right of l");
  const std::size_t n = s.count_below(a);
  if (n == 0) throw EmptySpectrum("no atom lies strictly left of the Dirichlet boundary");
  return n;
}

Eigen::MatrixXd dirichlet_kernel(const StieltjesString& s, std::size_t n, double a) {
  const auto& atoms = s.atoms();
  Eigen::MatrixXd kernel(n, n);
  std::vector<double> root_w(n);
  for (std::size_t i = 0; i < n; ++i) root_w[i] = std::sqrt(atoms[i].w);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const double v = root_w[i] * root_w[j] * (a - atoms[j].x);
      kernel(i, j) = v;
      kernel(j, i) = v;
    }
  return kernel;
}

double kernel_to_eigenvalue(double t) {
  if (!(t > 0.0)) {
    std::ostringstream msg;
    msg << "kernel eigenvalue " << t << " is not positive; atoms are numerically dependent";
    throw IllConditioned(msg.str());
  }
  return 1.0 / t;
}

}  // namespace

namespace {

// Eigenvalues below lambda: sign changes of phi_lambda over the atoms and a,
// run on the ratios phi(x_{i+1}) / phi(x_i) so nothing overflows. Rounding
// in this recurrence only perturbs masses and gaps relatively, so bisection
// on it pins every eigenvalue to a few ulps, small ones included.
std::size_t sturm_count(const std::vector<Atom>& at, std::size_t n, double a, double lambda) {
  std::size_t count = 0;
  double q = -lambda * at[0].w;  // phi' / phi just right of the current atom
  for (std::size_t i = 1; i <= n; ++i) {
    const double next = i < n ? at[i].x : a;
    double r = 1.0 + q * (next - at[i - 1].x);
    if (r == 0.0) r = std::numeric_limits<double>::min();
    if (r < 0.0) ++count;
    if (i < n) q = q / r - lambda * at[i].w;
  }
  return count;
}

double polish_eigenvalue(const std::vector<Atom>& at, std::size_t n, double a, std::size_t k,
                         double guess) {
  double width = 1e-10;
  double lo = guess * (1.0 - width), hi = guess * (1.0 + width);
  while (sturm_count(at, n, a, lo) > k || sturm_count(at, n, a, hi) < k + 1) {
    width *= 16.0;
    if (width > 0.5) {
      std::ostringstream msg;
      msg << "eigenvalue " << k << " near " << guess << " could not be bracketed";
      throw IllConditioned(msg.str());
    }
    lo = guess * (1.0 - width);
    hi = guess * (1.0 + width);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(at, n, a, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// phi_mu at the atoms for an eigenvalue mu, kept as log |phi| and sign.
//
// Ratios phi(x_i) / phi(x_{i-1}) come from a left-to-right recurrence and
// the Dirichlet solution's ratios from a right-to-left one; each is accurate
// in the direction it runs. They are joined at the atom where the two
// log-derivatives agree best (the twist index of a twisted factorization,
// which sits where the eigenvector is largest), so every value carries full
// relative accuracy even when it is 1e-200 or 1e200 times the first one.
struct Profile {
  std::vector<double> log_abs;
  std::vector<double> sign;
  std::vector<double> dlog;  // phi'(x_i+) / phi(x_i)
  double log_norm = 0.0;     // log sum_i phi(x_i)^2 w_i
};

double nonzero(double r) { return r == 0.0 ? std::numeric_limits<double>::min() : r; }

Profile eigen_profile(const std::vector<Atom>& at, std::size_t n, double a, double mu) {
  std::vector<double> fwd(n), qf(n), qb(n), bwd(n);
  // forward: fwd[i] = phi(x_i) / phi(x_{i-1}), qf[i] = phi'(x_i+) / phi(x_i)
  std::vector<double> ql(n);
  ql[0] = 0.0;
  qf[0] = -mu * at[0].w;
  fwd[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    fwd[i] = nonzero(1.0 + qf[i - 1] * (at[i].x - at[i - 1].x));
    ql[i] = qf[i - 1] / fwd[i];
    qf[i] = ql[i] - mu * at[i].w;
  }
  // backward from psi(a) = 0: qb[i] = psi'(x_i+) / psi(x_i),
  // bwd[i] = psi(x_{i-1}) / psi(x_i)
  qb[n - 1] = -1.0 / (a - at[n - 1].x);
  for (std::size_t i = n - 1; i > 0; --i) {
    const double p = qb[i] + mu * at[i].w;
    bwd[i] = nonzero(1.0 - p * (at[i].x - at[i - 1].x));
    qb[i - 1] = p / bwd[i];
  }
  std::size_t twist = 0;
  double best = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double gamma = std::abs(qb[i] - ql[i] + mu * at[i].w) / at[i].w;
    if (gamma < best) {
      best = gamma;
      twist = i;
    }
  }
  Profile pr;
  pr.log_abs.assign(n, 0.0);
  pr.sign.assign(n, 1.0);
  pr.dlog.resize(n);
  for (std::size_t i = twist; i > 0; --i) {
    pr.log_abs[i - 1] = pr.log_abs[i] - std::log(std::abs(fwd[i]));
    pr.sign[i - 1] = fwd[i] > 0.0 ? pr.sign[i] : -pr.sign[i];
  }
  for (std::size_t i = twist + 1; i < n; ++i) {
    pr.log_abs[i] = pr.log_abs[i - 1] - std::log(std::abs(bwd[i]));
    pr.sign[i] = bwd[i] > 0.0 ? pr.sign[i - 1] : -pr.sign[i - 1];
  }
  for (std::size_t i = 0; i < n; ++i) pr.dlog[i] = i < twist ? qf[i] : qb[i];
  const double shift = pr.log_abs[0];
  const double flip = pr.sign[0];
  double peak = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    pr.log_abs[i] -= shift;
    pr.sign[i] *= flip;
    peak = std::max(peak, 2.0 * pr.log_abs[i] + std::log(at[i].w));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(2.0 * pr.log_abs[i] + std::log(at[i].w) - peak);
  pr.log_norm = peak + std::log(acc);
  return pr;
}

// log |phi_mu(x)| and sign at any x left of the boundary, from the profile.
std::pair<double, double> profile_at(const StieltjesString& s, const Profile& pr, double x) {
  const std::size_t k = s.count_at_or_below(x);
  if (k == 0) return {0.0, 1.0};
  const std::size_t i = k - 1;
  const double f = 1.0 + pr.dlog[i] * (x - s.atoms()[i].x);
  return {pr.log_abs[i] + std::log(std::abs(f)), f < 0.0 ? -pr.sign[i] : pr.sign[i]};
}

// sum_k c_k sigma_k phi_k(x) phi_k(y) over the atoms of sigma.
template <class Coef>
double eigen_sum(const StieltjesString& s, const SpectralMeasure& sigma, double x, double y, Coef coef) {
  if (sigma.closed_form) throw InvalidInput("eigen-expansion needs an atomic measure");
  const double a = sigma.boundary;
  if (!std::isfinite(a)) throw InvalidInput("eigen-expansion needs a finite Dirichlet point");
  if (!(x <= a) || !(y <= a)) throw DomainError("eigen-expansion points lie right of the Dirichlet point");
  const std::size_t n = atoms_left_of(s, a);
  double acc = 0.0;
  for (const auto& at : sigma.atoms) {
    if (!(at.weight > 0.0)) continue;
    const Profile pr = eigen_profile(s.atoms(), n, a, at.xi);
    const auto [lx, sx] = profile_at(s, pr, x);
    const auto [ly, sy] = profile_at(s, pr, y);
    acc += sx * sy * coef(at.xi) * std::exp(std::log(at.weight) + lx + ly);
  }
  return acc;
}

}  // namespace

std::vector<double> dirichlet_eigenvalues(const StieltjesString& s, double a) {
  const std::size_t n = atoms_left_of(s, a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dirichlet_kernel(s, n, a),
                                                       Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw IllConditioned("kernel eigensolver did not converge");
  std::vector<double> mu(n);
  for (std::size_t k = 0; k < n; ++k)
    mu[k] = polish_eigenvalue(s.atoms(), n, a, k,
                              kernel_to_eigenvalue(solver.eigenvalues()(static_cast<Eigen::Index>(n - 1 - k))));
  return mu;
}

EigenSystem dirichlet_eigs(const StieltjesString& s, double a) {
  EigenSystem out;
  out.boundary = a;
  out.eigenvalues = dirichlet_eigenvalues(s, a);
  const std::size_t n = out.eigenvalues.size();
  out.eigennorms.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    out.eigennorms[k] = std::exp(eigen_profile(s.atoms(), n, a, out.eigenvalues[k]).log_norm);
  return out;
}

std::vector<double> char_roots(const StieltjesString& s, double a,
                               const std::vector<double>& seeds) {
  const std::size_t n = atoms_left_of(s, a);
  if (seeds.size() != n) throw RootBracketFailure("seed count differs from the polynomial degree");
  auto value = [&](double lambda) { return phi(s, lambda, a).value; };
  std::vector<double> fence(n + 1);
  fence[0] = 0.5 * seeds.front();
  for (std::size_t k = 1; k < n; ++k) fence[k] = std::sqrt(seeds[k - 1] * seeds[k]);
  fence[n] = 2.0 * seeds.back();
  for (std::size_t k = 0; k <= n; ++k) {
    const double v = value(fence[k]);
    const bool expect_positive = (k % 2 == 0);
    if ((v > 0.0) != expect_positive || v == 0.0) {
      std::ostringstream msg;
      msg << "sign pattern broken at bracket point " << fence[k] << " (index " << k << ")";
      throw RootBracketFailure(msg.str());
    }
  }
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lo = fence[k];
    double hi = fence[k + 1];
    const bool lo_positive = (k % 2 == 0);
    for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double v = value(mid);
      if (v == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((v > 0.0) == lo_positive)
        lo = mid;
      else
        hi = mid;
    }
    roots[k] = 0.5 * (lo + hi);
  }
  return roots;
}

std::vector<double> char_roots(const StieltjesString& s, double a) {
  return char_roots(s, a, dirichlet_eigenvalues(s, a));
}

SpectralMeasure spectral_measure(const StieltjesString& s, std::optional<double> boundary) {
  double a = 0.0;
  if (s.infinite_length()) {
    if (!boundary) throw TruncationRequired("string has l = +inf; supply a Dirichlet boundary");
    a = *boundary;
  } else {
    a = boundary.value_or(s.right_limit());
  }
  const EigenSystem eig = dirichlet_eigs(s, a);
  SpectralMeasure out;
  out.atoms.resize(eig.eigenvalues.size());
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
    out.atoms[k] = {eig.eigenvalues[k], 1.0 / eig.eigennorms[k]};
  out.offset = s.left_support();
  out.boundary = a;
  return out;
}

SpectralMeasure alpha_spectral_measure(double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  SpectralMeasure out;
  out.closed_form = AlphaTag{alpha};
  return out;
}

double cumulative_sigma(const SpectralMeasure& sigma, double xi) {
  if (sigma.closed_form) {
    if (xi <= 0.0) return 0.0;
    const double alpha = sigma.closed_form->alpha;
    return alpha_sigma_constant(alpha) * std::pow(xi, alpha);
  }
  double acc = 0.0;
  for (const auto& a : sigma.atoms)
    if (a.xi <= xi) acc += a.weight;
  return acc;
}

double heat_trace(const SpectralMeasure& sigma, double t) {
  if (!(t > 0.0)) throw DomainError("heat trace needs t > 0");
  if (sigma.closed_form) {
    const double alpha = sigma.closed_form->alpha;
    return alpha_heat_constant(alpha) * std::pow(t, -alpha);
  }
  double acc = 0.0;
  for (const auto& a : sigma.atoms) acc += a.weight * std::exp(-t * a.xi);
  return acc;
}

double transition_density(const StieltjesString& s, const SpectralMeasure& sigma, double t,
                          double x, double y) {
  if (!(t > 0.0)) throw DomainError("transition density needs t > 0");
  return eigen_sum(s, sigma, x, y, [t](double xi) { return std::exp(-t * xi); });
}

HerglotzValue herglotz_h(const SpectralMeasure& sigma, double lambda, double a) {
  if (!(lambda < 0.0)) throw DomainError("Herglotz function is evaluated at lambda < 0");
  if (sigma.closed_form) throw InvalidInput("closed-form measures have no finite Herglotz sum");
  double acc = a;
  for (const auto& at : sigma.atoms) acc += at.weight / (at.xi - lambda);
  return {lambda, acc};
}

double green_spectral(const StieltjesString& s, const SpectralMeasure& sigma, double lambda,
                      double x, double y) {
  if (!(lambda < 0.0)) throw DomainError("Green function is evaluated at lambda < 0");
  return eigen_sum(s, sigma, x, y, [lambda](double xi) { return 1.0 / (xi - lambda); });
}

double fourier_transform(const StieltjesString& s, const std::vector<double>& f_on_atoms,
                         double xi) {
  if (f_on_atoms.size() != s.size()) throw InvalidInput("one value per atom expected");
  const auto states = phi_at_atoms(s, xi);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    acc += f_on_atoms[i] * states[i].value * s.atoms()[i].w;
  return acc;
}

std::vector<double> fourier_transform(const StieltjesString& s, const std::vector<double>& f_on_atoms,
                                      const SpectralMeasure& sigma) {
  if (f_on_atoms.size() != s.size()) throw InvalidInput("one value per atom expected");
  if (sigma.closed_form || !std::isfinite(sigma.boundary))
    throw InvalidInput("spectrum-wide transform needs an atomic measure with a finite Dirichlet point");
  const std::size_t n = atoms_left_of(s, sigma.boundary);
  std::vector<double> out;
  out.reserve(sigma.atoms.size());
  for (const auto& at : sigma.atoms) {
    const Profile pr = eigen_profile(s.atoms(), n, sigma.boundary, at.xi);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += f_on_atoms[i] * pr.sign[i] * std::exp(pr.log_abs[i] + std::log(s.atoms()[i].w));
    out.push_back(acc);
  }
  return out;
}

StieltjesString reconstruct_from_spectrum(const SpectralMeasure& sigma, double a) {
  if (sigma.closed_form) throw InvalidInput("reconstruction needs a finite atomic measure");
  const std::size_t n = sigma.atoms.size();
  if (n == 0) throw InvalidInput("reconstruction needs at least one spectral atom");
  Eigen::VectorXd xi(n);
  Eigen::VectorXd start(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& at = sigma.atoms[k];
    if (!(at.weight > 0.0) || !(at.xi > 0.0)) throw InvalidInput("spectral atoms must be positive");
    if (k > 0 && !(sigma.atoms[k - 1].xi < at.xi))
      throw InvalidInput("spectral atoms must be strictly increasing");
    xi(static_cast<Eigen::Index>(k)) = at.xi;
    total += at.weight;
  }
  for (std::size_t k = 0; k < n; ++k)
    start(static_cast<Eigen::Index>(k)) = std::sqrt(sigma.atoms[k].weight / total);

  // Lanczos on diag(xi) from the normalized weights, fully reorthogonalized.
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd basis(nn, nn);
  std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
  basis.col(0) = start;
  const double xi_scale = xi.maxCoeff();
  for (Eigen::Index j = 0; j < nn; ++j) {
    Eigen::VectorXd r = xi.cwiseProduct(basis.col(j));
    if (j > 0) r -= off[static_cast<std::size_t>(j - 1)] * basis.col(j - 1);
    diag[static_cast<std::size_t>(j)] = basis.col(j).dot(r);
    r -= diag[static_cast<std::size_t>(j)] * basis.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i <= j; ++i) r -= basis.col(i).dot(r) * basis.col(i);
    if (j + 1 < nn) {
      const double beta = r.norm();
      if (!(beta > 1e-14 * xi_scale))
        throw IllConditioned("Lanczos recurrence broke down; spectral atoms are dependent");
      off[static_cast<std::size_t>(j)] = beta;
      basis.col(j + 1) = r / beta;
    }
  }

  // Jacobi coefficients -> masses w_i and inverse gaps rho_i = 1 / d_i:
  //   diag_i = (rho_{i-1} + rho_i) / w_i,  off_i = rho_i / sqrt(w_i w_{i+1}).
  std::vector<Atom> atoms(n);
  std::vector<double> rho(n);
  double w = 1.0 / total;
  double rho_prev = 0.0;
  double x = a;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) w = rho_prev * rho_prev / (off[i - 1] * off[i - 1] * atoms[i - 1].w);
    const double scaled = diag[i] * w;
    const double r = scaled - rho_prev;
    if (!(r > 1e-12 * scaled)) {
      std::ostringstream msg;
      msg << "recovered gap " << i << " is not positive (" << r << ")";
      throw IllConditioned(msg.str());
    }
    atoms[i] = {x, w};
    rho[i] = r;
    x += 1.0 / r;
    rho_prev = r;
  }
  return StieltjesString(std::move(atoms), x, "reconstructed");
}

Alignment align_strings(const StieltjesString& reference, const StieltjesString& candidate) {
  if (reference.size() != candidate.size())
    throw InvalidInput("alignment needs strings with the same atom count");
  const auto& ra = reference.atoms();
  const auto& ca = candidate.atoms();
  double c = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) c += ca[i].x - ra[i].x;
  c /= static_cast<double>(ra.size());
  Alignment out;
  out.shift = c;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    out.max_position_deviation = std::max(out.max_position_deviation, std::abs(ca[i].x - c - ra[i].x));
    out.max_mass_deviation =
        std::max(out.max_mass_deviation, std::abs(ca[i].w - ra[i].w) / ra[i].w);
  }
  if (reference.infinite_length() || candidate.infinite_length())
    out.right_limit_deviation =
        reference.infinite_length() == candidate.infinite_length() ? 0.0 : kInf;
  else
    out.right_limit_deviation =
        std::abs(candidate.right_limit() - c - reference.right_limit());
  return out;
}

double spectral_deviation(const SpectralMeasure& a, const SpectralMeasure& b) {
  if (a.atoms.size() != b.atoms.size()) return kInf;
  double worst = 0.0;
  for (std::size_t k = 0; k < a.atoms.size(); ++k) {
    worst = std::max(worst, std::abs(a.atoms[k].xi - b.atoms[k].xi) / a.atoms[k].xi);
    worst = std::max(worst, std::abs(a.atoms[k].weight - b.atoms[k].weight) / a.atoms[k].weight);
  }
  return worst;
}

}  // namespace krein
