#pragma once

// Lower bounds on the entanglement of formation of pair-basis states.
//
//   F  built from the first row of rho after sorting rows by Gamma_i,
//   G  built from every row's off-diagonal norm,
//   s  the convex lower envelope of pure-state entropy at fixed negativity,
//      evaluated at N(rho).
//
// All three are valid lower bounds; best_bound() reports their maximum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pairent/entropy.hpp"
#include "pairent/error.hpp"
#include "pairent/linalg.hpp"
#include "pairent/measures.hpp"
#include "pairent/pairstate.hpp"

namespace pairent {

/// Off-diagonal entries x = (rho_12, ..., rho_1d) of the leading row after
/// relabeling. |x|^2 <= 1/4 for every valid pair density matrix.
struct FirstRowVector {
  std::size_t dim = 0;
  std::vector<complex> components;
  double norm_sq = 0.0;
};

struct AlphaSpectrum {
  std::vector<double> alphas_sq;
};

struct BoundReport {
  double F = 0.0;
  double G = 0.0;
  double s = 0.0;
  double best = 0.0;
  double negativity = 0.0;
  LogBase log_base = LogBase::two;
};

inline constexpr double kQuarterSlack = 1e-12;

namespace detail {

/// Returns 1 - 4 q, clamped at zero for q within round-off of 1/4.
inline double quarter_gap(double q) {
  if (q > 0.25 + kQuarterSlack)
    throw Error(ErrorKind::domain_error, "off-diagonal norm exceeds the 1/4 limit of a valid density matrix");
  return std::max(0.0, 1.0 - 4.0 * q);
}

}  // namespace detail

inline FirstRowVector first_row(const PairDensityMatrix& relabeled) {
  FirstRowVector x;
  x.dim = relabeled.dim();
  for (std::size_t j = 1; j < x.dim; ++j) {
    x.components.push_back(relabeled(0, j));
    x.norm_sq += std::norm(relabeled(0, j));
  }
  return x;
}

/// alpha_1^2 = (1 + sqrt(1 - 4|x|^2)) / 2,  alpha_i^2 = |x_i|^2 / alpha_1^2.
/// Takes the moduli |x_i|; the result sums to one.
inline AlphaSpectrum f_alphas(std::span<const double> moduli) {
  double q = 0.0;
  for (double v : moduli) q += v * v;
  AlphaSpectrum a;
  const double a1 = 0.5 * (1.0 + std::sqrt(detail::quarter_gap(q)));
  a.alphas_sq.reserve(moduli.size() + 1);
  a.alphas_sq.push_back(a1);
  for (double v : moduli) a.alphas_sq.push_back(v * v / a1);
  return a;
}

/// F as a function of the non-negative vector of first-row moduli.
inline double bound_F_of_moduli(std::span<const double> moduli, LogBase base = LogBase::two) {
  const auto a = f_alphas(moduli);
  return shannon_entropy(a.alphas_sq, base);
}

inline double bound_F(const FirstRowVector& x, LogBase base = LogBase::two) {
  std::vector<double> moduli(x.components.size());
  std::transform(x.components.begin(), x.components.end(), moduli.begin(), [](complex z) { return std::abs(z); });
  return bound_F_of_moduli(moduli, base);
}

inline double bound_F(const PairDensityMatrix& rho, LogBase base = LogBase::two) {
  const auto r = relabel_by_gamma(rho);
  return bound_F(first_row(r.matrix), base);
}

/// F for a pure state, equal to bound_F(density_of_pure(psi)) but computed
/// from the coefficients in O(d) memory. Used for long truncated states.
inline double bound_F(const PurePairState& psi, LogBase base = LogBase::two) {
  const auto w = psi.weights();
  const std::size_t d = w.size();
  double total = 0.0;
  for (double v : w) total += v;
  std::vector<double> gamma_sq(d);
  for (std::size_t i = 0; i < d; ++i) gamma_sq[i] = w[i] * (total - w[i]);
  const std::size_t lead = descending_order(gamma_sq).front();
  std::vector<double> moduli;
  moduli.reserve(d - 1);
  const double lead_abs = std::abs(psi[lead]);
  for (std::size_t j = 0; j < d; ++j)
    if (j != lead) moduli.push_back(lead_abs * std::abs(psi[j]));
  return bound_F_of_moduli(moduli, base);
}

/// alpha_1^2 = (1 + sqrt(1 - 4|x_1|^2)) / 2 from the leading row and
/// alpha_i^2 = (1 - sqrt(1 - 4|x_i|^2)) / 2 from every other row. Not
/// normalized.
inline AlphaSpectrum g_alphas(std::span<const double> row_norms_sq) {
  AlphaSpectrum a;
  a.alphas_sq.reserve(row_norms_sq.size());
  for (std::size_t i = 0; i < row_norms_sq.size(); ++i) {
    const double root = std::sqrt(detail::quarter_gap(row_norms_sq[i]));
    a.alphas_sq.push_back(i == 0 ? 0.5 * (1.0 + root) : 0.5 * (1.0 - root));
  }
  return a;
}

inline double bound_G(const PairDensityMatrix& rho, LogBase base = LogBase::two) {
  const auto r = relabel_by_gamma(rho);
  const auto rows = r.matrix.row_couplings_sq();
  const auto a = g_alphas(rows);
  return shannon_entropy(a.alphas_sq, base);
}

/// gamma(N) = [sqrt(2N+1) + sqrt((d-1)(d-2N-1))]^2 / d^2.
inline double gamma_of_N(double n, std::size_t d) {
  if (d < 2) throw Error(ErrorKind::domain_error, "dimension must be at least 2");
  const double dd = static_cast<double>(d);
  const double n_max = (dd - 1.0) / 2.0;
  if (n < -1e-12 || n > n_max + 1e-12) throw Error(ErrorKind::domain_error, "negativity outside [0, (d-1)/2]");
  n = std::clamp(n, 0.0, n_max);
  const double t = std::sqrt(2.0 * n + 1.0) + std::sqrt(std::max(0.0, (dd - 1.0) * (dd - 2.0 * n - 1.0)));
  return std::min(1.0, t * t / (dd * dd));
}

/// Breakpoint between the two branches of s(N).
inline double s_breakpoint(std::size_t d) { return 1.5 - 2.0 / static_cast<double>(d); }

/// s(N) = H2(gamma) + (1 - gamma) log(d-1)              for N <= 3/2 - 2/d,
///        (2N + 1 - d)/(d - 2) log(d-1) + log d         above it.
/// For d = 2 only the first branch exists.
inline double bound_s(double n, std::size_t d, LogBase base = LogBase::two) {
  const double g = gamma_of_N(n, d);
  const double dd = static_cast<double>(d);
  n = std::clamp(n, 0.0, (dd - 1.0) / 2.0);
  if (d == 2 || n <= s_breakpoint(d)) return binary_entropy(g, base) + (1.0 - g) * log_in(base, dd - 1.0);
  return (2.0 * n + 1.0 - dd) / (dd - 2.0) * log_in(base, dd - 1.0) + log_in(base, dd);
}

inline double bound_s(const PairDensityMatrix& rho, LogBase base = LogBase::two) {
  return bound_s(negativity(rho), rho.dim(), base);
}

inline BoundReport best_bound(const PairDensityMatrix& rho, LogBase base = LogBase::two) {
  BoundReport r;
  r.log_base = base;
  r.negativity = negativity(rho);
  // One relabeling shared by F and G.
  const auto rel = relabel_by_gamma(rho);
  r.F = bound_F(first_row(rel.matrix), base);
  r.G = shannon_entropy(g_alphas(rel.matrix.row_couplings_sq()).alphas_sq, base);
  r.s = bound_s(r.negativity, rho.dim(), base);
  r.best = std::max({r.F, r.G, r.s});
  return r;
}

}  // namespace pairent
