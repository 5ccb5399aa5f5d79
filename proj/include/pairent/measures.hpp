#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "pairent/entropy.hpp"
#include "pairent/error.hpp"
#include "pairent/linalg.hpp"
#include "pairent/pairstate.hpp"

namespace pairent {

/// Entropy and concurrence sum are only defined for pure inputs.
struct MeasureReport {
  std::optional<double> entropy;
  std::optional<double> concurrence_sum_D;
  double negativity = 0.0;
  double log_negativity = 0.0;
  LogBase log_base = LogBase::two;
};

/// Von Neumann entropy of the reduced state, -sum mu_i^2 log mu_i^2.
inline double entropy_pure(const PurePairState& psi, LogBase base = LogBase::two) {
  const auto w = psi.weights();
  return shannon_entropy(w, base);
}

namespace detail {

/// sum_{i<j} a_i a_j accumulated as sum_j a_j * (a_0 + ... + a_{j-1}).
inline double pairwise_product_sum(std::span<const complex> c) {
  double prefix = 0.0;
  double total = 0.0;
  for (const auto& z : c) {
    const double a = std::abs(z);
    total += a * prefix;
    prefix += a;
  }
  return total;
}

}  // namespace detail

/// Generalized concurrence D = 2 sum_{i<j} |c_i c_j|.
inline double concurrence_sum(const PurePairState& psi) {
  return 2.0 * detail::pairwise_product_sum(psi.coeffs());
}

/// N(rho) = sum_{i<j} |rho_ij|.
/// Neumaier-compensated: d(d-1)/2 terms would otherwise drift by ~1e-12 at d = 64.
inline double negativity(const PairDensityMatrix& rho) {
  const std::size_t d = rho.dim();
  double n = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = std::abs(rho(i, j));
      const double t = n + v;
      comp += std::abs(n) >= v ? (n - t) + v : (v - t) + n;
      n = t;
    }
  return n + comp;
}

/// Pure-state negativity sum_{i<j} |c_i c_j| without forming the d x d matrix.
inline double negativity(const PurePairState& psi) { return detail::pairwise_product_sum(psi.coeffs()); }

inline double log_negativity_of(double n, LogBase base) { return log_in(base, 1.0 + 2.0 * n); }

/// E_N = log(1 + 2 N(rho)).
inline double log_negativity(const PairDensityMatrix& rho, LogBase base = LogBase::two) {
  return log_negativity_of(negativity(rho), base);
}

inline MeasureReport measure(const PurePairState& psi, LogBase base = LogBase::two) {
  MeasureReport r;
  r.entropy = entropy_pure(psi, base);
  r.concurrence_sum_D = concurrence_sum(psi);
  r.negativity = negativity(psi);
  r.log_negativity = log_negativity_of(r.negativity, base);
  r.log_base = base;
  return r;
}

inline MeasureReport measure(const PairDensityMatrix& rho, LogBase base = LogBase::two) {
  MeasureReport r;
  r.negativity = negativity(rho);
  r.log_negativity = log_negativity_of(r.negativity, base);
  r.log_base = base;
  return r;
}

inline constexpr std::size_t kMaxOracleDim = 32;

/// Builds rho = |psi><psi| in the full d^2-dimensional product basis
/// |i,j> (index i*d + j), transposes subsystem A and diagonalizes the
/// result with the Jacobi solver. Returns all d^2 eigenvalues, ascending.
///
/// Deliberately ignores the pair-basis block structure; it is the
/// independent check on negativity().
inline std::vector<double> pt_spectrum_oracle(const PurePairState& psi) {
  const std::size_t d = psi.dim();
  if (d > kMaxOracleDim)
    throw Error(ErrorKind::dimension_too_large, "partial-transpose oracle supports d <= 32");
  const std::size_t n = d * d;
  std::vector<complex> full(n, complex{});
  for (std::size_t i = 0; i < d; ++i) full[i * d + i] = psi[i];

  CMatrix rho(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) rho(a, b) = full[a] * std::conj(full[b]);

  // <i,j| rho^{T_A} |i',j'> = <i',j| rho |i,j'>
  CMatrix pt(n, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t ip = 0; ip < d; ++ip)
        for (std::size_t jp = 0; jp < d; ++jp) pt(i * d + j, ip * d + jp) = rho(ip * d + j, i * d + jp);

  return hermitian_eigenvalues(pt);
}

}  // namespace pairent
