#pragma once

// Shared test fixtures: seeded random states and the two-qubit Wootters
// formula as an oracle that does not go through the pair-basis code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pairent/entropy.hpp"
#include "pairent/linalg.hpp"
#include "pairent/pairstate.hpp"

namespace testing_support {

using pairent::CMatrix;
using pairent::complex;

inline pairent::PurePairState random_pure(std::mt19937_64& rng, std::size_t d, bool complex_phases = true) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<complex> c(d);
  for (auto& z : c) z = complex(g(rng), complex_phases ? g(rng) : 0.0);
  return pairent::make_pure(d, std::move(c));
}

/// Mixture of `k` random pure pair states with random weights.
inline pairent::PairDensityMatrix random_mixed(std::mt19937_64& rng, std::size_t d, std::size_t k,
                                               bool complex_phases = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& v : w) total += (v = u(rng) + 1e-3);
  CMatrix rho(d, d);
  for (std::size_t m = 0; m < k; ++m) {
    const auto psi = random_pure(rng, d, complex_phases);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) rho(i, j) += (w[m] / total) * psi[i] * std::conj(psi[j]);
  }
  return pairent::PairDensityMatrix::validated(std::move(rho));
}

/// d=2 pair state [[a, x], [x*, 1-a]] with |x|^2 <= a(1-a).
inline pairent::PairDensityMatrix random_qubit_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = u(rng);
  const double rmax = std::sqrt(a * (1.0 - a));
  const double mag = rmax * u(rng);
  const double phase = 2.0 * M_PI * u(rng);
  CMatrix m(2, 2);
  m(0, 0) = a;
  m(1, 1) = 1.0 - a;
  m(0, 1) = std::polar(mag, phase);
  m(1, 0) = std::conj(m(0, 1));
  return pairent::PairDensityMatrix::validated(std::move(m));
}

/// Wootters concurrence of the two-qubit state that puts the pair entries
/// on |00> and |11>, from the spectrum of sqrt(rho) rho~ sqrt(rho).
inline double wootters_concurrence(const pairent::PairDensityMatrix& pair) {
  CMatrix rho(4, 4);
  const std::array<std::size_t, 2> idx{0, 3};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) rho(idx[i], idx[j]) = pair(i, j);

  // sigma_y (x) sigma_y is real: anti-diagonal with signs (-1, 1, 1, -1).
  CMatrix yy(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  CMatrix conj_rho(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) conj_rho(i, j) = std::conj(rho(i, j));
  const CMatrix tilde = yy * conj_rho * yy;

  const auto eig = pairent::jacobi_eigen(rho);
  CMatrix sq(4, 4);
  for (std::size_t m = 0; m < 4; ++m) {
    const double s = std::sqrt(std::max(0.0, eig.values[m]));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) sq(i, j) += s * eig.vectors(i, m) * std::conj(eig.vectors(j, m));
  }
  CMatrix r = sq * tilde * sq;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) {
      const complex avg = 0.5 * (r(i, j) + std::conj(r(j, i)));
      r(i, j) = avg;
      r(j, i) = std::conj(avg);
    }
  auto ev = pairent::hermitian_eigenvalues(r);
  std::vector<double> l;
  for (double v : ev) l.push_back(std::sqrt(std::max(0.0, v)));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double wootters_eof(const pairent::PairDensityMatrix& pair, pairent::LogBase base = pairent::LogBase::two) {
  const double c = wootters_concurrence(pair);
  const double p = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  return pairent::binary_entropy(std::min(1.0, p), base);
}

/// Closed form used by the d=2 checks: H2(1/2 (1 + sqrt(1 - 4 |rho_12|^2))).
inline double qubit_pair_eof(double rho12_abs, pairent::LogBase base = pairent::LogBase::two) {
  return pairent::binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * rho12_abs * rho12_abs))), base);
}

}  // namespace testing_support
