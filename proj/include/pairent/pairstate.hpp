#pragma once

// Pure and mixed states written in a fixed pair basis |i,i>, i = 0..d-1.
// A pure state is the coefficient vector c; a mixed state is the d x d
// matrix rho_ij = <i,i| rho |j,j>. Everything else in the library is
// built on these two types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "pairent/entropy.hpp"
#include "pairent/error.hpp"
#include "pairent/linalg.hpp"

namespace pairent {

namespace tolerance {
inline constexpr double norm = 1e-10;
inline constexpr double hermitian = 1e-9;
inline constexpr double trace = 1e-10;
inline constexpr double diagonal_floor = -1e-12;
inline constexpr double psd_floor = -1e-9;
inline constexpr double zero_vector = 1e-14;
}  // namespace tolerance

class PurePairState {
 public:
  std::size_t dim() const noexcept { return coeffs_.size(); }
  std::span<const complex> coeffs() const noexcept { return coeffs_; }
  complex operator[](std::size_t i) const { return coeffs_[i]; }

  /// Schmidt weights mu_i^2 = |c_i|^2.
  std::vector<double> weights() const {
    std::vector<double> w(coeffs_.size());
    std::transform(coeffs_.begin(), coeffs_.end(), w.begin(), [](complex c) { return std::norm(c); });
    return w;
  }

  friend PurePairState make_pure(std::size_t dim, std::vector<complex> coeffs);

 private:
  explicit PurePairState(std::vector<complex> c) : coeffs_(std::move(c)) {}
  std::vector<complex> coeffs_;
};

/// Normalizes `coeffs` to unit norm, keeping phases as given.
inline PurePairState make_pure(std::size_t dim, std::vector<complex> coeffs) {
  if (dim < 2) throw Error(ErrorKind::dimension_mismatch, "pair states need dim >= 2");
  if (coeffs.size() != dim)
    throw Error(ErrorKind::dimension_mismatch,
                "expected " + std::to_string(dim) + " coefficients, got " + std::to_string(coeffs.size()));
  double norm_sq = 0.0;
  for (const auto& c : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::domain_error, "non-finite coefficient");
    norm_sq += std::norm(c);
  }
  const double norm = std::sqrt(norm_sq);
  if (norm < tolerance::zero_vector) throw Error(ErrorKind::zero_vector, "coefficient vector has zero norm");
  for (auto& c : coeffs) c /= norm;
  return PurePairState(std::move(coeffs));
}

inline PurePairState make_pure(std::vector<complex> coeffs) {
  const std::size_t d = coeffs.size();
  return make_pure(d, std::move(coeffs));
}

class PairDensityMatrix {
 public:
  /// Checks every invariant (Hermitian, unit trace, non-negative diagonal,
  /// PSD) and throws Error on the first violation. Nothing is projected.
  static PairDensityMatrix validated(CMatrix entries);

  /// For matrices that are valid by construction (mixtures of pure states,
  /// permutations of valid matrices). Only the shape is checked.
  static PairDensityMatrix trusted(CMatrix entries) {
    check_shape(entries);
    return PairDensityMatrix(std::move(entries));
  }

  std::size_t dim() const noexcept { return entries_.rows(); }
  const CMatrix& entries() const noexcept { return entries_; }
  complex operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  /// Gamma_i^2 = sum_{j != i} |rho_ij|^2 for each row.
  std::vector<double> row_couplings_sq() const {
    const std::size_t d = dim();
    std::vector<double> g(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (i != j) g[i] += std::norm(entries_(i, j));
    return g;
  }

 private:
  explicit PairDensityMatrix(CMatrix m) : entries_(std::move(m)) {}

  static void check_shape(const CMatrix& m) {
    if (!m.square()) throw Error(ErrorKind::dimension_mismatch, "density matrix must be square");
    if (m.rows() < 2) throw Error(ErrorKind::dimension_mismatch, "pair states need dim >= 2");
  }

  CMatrix entries_;
};

inline void validate_density(const CMatrix& m) {
  if (!m.square()) throw Error(ErrorKind::dimension_mismatch, "density matrix must be square");
  const std::size_t d = m.rows();
  if (d < 2) throw Error(ErrorKind::dimension_mismatch, "pair states need dim >= 2");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorKind::domain_error, "non-finite matrix entry");
      if (std::abs(z - std::conj(m(j, i))) > tolerance::hermitian)
        throw Error(ErrorKind::not_hermitian,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") breaks Hermiticity");
    }
  double tr = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double di = m(i, i).real();
    if (di < tolerance::diagonal_floor)
      throw Error(ErrorKind::negative_diagonal, "diagonal entry " + std::to_string(i) + " is negative");
    tr += di;
  }
  if (std::abs(tr - 1.0) > tolerance::trace)
    throw Error(ErrorKind::trace_violation, "trace is " + std::to_string(tr));
  const auto eig = hermitian_eigenvalues(m);
  if (eig.front() < tolerance::psd_floor)
    throw Error(ErrorKind::psd_violation, "minimum eigenvalue " + std::to_string(eig.front()));
}

inline PairDensityMatrix PairDensityMatrix::validated(CMatrix entries) {
  validate_density(entries);
  return PairDensityMatrix(std::move(entries));
}

/// rho_ij = c_i conj(c_j).
inline PairDensityMatrix density_of_pure(const PurePairState& psi) {
  const std::size_t d = psi.dim();
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = psi[i] * std::conj(psi[j]);
  return PairDensityMatrix::trusted(std::move(m));
}

struct SchmidtProfile {
  std::vector<double> weights;     // mu_i^2
  std::vector<double> couplings;   // Gamma_i
  std::vector<int> signs;          // epsilon_i
  std::vector<std::size_t> permutation;  // position -> original index, Gamma descending
};

/// Stable ordering of indices by descending value.
inline std::vector<std::size_t> descending_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

inline SchmidtProfile schmidt_from_pure(const PurePairState& psi) {
  const std::size_t d = psi.dim();
  SchmidtProfile p;
  p.weights = psi.weights();
  std::vector<double> gamma_sq(d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j) gamma_sq[i] += p.weights[i] * p.weights[j];
  p.couplings.resize(d);
  std::transform(gamma_sq.begin(), gamma_sq.end(), p.couplings.begin(), [](double g) { return std::sqrt(g); });
  // At most one weight can exceed 1/2; that one sits on the minus branch.
  p.signs.assign(d, 1);
  for (std::size_t i = 0; i < d; ++i)
    if (p.weights[i] > 0.5) p.signs[i] = -1;
  p.permutation = descending_order(gamma_sq);
  return p;
}

/// Inverts Gamma -> mu^2 with the recorded signs:
/// mu_i^2 = (1 - eps_i sqrt(1 - 4 Gamma_i^2)) / 2.
inline std::vector<double> weights_from_couplings(std::span<const double> couplings, std::span<const int> signs) {
  std::vector<double> w(couplings.size());
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    const double disc = clamp_nonnegative(1.0 - 4.0 * couplings[i] * couplings[i], "1 - 4 Gamma^2");
    w[i] = 0.5 * (1.0 - signs[i] * std::sqrt(disc));
  }
  return w;
}

struct Relabeled {
  PairDensityMatrix matrix;
  std::vector<std::size_t> permutation;  // position -> original index
};

/// Symmetric permutation out(i, j) = rho(perm[i], perm[j]).
inline PairDensityMatrix permute(const PairDensityMatrix& rho, std::span<const std::size_t> perm) {
  const std::size_t d = rho.dim();
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rho(perm[i], perm[j]);
  return PairDensityMatrix::trusted(std::move(m));
}

/// Reorders the pair basis so that Gamma_i^2 = sum_{j != i} |rho_ij|^2 is
/// non-increasing. Ties keep their original order.
inline Relabeled relabel_by_gamma(const PairDensityMatrix& rho) {
  const auto g = rho.row_couplings_sq();
  auto perm = descending_order(g);
  auto m = permute(rho, perm);
  return Relabeled{std::move(m), std::move(perm)};
}

}  // namespace pairent
