#pragma once

// Brute-force convex roof: minimizes the average entropy over pure-state
// decompositions of rho. Every decomposition with K members has the form
//
//   psi~_k = sum_m U_km sqrt(lambda_m) v_m,   p_k = |psi~_k|^2,
//
// with (lambda_m, v_m) the non-zero eigenpairs of rho and U a K x rank
// isometry. The search rotates pairs of rows of U (complex Givens
// rotations), so U stays an isometry at every step. The result is an upper
// bound on the true EOF.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "pairent/bounds.hpp"
#include "pairent/ensembles.hpp"
#include "pairent/entropy.hpp"
#include "pairent/error.hpp"
#include "pairent/linalg.hpp"
#include "pairent/pairstate.hpp"
#include "pairent/parallel.hpp"

namespace pairent {

struct RoofSettings {
  std::size_t members = 0;  // 0 selects rank + 2
  std::size_t restarts = 16;
  std::size_t iters = 2000;  // passes over all rotation coordinates, per restart
  std::uint64_t seed = 1;
  LogBase log_base = LogBase::two;
};

struct RoofResult {
  double eof_estimate = 0.0;
  EnsembleSample best_decomposition;
  std::size_t restarts_used = 0;
  bool converged = false;
  std::size_t rank = 0;
  std::size_t members = 0;
  std::vector<double> history;  // objective after each pass of the winning restart
};

inline constexpr std::size_t kMaxRoofDim = 4;
inline constexpr double kRankFloor = 1e-10;
inline constexpr double kReconstructionTol = 1e-10;
inline constexpr double kInitialStep = std::numbers::pi / 8.0;
inline constexpr double kMinStep = 1e-7;
inline constexpr double kRestartImprovement = 1e-8;
inline constexpr std::size_t kConvergenceStreak = 5;

namespace detail {

class RoofProblem {
 public:
  RoofProblem(const PairDensityMatrix& rho, std::size_t members) : d_(rho.dim()), k_(members) {
    const auto eig = jacobi_eigen(rho.entries());
    for (std::size_t m = 0; m < d_; ++m) {
      if (eig.values[m] <= kRankFloor) continue;
      std::vector<complex> w(d_);
      const double s = std::sqrt(eig.values[m]);
      for (std::size_t i = 0; i < d_; ++i) w[i] = s * eig.vectors(i, m);
      weighted_.push_back(std::move(w));
    }
  }

  std::size_t rank() const noexcept { return weighted_.size(); }
  std::size_t dim() const noexcept { return d_; }
  std::size_t members() const noexcept { return k_; }

  /// Unnormalized member k: sum_m U(k, m) w_m.
  std::vector<complex> member(const CMatrix& u, std::size_t k) const {
    std::vector<complex> psi(d_, complex{});
    for (std::size_t m = 0; m < rank(); ++m) {
      const complex a = u(k, m);
      for (std::size_t i = 0; i < d_; ++i) psi[i] += a * weighted_[m][i];
    }
    return psi;
  }

  /// p_k S(psi_k) in natural units: -sum_i |psi~_i|^2 ln(|psi~_i|^2 / p_k).
  double member_cost(const CMatrix& u, std::size_t k) const {
    const auto psi = member(u, k);
    double p = 0.0;
    for (const auto& z : psi) p += std::norm(z);
    if (p <= 0.0) return 0.0;
    double c = 0.0;
    for (const auto& z : psi) c -= xlogx(std::norm(z) / p);
    return p * c;
  }

  CMatrix reconstruct(const CMatrix& u) const {
    CMatrix out(d_, d_);
    for (std::size_t k = 0; k < k_; ++k) {
      const auto psi = member(u, k);
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) out(i, j) += psi[i] * std::conj(psi[j]);
    }
    return out;
  }

 private:
  std::size_t d_;
  std::size_t k_;
  std::vector<std::vector<complex>> weighted_;
};

/// First `cols` columns of a random unitary (Gram-Schmidt on complex Gaussians).
inline CMatrix random_isometry(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix u(rows, cols);
  for (std::size_t m = 0; m < cols; ++m) {
    for (;;) {
      for (std::size_t k = 0; k < rows; ++k) u(k, m) = complex(normal(rng), normal(rng));
      for (std::size_t prev = 0; prev < m; ++prev) {
        complex dot{};
        for (std::size_t k = 0; k < rows; ++k) dot += std::conj(u(k, prev)) * u(k, m);
        for (std::size_t k = 0; k < rows; ++k) u(k, m) -= dot * u(k, prev);
      }
      double n = 0.0;
      for (std::size_t k = 0; k < rows; ++k) n += std::norm(u(k, m));
      n = std::sqrt(n);
      if (n < 1e-8) continue;
      for (std::size_t k = 0; k < rows; ++k) u(k, m) /= n;
      break;
    }
  }
  return u;
}

/// Rows k, l <- [[c, -e^{i phi} s], [e^{-i phi} s, c]] applied to U.
inline void rotate_rows(CMatrix& u, std::size_t k, std::size_t l, double theta, bool imaginary) {
  const double c = std::cos(theta), s = std::sin(theta);
  const complex ph = imaginary ? complex(0.0, 1.0) : complex(1.0, 0.0);
  for (std::size_t m = 0; m < u.cols(); ++m) {
    const complex a = u(k, m), b = u(l, m);
    u(k, m) = c * a - ph * s * b;
    u(l, m) = std::conj(ph) * s * a + c * b;
  }
}

struct RestartOutcome {
  CMatrix u;
  double cost = 0.0;  // nats
  std::vector<double> history;
};

inline RestartOutcome local_search(const RoofProblem& prob, CMatrix u, std::size_t max_passes) {
  const std::size_t kk = prob.members();
  std::vector<double> costs(kk);
  for (std::size_t k = 0; k < kk; ++k) costs[k] = prob.member_cost(u, k);
  auto total = [&] {
    double t = 0.0;
    for (double c : costs) t += c;
    return t;
  };
  RestartOutcome out;
  double current = total();
  double step = kInitialStep;
  for (std::size_t pass = 0; pass < max_passes && step >= kMinStep; ++pass) {
    bool improved = false;
    for (std::size_t k = 0; k + 1 < kk; ++k) {
      for (std::size_t l = k + 1; l < kk; ++l) {
        for (bool imag : {false, true}) {
          for (double dir : {1.0, -1.0}) {
            CMatrix trial = u;
            rotate_rows(trial, k, l, dir * step, imag);
            const double ck = prob.member_cost(trial, k);
            const double cl = prob.member_cost(trial, l);
            const double cand = current - costs[k] - costs[l] + ck + cl;
            if (cand < current - 1e-15) {
              u = std::move(trial);
              costs[k] = ck;
              costs[l] = cl;
              current = total();
              improved = true;
              break;
            }
          }
        }
      }
    }
    out.history.push_back(current);
    if (!improved) step *= 0.5;
  }
  out.cost = total();
  out.u = std::move(u);
  return out;
}

}  // namespace detail

/// Upper estimate of the entanglement of formation, d <= 4.
inline RoofResult eof_convex_roof(const PairDensityMatrix& rho, const RoofSettings& settings = {}) {
  if (rho.dim() > kMaxRoofDim) throw Error(ErrorKind::dimension_too_large, "convex-roof search supports d <= 4");
  const std::size_t d = rho.dim();
  detail::RoofProblem probe(rho, 1);
  const std::size_t rank = probe.rank();
  const std::size_t kk = settings.members == 0 ? rank + 2 : settings.members;
  if (kk < rank)
    throw Error(ErrorKind::rank_error,
                "K = " + std::to_string(kk) + " is below the numerical rank " + std::to_string(rank));
  const detail::RoofProblem prob(rho, kk);
  const std::size_t restarts = std::max<std::size_t>(1, settings.restarts);

  std::vector<detail::RestartOutcome> outcomes(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    CMatrix u0;
    if (r == 0) {
      u0 = CMatrix(kk, rank);
      for (std::size_t m = 0; m < rank; ++m) u0(m, m) = 1.0;
    } else {
      u0 = detail::random_isometry(kk, rank, derive_seed(settings.seed, r));
    }
    outcomes[r] = detail::local_search(prob, std::move(u0), settings.iters);
    if (prob.reconstruct(outcomes[r].u).max_abs_diff(rho.entries()) > kReconstructionTol)
      throw Error(ErrorKind::certification_failure, "decomposition no longer reproduces rho");
  });

  RoofResult res;
  res.rank = rank;
  res.members = kk;
  std::size_t best = 0;
  std::size_t streak = 0;
  std::size_t used = restarts;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (outcomes[r].cost < outcomes[best].cost - kRestartImprovement) {
      streak = 0;
    } else {
      ++streak;
    }
    if (outcomes[r].cost < outcomes[best].cost) best = r;
    if (streak >= kConvergenceStreak) {
      res.converged = true;
      used = r + 1;
      break;
    }
  }
  res.restarts_used = used;
  res.history = outcomes[best].history;
  const double k = ln_of_base(settings.log_base);
  for (auto& h : res.history) h /= k;

  // Materialize the winning decomposition; members with zero weight are dropped.
  const auto& u = outcomes[best].u;
  EnsembleSample dec;
  dec.dim = d;
  dec.log_base = settings.log_base;
  for (std::size_t m = 0; m < kk; ++m) {
    auto psi = prob.member(u, m);
    double p = 0.0;
    for (const auto& z : psi) p += std::norm(z);
    if (p < 1e-300) continue;
    auto state = make_pure(d, std::move(psi));
    dec.avg_entropy += p * entropy_pure(state, settings.log_base);
    dec.weights.push_back(p);
    dec.states.push_back(std::move(state));
  }
  dec.rho = PairDensityMatrix::trusted(prob.reconstruct(u));
  res.eof_estimate = dec.avg_entropy;
  res.best_decomposition = std::move(dec);
  return res;
}

struct CertifyReport {
  double eof_estimate = 0.0;
  double F = 0.0, G = 0.0, s = 0.0, best = 0.0;
  double gap_F = 0.0, gap_G = 0.0, gap_s = 0.0;
  RoofResult roof;
};

inline constexpr double kCertifySlack = 1e-6;

/// Runs the roof search and checks eof >= max{F, G, s} - 1e-6.
inline CertifyReport certify_bounds(const PairDensityMatrix& rho, const RoofSettings& settings = {}) {
  CertifyReport rep;
  rep.roof = eof_convex_roof(rho, settings);
  const auto b = best_bound(rho, settings.log_base);
  rep.eof_estimate = rep.roof.eof_estimate;
  rep.F = b.F;
  rep.G = b.G;
  rep.s = b.s;
  rep.best = b.best;
  rep.gap_F = rep.eof_estimate - b.F;
  rep.gap_G = rep.eof_estimate - b.G;
  rep.gap_s = rep.eof_estimate - b.s;
  if (rep.eof_estimate < b.best - kCertifySlack)
    throw Error(ErrorKind::certification_failure,
                "roof estimate " + std::to_string(rep.eof_estimate) + " below lower bound " + std::to_string(b.best));
  return rep;
}

}  // namespace pairent
