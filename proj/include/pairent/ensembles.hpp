#pragma once

// Random pure-state decompositions and the stochastic lower-bound
// experiments built on them. Weights p_k and the squared coefficients of
// every member state are drawn from the flat Dirichlet distribution;
// coefficients are the non-negative square roots.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pairent/bounds.hpp"
#include "pairent/entropy.hpp"
#include "pairent/measures.hpp"
#include "pairent/pairstate.hpp"
#include "pairent/parallel.hpp"

namespace pairent {

struct EnsembleSample {
  std::size_t dim = 0;
  std::vector<double> weights;         // p_k
  std::vector<PurePairState> states;   // psi_k
  PairDensityMatrix rho = PairDensityMatrix::trusted(CMatrix::identity(2));
  double avg_entropy = 0.0;            // sum_k p_k S(psi_k)
  LogBase log_base = LogBase::two;

  std::size_t members() const noexcept { return states.size(); }
};

/// How many members each sampled decomposition gets. The default draws K
/// uniformly from {1, ..., d}, the decomposition length of the convex-roof
/// sum; {d, ..., 2d} and a fixed K are available for comparison.
struct KPolicy {
  enum class Kind { fixed, one_to_dim, dim_to_twice_dim } kind = Kind::one_to_dim;
  std::size_t fixed_members = 0;

  static KPolicy fixed(std::size_t k) { return {Kind::fixed, k}; }
  static KPolicy up_to_dim() { return {Kind::one_to_dim, 0}; }
  static KPolicy dim_to_twice_dim() { return {Kind::dim_to_twice_dim, 0}; }

  std::string describe() const {
    switch (kind) {
      case Kind::fixed: return "fixed:" + std::to_string(fixed_members);
      case Kind::one_to_dim: return "uniform{1..d}";
      case Kind::dim_to_twice_dim: return "uniform{d..2d}";
    }
    return "unknown";
  }
};

namespace detail {

/// Uniform on [0, 1) from the top 53 bits; mt19937_64 output is fully
/// specified, so samples are identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Flat Dirichlet draw via normalized unit exponentials.
inline std::vector<double> flat_dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> e(n);
  double total = 0.0;
  for (auto& v : e) {
    v = -std::log1p(-uniform01(rng));
    total += v;
  }
  if (total <= 0.0) {
    std::fill(e.begin(), e.end(), 1.0 / static_cast<double>(n));
    return e;
  }
  for (auto& v : e) v /= total;
  return e;
}

inline std::size_t draw_members(std::mt19937_64& rng, std::size_t d, const KPolicy& policy) {
  const auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(hi - lo + 1));
  };
  switch (policy.kind) {
    case KPolicy::Kind::fixed: return std::max<std::size_t>(1, policy.fixed_members);
    case KPolicy::Kind::one_to_dim: return pick(1, d);
    case KPolicy::Kind::dim_to_twice_dim: return pick(d, 2 * d);
  }
  return d;
}

inline EnsembleSample draw_ensemble(std::mt19937_64& rng, std::size_t d, std::size_t k, LogBase base) {
  EnsembleSample s;
  s.dim = d;
  s.log_base = base;
  s.weights = flat_dirichlet(rng, k);
  s.states.reserve(k);
  CMatrix rho(d, d);
  for (std::size_t m = 0; m < k; ++m) {
    const auto sq = flat_dirichlet(rng, d);
    std::vector<complex> c(d);
    std::transform(sq.begin(), sq.end(), c.begin(), [](double v) { return complex(std::sqrt(v), 0.0); });
    auto psi = make_pure(d, std::move(c));
    const double p = s.weights[m];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) rho(i, j) += p * psi[i] * std::conj(psi[j]);
    s.avg_entropy += p * entropy_pure(psi, base);
    s.states.push_back(std::move(psi));
  }
  s.rho = PairDensityMatrix::trusted(std::move(rho));
  return s;
}

}  // namespace detail

/// One decomposition with K members, deterministic in `seed`.
inline EnsembleSample sample_ensemble(std::size_t d, std::size_t k, std::uint64_t seed,
                                      LogBase base = LogBase::two) {
  if (d < 2) throw Error(ErrorKind::domain_error, "dimension must be at least 2");
  if (k < 1) throw Error(ErrorKind::domain_error, "at least one member is required");
  std::mt19937_64 rng(seed);
  return detail::draw_ensemble(rng, d, k, base);
}

/// One decomposition whose member count is drawn from `policy` using the
/// same generator that then draws the sample.
inline EnsembleSample sample_ensemble(std::size_t d, const KPolicy& policy, std::uint64_t seed,
                                      LogBase base = LogBase::two) {
  if (d < 2) throw Error(ErrorKind::domain_error, "dimension must be at least 2");
  std::mt19937_64 rng(seed);
  const std::size_t k = detail::draw_members(rng, d, policy);
  return detail::draw_ensemble(rng, d, k, base);
}

struct ScatterRecord {
  std::size_t index = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::size_t members = 0;
  double negativity = 0.0;
  double avg_entropy = 0.0;
  double F = 0.0;
  double G = 0.0;
  double s = 0.0;
  double best = 0.0;
};

inline constexpr double kBoundSlack = 1e-9;

struct Fig1Result {
  std::vector<ScatterRecord> records;
  std::size_t g_violations = 0;
  std::size_t f_violations = 0;
};

namespace detail {

inline std::vector<ScatterRecord> scatter(std::size_t d, std::size_t num, const KPolicy& policy,
                                          std::uint64_t seed, LogBase base) {
  std::vector<ScatterRecord> out(num);
  parallel_for(num, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, i);
    const auto sample = sample_ensemble(d, policy, s, base);
    const auto b = best_bound(sample.rho, base);
    auto& r = out[i];
    r.index = i;
    r.dim = d;
    r.seed = s;
    r.members = sample.members();
    r.negativity = b.negativity;
    r.avg_entropy = sample.avg_entropy;
    r.F = b.F;
    r.G = b.G;
    r.s = b.s;
    r.best = b.best;
  });
  return out;
}

}  // namespace detail

/// Average decomposition entropy against G (and F) for `num` random
/// decompositions. A violation is a bound exceeding the average entropy by
/// more than 1e-9.
inline Fig1Result run_fig1_experiment(std::size_t d, std::size_t num, const KPolicy& policy, std::uint64_t seed,
                                      LogBase base = LogBase::two) {
  Fig1Result res;
  res.records = detail::scatter(d, num, policy, seed, base);
  for (const auto& r : res.records) {
    if (r.G > r.avg_entropy + kBoundSlack) ++res.g_violations;
    if (r.F > r.avg_entropy + kBoundSlack) ++res.f_violations;
  }
  return res;
}

struct Fig2Result {
  std::vector<ScatterRecord> records;                  // ascending negativity
  std::vector<std::pair<double, double>> s_curve;      // (N, s(N)) on a uniform grid
  double frac_F = 0.0;  // fraction of samples where F attains max{F, G, s}
  double frac_G = 0.0;
  double frac_s = 0.0;
};

inline constexpr double kTieSlack = 1e-12;
inline constexpr std::size_t kCurvePoints = 201;

/// Dominance fractions count every bound within 1e-12 of the maximum, so
/// ties credit all of the tied bounds.
inline void dominance_fractions(std::span<const ScatterRecord> records, double& frac_F, double& frac_G,
                                double& frac_s) {
  std::size_t nf = 0, ng = 0, ns = 0;
  for (const auto& r : records) {
    if (r.F >= r.best - kTieSlack) ++nf;
    if (r.G >= r.best - kTieSlack) ++ng;
    if (r.s >= r.best - kTieSlack) ++ns;
  }
  const double n = records.empty() ? 1.0 : static_cast<double>(records.size());
  frac_F = nf / n;
  frac_G = ng / n;
  frac_s = ns / n;
}

inline Fig2Result run_fig2_experiment(std::size_t d, std::size_t num, std::uint64_t seed,
                                      LogBase base = LogBase::two, const KPolicy& policy = KPolicy{}) {
  Fig2Result res;
  res.records = detail::scatter(d, num, policy, seed, base);
  std::stable_sort(res.records.begin(), res.records.end(),
                   [](const ScatterRecord& a, const ScatterRecord& b) { return a.negativity < b.negativity; });
  const double n_max = (static_cast<double>(d) - 1.0) / 2.0;
  res.s_curve.reserve(kCurvePoints);
  for (std::size_t i = 0; i < kCurvePoints; ++i) {
    const double n = n_max * static_cast<double>(i) / static_cast<double>(kCurvePoints - 1);
    res.s_curve.emplace_back(n, bound_s(n, d, base));
  }
  dominance_fractions(res.records, res.frac_F, res.frac_G, res.frac_s);
  return res;
}

}  // namespace pairent
