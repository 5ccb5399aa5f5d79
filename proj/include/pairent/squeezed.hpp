#pragma once

// Two-mode squeezed vacuum c_n = tanh^n(r) / cosh(r), truncated in Fock
// space, and the closed forms for its negativity, entropy and F bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pairent/bounds.hpp"
#include "pairent/entropy.hpp"
#include "pairent/error.hpp"
#include "pairent/measures.hpp"
#include "pairent/pairstate.hpp"
#include "pairent/parallel.hpp"

namespace pairent {

inline constexpr double kDefaultTailThreshold = 1e-30;

struct SqueezedState {
  double r = 0.0;
  std::size_t n_max = 0;
  PurePairState state = make_pure(2, {1.0, 0.0});
  double tail_weight = 0.0;  // tanh^{2(n_max+1)}(r), the probability cut off
};

inline constexpr std::size_t kMaxFockLevels = 10'000'000;

struct Truncation {
  std::size_t n_max = 0;
  double tail_weight = 0.0;
};

/// Smallest N with tanh^{2(N+1)}(r) < tail_threshold, and that tail.
inline Truncation truncation_for(double r, double tail_threshold) {
  if (r == 0.0) return {};
  const double t2 = std::tanh(r) * std::tanh(r);
  const double log_t2 = std::log(t2);
  if (!(log_t2 < 0.0)) throw Error(ErrorKind::domain_error, "squeezing too large to truncate");
  // Start one below the real-valued estimate, then step until the tail fits.
  const double est = std::log(tail_threshold) / log_t2 - 1.0;
  if (est > static_cast<double>(kMaxFockLevels))
    throw Error(ErrorKind::domain_error, "truncation would exceed " + std::to_string(kMaxFockLevels) + " levels");
  std::size_t n = est > 1.0 ? static_cast<std::size_t>(est) - 1 : 0;
  while (std::exp(static_cast<double>(n + 1) * log_t2) >= tail_threshold) ++n;
  return {n, std::exp(static_cast<double>(n + 1) * log_t2)};
}

/// Keeps Fock levels 0..n_max with n_max the smallest N such that
/// tanh^{2(N+1)}(r) < tail_threshold, then renormalizes. A single level
/// (r = 0, or r so small that the first excited level is already below the
/// threshold) is padded with a zero second coefficient.
inline SqueezedState make_squeezed(double r, double tail_threshold = kDefaultTailThreshold) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorKind::domain_error, "squeezing parameter must be >= 0");
  if (!(tail_threshold > 0.0 && tail_threshold <= 1e-6))
    throw Error(ErrorKind::domain_error, "tail threshold must lie in (0, 1e-6]");
  SqueezedState sq;
  sq.r = r;
  const auto cut = truncation_for(r, tail_threshold);
  const std::size_t n = cut.n_max;
  const double t = std::tanh(r);
  sq.n_max = n;
  sq.tail_weight = cut.tail_weight;
  std::vector<complex> c(std::max<std::size_t>(2, n + 1), complex{});
  double amp = 1.0 / std::cosh(r);
  for (std::size_t k = 0; k <= n; ++k) {
    c[k] = amp;
    amp *= t;
  }
  const std::size_t dim = c.size();
  sq.state = make_pure(dim, std::move(c));
  return sq;
}

struct SqueezedMeasures {
  double N = 0.0;
  double S = 0.0;
  double F = 0.0;
};

/// Switch point of the Heaviside term, cosh^2 r = 2.
inline double squeezed_switch_point() { return std::log(1.0 + std::sqrt(2.0)); }

/// Extra term switched on above r*: cosh^-2 log cosh^-2 - tanh^2 log tanh^2.
/// Defined for every r so both branches can be compared near the switch.
inline double switch_bracket(double r, LogBase base = LogBase::two) {
  const double inv_ch2 = 1.0 / (std::cosh(r) * std::cosh(r));
  const double th2 = std::tanh(r) * std::tanh(r);
  return (xlogx(inv_ch2) - xlogx(th2)) / ln_of_base(base);
}

/// Jump of F at r*: the gap between the two branches there. The gap is
/// sampled at r* +- delta and averaged, which cancels its linear slope,
/// so the result measures a discontinuity rather than the O(delta) change.
inline double switch_jump(double delta = 1e-6, LogBase base = LogBase::two) {
  const double rs = squeezed_switch_point();
  return std::abs(0.5 * (switch_bracket(rs - delta, base) + switch_bracket(rs + delta, base)));
}

/// N = e^r sinh r,
/// S = cosh^2 log cosh^2 - sinh^2 log sinh^2,
/// F = S + Theta(1/2 - cosh^-2) [cosh^-2 log cosh^-2 - tanh^2 log tanh^2],
/// with Theta(0) = 0.
inline SqueezedMeasures closed_form_measures(double r, LogBase base = LogBase::two) {
  if (!(r >= 0.0)) throw Error(ErrorKind::domain_error, "squeezing parameter must be >= 0");
  SqueezedMeasures m;
  if (r == 0.0) return m;
  const double k = ln_of_base(base);
  const double ch2 = std::cosh(r) * std::cosh(r);
  const double sh2 = std::sinh(r) * std::sinh(r);
  m.N = std::exp(r) * std::sinh(r);
  m.S = (xlogx(ch2) - xlogx(sh2)) / k;
  const double step = (0.5 - 1.0 / ch2) > 0.0 ? 1.0 : 0.0;
  m.F = m.S + step * switch_bracket(r, base);
  return m;
}

struct TruncationReport {
  double r = 0.0;
  std::size_t n_max = 0;
  double tail_weight = 0.0;
  double tolerance = 0.0;
  double N_numeric = 0.0, N_closed = 0.0;
  double S_numeric = 0.0, S_closed = 0.0;
  double F_numeric = 0.0, F_closed = 0.0;
  // Above r* the closed-form F does not follow from the alpha definition of
  // F, so a mismatch there is reported rather than thrown.
  bool F_agrees = false;
  std::vector<std::pair<std::size_t, double>> s_by_dim;  // (d, s(N, d)) for growing d
  bool s_vanishing = false;
};

/// Compares the truncated state's measures (measures and bounds modules)
/// with the closed forms. Throws tolerance_exceeded when N or S differ by
/// more than max(1e-8, 10 * tail_threshold), or when the numeric F exceeds S.
inline TruncationReport verify_against_truncation(double r, double tail_threshold = kDefaultTailThreshold,
                                                  LogBase base = LogBase::two) {
  if (!(r >= 0.0 && r <= 3.0)) throw Error(ErrorKind::domain_error, "r outside [0, 3]");
  const auto sq = make_squeezed(r, tail_threshold);
  const auto cf = closed_form_measures(r, base);
  TruncationReport rep;
  rep.r = r;
  rep.n_max = sq.n_max;
  rep.tail_weight = sq.tail_weight;
  rep.tolerance = std::max(1e-8, 10.0 * tail_threshold);
  rep.N_numeric = negativity(sq.state);
  rep.S_numeric = entropy_pure(sq.state, base);
  rep.F_numeric = bound_F(sq.state, base);
  rep.N_closed = cf.N;
  rep.S_closed = cf.S;
  rep.F_closed = cf.F;

  // s(N) at this negativity over growing truncation dimensions.
  bool decreasing = true;
  double prev = 0.0;
  for (std::size_t d : {8u, 16u, 32u, 64u}) {
    const double n = std::min(cf.N, (static_cast<double>(d) - 1.0) / 2.0);
    const double s = bound_s(n, d, base);
    if (!rep.s_by_dim.empty() && !(s < prev)) decreasing = false;
    rep.s_by_dim.emplace_back(d, s);
    prev = s;
  }
  rep.s_vanishing = decreasing || r == 0.0;

  auto check = [&](const char* what, double a, double b) {
    if (std::abs(a - b) > rep.tolerance)
      throw Error(ErrorKind::tolerance_exceeded, std::string(what) + " numeric " + std::to_string(a) +
                                                     " vs closed form " + std::to_string(b) + " at r=" +
                                                     std::to_string(r) + ", n_max=" + std::to_string(sq.n_max));
  };
  check("N", rep.N_numeric, rep.N_closed);
  check("S", rep.S_numeric, rep.S_closed);
  rep.F_agrees = std::abs(rep.F_numeric - rep.F_closed) <= rep.tolerance;
  if (rep.F_numeric > rep.S_numeric + rep.tolerance)
    throw Error(ErrorKind::tolerance_exceeded, "numeric F " + std::to_string(rep.F_numeric) + " above S " +
                                                   std::to_string(rep.S_numeric) + " at r=" + std::to_string(r));
  return rep;
}

struct SweepRow {
  double r = 0.0, S = 0.0, F = 0.0, N = 0.0;
  std::size_t n_max = 0;
  double tail_weight = 0.0;
};

/// Uniform r grid with closed-form S, F, N plus the truncation size each
/// point would need at the default tail threshold.
inline std::vector<SweepRow> sweep_curve(double r_min, double r_max, std::size_t steps,
                                         LogBase base = LogBase::two,
                                         double tail_threshold = kDefaultTailThreshold) {
  if (!(r_min >= 0.0 && r_min < r_max)) throw Error(ErrorKind::domain_error, "need 0 <= r_min < r_max");
  if (steps < 2) throw Error(ErrorKind::domain_error, "need at least two steps");
  std::vector<SweepRow> rows(steps);
  parallel_for(steps, [&](std::size_t i) {
    const double r = i + 1 == steps ? r_max
                                    : r_min + (r_max - r_min) * static_cast<double>(i) /
                                                  static_cast<double>(steps - 1);
    const auto m = closed_form_measures(r, base);
    const auto cut = truncation_for(r, tail_threshold);
    rows[i] = SweepRow{r, m.S, m.F, m.N, cut.n_max, cut.tail_weight};
  });
  return rows;
}

}  // namespace pairent
