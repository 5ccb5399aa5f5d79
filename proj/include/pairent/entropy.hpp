#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "pairent/error.hpp"

namespace pairent {

/// Base of every logarithm reported by the library. Entanglement is in
/// ebits (base 2) unless natural units are requested.
enum class LogBase { two, natural };

constexpr std::string_view to_string(LogBase base) noexcept {
  return base == LogBase::two ? "2" : "e";
}

constexpr double ln_of_base(LogBase base) noexcept {
  return base == LogBase::two ? std::numbers::ln2 : 1.0;
}

inline double log_in(LogBase base, double x) { return std::log(x) / ln_of_base(base); }

/// p log p with 0 log 0 = 0, natural log.
inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

/// -sum p_i log p_i in the requested base; zero entries contribute nothing.
inline double shannon_entropy(std::span<const double> probs, LogBase base) {
  double s = 0.0;
  for (double p : probs) s -= xlogx(p);
  return s / ln_of_base(base);
}

/// Negative values within 1e-12 of zero are round-off and become 0; anything
/// further below is a domain error.
inline double clamp_nonnegative(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v >= -1e-12) return 0.0;
  throw Error(ErrorKind::domain_error, std::string(what) + " is negative beyond round-off");
}

inline double binary_entropy(double p, LogBase base) {
  if (p < -1e-12 || p > 1.0 + 1e-12) throw Error(ErrorKind::domain_error, "binary entropy argument outside [0,1]");
  p = std::clamp(p, 0.0, 1.0);
  return -(xlogx(p) + xlogx(1.0 - p)) / ln_of_base(base);
}

}  // namespace pairent
