#pragma once

// Numerical certificate that F is convex on { x_i >= 0, |x|^2 <= 1/4 }.
//
// F splits as a sum of terms F_k(x) = g2^2 [H_C(r) - f(r) log g2^2] with
// r = |x| and g2 = x_k / r. Each F_k has a Hessian that decomposes into a
// 2x2 block [[alpha, beta], [beta, gamma]] on span{grad r, grad g2} plus
// eta times the identity on the complement, so F_k is convex iff alpha,
// eta and alpha*gamma - beta^2 are non-negative on (0, 1/2) x (0, 1].
//
// All closed forms are evaluated in natural units and rescaled once at the
// end; the constants 1 and 3 appearing in G01, G11, G02 come from
// d/dg (g^2 ln g^2) and only hold for the natural log.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "pairent/bounds.hpp"
#include "pairent/entropy.hpp"
#include "pairent/error.hpp"
#include "pairent/linalg.hpp"
#include "pairent/parallel.hpp"

namespace pairent {

/// H_C(r) (in the requested base), f(r) and their first two derivatives.
struct HcTerms {
  double hc = 0.0, hc1 = 0.0, hc2 = 0.0;
  double f = 0.0, f1 = 0.0, f2 = 0.0;
};

struct ConvexityPoint {
  double r = 0.0, g2 = 0.0;
  double HC = 0.0, f = 0.0, HC1 = 0.0, HC2 = 0.0, f1 = 0.0, f2 = 0.0;
  double G10 = 0.0, G01 = 0.0, G20 = 0.0, G11 = 0.0, G02 = 0.0;
  double alpha = 0.0, beta = 0.0, gamma_ = 0.0, eta = 0.0, det = 0.0;
};

struct GridCertificate {
  std::size_t grid_size = 0;
  double margin = 0.0;
  LogBase log_base = LogBase::two;
  double min_alpha = std::numeric_limits<double>::infinity();
  double min_eta = std::numeric_limits<double>::infinity();
  double min_det = std::numeric_limits<double>::infinity();
  double min_G10 = std::numeric_limits<double>::infinity();
  double min_G01 = std::numeric_limits<double>::infinity();
  bool pass = false;
  bool det_monotone_in_r = true;  // reported only, never part of `pass`
  std::vector<std::pair<double, double>> failures;  // (r, g2), first kMaxReportedFailures
};

inline constexpr double kSignSlack = 1e-9;
inline constexpr double kEndpointBand = 1e-6;
inline constexpr std::size_t kMaxReportedFailures = 100;

namespace detail {

/// f = (1 - w)/2 written as 2r^2/(1 + w) to avoid cancellation at small r.
struct HalfChord {
  double w, f, a;
};

inline HalfChord half_chord(double r) {
  const double w = std::sqrt(std::max(0.0, (1.0 - 2.0 * r) * (1.0 + 2.0 * r)));
  const double f = 2.0 * r * r / (1.0 + w);
  return {w, f, 1.0 - f};
}

inline double hc_value_nats(double r) {
  const auto c = half_chord(r);
  return -(xlogx(c.f) + (c.f > 0.0 ? c.a * std::log1p(-c.f) : 0.0));
}

inline double f_value(double r) { return half_chord(r).f; }

inline HcTerms hc_terms_nats(double r) {
  HcTerms t;
  const auto c = half_chord(r);
  t.hc = hc_value_nats(r);
  t.f = c.f;
  if (r >= kEndpointBand && 0.5 - r >= kEndpointBand) {
    const double w = c.w;
    const double log_ratio = std::log1p(-c.f) - std::log(c.f);  // ln(a / f)
    t.f1 = 2.0 * r / w;
    t.f2 = 2.0 / (w * w * w);
    t.hc1 = 2.0 * r / w * log_ratio;
    t.hc2 = -4.0 / (w * w) + 2.0 / (w * w * w) * log_ratio;
    return t;
  }
  // One-sided differences inside the endpoint bands, stepping into the domain.
  const double h = kEndpointBand;
  const double dir = r < 0.25 ? 1.0 : -1.0;
  const double r1 = r + dir * h, r2 = r + 2.0 * dir * h;
  const double h0 = t.hc, hh1 = hc_value_nats(r1), hh2 = hc_value_nats(r2);
  const double f0 = t.f, ff1 = f_value(r1), ff2 = f_value(r2);
  t.hc1 = dir * (-3.0 * h0 + 4.0 * hh1 - hh2) / (2.0 * h);
  t.f1 = dir * (-3.0 * f0 + 4.0 * ff1 - ff2) / (2.0 * h);
  const double r3 = r + 3.0 * dir * h;
  t.hc2 = (2.0 * h0 - 5.0 * hh1 + 4.0 * hh2 - hc_value_nats(r3)) / (h * h);
  t.f2 = (2.0 * f0 - 5.0 * ff1 + 4.0 * ff2 - f_value(r3)) / (h * h);
  return t;
}

}  // namespace detail

/// H_C(r) = H2((1 + sqrt(1 - 4r^2))/2) and f(r) = (1 - sqrt(1 - 4r^2))/2
/// with analytic derivatives. H_C and its derivatives are in `base`.
inline HcTerms hc_and_f(double r, LogBase base = LogBase::two) {
  if (!(r >= 0.0 && r <= 0.5)) throw Error(ErrorKind::domain_error, "r outside [0, 1/2]");
  auto t = detail::hc_terms_nats(r);
  const double k = ln_of_base(base);
  t.hc /= k;
  t.hc1 /= k;
  t.hc2 /= k;
  return t;
}

inline ConvexityPoint sylvester_point(double r, double g2, LogBase base = LogBase::two) {
  if (!(r > 0.0 && r < 0.5)) throw Error(ErrorKind::domain_error, "r outside (0, 1/2)");
  if (!(g2 > 0.0 && g2 <= 1.0)) throw Error(ErrorKind::domain_error, "g2 outside (0, 1]");
  const auto t = detail::hc_terms_nats(r);
  const double lg = std::log(g2 * g2);
  const double one_minus = (1.0 - g2) * (1.0 + g2);

  ConvexityPoint p;
  p.r = r;
  p.g2 = g2;
  p.G10 = g2 * g2 * (t.hc1 - t.f1 * lg);
  p.G01 = 2.0 * g2 * (t.hc - t.f * (1.0 + lg));
  p.G20 = g2 * g2 * (t.hc2 - t.f2 * lg);
  p.G11 = 2.0 * g2 * (t.hc1 - t.f1 * (1.0 + lg));
  p.G02 = 2.0 * (t.hc - t.f * (3.0 + lg));
  p.alpha = p.G20;
  p.beta = std::sqrt(one_minus) / r * (p.G11 - p.G01 / r);
  p.eta = (r * p.G10 - g2 * p.G01) / (r * r);
  p.gamma_ = one_minus / (r * r) * p.G02 + p.eta;

  const double k = ln_of_base(base);
  p.HC = t.hc / k;
  p.HC1 = t.hc1 / k;
  p.HC2 = t.hc2 / k;
  p.f = t.f;
  p.f1 = t.f1;
  p.f2 = t.f2;
  for (double* v : {&p.G10, &p.G01, &p.G20, &p.G11, &p.G02, &p.alpha, &p.beta, &p.gamma_, &p.eta}) *v /= k;
  p.det = p.alpha * p.gamma_ - p.beta * p.beta;
  return p;
}

/// Grid coordinates: r spans [eps, 1/2 - eps], g2 spans [eps, 1].
inline double grid_r(std::size_t i, std::size_t n, double eps) {
  return eps + (0.5 - 2.0 * eps) * static_cast<double>(i) / static_cast<double>(n - 1);
}
inline double grid_g2(std::size_t j, std::size_t n, double eps) {
  return j + 1 == n ? 1.0 : eps + (1.0 - eps) * static_cast<double>(j) / static_cast<double>(n - 1);
}

/// Evaluates sylvester_point on an n x n grid and certifies the sign of
/// alpha, eta and the 2x2 determinant. When `dump` is non-null every point
/// is appended to it in (r-major, g2-minor) order.
inline GridCertificate scan_grid(std::size_t n, double eps, LogBase base = LogBase::two,
                                 std::vector<ConvexityPoint>* dump = nullptr) {
  if (n < 100) throw Error(ErrorKind::domain_error, "grid size must be at least 100");
  if (!(eps > 0.0 && eps <= 1e-3)) throw Error(ErrorKind::domain_error, "margin must lie in (0, 1e-3]");

  std::vector<std::vector<ConvexityPoint>> rows(n);
  parallel_for(n, [&](std::size_t i) {
    auto& row = rows[i];
    row.reserve(n);
    const double r = grid_r(i, n, eps);
    for (std::size_t j = 0; j < n; ++j) row.push_back(sylvester_point(r, grid_g2(j, n, eps), base));
  });

  GridCertificate c;
  c.grid_size = n;
  c.margin = eps;
  c.log_base = base;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& p = rows[i][j];
      c.min_alpha = std::min(c.min_alpha, p.alpha);
      c.min_eta = std::min(c.min_eta, p.eta);
      c.min_det = std::min(c.min_det, p.det);
      c.min_G10 = std::min(c.min_G10, p.G10);
      c.min_G01 = std::min(c.min_G01, p.G01);
      const bool bad = p.alpha < -kSignSlack || p.eta < -kSignSlack || p.det < -kSignSlack;
      if (bad && c.failures.size() < kMaxReportedFailures) c.failures.emplace_back(p.r, p.g2);
      if (i > 0) {
        const double prev = rows[i - 1][j].det;
        if (p.det < prev - 1e-12 * std::max(1.0, std::abs(prev))) c.det_monotone_in_r = false;
      }
    }
  }
  c.pass = c.min_alpha >= -kSignSlack && c.min_eta >= -kSignSlack && c.min_det >= -kSignSlack;
  if (dump) {
    dump->reserve(dump->size() + n * n);
    for (auto& row : rows) dump->insert(dump->end(), row.begin(), row.end());
  }
  return c;
}

/// p(z) = (2z - 1)(r H_C' - 2 H_C + 2 f) with r^2 = z(1 - z), z in [1/2, 1].
///
/// On this parametrization sqrt(1 - 4r^2) = 2z - 1, so H_C = H2(z), f = 1 - z
/// and r H_C' = 2 r^2 ln(z/(1-z)) / (2z - 1); the singular factor cancels
/// and p is evaluated from the reduced form below.
inline double p_of_z(double z, LogBase base = LogBase::two) {
  if (!(z >= 0.5 && z <= 1.0)) throw Error(ErrorKind::domain_error, "z outside [1/2, 1]");
  const double y = 1.0 - z;
  const double h = -(xlogx(z) + xlogx(y));
  const double r_hc1 = 2.0 * (y * xlogx(z) - z * xlogx(y));  // 2 z (1-z) ln(z/(1-z))
  const double p = r_hc1 + (2.0 * z - 1.0) * (2.0 * y - 2.0 * h);
  return p / ln_of_base(base);
}

/// F_k(x) = (x_k^2 / r^2) [H_C(r) - f(r) log(x_k^2 / r^2)]; sum_k F_k = F.
inline double f_component(std::span<const double> moduli, std::size_t k, LogBase base = LogBase::two) {
  double q = 0.0;
  for (double v : moduli) q += v * v;
  if (q <= 0.0 || moduli[k] == 0.0) return 0.0;
  if (q > 0.25 + kQuarterSlack) throw Error(ErrorKind::domain_error, "|x|^2 exceeds 1/4");
  const double r = std::sqrt(std::min(q, 0.25));
  const double g = moduli[k] * moduli[k] / q;
  const double val = g * (detail::hc_value_nats(r) - detail::f_value(r) * std::log(g));
  return val / ln_of_base(base);
}

inline constexpr double kHessianStep = 1e-4;

/// Minimum eigenvalue of the symmetrized central-difference Hessian of F
/// at an interior point (|x|^2 <= 1/4 - 1e-4, every component > 1e-4).
inline double hessian_fd_check(std::span<const double> moduli, LogBase base = LogBase::two) {
  double q = 0.0;
  for (double v : moduli) {
    if (!(v > 1e-4)) throw Error(ErrorKind::domain_error, "component too close to zero for the stencil");
    q += v * v;
  }
  // Diagonal stencil points sit up to sqrt(2) h away; all of them must stay inside |x| < 1/2.
  const double reach = std::sqrt(q) + std::sqrt(2.0) * kHessianStep;
  if (!(reach * reach < 0.25)) throw Error(ErrorKind::domain_error, "stencil crosses |x|^2 = 1/4");

  const std::size_t m = moduli.size();
  const double h = kHessianStep;
  std::vector<double> x(moduli.begin(), moduli.end());
  auto eval = [&](std::size_t i, double di, std::size_t j, double dj) {
    auto y = x;
    y[i] += di;
    y[j] += dj;
    return bound_F_of_moduli(y, base);
  };
  const double f0 = bound_F_of_moduli(x, base);
  CMatrix hess(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    hess(i, i) = (eval(i, h, i, 0.0) - 2.0 * f0 + eval(i, -h, i, 0.0)) / (h * h);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v =
          (eval(i, h, j, h) - eval(i, h, j, -h) - eval(i, -h, j, h) + eval(i, -h, j, -h)) / (4.0 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hermitian_eigenvalues(hess).front();
}

inline double hessian_fd_check(const FirstRowVector& x, LogBase base = LogBase::two) {
  std::vector<double> moduli(x.components.size());
  std::transform(x.components.begin(), x.components.end(), moduli.begin(), [](complex z) { return std::abs(z); });
  return hessian_fd_check(moduli, base);
}

}  // namespace pairent
