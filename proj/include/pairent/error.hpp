#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairent {

enum class ErrorKind {
  zero_vector,
  dimension_mismatch,
  not_hermitian,
  trace_violation,
  negative_diagonal,
  psd_violation,
  domain_error,
  dimension_too_large,
  rank_error,
  certification_failure,
  tolerance_exceeded,
  parse_error,
};

/// Machine-readable reason string, also used as the CLI failure reason.
constexpr std::string_view reason_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::zero_vector: return "zero_vector";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::not_hermitian: return "not_hermitian";
    case ErrorKind::trace_violation: return "trace_violation";
    case ErrorKind::negative_diagonal: return "negative_diagonal";
    case ErrorKind::psd_violation: return "psd_violation";
    case ErrorKind::domain_error: return "domain_error";
    case ErrorKind::dimension_too_large: return "dimension_too_large";
    case ErrorKind::rank_error: return "rank_error";
    case ErrorKind::certification_failure: return "certification_failure";
    case ErrorKind::tolerance_exceeded: return "tolerance_exceeded";
    case ErrorKind::parse_error: return "parse_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(reason_of(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view reason() const noexcept { return reason_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace pairent
