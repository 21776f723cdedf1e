#include "costshare/rational.hpp"

#include <cctype>

#include "costshare/error.hpp"

namespace costshare {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-') {
    throw Error(ErrorCode::kParseError, "not a rational literal: '" + std::string(text) + "'");
  }
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) {
    throw Error(ErrorCode::kParseError, "zero denominator in '" + std::string(text) + "'");
  }
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

Integer floor_of(const Rational& value) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLp: return "MALFORMED_LP";
    case ErrorCode::kNotOptimal: return "NOT_OPTIMAL";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kValidationError: return "VALIDATION_ERROR";
    case ErrorCode::kUnknownLabel: return "UNKNOWN_LABEL";
    case ErrorCode::kPathLimitExceeded: return "PATH_LIMIT_EXCEEDED";
    case ErrorCode::kScaleExceeded: return "SCALE_EXCEEDED";
    case ErrorCode::kUnsupportedFamily: return "UNSUPPORTED_FAMILY";
    case ErrorCode::kNotMstGame: return "NOT_MST_GAME";
    case ErrorCode::kCoreRequired: return "CORE_REQUIRED";
    case ErrorCode::kNotStar: return "NOT_STAR";
    case ErrorCode::kInvalidWitness: return "INVALID_WITNESS";
    case ErrorCode::kNotSe: return "NOT_SE";
    case ErrorCode::kNotMetric: return "NOT_METRIC";
    case ErrorCode::kUnknownFixture: return "UNKNOWN_FIXTURE";
  }
  return "UNKNOWN";
}

}  // namespace costshare
