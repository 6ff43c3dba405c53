#include "varpen/rational.hpp"

#include <cctype>
#include <ostream>
#include <vector>

#include "varpen/errors.hpp"

namespace varpen {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::ZeroEcPresent: return "ZeroEcPresent";
    case ErrorKind::InfiniteExpectation: return "InfiniteExpectation";
    case ErrorKind::EndComponentPresent: return "EndComponentPresent";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorKind::MissingTailValue: return "MissingTailValue";
    case ErrorKind::ZeroVisitDivision: return "ZeroVisitDivision";
    case ErrorKind::TailMismatch: return "TailMismatch";
    case ErrorKind::BoundTooLarge: return "BoundTooLarge";
    case ErrorKind::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorKind::StepLimitExceeded: return "StepLimitExceeded";
  }
  return "Unknown";
}

Rational::Rational(std::int64_t value) : value_(static_cast<long>(value)) {}

Rational::Rational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) {
    throw Error(ErrorKind::ZeroDenominator, "rational with zero denominator");
  }
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(const BigInt& integer) : value_(integer) {}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by zero");
  value_ /= o.value_;
  return *this;
}

BigInt Rational::ceil() const {
  BigInt result;
  mpz_cdiv_q(result.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return result;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::pow(unsigned exponent) const {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), exponent);
  return Rational(num, den);
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal(int significant) const {
  mpf_class f(0, 1024);
  f = value_;
  const int size = gmp_snprintf(nullptr, 0, "%.*Fg", significant, f.get_mpf_t());
  std::vector<char> buffer(static_cast<std::size_t>(size) + 1);
  gmp_snprintf(buffer.data(), buffer.size(), "%.*Fg", significant, f.get_mpf_t());
  return std::string(buffer.data(), static_cast<std::size_t>(size));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view token) {
  std::string_view body = token;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num_text = body.substr(0, slash);
  const std::string_view den_text =
      slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num_text) || !all_digits(den_text)) {
    throw Error(ErrorKind::ParseError, "malformed rational '" + std::string(token) + "'");
  }
  BigInt num(std::string(num_text), 10);
  const BigInt den(std::string(den_text), 10);
  if (den == 0) {
    throw Error(ErrorKind::ZeroDenominator, "zero denominator in '" + std::string(token) + "'");
  }
  if (negative) num = -num;
  return Rational(num, den);
}

std::string format_exact(const Rational& r, int significant) {
  if (r.is_integer()) return r.to_string();
  return r.to_string() + " (~" + r.to_decimal(significant) + ")";
}

}  // namespace varpen
