#include "parpush/rational.hpp"

#include <cctype>

#include "parpush/error.hpp"

namespace parpush {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingSection: return "MissingSection";
    case ErrorCode::MalformedBundle: return "MalformedBundle";
    case ErrorCode::InvalidCovering: return "InvalidCovering";
    case ErrorCode::NonIntegralGenus: return "NonIntegralGenus";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::FlagOverUnmarkedPoint: return "FlagOverUnmarkedPoint";
    case ErrorCode::MisalignedResidues: return "MisalignedResidues";
    case ErrorCode::MergeConflict: return "MergeConflict";
    case ErrorCode::NoConsistentAssignment: return "NoConsistentAssignment";
    case ErrorCode::AmbiguousAssignment: return "AmbiguousAssignment";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NotTorusPreserving: return "NotTorusPreserving";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
  }
  return "UnknownError";
}

Rational::Rational(long long value) {
  // mpz_class has no long long constructor.
  value_ = mpq_class(Integer(std::to_string(value)));
}

Rational Rational::normalize(const Integer& p, const Integer& q) {
  if (q == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  Rational r;
  r.value_ = mpq_class(p, q);
  r.value_.canonicalize();
  return r;
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-') {
    throw Error(ErrorCode::ParseError, "not a rational literal: '" + std::string(text) + "'");
  }
  return normalize(Integer(std::string(num)), Integer(std::string(den)));
}

Integer Rational::floor() const {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

Rational Rational::frac_part() const { return *this - Rational(floor()); }

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

std::string Rational::to_string() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  value_ /= o.value_;
  return *this;
}

}  // namespace parpush
