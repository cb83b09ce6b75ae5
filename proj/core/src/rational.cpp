#include "urysohn/rational.hpp"

#include <cctype>
#include <ostream>

#include "urysohn/error.hpp"

namespace urysohn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precondition:
      return "precondition";
    case ErrorKind::parse:
      return "parse";
    case ErrorKind::internal:
      return "internal";
  }
  return "internal";
}

namespace {

mpz_class parse_integer(std::string_view digits, std::string_view whole) {
  std::size_t i = 0;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) i = 1;
  if (i == digits.size()) fail_parse("malformed rational '" + std::string(whole) + "'");
  for (std::size_t j = i; j < digits.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(digits[j]))) {
      fail_parse("malformed rational '" + std::string(whole) + "'");
    }
  }
  std::string s(digits[0] == '+' ? digits.substr(1) : digits);
  return mpz_class(s, 10);
}

}  // namespace

Rational::Rational(std::int64_t value) : value_(mpz_class(std::to_string(value), 10)) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail_precondition("rational with zero denominator");
  value_ = mpq_class(mpz_class(std::to_string(num), 10), mpz_class(std::to_string(den), 10));
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(mpq_class(parse_integer(text, text)));
  const mpz_class num = parse_integer(text.substr(0, slash), text);
  const auto den_text = text.substr(slash + 1);
  if (!den_text.empty() && den_text[0] == '-') fail_parse("negative denominator in '" + std::string(text) + "'");
  const mpz_class den = parse_integer(den_text, text);
  if (den == 0) fail_parse("zero denominator in '" + std::string(text) + "'");
  return Rational(mpq_class(num, den));
}

std::string Rational::str() const {
  return value_.get_num().get_str(10) + "/" + value_.get_den().get_str(10);
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

Rational Rational::pow(long exponent) const {
  if (exponent < 0) {
    if (is_zero()) fail_precondition("zero raised to a negative power");
    return Rational(1) / pow(-exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(mpq_class(num, den));
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) fail_precondition("division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace urysohn
