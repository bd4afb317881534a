#include "blform/rational.hpp"

#include <cctype>

#include "blform/exceptions.hpp"

namespace blform {

namespace {

// Digits with optional leading sign; no whitespace, no empty body.
bool valid_integer_text(const std::string& text) {
  std::size_t start = 0;
  if (start < text.size() && (text[start] == '+' || text[start] == '-')) ++start;
  if (start == text.size()) return false;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

}  // namespace

Rational frac(long long n, long long d) {
  if (d == 0) throw InputError("zero denominator");
  // The two-argument constructor canonicalizes (sign into the numerator,
  // gcd reduced); the raw-string constructor does not, so it is never used.
  return Rational(Integer(n), Integer(d));
}

Rational parse_rational(const std::string& text) {
  const std::size_t slash = text.find('/');
  const std::string num_text = text.substr(0, slash);
  if (!valid_integer_text(num_text)) {
    throw InputError("malformed rational '" + text + "'");
  }
  Integer num(num_text);
  Integer den(1);
  if (slash != std::string::npos) {
    const std::string den_text = text.substr(slash + 1);
    if (!valid_integer_text(den_text)) {
      throw InputError("malformed rational '" + text + "'");
    }
    den = Integer(den_text);
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
  }
  return Rational(num, den);
}

std::string rational_string(const Rational& value) { return value.str(); }

std::size_t numerator_bit_length(const Rational& value) {
  const Integer num = boost::multiprecision::abs(boost::multiprecision::numerator(value));
  if (num == 0) return 0;
  return static_cast<std::size_t>(boost::multiprecision::msb(num)) + 1;
}

}  // namespace blform
