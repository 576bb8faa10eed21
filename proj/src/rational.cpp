#include "rotkit/rational.hpp"

#include "rotkit/errors.hpp"

#include <cctype>

namespace rotkit {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string trimmed;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
  }
  auto slash = trimmed.find('/');
  std::string num = trimmed.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : trimmed.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw Error(ErrorKind::ParseError, "not a rational literal: '" + std::string(text) + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational ratio(long num, long den) {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Integer floor_of(const Rational& value) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Integer ceil_of(const Rational& value) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

long to_ll(const Integer& value) {
  if (!value.fits_slong_p()) throw Error(ErrorKind::Overflow, "integer does not fit in 64 bits");
  return value.get_si();
}

Rational abs_of(const Rational& value) { return value < 0 ? Rational(-value) : value; }
const Rational& min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }
const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace rotkit
