#include "bmlab/rational.hpp"

#include <cctype>
#include <climits>

namespace bmlab {

Rational parse_rational(std::string_view text) {
  if (text.empty()) fail_input("empty rational");
  std::size_t slash = text.find('/');
  auto check_int = [&](std::string_view part, bool allow_sign) {
    if (part.empty()) fail_input("malformed rational '" + std::string(text) + "'");
    std::size_t start = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) start = 1;
    if (start == part.size()) fail_input("malformed rational '" + std::string(text) + "'");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i])))
        fail_input("malformed rational '" + std::string(text) +
                   "' (expected p/q with integer p, q)");
    }
  };
  std::string_view num = text.substr(0, slash);
  check_int(num, true);
  std::string num_s(num);
  if (num_s[0] == '+') num_s.erase(0, 1);
  Integer p(num_s, 10);
  Integer q(1);
  if (slash != std::string_view::npos) {
    std::string_view den = text.substr(slash + 1);
    check_int(den, false);
    q = Integer(std::string(den), 10);
    if (q == 0) fail_input("zero denominator in '" + std::string(text) + "'");
  }
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Integer floor(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

Integer ceil(const Rational& r) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational out(pow(Integer(base.get_num()), exponent), pow(Integer(base.get_den()), exponent));
  out.canonicalize();
  return out;
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Rational from_double(double x) {
  Rational r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

long to_long(const Integer& z) {
  if (!z.fits_slong_p()) fail_capacity("integer " + z.get_str() + " does not fit in a long");
  return z.get_si();
}

}  // namespace bmlab
