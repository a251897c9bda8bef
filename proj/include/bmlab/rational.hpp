#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bmlab {

/// Error categories; the CLI maps them onto exit codes.
enum class ErrorKind { Input, Capacity, Domain };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& msg) { throw Error(ErrorKind::Input, msg); }
[[noreturn]] inline void fail_domain(const std::string& msg) { throw Error(ErrorKind::Domain, msg); }
[[noreturn]] inline void fail_capacity(const std::string& msg) {
  throw Error(ErrorKind::Capacity, msg);
}

/// Arbitrary-precision rational, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

/// p/q in lowest terms; mpq_class(p, q) alone does not reduce.
inline Rational frac(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Parses "p/q" or "p". Decimal points and exponents are rejected.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);
Rational pow(const Rational& base, unsigned long exponent);
Integer pow(const Integer& base, unsigned long exponent);
Rational abs(const Rational& r);

/// Exact conversion of a finite double (dyadic) to a rational.
Rational from_double(double x);

long to_long(const Integer& z);

inline double to_double(const Rational& r) { return r.get_d(); }

/// Sign of a rational: -1, 0, +1.
inline int sign(const Rational& r) { return sgn(r); }

}  // namespace bmlab
