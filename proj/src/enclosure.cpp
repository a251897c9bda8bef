#include "bmlab/enclosure.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>

namespace bmlab {

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  std::array<Rational, 4> p = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p.begin(), p.end()), *std::max_element(p.begin(), p.end())};
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.lo <= 0 && b.hi >= 0) fail_domain("division by an enclosure containing zero");
  Enclosure inv{Rational(1) / b.hi, Rational(1) / b.lo};
  return a * inv;
}

Enclosure pow(const Enclosure& a, unsigned long exponent) {
  Enclosure out = Enclosure::exact(1);
  for (unsigned long i = 0; i < exponent; ++i) out = out * a;
  return out;
}

Enclosure nth_root(const Rational& x, unsigned n, unsigned bits) {
  if (x < 0) fail_domain("nth_root of a negative number");
  if (n == 0) fail_domain("zeroth root");
  Integer rn, rd;
  if (mpz_root(rn.get_mpz_t(), x.get_num_mpz_t(), n) != 0 && mpz_root(rd.get_mpz_t(), x.get_den_mpz_t(), n) != 0) {
    Rational r(rn, rd);
    return {r, r};
  }
  Rational lo = 0;
  Rational hi = std::max(Rational(1), x);
  Rational tol(Integer(1), pow(Integer(2), bits));
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    if (pow(mid, n) <= x)
      lo = mid;
    else
      hi = mid;
  }
  if (pow(lo, n) == x) hi = lo;
  return {lo, hi};
}

namespace {

Rational mpfr_to_rational(mpfr_t v) {
  Rational r;
  mpfr_get_q(r.get_mpq_t(), v);
  return r;
}

}  // namespace

Enclosure log(const Rational& x, unsigned bits) {
  if (x <= 0) fail_domain("log of a non-positive number");
  if (x == 1) return Enclosure::exact(0);
  mpfr_t in, out;
  mpfr_init2(in, bits + 16);
  mpfr_init2(out, bits + 16);
  Enclosure e;
  // Bound the input first, then the log, each with outward rounding.
  mpfr_set_q(in, x.get_mpq_t(), MPFR_RNDD);
  mpfr_log(out, in, MPFR_RNDD);
  e.lo = mpfr_to_rational(out);
  mpfr_set_q(in, x.get_mpq_t(), MPFR_RNDU);
  mpfr_log(out, in, MPFR_RNDU);
  e.hi = mpfr_to_rational(out);
  mpfr_clear(in);
  mpfr_clear(out);
  return e;
}

Enclosure rational_power(const Rational& x, const Rational& e, unsigned bits) {
  if (x <= 0) fail_domain("rational_power of a non-positive base");
  const Integer& p = e.get_num();
  const Integer& q = e.get_den();
  Rational base = x;
  Integer ap = p < 0 ? Integer(-p) : p;
  if (p < 0) base = Rational(1) / x;
  Rational powered = pow(base, static_cast<unsigned long>(to_long(ap)));
  return nth_root(powered, static_cast<unsigned>(to_long(q)), bits);
}

Integer certified_ceil(const Enclosure& e) {
  Integer a = ceil(e.lo);
  Integer b = ceil(e.hi);
  if (a != b) fail_domain("enclosure [" + to_string(e.lo) + ", " + to_string(e.hi) +
                          "] straddles an integer; ceiling undecided");
  return a;
}

}  // namespace bmlab
