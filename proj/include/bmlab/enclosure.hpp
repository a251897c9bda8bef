#pragma once

#include "bmlab/rational.hpp"

namespace bmlab {

/// Closed rational interval [lo, hi] certified to contain a real number.
/// Irrational constants (n-th roots, logarithms) are handled through these so
/// inequalities between them can still be decided rigorously.
struct Enclosure {
  Rational lo;
  Rational hi;

  static Enclosure exact(const Rational& x) { return {x, x}; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
/// Requires b to exclude zero.
Enclosure operator/(const Enclosure& a, const Enclosure& b);
Enclosure pow(const Enclosure& a, unsigned long exponent);

/// x^(1/n) for x >= 0, bracketed by exact bisection to width 2^-bits.
Enclosure nth_root(const Rational& x, unsigned n, unsigned bits = 128);
/// Natural log of x > 0 with directed-rounding bounds.
Enclosure log(const Rational& x, unsigned bits = 128);
/// x^e for x>0 and rational exponent e = p/q.
Enclosure rational_power(const Rational& x, const Rational& e, unsigned bits = 128);

/// Three-valued comparisons: true only when certified.
inline bool certainly_le(const Enclosure& a, const Enclosure& b) { return a.hi <= b.lo; }
inline bool certainly_lt(const Enclosure& a, const Enclosure& b) { return a.hi < b.lo; }

/// ceil of a real number known through an enclosure; throws Domain when the
/// enclosure straddles an integer after refinement is exhausted by the caller.
Integer certified_ceil(const Enclosure& e);

}  // namespace bmlab
