"""Exact rational scalars and small combinatorial primitives.

Everything in this module is fractions.Fraction arithmetic: no floats, no
rounding. Callers convert to float only at the moment they compare an exact
value against a numeric approximation, never inside these routines.

Conventions:

* binomial(n, k) vanishes outside 0 <= k <= n, so sums written against
  binomial weights need no explicit range guards.
* deg_falling_factorial(x, n, lam) is the product
  x * (x - lam) * (x - 2*lam) * ... * (x - (n-1)*lam).
  lam = 0 recovers the plain power x**n and lam = 1 the ordinary falling
  factorial, so the classical limit is the same code path with lam = 0.
* Rational values serialize as "num/den" with the denominator omitted when
  it is 1; str() on a Fraction already produces exactly that, and Fraction
  guarantees the canonical form (lowest terms, positive denominator).
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb, factorial

Rational = Fraction
# Deformation parameters are plain exact rationals; 0 selects the classical
# limit directly rather than as a numeric limit.
Lambda = Fraction

_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?\Z")
_RATIONAL_CHARS = set("0123456789/+-")


def parse_rational(text: str) -> Fraction:
    """Parse "num" or "num/den" into a Fraction.

    Decimal points and exponent syntax are rejected on purpose: no value may
    enter through float notation. Errors point at the offending character.
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        for i, ch in enumerate(s):
            if ch not in _RATIONAL_CHARS:
                raise ValueError(
                    f"invalid rational {text!r}: unexpected character {ch!r} at position {i}"
                )
        raise ValueError(f"invalid rational {text!r}: expected 'num' or 'num/den'")
    num, _, den = s.partition("/")
    if den:
        if int(den) == 0:
            raise ValueError(f"invalid rational {text!r}: zero denominator")
        return Fraction(int(num), int(den))
    return Fraction(int(num))


def format_rational(q: Fraction) -> str:
    """Canonical "num/den" form, "num" alone when the denominator is 1."""
    return str(q)


def binomial(n: int, k: int) -> Fraction:
    """C(n, k) for integer n >= 0, zero outside 0 <= k <= n.

    The vanishing convention at k < 0 matters: some recurrences are probed
    with a C(n, -1) term that must drop out silently.
    """
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got n={n}")
    if k < 0 or k > n:
        return Fraction(0)
    return Fraction(comb(n, k))


def falling_factorial(x: Fraction, n: int) -> Fraction:
    """x * (x-1) * ... * (x-n+1); the empty product at n = 0."""
    if n < 0:
        raise ValueError(f"falling_factorial needs n >= 0, got n={n}")
    out = Fraction(1)
    for j in range(n):
        out *= x - j
    return out


def deg_falling_factorial(x: Fraction, n: int, lam: Fraction) -> Fraction:
    """x * (x-lam) * ... * (x-(n-1)*lam); the empty product at n = 0."""
    if n < 0:
        raise ValueError(f"deg_falling_factorial needs n >= 0, got n={n}")
    out = Fraction(1)
    for j in range(n):
        out *= x - j * lam
    return out


def beta_exact(a: int, b: int) -> Fraction:
    """Euler beta at positive integer arguments: (a-1)!(b-1)!/(a+b-1)!."""
    if a < 1 or b < 1:
        raise ValueError(f"beta_exact needs positive integer arguments, got ({a}, {b})")
    return Fraction(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))
