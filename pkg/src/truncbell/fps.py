"""Dense exact polynomials and truncated formal power series.

Poly stores coefficients ascending by power over Fraction with trailing
zeros trimmed; the zero polynomial is the empty coefficient tuple (its
degree reports -1). Instances are treated as immutable.

Fps is a power series in t known exactly through a stated truncation order:
coeffs has length order + 1 and every entry lives in one coefficient ring,
either Fraction or Poly (series whose coefficients are polynomials in x).
Those are the only two rings; nothing here is generic beyond them.

Arithmetic keeps the weakest truncation of its operands, so a result's
order always says how far its coefficients can be trusted. Division
shortens the order by the denominator's valuation and refuses to produce
anything with negative powers: there are no Laurent series here, a quotient
that would need one raises instead. exp() requires a zero constant term and
compose() a positive-valuation inner series, which is exactly what makes
both well defined on truncations.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exactnum import falling_factorial, parse_rational

_SCALARS = (int, Fraction)


class Poly:
    """Immutable dense univariate polynomial over Fraction."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        # internal fast path: caller guarantees Fraction entries, trimmed
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def zero(cls) -> "Poly":
        return _POLY_ZERO

    @classmethod
    def one(cls) -> "Poly":
        return _POLY_ONE

    @classmethod
    def x(cls) -> "Poly":
        return _POLY_X

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, power: int, c=1) -> "Poly":
        if power < 0:
            raise ValueError(f"monomial power must be >= 0, got {power}")
        return cls((0,) * power + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = Poly((other,))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            other = Poly((other,))
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if not other:
                return _POLY_ZERO
            f = other if isinstance(other, Fraction) else Fraction(other)
            return Poly._raw(tuple(c * f for c in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _POLY_ZERO
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = _POLY_ONE
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x0) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = Poly((other,))
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly[{self.to_string()}]"

    def to_string(self) -> str:
        """Ascending powers, exact coefficients: "1/2 + -1/3*x + 2*x^2"."""
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*x")
            else:
                parts.append(f"{c}*x^{k}")
        return " + ".join(parts)

    @classmethod
    def from_string(cls, text: str) -> "Poly":
        s = text.strip()
        if s == "0":
            return _POLY_ZERO
        coeffs: dict[int, Fraction] = {}
        for term in s.split(" + "):
            head, _, tail = term.partition("*")
            c = parse_rational(head)
            if not tail:
                power = 0
            elif tail == "x":
                power = 1
            elif tail.startswith("x^"):
                power = int(tail[2:])
            else:
                raise ValueError(f"invalid polynomial term {term!r}")
            if power in coeffs:
                raise ValueError(f"repeated power {power} in {text!r}")
            coeffs[power] = c
        out = [Fraction(0)] * (max(coeffs) + 1)
        for power, c in coeffs.items():
            out[power] = c
        return cls(out)


_POLY_ZERO = Poly._raw(())
_POLY_ONE = Poly._raw((Fraction(1),))
_POLY_X = Poly._raw((Fraction(0), Fraction(1)))


def _zero_like(sample):
    return _POLY_ZERO if isinstance(sample, Poly) else Fraction(0)


def _one_like(sample):
    return _POLY_ONE if isinstance(sample, Poly) else Fraction(1)


def _coerce(value, sample):
    """Bring an int/Fraction scalar into the ring of `sample`."""
    if isinstance(sample, Poly):
        if isinstance(value, Poly):
            return value
        return Poly((value,))
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def _invert(c):
    """Ring inverse of a coefficient; only units are invertible."""
    if isinstance(c, Poly):
        if c.degree != 0:
            raise ValueError(
                f"cannot invert {c!r}: only degree-0 polynomials are units in the Poly ring"
            )
        return Poly((Fraction(1) / c.coeffs[0],))
    if not c:
        raise ZeroDivisionError("cannot invert zero")
    return Fraction(1) / c


class Fps:
    """Formal power series in t, exact through a fixed truncation order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = tuple(coeffs)
        if not cs:
            raise ValueError("a series needs at least its constant term")
        self.coeffs = cs

    @classmethod
    def constant(cls, c, order: int) -> "Fps":
        z = _zero_like(c)
        return cls((c,) + (z,) * order)

    @classmethod
    def t(cls, order: int) -> "Fps":
        if order < 1:
            raise ValueError("the identity series t needs order >= 1")
        return cls((Fraction(0), Fraction(1)) + (Fraction(0),) * (order - 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, n: int):
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient {n} is beyond truncation order {self.order}")
        return self.coeffs[n]

    def egf_coeff(self, n: int):
        """n! times the t^n coefficient: the value a series of the form
        sum a_n t^n / n! stores at index n."""
        return self.coeff(n) * factorial(n)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient; None for the zero series."""
        for i, c in enumerate(self.coeffs):
            if (not c.is_zero) if isinstance(c, Poly) else bool(c):
                return i
        return None

    def truncate(self, order: int) -> "Fps":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return Fps(self.coeffs[: order + 1])

    def map_coeffs(self, fn) -> "Fps":
        return Fps(tuple(fn(c) for c in self.coeffs))

    def __add__(self, other):
        if isinstance(other, Fps):
            n = min(self.order, other.order)
            return Fps(tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])))
        if isinstance(other, _SCALARS + (Poly,)):
            c = _coerce(other, self.coeffs[0])
            return Fps((self.coeffs[0] + c,) + self.coeffs[1:])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Fps(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, Fps):
            n = min(self.order, other.order)
            return Fps(tuple(a - b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])))
        if isinstance(other, _SCALARS + (Poly,)):
            c = _coerce(other, self.coeffs[0])
            return Fps((self.coeffs[0] - c,) + self.coeffs[1:])
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Fps":
        c = _coerce(c, self.coeffs[0])
        return Fps(tuple(a * c for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Fps):
            n = min(self.order, other.order)
            a, b = self.coeffs, other.coeffs
            zero = _zero_like(a[0])
            out = []
            for m in range(n + 1):
                acc = zero
                for j in range(m + 1):
                    acc = acc + a[j] * b[m - j]
                out.append(acc)
            return Fps(tuple(out))
        if isinstance(other, _SCALARS + (Poly,)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative series power; divide instead")
        out = Fps.constant(_one_like(self.coeffs[0]), self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        """Series division with explicit valuation handling.

        Requires valuation(other) <= valuation(self); the quotient's order is
        min(order) - valuation(other). A denominator whose first nonzero
        coefficient is not a unit raises.
        """
        if not isinstance(other, Fps):
            return NotImplemented
        v = other.valuation()
        if v is None:
            raise ZeroDivisionError("division by the zero series")
        sv = self.valuation()
        out_order = min(self.order, other.order) - v
        if out_order < 0:
            raise ValueError(
                f"quotient order would be negative: orders ({self.order}, {other.order}), "
                f"denominator valuation {v}"
            )
        if sv is None:
            return Fps.constant(_zero_like(self.coeffs[0]), out_order)
        if sv < v:
            raise ValueError(
                f"denominator valuation {v} exceeds numerator valuation {sv}; "
                "the quotient would need negative powers"
            )
        a = self.coeffs[v:]
        b = other.coeffs[v:]
        inv = _invert(b[0])
        zero = _zero_like(b[0])
        q: list = []
        for n in range(out_order + 1):
            acc = a[n] if n < len(a) else zero
            for j in range(1, n + 1):
                if j < len(b):
                    acc = acc - b[j] * q[n - j]
            q.append(acc * inv)
        return Fps(tuple(q))

    def derivative(self) -> "Fps":
        if self.order < 1:
            raise ValueError("derivative needs order >= 1")
        return Fps(tuple(self.coeffs[n] * n for n in range(1, self.order + 1)))

    def exp(self) -> "Fps":
        """exp of a series with zero constant term, same order."""
        c0 = self.coeffs[0]
        if (not c0.is_zero) if isinstance(c0, Poly) else bool(c0):
            raise ValueError("exp needs a zero constant term")
        one = _one_like(c0)
        zero = _zero_like(c0)
        f = self.coeffs
        out = [one]
        for n in range(1, self.order + 1):
            acc = zero
            for j in range(1, n + 1):
                acc = acc + f[j] * out[n - j] * j
            out.append(acc * Fraction(1, n))
        return Fps(tuple(out))

    def compose(self, inner: "Fps") -> "Fps":
        """self(inner(t)); inner must have zero constant term and share the
        coefficient ring. Result order is the weaker of the two."""
        c0 = inner.coeffs[0]
        if (not c0.is_zero) if isinstance(c0, Poly) else bool(c0):
            raise ValueError("compose needs an inner series with zero constant term")
        n = min(self.order, inner.order)
        a = self.coeffs[: n + 1]
        b = inner.truncate(n)
        out = Fps.constant(a[n], n)
        for m in range(n - 1, -1, -1):
            out = out * b + a[m]
        return out

    def __eq__(self, other):
        if not isinstance(other, Fps):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if (c.is_zero if isinstance(c, Poly) else not c) and not (k == 0 and len(self.coeffs) == 1):
                continue
            cs = f"({c.to_string()})" if isinstance(c, Poly) else str(c)
            if k == 0:
                parts.append(cs)
            elif k == 1:
                parts.append(f"{cs}*t")
            else:
                parts.append(f"{cs}*t^{k}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.order + 1})"

    __repr__ = __str__


def lift_to_poly_ring(f: Fps) -> Fps:
    """Reinterpret a Fraction-ring series as a Poly-ring series."""
    return f.map_coeffs(lambda c: Poly((c,)))


def reversion(f: Fps) -> Fps:
    """Compositional inverse g with f(g(t)) = t, term by term.

    Needs a zero constant term and a unit linear coefficient. Each step
    fixes one coefficient of g by cancelling the lowest surviving error of
    f(g), so the result is exact through the full order of f.
    """
    c0 = f.coeffs[0]
    if (not c0.is_zero) if isinstance(c0, Poly) else bool(c0):
        raise ValueError("reversion needs a zero constant term")
    if f.order < 1:
        raise ValueError("reversion needs order >= 1")
    inv1 = _invert(f.coeffs[1])
    zero = _zero_like(c0)
    n = f.order
    g = [zero, inv1] + [zero] * (n - 1)
    for m in range(2, n + 1):
        err = f.compose(Fps(tuple(g))).coeff(m)
        g[m] = g[m] - err * inv1
    return Fps(tuple(g))


def deg_exp(x, lam: Fraction, order: int) -> Fps:
    """Degenerate exponential series: coefficient of t^n is
    deg_falling_factorial(x, n, lam) / n!.

    x may be a Fraction (Fraction-ring series) or a Poly (Poly-ring series,
    giving the two-variable generating series in t with polynomial
    coefficients in x). lam = 0 yields the ordinary exponential of x*t.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    one = _one_like(x)
    coeffs = [one]
    term = one
    for m in range(1, order + 1):
        term = term * (x - (m - 1) * lam) * Fraction(1, m)
        coeffs.append(term)
    return Fps(tuple(coeffs))


def deg_log(lam: Fraction, order: int) -> Fps:
    """Compositional inverse of deg_exp(1, lam, .) - 1, in closed form.

    For lam != 0 this is the binomial series ((1+t)**lam - 1) / lam; at
    lam = 0 it is log(1+t). An independent construction by series reversion
    lives in deg_log_by_reversion; the two are cross-checked in tests.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    coeffs = [Fraction(0)]
    if lam:
        for n in range(1, order + 1):
            coeffs.append(falling_factorial(lam, n) / (factorial(n) * lam))
    else:
        for n in range(1, order + 1):
            coeffs.append(Fraction((-1) ** (n + 1), n))
    return Fps(tuple(coeffs))


def deg_log_by_reversion(lam: Fraction, order: int) -> Fps:
    """Same series as deg_log, constructed by compositional inversion."""
    if order < 1:
        raise ValueError("reversion construction needs order >= 1")
    return reversion(deg_exp(Fraction(1), lam, order) - 1)


def apply_Dlambda(f: Fps, lam: Fraction) -> Fps:
    """One application of the weighted derivative: multiply f' by the
    degenerate exponential with exponent lam - 1. Shortens the order by one
    (the derivative's loss); iterate for higher powers of the operator."""
    d = f.derivative()
    w = deg_exp(lam - Fraction(1), lam, d.order)
    if isinstance(f.coeffs[0], Poly):
        w = lift_to_poly_ring(w)
    return d * w
