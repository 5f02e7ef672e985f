"""Exact scalar helpers.

Exact computations use ``gmpy2.mpq``; the float backend uses plain ``float``.
The two never mix inside one object (``mpq * float`` silently yields ``mpfr``).
"""

from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpq

from .errors import ConfigurationError

MPQ_TYPE = type(mpq(0))


def Q(value) -> mpq:
    """Convert ints, Fractions, mpq and "p/q" strings to an exact rational."""
    if isinstance(value, MPQ_TYPE):
        return value
    if isinstance(value, bool):
        raise ConfigurationError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, (Fraction, Rational)):
        return mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return mpq(int(num), int(den))
            if "." in text or "e" in text.lower():
                return mpq(Fraction(text))
            return mpq(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(f"cannot parse rational {value!r}") from exc
    if type(value).__name__ == "mpz":
        return mpq(value)
    if type(value).__name__ == "fmpq":
        return mpq(int(value.p), int(value.q))
    raise ConfigurationError(f"not an exact rational: {value!r}")


def to_exact(value) -> mpq:
    """Like Q, but floats go through their shortest repr, so 0.7 becomes 7/10."""
    if isinstance(value, float) or type(value).__name__.startswith("float"):
        return Q(repr(float(value)))
    return Q(value)


def is_exact(value) -> bool:
    return isinstance(value, (MPQ_TYPE, int)) and not isinstance(value, bool)


def fmt(value) -> str:
    """Render a scalar as "p/q" (exact) or repr (float)."""
    if isinstance(value, MPQ_TYPE):
        if value.denominator == 1:
            return str(int(value.numerator))
        return f"{int(value.numerator)}/{int(value.denominator)}"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def parse_rational_list(text: str) -> list:
    """Parse "1/2,1" into exact rationals."""
    if isinstance(text, (list, tuple)):
        return [Q(t) for t in text]
    return [Q(t) for t in str(text).split(",") if t.strip()]


def to_fmpq(q):
    import flint

    q = Q(q)
    return flint.fmpq(int(q.numerator), int(q.denominator))


def from_fmpq(f) -> mpq:
    return mpq(int(f.p), int(f.q))


def factorial(n: int) -> mpq:
    return mpq(gmpy2.fac(n))


def pochhammer(a, n: int):
    """Rising factorial (a)_n, exact for rational a."""
    result = Q(1) if is_exact(a) else 1.0
    for j in range(n):
        result *= a + j
    return result
