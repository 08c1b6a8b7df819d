"""Exact rational arithmetic backend.

All released values in this package are exact rationals in lowest terms with
positive denominators. The backend is gmpy2.mpq when available (much faster
for pivot-heavy linear algebra) and fractions.Fraction otherwise; both keep
values normalized, so the invariants hold by construction.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Rational

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rational

    HAVE_GMPY2 = False

from .errors import ParseError

ZERO = Rational(0)
ONE = Rational(1)


def rat(numerator, denominator=None) -> Rational:
    """Build an exact rational from ints, strings like "7/5", or rationals."""
    if denominator is not None:
        return Rational(numerator) / Rational(denominator)
    if isinstance(numerator, str):
        return parse_rational(numerator)
    if isinstance(numerator, (Rational, int)):
        return Rational(numerator)
    # Generic rational-like values (e.g. Fraction, possibly carrying foreign
    # integer types) go through their numerator/denominator pair.
    num = getattr(numerator, "numerator", None)
    if num is not None:
        return Rational(int(num)) / Rational(int(numerator.denominator))
    return Rational(numerator)


def parse_rational(text: str) -> Rational:
    """Parse "p/q" or "p" into an exact rational."""
    text = text.strip()
    try:
        if "/" in text:
            num, _, den = text.partition("/")
            d = int(den)
            if d == 0:
                raise ZeroDivisionError
            return Rational(int(num)) / Rational(d)
        return Rational(int(text))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


def rat_str(q) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    q = Rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_ceil(q) -> int:
    """Smallest integer >= q, exactly."""
    q = Rational(q)
    return int(-((-q.numerator) // q.denominator))
