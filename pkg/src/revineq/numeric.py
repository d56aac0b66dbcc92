"""Arithmetic backbone: exact rationals plus high-precision floats.

Two computation modes run through the whole package:

* ``exact`` -- ``fractions.Fraction`` everywhere; sums, products and integer
  powers are exact, so equality assertions are meaningful.
* ``float`` -- ``mpmath.mpf`` at a configurable decimal precision (>= 50
  digits).  Used whenever an irrational power is unavoidable.

The precision is process-global (it wraps ``mpmath.mp.dps``).  The default is
50 digits and can be overridden with the ``REVINEQ_PRECISION`` environment
variable or programmatically via :func:`set_precision`.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Union

from mpmath import mp, mpf

MIN_DPS = 50
ENV_PRECISION = "REVINEQ_PRECISION"

Number = Union[Fraction, mpf]

EXACT = "exact"
FLOAT = "float"


def set_precision(dps: int | None = None) -> int:
    """Set the working decimal precision for float mode.

    With ``dps=None`` the value is taken from ``REVINEQ_PRECISION`` (default
    50).  Values below 50 are rejected: the float mode contract guarantees at
    least 50 digits.
    """
    if dps is None:
        dps = int(os.environ.get(ENV_PRECISION, MIN_DPS))
    if dps < MIN_DPS:
        raise ValueError(f"precision must be at least {MIN_DPS} decimal digits, got {dps}")
    mp.dps = dps
    return dps


# Initialize once at import; callers may re-set later.
if mp.dps < MIN_DPS:
    set_precision()


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, floats and 'p/q' / decimal strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # Go through the repr so 1.5 means 3/2, not its binary expansion.
        return Fraction(str(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def as_mpf(x) -> mpf:
    """Coerce a number (Fraction, int, float, str, mpf) to mpf at current precision."""
    if isinstance(x, mpf):
        return x
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    if isinstance(x, (int, float, str)):
        return mpf(x)
    raise TypeError(f"cannot interpret {x!r} as a float")


def is_integral(q) -> bool:
    """True iff the value is an integer (Fraction with denominator 1, or int)."""
    if isinstance(q, int):
        return True
    if isinstance(q, Fraction):
        return q.denominator == 1
    return False


def npow(x, e):
    """Power that stays exact when it can.

    Fraction base with integral exponent -> exact Fraction.  Anything else is
    computed as an mpf.  Non-negative bases only (0**0 is 1, matching the
    empty-product convention).
    """
    if isinstance(x, Fraction) and is_integral(e):
        return x ** int(e)
    xb = as_mpf(x)
    eb = as_mpf(e)
    if xb == 0:
        return mpf(0) if eb != 0 else mpf(1)
    return xb ** eb


def mixed(a, b):
    """Return (a, b) as a comparable pair: exact if both exact, else both mpf."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a, b
    return as_mpf(a), as_mpf(b)


def comparison_slack() -> mpf:
    """Relative slack for float-mode comparisons, far below working precision."""
    return mpf(10) ** (10 - mp.dps)


def ge_with_slack(x, y) -> bool:
    """x >= y, exactly for Fractions, with tiny relative slack for mpf."""
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x >= y
    xb, yb = as_mpf(x), as_mpf(y)
    scale = max(abs(xb), abs(yb), mpf(1))
    return xb >= yb - comparison_slack() * scale


def le_with_slack(x, y) -> bool:
    """x <= y, exactly for Fractions, with tiny relative slack for mpf."""
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x <= y
    return ge_with_slack(y, x)


def format_number(x, digits: int = 30) -> str:
    """Render a number as a stable string: 'p/q' for rationals, decimal for mpf."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    from mpmath import nstr

    return nstr(as_mpf(x), digits, strip_zeros=True)


def parse_number(text: str, mode: str) -> Number:
    """Parse a serialized number back into the requested mode."""
    if mode == EXACT:
        return Fraction(text)
    if mode == FLOAT:
        return mpf(text)
    raise ValueError(f"unknown mode {mode!r}")


def decimal_string(x, digits: int = 30) -> str:
    """Decimal rendering (used by CSV output) of either kind of number."""
    from mpmath import nstr

    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return nstr(as_mpf(x), digits, strip_zeros=True)
    return nstr(as_mpf(x), digits, strip_zeros=True)
