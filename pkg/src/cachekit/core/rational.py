"""Exact rational arithmetic backend.

gmpy2.mpq (GMP-backed) is picked at import time when available because exact
simplex pivoting is 5-15x faster on it; fractions.Fraction is the stdlib
fallback and the reference semantics. Set CACHEKIT_RATIONAL=fractions (or
=gmpy2) to force a backend. Both types compare and hash identically for equal
values, so results never depend on the backend.
"""

from __future__ import annotations

import os
from fractions import Fraction

_FORCED = os.environ.get("CACHEKIT_RATIONAL", "").strip().lower()

if _FORCED in ("fraction", "fractions"):
    _mpq = None
elif _FORCED in ("", "gmpy2", "mpq"):
    try:
        from gmpy2 import mpq as _mpq  # type: ignore
    except ImportError:
        if _FORCED:
            raise
        _mpq = None
else:
    raise ValueError(f"unknown CACHEKIT_RATIONAL backend: {_FORCED!r}")

if _mpq is not None:
    Rat = _mpq
    BACKEND = "gmpy2"
else:
    Rat = Fraction
    BACKEND = "fractions"

ZERO = Rat(0)
ONE = Rat(1)


def rat(num, den=1):
    """Build an exact rational from ints (den > 0 not required; 0 den raises)."""
    return Rat(num, den)


def as_rat(value):
    """Coerce int / Fraction / backend rational / "p/q" string to the backend type."""
    if isinstance(value, str):
        return rat_from_str(value)
    return Rat(value)


def rat_from_str(text: str):
    """Parse "p/q" or "p" (optional sign). Raises ValueError on anything else."""
    s = text.strip()
    num, _, den = s.partition("/")
    try:
        if den:
            d = int(den)
            if d == 0:
                raise ValueError
            return Rat(int(num), d)
        return Rat(int(num))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {text!r}") from None


def num_den(x) -> tuple[int, int]:
    """Numerator/denominator as plain ints, denominator positive."""
    return int(x.numerator), int(x.denominator)


def format_exact(x) -> str:
    """Canonical exact form: "p/q", or "p" when the denominator is 1."""
    n, d = num_den(x)
    return f"{n}/{d}" if d != 1 else str(n)


def format_decimal(x) -> str:
    """Shortest float approximation, for human-readable report columns only."""
    return repr(float(Fraction(int(x.numerator), int(x.denominator))))
