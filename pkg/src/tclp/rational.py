"""Exact rational arithmetic backend.

gmpy2's mpq is used when available (it is an order of magnitude faster than
fractions.Fraction in the solver's inner loops); the stdlib Fraction is the
drop-in fallback. Both expose numerator/denominator and exact comparisons,
and both render as "n" or "n/d" via str().
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    def Q(value=0, den=None):
        if den is not None:
            return _mpq(value, den)
        if isinstance(value, str):
            return _mpq(Fraction(value))
        return _mpq(value)

    RationalTypes = (int, type(_mpq(0)), Fraction)
except ImportError:  # pragma: no cover
    def Q(value=0, den=None):
        if den is not None:
            return Fraction(value, den)
        return Fraction(value)

    RationalTypes = (int, Fraction)
