"""Rational-preserving JSON encoding shared by the file formats and the CLI.

Rationals serialize as plain integers when the denominator is 1 and as
"num/den" strings otherwise, so exactness survives a round trip.
"""

from __future__ import annotations

from fractions import Fraction


def encode_rational(q: Fraction | int):
    q = Fraction(q)
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def decode_rational(v) -> Fraction:
    if isinstance(v, bool):
        raise ValueError("expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        raise ValueError(f"refusing inexact float {v!r}; use int or 'num/den'")
    raise ValueError(f"cannot parse rational from {v!r}")
