"""Exact rationals as ``"p/q"`` strings."""

from __future__ import annotations

from fractions import Fraction


def fmt(q) -> str:
    """Reduced ``p/q`` with the sign on ``p``; integers keep the ``/1``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse(text: str) -> Fraction:
    return Fraction(text)
