"""Exact rational scalar type used by every kernel.

``GORLAB_RATIONAL`` selects the backend: ``auto`` (default) uses
``gmpy2.mpq`` when importable, ``fraction`` forces the pure-Python
``fractions.Fraction`` path, ``gmpy2`` requires gmpy2.
"""
from __future__ import annotations

import os
from fractions import Fraction

_choice = os.environ.get("GORLAB_RATIONAL", "auto").strip().lower()

if _choice not in ("auto", "gmpy2", "fraction"):
    raise ImportError(f"GORLAB_RATIONAL must be auto, gmpy2 or fraction, not {_choice!r}")

Q = Fraction
BACKEND = "fraction"
if _choice != "fraction":
    try:
        from gmpy2 import mpq as Q  # type: ignore[no-redef]

        BACKEND = "gmpy2"
    except ImportError:
        if _choice == "gmpy2":
            raise

ZERO = Q(0)
ONE = Q(1)


def to_q(x) -> "Q":
    """Coerce ints, Fractions, mpq and ``'p/q'`` strings to the active type."""
    if isinstance(x, str):
        f = Fraction(x)
        return Q(f.numerator, f.denominator)
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    return Q(x)


def q_str(x) -> str:
    """Canonical text form: ``'3'`` or ``'-3/2'``."""
    x = to_q(x)
    num, den = int(x.numerator), int(x.denominator)
    return str(num) if den == 1 else f"{num}/{den}"
