"""Scalar conventions: exact rationals, complex floats, serialization.

Exact scalars are plain ``int`` / ``fractions.Fraction`` values; floating
scalars are Python / numpy complex numbers.  Rationals serialize as
``"num/den"`` strings (denominator omitted when 1), complex values as
``[re, im]`` pairs of decimal strings.
"""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from .errors import InvalidInput

#: relative singular-value threshold for numeric rank decisions
RANK_TOL = 1e-10
#: default relative residual tolerance for decomposition verification
VERIFY_TOL = 1e-8
#: relative distance below which numeric roots are merged
ROOT_MERGE_TOL = 1e-7

DEFAULT_PRECISION = 53  # double-precision mantissa bits


def working_precision() -> int:
    """Mantissa bits used by numeric root-finding; set SECANT3_PRECISION
    to a larger value to route root-finding through mpmath."""
    raw = os.environ.get("SECANT3_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError as exc:
        raise InvalidInput(f"SECANT3_PRECISION must be an integer, got {raw!r}") from exc
    if bits < 24:
        raise InvalidInput("SECANT3_PRECISION must be at least 24 bits")
    return bits


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) or isinstance(x, np.integer)


def all_exact(values) -> bool:
    return all(is_exact(v) for v in values)


def check_finite(values):
    arr = np.asarray(values, dtype=complex)
    if not np.all(np.isfinite(arr.view(float))):
        raise InvalidInput("non-finite floating value")
    return arr


def format_scalar(x) -> object:
    """Serialize one scalar: exact -> "num/den" string, complex -> [re, im]."""
    if is_exact(x):
        f = Fraction(x)
        if f.denominator == 1:
            return str(f.numerator)
        return f"{f.numerator}/{f.denominator}"
    z = complex(x)
    return [repr(z.real), repr(z.imag)]


def parse_scalar(obj):
    """Inverse of :func:`format_scalar`."""
    if isinstance(obj, str):
        if "/" in obj:
            num, den = obj.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(obj))
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise InvalidInput(f"cannot parse scalar {obj!r}")
