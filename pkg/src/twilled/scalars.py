"""Exact rational scalars and object-array helpers.

Every coefficient in the package is a ``gmpy2.mpq``: arbitrary precision,
always reduced, positive denominator.  Floats are refused at the boundary
so nothing inexact can leak into a computation.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Integral

import gmpy2
import numpy as np

Rational = type(gmpy2.mpq(0))

ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)


def rational(value) -> Rational:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``Fraction``, ``mpq`` and strings such as ``"3"``,
    ``"-2/7"``.  Floats (and strings that only parse as floats) are
    rejected.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Integral):
        return gmpy2.mpq(int(value))
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        try:
            return gmpy2.mpq(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def fmt(q) -> str:
    q = rational(q)
    return str(q)


def zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def as_exact(array_like) -> np.ndarray:
    """Object array of rationals with the same shape as ``array_like``."""
    arr = np.asarray(array_like, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = rational(v)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = ONE
    return out


def canonical(arr: np.ndarray) -> np.ndarray:
    """Re-box results of object arithmetic (plain ints can appear from
    empty sums) so that every entry is an ``mpq``."""
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = v if isinstance(v, Rational) else rational(v)
    return out


def is_zero(arr: np.ndarray) -> bool:
    return not any(v != 0 for v in arr.flat)


def first_nonzero(arr: np.ndarray):
    for idx, v in np.ndenumerate(arr):
        if v != 0:
            return tuple(int(i) for i in idx)
    return None


def frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr
