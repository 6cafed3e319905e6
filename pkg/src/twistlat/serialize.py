"""Lossless JSON encoding: integers as decimal strings, rationals as "p/q"."""

from __future__ import annotations

from fractions import Fraction
from numbers import Integral

import numpy as np

from .errors import InputError
from .exact_linalg import FiniteAbelianGroup, as_int_matrix, as_rat_matrix


def encode_scalar(x) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Integral):
        return str(int(x))
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    raise TypeError(f"cannot encode {x!r}")


def encode_matrix(m) -> list[list[str]]:
    return [[encode_scalar(x) for x in row] for row in np.asarray(m, dtype=object).tolist()]


def encode_group(g: FiniteAbelianGroup) -> list[str]:
    return [str(d) for d in g.factors]


def decode_int(x) -> int:
    if isinstance(x, bool):
        raise InputError("expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            raise InputError(f"not an integer: {x!r}") from None
    raise InputError(f"not an integer: {x!r}")


def decode_int_matrix(m) -> np.ndarray:
    if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
        raise InputError("matrix must be a list of row lists")
    return as_int_matrix([[decode_int(x) for x in row] for row in m])


def decode_rat_matrix(m) -> np.ndarray:
    if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
        raise InputError("matrix must be a list of row lists")
    try:
        return as_rat_matrix([[Fraction(x) if isinstance(x, (int, str)) and not isinstance(x, bool)
                               else _bad(x) for x in row] for row in m])
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational entry: {exc}") from None


def _bad(x):
    raise InputError(f"not a rational: {x!r}")
