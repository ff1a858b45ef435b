"""Exact rational parsing and formatting.

All set-function values are ``fractions.Fraction``. Conversion rules:

* int / Fraction: taken as-is.
* str: ``"p/q"`` parses as written; decimal text parses as an exact decimal
  fraction ("0.1" -> 1/10, never the binary float).
* float: converted from its exact binary value (0.5 -> 1/2 exactly, but
  0.1 -> 3602879701896397/2**55). Pass strings when decimal semantics
  matter; the JSON loaders do this automatically.

JSON rendering is lossless: integers stay integers, everything else
becomes a ``"p/q"`` string.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

from .errors import InputError

RationalLike = Union[int, float, str, Fraction]


def to_fraction(x: RationalLike) -> Fraction:
    """Convert ``x`` to an exact Fraction per the module conversion rules."""
    if isinstance(x, bool):
        raise InputError(f"expected a rational value, got bool {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InputError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational from {x!r}: {exc}") from None
    raise InputError(f"cannot convert {type(x).__name__} to a rational")


def fraction_to_json(q: Fraction) -> int | str:
    """Render exactly for JSON: int when integral, else ``"p/q"``."""
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators (1 for an empty iterable)."""
    return reduce(math.lcm, (v.denominator for v in values), 1)
