"""Self-bounding certification via the min-extension witness.

For f on {0,1}^n and coordinate i, the min-extension drops coordinate i
and takes the best completion:

    f_i(x^(i)) = min(f(x with x_i=0), f(x with x_i=1)),

with ties assigned to the x_i = 0 side. For monotone f the minimum is
always at x_i = 0, so f(x) - f_i(x^(i)) is the marginal value of i.

``certify`` checks the two defining conditions exhaustively over all 2^n
points: every decrement f(x) - f_i(x^(i)) lies in [0,1], and the
decrement sum at each point is at most a*f(x) + b. Plain self-bounding is
(a,b) = (1,0). ``minimal_a`` returns the least feasible a for a given b:
the max over points with f(x) > 0 of (sum - b)/f(x), clamped at 0, with
points at f(x) = 0 acting as hard feasibility constraints (sum <= b,
otherwise no finite a works and None is returned).

Dropped-coordinate masks: bit i is removed by packing the bits above it
down one position, so witness tables have length 2^(n-1) indexed by the
packed mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, InputError, RangeConditionError
from .rational import RationalLike, to_fraction
from .setfn import SetFunction, SymmetricSetFunction

MIN_EXTENSION_MAX_N = 24

_ZERO = Fraction(0)


def squeeze_mask(mask: int, i: int) -> int:
    """Remove bit ``i`` (0-based) from ``mask``, packing higher bits down."""
    low = mask & ((1 << i) - 1)
    return ((mask >> (i + 1)) << i) | low


@dataclass(frozen=True)
class SelfBoundingParams:
    """The constants (a, b); (1, 0) is plain self-bounding."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise InputError(f"self-bounding constants must be >= 0, got ({self.a}, {self.b})")

    @classmethod
    def of(cls, a: RationalLike, b: RationalLike) -> SelfBoundingParams:
        return cls(to_fraction(a), to_fraction(b))

    @classmethod
    def plain(cls) -> SelfBoundingParams:
        return cls(Fraction(1), _ZERO)


@dataclass(frozen=True)
class SelfBoundingWitness:
    """Per-coordinate min-extension tables f_i over dropped-bit masks.

    ``argmin_sides[i][m]`` records which completion attains the minimum
    (0 or 1; ties recorded as 0).
    """

    n: int
    tables: tuple[tuple[Fraction, ...], ...]
    argmin_sides: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        half = 1 << (self.n - 1)
        if len(self.tables) != self.n or any(len(t) != half for t in self.tables):
            raise InputError("witness tables must be n arrays of length 2^(n-1)")

    def value(self, i: int, mask: int) -> Fraction:
        """f_i at the full-cube point ``mask`` (coordinate i is ignored)."""
        return self.tables[i - 1][squeeze_mask(mask, i - 1)]

    def decrement_sum(self, f: SetFunction, mask: int) -> Fraction:
        fx = f.values[mask]
        return sum(
            (fx - self.tables[i][squeeze_mask(mask, i)] for i in range(self.n)),
            _ZERO,
        )


@dataclass(frozen=True)
class CertificationResult:
    verdict: bool
    range_violation: Optional[tuple[int, int]]   # (point mask, 1-based coordinate)
    sum_violation: Optional[int]                 # point mask
    worst_point: int                             # argmax of sum - (a f + b)
    worst_slack: Fraction

    def to_json(self, n: int) -> dict:
        from .rational import fraction_to_json
        from .setfn import set_notation

        out: dict = {
            "verdict": self.verdict,
            "worst_point": {
                "mask": self.worst_point,
                "set": set_notation(self.worst_point, n),
            },
            "worst_slack": fraction_to_json(self.worst_slack),
        }
        if self.range_violation is not None:
            mask, coord = self.range_violation
            out["range_violation"] = {
                "mask": mask,
                "set": set_notation(mask, n),
                "coordinate": coord,
            }
        if self.sum_violation is not None:
            out["sum_violation"] = {
                "mask": self.sum_violation,
                "set": set_notation(self.sum_violation, n),
            }
        return out


def min_extension(f: SetFunction) -> SelfBoundingWitness:
    """Build the min-extension witness; monotone inputs get all argmins
    on the x_i = 0 side."""
    n = f.n
    if n > MIN_EXTENSION_MAX_N:
        raise CapacityError("min-extension", n, MIN_EXTENSION_MAX_N)
    ints, scale = f.scaled_ints
    half = 1 << (n - 1)
    arr = f.int64_values
    tables = []
    sides = []
    if arr is not None:
        sq = np.arange(half, dtype=np.int64)
        for i in range(n):
            low = sq & ((1 << i) - 1)
            idx0 = ((sq >> i) << (i + 1)) | low
            idx1 = idx0 | (1 << i)
            v0 = arr[idx0]
            v1 = arr[idx1]
            mins = np.minimum(v0, v1)
            side = (v1 < v0).astype(np.int8)  # tie -> 0 side
            tables.append(tuple(Fraction(int(v), scale) for v in mins))
            sides.append(tuple(int(s) for s in side))
    else:
        for i in range(n):
            tab = []
            side = []
            for m in range(half):
                low = m & ((1 << i) - 1)
                idx0 = ((m >> i) << (i + 1)) | low
                v0 = ints[idx0]
                v1 = ints[idx0 | (1 << i)]
                if v1 < v0:
                    tab.append(Fraction(v1, scale))
                    side.append(1)
                else:
                    tab.append(Fraction(v0, scale))
                    side.append(0)
            tables.append(tuple(tab))
            sides.append(tuple(side))
    return SelfBoundingWitness(n, tuple(tables), tuple(sides))


def _scaled_tables(
    f: SetFunction, w: SelfBoundingWitness
) -> tuple[list[int], list[list[int]], int]:
    """f values and witness tables as integers over one common scale."""
    denoms = [v.denominator for v in f.values]
    for t in w.tables:
        denoms.extend(v.denominator for v in t)
    scale = reduce(lcm, denoms, 1)
    fi = [int(v * scale) for v in f.values]
    wi = [[int(v * scale) for v in t] for t in w.tables]
    return fi, wi, scale


def _decrement_sums(
    f: SetFunction, w: SelfBoundingWitness
) -> tuple[list[int], list[int], int, Optional[tuple[int, int]]]:
    """Scaled f values, per-point decrement sums, the common scale, and the
    lexicographically least range violation (if any)."""
    n = f.n
    if w.n != n:
        raise InputError(f"witness dimension {w.n} != function dimension {n}")
    fi, wi, scale = _scaled_tables(f, w)
    size = 1 << n
    sums = [0] * size
    range_viol: Optional[tuple[int, int]] = None
    for x in range(size):
        fx = fi[x]
        total = 0
        for i in range(n):
            d = fx - wi[i][squeeze_mask(x, i)]
            if (d < 0 or d > scale) and range_viol is None:
                range_viol = (x, i + 1)
            total += d
        sums[x] = total
    return fi, sums, scale, range_viol


def certify(
    f: SetFunction, w: SelfBoundingWitness, params: SelfBoundingParams
) -> CertificationResult:
    """Exhaustive check of the range and sum conditions at every point."""
    fi, sums, scale, range_viol = _decrement_sums(f, w)
    pa, qa = params.a.numerator, params.a.denominator
    pb, qb = params.b.numerator, params.b.denominator
    # compare qa*qb*sum <= pa*qb*f + pb*qa*scale, all integers
    sum_viol: Optional[int] = None
    worst_point = 0
    worst_num = None
    for x in range(len(fi)):
        lhs = qa * qb * sums[x]
        rhs = pa * qb * fi[x] + pb * qa * scale
        if lhs > rhs and sum_viol is None:
            sum_viol = x
        slack_num = lhs - rhs
        if worst_num is None or slack_num > worst_num:
            worst_num = slack_num
            worst_point = x
    worst_slack = Fraction(worst_num, scale * qa * qb)
    return CertificationResult(
        verdict=range_viol is None and sum_viol is None,
        range_violation=range_viol,
        sum_violation=sum_viol,
        worst_point=worst_point,
        worst_slack=worst_slack,
    )


def minimal_a(
    f: SetFunction, w: SelfBoundingWitness, b: RationalLike = 0
) -> Optional[Fraction]:
    """Least a >= 0 making (f, w) satisfy the (a, b) sum condition, or None
    when no finite a works (a zero-value point with decrement sum > b).

    Requires the range condition to hold already and f >= 0.
    """
    b_frac = to_fraction(b)
    if b_frac < 0:
        raise InputError(f"b must be >= 0, got {b_frac}")
    fi, sums, scale, range_viol = _decrement_sums(f, w)
    if range_viol is not None:
        raise RangeConditionError(*range_viol)
    b_scaled = b_frac * scale  # compare against scaled sums
    best = _ZERO
    for x in range(len(fi)):
        fx = fi[x]
        if fx < 0:
            raise InputError(
                "minimal_a requires f >= 0 (negative values turn the sum "
                f"condition into an upper bound on a); f < 0 at mask {x}"
            )
        if fx == 0:
            if sums[x] > b_scaled:
                return None
        else:
            ratio = (sums[x] - b_scaled) / fx  # scale cancels
            if ratio > best:
                best = Fraction(ratio)
    return best


def minimal_a_symmetric(
    g: SymmetricSetFunction, b: RationalLike = 0
) -> Optional[Fraction]:
    """``minimal_a`` for monotone symmetric functions with steps in [0,1].

    Monotonicity puts every argmin on the 0 side, so at a point of
    cardinality k the decrement sum is k * (levels[k] - levels[k-1]).
    """
    b_frac = to_fraction(b)
    if b_frac < 0:
        raise InputError(f"b must be >= 0, got {b_frac}")
    if not g.is_monotone():
        raise InputError("symmetric minimal_a requires monotone levels")
    steps = [g.levels[k] - g.levels[k - 1] for k in range(1, g.n + 1)]
    if any(s > 1 for s in steps):
        k = next(k for k, s in enumerate(steps, start=1) if s > 1)
        raise RangeConditionError((1 << k) - 1, 1)
    if g.levels[0] < 0:
        raise InputError("symmetric minimal_a requires f >= 0")
    best = _ZERO
    for k in range(1, g.n + 1):
        total = k * steps[k - 1]
        value = g.levels[k]
        if value == 0:
            if total > b_frac:
                return None
        else:
            ratio = (total - b_frac) / value
            if ratio > best:
                best = ratio
    return best
