"""Set functions on a finite ground set: representation, generators, I/O.

Conventions:

* The ground set is N = {1, ..., n}. Element i maps to bit i-1, so the
  subset S corresponds to the bitmask sum(1 << (i-1) for i in S) and a
  dense table over all subsets is an array of length 2**n indexed by mask.
* All dense values are exact rationals (``fractions.Fraction``), so
  classification verdicts have no tolerance: boundary inputs such as a
  top value of exactly 2 on a 3-element ground set sit on the decision
  surface and must not be perturbed by binary floats.
* Dense tables are capped at n <= 30. Functions whose value depends only
  on |S| use ``SymmetricSetFunction`` (an array of n+1 level values),
  which scales to n ~ 10**6.

Generators cover the separating examples on small ground sets (the
3-element family, the single directed-edge cut), the large-n subadditive
staircase and the cardinality hinge max{0, |S|-n/2}, plus the standard
monotone submodular families (weighted coverage, uniform matroid rank,
budget-additive, additive) used as a property-test corpus, and weighted
directed-graph cut functions as the non-monotone submodular corpus.

External interface: a JSON function file is either

    {"n": 3, "values": [0, 1, 1, 1, 1, 1, 1, "3/2"]}

with values in bitmask order (numbers parse as exact decimals, strings as
"p/q"), or

    {"generator": "staircase", "params": {"n": 16}}

with a generator from ``GENERATORS``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import CapacityError, InputError
from .rational import RationalLike, common_denominator, fraction_to_json, to_fraction

DENSE_MAX_N = 30

# Above this magnitude the int64 fast paths would risk overflow in sums of
# two scaled values; callers fall back to exact Python-int loops.
_INT64_SAFE = 1 << 60


@dataclass(frozen=True)
class GroundSet:
    """The ground set {1, ..., n}; dense representation requires n <= 30."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise InputError(f"ground-set size must be an int, got {self.n!r}")
        if not 1 <= self.n <= DENSE_MAX_N:
            raise InputError(
                f"ground-set size n={self.n} outside [1, {DENSE_MAX_N}]"
            )

    @property
    def size(self) -> int:
        return 1 << self.n

    def members(self, mask: int) -> tuple[int, ...]:
        """1-based elements of the subset encoded by ``mask``."""
        return tuple(i + 1 for i in range(self.n) if mask >> i & 1)

    def mask_of(self, elements: Sequence[int]) -> int:
        mask = 0
        for e in elements:
            if not 1 <= e <= self.n:
                raise InputError(f"element {e} outside ground set [1, {self.n}]")
            mask |= 1 << (e - 1)
        return mask


@dataclass(frozen=True)
class SetFunction:
    """Dense table of exact rational values over all 2**n subsets."""

    ground: GroundSet
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.ground.size:
            raise InputError(
                f"values array length {len(self.values)} != 2^{self.ground.n} "
                f"= {self.ground.size}"
            )

    @classmethod
    def from_table(cls, values: Sequence[RationalLike], n: int | None = None) -> SetFunction:
        vals = tuple(to_fraction(v) for v in values)
        if n is None:
            if len(vals) == 0 or len(vals) & (len(vals) - 1):
                raise InputError(
                    f"values array length {len(vals)} is not a power of two"
                )
            n = len(vals).bit_length() - 1
        return cls(GroundSet(n), vals)

    @property
    def n(self) -> int:
        return self.ground.n

    def value(self, mask: int) -> Fraction:
        """f(S) for the subset encoded by ``mask``. Pure lookup."""
        if not 0 <= mask < self.ground.size:
            raise InputError(f"bitmask {mask} out of range [0, 2^{self.n})")
        return self.values[mask]

    def marginal(self, mask: int, j: int) -> Fraction:
        """f(S + j) - f(S) for a 1-based element j not in S."""
        if not 1 <= j <= self.n:
            raise InputError(f"element {j} outside ground set [1, {self.n}]")
        bit = 1 << (j - 1)
        if not 0 <= mask < self.ground.size:
            raise InputError(f"bitmask {mask} out of range [0, 2^{self.n})")
        if mask & bit:
            raise InputError(f"element {j} already in the base set {mask:#x}")
        return self.values[mask | bit] - self.values[mask]

    def lipschitz_constant(self) -> Fraction:
        """max over S, j not in S of |f(S+j) - f(S)|; 0 for constants."""
        ints, scale = self.scaled_ints
        arr = self.int64_values
        worst = 0
        if arr is not None:
            idx = np.arange(self.ground.size, dtype=np.int64)
            for b in range(self.n):
                base = idx[(idx >> b) & 1 == 0]
                diff = arr[base | (1 << b)] - arr[base]
                if diff.size:
                    worst = max(worst, int(diff.max()), -int(diff.min()))
        else:
            for b in range(self.n):
                bit = 1 << b
                for m in range(self.ground.size):
                    if m & bit:
                        continue
                    d = ints[m | bit] - ints[m]
                    worst = max(worst, d, -d)
        return Fraction(worst, scale)

    @cached_property
    def scaled_ints(self) -> tuple[tuple[int, ...], int]:
        """Values as integers over a common denominator: value = int/scale."""
        scale = common_denominator(self.values)
        return tuple(int(v * scale) for v in self.values), scale

    @cached_property
    def int64_values(self) -> np.ndarray | None:
        """Scaled values as an int64 array, or None if they might overflow."""
        ints, _ = self.scaled_ints
        if ints and max(max(ints), -min(ints)) >= _INT64_SAFE:
            return None
        return np.array(ints, dtype=np.int64)

    def scaled_by(self, factor: Fraction) -> SetFunction:
        return SetFunction(self.ground, tuple(v * factor for v in self.values))


@dataclass(frozen=True)
class SymmetricSetFunction:
    """f(S) = levels[|S|]; supports ground sets far beyond the dense cap."""

    n: int
    levels: tuple[Fraction, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError(f"symmetric function needs integer n >= 1, got {self.n!r}")
        if len(self.levels) != self.n + 1:
            raise InputError(
                f"levels array length {len(self.levels)} != n+1 = {self.n + 1}"
            )

    @classmethod
    def from_levels(cls, n: int, levels: Sequence[RationalLike]) -> SymmetricSetFunction:
        return cls(n, tuple(to_fraction(v) for v in levels))

    def value_at_size(self, k: int) -> Fraction:
        if not 0 <= k <= self.n:
            raise InputError(f"cardinality {k} outside [0, {self.n}]")
        return self.levels[k]

    def lipschitz_constant(self) -> Fraction:
        steps = [abs(b - a) for a, b in zip(self.levels, self.levels[1:])]
        return max(steps) if steps else Fraction(0)

    def is_monotone(self) -> bool:
        return all(b >= a for a, b in zip(self.levels, self.levels[1:]))

    def to_dense(self) -> SetFunction:
        if self.n > DENSE_MAX_N:
            raise CapacityError("to_dense", self.n, DENSE_MAX_N)
        vals = tuple(self.levels[m.bit_count()] for m in range(1 << self.n))
        return SetFunction(GroundSet(self.n), vals)


def set_notation(mask: int, n: int) -> list[int]:
    """Sorted 1-based element list for a bitmask (human-readable witnesses)."""
    return [i + 1 for i in range(n) if mask >> i & 1]


# ---------------------------------------------------------------------------
# Generators


def three_element(top: RationalLike) -> SetFunction:
    """The separating family on {1,2,3}: 0 at the empty set, 1 on all
    proper nonempty subsets, ``top`` on the full set."""
    t = to_fraction(top)
    one = Fraction(1)
    return SetFunction.from_table([Fraction(0), one, one, one, one, one, one, t])


def directed_edge() -> SetFunction:
    """Cut function of the single directed edge 1 -> 2 on n = 2."""
    return SetFunction.from_table([0, 1, 0, 0])


def staircase_levels(n: int) -> tuple[Fraction, ...]:
    """Level values of the subadditive staircase; requires a perfect-square
    n with sqrt(n) >= 3 so every step is in {0,1}."""
    root = math.isqrt(n)
    if root * root != n:
        raise InputError(f"staircase requires a perfect-square n, got {n}")
    if root < 3:
        raise InputError(
            f"staircase requires sqrt(n) >= 3 for unit steps, got n={n}"
        )
    lo = (n - root) // 2   # n - sqrt(n) is even: consecutive-integer product
    hi = (n + root) // 2
    out = []
    for k in range(n + 1):
        if k < root:
            out.append(Fraction(k))
        elif k <= lo:
            out.append(Fraction(root))
        elif k < hi:
            out.append(Fraction(root + k - lo))
        else:
            out.append(Fraction(2 * root))
    return tuple(out)


def staircase(n: int) -> SetFunction | SymmetricSetFunction:
    """Subadditive staircase; dense for n <= 30, symmetric beyond."""
    levels = staircase_levels(n)
    sym = SymmetricSetFunction(n, levels)
    return sym.to_dense() if n <= DENSE_MAX_N else sym


def staircase_symmetric(n: int) -> SymmetricSetFunction:
    return SymmetricSetFunction(n, staircase_levels(n))


def cardinality_relu_levels(n: int) -> tuple[Fraction, ...]:
    if not isinstance(n, int) or n < 1:
        raise InputError(f"cardinality hinge needs integer n >= 1, got {n!r}")
    half = Fraction(n, 2)
    return tuple(max(Fraction(0), Fraction(k) - half) for k in range(n + 1))


def cardinality_relu(n: int) -> SetFunction | SymmetricSetFunction:
    """f(S) = max{0, |S| - n/2}; dense for n <= 30, symmetric beyond."""
    sym = SymmetricSetFunction(n, cardinality_relu_levels(n))
    return sym.to_dense() if n <= DENSE_MAX_N else sym


def cardinality_relu_symmetric(n: int) -> SymmetricSetFunction:
    return SymmetricSetFunction(n, cardinality_relu_levels(n))


def coverage(weights: Sequence[RationalLike], covers: Sequence[Sequence[int]]) -> SetFunction:
    """Weighted coverage: element i covers universe items ``covers[i-1]``
    (1-based item indices); f(S) is the total weight covered by S."""
    w = [to_fraction(x) for x in weights]
    if any(x < 0 for x in w):
        raise InputError("coverage weights must be non-negative")
    m = len(w)
    n = len(covers)
    ground = GroundSet(n)
    cover_masks = []
    for i, items in enumerate(covers):
        cm = 0
        for item in items:
            if not 1 <= item <= m:
                raise InputError(
                    f"cover of element {i + 1} names universe item {item} "
                    f"outside [1, {m}]"
                )
            cm |= 1 << (item - 1)
        cover_masks.append(cm)
    union = [0] * ground.size
    for mask in range(1, ground.size):
        low = mask & -mask
        union[mask] = union[mask ^ low] | cover_masks[low.bit_length() - 1]
    weight_of: dict[int, Fraction] = {0: Fraction(0)}
    values = []
    for u in union:
        wv = weight_of.get(u)
        if wv is None:
            wv = sum((w[i] for i in range(m) if u >> i & 1), Fraction(0))
            weight_of[u] = wv
        values.append(wv)
    return SetFunction(ground, tuple(values))


def uniform_matroid_rank(n: int, k: int) -> SetFunction:
    """f(S) = min(|S|, k)."""
    if not isinstance(k, int) or not 0 <= k <= n:
        raise InputError(f"matroid rank bound k={k!r} outside [0, n={n}]")
    ground = GroundSet(n)
    vals = tuple(Fraction(min(m.bit_count(), k)) for m in range(ground.size))
    return SetFunction(ground, vals)


def budget_additive(weights: Sequence[RationalLike], budget: RationalLike) -> SetFunction:
    """f(S) = min(sum of weights in S, budget); weights, budget >= 0."""
    w = [to_fraction(x) for x in weights]
    cap = to_fraction(budget)
    if any(x < 0 for x in w) or cap < 0:
        raise InputError("budget-additive weights and budget must be non-negative")
    ground = GroundSet(len(w))
    sums = [Fraction(0)] * ground.size
    for mask in range(1, ground.size):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + w[low.bit_length() - 1]
    return SetFunction(ground, tuple(min(s, cap) for s in sums))


def additive(weights: Sequence[RationalLike]) -> SetFunction:
    """f(S) = sum of weights in S (weights may be negative)."""
    w = [to_fraction(x) for x in weights]
    ground = GroundSet(len(w))
    sums = [Fraction(0)] * ground.size
    for mask in range(1, ground.size):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + w[low.bit_length() - 1]
    return SetFunction(ground, tuple(sums))


def explicit_table(values: Sequence[RationalLike]) -> SetFunction:
    return SetFunction.from_table(values)


def directed_cut(n: int, weights: Mapping[tuple[int, int], RationalLike]) -> SetFunction:
    """Weighted directed cut: f(S) = sum of w(u,v) over edges with u in S,
    v not in S (1-based vertices). Non-negative submodular, non-monotone."""
    ground = GroundSet(n)
    edges = []
    for (u, v), wt in weights.items():
        if not (1 <= u <= n and 1 <= v <= n) or u == v:
            raise InputError(f"edge ({u}, {v}) invalid for n={n}")
        wf = to_fraction(wt)
        if wf < 0:
            raise InputError(f"edge ({u}, {v}) has negative weight {wf}")
        edges.append((1 << (u - 1), 1 << (v - 1), wf))
    values = []
    for mask in range(ground.size):
        acc = Fraction(0)
        for ub, vb, wf in edges:
            if mask & ub and not mask & vb:
                acc += wf
        values.append(acc)
    return SetFunction(ground, tuple(values))


def scaled_to_lipschitz(f: SetFunction, c: RationalLike = 1) -> SetFunction:
    """Rescale so the Lipschitz constant is at most ``c`` (exact division;
    identity when already within the target or constant)."""
    target = to_fraction(c)
    lip = f.lipschitz_constant()
    if lip <= target or lip == 0:
        return f
    return f.scaled_by(target / lip)


# ---------------------------------------------------------------------------
# Generator registry + JSON function files

def _build_three_element(params: Mapping) -> SetFunction:
    return three_element(_require(params, "top"))


def _build_staircase(params: Mapping):
    return staircase(_int_param(params, "n"))


def _build_cardinality_relu(params: Mapping):
    return cardinality_relu(_int_param(params, "n"))


def _build_coverage(params: Mapping) -> SetFunction:
    return coverage(_require(params, "weights"), _require(params, "covers"))


def _build_matroid(params: Mapping) -> SetFunction:
    return uniform_matroid_rank(_int_param(params, "n"), _int_param(params, "k"))


def _build_budget_additive(params: Mapping) -> SetFunction:
    return budget_additive(_require(params, "weights"), _require(params, "budget"))


def _build_additive(params: Mapping) -> SetFunction:
    return additive(_require(params, "weights"))


def _build_explicit(params: Mapping) -> SetFunction:
    return explicit_table(_require(params, "values"))


GENERATORS: dict[str, Callable[[Mapping], SetFunction | SymmetricSetFunction]] = {
    "three-element": _build_three_element,
    "directed-edge": lambda params: directed_edge(),
    "staircase": _build_staircase,
    "cardinality-relu": _build_cardinality_relu,
    "coverage": _build_coverage,
    "uniform-matroid-rank": _build_matroid,
    "budget-additive": _build_budget_additive,
    "additive": _build_additive,
    "explicit-table": _build_explicit,
}


def _require(params: Mapping, key: str):
    if key not in params:
        raise InputError(f"generator parameter {key!r} is required")
    return params[key]


def _int_param(params: Mapping, key: str) -> int:
    v = _require(params, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"generator parameter {key!r} must be an integer, got {v!r}")
    return v


def build_generator(name: str, params: Mapping) -> SetFunction | SymmetricSetFunction:
    try:
        builder = GENERATORS[name]
    except KeyError:
        known = ", ".join(sorted(GENERATORS))
        raise InputError(f"unknown generator {name!r}; known: {known}") from None
    return builder(params)


def function_from_json(obj: Mapping) -> SetFunction | SymmetricSetFunction:
    """Build a function from a decoded JSON function file."""
    if not isinstance(obj, Mapping):
        raise InputError(f"function file must be a JSON object, got {type(obj).__name__}")
    if "generator" in obj:
        return build_generator(obj["generator"], obj.get("params", {}))
    if "values" not in obj or "n" not in obj:
        raise InputError('function file needs either {"n", "values"} or {"generator", "params"}')
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise InputError(f'field "n" must be an integer, got {n!r}')
    if not 1 <= n <= DENSE_MAX_N:
        raise InputError(f'field "n" = {n} outside [1, {DENSE_MAX_N}]')
    values = obj["values"]
    if not isinstance(values, Sequence) or isinstance(values, (str, bytes)):
        raise InputError('field "values" must be an array')
    if len(values) != 1 << n:
        raise InputError(
            f"values array length {len(values)} != expected 2^{n} = {1 << n}"
        )
    return SetFunction.from_table(values, n=n)


def load_function(path: str) -> SetFunction | SymmetricSetFunction:
    """Read a JSON function file; number literals parse as exact decimals."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh, parse_float=Fraction)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return function_from_json(obj)


def function_to_json(f: SetFunction) -> dict:
    return {
        "n": f.n,
        "values": [fraction_to_json(v) for v in f.values],
    }
