"""Distributions of Z = f(X_1, ..., X_n) for independent 0/1 coordinates.

Three ways to obtain the law of Z:

* ``exact_distribution`` enumerates all 2^n outcomes of a dense function
  (n <= 24) with exact rational product weights; the uniform case just
  counts table entries.
* ``symmetric_distribution`` pushes Binomial(n, p) through a symmetric
  function. Exact rational weights up to n = 20000 (incremental binomial
  coefficients over the common denominator t^n for p = s/t); beyond that a
  40-digit mpmath log-space accumulation, relative error per merged atom
  well below 1e-12, returned as floats.
* ``sample`` draws m outcomes from a counter-based Philox stream keyed by
  the seed, so identical (seed, m, f, p) always reproduce the same table;
  work proceeds in fixed-size chunks, independent of threading.

Tail conventions: Pr[Z >= v] and Pr[Z <= v] sum atom probabilities with
weak inequalities, no continuity correction; the upper event at relative
deviation d is Z >= (1+d)*mean with >=. The median is the least support
value with CDF >= 1/2.

``tail_table`` lines up exact tails against any of the closed-form bounds
(by name: chernoff-upper, chernoff-lower, ab-upper, ab-lower, alt-upper);
lower-tail bounds are evaluated at min(d, 1) since beyond d = 1 the event
is empty and any value in (0,1] remains a valid bound.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

import mpmath
import numpy as np

from . import bounds as bounds_mod
from .errors import CapacityError, InputError
from .rational import RationalLike, fraction_to_json, to_fraction
from .setfn import SetFunction, SymmetricSetFunction

EXACT_ENUM_MAX_N = 24
SYMMETRIC_EXACT_MAX_N = 20000
_SAMPLE_CHUNK = 1 << 16

_ZERO = Fraction(0)
_ONE = Fraction(1)

Value = Union[Fraction, float]


@dataclass(frozen=True)
class BernoulliProduct:
    """Independent coordinates; coordinate i is 1 with probability p[i]."""

    p: tuple[Fraction, ...]

    def __post_init__(self):
        for x in self.p:
            if not 0 <= x <= 1:
                raise InputError(f"coordinate probability {x} outside [0, 1]")

    @classmethod
    def of(cls, probs: Sequence[RationalLike]) -> BernoulliProduct:
        return cls(tuple(to_fraction(x) for x in probs))

    @classmethod
    def uniform(cls, n: int, p: RationalLike = Fraction(1, 2)) -> BernoulliProduct:
        return cls((to_fraction(p),) * n)

    @property
    def n(self) -> int:
        return len(self.p)

    def common_p(self) -> Fraction:
        if any(x != self.p[0] for x in self.p):
            raise InputError("coordinates are not identically distributed")
        return self.p[0]


@dataclass(frozen=True)
class Distribution:
    """Finite law of Z: strictly increasing support with matching masses."""

    support: tuple[Value, ...]
    probs: tuple[Value, ...]
    exact: bool

    def __post_init__(self):
        if len(self.support) != len(self.probs):
            raise InputError("support and probs must have equal length")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise InputError("support must be strictly increasing")
        total = sum(self.probs)
        if self.exact:
            if total != 1:
                raise InputError(f"exact probabilities sum to {total}, not 1")
        elif abs(float(total) - 1.0) > 1e-12:
            raise InputError(f"probabilities sum to {float(total)}, not within 1e-12 of 1")

    def pr_ge(self, v) -> Value:
        """Pr[Z >= v] (weak inequality)."""
        acc = _ZERO if self.exact else 0.0
        for s, p in zip(self.support, self.probs):
            if s >= v:
                acc += p
        return acc

    def pr_le(self, v) -> Value:
        """Pr[Z <= v] (weak inequality)."""
        acc = _ZERO if self.exact else 0.0
        for s, p in zip(self.support, self.probs):
            if s <= v:
                acc += p
        return acc


class Moments(NamedTuple):
    mean: Value
    variance: Value
    median: Value


def moments(d: Distribution) -> Moments:
    """Mean, variance, and the least support value with CDF >= 1/2."""
    mean = sum(v * p for v, p in zip(d.support, d.probs))
    variance = sum(v * v * p for v, p in zip(d.support, d.probs)) - mean * mean
    half = Fraction(1, 2) if d.exact else 0.5
    acc = _ZERO if d.exact else 0.0
    median = d.support[-1]
    for v, p in zip(d.support, d.probs):
        acc += p
        if acc >= half:
            median = v
            break
    return Moments(mean, variance, median)


def _from_mass(mass: dict, exact: bool) -> Distribution:
    items = sorted((v, p) for v, p in mass.items() if p > 0)
    return Distribution(
        support=tuple(v for v, _ in items),
        probs=tuple(p for _, p in items),
        exact=exact,
    )


def exact_distribution(f: SetFunction, bp: BernoulliProduct) -> Distribution:
    """Enumerate all 2^n outcomes with exact product weights."""
    n = f.n
    if n > EXACT_ENUM_MAX_N:
        raise CapacityError("exact-distribution", n, EXACT_ENUM_MAX_N)
    if bp.n != n:
        raise InputError(f"product has {bp.n} coordinates, function has {n}")

    if all(x == Fraction(1, 2) for x in bp.p):
        counts = Counter(f.values)
        denom = 1 << n
        mass = {v: Fraction(c, denom) for v, c in counts.items()}
        return _from_mass(mass, exact=True)

    weights = [_ONE]
    for x in bp.p:
        q = 1 - x
        weights = [w * q for w in weights] + [w * x for w in weights]
    mass: dict[Fraction, Fraction] = {}
    for mask, w in enumerate(weights):
        if w:
            v = f.values[mask]
            mass[v] = mass.get(v, _ZERO) + w
    return _from_mass(mass, exact=True)


def symmetric_distribution(g: SymmetricSetFunction, p: RationalLike) -> Distribution:
    """Push Binomial(n, p) through a symmetric function; exact for
    n <= 20000, 40-digit log-space floats beyond."""
    pf = to_fraction(p)
    if not 0 <= pf <= 1:
        raise InputError(f"probability {pf} outside [0, 1]")
    n = g.n
    if pf == 0 or pf == 1:
        return Distribution((g.levels[n if pf == 1 else 0],), (_ONE,), exact=True)
    if n <= SYMMETRIC_EXACT_MAX_N:
        return _symmetric_exact(g, pf)
    return _symmetric_logspace(g, pf)


def _symmetric_exact(g: SymmetricSetFunction, p: Fraction) -> Distribution:
    n = g.n
    s, t = p.numerator, p.denominator
    r = t - s
    # weight numerator at k: C(n,k) s^k r^(n-k) over denominator t^n,
    # maintained incrementally (one big multiply/divide per level).
    num = r ** n
    mass: dict[Fraction, int] = {}
    for k in range(n + 1):
        if num:
            v = g.levels[k]
            mass[v] = mass.get(v, 0) + num
        if k < n:
            num = num * (n - k) * s // ((k + 1) * r)
    denom = t ** n
    return _from_mass({v: Fraction(c, denom) for v, c in mass.items()}, exact=True)


def _symmetric_logspace(g: SymmetricSetFunction, p: Fraction) -> Distribution:
    n = g.n
    with mpmath.workdps(40):
        logp = mpmath.log(mpmath.mpf(p.numerator) / p.denominator)
        logq = mpmath.log(mpmath.mpf(p.denominator - p.numerator) / p.denominator)
        logw = n * logq  # level 0
        peaks: dict[Fraction, list] = {}
        for k in range(n + 1):
            peaks.setdefault(g.levels[k], []).append(logw)
            if k < n:
                logw += mpmath.log(n - k) - mpmath.log(k + 1) + logp - logq
        mass: dict[Fraction, float] = {}
        for v, logs in peaks.items():
            top = max(logs)
            total = mpmath.fsum(mpmath.exp(lw - top) for lw in logs)
            mass[v] = float(mpmath.exp(top) * total)
    total = sum(mass.values())
    return _from_mass({v: m / total for v, m in mass.items()}, exact=False)


def sample(
    f: SetFunction | SymmetricSetFunction,
    bp: BernoulliProduct,
    m: int,
    seed: int,
) -> Distribution:
    """Empirical law from m Philox-seeded draws; fully reproducible."""
    if m < 1:
        raise InputError(f"sample count must be >= 1, got {m}")
    gen = np.random.Generator(np.random.Philox(key=seed))

    if isinstance(f, SymmetricSetFunction):
        p = float(bp.common_p())
        if bp.n != f.n:
            raise InputError(f"product has {bp.n} coordinates, function has {f.n}")
        counts = np.zeros(f.n + 1, dtype=np.int64)
        left = m
        while left:
            chunk = min(left, _SAMPLE_CHUNK)
            ks = gen.binomial(f.n, p, size=chunk)
            counts += np.bincount(ks, minlength=f.n + 1)
            left -= chunk
        mass: dict[Fraction, float] = {}
        for k, c in enumerate(counts):
            if c:
                v = f.levels[k]
                mass[v] = mass.get(v, 0.0) + int(c) / m
        return _from_mass(mass, exact=False)

    n = f.n
    if bp.n != n:
        raise InputError(f"product has {bp.n} coordinates, function has {n}")
    pvec = np.array([float(x) for x in bp.p])
    powers = (1 << np.arange(n, dtype=np.int64))
    counts = np.zeros(1 << n, dtype=np.int64)
    left = m
    while left:
        chunk = min(left, _SAMPLE_CHUNK)
        u = gen.random((chunk, n))
        masks = ((u < pvec).astype(np.int64) * powers).sum(axis=1)
        counts += np.bincount(masks, minlength=1 << n)
        left -= chunk
    mass = {}
    for mask, c in enumerate(counts):
        if c:
            v = f.values[mask]
            mass[v] = mass.get(v, 0.0) + int(c) / m
    return _from_mass(mass, exact=False)


# ---------------------------------------------------------------------------
# Tail tables


@dataclass(frozen=True)
class BoundSpec:
    """A named bound column; ab forms carry their (a, b) constants."""

    name: str
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None

    _NAMES = ("chernoff-upper", "chernoff-lower", "ab-upper", "ab-lower", "alt-upper")

    def __post_init__(self):
        if self.name not in self._NAMES:
            raise InputError(
                f"unknown bound {self.name!r}; known: {', '.join(self._NAMES)}"
            )
        if self.name.startswith("ab-") and (self.a is None or self.b is None):
            raise InputError(f"bound {self.name!r} needs constants a and b")

    @classmethod
    def parse(cls, text: str) -> BoundSpec:
        """Parse "chernoff-upper" or "ab-upper:a=2,b=0"."""
        name, _, rest = text.partition(":")
        kwargs = {}
        if rest:
            for part in rest.split(","):
                key, _, val = part.partition("=")
                if key.strip() not in ("a", "b") or not val:
                    raise InputError(f"bad bound parameter {part!r} in {text!r}")
                kwargs[key.strip()] = to_fraction(val.strip())
        return cls(name.strip(), **kwargs)

    @property
    def label(self) -> str:
        if self.name.startswith("ab-"):
            return f"{self.name}(a={self.a},b={self.b})"
        return self.name

    def evaluate(self, mean: float, delta: float) -> float:
        if self.name == "chernoff-upper":
            return bounds_mod.chernoff_upper(mean, delta)
        if self.name == "chernoff-lower":
            return bounds_mod.chernoff_lower(mean, min(delta, 1.0))
        if self.name == "alt-upper":
            return bounds_mod.alt_upper(mean, delta * mean)
        a, b = float(self.a), float(self.b)
        if self.name == "ab-upper":
            return bounds_mod.ab_upper(a, b, mean, delta * mean)
        return bounds_mod.ab_lower(a, b, mean, min(delta, 1.0) * mean)


@dataclass(frozen=True)
class TailRow:
    delta: Value
    exact_upper: Value
    exact_lower: Value
    bound_values: tuple[tuple[str, float], ...]


def tail_table(
    d: Distribution,
    deltas: Sequence[RationalLike],
    bound_specs: Sequence[BoundSpec] = (),
    mean_override: Optional[RationalLike] = None,
) -> list[TailRow]:
    """One row per delta: exact tails of ``d`` against each requested bound."""
    if mean_override is not None:
        mean = to_fraction(mean_override) if d.exact else float(to_fraction(mean_override))
    else:
        mean = moments(d).mean
    mean_f = float(mean)
    if mean_f <= 0:
        raise InputError(f"tail table needs a positive mean, got {mean_f}")
    rows = []
    for raw in deltas:
        delta = to_fraction(raw) if d.exact else float(to_fraction(raw))
        if delta < 0:
            raise InputError(f"delta must be >= 0, got {delta}")
        upper = d.pr_ge((1 + delta) * mean)
        lower = d.pr_le((1 - delta) * mean)
        vals = tuple(
            (spec.label, spec.evaluate(mean_f, float(delta))) for spec in bound_specs
        )
        rows.append(TailRow(delta, upper, lower, vals))
    return rows


def tail_rows_to_csv(rows: Sequence[TailRow]) -> str:
    """Plot-ready CSV: delta, exact tails, then one column per bound."""
    if not rows:
        return "delta,exact_upper,exact_lower\n"
    header = ["delta", "exact_upper", "exact_lower"]
    header.extend(label for label, _ in rows[0].bound_values)
    lines = [",".join(header)]
    for row in rows:
        cells = [repr(float(row.delta)), repr(float(row.exact_upper)), repr(float(row.exact_lower))]
        cells.extend(repr(v) for _, v in row.bound_values)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# Exact rationals from large-n pushforwards can have 2^n-scale denominators;
# JSON reports include the exact form only when it stays readable.
EXACT_JSON_DIGIT_CAP = 60


def _value_json(v: Value) -> dict:
    out: dict = {"float": float(v)}
    if isinstance(v, Fraction):
        rendered = fraction_to_json(v)
        if len(str(rendered)) <= EXACT_JSON_DIGIT_CAP:
            out["exact"] = rendered
    return out


def tail_rows_to_json(rows: Sequence[TailRow]) -> list[dict]:
    return [
        {
            "delta": _value_json(row.delta),
            "exact_upper": _value_json(row.exact_upper),
            "exact_lower": _value_json(row.exact_lower),
            "bounds": {label: v for label, v in row.bound_values},
        }
        for row in rows
    ]


def distribution_to_json(d: Distribution) -> dict:
    return {
        "exact": d.exact,
        "atoms": [
            {"value": _value_json(v), "probability": _value_json(p)}
            for v, p in zip(d.support, d.probs)
        ],
    }
