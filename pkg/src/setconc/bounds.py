"""Closed-form tail bounds for functions of independent 0/1 coordinates.

Everything here is a pure formula in (mean, deviation): no set function is
consulted. All bounds are evaluated in log-space so mean*delta up to ~1e4
cannot overflow; each bound has a ``*_log`` companion returning the natural
log of the probability bound.

Forms implemented (Z with mean m = E[Z], relative deviation d, absolute
deviation t):

* exponential-moment bound:  log E[e^(lambda (Z-m))] <= (e^lambda - lambda - 1) m
* multiplicative upper tail: Pr[Z >= (1+d) m] <= (e^d / (1+d)^(1+d))^m
* multiplicative lower tail: Pr[Z <= (1-d) m] <= e^(-d^2 m / 2), 0 <= d <= 1
* (a,b) upper tail:          Pr[Z >= m + t] <= e^(-t^2 / (2 (a m + b + c t))),
                             c = (3a - 1)/6, requires a >= 1/3
* (a,b) lower tail:          Pr[Z <= m - t] <= e^(-t^2 / (2 (a m + b))), 0 < t <= m
* additive upper tail:       Pr[Z >= m + t] <= e^(-t^2 / (2m + 2t/3))
                             (the (1,0) specialization; weaker for large t)
* subadditive tail:          Pr[Z >= (q+1) a + k] <= Pr[Z <= a]^(-q) q^(-k)
                             for non-negative subadditive f with steps in
                             [0,1]; stated for integer q >= 18 but useful at
                             q = 2 with a = median, so the hypothesis is
                             enforced only behind ``strict_hypothesis``.

``min_deviation_for_target`` inverts the upper-tail forms by bisection
(each is strictly decreasing in the deviation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, HypothesisError, InputError

SUBADDITIVE_TAIL_MIN_Q = 18


@dataclass(frozen=True)
class TailQuery:
    """A tail event around the mean; exactly one of delta/t at construction."""

    mean: float
    side: str                      # "upper" | "lower"
    delta: Optional[float] = None
    t: Optional[float] = None

    def __post_init__(self):
        if self.mean <= 0:
            raise InputError(f"mean must be positive, got {self.mean}")
        if self.side not in ("upper", "lower"):
            raise InputError(f"side must be 'upper' or 'lower', got {self.side!r}")
        if (self.delta is None) == (self.t is None):
            raise InputError("exactly one of delta / t must be set")
        dev = self.delta if self.delta is not None else self.t
        if dev < 0:
            raise InputError(f"deviation must be >= 0, got {dev}")

    @property
    def as_delta(self) -> float:
        return self.delta if self.delta is not None else self.t / self.mean

    @property
    def as_t(self) -> float:
        return self.t if self.t is not None else self.delta * self.mean


@dataclass(frozen=True)
class SubadditiveTailQuery:
    """Parameters of the q-fold tail bound: level a, Pr[Z <= a], q, k."""

    threshold: float
    p_below: float
    q: int
    k: int

    def __post_init__(self):
        if self.threshold <= 0:
            raise InputError(f"threshold must be positive, got {self.threshold}")
        if not 0 < self.p_below <= 1:
            raise InputError(f"p_below must be in (0, 1], got {self.p_below}")
        if not isinstance(self.q, int) or self.q < 2:
            raise InputError(f"q must be an integer >= 2, got {self.q!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise InputError(f"k must be an integer >= 1, got {self.k!r}")


@dataclass(frozen=True)
class SubadditiveTailBound:
    value: float                 # may exceed 1 (the bound can be vacuous)
    log_value: float
    event_threshold: float       # the bound applies to Pr[Z >= event_threshold]
    hypothesis_satisfied: bool   # q >= 18 as stated


def entropy_moment_bound(lam: float, mean: float) -> float:
    """(e^lambda - lambda - 1) * mean; >= 0 for every lambda."""
    if mean <= 0:
        raise DomainError(f"mean must be positive, got {mean}")
    return (math.expm1(lam) - lam) * mean


def chernoff_upper_log(mean: float, delta: float) -> float:
    if mean <= 0:
        raise DomainError(f"mean must be positive, got {mean}")
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    return mean * (delta - (1.0 + delta) * math.log1p(delta))


def chernoff_upper(mean: float, delta: float) -> float:
    """Pr[Z >= (1+delta) mean] bound; Chernoff-type decay."""
    return math.exp(chernoff_upper_log(mean, delta))


def chernoff_lower_log(mean: float, delta: float) -> float:
    if mean <= 0:
        raise DomainError(f"mean must be positive, got {mean}")
    if not 0 <= delta <= 1:
        raise DomainError(f"delta must be in [0, 1], got {delta}")
    return -delta * delta * mean / 2.0


def chernoff_lower(mean: float, delta: float) -> float:
    """Pr[Z <= (1-delta) mean] bound; delta > 1 would ask about Z < 0."""
    return math.exp(chernoff_lower_log(mean, delta))


def ab_upper_log(a: float, b: float, mean: float, t: float) -> float:
    if a < 1.0 / 3.0:
        raise DomainError(f"a must be >= 1/3, got {a}")
    if b < 0:
        raise DomainError(f"b must be >= 0, got {b}")
    if mean <= 0:
        raise DomainError(f"mean must be positive, got {mean}")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0:
        return 0.0
    c = (3.0 * a - 1.0) / 6.0
    return -0.5 * t * t / (a * mean + b + c * t)


def ab_upper(a: float, b: float, mean: float, t: float) -> float:
    """Pr[Z >= mean + t] bound for (a,b)-self-bounding Z; c = (3a-1)/6."""
    return math.exp(ab_upper_log(a, b, mean, t))


def ab_lower_log(a: float, b: float, mean: float, t: float) -> float:
    if a < 1.0 / 3.0:
        raise DomainError(f"a must be >= 1/3, got {a}")
    if b < 0:
        raise DomainError(f"b must be >= 0, got {b}")
    if mean <= 0:
        raise DomainError(f"mean must be positive, got {mean}")
    if t < 0 or t > mean:
        raise DomainError(f"t must be in [0, mean], got t={t}, mean={mean}")
    if t == 0:
        return 0.0
    return -0.5 * t * t / (a * mean + b)


def ab_lower(a: float, b: float, mean: float, t: float) -> float:
    """Pr[Z <= mean - t] bound for (a,b)-self-bounding Z; 0 < t <= mean."""
    return math.exp(ab_lower_log(a, b, mean, t))


def alt_upper_log(mean: float, t: float) -> float:
    if mean <= 0:
        raise DomainError(f"mean must be positive, got {mean}")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0:
        return 0.0
    return -t * t / (2.0 * mean + 2.0 * t / 3.0)


def alt_upper(mean: float, t: float) -> float:
    """Additive-form upper tail e^(-t^2/(2 mean + 2t/3)); identical to
    ab_upper(1, 0, mean, t) but simple-exponential for large t."""
    return math.exp(alt_upper_log(mean, t))


def subadditive_tail(
    query: SubadditiveTailQuery, strict_hypothesis: bool = False
) -> SubadditiveTailBound:
    """Evaluate Pr[Z <= a]^(-q) * q^(-k) and the event threshold (q+1)a + k."""
    if strict_hypothesis and query.q < SUBADDITIVE_TAIL_MIN_Q:
        raise HypothesisError(
            f"q = {query.q} < {SUBADDITIVE_TAIL_MIN_Q}; rerun without "
            f"strict_hypothesis to apply the bound anyway"
        )
    log_value = -query.q * math.log(query.p_below) - query.k * math.log(query.q)
    return SubadditiveTailBound(
        value=math.exp(log_value),
        log_value=log_value,
        event_threshold=(query.q + 1) * query.threshold + query.k,
        hypothesis_satisfied=query.q >= SUBADDITIVE_TAIL_MIN_Q,
    )


_FORMS = ("chernoff", "alt", "ab")


def min_deviation_for_target(
    form: str,
    mean: float,
    target_p: float,
    a: Optional[float] = None,
    b: Optional[float] = None,
    rel_tol: float = 1e-9,
) -> float:
    """Smallest deviation with upper-tail bound <= target_p, by bisection.

    Returns delta for the "chernoff" form and t for "alt" / "ab" (at
    mean = 1 the two are directly comparable).
    """
    if form not in _FORMS:
        raise InputError(f"unknown bound form {form!r}; known: {', '.join(_FORMS)}")
    if not 0 < target_p:
        raise InputError(f"target probability must be positive, got {target_p}")
    if target_p >= 1:
        return 0.0
    if form == "ab" and (a is None or b is None):
        raise InputError("form 'ab' needs both a and b")

    if form == "chernoff":
        logbound = lambda d: chernoff_upper_log(mean, d)
    elif form == "alt":
        logbound = lambda t: alt_upper_log(mean, t)
    else:
        logbound = lambda t: ab_upper_log(a, b, mean, t)

    log_target = math.log(target_p)
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if logbound(hi) <= log_target:
            break
        lo, hi = hi, hi * 2.0
    else:
        raise InputError(f"bound never reaches target {target_p}")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if logbound(mid) <= log_target:
            hi = mid
        else:
            lo = mid
    return hi
