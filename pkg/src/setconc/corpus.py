"""Seeded random instance corpora for property suites and sweeps.

All builders take a ``random.Random`` so a single seed reproduces the whole
corpus. Weights are small integers, keeping the exact arithmetic fast, and
every instance is guaranteed non-constant (the tail sweeps need a positive
mean).
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import setfn


def random_monotone_submodular(rng: random.Random, max_n: int = 10) -> setfn.SetFunction:
    """One of the standard non-negative monotone submodular families
    (weighted coverage / uniform matroid rank / budget-additive) with
    random small-integer parameters; never identically zero."""
    while True:
        n = rng.randint(1, max_n)
        kind = rng.choice(("coverage", "matroid", "budget"))
        if kind == "coverage":
            m = rng.randint(1, 8)
            weights = [rng.randint(0, 6) for _ in range(m)]
            covers = [
                [item for item in range(1, m + 1) if rng.random() < 0.4]
                for _ in range(n)
            ]
            f = setfn.coverage(weights, covers)
        elif kind == "matroid":
            f = setfn.uniform_matroid_rank(n, rng.randint(1, n))
        else:
            weights = [rng.randint(0, 5) for _ in range(n)]
            f = setfn.budget_additive(weights, rng.randint(1, 12))
        if any(v != 0 for v in f.values):
            return f


def random_directed_cut(rng: random.Random, max_n: int = 10) -> setfn.SetFunction:
    """Random weighted directed cut with per-vertex total weight <= 1
    (hence 1-Lipschitz): integer weights normalized by the largest
    per-vertex degree sum. Never identically zero."""
    while True:
        n = rng.randint(2, max_n)
        raw: dict[tuple[int, int], int] = {}
        for u in range(1, n + 1):
            for v in range(1, n + 1):
                if u != v and rng.random() < 0.5:
                    raw[(u, v)] = rng.randint(0, 4)
        loads = [0] * (n + 1)
        for (u, v), w in raw.items():
            loads[u] += w
            loads[v] += w
        top = max(loads)
        if top == 0:
            continue
        weights = {e: Fraction(w, top) for e, w in raw.items() if w}
        if not weights:
            continue
        return setfn.directed_cut(n, weights)
