"""Exception taxonomy shared across the package.

Every error the CLI can surface maps to a stable machine-readable code
(see ``cli.ERROR_CODES``).
"""

from __future__ import annotations


class InputError(ValueError):
    """Malformed or out-of-contract input (bad parameters, parse failures)."""


class CapacityError(RuntimeError):
    """A sweep was requested beyond its supported ground-set size.

    ``check`` names the limiting operation so callers can report which
    verdict could not be computed.
    """

    def __init__(self, check: str, n: int, limit: int):
        self.check = check
        self.n = n
        self.limit = limit
        super().__init__(f"{check}: n={n} exceeds supported limit n<={limit}")


class DomainError(ValueError):
    """A bound was evaluated outside its stated hypotheses (e.g. a < 1/3)."""


class HypothesisError(ValueError):
    """Strict-hypothesis mode rejected parameters (e.g. q < 18)."""


class RangeConditionError(ValueError):
    """The per-coordinate decrement left [0,1]; carries the violating point.

    ``point`` is the bitmask x and ``coordinate`` the 1-based index i with
    f(x) - f_i(x^(i)) outside [0,1].
    """

    def __init__(self, point: int, coordinate: int):
        self.point = point
        self.coordinate = coordinate
        super().__init__(
            f"decrement at point {point:#x}, coordinate {coordinate} "
            f"lies outside [0,1]"
        )
