"""Precision bookkeeping: every computation carries a PrecisionContext.

The context owns a private mpmath context clone so that concurrent
computations at different precisions never share mutable state.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

import mpmath

DEFAULT_GUARD_DIGITS = 15
DEFAULT_MAX_TERMS = 1_000_000
MAX_TERMS_ENV = "CONSTANTIA_MAX_TERMS"


def _env_max_terms() -> int:
    raw = os.environ.get(MAX_TERMS_ENV)
    if raw is None:
        return DEFAULT_MAX_TERMS
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_TERMS
    return value if value >= 1 else DEFAULT_MAX_TERMS


@dataclass(frozen=True)
class PrecisionContext:
    """Target digits plus guard digits; working precision is their sum."""

    target_digits: int
    guard_digits: int = DEFAULT_GUARD_DIGITS
    max_terms: int = field(default_factory=_env_max_terms)

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be positive")
        if self.guard_digits < 10:
            raise ValueError("guard_digits must be >= 10")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def mp(self):
        """Private mpmath context at working precision (cached per instance)."""
        ctx = self.__dict__.get("_mp")
        if ctx is None:
            ctx = mpmath.mp.clone()
            ctx.dps = self.working_digits
            object.__setattr__(self, "_mp", ctx)
        return ctx

    def mpf(self, x):
        return self.mp.mpf(x)

    @property
    def tolerance(self):
        """10^(-target_digits): the success bound for error estimates."""
        return self.mp.mpf(10) ** (-self.target_digits)

    @property
    def eps_work(self):
        """Roundoff floor a few digits above working precision."""
        return self.mp.mpf(10) ** (-(self.working_digits - 2))

    def with_guard(self, guard_digits: int) -> "PrecisionContext":
        return replace(self, guard_digits=guard_digits)

    def with_target(self, target_digits: int) -> "PrecisionContext":
        return replace(self, target_digits=target_digits)

    def retry_schedule(self, retries: int = 2):
        """Contexts with doubled guard digits, for budget-error retries."""
        out = []
        guard = self.guard_digits
        for _ in range(retries):
            guard *= 2
            out.append(self.with_guard(guard))
        return out


@dataclass(frozen=True)
class Approximation:
    """A computed value with an error bound and the work that produced it.

    ``heuristic`` is True when the bound rests on an unproven assumption
    (extrapolation agreement, lattice shell averaging, declared fold tails)
    rather than a valid tail policy.
    """

    value: object
    error_bound: object
    terms_used: int = 0
    heuristic: bool = False

    def digits(self) -> int:
        """Decimal digits certified by the error bound (floor estimate)."""
        if self.error_bound == 0:
            return 10 ** 9
        return int(-mpmath.log10(abs(self.error_bound)))
