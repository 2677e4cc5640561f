"""Root-finding, scalar maximization, and qualitative threshold bisection.

find_root keeps a certified sign-change bracket at every step: bisection
narrows until secant/Newton steps are safe, and any polished iterate that
escapes the bracket or hits a flat spot falls back to bisection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple

from .errors import (BudgetExceededError, InvalidPolicyError,
                     NoSignChangeError, UnresolvedPredicateError)
from .precision import Approximation, PrecisionContext

CONVERGES = "converges"
DIVERGES = "diverges"


@dataclass(frozen=True)
class Bracket:
    lo: object
    hi: object
    f_lo_sign: int
    f_hi_sign: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise NoSignChangeError("bracket needs lo < hi")
        if self.f_lo_sign * self.f_hi_sign >= 0:
            raise NoSignChangeError("bracket endpoints must differ in sign")


def bracket_from(f: Callable, lo, hi, ctx: PrecisionContext) -> Bracket:
    w = ctx.mp
    lo, hi = w.mpf(lo), w.mpf(hi)
    flo, fhi = w.convert(f(lo)), w.convert(f(hi))
    slo = 1 if flo > 0 else (-1 if flo < 0 else 0)
    shi = 1 if fhi > 0 else (-1 if fhi < 0 else 0)
    if slo == 0 or shi == 0 or slo == shi:
        raise NoSignChangeError(
            f"no certified sign change on [{lo}, {hi}] (signs {slo}, {shi})")
    return Bracket(lo, hi, slo, shi)


def find_root(f: Callable, bracket, ctx: PrecisionContext) -> Approximation:
    """Root inside a sign-change bracket to 10^-target_digits width."""
    w = ctx.mp
    if isinstance(bracket, tuple):
        bracket = bracket_from(f, bracket[0], bracket[1], ctx)
    lo, hi = w.mpf(bracket.lo), w.mpf(bracket.hi)
    flo_sign = bracket.f_lo_sign
    flo = w.convert(f(lo))
    fhi = w.convert(f(hi))
    tol = ctx.tolerance
    scale = max(abs(lo), abs(hi), w.mpf(1))
    used = 0
    # plain bisection until the bracket is comfortably small
    while hi - lo > scale / 1024 and used < ctx.max_terms:
        mid = (lo + hi) / 2
        fm = w.convert(f(mid))
        used += 1
        if fm == 0:
            return Approximation(mid, w.mpf(0), used)
        if (1 if fm > 0 else -1) == flo_sign:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    # secant polishing with bracket safeguarding
    while hi - lo > tol * scale and used < ctx.max_terms:
        denom = fhi - flo
        if denom != 0:
            x = hi - fhi * (hi - lo) / denom
        else:
            x = (lo + hi) / 2
        if not (lo < x < hi):
            x = (lo + hi) / 2
        fx = w.convert(f(x))
        used += 1
        if fx == 0:
            return Approximation(x, w.mpf(0), used)
        if (1 if fx > 0 else -1) == flo_sign:
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
    if hi - lo > tol * scale:
        raise BudgetExceededError("root polish exceeded max_terms")
    root = (lo + hi) / 2
    return Approximation(root, hi - lo, used)


def maximize_scalar(f: Callable, interval: Tuple, ctx: PrecisionContext):
    """(argmax, max) of a unimodal f; golden section then parabolic fit.

    The argmax is only determined to about half the working digits of f
    (the function is flat to second order), so evaluation happens at
    doubled precision internally.
    """
    inner = PrecisionContext(2 * ctx.target_digits + 10, guard_digits=10,
                             max_terms=ctx.max_terms)
    w = inner.mp
    lo, hi = w.mpf(interval[0]), w.mpf(interval[1])
    invphi = (w.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = w.convert(f(c)), w.convert(f(d))
    f_lo, f_hi = w.convert(f(lo)), w.convert(f(hi))
    if max(fc, fd) < max(f_lo, f_hi):
        raise InvalidPolicyError("endpoints dominate: f not unimodal inside")
    used = 4
    tol = w.mpf(10) ** (-(ctx.target_digits + 2))
    while b - a > tol and used < ctx.max_terms:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = w.convert(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = w.convert(f(d))
        used += 1
    x0 = (a + b) / 2
    # parabolic refinement of both argmax and value
    h = (b - a) / 2 + w.mpf(10) ** (-(ctx.target_digits + 2))
    f0, fp, fm = w.convert(f(x0)), w.convert(f(x0 + h)), w.convert(f(x0 - h))
    denom = fp - 2 * f0 + fm
    if denom < 0:
        x_star = x0 - h * (fp - fm) / (2 * denom)
        f_star = w.convert(f(x_star))
        if f_star < f0:
            x_star, f_star = x0, f0
    else:
        x_star, f_star = x0, f0
    out = ctx.mp
    return out.mpf(x_star), out.mpf(f_star)


def bisect_qualitative(predicate: Callable, bracket: Tuple,
                       ctx: PrecisionContext) -> Approximation:
    """Threshold between predicate classes, located by bisection.

    predicate(x) returns CONVERGES or DIVERGES and may raise
    UnresolvedPredicateError; in that case the search stops and reports
    the width achieved so far. The bound is heuristic by nature.
    """
    w = ctx.mp
    lo, hi = w.mpf(bracket[0]), w.mpf(bracket[1])
    c_lo = predicate(lo)
    c_hi = predicate(hi)
    if c_lo == c_hi:
        raise UnresolvedPredicateError(
            f"predicate is {c_lo} at both endpoints")
    tol = ctx.tolerance
    used = 2
    while hi - lo > tol and used < ctx.max_terms:
        mid = (lo + hi) / 2
        try:
            c = predicate(mid)
        except UnresolvedPredicateError:
            break
        used += 1
        if c == c_lo:
            lo = mid
        else:
            hi = mid
    return Approximation((lo + hi) / 2, (hi - lo) / 2, used, heuristic=True)
