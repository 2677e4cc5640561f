"""Generic evaluation engines: series, products, continued fractions,
lattice sums over expanding shells, and sequence-limit extrapolation.

Index conventions are always explicit: callers pass ``start``; the engine
never guesses whether a series begins at 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import BudgetExceededError, InvalidPolicyError
from .precision import Approximation, PrecisionContext


@dataclass(frozen=True)
class TailPolicy:
    """Rule converting a truncation point into a bound on the omitted tail.

    kinds:
      geometric(ratio)        |tail| <= |last| * r/(1-r), needs 0 < r < 1
      alternating_decreasing  |tail| <= |first omitted term|
      comparison(majorant)    majorant(n) bounds the tail after term n
      explicit(bound)         bound(n) is the tail bound after term n
    """

    kind: str
    ratio: Optional[object] = None
    bound: Optional[Callable] = None

    def __post_init__(self):
        if self.kind == "geometric":
            if self.ratio is None or not (0 < float(self.ratio) < 1):
                raise InvalidPolicyError("geometric policy needs 0 < ratio < 1")
        elif self.kind in ("comparison", "explicit"):
            if self.bound is None:
                raise InvalidPolicyError(f"{self.kind} policy needs a bound function")
        elif self.kind != "alternating_decreasing":
            raise InvalidPolicyError(f"unknown tail policy kind: {self.kind}")


def geometric(ratio) -> TailPolicy:
    return TailPolicy("geometric", ratio=ratio)


def alternating() -> TailPolicy:
    return TailPolicy("alternating_decreasing")


def comparison(majorant: Callable) -> TailPolicy:
    return TailPolicy("comparison", bound=majorant)


def explicit(bound: Callable) -> TailPolicy:
    return TailPolicy("explicit", bound=bound)


def sum_series(term: Callable, tail: TailPolicy, ctx: PrecisionContext,
               start: int = 0) -> Approximation:
    """Partial sum of term(start) + term(start+1) + ... with a tail bound.

    Stops at the first index where the policy's tail bound falls below
    ctx.tolerance; raises BudgetExceededError if max_terms is exhausted.
    """
    w = ctx.mp
    tol = ctx.tolerance
    total = w.mpf(0)
    prev = None
    n = start
    used = 0
    while used < ctx.max_terms:
        t = w.convert(term(n))
        if not w.isfinite(t):
            raise InvalidPolicyError(f"term({n}) is not finite")
        total += t
        used += 1
        if tail.kind == "alternating_decreasing" and prev is not None:
            if abs(t) > abs(prev) and abs(prev) > ctx.eps_work:
                raise InvalidPolicyError(
                    "alternating policy given non-decreasing magnitudes "
                    f"at n={n}")
            if prev * t > 0 and abs(t) > ctx.eps_work:
                raise InvalidPolicyError(
                    f"alternating policy given same-sign terms at n={n}")
        bound = _tail_bound(tail, t, n, ctx)
        if bound is not None and bound < tol:
            return Approximation(total, bound, used)
        prev = t
        n += 1
    raise BudgetExceededError(
        f"series did not meet tolerance within {ctx.max_terms} terms")


def _tail_bound(tail: TailPolicy, last, n, ctx):
    w = ctx.mp
    if tail.kind == "geometric":
        r = w.mpf(tail.ratio)
        return abs(last) * r / (1 - r)
    if tail.kind == "alternating_decreasing":
        # bound by the first omitted term, estimated by the last included one
        return abs(last)
    if tail.kind in ("comparison", "explicit"):
        return abs(w.mpf(tail.bound(n)))
    raise InvalidPolicyError(tail.kind)


def eval_product(factor: Callable, tail: TailPolicy, ctx: PrecisionContext,
                 start: int = 1) -> Approximation:
    """Infinite product as exp of the log-series, tail policy on the logs.

    All factors must be positive; an empty product (factor never called
    because the bound is already met) is 1.
    """
    w = ctx.mp

    def log_factor(n):
        f = factor(n)
        if f <= 0:
            raise InvalidPolicyError(f"nonpositive factor at n={n}: {f}")
        return w.ln(f)

    approx = sum_series(log_factor, tail, ctx, start=start)
    value = w.exp(approx.value)
    # |e^(s+e) - e^s| <= e^s * (e^|e| - 1) ~ value * bound for small bounds
    err = abs(value) * approx.error_bound * 2
    return Approximation(value, err, approx.terms_used, approx.heuristic)


def eval_generalized_cf(partial_num: Callable, partial_den: Callable, b0,
                        ctx: PrecisionContext,
                        depth: Optional[int] = None) -> Approximation:
    """Generalized continued fraction b0 + a1/(b1 + a2/(b2 + ...)).

    With an explicit depth, returns that convergent; otherwise iterates
    until two successive convergents agree within tolerance. The error
    estimate is the difference of the last two convergents.
    """
    w = ctx.mp
    if depth is not None and depth < 1:
        raise ValueError("depth must be >= 1")
    h_prev, h = w.mpf(1), w.mpf(b0)
    k_prev, k = w.mpf(0), w.mpf(1)
    x_prev = None
    n = 0
    limit = depth if depth is not None else ctx.max_terms
    while n < limit:
        n += 1
        a_n = w.mpf(partial_num(n))
        b_n = w.mpf(partial_den(n))
        h, h_prev = b_n * h + a_n * h_prev, h
        k, k_prev = b_n * k + a_n * k_prev, k
        if k == 0:
            raise ZeroDivisionError(f"zero denominator at convergent {n}")
        x = h / k
        if x_prev is not None:
            diff = abs(x - x_prev)
            if depth is None and diff < ctx.tolerance:
                return Approximation(x, diff, n)
        x_prev = x
        # rescale to avoid overflow of the raw recurrences
        scale = max(abs(h), abs(k))
        if scale > w.mpf(10) ** 100000:
            h, h_prev, k, k_prev = h / scale, h_prev / scale, k / scale, k_prev / scale
    if depth is None:
        raise BudgetExceededError(
            f"continued fraction did not settle within {ctx.max_terms} convergents")
    err = abs(x - x_prev) if x_prev is not None and n > 1 else abs(x)
    return Approximation(x, err, n, heuristic=True)


def sum_lattice(term: Callable, dimension: int, ctx: PrecisionContext,
                ratio_bound=None, averaging_depth: int = 0,
                shell_cap: int = 200) -> Approximation:
    """Primed lattice sum over expanding cubical shells (origin excluded).

    shell s holds the points with max(|i|,|j|[,|k|]) = s. With
    ``averaging_depth`` > 0 the partial sums are Cesaro-averaged that many
    times to tame conditional convergence; the resulting error estimate is
    heuristic. With a ``ratio_bound`` in (0,1) the shell sums are treated
    as a geometric majorant and the bound is sound.
    """
    if dimension not in (2, 3):
        raise ValueError("dimension must be 2 or 3")
    w = ctx.mp
    tol = ctx.tolerance
    partials = []
    total = w.mpf(0)
    terms = 0
    prev_shell = None
    for s in range(1, shell_cap + 1):
        shell = w.mpf(0)
        for point in _shell_points(s, dimension):
            shell += term(*point)
            terms += 1
        if terms > ctx.max_terms:
            raise BudgetExceededError("lattice sum exceeded max_terms")
        total += shell
        partials.append(total)
        if ratio_bound is not None:
            if prev_shell is not None and abs(shell) > abs(prev_shell) \
                    and abs(prev_shell) > ctx.eps_work:
                raise InvalidPolicyError(
                    f"shell sums not decreasing at s={s}")
            r = w.mpf(ratio_bound)
            bound = abs(shell) * r / (1 - r)
            if bound < tol:
                return Approximation(total, bound, terms)
            prev_shell = shell
        elif averaging_depth > 0 and len(partials) > averaging_depth + 1:
            cur = _cesaro(partials, averaging_depth)
            prv = _cesaro(partials[:-1], averaging_depth)
            est = abs(cur - prv)
            if est < tol:
                return Approximation(cur, est, terms, heuristic=True)
    if ratio_bound is None and averaging_depth > 0:
        cur = _cesaro(partials, averaging_depth)
        prv = _cesaro(partials[:-1], averaging_depth)
        return Approximation(cur, abs(cur - prv), terms, heuristic=True)
    raise BudgetExceededError(f"lattice sum did not converge by shell {shell_cap}")


def _shell_points(s: int, dimension: int):
    rng = range(-s, s + 1)
    if dimension == 2:
        for i in rng:
            for j in rng:
                if max(abs(i), abs(j)) == s:
                    yield (i, j)
    else:
        for i in rng:
            for j in rng:
                for k in rng:
                    if max(abs(i), abs(j), abs(k)) == s:
                        yield (i, j, k)


def _cesaro(partials, depth):
    seq = list(partials)
    for _ in range(depth):
        seq = [(a + b) / 2 for a, b in zip(seq, seq[1:])]
    return seq[-1]


def extrapolate_limit(seq: Callable, ctx: PrecisionContext,
                      method: str = "plain", order: int = 8,
                      start: int = 4) -> Approximation:
    """Limit of seq(n) as n grows. Error bounds here are always heuristic.

    methods:
      plain       evaluate at start, start+1, ... until successive values agree
      richardson  binomial-weighted Richardson assuming an error expansion
                  in powers of 1/n; uses ``order`` + 1 sample points
      aitken      iterated delta-squared on geometrically convergent sequences
    """
    if method == "plain":
        return _plain_limit(seq, ctx, start)
    if method == "richardson":
        return _richardson(seq, ctx, order, start)
    if method == "aitken":
        return _aitken(seq, ctx, start)
    raise ValueError(f"unknown extrapolation method: {method}")


def _plain_limit(seq, ctx, start):
    w = ctx.mp
    prev = None
    n = start
    used = 0
    while used < ctx.max_terms:
        v = w.mpf(seq(n))
        used += 1
        if prev is not None:
            diff = abs(v - prev)
            if diff < ctx.tolerance:
                return Approximation(v, diff, used, heuristic=True)
        prev = v
        n += 1
    raise BudgetExceededError("plain limit did not settle within max_terms")


def _richardson(seq, ctx, order, start):
    # lim = sum_j (-1)^(j+order) s(n0+j) (n0+j)^order / (j! (order-j)!)
    # exact elimination of 1/n, ..., 1/n^order error terms; weights grow
    # like 2^order n0^order / order!, so work at boosted precision.
    import math as _math

    n0 = max(start, order + 2)
    boost = int(order * _math.log10(max(n0 + order, 2))) + order + 10
    inner = PrecisionContext(ctx.working_digits + boost,
                             guard_digits=10, max_terms=ctx.max_terms)
    w = inner.mp
    samples = [w.mpf(seq(n0 + j)) for j in range(order + 1)]

    def estimate(k, offset):
        s = w.mpf(0)
        for j in range(k + 1):
            weight = (w.mpf(n0 + offset + j) ** k) * ((-1) ** (j + k))
            weight /= w.factorial(j) * w.factorial(k - j)
            s += weight * samples[offset + j]
        return s

    full = estimate(order, 0)
    lower = estimate(order - 1, 1) if order >= 1 else samples[-1]
    err = abs(full - lower)
    out = ctx.mp.mpf(full)
    return Approximation(out, ctx.mp.mpf(err), order + 1, heuristic=True)


def _aitken(seq, ctx, start):
    w = ctx.mp
    tol = ctx.tolerance
    values = [w.mpf(seq(start + i)) for i in range(3)]
    used = 3
    n = start + 3
    best = None
    while used < ctx.max_terms:
        table = list(values)
        while len(table) >= 3:
            nxt = []
            for s0, s1, s2 in zip(table, table[1:], table[2:]):
                denom = s2 - 2 * s1 + s0
                if denom == 0:
                    nxt.append(s2)
                    continue
                nxt.append(s2 - (s2 - s1) ** 2 / denom)
            table = nxt
        cur = table[-1]
        if best is not None:
            diff = abs(cur - best)
            if diff < tol:
                return Approximation(cur, diff, used, heuristic=True)
            if diff > abs(values[-1] - values[-2]) * 10 and used > 8:
                raise InvalidPolicyError("aitken oscillation detected")
        best = cur
        values.append(w.mpf(seq(n)))
        used += 1
        n += 1
    raise BudgetExceededError("aitken did not settle within max_terms")
