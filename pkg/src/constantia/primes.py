"""Prime generation and accelerated sums/products over primes.

The fast route rewrites sum_p f(p) as sum_m c_m P(m) through a Dirichlet
expansion f(p) = sum_m c_m p^-m (m >= 2), with P the prime zeta function
computed from ln(zeta) by Moebius inversion. Congruence-restricted folds
have no elementary acceleration here and run directly over a sieve with a
declared heuristic tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BudgetExceededError, FunctionDomainError, InvalidPolicyError
from .precision import Approximation, PrecisionContext
from . import special

DEFAULT_SIEVE_LIMIT = 10 ** 7
MEMORY_CAP = 2 * 10 ** 8  # sieve cells


def sieve_primes(limit: int) -> np.ndarray:
    """Ascending primes <= limit (numpy sieve of Eratosthenes)."""
    if limit > MEMORY_CAP:
        raise BudgetExceededError(f"sieve limit {limit} exceeds memory cap")
    if limit < 2:
        return np.array([], dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if mask[p]:
            mask[p * p::p] = False
    return np.nonzero(mask)[0].astype(np.int64)


@dataclass(frozen=True)
class PrimeSieve:
    limit: int
    primes: Sequence[int] = field(default=None)

    def __post_init__(self):
        if self.primes is None:
            object.__setattr__(self, "primes", sieve_primes(self.limit))

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)


def mobius_values(n: int) -> list:
    """mu(0..n) by a linear sieve."""
    mu = [0] * (n + 1)
    if n >= 1:
        mu[1] = 1
    primes = []
    is_comp = [False] * (n + 1)
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if p * i > n:
                break
            is_comp[p * i] = True
            if i % p == 0:
                mu[p * i] = 0
                break
            mu[p * i] = -mu[i]
    return mu


def prime_zeta(s, ctx: PrecisionContext):
    """P(s) = sum_p p^-s via P(s) = sum_k mu(k)/k ln zeta(ks), s > 1."""
    w = ctx.mp
    sv = w.mpf(s)
    if sv <= 1:
        raise FunctionDomainError("prime_zeta", s, "requires s > 1")
    # ln zeta(ks) ~ 2^-ks; stop when it underflows the working tolerance
    kmax = int(ctx.working_digits * w.ln(10) / (sv * w.ln(2))) + 3
    mu = mobius_values(kmax + 1)
    total = w.mpf(0)
    tol = ctx.eps_work / 10
    for k in range(1, kmax + 1):
        if mu[k] == 0:
            continue
        z = special.zeta(k * sv, ctx)
        t = w.mpf(mu[k]) / k * w.ln(z)
        total += t
        if abs(t) < tol and k > 1:
            break
    return total


def prime_zeta_prime(s, ctx: PrecisionContext):
    """P'(s) = sum_k mu(k) zeta'(ks)/zeta(ks), s > 1."""
    w = ctx.mp
    sv = w.mpf(s)
    if sv <= 1:
        raise FunctionDomainError("prime_zeta_prime", s, "requires s > 1")
    kmax = int(ctx.working_digits * w.ln(10) / (sv * w.ln(2))) + 3
    mu = mobius_values(kmax + 1)
    total = w.mpf(0)
    tol = ctx.eps_work / 10
    for k in range(1, kmax + 1):
        if mu[k] == 0:
            continue
        ks = k * sv
        t = w.mpf(mu[k]) * special.zeta_prime(ks, ctx) / special.zeta(ks, ctx)
        total += t
        if abs(t) < tol and k > 1:
            break
    return total


@dataclass(frozen=True)
class DirichletExpansion:
    """f(p) = sum_{m>=min_power} c_m p^-m with a geometric majorant.

    coefficient(m) returns a Fraction or a callable(ctx) for numeric
    coefficients; |c_m| <= majorant_scale * majorant_ratio^m must hold so
    the tail over m can be bounded against P(m) <= 2^-m * 1.2.
    deriv_coefficient, when present, contributes d_m * (-P'(m)) terms
    (used by log-weighted prime sums).
    """

    coefficient: Callable
    min_power: int = 2
    majorant_scale: float = 1.0
    majorant_ratio: float = 1.0
    deriv_coefficient: Optional[Callable] = None
    first_prime: int = 2

    def __post_init__(self):
        if self.min_power < 2:
            raise InvalidPolicyError("expansion needs powers m >= 2")
        if not (0 < self.majorant_ratio < self.first_prime):
            raise InvalidPolicyError(
                "majorant ratio must be below the first prime used")


def _coef_value(c, ctx):
    w = ctx.mp
    if callable(c):
        return w.mpf(c(ctx))
    if isinstance(c, Fraction):
        return w.mpf(c.numerator) / c.denominator
    return w.mpf(c)


def _expansion_tail_bound(exp: DirichletExpansion, m: int, ctx):
    # sum_{k>m} scale*ratio^k * P_{>=p0}(k), with P_{>=p0}(k) <= 2 * p0^-k
    w = ctx.mp
    r = w.mpf(exp.majorant_ratio) / exp.first_prime
    if r >= 1:
        raise InvalidPolicyError("majorant ratio too large to bound tail")
    return 2 * w.mpf(exp.majorant_scale) * r ** (m + 1) / (1 - r)


def _restricted_prime_zeta(m, exp: DirichletExpansion, ctx):
    value = prime_zeta(m, ctx)
    if exp.first_prime > 2:
        w = ctx.mp
        for p in sieve_primes(exp.first_prime - 1):
            value -= w.mpf(int(p)) ** (-w.mpf(m))
    return value


def prime_sum_accelerated(expansion: DirichletExpansion,
                          ctx: PrecisionContext) -> Approximation:
    """sum over p >= first_prime of f(p) = sum_m c_m P(m) (+ d_m (-P'(m)))."""
    w = ctx.mp
    total = w.mpf(0)
    m = expansion.min_power
    used = 0
    tol = ctx.tolerance
    while used < ctx.max_terms:
        c = expansion.coefficient(m)
        if c is not None and c != 0:
            total += _coef_value(c, ctx) * _restricted_prime_zeta(m, expansion, ctx)
        if expansion.deriv_coefficient is not None:
            d = expansion.deriv_coefficient(m)
            if d is not None and d != 0:
                total += _coef_value(d, ctx) * (-prime_zeta_prime(m, ctx))
        used += 1
        bound = _expansion_tail_bound(expansion, m, ctx)
        if expansion.deriv_coefficient is not None:
            # -P'(m) <= 1.2 * ln(2) * m * 2^-m; fold into the same majorant
            bound = bound * (1 + m) * 2
        if bound < tol:
            return Approximation(total, bound, used)
        m += 1
    raise BudgetExceededError("expansion did not meet tolerance")


def prime_product_accelerated(expansion: DirichletExpansion,
                              ctx: PrecisionContext) -> Approximation:
    """prod_p g(p) = exp(sum_p ln g(p)) with ln g given as an expansion."""
    w = ctx.mp
    logsum = prime_sum_accelerated(expansion, ctx)
    value = w.exp(logsum.value)
    return Approximation(value, abs(value) * logsum.error_bound * 2,
                         logsum.terms_used, logsum.heuristic)


def prime_fold_direct(f: Callable, mode: str, ctx: PrecisionContext,
                      limit: int = DEFAULT_SIEVE_LIMIT,
                      residue_filter: Optional[tuple] = None,
                      tail_estimate: Optional[Callable] = None,
                      pairing: str = "single") -> Approximation:
    """Direct fold over sieved primes with a declared heuristic tail.

    residue_filter is (modulus, allowed_residues). pairing='consecutive'
    passes (p_i, p_{i+1}) pairs instead of single primes. An empty residue
    set yields the fold identity (0 for sums, 1 for products).
    """
    if mode not in ("sum", "product"):
        raise ValueError("mode must be 'sum' or 'product'")
    w = ctx.mp
    primes = sieve_primes(limit)
    if residue_filter is not None:
        modulus, allowed = residue_filter
        allowed = set(int(a) % modulus for a in allowed)
        keep = np.isin(primes % modulus, list(allowed)) if allowed else \
            np.zeros(len(primes), dtype=bool)
        primes = primes[keep]
    total = w.mpf(0) if mode == "sum" else w.mpf(1)
    used = 0
    if pairing == "consecutive":
        items = zip(primes, primes[1:])
    elif pairing == "single":
        items = ((p,) for p in primes)
    else:
        raise ValueError("pairing must be 'single' or 'consecutive'")
    for args in items:
        v = w.convert(f(*(int(a) for a in args)))
        if mode == "sum":
            total += v
        else:
            if v <= 0:
                raise InvalidPolicyError(f"nonpositive factor at p={args[0]}")
            total *= v
        used += 1
        if used > ctx.max_terms:
            raise BudgetExceededError("prime fold exceeded max_terms")
    tail = abs(w.mpf(tail_estimate(limit))) if tail_estimate else w.mpf(0)
    if mode == "product":
        tail = abs(total) * tail
    return Approximation(total, tail, used, heuristic=True)


def semiprime_sum(f: Callable, ctx: PrecisionContext,
                  limit: int = 10 ** 5,
                  tail_estimate: Optional[Callable] = None) -> Approximation:
    """Direct sum_{p<=q, pq<=limit} f(p,q) (each semiprime pq once)."""
    w = ctx.mp
    primes = sieve_primes(limit)
    total = w.mpf(0)
    used = 0
    for i, p in enumerate(primes):
        p = int(p)
        if p * p > limit:
            break
        for q in primes[i:]:
            q = int(q)
            if p * q > limit:
                break
            total += w.convert(f(p, q))
            used += 1
            if used > ctx.max_terms:
                raise BudgetExceededError("semiprime fold exceeded max_terms")
    tail = abs(w.mpf(tail_estimate(limit))) if tail_estimate else w.mpf(0)
    return Approximation(total, tail, used, heuristic=True)


def semiprime_sum_accelerated(expansion: DirichletExpansion,
                              ctx: PrecisionContext) -> Approximation:
    """sum over semiprimes of f(pq) = sum_m c_m (P(m)^2 + P(2m))/2.

    Uses the unordered-pair convention (p <= q, p = q included), the only
    one reproducing the published semiprime decimals.
    """
    w = ctx.mp
    total = w.mpf(0)
    m = expansion.min_power
    used = 0
    while used < ctx.max_terms:
        c = expansion.coefficient(m)
        if c is not None and c != 0:
            pm = prime_zeta(m, ctx)
            total += _coef_value(c, ctx) * (pm * pm + prime_zeta(2 * m, ctx)) / 2
        used += 1
        # (P^2+P(2m))/2 <= 1.2 * 4^-m; geometric with ratio majorant/4
        r = w.mpf(expansion.majorant_ratio) / 4
        bound = w.mpf(1.2) * expansion.majorant_scale * r ** (m + 1) / (1 - r)
        if bound < ctx.tolerance:
            return Approximation(total, bound, used)
        m += 1
    raise BudgetExceededError("semiprime expansion did not meet tolerance")
