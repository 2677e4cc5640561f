"""Exact big-integer enumerations used as ground truth for asymptotic
constants. Everything here is pure integer arithmetic; in particular the
Collatz admissibility decisions compare 3^a against 2^b exactly, never
through floating-point logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import List, Sequence

from .errors import OracleCapError
from .precision import Approximation, PrecisionContext

INVOLUTION_CAP = 5000
CARLITZ_CAP = 2000
LEFTIST_CAP = 400
COLLATZ_ORDER_CAP = 60
ROWCONVEX_CAP = 5000
SIMPLE_PERM_CAP = 10


@dataclass(frozen=True)
class IntegerSequence:
    name: str
    origin: int
    values: Sequence[int]

    def __getitem__(self, n: int) -> int:
        return self.values[n - self.origin]


def involution_count(n: int) -> int:
    """t_n = t_{n-1} + (n-1) t_{n-2}, t_0 = t_1 = 1."""
    if n < 0 or n > INVOLUTION_CAP:
        raise OracleCapError(f"involution_count cap is {INVOLUTION_CAP}")
    a, b = 1, 1  # t_0, t_1
    if n <= 1:
        return 1
    for k in range(2, n + 1):
        a, b = b, b + (k - 1) * a
    return b


def involution_count_brute(n: int) -> int:
    """Count p in S_n with p^2 = identity, by exhaustion (test oracle)."""
    if n > 8:
        raise OracleCapError("brute force capped at n=8")
    count = 0
    for p in permutations(range(n)):
        if all(p[p[i]] == i for i in range(n)):
            count += 1
    return count


def carlitz_count(n: int) -> int:
    """Compositions of n with no two equal adjacent parts.

    DP on (remaining, first part): D(n,j) = T(n-j) - D(n-j,j) + [n==j],
    T(m) = sum_j D(m,j).
    """
    if n < 1 or n > CARLITZ_CAP:
        raise OracleCapError(f"carlitz_count cap is {CARLITZ_CAP}")
    # D[m][j] for j <= m; stored as dict-of-lists rows built bottom-up
    T = [0] * (n + 1)
    D: List[List[int]] = [[0] * (n + 1) for _ in range(n + 1)]
    for m in range(1, n + 1):
        total = 0
        for j in range(1, m + 1):
            v = 1 if m == j else 0
            rem = m - j
            if rem >= 1:
                v += T[rem] - (D[rem][j] if j <= rem else 0)
            D[m][j] = v
            total += v
        T[m] = total
    return T[n]


def carlitz_count_brute(n: int) -> int:
    """Exhaustive composition filter (test oracle, n <= 12)."""
    if n > 12:
        raise OracleCapError("brute force capped at n=12")

    def count(remaining, last):
        if remaining == 0:
            return 1
        return sum(count(remaining - part, part)
                   for part in range(1, remaining + 1) if part != last)

    return count(n, 0)


def leftist_series(N: int) -> IntegerSequence:
    """First N coefficients of the fixed point of L(x) = x + L(x L(x)).

    Coefficient extraction gives the recurrence
        L_n = sum_{m=1}^{floor(n/2)} L_m * [x^(n-m)] L(x)^m   (n >= 2)
    where each needed power coefficient only involves L_1..L_{n-1}; powers
    are extended one coefficient per step as L grows.
    """
    if N < 1 or N > LEFTIST_CAP:
        raise OracleCapError(f"leftist_series cap is {LEFTIST_CAP}")
    L = [0, 1]  # L[1] = 1
    # powers[m] = coefficient list of L(x)^m, powers[m][j] = [x^j] L^m
    powers: List[List[int]] = [[1], [0, 1]]
    for n in range(2, N + 1):
        total = 0
        for m in range(1, n // 2 + 1):
            if m >= len(powers):
                powers.append(None)
            if powers[m] is None or len(powers[m]) <= n - m:
                _extend_power(powers, L, m, n - m)
            total += L[m] * powers[m][n - m]
        L.append(total)
        if len(powers[1]) <= n:
            powers[1].append(total)
        else:
            powers[1][n] = total
    return IntegerSequence("leftist", 1, L[1:])


def _extend_power(powers, L, m, upto):
    """Fill powers[m][0..upto] from powers[m-1] by one-step convolution."""
    if powers[m] is None:
        powers[m] = [0] * m + [0] * max(0, upto - m + 1)
        powers[m] = powers[m][:upto + 1] if len(powers[m]) > upto + 1 else powers[m]
        start = m
    else:
        start = len(powers[m])
    if len(powers[m]) < upto + 1:
        powers[m].extend([0] * (upto + 1 - len(powers[m])))
    prev = powers[m - 1]
    for j in range(max(start, m), upto + 1):
        acc = 0
        # [x^j] L^m = sum_k L_k * [x^(j-k)] L^(m-1), k from 1
        kmax = min(len(L) - 1, j - (m - 1))
        for k in range(1, kmax + 1):
            pj = j - k
            if pj < len(prev):
                acc += L[k] * prev[pj]
        powers[m][j] = acc


def leftist_count_brute(n_leaves: int) -> int:
    """Count leftist trees with n external nodes by exhaustive generation.

    d-number: d(empty) = 0, d(node) = 1 + min(d_L, d_R); a tree is leftist
    when d(left) >= d(right) at every node. Counting by external nodes
    (internal nodes + 1) reproduces the L(x) = x + L(x L(x)) coefficients;
    a literal two-child-only strict reading does not. (test oracle, n <= 8)
    """
    if n_leaves > 8:
        raise OracleCapError("brute force capped at 8 external nodes")

    def gen(n):
        # d-numbers of the leftist trees with n internal nodes
        if n == 0:
            return [0]
        out = []
        for a in range(n):
            for dl in gen(a):
                for dr in gen(n - 1 - a):
                    if dl >= dr:
                        out.append(1 + min(dl, dr))
        return out

    return len(gen(n_leaves - 1))


def collatz_admissible(j: int) -> int:
    """Number of admissible up/down sequences of order j.

    A sequence of j factors 3/2 and m-j factors 1/2 whose running product
    stays strictly above 1 until exactly the last step; m is forced to
    floor(j log2 3) + 1. Prefix tests compare 3^u with 2^l exactly.
    """
    if j < 1 or j > COLLATZ_ORDER_CAP:
        raise OracleCapError(f"collatz_admissible cap is {COLLATZ_ORDER_CAP}")
    m = (3 ** j).bit_length()  # floor(j log2 3) + 1
    pow3 = [3 ** u for u in range(j + 1)]
    ways = {0: 1}
    for level in range(1, m):
        barrier = 1 << level
        nxt = {}
        for u, count in ways.items():
            for u2 in (u, u + 1):
                if u2 <= j and pow3[u2] > barrier:
                    nxt[u2] = nxt.get(u2, 0) + count
        ways = nxt
    return ways.get(j, 0)


def collatz_admissible_brute(j: int) -> int:
    """Exhaustive pattern check (test oracle, j <= 6)."""
    if j > 6:
        raise OracleCapError("brute force capped at j=6")
    from itertools import combinations
    m = (3 ** j).bit_length()
    count = 0
    for ups in combinations(range(m), j):
        num = den = 1
        ok = True
        upset = set(ups)
        for step in range(m):
            num *= 3 if step in upset else 1
            den *= 2
            if step < m - 1 and not num > den:
                ok = False
                break
            if step == m - 1 and not num < den:
                ok = False
                break
        if ok:
            count += 1
    return count


def collatz_mean_stopping(ctx: PrecisionContext,
                          max_level: int = 1200) -> Approximation:
    """Mean stopping time over odd integers, 9.4779555565...

    Computed in survival form: with A(l) the exact probability that the
    running product stays above 1 through step l (first step forced up,
    each later step a fair coin), the mean of the stopping coefficient
    1 + j + floor(j log2 3) equals 3 * sum_{l>=0} A(l) - 1. The direct
    sum over orders j converges far too slowly to be usable.

    The DP mass is exact; the geometric tail estimate past max_level is
    heuristic, with the measured 10-level ratio.
    """
    w = ctx.mp
    two = w.mpf(2)
    ways = {0: 1}
    A = [w.mpf(1)]
    pow3 = [1]
    total = w.mpf(1)
    tol = ctx.tolerance / 10
    for level in range(1, max_level + 1):
        barrier = 1 << level
        nxt = {}
        for u, count in ways.items():
            for u2 in (u, u + 1):
                while len(pow3) <= u2:
                    pow3.append(pow3[-1] * 3)
                if pow3[u2] > barrier:
                    nxt[u2] = nxt.get(u2, 0) + count
        ways = nxt
        alive = w.mpf(sum(ways.values())) / two ** level
        A.append(alive)
        total += alive
        if level >= 40 and level % 10 == 0:
            ratio = (A[level] / A[level - 10]) ** (w.mpf(1) / 10)
            tail = A[level] * ratio / (1 - ratio)
            if 3 * tail < tol:
                value = 3 * (total + tail) - 1
                return Approximation(value, 6 * tail, level, heuristic=True)
    ratio = (A[-1] / A[-11]) ** (w.mpf(1) / 10)
    tail = A[-1] * ratio / (1 - ratio)
    return Approximation(3 * (total + tail) - 1, 6 * tail + w.mpf(10) * tail,
                         max_level, heuristic=True)


def rowconvex_count(n: int) -> int:
    """Row-convex polyomino counts: A(n) = 5A(n-1) - 7A(n-2) + 4A(n-3)."""
    if n < 1 or n > ROWCONVEX_CAP:
        raise OracleCapError(f"rowconvex_count cap is {ROWCONVEX_CAP}")
    seeds = [1, 2, 6, 19]
    if n <= 4:
        return seeds[n - 1]
    a, b, c = seeds[1], seeds[2], seeds[3]  # A(2), A(3), A(4)
    for _ in range(5, n + 1):
        a, b, c = b, c, 5 * c - 7 * b + 4 * a
    return c


def simple_permutation_count(n: int) -> int:
    """Permutations of size n with no nontrivial interval mapped onto an
    interval (lengths strictly between 1 and n)."""
    if n < 1 or n > SIMPLE_PERM_CAP:
        raise OracleCapError(f"simple_permutation_count cap is {SIMPLE_PERM_CAP}")
    if n == 1:
        return 1
    count = 0
    for p in permutations(range(n)):
        if _is_simple(p, n):
            count += 1
    return count


def _is_simple(p, n):
    for i in range(n - 1):
        lo = hi = p[i]
        for j in range(i + 1, n):
            v = p[j]
            if v < lo:
                lo = v
            elif v > hi:
                hi = v
            length = j - i + 1
            if length == n:
                break
            if hi - lo + 1 == length:
                return False
    return True
