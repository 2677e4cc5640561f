"""Arbitrary-precision special functions needed by the catalog recipes.

Only real arguments are supported. zeta and its derivative come from
Euler-Maclaurin summation with explicit tail terms; alternating series
(beta, eta-style) go through Cohen-Rodriguez-Zagier acceleration; Bessel
functions use their ascending series, with the log-coupled companion
series for Y0/K0/K1. gamma is delegated to mpmath.
"""

from __future__ import annotations

from typing import Callable

from .errors import BudgetExceededError, FunctionDomainError
from .precision import PrecisionContext


def gamma(x, ctx: PrecisionContext):
    """Gamma function (mpmath-backed; pole check on nonpositive integers)."""
    w = ctx.mp
    xv = w.mpf(x)
    if xv <= 0 and xv == w.floor(xv):
        raise FunctionDomainError("gamma", x, "pole at nonpositive integers")
    return w.gamma(xv)


def accelerated_alternating_sum(a: Callable, ctx: PrecisionContext,
                                terms: int = None):
    """sum_{k>=0} (-1)^k a(k) for totally monotone a, via CRZ acceleration.

    Converges like (3+sqrt(8))^-n, so n ~ 1.31 * digits.
    """
    w = ctx.mp
    if terms is None:
        terms = int(1.31 * ctx.working_digits) + 8
    d = (3 + 2 * w.sqrt(2)) ** terms
    d = (d + 1 / d) / 2
    b, c, s = w.mpf(-1), -d, w.mpf(0)
    for k in range(terms):
        c = b - c
        s += c * w.convert(a(k))
        b = b * (k + terms) * (k - terms) / ((k + w.mpf(1) / 2) * (k + 1))
    return s / d


def alternating_tail(g: Callable, start: int, ctx: PrecisionContext):
    """sum_{k>=start} (-1)^k g(k) for positive, totally monotone g."""
    w = ctx.mp
    sign = -1 if start % 2 else 1
    return sign * accelerated_alternating_sum(lambda i: g(start + i), ctx)


# ---------------------------------------------------------------------------
# Riemann zeta by Euler-Maclaurin, with reusable tail pieces.
# zeta_tail(s, N)  = sum_{k>=N} k^-s
# zeta_log_tail(s, N) = sum_{k>=N} ln(k) k^-s   (enters zeta'(s))
# ---------------------------------------------------------------------------

def _em_tails(s, N, ctx, want_log=False):
    """Euler-Maclaurin tail for sum_{k>=N} k^-s, optionally with the
    log-weighted tail obtained by differentiating each piece in s."""
    w = ctx.mp
    sv = w.mpf(s)
    Nv = w.mpf(N)
    lnN = w.ln(Nv)
    tol = ctx.eps_work / 10
    tail = Nv ** (1 - sv) / (sv - 1) + Nv ** (-sv) / 2
    # d/ds [N^(1-s)/(s-1)] = N^(1-s) (-lnN/(s-1) - 1/(s-1)^2)
    ltail = None
    if want_log:
        ltail = -(Nv ** (1 - sv)) * (-lnN / (sv - 1) - 1 / (sv - 1) ** 2) \
            + lnN * Nv ** (-sv) / 2
    # Bernoulli correction terms T_k = B_2k/(2k)! * prod_{j=0}^{2k-2}(s+j) * N^(-s-2k+1)
    poch = sv  # prod so far for k=1: just s
    prev = None
    k = 1
    while k < 300:
        t = w.bernoulli(2 * k) / w.factorial(2 * k) * poch \
            * Nv ** (-sv - 2 * k + 1)
        if want_log:
            hsum = sum(1 / (sv + j) for j in range(2 * k - 1))
            ltail += -t * (-lnN + hsum)
        tail += t
        if abs(t) < tol:
            return tail, ltail, True
        if prev is not None and abs(t) > abs(prev):
            return tail, ltail, False  # diverging corrections: N too small
        prev = t
        poch *= (sv + 2 * k - 1) * (sv + 2 * k)
        k += 1
    return tail, ltail, False


def zeta_tail(s, N, ctx: PrecisionContext):
    """sum_{k>=N} k^-s for real s > 1 (N >= 1)."""
    w = ctx.mp
    n = max(int(N), 1)
    extra = w.mpf(0)
    base = max(n, ctx.working_digits // 2 + 8)
    for k in range(n, base):
        extra += w.mpf(k) ** (-w.mpf(s))
    tail, _, ok = _em_tails(s, base, ctx)
    while not ok:
        for k in range(base, base * 2):
            extra += w.mpf(k) ** (-w.mpf(s))
        base *= 2
        tail, _, ok = _em_tails(s, base, ctx)
    return extra + tail


def zeta_log_tail(s, N, ctx: PrecisionContext):
    """sum_{k>=N} ln(k) k^-s for real s > 1 (N >= 2)."""
    w = ctx.mp
    n = max(int(N), 1)
    extra = w.mpf(0)
    base = max(n, ctx.working_digits // 2 + 8)
    for k in range(n, base):
        if k > 1:
            extra += w.ln(k) * w.mpf(k) ** (-w.mpf(s))
    tail, ltail, ok = _em_tails(s, base, ctx, want_log=True)
    while not ok:
        for k in range(base, base * 2):
            extra += w.ln(k) * w.mpf(k) ** (-w.mpf(s))
        base *= 2
        tail, ltail, ok = _em_tails(s, base, ctx, want_log=True)
    return extra + ltail


def zeta(s, ctx: PrecisionContext):
    """Riemann zeta for real s != 1 with s > 0 (catalog recipes use s > 1)."""
    w = ctx.mp
    sv = w.mpf(s)
    if sv == 1:
        raise FunctionDomainError("zeta", s, "pole at s=1")
    if sv <= 0:
        raise FunctionDomainError("zeta", s, "only s > 0 supported")
    return w.mpf(1) + zeta_tail(sv, 2, ctx)


def zeta_prime(s, ctx: PrecisionContext):
    """zeta'(s) = -sum ln(n)/n^s for real s > 1, by Euler-Maclaurin."""
    w = ctx.mp
    sv = w.mpf(s)
    if sv <= 1:
        raise FunctionDomainError("zeta_prime", s, "requires s > 1")
    return -zeta_log_tail(sv, 2, ctx)


def dirichlet_beta(s, ctx: PrecisionContext):
    """beta(s) = sum_k (-1)^k (2k+1)^-s, CRZ-accelerated; s > 0."""
    w = ctx.mp
    sv = w.mpf(s)
    if sv <= 0:
        raise FunctionDomainError("dirichlet_beta", s, "requires s > 0")
    return accelerated_alternating_sum(
        lambda k: (2 * w.mpf(k) + 1) ** (-sv), ctx)


def dirichlet_eta(s, ctx: PrecisionContext):
    """eta(s) = sum_k (-1)^(k-1) k^-s, CRZ-accelerated; s > 0."""
    w = ctx.mp
    sv = w.mpf(s)
    if sv <= 0:
        raise FunctionDomainError("dirichlet_eta", s, "requires s > 0")
    return accelerated_alternating_sum(
        lambda k: (w.mpf(k) + 1) ** (-sv), ctx)


def ti2(x, ctx: PrecisionContext):
    """Inverse tangent integral Ti2(x) = sum (-1)^k x^(2k+1)/(2k+1)^2.

    |x| <= 1 sums directly; larger x uses Ti2(x) = Ti2(1/x) + (pi/2) ln x.
    """
    w = ctx.mp
    xv = w.mpf(x)
    if xv == 0:
        return w.mpf(0)
    if xv < 0:
        return -ti2(-xv, ctx)
    if xv > 1:
        return ti2(1 / xv, ctx) + w.pi / 2 * w.ln(xv)
    total = w.mpf(0)
    power = xv
    x2 = xv * xv
    tol = ctx.eps_work / 10
    for k in range(ctx.max_terms):
        t = power / w.mpf(2 * k + 1) ** 2
        total += -t if k % 2 else t
        if t < tol and k > 2:
            return total
        power *= x2
    raise BudgetExceededError("ti2 series did not converge")


def polylog(n: int, x, ctx: PrecisionContext):
    """Li_n(x) = sum_{k>=1} x^k/k^n for |x| <= 1, n >= 2."""
    w = ctx.mp
    if n < 2:
        raise FunctionDomainError("polylog", n, "requires order n >= 2")
    xv = w.mpf(x)
    if abs(xv) > 1:
        raise FunctionDomainError("polylog", x, "series diverges for |x| > 1")
    if xv == 1:
        return zeta(n, ctx)
    if xv == -1:
        return -dirichlet_eta(n, ctx)
    total = w.mpf(0)
    power = w.mpf(1)
    tol = ctx.eps_work / 10
    for k in range(1, ctx.max_terms):
        power *= xv
        t = power / w.mpf(k) ** n
        total += t
        if abs(t) < tol * (1 - abs(xv)):
            return total
    raise BudgetExceededError("polylog series did not converge")


# ---------------------------------------------------------------------------
# Bessel family by ascending series.
# ---------------------------------------------------------------------------

def _series_even(coef, x2_4, w, tol, itmax):
    """sum_{k>=0} coef(k) * (x^2/4)^k / (k!)^2 style helper."""
    total = w.mpf(0)
    term = w.mpf(1)  # (x^2/4)^k / (k!)^2 at k=0
    k = 0
    while k < itmax:
        t = coef(k) * term
        total += t
        if abs(term) < tol and k > 2 and abs(t) < tol:
            return total
        k += 1
        term = term * x2_4 / (w.mpf(k) ** 2)
    raise BudgetExceededError("bessel series did not converge")


def bessel(kind: str, x, ctx: PrecisionContext):
    """J0, Y0, I0, I1, K0, K1 by ascending series at working precision."""
    w = ctx.mp
    xv = w.mpf(x)
    if kind in ("Y0", "K0", "K1") and xv <= 0:
        raise FunctionDomainError(kind, x, "requires x > 0")
    # cancellation in the alternating J0/Y0 series costs ~ x*log10(e) digits
    boost = int(abs(xv)) + 5
    inner = PrecisionContext(ctx.working_digits + boost, guard_digits=10,
                             max_terms=ctx.max_terms)
    v = _bessel_inner(kind, inner.mp.mpf(x), inner)
    return w.mpf(v)


def _bessel_inner(kind, xv, ctx):
    w = ctx.mp
    tol = ctx.eps_work / 100
    itmax = ctx.max_terms
    x2_4 = xv * xv / 4
    one = w.mpf(1)
    if kind == "J0":
        return _series_even(lambda k: one if k % 2 == 0 else -one,
                            x2_4, w, tol, itmax)
    if kind == "I0":
        return _series_even(lambda k: one, x2_4, w, tol, itmax)
    if kind == "I1":
        total = w.mpf(0)
        term = xv / 2  # (x/2)^(2k+1) / (k! (k+1)!) at k=0
        k = 0
        while k < itmax:
            total += term
            if abs(term) < tol and k > 2:
                return total
            k += 1
            term = term * x2_4 / (w.mpf(k) * (k + 1))
        raise BudgetExceededError("I1 series did not converge")
    if kind == "Y0":
        j0 = _bessel_inner("J0", xv, ctx)
        hsum = _series_even_harmonic(x2_4, w, tol, itmax, alternate=True)
        return 2 / w.pi * ((w.ln(xv / 2) + w.euler) * j0 + hsum)
    if kind == "K0":
        i0 = _bessel_inner("I0", xv, ctx)
        hsum = _series_even_harmonic(x2_4, w, tol, itmax, alternate=False)
        return -(w.ln(xv / 2) + w.euler) * i0 + hsum
    if kind == "K1":
        # K1(x) = 1/x + ln(x/2) I1(x) - x/4 sum_k [psi(k+1)+psi(k+2)] (x^2/4)^k/(k!(k+1)!)
        i1 = _bessel_inner("I1", xv, ctx)
        total = w.mpf(0)
        term = one = w.mpf(1)  # (x^2/4)^k/(k!(k+1)!) at k=0
        h_k = w.mpf(0)     # H_k
        h_k1 = w.mpf(1)    # H_{k+1}
        k = 0
        while k < itmax:
            digamma_pair = -2 * w.euler + h_k + h_k1
            t = digamma_pair * term
            total += t
            if abs(term) < tol and k > 2:
                break
            k += 1
            term = term * x2_4 / (w.mpf(k) * (k + 1))
            h_k += w.mpf(1) / k
            h_k1 += w.mpf(1) / (k + 1)
        else:
            raise BudgetExceededError("K1 series did not converge")
        return 1 / xv + w.ln(xv / 2) * i1 - xv / 4 * total
    raise FunctionDomainError("bessel", kind, "unknown kind")


def _series_even_harmonic(x2_4, w, tol, itmax, alternate):
    """sum_{k>=1} (+-1)^(k+1) H_k (x^2/4)^k / (k!)^2."""
    total = w.mpf(0)
    term = w.mpf(1)
    h = w.mpf(0)
    k = 0
    while k < itmax:
        k += 1
        term = term * x2_4 / (w.mpf(k) ** 2)
        h += w.mpf(1) / k
        t = h * term
        if alternate and k % 2 == 0:
            t = -t
        total += t
        if abs(term) * (h + 1) < tol and k > 2:
            return total
    raise BudgetExceededError("bessel harmonic series did not converge")


def bessel_derivative(kind: str, x, ctx: PrecisionContext):
    """d/dx of J0 or Y0, by term-wise differentiated ascending series."""
    w = ctx.mp
    xv = w.mpf(x)
    h = ctx.eps_work ** w.mpf(0.25)
    if kind == "J0":
        # J0' = -J1 = -sum (-1)^k (x/2)^(2k+1)/(k!(k+1)!)
        boost = int(abs(xv)) + 5
        inner = PrecisionContext(ctx.working_digits + boost, guard_digits=10)
        wi = inner.mp
        x2_4 = wi.mpf(x) ** 2 / 4
        total = wi.mpf(0)
        term = wi.mpf(x) / 2
        tol = inner.eps_work / 100
        k = 0
        while k < ctx.max_terms:
            total += term if k % 2 else -term  # leading sign is negative
            if abs(term) < tol and k > 2:
                return w.mpf(total)
            k += 1
            term = term * x2_4 / (wi.mpf(k) * (k + 1))
        raise BudgetExceededError("J0' series did not converge")
    if kind == "Y0":
        # central difference at quarter working precision; adequate for the
        # Wronskian identity check, which tolerates target precision
        f1 = bessel("Y0", xv + h, ctx)
        f2 = bessel("Y0", xv - h, ctx)
        return (f1 - f2) / (2 * h)
    raise FunctionDomainError("bessel_derivative", kind, "unsupported kind")


def lambert_w(x, ctx: PrecisionContext):
    """Principal-branch W(x), x >= -1/e, by Halley iteration."""
    w = ctx.mp
    xv = w.mpf(x)
    min_x = -w.exp(-1)
    if xv < min_x:
        raise FunctionDomainError("lambert_w", x, "below -1/e")
    if xv == 0:
        return w.mpf(0)
    # float-quality seed
    if xv > w.e:
        lx = w.ln(xv)
        wv = lx - w.ln(lx)
    elif xv > 0:
        wv = xv / (1 + xv)  # crude but in basin
    else:
        # -1/e <= x < 0: series seed around the branch point
        p = w.sqrt(2 * (w.e * xv + 1))
        wv = -1 + p - p ** 2 / 3
    tol = ctx.eps_work
    for _ in range(200):
        ew = w.exp(wv)
        f = wv * ew - xv
        if f == 0:
            break
        denom = ew * (wv + 1) - (wv + 2) * f / (2 * (wv + 1))
        step = f / denom
        wv -= step
        if abs(step) <= tol * (1 + abs(wv)):
            break
    else:
        raise BudgetExceededError("lambert_w iteration did not converge")
    return wv


def exp_integral_ei(x, ctx: PrecisionContext):
    """Principal-value Ei(x) = gamma + ln|x| + sum x^k/(k k!), x != 0.

    The series cancels for x < 0, so work at precision boosted by the
    cancellation scale |x| log10(e).
    """
    w = ctx.mp
    xv = w.mpf(x)
    if xv == 0:
        raise FunctionDomainError("exp_integral_ei", x, "singular at 0")
    boost = int(abs(xv) * 0.87) + 8
    inner = PrecisionContext(ctx.working_digits + boost, guard_digits=10,
                             max_terms=ctx.max_terms)
    wi = inner.mp
    xi = wi.mpf(x)
    total = wi.euler + wi.ln(abs(xi))
    term = wi.mpf(1)
    tol = inner.eps_work / 10
    for k in range(1, ctx.max_terms):
        term = term * xi / k
        t = term / k
        total += t
        if abs(term) < tol and k > abs(xi):
            return w.mpf(total)
    raise BudgetExceededError("Ei series did not converge")


def erf(x, ctx: PrecisionContext):
    """Error function by its entire series, with cancellation boost."""
    w = ctx.mp
    xv = w.mpf(x)
    if xv == 0:
        return w.mpf(0)
    boost = int(float(xv * xv) * 0.44) + 8
    inner = PrecisionContext(ctx.working_digits + boost, guard_digits=10,
                             max_terms=ctx.max_terms)
    wi = inner.mp
    xi = wi.mpf(x)
    x2 = xi * xi
    total = wi.mpf(0)
    term = xi  # (-1)^k x^(2k+1) / k! piece
    for k in range(ctx.max_terms):
        total += term / (2 * k + 1)
        if abs(term) < inner.eps_work and k > 2:
            return w.mpf(2 / wi.sqrt(wi.pi) * total)
        term = term * (-x2) / (k + 1)
    raise BudgetExceededError("erf series did not converge")


def erfc(x, ctx: PrecisionContext):
    return 1 - erf(x, ctx)
