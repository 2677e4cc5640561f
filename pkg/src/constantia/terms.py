"""Named term functions and special evaluators backing catalog recipes.

Recipes stay declarative: their parameters name entries in the registries
below, so a catalog can round-trip through JSON without any expression
parsing. Functions that need more machinery than a plain term (block
resummation, zeta-tail acceleration, basis extrapolation) live here as
"special" evaluators returning Approximation directly.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import kernel, oracles, primes, quadrature, solvers, special
from .errors import UnresolvedPredicateError
from .precision import Approximation, PrecisionContext

# ---------------------------------------------------------------------------
# registries; populated by the decorators below
# ---------------------------------------------------------------------------

SERIES_TERMS = {}      # name -> (term_factory(ctx) -> term(n), start, tail spec)
PRODUCT_FACTORS = {}   # name -> (factor_factory(ctx) -> factor(n), start, tail)
CLOSED_FORMS = {}      # name -> fn(ctx) -> mpf
ROOT_FUNCTIONS = {}    # name -> fn_factory(ctx) -> f(x)
POST_TRANSFORMS = {}   # name -> fn(x, ctx) -> mpf
OBJECTIVES = {}        # name -> fn_factory(ctx) -> f(x)
INTEGRANDS = {}        # name -> builder(ctx) -> IntegrandSpec or Approximation
EXPANSIONS = {}        # name -> builder() -> DirichletExpansion
FOLD_FUNCTIONS = {}    # name -> fn_factory(ctx) -> f(p[, q])
TAIL_ESTIMATES = {}    # name -> fn_factory(ctx) -> tail(limit)
CF_SYSTEMS = {}        # name -> (a(n), b(n), b0)
SEQUENCES = {}         # name -> seq_factory(ctx) -> seq(n)
SPECIALS = {}          # name -> fn(ctx) -> Approximation
COMBINERS = {}         # name -> fn(parts: list[mpf], ctx) -> mpf
PREDICATES = {}        # name -> predicate_factory(ctx) -> predicate(x)


def _register(registry, name):
    def deco(fn):
        registry[name] = fn
        return fn
    return deco


# ---------------------------------------------------------------------------
# series terms
# ---------------------------------------------------------------------------

@_register(SERIES_TERMS, "dst-alpha")
def _t_dst_alpha(ctx):
    w = ctx.mp
    return lambda n: 1 / (w.mpf(2) ** n - 1)


@_register(SERIES_TERMS, "i0-at-2")
def _t_i0_two(ctx):
    w = ctx.mp
    state = {"k": 0, "val": w.mpf(1)}  # 1/(k!)^2, advanced incrementally

    def term(k):
        while state["k"] < k:
            state["k"] += 1
            state["val"] /= w.mpf(state["k"]) ** 2
        return state["val"]

    return term


@_register(SERIES_TERMS, "fibonacci-odd-reciprocal")
def _t_fib_odd(ctx):
    w = ctx.mp
    fibs = [1, 1]  # f_1, f_2

    def term(k):
        idx = 2 * k + 1
        while len(fibs) < idx:
            fibs.append(fibs[-1] + fibs[-2])
        return 1 / w.mpf(fibs[idx - 1])

    return term


@_register(SERIES_TERMS, "dst-theta")
def _t_dst_theta(ctx):
    w = ctx.mp
    # k * 2^(k(k-1)/2) / prod_{j<=k}(2^j - 1) * sum_{j<=k} 1/(2^j - 1)
    cache = {"k": 0, "prod": w.mpf(1), "hsum": w.mpf(0)}

    def term(k):
        while cache["k"] < k:
            j = cache["k"] + 1
            cache["prod"] *= w.mpf(2) ** j - 1
            cache["hsum"] += 1 / (w.mpf(2) ** j - 1)
            cache["k"] = j
        num = w.mpf(k) * w.mpf(2) ** (k * (k - 1) // 2)
        return num / cache["prod"] * cache["hsum"]

    return term


@_register(SERIES_TERMS, "third-power-log")
def _t_third_log(ctx):
    w = ctx.mp
    return lambda j: w.ln(j) / w.mpf(3) ** j


@_register(SERIES_TERMS, "li4-double-sum-row")
def _t_li4_row(ctx):
    # row sums of the alternating double sum: sum_{j<i} (-1)^(i+j)/(i^3 j)
    w = ctx.mp

    def term(i):
        inner = w.mpf(0)
        for j in range(1, i):
            v = 1 / w.mpf(j)
            inner += -v if (i + j) % 2 else v
        return inner / w.mpf(i) ** 3

    return term


def _plouffe_sum(power: int, multiple: int, ctx) -> Approximation:
    """sum_{n>=1} 1/(n^power (e^(multiple*pi*n) - 1))."""
    w = ctx.mp
    pim = multiple * w.pi

    def term(n):
        return 1 / (w.mpf(n) ** power * (w.exp(pim * n) - 1))

    return kernel.sum_series(term, kernel.geometric("0.05"), ctx, start=1)


# ---------------------------------------------------------------------------
# product factors
# ---------------------------------------------------------------------------

@_register(PRODUCT_FACTORS, "dst-half-power")
def _f_dst_half(ctx):
    w = ctx.mp
    return lambda n: 1 - w.mpf(2) ** (-w.mpf(n) / 2)


@_register(PRODUCT_FACTORS, "quadratic-threshold")
def _f_quadratic_threshold(ctx):
    w = ctx.mp
    return lambda j: (1 + 1 / w.mpf(j)) ** (w.mpf(2) ** -j)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

@_register(CLOSED_FORMS, "gauss-kuzmin-mean")
def _c_gk_mean(ctx):
    w = ctx.mp
    return 1 / w.ln(2) - 1


@_register(CLOSED_FORMS, "kuzmin-log10")
def _c_gk_log10(ctx):
    w = ctx.mp
    return w.pi ** 2 / (12 * w.ln(2) * w.ln(10))


@_register(CLOSED_FORMS, "collatz-total-coeff")
def _c_collatz_total(ctx):
    w = ctx.mp
    return 2 / (2 * w.ln(2) - w.ln(3))


@_register(CLOSED_FORMS, "tidblom-angle")
def _c_tidblom(ctx):
    w = ctx.mp
    g34 = special.gamma(w.mpf(3) / 4, ctx)
    g14 = special.gamma(w.mpf(1) / 4, ctx)
    return w.pi + 4 * w.atan(4 * g34 ** 2 / g14 ** 2)


@_register(CLOSED_FORMS, "walk-b")
def _c_walk_b(ctx):
    w = ctx.mp
    return 4 * w.ln(2) / w.pi


@_register(CLOSED_FORMS, "walk-c")
def _c_walk_c(ctx):
    w = ctx.mp
    return special.gamma(w.mpf(1) / 4, ctx) ** 4 / (4 * w.pi ** 3)


@_register(CLOSED_FORMS, "go-strip-growth")
def _c_go_growth(ctx):
    w = ctx.mp
    r = 3 * w.sqrt(57)
    return 1 + (w.cbrt(27 + r) + w.cbrt(27 - r)) / 3


@_register(CLOSED_FORMS, "lattice-h2")
def _c_h2(ctx):
    w = ctx.mp
    return 4 * special.dirichlet_beta(2, ctx) / w.pi


@_register(CLOSED_FORMS, "lattice-h-tri")
def _c_h_tri(ctx):
    w = ctx.mp
    return w.ln(3) / 2 + 6 / w.pi * special.ti2(1 / w.sqrt(3), ctx)


@_register(CLOSED_FORMS, "normal-tail-inverse")
def _c_normal_tail(ctx):
    w = ctx.mp
    density = w.exp(-w.mpf(1) / 2) / w.sqrt(2 * w.pi)
    upper = special.erfc(1 / w.sqrt(2), ctx) / 2
    return density / upper


@_register(CLOSED_FORMS, "w-identity")
def _c_w_identity(ctx):
    wv = special.lambert_w(1, ctx)
    return wv ** 2 + 2 * wv


@_register(CLOSED_FORMS, "w-at-inverse-e")
def _c_w_einv(ctx):
    w = ctx.mp
    return special.lambert_w(w.exp(-1), ctx)


@_register(CLOSED_FORMS, "napkin-mean")
def _c_napkin_mean(ctx):
    w = ctx.mp
    return (2 - w.sqrt(w.e)) ** 2


@_register(CLOSED_FORMS, "napkin-var")
def _c_napkin_var(ctx):
    w = ctx.mp
    return (3 - w.e) * (2 - w.sqrt(w.e)) ** 2


@_register(CLOSED_FORMS, "universal-parabolic")
def _c_parabolic(ctx):
    w = ctx.mp
    return w.sqrt(2) + w.ln(1 + w.sqrt(2))


@_register(CLOSED_FORMS, "equilateral-hyperbolic")
def _c_hyperbolic(ctx):
    w = ctx.mp
    return w.sqrt(2) - w.ln(1 + w.sqrt(2))


@_register(CLOSED_FORMS, "square-side-mean")
def _c_square_side(ctx):
    w = ctx.mp
    return (2 + w.sqrt(2) + 5 * w.ln(1 + w.sqrt(2))) / 9


@_register(CLOSED_FORMS, "cube-face-mean")
def _c_cube_face(ctx):
    w = ctx.mp
    return (4 + 17 * w.sqrt(2) - 6 * w.sqrt(3) - 7 * w.pi
            + 21 * w.ln(1 + w.sqrt(2)) + 21 * w.ln(7 + 4 * w.sqrt(3))) / 75


@_register(CLOSED_FORMS, "cycle-maximizer-xi")
def _c_perm_xi(ctx):
    w = ctx.mp
    return 1 / (1 + w.sqrt(w.e))


# ---------------------------------------------------------------------------
# root functions (and post-transforms)
# ---------------------------------------------------------------------------

@_register(ROOT_FUNCTIONS, "van-de-lune")
def _r_van_de_lune(ctx):
    w = ctx.mp
    tol = ctx.eps_work / 10

    def f(sigma):
        # sum_p arcsin(p^-sigma) = sum_k C(2k,k)/(4^k(2k+1)) P((2k+1) sigma)
        total = w.mpf(0)
        coef = w.mpf(1)  # C(2k,k)/4^k
        k = 0
        while True:
            t = coef / (2 * k + 1) * primes.prime_zeta((2 * k + 1) * sigma, ctx)
            total += t
            if t < tol:
                break
            k += 1
            coef *= w.mpf(2 * (2 * k - 1)) / (2 * k)
        return total - w.pi / 2

    return f


@_register(ROOT_FUNCTIONS, "zeta-fixed-point")
def _r_zeta_one(ctx):
    w = ctx.mp

    def f(x):
        p = w.mpf(2) ** x
        return special.zeta(x, ctx) - (p + 1) / (p - 1)

    return f


@_register(ROOT_FUNCTIONS, "zeta-deriv-zero")
def _r_zeta_deriv(ctx):
    w = ctx.mp

    def f(y):
        rhs = -w.mpf(2) ** (y + 1) * w.ln(2) / (w.mpf(4) ** y - 1)
        return special.zeta_prime(y, ctx) / special.zeta(y, ctx) - rhs

    return f


@_register(ROOT_FUNCTIONS, "laplace-limit-eq")
def _r_laplace(ctx):
    w = ctx.mp

    def f(x):
        s = w.sqrt(1 + x * x)
        return x * w.exp(s) / (1 + s) - 1

    return f


@_register(ROOT_FUNCTIONS, "carlitz-sum")
def _r_carlitz(ctx):
    w = ctx.mp
    tol = ctx.eps_work / 10

    def f(x):
        total = w.mpf(0)
        j = 1
        power = x
        while True:
            t = power / (1 - power)
            total += t if j % 2 else -t
            if abs(t) < tol:
                break
            j += 1
            power *= x
        return total - 1

    return f


@_register(ROOT_FUNCTIONS, "shepp-eq")
def _r_shepp(ctx):
    w = ctx.mp

    def f(x):
        e = special.erf(x / w.sqrt(2), ctx)
        return 2 * x - w.sqrt(2 * w.pi) * (1 - x * x) * w.exp(x * x / 2) * (1 + e)

    return f


@_register(ROOT_FUNCTIONS, "dottie-eq")
def _r_dottie(ctx):
    w = ctx.mp
    return lambda x: w.cos(x) - x


@_register(ROOT_FUNCTIONS, "secretary-a-eq")
def _r_secretary_a(ctx):
    w = ctx.mp

    def f(a):
        em = special.exp_integral_ei(-a, ctx)
        ep = special.exp_integral_ei(a, ctx)
        return w.exp(a) * (1 - w.euler - w.ln(a) + em) - (w.euler + w.ln(a) - ep) - 1

    return f


@_register(ROOT_FUNCTIONS, "secretary-b-eq")
def _r_secretary_b(ctx):
    w = ctx.mp

    def f(b):
        return special.exp_integral_ei(-b, ctx) - w.euler - w.ln(b) + 1

    return f


@_register(ROOT_FUNCTIONS, "rowconvex-cubic")
def _r_rowconvex(ctx):
    w = ctx.mp
    return lambda x: x ** 3 - 5 * x * x + 7 * x - 4


@_register(ROOT_FUNCTIONS, "rittaud-cubic")
def _r_rittaud(ctx):
    w = ctx.mp
    return lambda x: x ** 3 + x * x - x - 2


@_register(ROOT_FUNCTIONS, "plastic-square-cubic")
def _r_plastic2(ctx):
    w = ctx.mp
    return lambda x: x ** 3 - 2 * x * x + x - 1


@_register(ROOT_FUNCTIONS, "hall-montgomery-angle")
def _r_hall_montgomery(ctx):
    w = ctx.mp
    return lambda x: w.sin(x) - x * w.cos(x) - w.pi / 2


@_register(POST_TRANSFORMS, "negative-cosine")
def _p_neg_cos(x, ctx):
    return -ctx.mp.cos(x)


@_register(POST_TRANSFORMS, "identity")
def _p_identity(x, ctx):
    return x


# ---------------------------------------------------------------------------
# maximization objectives
# ---------------------------------------------------------------------------

@_register(OBJECTIVES, "coin-tossing-bound")
def _o_coin(ctx):
    w = ctx.mp

    def f(u):
        return w.sqrt(2 * u) * w.exp(-2 * u) * special.bessel("I0", 2 * u, ctx)

    return f


@_register(OBJECTIVES, "long-cycle-p1")
def _o_p1(ctx):
    w = ctx.mp

    def f(x):
        return (w.pi ** 2 / 6 - w.ln(x) - w.ln(x) ** 2
                - 2 * special.polylog(2, x, ctx))

    return f


# ---------------------------------------------------------------------------
# integrands
# ---------------------------------------------------------------------------

@_register(INTEGRANDS, "euler-gompertz")
def _i_gompertz(ctx):
    w = ctx.mp
    return quadrature.semi_infinite(lambda x: w.exp(-x) / (1 + x))


@_register(INTEGRANDS, "alternating-even-factorial")
def _i_alt_even(ctx):
    w = ctx.mp
    return quadrature.semi_infinite(lambda x: w.exp(-x) / (1 + x * x))


@_register(INTEGRANDS, "alternating-odd-factorial")
def _i_alt_odd(ctx):
    w = ctx.mp
    return quadrature.semi_infinite(lambda x: x * w.exp(-x) / (1 + x * x))


@_register(INTEGRANDS, "alternating-power-tower")
def _i_watson(ctx):
    w = ctx.mp
    return quadrature.semi_infinite(
        lambda x: w.exp(-x) / (1 + special.lambert_w(x, ctx)))


# ---------------------------------------------------------------------------
# Dirichlet expansions for accelerated prime work
# ---------------------------------------------------------------------------

@_register(EXPANSIONS, "inverse-p-p-minus-1")
def _e_meissel():
    # 1/(p(p-1)) = sum_{m>=2} p^-m
    return primes.DirichletExpansion(lambda m: Fraction(1))


@_register(EXPANSIONS, "log-zeta-second-moment")
def _e_second_moment():
    # sum_m (1/m - 1/m^2) p^-m
    return primes.DirichletExpansion(lambda m: Fraction(1, m) - Fraction(1, m * m))


@_register(EXPANSIONS, "totient-q-log-weighted")
def _e_totient_q():
    # sum_p ln(p)/(p-1)^2 = sum_{m>=2} (m-1) ln-weighted terms
    return primes.DirichletExpansion(
        lambda m: None, deriv_coefficient=lambda m: Fraction(m - 1),
        majorant_scale=2.0)


@_register(EXPANSIONS, "feller-tornier-log")
def _e_feller_tornier():
    # ln(1 - 2/p^2) = -sum_j (2^j/j) p^-2j
    def coef(m):
        if m % 2:
            return None
        j = m // 2
        return Fraction(-(2 ** j), j)

    return primes.DirichletExpansion(coef, majorant_ratio=1.5,
                                     majorant_scale=1.0)


@_register(EXPANSIONS, "carmichael-p-log")
def _e_carmichael():
    # ln(1 - 1/((p-1)^2 (p+1))) = ln(1-x-x^2) - 2 ln(1-x) - ln(1+x), x = 1/p
    def coef(m):
        total = Fraction(2, m) - Fraction((-1) ** (m - 1), m)
        for j in range((m + 1) // 2, m + 1):
            total -= Fraction(math.comb(j, m - j), j)
        return total

    return primes.DirichletExpansion(coef, min_power=3,
                                     majorant_ratio=1.7, majorant_scale=4.0)


@_register(EXPANSIONS, "semiprime-reciprocal")
def _e_semi_recip():
    return primes.DirichletExpansion(lambda m: Fraction(1))


@_register(EXPANSIONS, "semiprime-lambda")
def _e_semi_lambda():
    return primes.DirichletExpansion(lambda m: Fraction(1, m))


@_register(EXPANSIONS, "log-cos-pi-over-p")
def _e_log_cos():
    # ln cos(pi x): coefficient of x^(2k) is -2^(2k-1)(2^(2k)-1)|B_2k| pi^(2k)/(k (2k)!)
    def coef(m):
        if m % 2:
            return None
        k = m // 2

        def value(ctx):
            w = ctx.mp
            b = abs(w.bernoulli(2 * k))
            return (-(w.mpf(2) ** (2 * k - 1)) * (w.mpf(2) ** (2 * k) - 1)
                    * b * w.pi ** (2 * k) / (k * w.factorial(2 * k)))

        return value

    # coefficients grow like 2^m (singularity of ln cos(pi x) at x = 1/2);
    # admissible because the product starts at p = 3
    return primes.DirichletExpansion(coef, majorant_ratio=1.99,
                                     majorant_scale=2.0, first_prime=3)


# ---------------------------------------------------------------------------
# direct fold functions and their tail estimates
# ---------------------------------------------------------------------------

@_register(FOLD_FUNCTIONS, "totient-mod3-xi")
def _ff_xi(ctx):
    w = ctx.mp
    return lambda p: 1 + 1 / (w.mpf(p) ** 2 - 1)


@_register(FOLD_FUNCTIONS, "totient-mod3-eta")
def _ff_eta(ctx):
    w = ctx.mp
    return lambda p: 1 - 1 / (w.mpf(p) + 1) ** 2


@_register(FOLD_FUNCTIONS, "mersenne-factor")
def _ff_mersenne(ctx):
    w = ctx.mp
    return lambda p: 1 - 1 / (w.mpf(2) ** p - 1)


@_register(FOLD_FUNCTIONS, "prime-gap-log-defect")
def _ff_gap(ctx):
    w = ctx.mp

    def f(p, q):
        return w.ln(w.mpf(q) / p) - (1 - w.mpf(p) / q)

    return f


@_register(TAIL_ESTIMATES, "residue-quadratic")
def _te_residue_quadratic(ctx):
    w = ctx.mp
    # sum over half the primes > X of ~1/p^2, with safety factor
    return lambda limit: 3 / (w.mpf(limit) * w.ln(limit))


@_register(TAIL_ESTIMATES, "mersenne")
def _te_mersenne(ctx):
    w = ctx.mp
    return lambda limit: w.mpf(2) ** (-limit + 1)


@_register(TAIL_ESTIMATES, "prime-gap-square")
def _te_gap(ctx):
    w = ctx.mp
    return lambda limit: 2 * (w.ln(limit) + 1) / w.mpf(limit)


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------

def _zudilin_a(n):
    return ((2 * n - 1) ** 4 * (2 * n) ** 4
            * (20 * n * n - 48 * n + 29) * (20 * n * n + 32 * n + 13))


def _zudilin_b(n):
    return (3520 * n ** 6 + 5632 * n ** 5 + 2064 * n ** 4
            - 384 * n ** 3 - 156 * n * n + 16 * n + 7)


CF_SYSTEMS["zudilin-catalan"] = (_zudilin_a, _zudilin_b, 7)


# ---------------------------------------------------------------------------
# sequences for recursion-limit recipes
# ---------------------------------------------------------------------------

@_register(SEQUENCES, "j0-recursion-ratio")
def _s_j0(ctx):
    w = ctx.mp
    cache = [w.mpf(1), w.mpf(1)]  # c_0, c_1 with c_n = a_n/n!

    def seq(n):
        while len(cache) <= n:
            k = len(cache)
            cache.append(cache[-1] - cache[-2] / (w.mpf(k) * (k - 1)))
        return cache[n]

    return seq


@_register(SEQUENCES, "leftist-coefficient-ratio")
def _s_leftist(ctx):
    w = ctx.mp
    store = {}

    def seq(n):
        top = n + 1
        if not store or store["N"] < top:
            data = oracles.leftist_series(max(top, 64))
            store["N"] = max(top, 64)
            store["seq"] = data
        L = store["seq"]
        return w.mpf(L[n + 1]) / w.mpf(L[n])

    return seq


# ---------------------------------------------------------------------------
# special evaluators (return Approximation directly)
# ---------------------------------------------------------------------------

@_register(SPECIALS, "koecher-gamma")
def _sp_koecher(ctx):
    """gamma = delta - (1/2) sum_{j>=1} T(2^j), T(N) = sum_{k>=N}(-1)^k g(k),
    g(k) = 1/((k-1)k(k+1)); the floor(log2 k) weight is unrolled into
    alternating tails, each CRZ-accelerated."""
    w = ctx.mp
    alpha = kernel.sum_series(SERIES_TERMS["dst-alpha"](ctx),
                              kernel.geometric("0.5"), ctx, start=1)
    delta = (1 + alpha.value) / 4

    def g(k):
        return 1 / (w.mpf(k - 1) * k * (k + 1))

    total = w.mpf(0)
    j = 1
    floor_cut = ctx.eps_work / 10
    used = alpha.terms_used
    while True:
        N = 2 ** j
        if g(N) < floor_cut or j > 4 * ctx.working_digits:
            break
        total += special.alternating_tail(g, N, ctx)
        used += 1
        j += 1
    value = delta - total / 2
    err = alpha.error_bound / 4 + w.mpf(2) * floor_cut * j
    return Approximation(value, err, used)


@_register(SPECIALS, "glaisher-gamma")
def _sp_glaisher(ctx):
    """gamma = sum 1/(3^n - 1) - 2 sum_{j>=0} H(3^j) with
    H(N) = sum_{k>=N} 1/((3k-1)3k(3k+1)) = (1/27) sum_m 9^-m ztail(3+2m, N)."""
    w = ctx.mp
    s1 = kernel.sum_series(lambda n: 1 / (w.mpf(3) ** n - 1),
                           kernel.geometric("0.34"), ctx, start=1)
    cut = ctx.eps_work / 10

    def H(N):
        total = w.mpf(0)
        m = 0
        while True:
            t = w.mpf(9) ** -m / 27 * special.zeta_tail(3 + 2 * m, N, ctx)
            total += t
            if t < cut:
                return total
            m += 1

    total = H(1)
    j = 1
    used = s1.terms_used + 1
    while True:
        h = H(3 ** j)
        total += h
        used += 1
        if h < cut:
            break
        j += 1
    value = s1.value - 2 * total
    return Approximation(value, s1.error_bound + w.mpf(4) * cut * (j + 2), used)


@_register(SPECIALS, "plouffe-pi")
def _sp_plouffe_pi(ctx):
    a = _plouffe_sum(1, 1, ctx)
    b = _plouffe_sum(1, 2, ctx)
    c = _plouffe_sum(1, 4, ctx)
    err = 72 * a.error_bound + 96 * b.error_bound + 24 * c.error_bound
    return Approximation(72 * a.value - 96 * b.value + 24 * c.value, err,
                         a.terms_used + b.terms_used + c.terms_used)


@_register(SPECIALS, "plouffe-zeta3")
def _sp_plouffe_z3(ctx):
    a = _plouffe_sum(3, 1, ctx)
    b = _plouffe_sum(3, 2, ctx)
    c = _plouffe_sum(3, 4, ctx)
    err = 28 * a.error_bound + 37 * b.error_bound + 7 * c.error_bound
    return Approximation(28 * a.value - 37 * b.value + 7 * c.value, err,
                         a.terms_used + b.terms_used + c.terms_used)


@_register(SPECIALS, "plouffe-zeta5")
def _sp_plouffe_z5(ctx):
    w = ctx.mp
    a = _plouffe_sum(5, 1, ctx)
    b = _plouffe_sum(5, 2, ctx)
    c = _plouffe_sum(5, 4, ctx)
    err = 24 * a.error_bound + 26 * b.error_bound + b.error_bound
    value = 24 * a.value - w.mpf(259) / 10 * b.value - w.mpf(1) / 10 * c.value
    return Approximation(value, err,
                         a.terms_used + b.terms_used + c.terms_used)


@_register(SPECIALS, "plouffe-pi3")
def _sp_plouffe_pi3(ctx):
    a = _plouffe_sum(3, 1, ctx)
    b = _plouffe_sum(3, 2, ctx)
    c = _plouffe_sum(3, 4, ctx)
    err = 720 * a.error_bound + 900 * b.error_bound + 180 * c.error_bound
    return Approximation(720 * a.value - 900 * b.value + 180 * c.value, err,
                         a.terms_used + b.terms_used + c.terms_used)


@_register(SPECIALS, "plouffe-pi5")
def _sp_plouffe_pi5(ctx):
    a = _plouffe_sum(5, 1, ctx)
    b = _plouffe_sum(5, 2, ctx)
    c = _plouffe_sum(5, 4, ctx)
    err = 7056 * a.error_bound + 6993 * b.error_bound + 63 * c.error_bound
    return Approximation(7056 * a.value - 6993 * b.value + 63 * c.value, err,
                         a.terms_used + b.terms_used + c.terms_used)


@_register(SPECIALS, "plouffe-zeta7")
def _sp_plouffe_z7(ctx):
    w = ctx.mp
    a = _plouffe_sum(7, 1, ctx)
    b = _plouffe_sum(7, 2, ctx)
    c = _plouffe_sum(7, 4, ctx)
    err = 24 * a.error_bound + 26 * b.error_bound + c.error_bound
    value = (w.mpf(304) / 13 * a.value - w.mpf(103) / 4 * b.value
             + w.mpf(19) / 52 * c.value)
    return Approximation(value, err,
                         a.terms_used + b.terms_used + c.terms_used)


@_register(SPECIALS, "bst-min-c")
def _sp_bst_min(ctx):
    w = ctx.mp
    s = kernel.sum_series(lambda k: w.mpf(2) ** -k * w.ln(1 - w.mpf(2) ** -k),
                          kernel.geometric("0.51"), ctx, start=1)
    return Approximation(w.ln(4) + s.value, s.error_bound, s.terms_used)


def _binomial_ratio_coefficients(order: int):
    """Fractions a_m with C(2k,k) 4^-k ~ (pi k)^(-1/2) sum_m a_m k^-m,
    solved from A(x) = A(x/(1-x)) (1-x)^(-1/2) (1 - x/2) order by order."""
    a = [Fraction(1)]

    def rising_over_fact(base: Fraction, j: int) -> Fraction:
        v = Fraction(1)
        for i in range(j):
            v *= base + i
        return v / math.factorial(j)

    for n in range(2, order + 2):
        c = Fraction(0)
        for m in range(0, min(n - 1, len(a))):
            # [x^(n-m)] (1-x)^(-m-1/2) (1 - x/2)
            j = n - m
            coef = rising_over_fact(Fraction(2 * m + 1, 2), j) \
                - Fraction(1, 2) * rising_over_fact(Fraction(2 * m + 1, 2), j - 1)
            c += a[m] * coef
        a.append(-c / (n - 1))
    return a


@_register(SPECIALS, "bst-uniform-entropy")
def _sp_bst_uniform(ctx):
    """sum_k ln(k) C(2k,k) / ((k+1) 4^k): direct to K, then asymptotic
    coefficients against log-weighted zeta tails."""
    w = ctx.mp
    K = max(120, 14 * ctx.working_digits // 10)
    order = 14
    total = w.mpf(0)
    b = w.mpf(1)  # C(2k,k)/4^k
    for k in range(1, K):
        b = b * (2 * k - 1) / (2 * k)
        if k >= 2:
            total += w.ln(k) * b / (k + 1)
    a = _binomial_ratio_coefficients(order)
    # e_m: A(x) * x/(1+x) = sum e_m x^m, so b(k)/(k+1) ~ k^(-3/2)/sqrt(pi) sum e_m k^-m
    e = [Fraction(0)] * (order + 1)
    for m, am in enumerate(a):
        for i in range(0, order + 1 - m - 1):
            e[m + i + 1] += am * (-1) ** i
    tail = w.mpf(0)
    last = None
    for m in range(1, order + 1):
        if e[m] == 0:
            continue
        t = (w.mpf(e[m].numerator) / e[m].denominator
             * special.zeta_log_tail(w.mpf(3) / 2 + (m - 1), K, ctx))
        tail += t
        last = t
    tail /= w.sqrt(w.pi)
    err = abs(last) / w.sqrt(w.pi) * 2 if last is not None else ctx.eps_work
    return Approximation(total + tail, err + ctx.eps_work, K, heuristic=True)


@_register(SPECIALS, "bst-q-entropy")
def _sp_bst_q(ctx):
    """2 sum_k ln(k)/((k+1)(k+2)), Abel-transformed to
    sum_{j>=1} ln(1+1/j)/(j+2) and finished with zeta tails."""
    w = ctx.mp
    K = max(60, 3 * ctx.working_digits)
    total = w.mpf(0)
    for j in range(1, K):
        total += w.ln(1 + w.mpf(1) / j) / (j + 2)
    # ln(1+1/j)/(j+2) = sum_{n>=2} d_n j^-n, d_n = sum_m (-1)^(m-1)(-2)^(n-1-m)/m
    order = int(ctx.working_digits * w.ln(10) / w.ln(K / 2)) + 4
    tail = w.mpf(0)
    for n in range(2, order + 1):
        d = Fraction(0)
        for m in range(1, n):
            d += Fraction((-1) ** (m - 1) * (-2) ** (n - 1 - m), m)
        if d == 0:
            continue
        tail += (w.mpf(d.numerator) / d.denominator
                 * special.zeta_tail(n, K, ctx))
    bound = (w.mpf(2) / K) ** (order + 1) / (1 - w.mpf(2) / K)
    return Approximation(2 * (total + tail), 2 * bound + ctx.eps_work, K)


@_register(SPECIALS, "collatz-mean-stop")
def _sp_collatz(ctx):
    return oracles.collatz_mean_stopping(ctx)


@_register(SPECIALS, "madelung-near-miss")
def _sp_madelung(ctx):
    """Closed form minus twice the rapidly convergent screened lattice sum."""
    w = ctx.mp
    closed = (-w.mpf(1) / 8 + 1 / (2 * w.sqrt(2)) - 4 * w.pi / 3
              - w.ln(2) / (4 * w.pi)
              + special.gamma(w.mpf(1) / 8, ctx) * special.gamma(w.mpf(3) / 8, ctx)
              / (w.pi ** (w.mpf(3) / 2) * w.sqrt(2)))
    eight_pi = 8 * w.pi

    def term(i, j, k):
        r = w.sqrt(i * i + j * j + k * k)
        sign = -1 if (i + j + k) % 2 else 1
        return sign / (r * (w.exp(eight_pi * r) - 1))

    series = kernel.sum_lattice(term, 3, ctx, ratio_bound="1e-8", shell_cap=30)
    return Approximation(closed - 2 * series.value, 2 * series.error_bound
                         + ctx.eps_work, series.terms_used)


@_register(SPECIALS, "psi-cuberoot-limit")
def _sp_psi_limit(ctx):
    """(psi - psi_n)(3(1+1/psi))^n where psi_n = (1+psi_{n-1})^(1/3).

    The error decays like the sequence itself, so each sample needs
    working precision proportional to n; handled with a boosted context.
    """
    w = ctx.mp
    rate = 0.73  # log10(3 psi^2), a touch above
    steps = int(ctx.target_digits / rate) + 14
    boost = PrecisionContext(ctx.working_digits + int(steps * rate) + 10,
                             guard_digits=10, max_terms=ctx.max_terms)
    wb = boost.mp
    psi = solvers.find_root(lambda x: x ** 3 - x - 1,
                            (wb.mpf(1), wb.mpf(2)), boost).value
    factor = 3 * (1 + 1 / psi)
    values = []
    p = wb.mpf(1)
    scale = wb.mpf(1)
    for n in range(1, steps + 1):
        if n > 1:
            p = wb.cbrt(1 + p)
        scale = factor ** n
        values.append((psi - p) * scale)
    err = abs(values[-1] - values[-2])
    return Approximation(w.mpf(values[-1]), w.mpf(err), steps, heuristic=True)


@_register(SPECIALS, "iterated-exponential-constant")
def _sp_iterexp(ctx):
    """C from a_n = a_{n-1} exp(1/(e a_{n-1})): partial sums of the two
    defining series at K, 2K, 4K, ... extrapolated against the basis
    {1, ln K/K, 1/K, ln^2 K/K^2, ln K/K^2, 1/K^2}."""
    w = ctx.mp
    samples = 6
    K0 = 400 * max(1, (ctx.target_digits + 9) // 10)
    Ks = [K0 * 2 ** i for i in range(samples)]
    Kmax = Ks[-1]
    e = w.e
    a = w.mpf(1)
    s1 = w.mpf(0)  # (1/2) sum (k - e a_k)/(e k a_k)
    s2 = w.mpf(0)  # sum (e a_{k+1} - e a_k - 1 - 1/(2 e a_k))
    targets = {}
    kset = set(Ks)
    for k in range(1, Kmax + 1):
        ea = e * a
        s1 += (k - ea) / (ea * k) / 2
        a_next = a * w.exp(1 / ea)
        s2 += e * a_next - ea - 1 - 1 / (2 * ea)
        if k in kset:
            targets[k] = e - 1 + w.euler / 2 + s1 + s2
        a = a_next
    rows = []
    rhs = []
    for K in Ks:
        lk = w.ln(K)
        rows.append([w.mpf(1), lk / K, w.mpf(1) / K,
                     lk * lk / (K * K), lk / (K * K), w.mpf(1) / (K * K)])
        rhs.append(targets[K])
    sol = _solve_linear(rows, rhs, w)
    # residual scale: compare against the 5-sample fit
    sol5 = _solve_linear([r[:5] for r in rows[:5]], rhs[:5], w)
    err = abs(sol[0] - sol5[0]) * 4
    return Approximation(sol[0], err, Kmax, heuristic=True)


def _solve_linear(rows, rhs, w):
    n = len(rows)
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return [m[i][n] / m[i][i] for i in range(n)]


@_register(SPECIALS, "walk-sigma-integral")
def _sp_walk_sigma(ctx):
    """(1/pi) int_0^inf x^-2 ln[6 x^-2 (1 - sin x / x)] dx over geometric
    panels, plus the analytic tail of the non-oscillatory part."""
    w = ctx.mp

    def f(x):
        if x == 0:
            return w.mpf(-1) / 20  # removable: integrand -> -1/20... times x^-2
        u = 6 / (x * x) * (1 - w.sin(x) / x)
        return w.ln(u) / (x * x)

    U = w.mpf(10) ** (ctx.target_digits // 2 + 4)
    points = [w.mpf(0), w.mpf(1)]
    while points[-1] < U:
        points.append(min(points[-1] * 4, U))
    # int_U^inf (ln6 - 2 ln x)/x^2 dx = (ln6 - 2 lnU - 2)/U; oscillatory
    # remainder |int ln(1 - sinx/x)/x^2| <= 1/U^2 roughly
    analytic_tail = (w.ln(6) - 2 * w.ln(U) - 2) / U
    res = quadrature.integrate_piecewise_to_infinity(f, points, 2 / U ** 2, ctx)
    return Approximation((res.value + analytic_tail) / w.pi,
                         res.error_bound / w.pi, res.terms_used,
                         heuristic=True)


# small-x limit above: 6x^-2(1 - sinx/x) = 1 - x^2/20 + O(x^4), so the
# integrand tends to -1/20; the x=0 node is never requested by tanh-sinh
# but the guard keeps the function total.


@_register(SPECIALS, "kepler-bouwkamp-zeta-series")
def _sp_kepler_zeta(ctx):
    """Kepler-Bouwkamp rho via the zeta/lambda series form (ratio ~ 1/100)."""
    w = ctx.mp
    front = (w.mpf(3) ** 10 * w.sqrt(3)
             / (w.mpf(2) ** 7 * 25 * 7 * 11 * w.pi))
    total = w.mpf(0)
    k = 1
    while True:
        z = special.zeta(2 * k, ctx)
        lam = (1 - w.mpf(2) ** (-2 * k)) * z
        t = ((z - 1 - w.mpf(2) ** (-2 * k) - w.mpf(3) ** (-2 * k))
             * w.mpf(2) ** (2 * k)
             * (lam - 1 - w.mpf(3) ** (-2 * k)) / k)
        total += t
        if t < ctx.eps_work / 10:
            break
        k += 1
    value = front * w.exp(-total)
    return Approximation(value, abs(value) * ctx.eps_work * 10, k)


@_register(SPECIALS, "kepler-bouwkamp-direct")
def _sp_kepler_direct(ctx):
    """prod_{k>=3} cos(pi/k) directly to K with zeta-tail corrections on
    ln cos(pi/k) = -sum_j c_j (pi/k)^(2j)."""
    w = ctx.mp
    K = max(2000, 40 * ctx.working_digits)
    logsum = w.mpf(0)
    for k in range(3, K):
        logsum += w.ln(w.cos(w.pi / k))
    j = 1
    while True:
        b = abs(w.bernoulli(2 * j))
        c = (w.mpf(2) ** (2 * j - 1) * (w.mpf(2) ** (2 * j) - 1) * b
             / (j * w.factorial(2 * j)))
        t = c * w.pi ** (2 * j) * special.zeta_tail(2 * j, K, ctx)
        logsum -= t
        if t < ctx.eps_work / 10:
            break
        j += 1
    value = w.exp(logsum)
    return Approximation(value, abs(value) * ctx.eps_work * 10, K)


@_register(SPECIALS, "holcombe-product")
def _sp_holcombe(ctx):
    """prod_{n>=1} (1+1/n^2)^(n^2) e^-1 via exact power-tail coefficients:
    ln factor = sum_{j>=2} (-1)^(j-1) n^(-2(j-1))/j."""
    w = ctx.mp
    K = max(40, 2 * ctx.working_digits)
    logsum = w.mpf(0)
    for n in range(1, K):
        logsum += n * n * w.ln(1 + 1 / w.mpf(n) ** 2) - 1
    j = 2
    while True:
        t = w.mpf((-1) ** (j - 1)) / j * special.zeta_tail(2 * (j - 1), K, ctx)
        logsum += t
        if abs(t) < ctx.eps_work / 10:
            break
        j += 1
    value = w.exp(logsum)
    return Approximation(value, abs(value) * ctx.eps_work * 10, K)


# ---------------------------------------------------------------------------
# qualitative predicates
# ---------------------------------------------------------------------------

@_register(PREDICATES, "grossman-pair")
def _pred_grossman(ctx):
    """Classify the a/b pair recursion by the sign of the frozen limit of
    a once b has collapsed quadratically; 'converges' below the threshold
    (negative limit), 'diverges' above."""
    w = ctx.mp
    blow = w.mpf(10) ** 50
    tiny = w.mpf(10) ** (-(ctx.target_digits + 5))
    freeze = w.mpf(10) ** (-(2 * ctx.working_digits + 20))

    def predicate(x):
        a, b = w.mpf(-1), w.mpf(x)
        for _ in range(ctx.max_terms):
            a, b = a + b, -a * b
            if abs(b) > blow:
                return solvers.DIVERGES
            if abs(a) < tiny and abs(b) < tiny:
                return solvers.CONVERGES
            if abs(b) < freeze:
                return solvers.CONVERGES if a < 0 else solvers.DIVERGES
        raise UnresolvedPredicateError("grossman pair did not classify")

    return predicate


@_register(PREDICATES, "quadratic-recurrence")
def _pred_quadratic(ctx):
    """k_{n+1} = k_n^2 / n converges to 0 or diverges."""
    w = ctx.mp
    blow = w.mpf(10) ** 50
    tiny = w.mpf(10) ** (-(ctx.target_digits + 5))

    def predicate(x):
        k = w.mpf(x)
        for n in range(1, ctx.max_terms):
            k = k * k / n
            if abs(k) > blow:
                return solvers.DIVERGES
            if abs(k) < tiny:
                return solvers.CONVERGES
        raise UnresolvedPredicateError("quadratic recurrence did not classify")

    return predicate


# ---------------------------------------------------------------------------
# combiners for composite recipes
# ---------------------------------------------------------------------------

@_register(COMBINERS, "bratu-threshold")
def _cb_bratu(parts, ctx):
    lam = parts[0]
    return 8 * lam * lam


@_register(COMBINERS, "bratu-beta")
def _cb_bratu_beta(parts, ctx):
    w = ctx.mp
    return w.sqrt(8) * parts[0]


@_register(COMBINERS, "reciprocal")
def _cb_reciprocal(parts, ctx):
    return 1 / parts[0]


@_register(COMBINERS, "rowconvex-amplitude")
def _cb_rowconvex_u(parts, ctx):
    v = parts[0]
    return (41 * v * v - 129 * v + 163) / 944


@_register(COMBINERS, "secretary-success")
def _cb_secretary_prob(parts, ctx):
    w = ctx.mp
    a = parts[0]
    em = special.exp_integral_ei(-a, ctx)
    ep = special.exp_integral_ei(a, ctx)
    return ((1 - w.exp(a)) * em
            - (w.exp(-a) + a * em) * (w.euler + w.ln(a) - ep))


@_register(COMBINERS, "secretary-success-b")
def _cb_secretary_prob_b(parts, ctx):
    w = ctx.mp
    b = parts[0]
    em = special.exp_integral_ei(-b, ctx)
    return w.exp(-b) - (w.exp(b) - b - 1) * em


@_register(COMBINERS, "long-cycle-p1-value")
def _cb_p1_at_xi(parts, ctx):
    return OBJECTIVES["long-cycle-p1"](ctx)(parts[0])
