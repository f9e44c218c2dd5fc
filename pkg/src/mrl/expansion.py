"""Gaussian-function expansion of the mean residual life for increasing hazards.

For a hazard r with derivatives r', r'', ... at t,

    m(t) ~ sum_{k<n} b_k(t) * phi_k(t),

where the b_k are the power-series coefficients of
exp(-sum_{k>=3} r^(k-1)(t) x^k / k!) and
phi_k(t) = integral_0^inf x^k exp(-x r(t) - x^2 r'(t) / 2) dx.

The b_k come from a three-term-style recurrence (or, as a cross-check, an
explicit sum over partitions). The phi_k have three routes: a finite closed
form in Gaussian tails and incomplete gamma sums, an integration-by-parts
recurrence, and direct quadrature.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field

from . import specfun
from .errors import CapabilityError, DomainError, StabilityError
from .quadrature import QuadratureResult, integrate_adaptive

_EPS = 2.0**-52

LAMBDA_SWITCH = 30.0
# half the significand
CANCELLATION_THRESHOLD = 2.0**-26
MULTINOMIAL_MAX_K = 12

LEMMA = "lemma_closed_form"
RECURRENCE = "recurrence"
QUADRATURE = "quadrature"


@dataclass(frozen=True)
class ExpansionCoefficients:
    t: float
    kmax: int
    b: tuple


@dataclass(frozen=True)
class PhiSequence:
    t: float
    r: float
    r_prime: float
    kmax: int
    phi: tuple
    method: tuple
    abs_err_est: tuple

    @property
    def lam(self):
        return self.r * self.r / (2.0 * self.r_prime)


@dataclass(frozen=True)
class HypothesisReport:
    n: int
    epsilon: float
    t_grid: tuple
    ratios_eps: tuple  # rows per t, columns j = 3..n
    ratios_growth: tuple  # rows per t, columns j = 3..n-1
    uniform_ratio: tuple  # per t, sampled max |r^(n-1)(t+x)| / |r^(n-1)(t)|
    verdict: str


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    converged: bool
    partial_sums: tuple = field(repr=False, default=())


# -- coefficients b_k -----------------------------------------------------


def _exact(derivs):
    # int / int would silently produce floats
    return [Fraction(d) if isinstance(d, int) else d for d in derivs]


def _check_derivs(derivs, kmax):
    needed = max(0, kmax - 2)
    if len(derivs) < needed:
        raise CapabilityError(
            f"b_0..b_{kmax} need r^(2)..r^({kmax - 1}) ({needed} values), got {len(derivs)}"
        )


def coeffs_recurrence(derivs, kmax, t=math.nan):
    """b_0..b_kmax from the recurrence b_{k+1} = -1/(k+1) sum_{j=2}^k r^(j)/j! b_{k-j}.

    ``derivs[i]`` is r^(i+2)(t). Arithmetic is generic, so Fraction inputs
    give exact rational coefficients.
    """
    if kmax < 0:
        raise DomainError(f"kmax must be >= 0, got {kmax}")
    _check_derivs(derivs, kmax)
    derivs = _exact(derivs)
    b = [1, 0, 0]
    for k in range(2, kmax):
        acc = 0
        for j in range(2, k + 1):
            acc += derivs[j - 2] / math.factorial(j) * b[k - j]
        b.append(-acc / (k + 1))
    return ExpansionCoefficients(t, kmax, tuple(b[: kmax + 1]))


def _partitions(k, jmax):
    """Yield dicts {j: alpha_j} with sum (j+1) alpha_j == k, 2 <= j <= jmax."""

    def rec(remaining, j):
        if remaining == 0:
            yield {}
            return
        if j < 2:
            return
        for a in range(remaining // (j + 1), -1, -1):
            for rest in rec(remaining - a * (j + 1), j - 1):
                if a:
                    rest = {**rest, j: a}
                yield rest

    yield from rec(k, jmax)


def coeffs_multinomial(derivs, k, max_k=MULTINOMIAL_MAX_K):
    """b_k by the explicit multinomial sum over partitions of k into parts j+1 >= 3."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k > max_k:
        raise DomainError(f"partition enumeration capped at k <= {max_k}; use coeffs_recurrence")
    _check_derivs(derivs, k)
    derivs = _exact(derivs)
    total = 0
    for alpha in _partitions(k, k - 1):
        p = sum(alpha.values())
        term = 1
        for j, a in alpha.items():
            term *= (derivs[j - 2] / math.factorial(j + 1)) ** a / math.factorial(a)
        total += -term if p % 2 else term
    return total


# -- phi_k ------------------------------------------------------------------


def lemma_integral(a, b, k):
    """Closed form of integral_0^inf x^k exp(-a x - b x^2) dx for real a, b > 0.

    Returns ``(value, abs_err_est)``. The expression is a finite combination
    of a scaled Gaussian tail and incomplete-gamma partial sums in
    lam = a^2 / 4b. The half-integer powers of lam carry the sign of a,
    which is what makes the formula valid for negative a as well.
    """
    if not b > 0.0:
        raise DomainError(f"b must be > 0, got {b!r}")
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    s = a / (2.0 * math.sqrt(b))  # signed square root of lam
    lam = s * s
    tail = specfun.gauss_sf_scaled(math.sqrt(2.0) * s)  # e^lam (1 - Phi(sqrt(2) s))

    even_terms = []
    half_sum = 0.0  # 1/2 sum_{j<h} s^(2j+1) / Gamma(j + 3/2)
    for h in range(k // 2 + 1):
        if h > 0:
            half_sum += 0.5 * s ** (2 * h - 1) / specfun.gamma_half_integer(h)
        even_terms.append(
            math.comb(k, 2 * h) * s ** (k - 2 * h) * specfun.gamma_half_integer(h) * (tail + half_sum)
        )

    odd_terms = []
    poisson = 0.0  # sum_{j<=h} lam^j / j!
    term = 1.0
    for h in range(k // 2 + 1):
        if h > 0:
            term *= lam / h
        poisson += term
        if 2 * h + 1 <= k:
            odd_terms.append(
                0.5 * math.factorial(h) * math.comb(k, 2 * h + 1) * s ** (k - 1 - 2 * h) * poisson
            )

    scale = b ** (-(k + 1) / 2.0)
    sign = -1.0 if k % 2 else 1.0
    value = sign * scale * (math.fsum(even_terms) - math.fsum(odd_terms))
    magnitude = scale * (sum(abs(v) for v in even_terms) + sum(abs(v) for v in odd_terms))
    return value, 8.0 * _EPS * magnitude


def phi_lemma(r, r_prime, kmax, lam_switch=LAMBDA_SWITCH, t=math.nan):
    """phi_0..phi_kmax from the closed form with a = r, b = r'/2 (so lam = r^2 / 2r')."""
    if not r_prime > 0.0:
        raise DomainError(f"r_prime must be > 0, got {r_prime!r}")
    lam = r * r / (2.0 * r_prime)
    if lam > lam_switch:
        raise StabilityError(
            f"lam = {lam:.6g} exceeds {lam_switch}; the closed form cancels catastrophically, "
            "use the recurrence or quadrature"
        )
    vals, errs = [], []
    for k in range(kmax + 1):
        v, e = lemma_integral(r, 0.5 * r_prime, k)
        vals.append(v)
        errs.append(e)
    return PhiSequence(t, r, r_prime, kmax, tuple(vals), (LEMMA,) * (kmax + 1), tuple(errs))


def _phi_tail_point(r, r_prime, k, drop=40.0):
    """x beyond the integrand's peak where it has fallen by e^-drop from the peak."""

    def log_f(x):
        return (k * math.log(x) if k else 0.0) - x * r - 0.5 * x * x * r_prime

    # peak of x^k e^{-x r - x^2 r'/2}: k/x = r + r' x
    peak = (-r + math.sqrt(r * r + 4.0 * r_prime * k)) / (2.0 * r_prime) if k else max(0.0, -r / r_prime)
    top = log_f(peak) if peak > 0.0 else (0.0 if k == 0 else -math.inf)
    if not math.isfinite(top):
        top = 0.0
    scale = 1.0 / (abs(r) + math.sqrt(r_prime))
    x = max(peak, 0.0) + scale
    while log_f(x) > top - drop:
        x = max(peak, 0.0) + 2.0 * (x - max(peak, 0.0))
    return peak, x


def phi_quadrature(r, r_prime, k, rel_tol=1e-12):
    """phi_k by adaptive quadrature of x^k exp(-x r - x^2 r'/2), truncated e^-40 below the peak."""
    if not r_prime > 0.0:
        raise DomainError(f"r_prime must be > 0, got {r_prime!r}")
    peak, upper = _phi_tail_point(r, r_prime, k)

    def f(x):
        return x**k * math.exp(-x * r - 0.5 * x * x * r_prime)

    points = [peak] if 0.0 < peak < upper else []
    res = integrate_adaptive(f, 0.0, upper, rel_tol=rel_tol, points=points)
    # the discarded tail is below e^-40 of the peak height times the range
    tail = math.exp(-40.0) * upper * max(f(peak) if peak > 0 else f(0.0), 0.0)
    return QuadratureResult(res.value, res.abs_err_est + tail, res.evals)


def phi_recurrence(r, r_prime, kmax, rel_tol=1e-10, t=math.nan):
    """phi_0..phi_kmax by integration by parts: r' phi_{k+1} = k phi_{k-1} - r phi_k.

    phi_0 comes from the scaled Gaussian tail. An entry whose recurrence step
    loses more than half the significand to cancellation, or whose
    propagated error estimate exceeds ``rel_tol``, is recomputed by quadrature.
    """
    if not r_prime > 0.0:
        raise DomainError(f"r_prime must be > 0, got {r_prime!r}")
    root = math.sqrt(r_prime)
    phi0 = math.sqrt(2.0 * math.pi) / root * specfun.gauss_sf_scaled(r / root)
    vals = [phi0]
    errs = [4.0 * _EPS * phi0]
    methods = [RECURRENCE]
    for k in range(kmax):
        left = k * vals[k - 1] if k else 1.0
        right = r * vals[k]
        diff = left - right
        left_err = k * errs[k - 1] if k else 0.0
        err = (left_err + abs(r) * errs[k] + 2.0 * _EPS * (abs(left) + abs(right))) / r_prime
        value = diff / r_prime
        cancelled = abs(diff) < CANCELLATION_THRESHOLD * max(abs(left), abs(right))
        if cancelled or not value > 0.0 or err > rel_tol * abs(value):
            q = phi_quadrature(r, r_prime, k + 1)
            vals.append(q.value)
            errs.append(q.abs_err_est)
            methods.append(QUADRATURE)
        else:
            vals.append(value)
            errs.append(err)
            methods.append(RECURRENCE)
    return PhiSequence(t, r, r_prime, kmax, tuple(vals), tuple(methods), tuple(errs))


def phi_sequence(r, r_prime, kmax, lam_switch=LAMBDA_SWITCH, rel_tol=1e-10, t=math.nan):
    """phi_0..phi_kmax choosing the most accurate stable route per entry.

    Below ``lam_switch`` the closed form is used wherever its own error
    estimate is within ``rel_tol``; everything else goes through the
    recurrence (which itself falls back to quadrature).
    """
    if not r_prime > 0.0:
        raise DomainError(f"r_prime must be > 0, got {r_prime!r}")
    rec = phi_recurrence(r, r_prime, kmax, rel_tol=rel_tol, t=t)
    lam = r * r / (2.0 * r_prime)
    if lam > lam_switch:
        return rec
    lem = phi_lemma(r, r_prime, kmax, lam_switch=lam_switch, t=t)
    vals, methods, errs = [], [], []
    for k in range(kmax + 1):
        v, e = lem.phi[k], lem.abs_err_est[k]
        if v > 0.0 and e <= rel_tol * v:
            vals.append(v)
            methods.append(LEMMA)
            errs.append(e)
        else:
            vals.append(rec.phi[k])
            methods.append(rec.method[k])
            errs.append(rec.abs_err_est[k])
    return PhiSequence(t, r, r_prime, kmax, tuple(vals), tuple(methods), tuple(errs))


# -- the expansion ------------------------------------------------------------


def _local_hazard(model, t, jmax):
    """[r, r', r'', ..., r^(jmax)] at t, requiring r' > 0."""
    jmax = max(1, jmax)
    if jmax > model.derivative_order:
        raise CapabilityError(
            f"{model.family} model has no analytic hazard derivatives; the expansion needs r^({jmax})"
        )
    derivs = model.hazard_derivatives(t, jmax)
    if not derivs[1] > 0.0:
        raise DomainError(
            f"expansion requires locally increasing hazard; r'({t!r}) = {derivs[1]!r}"
        )
    return derivs


def expansion_terms(model, t, n):
    """(ExpansionCoefficients, PhiSequence) for the order-n truncation at t."""
    if n < 1:
        raise DomainError(f"order n must be >= 1, got {n}")
    kmax = n - 1
    derivs = _local_hazard(model, t, kmax - 1)
    coeffs = coeffs_recurrence(derivs[2:], kmax, t=t)
    phis = phi_sequence(derivs[0], derivs[1], kmax, t=t)
    return coeffs, phis


def mrl_expansion(model, t, n):
    """sum_{k<n} b_k(t) phi_k(t), the order-n Gaussian expansion of m(t)."""
    coeffs, phis = expansion_terms(model, t, n)
    return math.fsum(b * p for b, p in zip(coeffs.b, phis.phi))


def mrl_expansion_series(model, t, rel_tol=1e-12, max_order=40):
    """Sum the expansion until terms stay below rel_tol * partial sum 3 times running.

    Only offered where r(t) > 1, the region in which the infinite series
    converges.
    """
    r = model.hazard(t)
    if not r > 1.0:
        raise DomainError(f"the series form needs r(t) > 1, got r({t!r}) = {r!r}")
    coeffs, phis = expansion_terms(model, t, max_order)
    partial = 0.0
    partials = []
    small_run = 0
    for k in range(max_order):
        term = coeffs.b[k] * phis.phi[k]
        partial += term
        partials.append(partial)
        if k >= 3:
            small_run = small_run + 1 if abs(term) < rel_tol * abs(partial) else 0
            if small_run >= 3:
                return SeriesResult(partial, k + 1, True, tuple(partials))
    return SeriesResult(partial, max_order, False, tuple(partials))


def linear_exact_mrl(alpha, beta, t):
    """Exact m(t) for hazard alpha + beta t: sqrt(2 pi / beta) * e^{z^2/2} (1 - Phi(z)), z = r(t)/sqrt(beta)."""
    if not beta > 0.0:
        raise DomainError(f"beta must be > 0, got {beta!r}")
    root = math.sqrt(beta)
    return math.sqrt(2.0 * math.pi) / root * specfun.gauss_sf_scaled((alpha + beta * t) / root)


# -- hypothesis diagnostics ------------------------------------------------------


def _verdict(columns):
    for col in columns:
        if col and col[0] > 0.0 and col[-1] > 10.0 * col[0]:
            return "violated"
        if col and col[0] == 0.0 and col[-1] > 0.0:
            return "violated"
    for col in columns:
        top = col[len(col) // 2 :]
        if any(later > earlier for earlier, later in zip(top, top[1:])):
            return "inconclusive"
    return "consistent_with_decay"


def check_hypotheses(model, n, epsilon, t_grid, samples=11):
    """Evaluate the growth conditions behind the order-n expansion on a t grid.

    ``ratios_eps[i][j-3]`` is |r^(j-1)(t_i)| / r(t_i)^(j - j*epsilon) for
    3 <= j <= n; these must tend to 0. ``ratios_growth`` holds
    |r^(j)| / max(1, |r''|^((j+1)/3)) for 3 <= j <= n-1, which must stay
    bounded. ``uniform_ratio`` samples max |r^(n-1)(t+x)| / |r^(n-1)(t)| over
    0 <= x <= min(1, |r''(t)|^(-1/3)).

    The verdict is ``violated`` if any eps-ratio column grows more than 10x
    across the grid, ``consistent_with_decay`` if every column is
    nonincreasing over the upper half of the grid, else ``inconclusive``.
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be > 0, got {epsilon!r}")
    t_grid = tuple(t_grid)
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise DomainError("t_grid must be strictly increasing")
    if n - 1 > model.derivative_order:
        raise CapabilityError(f"{model.family} model has no analytic derivatives up to order {n - 1}")

    eps_rows, growth_rows, uniform = [], [], []
    for t in t_grid:
        d = model.hazard_derivatives(t, n - 1)
        r = d[0]
        eps_rows.append(tuple(abs(d[j - 1]) / r ** (j - j * epsilon) for j in range(3, n + 1)))
        denom = lambda j: max(1.0, abs(d[2]) ** ((j + 1) / 3.0))  # noqa: E731
        growth_rows.append(tuple(abs(d[j]) / denom(j) for j in range(3, n)))

        delta = 1.0 if d[2] == 0.0 else min(1.0, abs(d[2]) ** (-1.0 / 3.0))
        base = abs(d[n - 1])
        worst = max(
            abs(model.hazard_derivative(n - 1, t + delta * i / (samples - 1))) for i in range(samples)
        )
        if base == 0.0:
            uniform.append(1.0 if worst == 0.0 else math.inf)
        else:
            uniform.append(worst / base)

    columns = [[row[c] for row in eps_rows] for c in range(n - 2)]
    return HypothesisReport(
        n, epsilon, t_grid, tuple(eps_rows), tuple(growth_rows), tuple(uniform), _verdict(columns)
    )
