"""Globally adaptive Gauss-Kronrod (7/15 point) quadrature on finite intervals."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

_EPS = 2.0**-52

# Kronrod abscissae (positive half, descending); odd positions 1, 3, 5 and the
# centre are the embedded Gauss points.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_err_est: float
    evals: int

    def __float__(self):
        return self.value


def gk15(f, a, b):
    """One 15-point Kronrod panel on [a, b]; returns (integral, error estimate)."""
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(centre)
    res_k = fc * _WGK[7]
    res_g = fc * _WG[3]
    res_abs = abs(res_k)
    fv1 = [0.0] * 7
    fv2 = [0.0] * 7
    for i in range(7):
        dx = half * _XGK[i]
        f1 = f(centre - dx)
        f2 = f(centre + dx)
        fv1[i] = f1
        fv2[i] = f2
        res_k += _WGK[i] * (f1 + f2)
        res_abs += _WGK[i] * (abs(f1) + abs(f2))
        if i % 2 == 1:
            res_g += _WG[i // 2] * (f1 + f2)
    mean = 0.5 * res_k
    res_asc = _WGK[7] * abs(fc - mean)
    for i in range(7):
        res_asc += _WGK[i] * (abs(fv1[i] - mean) + abs(fv2[i] - mean))
    integral = res_k * half
    res_abs *= abs(half)
    res_asc *= abs(half)
    err = abs((res_k - res_g) * half)
    # QUADPACK error scaling
    if res_asc != 0.0 and err != 0.0:
        err = res_asc * min(1.0, (200.0 * err / res_asc) ** 1.5)
    if res_abs > 2.2250738585072014e-308 / (50.0 * _EPS):
        err = max(50.0 * _EPS * res_abs, err)
    if not math.isfinite(integral):
        raise DomainError(f"integrand is not finite on [{a}, {b}]")
    return integral, err


def integrate_adaptive(f, lo, hi, rel_tol=1e-10, abs_tol=1e-300, max_evals=1_000_000, points=()):
    """Integrate f over [lo, hi] by adaptive bisection of Gauss-Kronrod panels.

    The panel with the largest error estimate is split until the summed
    estimate drops below ``max(abs_tol, rel_tol * |value|)``. Optional
    ``points`` give an initial partition (breakpoints strictly inside the
    interval). Raises :class:`ConvergenceError` carrying the best estimate
    if ``max_evals`` integrand evaluations are not enough.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError(f"need finite lo < hi, got [{lo}, {hi}]")
    if not (rel_tol > 0.0 and abs_tol > 0.0):
        raise DomainError("tolerances must be positive")
    edges = [lo, *sorted(p for p in points if lo < p < hi), hi]

    heap = []
    counter = 0
    evals = 0
    total = 0.0
    total_err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, err = gk15(f, a, b)
        evals += 15
        total += val
        total_err += err
        heapq.heappush(heap, (-err, counter, a, b, val))
        counter += 1
    # panels too narrow to split are parked here
    frozen = []

    while total_err > max(abs_tol, rel_tol * abs(total)):
        if not heap:
            break
        if evals + 30 > max_evals:
            value = math.fsum([item[4] for item in heap] + [v for v, _ in frozen])
            raise ConvergenceError(
                f"adaptive quadrature did not converge within {max_evals} evaluations",
                estimate=value,
                abs_err=total_err,
            )
        neg_err, _, a, b, val = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            frozen.append((val, -neg_err))
            continue
        v1, e1 = gk15(f, a, mid)
        v2, e2 = gk15(f, mid, b)
        evals += 30
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, counter, a, mid, v1))
        heapq.heappush(heap, (-e2, counter + 1, mid, b, v2))
        counter += 2

    value = math.fsum([item[4] for item in heap] + [v for v, _ in frozen])
    err = math.fsum([-item[0] for item in heap] + [e for _, e in frozen])
    if err > max(abs_tol, rel_tol * abs(value)):
        raise ConvergenceError(
            "adaptive quadrature stalled: panels cannot be refined further",
            estimate=value,
            abs_err=err,
        )
    return QuadratureResult(value, err, evals)
