"""Mean residual life m(t) = E(X - t | X > t): quadrature, closed forms, inverse relation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import expansion
from .errors import CapabilityError, ConvergenceError, DomainError
from .quadrature import QuadratureResult, integrate_adaptive

# integrand exp{R(t) - R(t+x)} is cut once it drops below e^-TRUNCATION
TRUNCATION = 40.0
DEFAULT_REL_TOL = 1e-9
# beta1: reject t this close to the right endpoint
ENDPOINT_GUARD = 1e-12

METHODS = ("quadrature", "closed_family", "expansion")


@dataclass(frozen=True)
class MrlCurve:
    t_grid: tuple
    values: tuple
    method: str
    order: int | None = None

    def __post_init__(self):
        if len(self.t_grid) != len(self.values):
            raise ValueError("t_grid and values differ in length")
        if any(b <= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ValueError("t_grid must be strictly increasing")


def _check_point(model, t):
    model.check_support(t)
    lo, hi = model.support
    if math.isfinite(hi) and hi - t < ENDPOINT_GUARD:
        raise DomainError(f"t={t!r} is within {ENDPOINT_GUARD} of the support endpoint {hi}")


def _horizon(model, t):
    """Breakpoints 0 < x_0 < 2 x_0 < ... < X with R(t+X) - R(t) >= TRUNCATION."""
    lo, hi = model.support
    if math.isfinite(hi):
        return [], hi - t
    try:
        rate = model.hazard(t)
    except ArithmeticError:
        rate = math.nan
    x = 1.0 / rate if (rate > 0.0 and math.isfinite(rate)) else 1.0
    # tighten an overshooting first guess
    while x > 1e-300 and model.cum_hazard_increment(t, 0.5 * x) >= TRUNCATION:
        x *= 0.5
    points = []
    for _ in range(2100):
        if model.cum_hazard_increment(t, x) >= TRUNCATION:
            return points, x
        points.append(x)
        x *= 2.0
    raise ConvergenceError(f"could not find a truncation point for m({t!r}); is the tail too heavy?")


def mrl_quadrature(model, t, rel_tol=DEFAULT_REL_TOL):
    """m(t) as the integral of exp{R(t) - R(t+x)} over x >= 0.

    The range is cut at the first doubling X with R(t+X) - R(t) >= 40;
    e^-40 * X is added to the error estimate for the discarded tail. For a
    finite support the range is exact.
    """
    if rel_tol < 1e-12:
        raise DomainError(f"rel_tol must be >= 1e-12, got {rel_tol!r}")
    _check_point(model, t)
    r_t = model.cum_hazard(t)
    if not math.isfinite(r_t):
        raise DomainError(f"survival is zero at t={t!r}")
    points, upper = _horizon(model, t)
    hi = model.support[1]

    def integrand(x):
        if t + x >= hi:
            return 0.0
        return math.exp(-model.cum_hazard_increment(t, x))

    res = integrate_adaptive(integrand, 0.0, upper, rel_tol=rel_tol, points=points)
    tail = 0.0 if math.isfinite(hi) else math.exp(-TRUNCATION) * upper
    if not res.value > 0.0:
        raise ConvergenceError(f"nonpositive quadrature result {res.value!r} at t={t!r}", res.value)
    return QuadratureResult(res.value, res.abs_err_est + tail, res.evals)


def mrl_survival_form(model, t, rel_tol=DEFAULT_REL_TOL):
    """m(t) as (1/sf(t)) * integral of sf over [t, inf); cross-check for :func:`mrl_quadrature`.

    Loses precision where sf(t) is tiny, which is why it is not the primary route.
    """
    _check_point(model, t)
    s_t = model.sf(t)
    if not s_t > 0.0:
        raise DomainError(f"survival is zero at t={t!r}")
    points, upper = _horizon(model, t)
    res = integrate_adaptive(lambda x: model.sf(t + x), 0.0, upper, rel_tol=rel_tol, points=points)
    return QuadratureResult(res.value / s_t, res.abs_err_est / s_t, res.evals)


def conditional_mean(model, t):
    """E(X | X > t) = mu + g(t) r(t) from the model's (mu, g) representation."""
    _check_point(model, t)
    if model.family == "exponential":
        return t + model.mean()
    if not model.has_family_data:
        raise CapabilityError(
            f"no closed family form for {model.family}; use the expansion or quadrature"
        )
    mu, g = model.family_data(t)
    return mu + g * model.hazard(t)


def mrl_closed_family(model, t):
    """m(t) = mu - t + g(t) r(t).

    Computed as ``conditional_mean(t) - t``; far in the tail the two terms
    nearly cancel, costing roughly log10(t / m(t)) digits.
    """
    if model.family == "exponential":
        _check_point(model, t)
        return model.mean()
    value = conditional_mean(model, t) - t
    if not value > 0.0:
        raise ConvergenceError(f"closed form lost all precision at t={t!r} (got {value!r})", value)
    return value


def hazard_from_mrl(m, m_prime):
    """r(t) = (1 + m'(t)) / m(t)."""
    if not m > 0.0:
        raise DomainError(f"mean residual life must be > 0, got {m!r}")
    return (1.0 + m_prime) / m


def richardson_derivative(f, t, h, levels=3):
    """Central difference of f at t with ``levels`` rounds of Richardson extrapolation."""
    table = []
    step = h
    for i in range(levels + 1):
        row = [(f(t + step) - f(t - step)) / (2.0 * step)]
        for j in range(1, i + 1):
            factor = 4.0**j
            row.append((factor * row[j - 1] - table[i - 1][j - 1]) / (factor - 1.0))
        table.append(row)
        step *= 0.5
    return table[-1][-1]


def mrl(model, t, method="quadrature", order=None, rel_tol=DEFAULT_REL_TOL):
    """Evaluate m(t) by name: ``quadrature``, ``closed_family`` or ``expansion``."""
    if method == "quadrature":
        return mrl_quadrature(model, t, rel_tol).value
    if method == "closed_family":
        return mrl_closed_family(model, t)
    if method == "expansion":
        if order is None:
            raise DomainError("the expansion method needs an order")
        _check_point(model, t)
        return expansion.mrl_expansion(model, t, order)
    raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")


def mrl_curve(model, t_grid, method="quadrature", order=None, rel_tol=DEFAULT_REL_TOL):
    t_grid = tuple(float(t) for t in t_grid)
    values = tuple(mrl(model, t, method, order, rel_tol) for t in t_grid)
    return MrlCurve(t_grid, values, method, order if method == "expansion" else None)
