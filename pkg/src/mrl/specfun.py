"""Scalar special functions: Gaussian tails, incomplete gamma, incomplete beta.

Everything here takes and returns plain Python floats. The incomplete gamma
routines are written out (series / continued fraction, plus the integer and
half-integer finite sums); the Gaussian and beta primitives lean on
``math.erfc`` and ``scipy.special``.
"""

import math

from scipy import special

from .errors import ConvergenceError, DomainError

SQRT2 = math.sqrt(2.0)
SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)

_EPS = 2.0**-52
_TINY = 1e-300
_MAX_ITER = 10_000


def _check_finite(name, x):
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def gauss_cdf(x):
    """Standard normal CDF."""
    _check_finite("x", x)
    return 0.5 * math.erfc(-x / SQRT2)


def gauss_sf(x):
    """Standard normal survival function ``1 - gauss_cdf(x)`` without cancellation."""
    _check_finite("x", x)
    return 0.5 * math.erfc(x / SQRT2)


def gauss_pdf(x):
    _check_finite("x", x)
    return math.exp(-0.5 * x * x) / SQRT_2PI


def _exp_half_square(x):
    """exp(x*x/2) with x*x split exactly into head + tail (Dekker) before exponentiating."""
    c = 134217729.0 * x  # 2**27 + 1
    xh = c - (c - x)
    xl = x - xh
    head = xh * xh
    tail = 2.0 * xh * xl + xl * xl
    return math.exp(0.5 * head) * math.exp(0.5 * tail)


def gauss_sf_scaled(x):
    """``exp(x**2/2) * (1 - Phi(x))``, evaluated without overflow for large x.

    This is the Mills ratio divided by sqrt(2*pi). It is computed from the
    scaled complementary error function, so the exponential factor never
    appears explicitly for x >= 0. For x below about -37.7 the true value
    overflows and ``OverflowError`` is raised.
    """
    _check_finite("x", x)
    if x < 0.0:
        if x < -37.0:
            raise OverflowError(f"gauss_sf_scaled overflows at x={x!r}")
        # no cancellation on this side: Phi(|x|) is near 1
        return gauss_cdf(-x) * _exp_half_square(x)
    value = 0.5 * float(special.erfcx(x / SQRT2))
    if math.isinf(value):
        raise OverflowError(f"gauss_sf_scaled overflows at x={x!r}")
    return value


def log_gamma(x):
    """Natural log of the gamma function for x > 0."""
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


def gamma_half_integer(h):
    """Gamma(h + 1/2) for integer h >= 0, by the finite product sqrt(pi) * prod(j - 1/2)."""
    if h < 0:
        raise DomainError(f"h must be >= 0, got {h}")
    value = SQRT_PI
    for j in range(1, h + 1):
        value *= j - 0.5
    return value


# -- incomplete gamma -------------------------------------------------------


def _lower_series(alpha, lam):
    """Sum of lam**n / ((alpha+1)...(alpha+n)); P(alpha, lam) = pref/alpha * sum."""
    term = 1.0 / alpha
    total = term
    ap = alpha
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= lam / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total
    raise ConvergenceError("incomplete gamma series did not converge", total)


def _upper_cf(alpha, lam):
    """Modified Lentz evaluation of the continued fraction for Gamma(alpha, lam) e^lam lam^-alpha."""
    b = lam + 1.0 - alpha
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - alpha)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ConvergenceError("incomplete gamma continued fraction did not converge", h)


def _check_gamma_args(alpha, lam):
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite and > 0, got {alpha!r}")
    if not (lam >= 0.0) or not math.isfinite(lam):
        raise DomainError(f"lam must be finite and >= 0, got {lam!r}")


def log_upper_inc_gamma_reg(alpha, lam):
    """log Q(alpha, lam), finite even where Q itself underflows."""
    _check_gamma_args(alpha, lam)
    if lam == 0.0:
        return 0.0
    log_pref = -lam + alpha * math.log(lam) - math.lgamma(alpha)
    if lam < alpha + 1.0:
        p = math.exp(log_pref) * _lower_series(alpha, lam)
        return math.log1p(-p)
    return log_pref + math.log(_upper_cf(alpha, lam))


def upper_inc_gamma_reg(alpha, lam):
    """Regularized upper incomplete gamma Q(alpha, lam) = Gamma(alpha, lam) / Gamma(alpha)."""
    _check_gamma_args(alpha, lam)
    if lam == 0.0:
        return 1.0
    log_pref = -lam + alpha * math.log(lam) - math.lgamma(alpha)
    if lam < alpha + 1.0:
        return 1.0 - math.exp(log_pref) * _lower_series(alpha, lam)
    return math.exp(log_pref) * _upper_cf(alpha, lam)


def upper_inc_gamma(alpha, lam):
    """Upper incomplete gamma function, integral of t**(alpha-1) e**-t over [lam, inf).

    Uses the lower series for ``lam < alpha + 1`` and a continued fraction
    otherwise.
    """
    _check_gamma_args(alpha, lam)
    if lam == 0.0:
        return math.gamma(alpha) if alpha < 171.0 else math.exp(math.lgamma(alpha))
    if lam < alpha + 1.0:
        q = upper_inc_gamma_reg(alpha, lam)
        if alpha < 171.0:
            return q * math.gamma(alpha)
        return math.exp(math.log(q) + math.lgamma(alpha))
    return math.exp(-lam + alpha * math.log(lam)) * _upper_cf(alpha, lam)


def inc_gamma_integer(k, lam):
    """Gamma(k, lam) / Gamma(k) = e**-lam * sum_{h<k} lam**h / h! for integer k.

    ``k = 0`` is allowed when ``lam > 0`` and gives 0.
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if not (lam >= 0.0) or not math.isfinite(lam):
        raise DomainError(f"lam must be finite and >= 0, got {lam!r}")
    k = int(k)
    if k == 0:
        if lam == 0.0:
            raise DomainError("Gamma(0, 0) diverges")
        return 0.0
    if lam == 0.0:
        return 1.0
    if lam < 700.0:
        term = math.exp(-lam)
        total = term
        for h in range(1, k):
            term *= lam / h
            total += term
        return total
    # e**-lam underflows: accumulate in log space around the largest term
    log_lam = math.log(lam)
    logs = [h * log_lam - math.lgamma(h + 1.0) for h in range(k)]
    top = max(logs)
    return math.exp(-lam + top + math.log(math.fsum(math.exp(v - top) for v in logs)))


def inc_gamma_half_integer(k, lam):
    """Gamma(k + 1/2, lam) / Gamma(k + 1/2) for integer k >= 0.

    Finite sum e**-lam * sum_{h<k} lam**(h+1/2) / Gamma(h+3/2) plus the
    Gaussian tail 2 * (1 - Phi(sqrt(2 lam))).
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if not (lam >= 0.0) or not math.isfinite(lam):
        raise DomainError(f"lam must be finite and >= 0, got {lam!r}")
    k = int(k)
    tail = 2.0 * gauss_sf(math.sqrt(2.0 * lam))
    if k == 0 or lam == 0.0:
        return tail
    if lam < 700.0:
        # lam**(h+1/2)/Gamma(h+3/2), stepped by lam/(h+1/2)
        term = math.exp(-lam) * math.sqrt(lam) / (0.5 * SQRT_PI)
        total = term
        for h in range(1, k):
            term *= lam / (h + 0.5)
            total += term
        return total + tail
    log_lam = math.log(lam)
    logs = [(h + 0.5) * log_lam - math.log(gamma_half_integer(h + 1)) for h in range(k)]
    top = max(logs)
    finite_part = math.exp(-lam + top + math.log(math.fsum(math.exp(v - top) for v in logs)))
    return finite_part + tail


# -- incomplete beta --------------------------------------------------------


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta I_x(a, b)."""
    if not (a > 0.0 and b > 0.0) or not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"beta parameters must be finite and > 0, got a={a!r}, b={b!r}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    return float(special.betainc(a, b, x))


def log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
