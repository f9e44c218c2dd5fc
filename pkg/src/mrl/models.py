"""Lifetime models: density, survival, hazard, cumulative hazard.

Eight families are supported. Each is an immutable :class:`HazardModel`
subclass built from a :class:`ModelSpec`, which in turn is usually parsed
from a string such as ``"chen(lambda=1, beta=0.5)"``.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from . import specfun
from .errors import CapabilityError, DomainError, SpecParseError, SurvivalUnderflowError

INF = math.inf

FAMILY_PARAMS = {
    "exponential": ("rate",),
    "linear": ("alpha", "beta"),
    "chen": ("lambda", "beta"),
    "gamma": ("mu", "B"),
    "normal": ("mu", "sigma"),
    "maxwell": ("b",),
    "beta1": ("a", "b"),
    "beta2": ("alpha", "beta", "gamma"),
}


def _positive(name):
    return name, (lambda v: v > 0.0), f"{name} must be > 0"


def _nonnegative(name):
    return name, (lambda v: v >= 0.0), f"{name} must be >= 0"


_CONSTRAINTS = {
    "exponential": [_positive("rate")],
    "linear": [_nonnegative("alpha"), _positive("beta")],
    "chen": [_positive("lambda"), _positive("beta")],
    "gamma": [_positive("mu"), _positive("B")],
    "normal": [_positive("sigma")],
    "maxwell": [_positive("b")],
    "beta1": [_positive("a"), _positive("b")],
    "beta2": [_positive("alpha"), _positive("beta"), _positive("gamma")],
}


@dataclass(frozen=True)
class ModelSpec:
    """Family name plus parameter values, in the family's canonical order."""

    family: str
    params: tuple[tuple[str, float], ...]

    def __getitem__(self, name):
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    def as_dict(self):
        return dict(self.params)

    def render(self):
        inner = ",".join(f"{k}={v!r}" for k, v in self.params)
        return f"{self.family}({inner})"

    def __str__(self):
        return self.render()

    @classmethod
    def create(cls, family, **params):
        """Build and validate a spec from keyword arguments."""
        if family not in FAMILY_PARAMS:
            raise SpecParseError(f"unknown family {family!r}")
        expected = FAMILY_PARAMS[family]
        missing = [p for p in expected if p not in params]
        extra = [p for p in params if p not in expected]
        if missing:
            raise SpecParseError(f"missing parameter {missing[0]!r} for {family}")
        if extra:
            raise SpecParseError(f"unexpected parameter {extra[0]!r} for {family}")
        spec = cls(family, tuple((p, float(params[p])) for p in expected))
        _validate(spec)
        return spec


def _validate(spec, text="", positions=None):
    positions = positions or {}
    for name, value in spec.params:
        if not math.isfinite(value):
            raise SpecParseError(f"{name} must be finite", text, positions.get(name))
    for name, ok, message in _CONSTRAINTS[spec.family]:
        if not ok(spec[name]):
            raise SpecParseError(message, text, positions.get(name))


_TOKEN = re.compile(
    r"\s*(?:(?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[(),=]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise SpecParseError(f"unexpected character {text[pos + stripped]!r}", text, pos + stripped)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_model_spec(text):
    """Parse ``family(name=number, ...)`` into a validated :class:`ModelSpec`.

    Whitespace is ignored; names are case-sensitive. Errors carry the
    character position of the offending token.
    """
    tokens = _tokenize(text)
    i = 0

    def expect(kind, value=None):
        nonlocal i
        tk, tv, tp = tokens[i]
        if tk != kind or (value is not None and tv != value):
            want = repr(value) if value is not None else kind
            got = repr(tv) if tk != "end" else "end of input"
            raise SpecParseError(f"expected {want}, got {got}", text, tp)
        i += 1
        return tv, tp

    family, fpos = expect("name")
    if family not in FAMILY_PARAMS:
        raise SpecParseError(f"unknown family {family!r}", text, fpos)
    expect("punct", "(")
    values = {}
    positions = {}
    while True:
        name, npos = expect("name")
        if name not in FAMILY_PARAMS[family]:
            raise SpecParseError(f"unexpected parameter {name!r} for {family}", text, npos)
        if name in values:
            raise SpecParseError(f"duplicate parameter {name!r}", text, npos)
        expect("punct", "=")
        number, _ = expect("number")
        values[name] = float(number)
        positions[name] = npos
        tk, tv, tp = tokens[i]
        if tk == "punct" and tv == ",":
            i += 1
            continue
        expect("punct", ")")
        break
    expect("end")
    missing = [p for p in FAMILY_PARAMS[family] if p not in values]
    if missing:
        raise SpecParseError(f"missing parameter {missing[0]!r} for {family}", text, len(text))
    spec = ModelSpec(family, tuple((p, values[p]) for p in FAMILY_PARAMS[family]))
    _validate(spec, text, positions)
    return spec


# -- exact derivative machinery for hazards of the form sum c t^s e^{t^beta} --


@dataclass(frozen=True)
class ExpPolyTermSum:
    """``sum_i c_i * t**s_i * exp(t**beta)`` with exact (rational) coefficients and powers.

    Differentiation maps each term (c, s) to (c*s, s-1) and (c*beta, s+beta-1);
    like powers are merged, so the j-th derivative has at most j+1 terms.
    """

    beta_exponent: Fraction
    terms: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def single(cls, beta, coef, power):
        return cls(Fraction(beta), ((Fraction(coef), Fraction(power)),))

    def derivative(self):
        beta = self.beta_exponent
        merged = {}
        for c, s in self.terms:
            for nc, ns in ((c * s, s - 1), (c * beta, s + beta - 1)):
                if nc != 0:
                    merged[ns] = merged.get(ns, 0) + nc
        terms = tuple((c, s) for s, c in sorted(merged.items()) if c != 0)
        return ExpPolyTermSum(beta, terms)

    def __call__(self, t):
        if not self.terms:
            return 0.0
        poly = math.fsum(float(c) * t ** float(s) for c, s in self.terms)
        return poly * math.exp(t ** float(self.beta_exponent))


@functools.lru_cache(maxsize=None)
def _chen_unit_derivative(beta, j):
    """j-th derivative of beta * t**(beta-1) * exp(t**beta), as an ExpPolyTermSum."""
    if j == 0:
        return ExpPolyTermSum.single(beta, beta, Fraction(beta) - 1)
    return _chen_unit_derivative(beta, j - 1).derivative()


# -- models ------------------------------------------------------------------


class HazardModel:
    """Base class. Subclasses set ``support`` and implement the family formulas.

    Instances are immutable after construction and safe to share.
    """

    family = ""
    support = (0.0, INF)
    # lower end included (t = lo is a valid point) unless stated otherwise
    support_closed_below = True
    derivative_order = 0
    has_family_data = False

    def __init__(self, spec):
        if spec.family != self.family:
            raise DomainError(f"spec family {spec.family!r} does not match {self.family!r}")
        self.spec = spec

    def __repr__(self):
        return f"{type(self).__name__}({self.spec.render()!r})"

    def __eq__(self, other):
        return type(self) is type(other) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    # support handling

    def in_support(self, t):
        lo, hi = self.support
        if not math.isfinite(t):
            return False
        if self.support_closed_below:
            return lo <= t < hi
        return lo < t < hi

    def in_interior(self, t):
        lo, hi = self.support
        return math.isfinite(t) and lo < t < hi

    def check_support(self, t):
        if not self.in_support(t):
            lo, hi = self.support
            raise DomainError(f"t={t!r} outside the support [{lo}, {hi}) of {self.spec.render()}")

    # evaluation

    def pdf(self, t):
        self.check_support(t)
        return self._pdf(t)

    def sf(self, t):
        """Survival probability; 1 below the support and 0 above it."""
        lo, hi = self.support
        if t < lo or (t == lo and not self.support_closed_below):
            return 1.0
        if t >= hi:
            return 0.0
        return self._sf(t)

    def cum_hazard(self, t):
        """R(t) = -log sf(t). May return ``inf`` where sf is exactly zero."""
        self.check_support(t)
        return self._cum_hazard(t)

    def hazard(self, t):
        self.check_support(t)
        return self._hazard(t)

    def cum_hazard_increment(self, t, x):
        """R(t + x) - R(t) for x >= 0, without cancelling two large values where possible."""
        self.check_support(t)
        if x == 0.0:
            return 0.0
        u = t + x
        if u >= self.support[1]:
            return INF
        return self._cum_hazard_increment(t, x)

    def hazard_derivative(self, j, t):
        """j-th derivative of the hazard; j = 0 is the hazard itself."""
        if j < 0:
            raise DomainError(f"derivative order must be >= 0, got {j}")
        if j == 0:
            return self.hazard(t)
        if j > self.derivative_order:
            raise CapabilityError(
                f"{self.family} model provides no analytic hazard derivative of order {j}"
            )
        self.check_support(t)
        return self._hazard_derivative(j, t)

    def hazard_derivatives(self, t, jmax):
        """[r(t), r'(t), ..., r^(jmax)(t)]."""
        return [self.hazard_derivative(j, t) for j in range(jmax + 1)]

    def family_data(self, t):
        """(mu, g(t)) for which E(X | X > t) = mu + g(t) * r(t)."""
        raise CapabilityError(f"{self.family} model has no (mu, g) family representation")

    # defaults built on pdf/sf; subclasses override where a closed form is better

    def _cum_hazard(self, t):
        s = self._sf(t)
        if s == 0.0:
            return INF
        return -math.log(s)

    def _hazard(self, t):
        s = self._sf(t)
        if s == 0.0:
            raise SurvivalUnderflowError(
                f"survival underflow at t={t!r} for {self.spec.render()}; use the cumulative hazard"
            )
        return self._pdf(t) / s

    def _cum_hazard_increment(self, t, x):
        return self._cum_hazard(t + x) - self._cum_hazard(t)

    def _hazard_derivative(self, j, t):
        raise NotImplementedError


class Exponential(HazardModel):
    family = "exponential"

    def __init__(self, spec):
        super().__init__(spec)
        self.rate = spec["rate"]

    def _pdf(self, t):
        return self.rate * math.exp(-self.rate * t)

    def _sf(self, t):
        return math.exp(-self.rate * t)

    def _cum_hazard(self, t):
        return self.rate * t

    def _hazard(self, t):
        return self.rate

    def _cum_hazard_increment(self, t, x):
        return self.rate * x

    def mean(self):
        return 1.0 / self.rate


class LinearFailureRate(HazardModel):
    """Hazard alpha + beta * t."""

    family = "linear"
    derivative_order = INF

    def __init__(self, spec):
        super().__init__(spec)
        self.alpha = spec["alpha"]
        self.beta = spec["beta"]

    def _cum_hazard(self, t):
        return self.alpha * t + 0.5 * self.beta * t * t

    def _sf(self, t):
        return math.exp(-self._cum_hazard(t))

    def _hazard(self, t):
        return self.alpha + self.beta * t

    def _cum_hazard_increment(self, t, x):
        return x * (self.alpha + self.beta * (t + 0.5 * x))

    def _pdf(self, t):
        return self._hazard(t) * self._sf(t)

    def _hazard_derivative(self, j, t):
        return self.beta if j == 1 else 0.0


class Chen(HazardModel):
    """Chen's two-parameter model, hazard lambda * beta * t**(beta-1) * exp(t**beta)."""

    family = "chen"
    derivative_order = INF

    def __init__(self, spec):
        super().__init__(spec)
        self.lam = spec["lambda"]
        self.beta = spec["beta"]

    def _cum_hazard(self, t):
        return self.lam * math.expm1(t**self.beta)

    def _sf(self, t):
        return math.exp(-self._cum_hazard(t))

    def _cum_hazard_increment(self, t, x):
        if t == 0.0:
            return self._cum_hazard(x)
        # (t+x)^beta - t^beta and e^{t^beta} (e^d - 1), both free of cancellation
        tb = t**self.beta
        d = tb * math.expm1(self.beta * math.log1p(x / t))
        if d > 745.0:
            return INF
        log_inc = math.log(self.lam) + tb + math.log(math.expm1(d))
        return math.exp(log_inc) if log_inc < 709.0 else INF

    def _hazard(self, t):
        if t == 0.0:
            if self.beta < 1.0:
                raise DomainError("chen hazard is unbounded at t=0 for beta < 1")
            return self.lam if self.beta == 1.0 else 0.0
        return self.lam * self.beta * t ** (self.beta - 1.0) * math.exp(t**self.beta)

    def _pdf(self, t):
        return self._hazard(t) * self._sf(t)

    def derivative_terms(self, j):
        """Exact term list of r^(j) / lambda."""
        return _chen_unit_derivative(Fraction(self.beta), j)

    def _hazard_derivative(self, j, t):
        if t <= 0.0:
            raise DomainError("chen hazard derivatives require t > 0")
        return self.lam * self.derivative_terms(j)(t)

    def increasing_from(self):
        """Smallest t beyond which the hazard is strictly increasing."""
        if self.beta >= 1.0:
            return 0.0
        return ((1.0 - self.beta) / self.beta) ** (1.0 / self.beta)


class Gamma(HazardModel):
    """Gamma with mean mu and scale B (shape mu/B)."""

    family = "gamma"
    has_family_data = True

    def __init__(self, spec):
        super().__init__(spec)
        self.mu = spec["mu"]
        self.scale = spec["B"]
        self.shape = self.mu / self.scale

    def _log_pdf(self, t):
        k, B = self.shape, self.scale
        return (k - 1.0) * math.log(t) - t / B - math.lgamma(k) - k * math.log(B)

    def _pdf(self, t):
        if t == 0.0:
            return INF if self.shape < 1.0 else (1.0 / self.scale if self.shape == 1.0 else 0.0)
        return math.exp(self._log_pdf(t))

    def _sf(self, t):
        return specfun.upper_inc_gamma_reg(self.shape, t / self.scale)

    def _cum_hazard(self, t):
        return -specfun.log_upper_inc_gamma_reg(self.shape, t / self.scale)

    def _hazard(self, t):
        if t == 0.0:
            return self._pdf(t)
        s = self._sf(t)
        if s > 1e-280:
            return self._pdf(t) / s
        return math.exp(self._log_pdf(t) + self._cum_hazard(t))

    def family_data(self, t):
        self.check_support(t)
        return self.mu, self.scale * t


class Normal(HazardModel):
    family = "normal"
    support = (-INF, INF)
    has_family_data = True

    def __init__(self, spec):
        super().__init__(spec)
        self.mu = spec["mu"]
        self.sigma = spec["sigma"]

    def in_support(self, t):
        return math.isfinite(t)

    in_interior = in_support

    def _z(self, t):
        return (t - self.mu) / self.sigma

    def _pdf(self, t):
        return specfun.gauss_pdf(self._z(t)) / self.sigma

    def _sf(self, t):
        return specfun.gauss_sf(self._z(t))

    def _cum_hazard(self, t):
        z = self._z(t)
        if z <= 0.0:
            return -math.log1p(-specfun.gauss_cdf(z))
        return 0.5 * z * z - math.log(specfun.gauss_sf_scaled(z))

    def _hazard(self, t):
        z = self._z(t)
        if z < -37.0:
            # sf is 1 to double precision
            return self._pdf(t)
        return 1.0 / (self.sigma * specfun.SQRT_2PI * specfun.gauss_sf_scaled(z))

    def family_data(self, t):
        self.check_support(t)
        return self.mu, self.sigma**2


class Maxwell(HazardModel):
    family = "maxwell"
    has_family_data = True

    def __init__(self, spec):
        super().__init__(spec)
        self.b = spec["b"]

    def _pdf(self, t):
        b = self.b
        return 4.0 / (b**3 * specfun.SQRT_PI) * t * t * math.exp(-(t * t) / (b * b))

    def _sf(self, t):
        return specfun.upper_inc_gamma_reg(1.5, (t / self.b) ** 2)

    def _cum_hazard(self, t):
        return -specfun.log_upper_inc_gamma_reg(1.5, (t / self.b) ** 2)

    def _hazard(self, t):
        if t == 0.0:
            return 0.0
        s = self._sf(t)
        if s > 1e-280:
            return self._pdf(t) / s
        y = (t / self.b) ** 2
        log_pdf = math.log(4.0 / (self.b**3 * specfun.SQRT_PI)) + 2.0 * math.log(t) - y
        return math.exp(log_pdf + self._cum_hazard(t))

    def family_data(self, t):
        self.check_support(t)
        if t == 0.0:
            raise DomainError("maxwell g(t) is singular at t=0")
        b2 = self.b**2
        return 0.0, (1.0 + b2 / (t * t)) * b2 / 2.0


class BetaFirstKind(HazardModel):
    family = "beta1"
    support = (0.0, 1.0)
    support_closed_below = False
    has_family_data = True

    def __init__(self, spec):
        super().__init__(spec)
        self.a = spec["a"]
        self.b = spec["b"]
        self._log_norm = -specfun.log_beta(self.a, self.b)

    def _pdf(self, t):
        return math.exp(
            self._log_norm + (self.a - 1.0) * math.log(t) + (self.b - 1.0) * math.log1p(-t)
        )

    def _sf(self, t):
        # 1 - I_t(a, b) written as I_{1-t}(b, a) to avoid cancellation
        return specfun.reg_inc_beta(self.b, self.a, 1.0 - t)

    def family_data(self, t):
        self.check_support(t)
        s = self.a + self.b
        return self.a / s, t * (1.0 - t) / s


class BetaSecondKind(HazardModel):
    """Density c x**(beta-1) / (gamma + x)**(alpha+beta) with c = gamma**alpha / B(alpha, beta)."""

    family = "beta2"
    has_family_data = True

    def __init__(self, spec):
        super().__init__(spec)
        self.alpha = spec["alpha"]
        self.beta = spec["beta"]
        self.gamma = spec["gamma"]
        self._log_c = self.alpha * math.log(self.gamma) - specfun.log_beta(self.alpha, self.beta)

    def _pdf(self, t):
        if t == 0.0:
            if self.beta < 1.0:
                return INF
            if self.beta > 1.0:
                return 0.0
        log_t = (self.beta - 1.0) * math.log(t) if t > 0.0 else 0.0
        return math.exp(self._log_c + log_t - (self.alpha + self.beta) * math.log(self.gamma + t))

    def _sf(self, t):
        # X/(gamma+X) ~ Beta(beta, alpha); survival = I_{gamma/(gamma+t)}(alpha, beta)
        return specfun.reg_inc_beta(self.alpha, self.beta, self.gamma / (self.gamma + t))

    def family_data(self, t):
        self.check_support(t)
        if self.alpha <= 1.0:
            raise DomainError(f"mean undefined for beta2 with alpha={self.alpha} <= 1")
        am1 = self.alpha - 1.0
        return self.beta * self.gamma / am1, (t * t + self.gamma * t) / am1


MODEL_CLASSES = {
    cls.family: cls
    for cls in (Exponential, LinearFailureRate, Chen, Gamma, Normal, Maxwell, BetaFirstKind, BetaSecondKind)
}


def build_model(spec):
    """HazardModel for a ModelSpec (or a spec string)."""
    if isinstance(spec, str):
        spec = parse_model_spec(spec)
    return MODEL_CLASSES[spec.family](spec)


def make_model(family, **params):
    return build_model(ModelSpec.create(family, **params))
