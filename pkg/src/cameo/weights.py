"""Vertex weight distributions on [1, inf) and the quantities derived from them.

Three concrete densities are provided, one power law and two that decay
faster than any polynomial:

* ``powerlaw``      phi(w) = (gamma - 1) * w**-gamma
* ``exponential``   phi(w) = rate * exp(-rate * (w - 1))
* ``gaussiantail``  phi(w) = 2 / (scale * sqrt(pi)) * exp(-((w - 1) / scale)**2)

A vertex with weight ``w`` has visibility ``y = phi(w)**-alpha``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, special

from cameo import _random
from cameo.exceptions import DomainError

POWERLAW = "powerlaw"
EXPONENTIAL = "exponential"
GAUSSIANTAIL = "gaussiantail"

_PARAM_NAMES = {POWERLAW: "gamma", EXPONENTIAL: "rate", GAUSSIANTAIL: "scale"}

QUAD_EPSABS = 1e-10
QUAD_LIMIT = 500


@dataclass(frozen=True)
class WeightDistribution:
    """A probability density supported on [1, inf).

    Use the constructors :meth:`power_law`, :meth:`exponential`,
    :meth:`gaussian_tail` or :meth:`parse` rather than the raw fields.
    """

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in _PARAM_NAMES:
            raise DomainError(f"unknown weight distribution kind {self.kind!r}")
        if not math.isfinite(self.param):
            raise DomainError(f"{_PARAM_NAMES[self.kind]} must be finite")
        if self.kind == POWERLAW and self.param <= 1:
            raise DomainError("power law needs gamma > 1")
        if self.kind != POWERLAW and self.param <= 0:
            raise DomainError(f"{_PARAM_NAMES[self.kind]} must be positive")
        object.__setattr__(self, "param", float(self.param))

    @classmethod
    def power_law(cls, gamma):
        return cls(POWERLAW, gamma)

    @classmethod
    def exponential(cls, rate=1.0):
        return cls(EXPONENTIAL, rate)

    @classmethod
    def gaussian_tail(cls, scale=1.0):
        return cls(GAUSSIANTAIL, scale)

    @classmethod
    def parse(cls, text):
        """Parse ``kind:name=value``, e.g. ``powerlaw:gamma=3.0``."""
        kind, sep, rest = text.strip().partition(":")
        kind = kind.strip().lower()
        if kind not in _PARAM_NAMES:
            raise DomainError(f"unknown weight distribution {text!r}")
        if not sep:
            raise DomainError(f"missing parameter in {text!r}, expected {kind}:{_PARAM_NAMES[kind]}=<value>")
        name, eq, value = rest.partition("=")
        if not eq or name.strip() != _PARAM_NAMES[kind]:
            raise DomainError(f"expected {kind}:{_PARAM_NAMES[kind]}=<value>, got {text!r}")
        try:
            param = float(value)
        except ValueError:
            raise DomainError(f"bad number in {text!r}") from None
        return cls(kind, param)

    def __str__(self):
        return f"{self.kind}:{_PARAM_NAMES[self.kind]}={self.param!r}"

    @property
    def gamma(self):
        return self.param if self.kind == POWERLAW else None

    @property
    def fast_decay(self):
        """True when the density decays faster than any power law."""
        return self.kind != POWERLAW

    def has_finite_moment(self, alpha):
        """Whether ``integral phi**(1 - alpha)`` over [1, inf) is finite."""
        if self.kind == POWERLAW:
            return self.param * (1.0 - alpha) > 1.0
        return alpha < 1.0

    # -- pointwise functions; all accept scalars or arrays ------------------

    def logpdf(self, omega):
        w = np.asarray(omega, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind == POWERLAW:
                out = math.log(self.param - 1.0) - self.param * np.log(w)
            elif self.kind == EXPONENTIAL:
                out = math.log(self.param) - self.param * (w - 1.0)
            else:
                s = self.param
                out = math.log(2.0 / (s * math.sqrt(math.pi))) - ((w - 1.0) / s) ** 2
        out = np.where(w >= 1.0, out, -np.inf)
        return out[()] if out.ndim == 0 else out

    def pdf(self, omega):
        return np.exp(self.logpdf(omega))

    def cdf(self, omega):
        w = np.asarray(omega, dtype=float)
        x = np.maximum(w, 1.0)
        if self.kind == POWERLAW:
            out = -np.expm1((1.0 - self.param) * np.log(x))
        elif self.kind == EXPONENTIAL:
            out = -np.expm1(-self.param * (x - 1.0))
        else:
            out = special.erf((x - 1.0) / self.param)
        out = np.where(w >= 1.0, out, 0.0)
        return out[()] if out.ndim == 0 else out

    def sf(self, omega):
        w = np.asarray(omega, dtype=float)
        x = np.maximum(w, 1.0)
        if self.kind == POWERLAW:
            out = x ** (1.0 - self.param)
        elif self.kind == EXPONENTIAL:
            out = np.exp(-self.param * (x - 1.0))
        else:
            out = special.erfc((x - 1.0) / self.param)
        out = np.where(w >= 1.0, out, 1.0)
        return out[()] if out.ndim == 0 else out

    def ppf(self, u):
        """Inverse CDF on [0, 1); raises :class:`DomainError` outside."""
        p = np.asarray(u, dtype=float)
        if not np.all((p >= 0.0) & (p < 1.0)):
            raise DomainError("quantile level must lie in [0, 1)")
        if self.kind == POWERLAW:
            out = np.exp(-np.log1p(-p) / (self.param - 1.0))
        elif self.kind == EXPONENTIAL:
            out = 1.0 - np.log1p(-p) / self.param
        else:
            out = 1.0 + self.param * special.erfinv(p)
        return out[()] if out.ndim == 0 else out

    def neg_log_derivative(self, omega):
        """``-phi / phi'`` in closed form."""
        w = np.asarray(omega, dtype=float)
        with np.errstate(divide="ignore"):
            if self.kind == POWERLAW:
                out = w / self.param
            elif self.kind == EXPONENTIAL:
                out = np.full_like(w, 1.0 / self.param)
            else:
                out = self.param**2 / (2.0 * (w - 1.0))
        return out[()] if out.ndim == 0 else out


def parse_distribution(text):
    return WeightDistribution.parse(text)


def density(dist, omega):
    """phi(omega); zero below the support."""
    return dist.pdf(omega)


def quantile(dist, u):
    """F^{-1}(u) for u in [0, 1)."""
    return dist.ppf(u)


@dataclass(frozen=True, eq=False)
class WeightSample:
    """n i.i.d. weights together with their visibilities ``y = phi**-alpha``.

    ``normalizer`` is the sum of the visibilities.  The arrays are read-only.
    """

    omegas: np.ndarray
    ys: np.ndarray
    alpha: float
    dist: Optional[WeightDistribution] = None
    seed: Optional[int] = None
    normalizer: float = field(init=False)

    def __post_init__(self):
        omegas = np.array(self.omegas, dtype=float)
        ys = np.array(self.ys, dtype=float)
        if omegas.ndim != 1 or omegas.shape != ys.shape:
            raise DomainError("omegas and ys must be 1-d arrays of equal length")
        if omegas.size == 0:
            raise DomainError("a weight sample needs at least one vertex")
        if np.any(omegas < 1.0):
            raise DomainError("weights must be >= 1")
        omegas.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "normalizer", float(np.sum(ys)))

    @property
    def n(self):
        return self.omegas.size

    @classmethod
    def from_omegas(cls, dist, omegas, alpha, seed=None):
        omegas = np.asarray(omegas, dtype=float)
        ys = np.exp(-alpha * dist.logpdf(omegas))
        return cls(omegas, ys, float(alpha), dist, seed)

    def __eq__(self, other):
        if not isinstance(other, WeightSample):
            return NotImplemented
        return (
            self.alpha == other.alpha
            and self.dist == other.dist
            and self.seed == other.seed
            and np.array_equal(self.omegas, other.omegas)
            and np.array_equal(self.ys, other.ys)
        )

    __hash__ = None


def sample_weights(dist, n, alpha, seed):
    """Draw ``n`` weights by inverse-CDF sampling from the seeded weight stream."""
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = _random.stream(seed, _random.WEIGHTS)
    u = rng.random(int(n))
    return WeightSample.from_omegas(dist, dist.ppf(u), alpha, seed=int(seed))


def write_weights_csv(sample, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "omega", "y"])
        for i, (w, y) in enumerate(zip(sample.omegas.tolist(), sample.ys.tolist())):
            writer.writerow([i, repr(w), repr(y)])


def read_weights_csv(path, alpha, dist=None, seed=None):
    """Load a sample written by :func:`write_weights_csv`.

    Visibilities are taken from the file, not recomputed.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["index", "omega", "y"]:
            raise DomainError(f"{path}: expected header index,omega,y")
        rows = sorted(((int(r["index"]), float(r["omega"]), float(r["y"])) for r in reader))
    if [r[0] for r in rows] != list(range(len(rows))):
        raise DomainError(f"{path}: indices must be 0..n-1")
    return WeightSample(
        np.array([r[1] for r in rows]), np.array([r[2] for r in rows]), float(alpha), dist, seed
    )


# -- analytic moments ----------------------------------------------------------


def _integrate(func, lower, upper):
    value, _ = integrate.quad(
        func, lower, upper, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSABS, limit=QUAD_LIMIT
    )
    return value


def moment_A(dist, alpha):
    """``A(alpha) = integral_1^inf phi**(1 - alpha)``; ``math.inf`` when divergent.

    Divergence is decided from the tail exponent, never numerically.
    """
    if not dist.has_finite_moment(alpha):
        return math.inf
    e = 1.0 - alpha
    return _integrate(lambda w: math.exp(e * float(dist.logpdf(w))), 1.0, math.inf)


def truncated_moment(dist, beta, n):
    """Integral of ``phi**(1 - beta)`` from 1 up to the ``1 - 1/n`` quantile."""
    if n < 2:
        raise DomainError("truncated moment needs n >= 2")
    upper = float(dist.ppf(1.0 - 1.0 / n))
    e = 1.0 - beta
    f = lambda w: math.exp(e * float(dist.logpdf(w)))  # noqa: E731
    if e >= 0:
        return _integrate(f, 1.0, upper)
    # growing integrand: integrate in log space of w so the mass near the
    # upper end is resolved
    g = lambda t: f(math.exp(t)) * math.exp(t)  # noqa: E731
    value, _ = integrate.quad(g, 0.0, math.log(upper), epsabs=0.0, epsrel=1e-10, limit=QUAD_LIMIT)
    return value


def expected_max_weight(dist, n):
    """Typical size of the largest of ``n`` weights, ``F^{-1}(1 - 1/n)``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    return float(dist.ppf(1.0 - 1.0 / n))


def induced_tail_exponent(dist, beta):
    """Asymptotic density exponent theta of ``y = phi(w)**-beta``, psi(y) ~ y**-theta."""
    if beta <= 0:
        raise DomainError("beta must be positive")
    if dist.fast_decay:
        return 1.0 + 1.0 / beta
    return 1.0 + 1.0 / beta - 1.0 / (beta * dist.param)


def regularity_exponent(dist, omega_grid):
    """``log(-phi/phi') / log(phi)`` on a grid of weights.

    Tends to zero for fast-decaying densities; for the power law it
    approaches ``-1/gamma`` instead.  Points where both logarithms vanish
    give 0, points where only the denominator vanishes give nan.
    """
    w = np.asarray(omega_grid, dtype=float)
    if np.any(w < 1.0):
        raise DomainError("grid values must be >= 1")
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.log(dist.neg_log_derivative(w))
        den = np.asarray(dist.logpdf(w), dtype=float)
        out = np.where(num == 0.0, 0.0, num / den)
        out = np.where((den == 0.0) & (num != 0.0), np.nan, out)
    return out


def hill_tail_exponent(values, top_fraction=0.01):
    """Hill estimate of the density exponent ``1 + a`` where P(Y > y) ~ y**-a.

    Uses the largest ``top_fraction`` of the order statistics.
    """
    x = np.sort(np.asarray(values, dtype=float))
    k = max(int(top_fraction * x.size), 2)
    if k >= x.size:
        raise DomainError("not enough values for the Hill estimator")
    top = np.log(x[-k:])
    threshold = math.log(x[-k - 1])
    return 1.0 + k / float(np.sum(top - threshold))
