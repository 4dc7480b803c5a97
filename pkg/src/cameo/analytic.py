"""Closed-form path combinatorics and path-connectivity thresholds.

Expanding ``prod_{l=0}^{L} (y_{x_l} + y_{x_{l+1}})`` gives ``2**(L+1)``
monomials.  ``C_m`` counts those in which exactly ``m`` of the ``L``
interior variables ``x_1..x_L`` appear squared.  The counts follow a
two-variable transfer recursion

    X_m' = X_m + Y_{m-1},    Y_m' = X_m + Y_m,    C_m = X_m + Y_m,

started from ``X = (1, 1)``, ``Y = (2,)`` at word length 1.  Its generating
functions have transfer matrix ``[[1, z], [1, 1]]`` with eigenvalues
``1 +- sqrt(z)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from cameo.exceptions import BudgetExceeded, DomainError
from cameo.weights import moment_A

HIGH_ALPHA = "HighAlpha"
LOW_ALPHA = "LowAlpha"
SUBCRITICAL = "Subcritical"

BRUTEFORCE_MAX_L = 20


@dataclass(frozen=True)
class PathCoefficients:
    L: int
    coeffs: tuple

    @property
    def total(self):
        return sum(self.coeffs)

    def polynomial(self, z):
        """``sum_m C_m z**m`` (exact for integer or Fraction ``z``)."""
        out = 0
        for c in reversed(self.coeffs):
            out = out * z + c
        return out


def path_coefficients(L):
    """Square-count coefficients for word length ``L`` (``L + 1`` binomials)."""
    if L < 1:
        raise DomainError("word length L must be >= 1")
    x = [1, 1]
    y = [2]
    for _ in range(L - 1):
        size = max(len(x), len(y) + 1)
        nx = [0] * size
        ny = [0] * size
        for m in range(size):
            xm = x[m] if m < len(x) else 0
            ym = y[m] if m < len(y) else 0
            ym1 = y[m - 1] if 0 < m <= len(y) else 0
            nx[m] = xm + ym1
            ny[m] = xm + ym
        x, y = nx, ny
    size = L // 2 + L % 2 + 1
    coeffs = [(x[m] if m < len(x) else 0) + (y[m] if m < len(y) else 0) for m in range(size)]
    return PathCoefficients(L, tuple(coeffs))


def coefficients_bruteforce(L):
    """Expand the product term by term and count squared interior variables."""
    if L < 1:
        raise DomainError("word length L must be >= 1")
    if L > BRUTEFORCE_MAX_L:
        raise BudgetExceeded(f"brute-force expansion limited to L <= {BRUTEFORCE_MAX_L}")
    counts = [0] * (L // 2 + L % 2 + 1)
    # choice[l] == 0 picks y_{x_l} from binomial l, 1 picks y_{x_{l+1}}
    for choice in itertools.product((0, 1), repeat=L + 1):
        exps = [0] * (L + 2)
        for l, right in enumerate(choice):
            exps[l + right] += 1
        counts[sum(1 for e in exps[1:-1] if e == 2)] += 1
    return PathCoefficients(L, tuple(counts))


def generating_function(L, z):
    """``(f_X, f_Y)`` at word length ``L``; ``f_X + f_Y = sum_m C_m z**m``."""
    if L < 1:
        raise DomainError("word length L must be >= 1")
    if z < 0:
        raise DomainError("z must be non-negative")
    p = L - 1
    if z == 0:
        return 1.0, float(L + 1)
    r = math.sqrt(z)
    l1 = 1.0 + r
    l2 = 1.0 - r
    a1 = l1**p
    a2 = l2**p
    fx = (0.5 * (1.0 + z) + r) * a1 + (0.5 * (1.0 + z) - r) * a2
    fy = (1.0 + 0.5 / r + 0.5 * r) * a1 + (1.0 - 0.5 / r - 0.5 * r) * a2
    return fx, fy


def transfer_power(L, z):
    """Same quantity as :func:`generating_function`, by iterating the 2x2 matrix."""
    if L < 1:
        raise DomainError("word length L must be >= 1")
    m = np.array([[1.0, z], [1.0, 1.0]])
    v = np.linalg.matrix_power(m, L - 1) @ np.array([1.0 + z, 2.0])
    return float(v[0]), float(v[1])


def s_value(k, A, A2):
    """``sum_m C_m A2**m A**(k-2m)`` for a product of ``k`` binomials."""
    if k < 2:
        raise DomainError("k must be >= 2")
    if not (A > 0 and A2 > 0):
        raise DomainError("A and A2 must be positive")
    fx, fy = generating_function(k - 1, A2 / A**2)
    return A**k * (fx + fy)


def s_growth_limit(A, A2):
    """Limit of ``s_value(k + 1) / s_value(k)``."""
    return A + math.sqrt(A2)


def expected_gamma_walks(sample, c, k, i, j):
    """Expected number of length-``k`` walks from ``i`` to ``j``.

    Uses the unclamped edge probabilities and lets interior vertices repeat,
    which bounds the simple-path expectation from above.  The kernel after
    ``l`` steps lies in span{1, y}; its coordinates evolve as
    ``(u, v) -> (S1 u + S2 v, n u + S1 v)``.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if i == j:
        raise DomainError("endpoints must differ")
    ys = sample.ys
    n = sample.n
    if not (0 <= i < n and 0 <= j < n):
        raise DomainError("vertex index out of range")
    scale = c / sample.normalizer
    s1 = sample.normalizer
    s2 = float(math.fsum(ys * ys))
    u = scale * ys[i]
    v = scale
    for _ in range(k - 1):
        u, v = scale * (s1 * u + s2 * v), scale * (n * u + s1 * v)
    return float(u + v * ys[j])


@dataclass(frozen=True)
class ThresholdPrediction:
    """Where the expected number of k-paths jumps from ~0 to >> 1.

    ``HighAlpha``: the jump sits at the constant ``k_c_constant = 2 / delta``.
    ``LowAlpha``: it sits at ``k_c_logslope * ln(n)`` with ``k_c_logslope = 1 / ln B``.
    ``Subcritical``: ``B <= 1``, path counts vanish for every k.
    Divergent moments are reported as ``math.inf``.
    """

    regime: str
    c: float
    alpha: float
    A: float
    A2: float
    delta: Optional[float] = None
    B: Optional[float] = None
    k_c_constant: Optional[float] = None
    k_c_logslope: Optional[float] = None

    def k_c(self, n):
        """Predicted jump value for a graph on ``n`` vertices (None when subcritical)."""
        if self.regime == HIGH_ALPHA:
            return self.k_c_constant
        if self.regime == LOW_ALPHA:
            return self.k_c_logslope * math.log(n)
        return None

    def as_dict(self):
        return {
            "regime": self.regime,
            "A": self.A,
            "A2": self.A2,
            "delta": self.delta,
            "B": self.B,
            "k_c": self.k_c_constant if self.regime == HIGH_ALPHA else self.k_c_logslope,
        }


def high_alpha_delta(dist, alpha):
    """Growth exponent of the truncated second moment at ``beta = 2 alpha``."""
    if dist.fast_decay:
        return 2.0 * alpha - 1.0
    g = dist.param
    return g / (g - 1.0) * (2.0 * alpha - 1.0 + 1.0 / g)


def predict_threshold(dist, c, alpha):
    if not c > 0:
        raise DomainError("c must be positive")
    if alpha == 0.5:
        raise DomainError("alpha = 1/2 is a boundary case with no prediction")
    if not 0.0 <= alpha < 1.0:
        raise DomainError("alpha must lie in [0, 1)")
    A = moment_A(dist, alpha)
    A2 = moment_A(dist, 2.0 * alpha)
    if alpha > 0.5:
        delta = high_alpha_delta(dist, alpha)
        return ThresholdPrediction(HIGH_ALPHA, c, alpha, A, A2, delta=delta, k_c_constant=2.0 / delta)
    B = c * (1.0 + math.sqrt(A2) / A)
    if B <= 1.0:
        return ThresholdPrediction(SUBCRITICAL, c, alpha, A, A2, B=B)
    slope = 0.0 if math.isinf(B) else 1.0 / math.log(B)
    return ThresholdPrediction(LOW_ALPHA, c, alpha, A, A2, B=B, k_c_logslope=slope)


def high_alpha_bounds(prediction, n, k):
    """Lower and upper bounds on the expected k-path count in the high-alpha regime.

    Both share the factor ``(c/A)**k * n**(delta * floor(k/2) - 1)``; the
    upper bound carries an extra ``(2A)**k``.
    """
    if prediction.regime != HIGH_ALPHA:
        raise DomainError("bounds apply to the high-alpha regime only")
    A = prediction.A
    base = (prediction.c / A) ** k * n ** (prediction.delta * (k // 2) - 1.0)
    return base, base * (2.0 * A) ** k
