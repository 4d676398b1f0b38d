"""Value-at-Risk and Expected Shortfall of a law.

Sign convention: X is a profit-and-loss variable, so VaR_a(X) = -q_a(X) and
ES_a(X) = (1/a) * int_0^a VaR_u(X) du.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._numerics import gauss_legendre
from .dist import (
    AffineOf,
    Distribution,
    StandardNormal,
    StudentT,
    is_discrete,
    raw_t_density,
)
from .errors import DomainError, IntegrabilityError

ALPHA_MIN = 1e-6
ALPHA_MAX = 1.0 - 1e-6

ES_RTOL = 1e-10
_GL_POINTS = 64
_MAX_LEVELS = 256


class Measure(str, enum.Enum):
    VAR = "var"
    ES = "es"


@dataclass(frozen=True)
class RiskMeasureSpec:
    kind: Measure
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Measure(self.kind))
        check_alpha(self.alpha)

    def __call__(self, d: Distribution) -> float:
        return evaluate(self, d)


def check_alpha(alpha):
    if not (ALPHA_MIN < alpha < ALPHA_MAX):
        raise DomainError(f"alpha must lie in ({ALPHA_MIN}, {ALPHA_MAX}), got {alpha}")


def evaluate(spec: RiskMeasureSpec, d: Distribution) -> float:
    if spec.kind is Measure.VAR:
        return value_at_risk(d, spec.alpha)
    return expected_shortfall(d, spec.alpha)


def value_at_risk(d: Distribution, alpha: float) -> float:
    check_alpha(alpha)
    return -d.quantile(alpha)


def expected_shortfall(d: Distribution, alpha: float, method: str = "auto") -> float:
    """ES at level ``alpha``.

    ``method="auto"`` uses exact forms (Gaussian, Student-t, atomic laws,
    affine images thereof) and falls back to quadrature of the quantile.
    ``method="quadrature"`` forces the generic path.
    """
    check_alpha(alpha)
    if method == "quadrature":
        return _es_quadrature(d, alpha)
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")
    if isinstance(d, AffineOf):
        return d.scale * expected_shortfall(d.base, alpha) - d.loc
    if isinstance(d, StandardNormal):
        z = d.quantile(alpha)
        return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi) / alpha
    if isinstance(d, StudentT):
        return _es_student_t(d, alpha)
    if is_discrete(d):
        return es_atomic(*d.atoms(), alpha)
    return _es_quadrature(d, alpha)


def _es_student_t(d: StudentT, alpha):
    nu = d.nu
    q = float(StudentT(nu).quantile(alpha))
    raw = float(raw_t_density(nu, q)) * (nu + q * q) / ((nu - 1.0) * alpha)
    return raw / d.scale_factor if d.standardized else raw


def es_atomic(values, masses, alpha):
    """Exact ES of a discrete law: the quantile is piecewise constant."""
    order = np.argsort(values)
    values = np.asarray(values, dtype=float)[order]
    masses = np.asarray(masses, dtype=float)[order]
    total = 0.0
    taken = 0.0
    for v, m in zip(values, masses):
        w = min(m, alpha - taken)
        if w <= 0:
            break
        total += w * v
        taken += w
    if taken < alpha:
        # rounding in the cumulative masses: the last atom covers the rest
        total += (alpha - taken) * values[-1]
    return -total / alpha


def _es_quadrature(d: Distribution, alpha):
    # u = alpha t^2 turns (1/alpha) int_0^alpha -q(u) du into int_0^1 -2t q(alpha t^2) dt;
    # dyadic panels [2^-(j+1), 2^-j] resolve the endpoint singularity at t = 0.
    x, w = gauss_legendre(_GL_POINTS)

    def panel(lo, hi):
        t = lo + (hi - lo) * x
        return (hi - lo) * float(np.dot(w, -2.0 * t * d.quantile(alpha * t * t)))

    levels = 8
    cache = {}

    def estimate(levels):
        total = 0.0
        for j in range(levels):
            if j not in cache:
                cache[j] = panel(2.0 ** -(j + 1), 2.0**-j)
            total += cache[j]
        # remainder [0, 2^-levels] with one panel
        return total + panel(0.0, 2.0**-levels)

    prev = estimate(levels)
    while levels < _MAX_LEVELS:
        levels *= 2
        cur = estimate(levels)
        if not math.isfinite(cur):
            break
        if abs(cur - prev) <= ES_RTOL * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise IntegrabilityError(f"ES quadrature did not converge at alpha={alpha}")
