"""Maximal and minimal distribution functions of a class of laws.

For a class L the maximal function is x -> sup_{X in L} F_X(x) and the minimal
function is the pointwise infimum. When both are strictly increasing on the
relevant band, the extremal lower quantiles of the class at level a are
their inverses evaluated at a (:func:`extremal_quantiles`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._numerics import bisect_increasing
from .dist import Distribution, MomentClass, PointMass
from .errors import AlphaOutOfRange, DomainError, MomentError, NonInvertibleEnvelope

Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class EnvelopePair:
    fmax: Fn
    fmin: Fn
    low_limit: float
    high_limit: float
    invertible: bool = True
    fmax_inverse: Optional[Fn] = None
    fmin_inverse: Optional[Fn] = None

    def __post_init__(self):
        if not self.low_limit < self.high_limit:
            raise DomainError(
                f"need fmax(-inf) < fmin(+inf), got {self.low_limit} >= {self.high_limit}"
            )

    def Fmax(self, x):
        return _call(self.fmax, x)

    def Fmin(self, x):
        return _call(self.fmin, x)


def _call(f, x):
    arr = np.asarray(x, dtype=float)
    out = f(arr)
    return float(out) if arr.ndim == 0 else out


def extremal_quantiles(e: EnvelopePair, alpha: float, method: str = "auto") -> tuple[float, float]:
    """(inf, sup) of the lower alpha-quantile over the class described by ``e``.

    ``method="bisect"`` ignores analytic inverses and inverts the envelopes
    by monotone bisection.
    """
    if not e.invertible:
        raise NonInvertibleEnvelope("envelope has a flat; extremal quantiles are not its inverses")
    if not e.low_limit < alpha < e.high_limit:
        raise AlphaOutOfRange(f"alpha={alpha} outside ({e.low_limit}, {e.high_limit})")
    use_closed = method == "auto"
    if method not in ("auto", "bisect"):
        raise DomainError(f"unknown method {method!r}")
    if use_closed and e.fmax_inverse is not None:
        inf_q = float(e.fmax_inverse(np.float64(alpha)))
    else:
        inf_q = float(bisect_increasing(e.fmax, alpha))
    if use_closed and e.fmin_inverse is not None:
        sup_q = float(e.fmin_inverse(np.float64(alpha)))
    else:
        sup_q = float(bisect_increasing(e.fmin, alpha))
    return inf_q, sup_q


def cm_max(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return np.where(x <= 0, 1.0 / (1.0 + x * x), 1.0)


def cm_min(x):
    x = np.asarray(x, dtype=float)
    # x^2/(1+x^2) written so that x -> +inf and x = 0 both evaluate cleanly
    with np.errstate(over="ignore", divide="ignore"):
        return np.where(x >= 0, 1.0 / (1.0 + 1.0 / (x * x)), 0.0)


def chebyshev_markov_envelope() -> EnvelopePair:
    """Extremal functions of L_{0,1} (all laws with mean 0 and variance 1)."""
    return EnvelopePair(
        fmax=cm_max,
        fmin=cm_min,
        low_limit=0.0,
        high_limit=1.0,
        fmax_inverse=lambda a: -np.sqrt((1.0 - a) / a),
        fmin_inverse=lambda a: np.sqrt(a / (1.0 - a)),
    )


def _check_radius(eps):
    if not (eps > 0 and math.isfinite(eps)):
        raise DomainError(f"radius must be positive, got {eps}")


def kolmogorov_ball_envelope(F0: Distribution, eps: float) -> EnvelopePair:
    """Envelope of {X : sup_x |F_X(x) - F0(x)| <= eps}."""
    _check_radius(eps)
    return EnvelopePair(
        fmax=lambda x: np.minimum(F0._cdf(x) + eps, 1.0),
        fmin=lambda x: np.maximum(F0._cdf(x) - eps, 0.0),
        low_limit=eps,
        high_limit=1.0 - eps,
        invertible=F0.is_absolutely_continuous,
        fmax_inverse=lambda a: F0.quantile(a - eps),
        fmin_inverse=lambda a: F0.quantile(a + eps),
    )


def levy_ball_envelope(F0: Distribution, eps: float) -> EnvelopePair:
    """Envelope of the Levy-distance ball of radius eps around F0.

    The maximal function is clamped at 1, since an upper envelope of
    distribution functions cannot exceed it.
    """
    _check_radius(eps)
    return EnvelopePair(
        fmax=lambda x: np.minimum(F0._cdf(x + eps) + eps, 1.0),
        fmin=lambda x: np.maximum(F0._cdf(x - eps) - eps, 0.0),
        low_limit=eps,
        high_limit=1.0 - eps,
        invertible=F0.is_absolutely_continuous,
        fmax_inverse=lambda a: F0.quantile(a - eps) - eps,
        fmin_inverse=lambda a: F0.quantile(a + eps) + eps,
    )


def mixture_class_envelope(F0: Distribution, eps: float) -> EnvelopePair:
    """Envelope of {(1-t) F0 + t F_Y : Y in L_{0,1}, 0 <= t <= eps}."""
    if not 0.0 <= eps < 1.0:
        raise DomainError(f"mixture radius must lie in [0, 1), got {eps}")
    if not MomentClass(0.0, 1.0).contains(F0):
        raise MomentError("mixture class centre must be standardized (mean 0, stdev 1)")
    return EnvelopePair(
        fmax=lambda x: (1.0 - eps) * F0._cdf(x) + eps * cm_max(x),
        fmin=lambda x: (1.0 - eps) * F0._cdf(x) + eps * cm_min(x),
        low_limit=0.0,
        high_limit=1.0,
        invertible=F0.is_absolutely_continuous,
    )


def step_envelope(alpha: float) -> EnvelopePair:
    """Maximal function of X_n with P(X_n = 0) = alpha - 1/n, P(X_n = 1) = 1 - alpha + 1/n.

    It is flat at level ``alpha`` on [0, 1), so it is declared non-invertible.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")

    def fmax(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0, 0.0, np.where(x < 1, alpha, 1.0))

    def fmin(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 1, 0.0, 1.0)

    return EnvelopePair(fmax=fmax, fmin=fmin, low_limit=0.0, high_limit=1.0, invertible=False)


class StopLossMaximal(Distribution):
    """Law with cdf (1 + x / sqrt(1 + x^2)) / 2.

    Its stop-loss transform is the largest over L_{0,1}; it has mean 0 and
    infinite variance.
    """

    def _cdf(self, x):
        s = np.hypot(x, 1.0)
        # 1 + x/s = 1/(s(s - x)) avoids cancellation in the left tail
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            left = 0.5 / (s * (s - x))
        return np.where(x < 0, left, 0.5 * (1.0 + x / s))

    def _quantile(self, u):
        return (2.0 * u - 1.0) / (2.0 * np.sqrt(u * (1.0 - u)))

    def _density(self, x):
        return 0.5 * (x * x + 1.0) ** -1.5

    @property
    def mean(self):
        return 0.0

    @property
    def stdev(self):
        return math.inf

    def __eq__(self, other):
        return isinstance(other, StopLossMaximal)

    def __hash__(self):
        return hash(StopLossMaximal)


@dataclass(frozen=True)
class StopLossTransformPair:
    Pi_max: Fn
    Pi_min: Fn
    Fmax_SL: Distribution
    Fmin_SL: Distribution


def stop_loss_max(x):
    x = np.asarray(x, dtype=float)
    return (np.sqrt(x * x + 1.0) - x) / 2.0


def stop_loss_min(x):
    x = np.asarray(x, dtype=float)
    return np.maximum(-x, 0.0)


def stop_loss_extremals() -> StopLossTransformPair:
    return StopLossTransformPair(
        Pi_max=stop_loss_max,
        Pi_min=stop_loss_min,
        Fmax_SL=StopLossMaximal(),
        Fmin_SL=PointMass(0.0),
    )
