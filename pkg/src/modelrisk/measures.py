"""Absolute, relative and local measures of model risk.

Given a risk measure rho, a reference law X0 and a class L containing it:

    AM  = sup_L rho / rho(X0) - 1
    RM  = (sup_L rho - rho(X0)) / (sup_L rho - inf_L rho)
    M_K = sup_L rho - rho(X0)

The local measure LM is the limit of RM along a family of classes shrinking to
{X0}.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

from .dist import Distribution, MomentClass
from .envelope import (
    chebyshev_markov_envelope,
    extremal_quantiles,
    kolmogorov_ball_envelope,
    levy_ball_envelope,
)
from ._numerics import bisect_decreasing_root
from .errors import (
    DegenerateRange,
    DomainError,
    MomentError,
    NonPositiveReference,
    OutOfRange,
    PreconditionError,
    RadiusTooLarge,
    RootBracketError,
)
from .riskmeasure import Measure, RiskMeasureSpec, check_alpha, evaluate, value_at_risk

BOUNDARY_TOL = 1e-12
STANDARD_TOL = 1e-6


class FamilyKind(str, enum.Enum):
    MOMENTS = "moments"
    KOLMOGOROV = "kolmogorov"
    LEVY = "levy"
    MIXTURE = "mixture"


@dataclass(frozen=True)
class Moments:
    """The class L_{mu,sigma} of all laws with the given mean and stdev."""

    moments: MomentClass = MomentClass(0.0, 1.0)
    kind = FamilyKind.MOMENTS


@dataclass(frozen=True)
class KolmogorovBall:
    center: Distribution
    eps: float
    kind = FamilyKind.KOLMOGOROV

    def __post_init__(self):
        if not self.eps > 0:
            raise DomainError(f"radius must be positive, got {self.eps}")


@dataclass(frozen=True)
class LevyBall:
    center: Distribution
    eps: float
    kind = FamilyKind.LEVY

    def __post_init__(self):
        if not self.eps > 0:
            raise DomainError(f"radius must be positive, got {self.eps}")


@dataclass(frozen=True)
class MixtureClass:
    """Laws (1 - t) F0 + t F_Y with Y in L_{0,1} and 0 <= t <= eps."""

    center: Distribution
    eps: float
    kind = FamilyKind.MIXTURE

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise DomainError(f"mixture radius must lie in (0, 1), got {self.eps}")
        _require_standard(self.center)


PerturbationFamily = Union[Moments, KolmogorovBall, LevyBall, MixtureClass]


def _require_standard(d: Distribution):
    if not MomentClass(0.0, 1.0, tol=STANDARD_TOL).contains(d):
        raise MomentError(f"law is not standardized (mean={d.mean}, stdev={d.stdev})")


@dataclass(frozen=True)
class ModelRiskReport:
    rho0: float
    rho_sup: float
    rho_inf: float
    AM: float
    RM: float
    M_K: float


def report(rho0: float, rho_sup: float, rho_inf: float) -> ModelRiskReport:
    """Build the report from the reference, worst-case and best-case risk."""
    vals = (rho0, rho_sup, rho_inf)
    if not all(math.isfinite(v) for v in vals):
        raise DomainError(f"risk figures must be finite, got {vals}")
    if rho0 <= 0:
        raise NonPositiveReference(f"reference risk must be positive, got {rho0}")
    if rho_sup <= rho_inf:
        raise DegenerateRange(f"worst case {rho_sup} does not exceed best case {rho_inf}")
    tol = BOUNDARY_TOL * max(1.0, abs(rho_sup), abs(rho_inf))
    if rho0 > rho_sup + tol or rho0 < rho_inf - tol:
        raise OutOfRange(f"reference {rho0} outside [{rho_inf}, {rho_sup}]")
    if abs(rho_sup - rho0) <= tol:
        return ModelRiskReport(rho0, rho_sup, rho_inf, 0.0, 0.0, 0.0)
    mk = rho_sup - rho0
    rm = 1.0 if abs(rho0 - rho_inf) <= tol else mk / (rho_sup - rho_inf)
    return ModelRiskReport(rho0, rho_sup, rho_inf, mk / rho0, rm, mk)


def _check_ball(family, alpha):
    if not family.eps < min(alpha, 1.0 - alpha):
        raise RadiusTooLarge(f"ball radius {family.eps} must be below min(alpha, 1 - alpha)")


def var_extremes(family: PerturbationFamily, alpha: float) -> tuple[float, float]:
    """(inf, sup) of VaR_alpha over the class."""
    check_alpha(alpha)
    if isinstance(family, Moments):
        mu, sigma = family.moments.mu, family.moments.sigma
        lo_q, hi_q = extremal_quantiles(chebyshev_markov_envelope(), alpha)
        return -(mu + sigma * hi_q), -(mu + sigma * lo_q)
    if isinstance(family, (KolmogorovBall, LevyBall)):
        _check_ball(family, alpha)
        make = kolmogorov_ball_envelope if isinstance(family, KolmogorovBall) else levy_ball_envelope
        lo_q, hi_q = extremal_quantiles(make(family.center, family.eps), alpha)
        return -hi_q, -lo_q
    if isinstance(family, MixtureClass):
        return _mixture_var_extremes(family, alpha)
    raise PreconditionError(f"unsupported family {family!r}")


finite_radius_var_extremes = var_extremes


def _mixture_var_extremes(family: MixtureClass, alpha):
    F0, eps = family.center, family.eps
    if alpha > (1.0 - eps) * F0.cdf(0.0):
        raise RadiusTooLarge(f"need alpha <= (1 - eps) F0(0) = {(1.0 - eps) * F0.cdf(0.0)}")
    inf_var = -F0.quantile(alpha / (1.0 - eps))

    def g(r):
        return (1.0 - eps) * F0.cdf(-r) + eps / (1.0 + r * r) - alpha

    hi = 1.0
    while g(hi) > 0:
        hi *= 2.0
        if hi > 1e150:
            raise RootBracketError("worst-case VaR root could not be bracketed")
    lo = 0.0
    if g(lo) <= 0:
        raise RootBracketError("worst-case VaR root is not positive")
    sup_var = bisect_decreasing_root(g, lo, hi)
    return inf_var, sup_var


def mixture_sup_var_residual(family: MixtureClass, alpha: float, r: float) -> float:
    """Residual of (1 - eps) F0(-r) + eps / (1 + r^2) = alpha at r."""
    eps = family.eps
    return (1.0 - eps) * family.center.cdf(-r) + eps / (1.0 + r * r) - alpha


def es_extremes(family: PerturbationFamily, alpha: float) -> tuple[float, float]:
    """(inf, sup) of ES_alpha; only the moment class has a closed form."""
    check_alpha(alpha)
    if not isinstance(family, Moments):
        raise PreconditionError("extremal ES is only available for moment classes")
    mu, sigma = family.moments.mu, family.moments.sigma
    return -mu, -mu + sigma * math.sqrt((1.0 - alpha) / alpha)


def extremes(family: PerturbationFamily, spec: RiskMeasureSpec) -> tuple[float, float]:
    if spec.kind is Measure.VAR:
        return var_extremes(family, spec.alpha)
    return es_extremes(family, spec.alpha)


def assess(X0: Distribution, family: PerturbationFamily, spec: RiskMeasureSpec) -> ModelRiskReport:
    """Model-risk report of ``X0`` within ``family`` for the risk measure ``spec``."""
    if isinstance(family, Moments):
        if not family.moments.contains(X0):
            raise MomentError("reference law does not belong to the moment class")
    elif family.center != X0:
        raise PreconditionError("reference law must be the centre of the family")
    rho_inf, rho_sup = extremes(family, spec)
    return report(evaluate(spec, X0), rho_sup, rho_inf)


def moment_class_var_report(X0: Distribution, alpha: float) -> ModelRiskReport:
    _require_standard(X0)
    return assess(X0, Moments(MomentClass(0.0, 1.0, tol=STANDARD_TOL)), RiskMeasureSpec(Measure.VAR, alpha))


def moment_class_es_report(X0: Distribution, alpha: float) -> ModelRiskReport:
    _require_standard(X0)
    return assess(X0, Moments(MomentClass(0.0, 1.0, tol=STANDARD_TOL)), RiskMeasureSpec(Measure.ES, alpha))


def rm_var_closed_form(var0: float, alpha: float) -> float:
    return (1.0 - alpha) - math.sqrt(alpha * (1.0 - alpha)) * var0


def rm_es_closed_form(es0: float, alpha: float) -> float:
    return 1.0 - math.sqrt(alpha / (1.0 - alpha)) * es0


class Acceptability(str, enum.Enum):
    ALL_ACCEPTABLE = "all-acceptable"
    ALL_NON_ACCEPTABLE = "all-non-acceptable"
    MIXED = "mixed"


def acceptability(mu: float, sigma: float, alpha: float) -> Acceptability:
    """Sign pattern of VaR_alpha over L_{mu,sigma}."""
    MomentClass(mu, sigma)
    v = mu * mu + sigma * sigma
    if mu > 0 and alpha > sigma * sigma / v:
        return Acceptability.ALL_ACCEPTABLE
    if mu < 0 and alpha < mu * mu / v:
        return Acceptability.ALL_NON_ACCEPTABLE
    return Acceptability.MIXED


def _family(kind: FamilyKind, X0, eps):
    if kind is FamilyKind.KOLMOGOROV:
        return KolmogorovBall(X0, eps)
    if kind is FamilyKind.LEVY:
        return LevyBall(X0, eps)
    if kind is FamilyKind.MIXTURE:
        return MixtureClass(X0, eps)
    raise PreconditionError(f"no shrinking family of kind {kind.value!r}")


def local_measure(kind: FamilyKind, X0: Distribution, alpha: float) -> float:
    """Limit of RM for VaR_alpha as the family shrinks to X0."""
    kind = FamilyKind(kind)
    check_alpha(alpha)
    if not X0.is_absolutely_continuous:
        raise PreconditionError("reference law must be absolutely continuous")
    if kind in (FamilyKind.KOLMOGOROV, FamilyKind.LEVY):
        return 0.5
    if kind is FamilyKind.MIXTURE:
        _require_standard(X0)
        v = value_at_risk(X0, alpha)
        if v < 0:
            raise PreconditionError(f"mixture local measure needs VaR >= 0, got {v}")
        return 1.0 - alpha * (1.0 + v * v)
    raise PreconditionError(f"no local measure for family kind {kind.value!r}")


@dataclass(frozen=True)
class LocalSweep:
    lm: float
    eps: tuple
    rm: tuple

    @property
    def converging(self) -> bool:
        gaps = [abs(r - self.lm) for r in self.rm]
        return all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))


def finite_radius_rm(kind: FamilyKind, X0: Distribution, alpha: float, eps: float) -> float:
    family = _family(FamilyKind(kind), X0, eps)
    inf_var, sup_var = var_extremes(family, alpha)
    return report(value_at_risk(X0, alpha), sup_var, inf_var).RM


def local_measure_sweep(kind: FamilyKind, X0: Distribution, alpha: float,
                        eps_values=(1e-2, 1e-3, 1e-4)) -> LocalSweep:
    """RM at decreasing radii next to the closed-form limit."""
    lm = local_measure(kind, X0, alpha)
    eps_values = tuple(sorted((float(e) for e in eps_values), reverse=True))
    rms = tuple(finite_radius_rm(kind, X0, alpha, e) for e in eps_values)
    return LocalSweep(lm, eps_values, rms)
