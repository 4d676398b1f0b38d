"""Closed-form upper bounds on VaR and ES over L_{0,sigma}, and their ratio to
the Gaussian risk figure (the implied regulatory multiplier).
"""

from __future__ import annotations

import enum
import math

from scipy import special

from .errors import DomainError


class BoundKind(str, enum.Enum):
    CHEBYSHEV_VAR = "chebyshev-var"
    CHEBYSHEV_ES = "chebyshev-es"
    CANTELLI_VAR = "cantelli-var"
    CANTELLI_ES = "cantelli-es"
    SHARP_VAR = "sharp-var"
    SHARP_ES = "sharp-es"

    @property
    def is_es(self) -> bool:
        return self.value.endswith("-es")


def _check(sigma, alpha):
    if not (sigma > 0 and math.isfinite(sigma)):
        raise DomainError(f"sigma must be positive, got {sigma}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def cantelli_es(alpha: float) -> float:
    """(1/a) int_0^a sqrt((1-u)/u) du = (sqrt(a - a^2) + arcsin(sqrt(a))) / a."""
    return (math.sqrt(alpha - alpha * alpha) + math.asin(math.sqrt(alpha))) / alpha


def cantelli_es_paper_literal(alpha: float) -> float:
    """Printed variant with arctan(sqrt((1-a)/a)); kept for diagnostics only.

    It is not an antiderivative of the Cantelli integrand and overstates the
    bound by an order of magnitude at small levels.
    """
    return (math.sqrt(alpha - alpha * alpha) + math.atan(math.sqrt((1.0 - alpha) / alpha))) / alpha


def bound(kind: BoundKind, sigma: float, alpha: float, paper_literal: bool = False) -> float:
    """Upper bound on the risk measure of any law with mean 0 and stdev sigma."""
    kind = BoundKind(kind)
    _check(sigma, alpha)
    if kind is BoundKind.CHEBYSHEV_VAR:
        unit = 1.0 / math.sqrt(alpha)
    elif kind is BoundKind.CHEBYSHEV_ES:
        unit = 2.0 / math.sqrt(alpha)
    elif kind is BoundKind.CANTELLI_ES:
        unit = cantelli_es_paper_literal(alpha) if paper_literal else cantelli_es(alpha)
    else:
        # Cantelli VaR is sharp and equals the sharp ES bound
        unit = math.sqrt((1.0 - alpha) / alpha)
    return sigma * unit


def gaussian_risk(kind: BoundKind, alpha: float) -> float:
    """|z_a| for VaR kinds, phi(z_a)/a for ES kinds."""
    z = float(special.ndtri(alpha))
    if BoundKind(kind).is_es:
        return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi) / alpha
    return abs(z)


def multiplier_ratio(kind: BoundKind, alpha: float, paper_literal: bool = False) -> float:
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"ratios need alpha in (0, 0.5), got {alpha}")
    return bound(kind, 1.0, alpha, paper_literal) / gaussian_risk(kind, alpha)


def ratio_curve(kind: BoundKind, alpha_grid, paper_literal: bool = False) -> list[tuple[float, float]]:
    grid = [float(a) for a in alpha_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("alpha grid must be strictly increasing")
    return [(a, multiplier_ratio(kind, a, paper_literal)) for a in grid]
