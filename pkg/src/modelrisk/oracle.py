"""Brute-force search over small discrete laws in L_{mu,sigma}.

The sharp VaR and ES bounds on the moment class are approached by two-point
laws, so sweeping the lower mass p over a fine grid gives an independent check
of the closed forms. Three-point laws additionally match a prescribed
skewness.

Everything here is written directly against the lower-quantile and ES
definitions and does not call into :mod:`modelrisk.riskmeasure`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dist import Mixture, PointMass, TwoPoint
from .errors import DomainError, InfeasibleConstraints


@dataclass(frozen=True)
class SearchConstraints:
    mean: float = 0.0
    stdev: float = 1.0
    skewness: Optional[float] = None
    atom_budget: int = 2
    p_grid: int = 10_000
    p_min: float = 1e-12

    def __post_init__(self):
        if self.atom_budget not in (2, 3):
            raise DomainError(f"atom_budget must be 2 or 3, got {self.atom_budget}")
        if self.p_grid < 1000:
            raise DomainError(f"p_grid must be at least 1000, got {self.p_grid}")
        if not self.stdev > 0:
            raise DomainError("stdev must be positive")
        if self.atom_budget == 3 and self.skewness is None:
            raise DomainError("three-point search needs a skewness target")


def two_point_atoms(p):
    """Atoms of the unique mean-0 variance-1 law with mass p on the lower atom."""
    p = np.asarray(p, dtype=float)
    return -np.sqrt((1.0 - p) / p), np.sqrt(p / (1.0 - p))


def two_point(p: float) -> TwoPoint:
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    a, b = two_point_atoms(p)
    return TwoPoint(float(a), float(b), p)


def two_point_skewness(p):
    # mass p sits on the lower atom, so small p means a long left tail
    p = np.asarray(p, dtype=float)
    return (2.0 * p - 1.0) / np.sqrt(p * (1.0 - p))


def p_grid(n: int, p_min: float = 1e-12) -> np.ndarray:
    """About n masses in (0, 1), dense near 0 and 1.

    Union of ``n // 4`` equal steps in log10(p) on [p_min, 1/2] (mirrored onto
    [1/2, 1 - p_min]) and a uniform grid with ``n // 2`` steps for the middle.
    Grids of size n and k*n are nested, so refining never loses a point.
    """
    lower = np.logspace(math.log10(p_min), math.log10(0.5), n // 4 + 1)
    lower[-1] = 0.5
    log_part = np.concatenate((lower, 1.0 - lower[-2::-1]))
    uniform = np.arange(1, n // 2) / (n // 2)
    return np.unique(np.concatenate((log_part, uniform)))


def _two_point_quantile(p, alpha):
    a, b = two_point_atoms(p)
    return np.where(alpha <= p, a, b)


def _two_point_es(p, alpha):
    a, b = two_point_atoms(p)
    low = np.minimum(p, alpha)
    return -(low * a + (alpha - low) * b) / alpha


def _check_level(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def _affine(c: SearchConstraints, lo, hi, *, es: bool):
    # q and ES under X -> mean + stdev * X; ES flips the sign of the location
    if es:
        return c.stdev * lo - c.mean, c.stdev * hi - c.mean
    return c.mean + c.stdev * lo, c.mean + c.stdev * hi


def search_extremal_var(alpha: float, c: SearchConstraints = SearchConstraints()) -> tuple[float, float]:
    """(inf, sup) of the lower alpha-quantile over the searched laws."""
    _check_level(alpha)
    if c.atom_budget == 3:
        values, masses = three_point_sweep(c.skewness, c.p_grid)
        q = _discrete_quantile(values, masses, alpha)
    elif c.skewness is not None:
        q = _two_point_quantile(_p_from_skewness(c.skewness), alpha)
    else:
        q = _two_point_quantile(p_grid(c.p_grid, c.p_min), alpha)
    return _affine(c, float(np.min(q)), float(np.max(q)), es=False)


def search_extremal_es(alpha: float, c: SearchConstraints = SearchConstraints()) -> tuple[float, float]:
    """(inf, sup) of ES_alpha over the searched laws; p = alpha is always on the grid."""
    _check_level(alpha)
    if c.atom_budget == 3:
        values, masses = three_point_sweep(c.skewness, c.p_grid)
        es = _discrete_es(values, masses, alpha)
    elif c.skewness is not None:
        es = _two_point_es(_p_from_skewness(c.skewness), alpha)
    else:
        es = _two_point_es(np.append(p_grid(c.p_grid, c.p_min), alpha), alpha)
    return _affine(c, float(np.min(es)), float(np.max(es)), es=True)


def two_point_es_values(alpha: float, c: SearchConstraints = SearchConstraints()):
    """Masses p on the grid and the exact ES of each two-point law."""
    p = np.append(p_grid(c.p_grid, c.p_min), alpha)
    return p, _two_point_es(p, alpha)


def _p_from_skewness(xi):
    return np.atleast_1d(0.5 * (1.0 + xi / math.sqrt(xi * xi + 4.0)))


def three_point_masses(x1, x2, x3):
    """Masses making {x1, x2, x3} a law with mean 0 and variance 1."""
    p1 = (1.0 + x2 * x3) / ((x1 - x2) * (x1 - x3))
    p2 = (1.0 + x1 * x3) / ((x2 - x1) * (x2 - x3))
    p3 = (1.0 + x1 * x2) / ((x3 - x1) * (x3 - x2))
    return p1, p2, p3


def third_atom(x1, x2, xi):
    """x3 such that a standard law on {x1, x2, x3} has skewness xi.

    Follows from E[(X - x1)(X - x2)(X - x3)] = 0 with E X = 0, E X^2 = 1.
    """
    return (xi - x1 - x2) / (1.0 + x1 * x2)


def three_point_law(x1: float, x2: float, xi: float) -> Mixture:
    x3 = third_atom(x1, x2, xi)
    if not (x1 < x2 < x3):
        raise InfeasibleConstraints(f"atoms not ordered: {x1}, {x2}, {x3}")
    masses = three_point_masses(x1, x2, x3)
    if min(masses) < -1e-12:
        raise InfeasibleConstraints(f"negative mass in {masses}")
    masses = np.clip(masses, 0.0, None)
    masses = masses / masses.sum()
    return Mixture((PointMass(x1), PointMass(x2), PointMass(x3)), tuple(masses))


def _atom_grid(m):
    pos = np.logspace(-3, 3, m)
    return -pos[::-1], np.concatenate((-pos[::-1], [0.0], pos))


def three_point_sweep(xi: float, resolution: int, tol: float = 1e-6):
    """All valid standard three-point laws with skewness xi on an atom grid.

    Returns (values, masses) as (n, 3) arrays sorted along axis 1.
    """
    if not math.isfinite(xi):
        raise DomainError(f"skewness must be finite, got {xi}")
    m = max(64, int(math.isqrt(int(resolution)))) | 1  # odd, so +-1 are grid atoms
    g1, g2 = _atom_grid(m)
    x1, x2 = np.meshgrid(g1, g2, indexing="ij")
    x1, x2 = x1.ravel(), x2.ravel()
    # extreme targets overflow in places; those rows fail the moment check below
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        x3 = third_atom(x1, x2, xi)
        p1, p2, p3 = three_point_masses(x1, x2, x3)
        ok = (x1 < x2) & (x2 < x3) & np.isfinite(x3)
        ok &= (p1 >= 0) & (p2 >= -1e-12) & (p3 >= 0) & np.isfinite(p1) & np.isfinite(p3)
        values = np.stack((x1, x2, x3), axis=1)[ok]
        masses = np.clip(np.stack((p1, p2, p3), axis=1)[ok], 0.0, None)
        if len(values):
            masses = masses / masses.sum(axis=1, keepdims=True)
            mean = np.sum(masses * values, axis=1)
            var = np.sum(masses * values**2, axis=1)
            skew = np.sum(masses * values**3, axis=1)
            good = (abs(mean) < tol) & (abs(var - 1.0) < tol) & (abs(skew - xi) < tol)
            values, masses = values[good], masses[good]
    if len(values) == 0:
        raise InfeasibleConstraints(f"no three-point law with skewness {xi} on the grid")
    return values, masses


def _discrete_quantile(values, masses, alpha):
    cum = np.cumsum(masses, axis=1)
    # ties at the cumulative mass go to the lower atom despite renormalization noise
    idx = np.argmax(cum >= alpha - 1e-15, axis=1)
    return values[np.arange(len(values)), idx]


def _discrete_es(values, masses, alpha):
    cum_before = np.cumsum(masses, axis=1) - masses
    take = np.clip(alpha - cum_before, 0.0, masses)
    return -np.sum(take * values, axis=1) / alpha


@dataclass(frozen=True)
class SkewnessRow:
    xi: float
    n_laws: int
    inf_q: float
    sup_q: float
    closed_inf_q: float
    closed_sup_q: float


def skewness_experiment(alpha: float, xi_targets, resolution: int = 160_000) -> list[SkewnessRow]:
    """Extremal alpha-quantiles over standard three-point laws with fixed skewness."""
    _check_level(alpha)
    rows = []
    closed_inf = -math.sqrt((1.0 - alpha) / alpha)
    closed_sup = math.sqrt(alpha / (1.0 - alpha))
    for xi in xi_targets:
        values, masses = three_point_sweep(float(xi), resolution)
        q = _discrete_quantile(values, masses, alpha)
        rows.append(SkewnessRow(float(xi), len(values), float(q.min()), float(q.max()),
                                closed_inf, closed_sup))
    return rows
