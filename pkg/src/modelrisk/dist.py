"""Evaluable univariate laws.

Every law exposes ``cdf``, the lower quantile ``quantile`` (``inf{x : F(x) >= u}``),
``density`` when absolutely continuous, and its first two moments. All
methods accept scalars or numpy arrays and return the same shape.

Instances are frozen dataclasses and hold no mutable state.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from ._numerics import bisect_increasing
from .errors import DomainError, MomentError

_NU_MIN = 2.0 + 1e-9


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


class Distribution(ABC):
    """Common interface of every law in the package."""

    is_absolutely_continuous: bool = True

    @abstractmethod
    def _cdf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _quantile(self, u: np.ndarray) -> np.ndarray: ...

    def _density(self, x: np.ndarray) -> np.ndarray:
        raise DomainError(f"{type(self).__name__} has no density")

    @property
    @abstractmethod
    def mean(self) -> float: ...

    @property
    @abstractmethod
    def stdev(self) -> float: ...

    def cdf(self, x):
        arr, scalar = _as_array(x)
        return _ret(self._cdf(arr), scalar)

    def density(self, x):
        if not self.is_absolutely_continuous:
            raise DomainError(f"{type(self).__name__} is not absolutely continuous")
        arr, scalar = _as_array(x)
        return _ret(self._density(arr), scalar)

    def quantile(self, u):
        """Lower quantile, without range checks (see :func:`lower_quantile`)."""
        arr, scalar = _as_array(u)
        q = self._quantile(arr)
        if self.is_absolutely_continuous:
            if type(self)._density is not Distribution._density:
                q = _newton(self, q, arr)
            q = _snap_lower(self._cdf, q, arr)
        return _ret(q, scalar)


def _newton(d, q, u, steps=2):
    # library inverses can be off by ~1e-12 in u far in the tails
    q = np.array(q, dtype=float)
    for _ in range(steps):
        with np.errstate(all="ignore"):
            step = (d._cdf(q) - u) / d._density(q)
        ok = np.isfinite(q) & np.isfinite(step)
        q = np.where(ok, q - np.where(ok, step, 0.0), q)
    return q


def _snap_lower(cdf, q, u, max_iter=1100):
    """Refine q to the smallest float with cdf(q) >= u.

    Brackets [lo, hi] with cdf(lo) < u <= cdf(hi) around q by expanding steps,
    then bisects until lo and hi are adjacent floats.
    """
    q = np.array(q, dtype=float)
    u = np.broadcast_to(u, q.shape)
    live = np.isfinite(q)
    if not live.any():
        return q
    hi, lo = q.copy(), q.copy()
    step = np.spacing(np.abs(q))
    need = live & (cdf(hi) < u)
    while need.any():
        hi = np.where(need, hi + step, hi)
        step = step * 2.0
        need = need & (cdf(hi) < u)
    step = np.spacing(np.abs(q))
    lo = np.where(live, np.nextafter(hi, -np.inf), lo)
    need = live & (cdf(lo) >= u)
    while need.any():
        hi = np.where(need, lo, hi)
        lo = np.where(need, lo - step, lo)
        step = step * 2.0
        need = need & (cdf(lo) >= u)
    for _ in range(max_iter):
        open_ = live & (np.nextafter(lo, np.inf) < hi)
        if not open_.any():
            break
        mid = np.where(open_, lo + (hi - lo) / 2.0, lo)
        mid = np.where(open_ & ((mid <= lo) | (mid >= hi)), np.nextafter(lo, np.inf), mid)
        up = open_ & (cdf(mid) >= u)
        hi = np.where(up, mid, hi)
        lo = np.where(open_ & ~up, mid, lo)
    return np.where(live, hi, q)


class DiscreteLaw(Distribution):
    """Law with finitely many atoms; cdf, quantile and ES are exact."""

    is_absolutely_continuous = False

    @abstractmethod
    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        """Sorted distinct support points and their (positive) masses."""

    def _cdf(self, x):
        values, masses = self.atoms()
        cum = np.concatenate(([0.0], np.cumsum(masses)))
        cum[-1] = 1.0
        idx = np.searchsorted(values, x, side="right")
        return cum[idx]

    def _quantile(self, u):
        values, masses = self.atoms()
        cum = np.cumsum(masses)
        cum[-1] = 1.0
        # first atom whose cumulative mass reaches u
        idx = np.searchsorted(cum, u, side="left")
        return values[np.clip(idx, 0, len(values) - 1)]

    @property
    def mean(self):
        values, masses = self.atoms()
        return float(np.dot(values, masses))

    @property
    def stdev(self):
        values, masses = self.atoms()
        m = np.dot(values, masses)
        return float(math.sqrt(max(np.dot(masses, (values - m) ** 2), 0.0)))


@dataclass(frozen=True)
class StandardNormal(Distribution):
    def _cdf(self, x):
        return special.ndtr(x)

    def _quantile(self, u):
        return special.ndtri(u)

    def _density(self, x):
        return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)

    @property
    def mean(self):
        return 0.0

    @property
    def stdev(self):
        return 1.0


@dataclass(frozen=True)
class StudentT(Distribution):
    """Student-t with ``nu`` degrees of freedom.

    With ``standardized=True`` the variable is divided by sqrt(nu/(nu-2)) so
    that it has unit variance.
    """

    nu: float
    standardized: bool = False

    def __post_init__(self):
        if not (self.nu > _NU_MIN) or not math.isfinite(self.nu):
            raise MomentError(f"Student-t needs finite variance, got nu={self.nu}")

    @property
    def scale_factor(self) -> float:
        """sqrt(nu/(nu-2)), the standard deviation of the raw t law."""
        return math.sqrt(self.nu / (self.nu - 2.0))

    @property
    def _s(self):
        return self.scale_factor if self.standardized else 1.0

    def _cdf(self, x):
        return special.stdtr(self.nu, x * self._s)

    def _quantile(self, u):
        return special.stdtrit(self.nu, u) / self._s

    def _density(self, x):
        return self._s * raw_t_density(self.nu, x * self._s)

    @property
    def mean(self):
        return 0.0

    @property
    def stdev(self):
        return 1.0 if self.standardized else self.scale_factor


def raw_t_density(nu, t):
    logc = special.gammaln((nu + 1) / 2) - special.gammaln(nu / 2) - 0.5 * math.log(nu * math.pi)
    return np.exp(logc - (nu + 1) / 2 * np.log1p(t * t / nu))


@dataclass(frozen=True)
class TwoPoint(DiscreteLaw):
    """Mass ``p`` at ``a`` and ``1 - p`` at ``b`` (a < b)."""

    a: float
    b: float
    p: float

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError(f"need a < b, got a={self.a}, b={self.b}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"mass p must lie in (0, 1), got {self.p}")

    def atoms(self):
        return np.array([self.a, self.b]), np.array([self.p, 1.0 - self.p])


@dataclass(frozen=True)
class PointMass(DiscreteLaw):
    """Degenerate law at ``x0``."""

    x0: float = 0.0

    def atoms(self):
        return np.array([self.x0]), np.array([1.0])


@dataclass(frozen=True)
class Mixture(Distribution):
    """Mixture of distribution functions: F = sum_i w_i F_i."""

    components: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.components) == 0 or len(self.components) != len(self.weights):
            raise DomainError("components and weights must be non-empty and of equal length")
        w = np.asarray(self.weights)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise DomainError(f"weights must be a probability vector, got {self.weights}")

    @property
    def is_absolutely_continuous(self):
        return all(c.is_absolutely_continuous for c in self.components)

    @property
    def is_discrete(self):
        return all(is_discrete(c) for c in self.components)

    def _cdf(self, x):
        if self.is_discrete:
            return DiscreteLaw._cdf(self, x)
        return sum(w * c._cdf(x) for c, w in zip(self.components, self.weights) if w > 0)

    def _density(self, x):
        return sum(w * c._density(x) for c, w in zip(self.components, self.weights) if w > 0)

    def atoms(self):
        if not self.is_discrete:
            raise DomainError("mixture has continuous components")
        vals, mass = [], []
        for c, w in zip(self.components, self.weights):
            v, m = c.atoms()
            vals.append(v)
            mass.append(w * m)
        vals = np.concatenate(vals)
        mass = np.concatenate(mass)
        uniq, inv = np.unique(vals, return_inverse=True)
        merged = np.bincount(inv, weights=mass)
        keep = merged > 0
        return uniq[keep], merged[keep]

    def _quantile(self, u):
        if self.is_discrete:
            return DiscreteLaw._quantile(self, u)
        return bisect_increasing(self._cdf, u)

    @property
    def mean(self):
        return float(sum(w * c.mean for c, w in zip(self.components, self.weights)))

    @property
    def stdev(self):
        m = self.mean
        second = sum(w * (c.stdev**2 + c.mean**2) for c, w in zip(self.components, self.weights))
        return float(math.sqrt(max(second - m * m, 0.0)))


@dataclass(frozen=True)
class AffineOf(Distribution):
    """Law of ``loc + scale * X`` with X ~ ``base`` and scale > 0."""

    base: Distribution
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be positive and finite, got {self.scale}")

    @property
    def is_absolutely_continuous(self):
        return self.base.is_absolutely_continuous

    def _cdf(self, x):
        if is_discrete(self.base):
            return DiscreteLaw._cdf(self, x)
        return self.base._cdf((x - self.loc) / self.scale)

    def _quantile(self, u):
        return self.loc + self.scale * self.base.quantile(u)

    def _density(self, x):
        return self.base._density((x - self.loc) / self.scale) / self.scale

    def quantile(self, u):
        if is_discrete(self.base):
            arr, scalar = _as_array(u)
            return _ret(DiscreteLaw._quantile(self, arr), scalar)
        return super().quantile(u)

    def atoms(self):
        v, m = self.base.atoms()
        return self.loc + self.scale * v, m

    @property
    def mean(self):
        return self.loc + self.scale * self.base.mean

    @property
    def stdev(self):
        return self.scale * self.base.stdev


@dataclass(frozen=True)
class MomentClass:
    """All laws with mean ``mu`` and standard deviation ``sigma``."""

    mu: float = 0.0
    sigma: float = 1.0
    tol: float = field(default=1e-6, compare=False)

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)) or not math.isfinite(self.mu):
            raise MomentError(f"invalid moments mu={self.mu}, sigma={self.sigma}")

    def contains(self, d: Distribution) -> bool:
        return abs(d.mean - self.mu) <= self.tol and abs(d.stdev - self.sigma) <= self.tol


def is_discrete(d: Distribution) -> bool:
    if isinstance(d, DiscreteLaw):
        return True
    if isinstance(d, Mixture):
        return d.is_discrete
    if isinstance(d, AffineOf):
        return is_discrete(d.base)
    return False


def lower_quantile(d: Distribution, u):
    """inf{x : F(x) >= u} for u in the open unit interval."""
    arr = np.asarray(u, dtype=float)
    if np.any(~(arr > 0.0) | ~(arr < 1.0)):
        raise DomainError(f"quantile level must lie in (0, 1), got {u}")
    return d.quantile(u)


def standardize(d: Distribution) -> Distribution:
    """Return (X - mean) / stdev as a law in the class L_{0,1}."""
    m, s = d.mean, d.stdev
    if not (math.isfinite(m) and math.isfinite(s)) or s <= 0:
        raise MomentError(f"cannot standardize a law with mean={m}, stdev={s}")
    if abs(m) < 1e-12 and abs(s - 1.0) < 1e-12:
        return d
    if isinstance(d, StudentT):
        return StudentT(d.nu, standardized=True)
    if isinstance(d, AffineOf):
        # a positive affine map does not change the standardized law
        return standardize(d.base)
    return AffineOf(d, -m / s, 1.0 / s)


def mixture_cdf(F0: Distribution, FY: Distribution, theta: float, x):
    """(1 - theta) F0(x) + theta FY(x): a mixture of distribution functions."""
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    return (1.0 - theta) * F0.cdf(x) + theta * FY.cdf(x)
