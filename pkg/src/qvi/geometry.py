"""Legendre functions, Bregman distances, and closed-form Bregman projections.

Two generating functions are supported:

* squared norm, ``phi(x) = 0.5 ||x||^2``, defined on the whole space, whose
  Bregman distance is ``0.5 ||x - y||^2``;
* negative entropy, ``phi(x) = sum_i x_i log x_i``, defined on the positive
  orthant, whose Bregman distance is the Kullback-Leibler divergence.

Projections are provided in closed form for the pairings needed by the
solvers: squared norm onto boxes, balls and the probability simplex, and
negative entropy onto the simplex.  All values are immutable after
construction and every operation is a pure function, so the module is safe
for concurrent use without synchronization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedPairError

__all__ = [
    "GeometryKind",
    "BregmanGeometry",
    "SQUARED_NORM",
    "NEGATIVE_ENTROPY",
    "Box",
    "Ball",
    "Simplex",
    "floor_to_domain",
    "grad_phi",
    "grad_phi_star",
    "exp_saturated",
    "phi_value",
    "bregman_distance",
    "bregman_project",
    "project_simplex_euclidean",
]


class GeometryKind(enum.Enum):
    SQUARED_NORM = "sqnorm"
    NEGATIVE_ENTROPY = "entropy"


@dataclass(frozen=True)
class BregmanGeometry:
    """A Legendre generating function together with its numerical guards.

    Parameters
    ----------
    kind : GeometryKind
        Which generating function to use.
    rho : float
        Strong-convexity modulus.  Exactly 1 for the squared norm; at most 1
        for negative entropy on the simplex (Pinsker-type bound with respect
        to the 1-norm).
    eps_dom : float
        Floor applied to components before logarithms (negative entropy
        only).  Must be positive and at most 1e-8.
    exp_cap : float
        Saturation value for ``grad_phi_star`` when the exponential would
        overflow; callers can detect the event with :func:`exp_saturated`.
    """

    kind: GeometryKind
    rho: float = 1.0
    eps_dom: float = 1e-12
    exp_cap: float = 1e300

    def __post_init__(self):
        if not (0.0 < self.eps_dom <= 1e-8):
            raise ValueError("eps_dom must satisfy 0 < eps_dom <= 1e-8")
        if self.kind is GeometryKind.SQUARED_NORM:
            if self.rho != 1.0:
                raise ValueError("rho is exactly 1 for the squared-norm geometry")
        else:
            if not (0.0 < self.rho <= 1.0):
                raise ValueError("rho must lie in (0, 1] for the entropy geometry")
        if not (1.0 < self.exp_cap <= 1e308):
            raise ValueError("exp_cap must be a large finite positive number")


SQUARED_NORM = BregmanGeometry(GeometryKind.SQUARED_NORM)
NEGATIVE_ENTROPY = BregmanGeometry(GeometryKind.NEGATIVE_ENTROPY)


def _vec(x, name: str = "x") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {v.shape}")
    return v


def _check_finite(v: np.ndarray, name: str = "x") -> np.ndarray:
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} has a non-finite component")
    return v


# ---------------------------------------------------------------------------
# feasible sets


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box ``{x : lo <= x <= hi}`` (componentwise)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = _check_finite(_vec(self.lo, "lo"), "lo")
        hi = _check_finite(_vec(self.hi, "hi"), "hi")
        if lo.shape != hi.shape:
            raise ValueError("lo and hi must have the same length")
        if np.any(lo > hi):
            raise ValueError("box requires lo <= hi componentwise")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    def contains(self, x, tol: float = 1e-12) -> bool:
        v = _vec(x)
        return bool(np.all(v >= self.lo - tol) and np.all(v <= self.hi + tol))


@dataclass(frozen=True, eq=False)
class Ball:
    """Euclidean ball ``{x : ||x - center|| <= radius}``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = _check_finite(_vec(self.center, "center"), "center")
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("ball radius must be positive and finite")
        c.flags.writeable = False
        object.__setattr__(self, "center", c)

    @property
    def dim(self) -> int:
        return self.center.size

    def contains(self, x, tol: float = 1e-12) -> bool:
        v = _vec(x)
        return bool(np.linalg.norm(v - self.center) <= self.radius + tol)


@dataclass(frozen=True)
class Simplex:
    """Probability simplex ``{x >= 0 : sum(x) = 1}`` of a given dimension."""

    dim: int

    def __post_init__(self):
        if not (isinstance(self.dim, (int, np.integer)) and self.dim >= 1):
            raise ValueError("simplex dimension must be a positive integer")

    def contains(self, x, tol: float = 1e-12) -> bool:
        v = _vec(x)
        if v.size != self.dim:
            return False
        return bool(np.all(v >= -tol) and abs(float(v.sum()) - 1.0) <= tol)


FeasibleSet = Box | Ball | Simplex


# ---------------------------------------------------------------------------
# gradients and distances


def floor_to_domain(geom: BregmanGeometry, x) -> np.ndarray:
    """Apply the entropy domain floor; identity for the squared norm."""
    v = _vec(x)
    if geom.kind is GeometryKind.NEGATIVE_ENTROPY:
        return np.maximum(v, geom.eps_dom)
    return v


def grad_phi(geom: BregmanGeometry, x) -> np.ndarray:
    """Gradient of the generating function.

    Squared norm maps ``x`` to itself; negative entropy maps componentwise to
    ``1 + log(x_i)`` after flooring at ``eps_dom``.
    """
    v = _check_finite(_vec(x))
    if geom.kind is GeometryKind.SQUARED_NORM:
        return v.copy()
    return 1.0 + np.log(np.maximum(v, geom.eps_dom))


def grad_phi_star(geom: BregmanGeometry, y) -> np.ndarray:
    """Gradient of the conjugate; exact inverse of :func:`grad_phi`.

    For negative entropy this is ``exp(y_i - 1)``, saturated at ``exp_cap``
    instead of overflowing.
    """
    v = _check_finite(_vec(y), "y")
    if geom.kind is GeometryKind.SQUARED_NORM:
        return v.copy()
    return np.exp(np.minimum(v - 1.0, math.log(geom.exp_cap)))


def exp_saturated(geom: BregmanGeometry, y) -> bool:
    """True when :func:`grad_phi_star` would hit the overflow cap on ``y``."""
    if geom.kind is GeometryKind.SQUARED_NORM:
        return False
    v = _vec(y, "y")
    return bool(np.any(v - 1.0 > math.log(geom.exp_cap)))


def phi_value(geom: BregmanGeometry, x) -> float:
    """Value of the generating function (entropy uses ``0 log 0 = 0``)."""
    v = _check_finite(_vec(x))
    if geom.kind is GeometryKind.SQUARED_NORM:
        return 0.5 * float(v @ v)
    if np.any(v < 0.0):
        raise DomainError("entropy is undefined for negative components")
    pos = v > 0.0
    return float(np.sum(v[pos] * np.log(v[pos])))


def bregman_distance(geom: BregmanGeometry, x, y) -> float:
    """Bregman distance ``phi(x) - phi(y) - <grad phi(y), x - y>``.

    Nonnegative, and zero exactly when ``x == y``.  The squared-norm geometry
    yields ``0.5 ||x - y||^2``; negative entropy yields the generalized KL
    divergence ``sum x log(x/y) - sum x + sum y`` with ``y`` floored at
    ``eps_dom``.
    """
    xv = _check_finite(_vec(x))
    yv = _check_finite(_vec(y), "y")
    if xv.shape != yv.shape:
        raise ValueError("x and y must have the same length")
    if geom.kind is GeometryKind.SQUARED_NORM:
        d = xv - yv
        return 0.5 * float(d @ d)
    if np.any(xv < 0.0):
        raise DomainError("first argument must be nonnegative for entropy")
    yf = np.maximum(yv, geom.eps_dom)
    if np.any(yf <= 0.0):
        raise DomainError("second argument left the entropy domain after flooring")
    pos = xv > 0.0
    kl = float(np.sum(xv[pos] * (np.log(xv[pos]) - np.log(yf[pos]))))
    return kl - float(xv.sum()) + float(yf.sum())


# ---------------------------------------------------------------------------
# projections


def project_simplex_euclidean(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex.

    Sort-then-threshold method: exact in O(n log n) operations, no iterative
    solve.
    """
    x = _check_finite(_vec(v))
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, x.size + 1)
    mask = u - css / ks > 0.0
    rho = int(ks[mask][-1])
    theta = css[rho - 1] / rho
    return np.maximum(x - theta, 0.0)


def bregman_project(geom: BregmanGeometry, feasible_set: FeasibleSet, x) -> np.ndarray:
    """Bregman projection ``argmin_{y in K} D_phi(y, x)`` in closed form.

    Supported pairs: squared norm with Box, Ball or Simplex, and negative
    entropy with Simplex.  Anything else raises
    :class:`~qvi.errors.UnsupportedPairError`.
    """
    v = _check_finite(_vec(x))
    if geom.kind is GeometryKind.SQUARED_NORM:
        if isinstance(feasible_set, Box):
            return np.clip(v, feasible_set.lo, feasible_set.hi)
        if isinstance(feasible_set, Ball):
            d = v - feasible_set.center
            r = float(np.linalg.norm(d))
            if r <= feasible_set.radius:
                return v.copy()
            return feasible_set.center + (feasible_set.radius / r) * d
        if isinstance(feasible_set, Simplex):
            return project_simplex_euclidean(v)
    elif isinstance(feasible_set, Simplex):
        # KKT of min sum y log(y/x) over the simplex gives y proportional to x.
        w = np.maximum(v, geom.eps_dom)
        return w / float(w.sum())
    raise UnsupportedPairError(
        f"no closed-form projection for geometry {geom.kind.value!r} onto "
        f"{type(feasible_set).__name__}"
    )
