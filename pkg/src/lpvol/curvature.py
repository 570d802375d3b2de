"""Pointwise differential geometry of the boundary surface
F(x) = sum_i |a_i x_i|^p = 1.

The boundary is C^1 everywhere for p > 1 and C^2 wherever all
coordinates are nonzero (everywhere when p >= 2).  At such points the
principal curvatures are the roots of a rank-one-update secular
equation, so they interlace the known per-coordinate values
d_i = (p-1) a_i^p |x_i|^(p-2) and can be bracketed exactly; their
elementary symmetric functions also have a closed leave-one-out form
that never touches the roots.  The Gauss map and its inverse are
explicit, with the support function h(u) = (sum |u_i/a_i|^q)^(1/q),
q = p/(p-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInput, DomainError
from .exactvol import PBallSpec
from .specfun import kappa
from .symfun import elementary_symmetric

__all__ = [
    "BoundaryPoint", "boundary_point",
    "principal_curvatures", "sigma_curvatures", "gauss_curvature",
    "curvature_density",
    "support_function", "gauss_map", "inverse_gauss_map",
]

_GAUGE_TOL = 1e-12


@dataclass(frozen=True)
class BoundaryPoint:
    """A point validated to lie on the boundary surface.

    Construct via boundary_point, which projects radially; the raw
    constructor insists on gauge residual |F(x) - 1| <= 1e-12.
    Curvature operations additionally require every coordinate nonzero.
    """

    spec: PBallSpec
    coords: np.ndarray

    def __post_init__(self):
        x = np.array(self.coords, dtype=float)
        if x.shape != (self.spec.n,):
            raise DomainError(
                f"coords must have shape ({self.spec.n},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DomainError("coords must be finite")
        resid = abs(float(self.spec.gauge(x)) - 1.0)
        if resid > _GAUGE_TOL:
            raise DomainError(
                f"point is off the boundary: |F(x) - 1| = {resid:.3e}")
        x.setflags(write=False)
        object.__setattr__(self, "coords", x)

    @property
    def n(self) -> int:
        return self.spec.n


def boundary_point(spec: PBallSpec, x: Sequence[float]) -> BoundaryPoint:
    """Radial lift of a nonzero vector onto the boundary: x / F(x)^(1/p)."""
    v = np.asarray(x, dtype=float)
    if v.shape != (spec.n,):
        raise DomainError(f"point must have shape ({spec.n},), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError("point must be finite")
    gauge = float(spec.gauge(v)) ** (1.0 / spec.p)
    if not (math.isfinite(gauge) and gauge > 0.0):
        raise DegenerateInput("cannot lift the zero vector to the boundary")
    return BoundaryPoint(spec, v / gauge)


def _curvature_data(pt: BoundaryPoint):
    """Per-coordinate ingredients c_i, w_i, S at a curvature-regular point.

    c_i = a_i^(2p) |x_i|^(2p-2) (squared gradient components over p^2),
    w_i = a_i^p |x_i|^(p-2) (second-derivative weights over p(p-1)),
    S = sqrt(sum c_i) = |grad F| / p.
    """
    spec = pt.spec
    x = pt.coords
    if np.any(x == 0.0):
        raise DegenerateInput(
            "curvature formulas require every coordinate nonzero")
    p = spec.p
    ax = np.abs(x)
    apow = spec.weights ** p
    w = apow * ax ** (p - 2.0)
    c = (apow * ax ** (p - 1.0)) ** 2
    s = math.sqrt(float(np.sum(c)))
    return c, w, s


def principal_curvatures(pt: BoundaryPoint) -> np.ndarray:
    """The n-1 principal curvatures, ascending.

    They are mu/S for the n-1 roots mu of the secular equation
    sum_i c_i prod_(j != i) (d_j - mu) = 0 with d_j = (p-1) w_j: one
    root bisected inside each gap between consecutive distinct d values
    (the rational form sum c_i/(d_i - mu) is increasing there and spans
    -inf..+inf), plus a root of multiplicity k-1 at every k-fold d.
    """
    c, w, s = _curvature_data(pt)
    d = (pt.spec.p - 1.0) * w
    uniq, inv = np.unique(d, return_inverse=True)
    weight = np.zeros(uniq.shape[0])
    np.add.at(weight, inv, c)
    counts = np.bincount(inv, minlength=uniq.shape[0])
    roots = []
    # repeated d values are roots with one copy fewer
    for val, cnt in zip(uniq, counts):
        roots.extend([float(val)] * (cnt - 1))
    for k in range(uniq.shape[0] - 1):
        lo, hi = float(uniq[k]), float(uniq[k + 1])
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            val = float(np.sum(weight / (uniq - mid)))
            if val > 0.0:
                hi = mid
            else:
                lo = mid
        roots.append(0.5 * (lo + hi))
    out = np.sort(np.array(roots)) / s
    return out


def sigma_curvatures(pt: BoundaryPoint, m: int) -> float:
    """sigma_(m-1) of the principal curvatures, by the closed form

        (p-1)^(m-1) / S^(m+1) * sum_i c_i e_(m-1)(w without i)

    (leave-one-out elementary symmetric sums, no root-finding).
    """
    n = pt.n
    if not (isinstance(m, (int, np.integer)) and 1 <= m <= n):
        raise DomainError(f"order m must lie in 1..{n}, got {m!r}")
    m = int(m)
    c, w, s = _curvature_data(pt)
    p = pt.spec.p
    acc = 0.0
    for i in range(n):
        e = float(elementary_symmetric(np.delete(w, i))[m - 1])
        acc += float(c[i]) * e
    return (p - 1.0) ** (m - 1) / s ** (m + 1) * acc


def gauss_curvature(pt: BoundaryPoint) -> float:
    """Product of the principal curvatures:

        (p-1)^(n-1) prod_j a_j^p |x_j|^(p-2) / S^(n+1).
    """
    c, w, s = _curvature_data(pt)
    n = pt.n
    log_val = ((n - 1) * math.log(pt.spec.p - 1.0)
               + float(np.sum(np.log(w))) - (n + 1) * math.log(s))
    return math.exp(log_val)


def curvature_density(pt: BoundaryPoint, m: int) -> float:
    """Density of the codimension-m curvature measure with respect to
    surface measure: sigma_(m-1)(curvatures) / (m kappa_m).

    m = 1 gives the constant 1/2 (the curvature measure of top index is
    half the surface measure)."""
    n = pt.n
    if not (isinstance(m, (int, np.integer)) and 1 <= m <= n):
        raise DomainError(f"order m must lie in 1..{n}, got {m!r}")
    m = int(m)
    return sigma_curvatures(pt, m) / (m * kappa(m))


def support_function(spec: PBallSpec, u: Sequence[float]) -> float:
    """h(u) = max over the ball of <u, x> = (sum_i |u_i/a_i|^q)^(1/q)."""
    v = np.asarray(u, dtype=float)
    if v.shape != (spec.n,):
        raise DomainError(f"direction must have shape ({spec.n},), got "
                          f"{v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError("direction must be finite")
    z = np.abs(v) / spec.weights
    top = float(np.max(z))
    if top == 0.0:
        raise DomainError("direction must be nonzero")
    q = spec.p / (spec.p - 1.0)
    return top * float(np.sum((z / top) ** q)) ** (1.0 / q)


def gauss_map(pt: BoundaryPoint) -> np.ndarray:
    """Outer unit normal grad F / |grad F|, componentwise
    a_i^p |x_i|^(p-1) sign(x_i) up to normalization."""
    spec = pt.spec
    x = pt.coords
    grad = spec.weights ** spec.p * np.abs(x) ** (spec.p - 1.0) * np.sign(x)
    return grad / np.linalg.norm(grad)


def inverse_gauss_map(spec: PBallSpec, u: Sequence[float]) -> BoundaryPoint:
    """The boundary point whose outer normal is the unit vector u:

        x_i = a_i^(-q) |u_i|^(q-1) sign(u_i) / h(u)^(q-1).
    """
    v = np.asarray(u, dtype=float)
    if v.shape != (spec.n,):
        raise DomainError(f"normal must have shape ({spec.n},), got "
                          f"{v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError("normal must be finite")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-10:
        raise DomainError(f"normal must be a unit vector, |u| = {norm!r}")
    q = spec.p / (spec.p - 1.0)
    h = support_function(spec, v)
    x = (spec.weights ** (-q) * np.abs(v) ** (q - 1.0) * np.sign(v)
         / h ** (q - 1.0))
    return BoundaryPoint(spec, x)
