"""Single-coordinate limit laws on weighted-ball boundaries and face
skeletons, with finite-n comparisons.

Under the codimension-m boundary measure of the unit p-ball, the scaled
first coordinate n^(1/p) X_1 converges as n grows with j/n -> alpha to a
universal law depending only on p and the face-fraction alpha:

  bulk (0 < alpha < 1):  (p/alpha)^(1/p) xi with density
      f(u) = alpha e^(-|u|^p - t |u|^(2p-2)) / I(t)
           + (1-alpha) |u|^(p-2) e^(-|u|^p - t |u|^(2p-2)) / J(t)
      at t = theta*(p, alpha), I = F(t; 0), J = F(t; p-2);
  left edge (fixed j):   p^(1/p) xi with density
      g(u) = (p-1) sqrt(lam0/pi) |u|^(p-2) e^(-lam0 |u|^(2p-2));
  right edge (j = n-m):  p^(1/p) xi with density
      f(u) = e^(-|u|^p) / (2 Gamma(1 + 1/p)).

Moments of each law are explicit gamma ratios, so finite-n moment ratios
(curvature-measure moment over intrinsic volume) can be tabulated against
their limits.  Uniform samples on cube and crosspolytope skeletons give
the matching polytope limit laws, checked by an atom-aware
Kolmogorov-Smirnov distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureFailure
from .exactvol import (MomentRequest, PBallSpec, intrinsic_volume,
                       mixed_moment_log)
from .rng import standard_exponential, stream
from .specfun import QuadConfig, as_exponent, f_family_log_table, log_gamma
from .asymptotics import PhasePoint, phase_maximizer

__all__ = [
    "lambda0", "LimitLaw", "limit_density", "limit_moment",
    "finite_n_moment_ratio", "ConvergenceRow", "convergence_table",
    "EmpiricalSample", "sample_cube_skeleton",
    "sample_crosspolytope_skeleton",
    "kolmogorov_distance", "nu_inf_cdf", "nu_1_cdf",
]

_NORMALIZATION_TOL = 1e-8
_BATCH = 1 << 14


def lambda0(p) -> float:
    """Left-edge decay constant (p Gamma((2p-1)/(2p-2)) / sqrt(pi))
    raised to 2(p-1)/p; equals 1 at p = 2."""
    p = as_exponent(p)
    base = p * math.exp(log_gamma((2.0 * p - 1.0) / (2.0 * p - 2.0))
                        - 0.5 * math.log(math.pi))
    return base ** (2.0 * (p - 1.0) / p)


def _half_line(f: Callable[[float], float]) -> float:
    val, err = quad(f, 0.0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=400)
    if not math.isfinite(val):
        raise QuadratureFailure("normalization integral diverged")
    return val


@dataclass(frozen=True)
class LimitLaw:
    """One of the three limit laws, with its regime-specific constants.

    Construction integrates the density independently (smooth
    substitution u = t^(1/(p-1)) removes the |u|^(p-2) factor) and
    insists on total mass 1 within 1e-8, which cross-checks the cached
    I, J normalizers against an unrelated quadrature.
    """

    regime: str
    p: float
    alpha: Optional[float] = None
    phase_point: Optional[PhasePoint] = None
    log_i: Optional[float] = None
    log_j: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "p", as_exponent(self.p))
        p = self.p
        if self.regime not in ("bulk", "left", "right"):
            raise DomainError(f"unknown regime {self.regime!r}")
        if self.regime == "bulk":
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise DomainError("bulk law needs 0 < alpha < 1")
            if (self.phase_point is None or self.log_i is None
                    or self.log_j is None):
                raise DomainError("bulk law needs phase data; use "
                                  "LimitLaw.bulk")
            t = self.phase_point.theta_star
            a_part = 2.0 * _half_line(
                lambda u: math.exp(-u ** p - t * u ** (2 * p - 2)))
            q = p / (p - 1.0)
            j_part = 2.0 / (p - 1.0) * _half_line(
                lambda s: math.exp(-s ** q - t * s * s))
            mass = (self.alpha * a_part * math.exp(-self.log_i)
                    + (1.0 - self.alpha) * j_part * math.exp(-self.log_j))
        elif self.regime == "left":
            lam0 = lambda0(p)
            pref = 2.0 * math.sqrt(lam0 / math.pi)
            mass = pref * _half_line(lambda s: math.exp(-lam0 * s * s))
        else:
            mass = (2.0 * _half_line(lambda u: math.exp(-u ** p))
                    / (2.0 * math.exp(log_gamma(1.0 + 1.0 / p))))
        if abs(mass - 1.0) > _NORMALIZATION_TOL:
            raise QuadratureFailure(
                f"{self.regime} density mass {mass!r} is off unity")

    # -- factories ---------------------------------------------------------

    @classmethod
    def bulk(cls, p, alpha: float, cfg: QuadConfig = None) -> "LimitLaw":
        pp = phase_maximizer(p, alpha, cfg)
        p = pp.p
        tab = f_family_log_table(p, [pp.theta_star], [0.0, p - 2.0], cfg)[0]
        return cls("bulk", p, alpha=float(alpha), phase_point=pp,
                   log_i=float(tab[0]), log_j=float(tab[1]))

    @classmethod
    def left_edge(cls, p) -> "LimitLaw":
        return cls("left", as_exponent(p))

    @classmethod
    def right_edge(cls, p) -> "LimitLaw":
        return cls("right", as_exponent(p))

    @property
    def scale(self) -> float:
        """Constant c with n^(1/p) X_1 -> c xi, xi drawn from this law."""
        if self.regime == "bulk":
            return (self.p / self.alpha) ** (1.0 / self.p)
        return self.p ** (1.0 / self.p)


def limit_density(law: LimitLaw, u) -> np.ndarray:
    """Density of the law at u (scalar or array; even in u).

    For p < 2 the bulk and left-edge densities carry an integrable
    |u|^(p-2) singularity at zero, reported as inf at u = 0 exactly.
    """
    uu = np.asarray(u, dtype=float)
    scalar = uu.ndim == 0
    au = np.abs(np.atleast_1d(uu))
    p = law.p
    if law.regime == "right":
        out = np.exp(-au ** p) / (2.0 * math.exp(log_gamma(1.0 + 1.0 / p)))
    else:
        with np.errstate(divide="ignore"):
            pw = au ** (p - 2.0)
        if law.regime == "left":
            lam0 = lambda0(p)
            out = ((p - 1.0) * math.sqrt(lam0 / math.pi) * pw
                   * np.exp(-lam0 * au ** (2.0 * p - 2.0)))
        else:
            t = law.phase_point.theta_star
            base = np.exp(-au ** p - t * au ** (2.0 * p - 2.0))
            out = (law.alpha * math.exp(-law.log_i) * base
                   + (1.0 - law.alpha) * math.exp(-law.log_j) * pw * base)
    return float(out[0]) if scalar else out


def limit_moment(law: LimitLaw, lam: float) -> float:
    """E |xi|^lam in closed form (gamma ratios), lam >= 0."""
    lam = float(lam)
    if not (math.isfinite(lam) and lam >= 0.0):
        raise DomainError(f"moment exponent must be >= 0, got {lam}")
    p = law.p
    if law.regime == "right":
        return math.exp(log_gamma((lam + 1.0) / p) - log_gamma(1.0 / p))
    if law.regime == "left":
        lam0 = lambda0(p)
        s = (lam + p - 1.0) / (2.0 * p - 2.0)
        return math.exp(log_gamma(s) - 0.5 * math.log(math.pi)
                        - lam / (2.0 * p - 2.0) * math.log(lam0))
    t = law.phase_point.theta_star
    tab = f_family_log_table(p, [t], [lam, lam + p - 2.0])[0]
    return (law.alpha * math.exp(float(tab[0]) - law.log_i)
            + (1.0 - law.alpha) * math.exp(float(tab[1]) - law.log_j))


def finite_n_moment_ratio(p, n: int, j: int, lambdas: Sequence[float],
                          cfg: QuadConfig = None, *,
                          scaled: bool = False) -> float:
    """Moment of the codimension n-j boundary measure over V_j for the
    unit ball: E prod_k |X_k|^lambda_k under the normalized j-face
    measure.  With scaled=True the value is premultiplied by
    n^(sum(lambdas)/p), the scaling under which it converges.
    """
    spec = PBallSpec.unit(p, int(n))
    j = int(j)
    if not 0 <= j <= spec.n - 1:
        raise DomainError(f"face index j={j} outside 0..{spec.n - 1}")
    req = MomentRequest(spec.n - j, lambdas)
    num = mixed_moment_log(spec, req, cfg)
    den = intrinsic_volume(spec, j, cfg)
    log_ratio = num.log_abs - den.value.log_abs
    if scaled:
        log_ratio += sum(float(v) for v in lambdas) / spec.p * math.log(spec.n)
    return math.exp(log_ratio)


class ConvergenceRow(NamedTuple):
    n: int
    scaled_moment: float
    limit: float
    rel_gap: float


def convergence_table(p, regime: str, lambdas: Sequence[float],
                      n_list: Sequence[int], *, alpha: float = None,
                      j: int = None, m: int = None,
                      cfg: QuadConfig = None) -> list:
    """Scaled finite-n moments against the limit, one row per n.

    The face index follows the regime: floor(alpha n) in the bulk, the
    given fixed j at the left edge, n - m at the right edge.  The limit
    is prod_k scale^lambda_k E|xi|^lambda_k for the matching law.
    """
    lambdas = [float(v) for v in lambdas]
    if regime == "bulk":
        if alpha is None:
            raise DomainError("bulk table needs alpha")
        law = LimitLaw.bulk(p, alpha, cfg)
    elif regime == "left":
        if j is None:
            raise DomainError("left-edge table needs a fixed j")
        law = LimitLaw.left_edge(p)
    elif regime == "right":
        if m is None:
            raise DomainError("right-edge table needs the codimension m")
        law = LimitLaw.right_edge(p)
    else:
        raise DomainError(f"unknown regime {regime!r}")
    limit = 1.0
    for lam in lambdas:
        limit *= law.scale ** lam * limit_moment(law, lam)
    rows = []
    for n in n_list:
        n = int(n)
        if regime == "bulk":
            jn = int(math.floor(alpha * n))
        elif regime == "left":
            jn = int(j)
        else:
            jn = n - int(m)
        val = finite_n_moment_ratio(p, n, jn, lambdas, cfg, scaled=True)
        rows.append(ConvergenceRow(n, val, limit,
                                   abs(val - limit) / abs(limit)))
    return rows


@dataclass(frozen=True)
class EmpiricalSample:
    """count x r array of skeleton draws plus the seed that made them."""

    draws: np.ndarray
    seed: int
    source: str

    def __post_init__(self):
        d = np.array(self.draws, dtype=float)
        if d.ndim != 2:
            raise DomainError("draws must be a count x r array")
        d.setflags(write=False)
        object.__setattr__(self, "draws", d)

    @property
    def count(self) -> int:
        return self.draws.shape[0]


def _skeleton_batches(n: int, j_specials: int, count: int, seed: int):
    """Yield (generator, boolean mask of the special coordinates) in
    fixed batches; draw order inside a batch is subset keys first."""
    done, chunk = 0, 0
    while done < count:
        k = min(_BATCH, count - done)
        gen = stream(seed, chunk)
        chunk += 1
        keys = gen.random((k, n))
        order = np.argsort(keys, axis=1)
        mask = np.zeros((k, n), dtype=bool)
        np.put_along_axis(mask, order[:, :j_specials], True, axis=1)
        yield gen, mask
        done += k


def sample_cube_skeleton(n: int, j: int, count: int, seed: int, *,
                         r: int = 1) -> EmpiricalSample:
    """Uniform draws from the j-skeleton of the cube [-1, 1]^n.

    Each draw picks a uniform j-subset of free coordinates (uniform on
    [-1, 1]) and fixes the rest at independent signs; the first r
    coordinates are kept.  Per batch the stream is consumed as subset
    keys, then uniforms, then signs, so output is seed-deterministic.
    """
    n, j, count, r = int(n), int(j), int(count), int(r)
    if not 0 <= j <= n:
        raise DomainError(f"skeleton index j={j} outside 0..{n}")
    if count < 1 or not 1 <= r <= n:
        raise DomainError("need count >= 1 and 1 <= r <= n")
    out = np.empty((count, r))
    done = 0
    for gen, free in _skeleton_batches(n, j, count, seed):
        k = free.shape[0]
        u = 2.0 * gen.random((k, n)) - 1.0
        signs = (2.0 * gen.integers(0, 2, size=(k, n)) - 1.0).astype(float)
        x = np.where(free, u, signs)
        out[done:done + k] = x[:, :r]
        done += k
    return EmpiricalSample(out, seed, f"cube-skeleton n={n} j={j}")


def sample_crosspolytope_skeleton(n: int, j: int, count: int, seed: int, *,
                                  r: int = 1) -> EmpiricalSample:
    """Uniform draws from the j-skeleton of the scaled crosspolytope
    { sum |x_i| <= n }.

    Each draw supports a uniform (j+1)-subset J and sets
    x_i = n sign_i E_i / sum_(k in J) E_k there (E_i standard
    exponential), zero elsewhere; the first r coordinates are kept.
    Per batch: subset keys, then exponentials, then signs.
    """
    n, j, count, r = int(n), int(j), int(count), int(r)
    if not 0 <= j <= n - 1:
        raise DomainError(f"skeleton index j={j} outside 0..{n - 1}")
    if count < 1 or not 1 <= r <= n:
        raise DomainError("need count >= 1 and 1 <= r <= n")
    out = np.empty((count, r))
    done = 0
    for gen, support in _skeleton_batches(n, j + 1, count, seed):
        k = support.shape[0]
        e = standard_exponential(gen, (k, n))
        signs = (2.0 * gen.integers(0, 2, size=(k, n)) - 1.0).astype(float)
        esel = np.where(support, e, 0.0)
        total = esel.sum(axis=1, keepdims=True)
        x = n * signs * esel / total
        out[done:done + k] = x[:, :r]
        done += k
    return EmpiricalSample(out, seed, f"crosspolytope-skeleton n={n} j={j}")


def kolmogorov_distance(values, cdf: Callable[[np.ndarray], np.ndarray],
                        atoms: Sequence = ()) -> float:
    """sup_x |F_emp(x) - F(x)| for a cdf that may carry atoms.

    atoms is a sequence of (location, mass) pairs of the reference law;
    the supremum is scanned over data points and atom locations, from
    the right (both cdfs) and from the left (cdf minus atom mass).
    """
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size == 0:
        raise DomainError("need at least one value")
    locs = np.array([a[0] for a in atoms], dtype=float)
    pts = np.unique(np.concatenate([v, locs]) if locs.size else v)
    emp_right = np.searchsorted(v, pts, side="right") / v.size
    emp_left = np.searchsorted(v, pts, side="left") / v.size
    ref = np.asarray(cdf(pts), dtype=float)
    mass = np.zeros_like(ref)
    for loc, m0 in atoms:
        mass[pts == float(loc)] += float(m0)
    return float(max(np.max(np.abs(emp_right - ref)),
                     np.max(np.abs(emp_left - (ref - mass)))))


def nu_inf_cdf(x, alpha: float) -> np.ndarray:
    """CDF of the cube-skeleton coordinate law: alpha Unif[-1, 1] plus
    mass (1-alpha)/2 at each of -1 and +1."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    xx = np.asarray(x, dtype=float)
    cont = np.clip(0.5 * (xx + 1.0), 0.0, 1.0)
    out = (alpha * cont + 0.5 * (1.0 - alpha) * (xx >= -1.0)
           + 0.5 * (1.0 - alpha) * (xx >= 1.0))
    return float(out) if xx.ndim == 0 else out


def nu_1_cdf(x, alpha: float) -> np.ndarray:
    """CDF of the crosspolytope-skeleton coordinate law: mass 1 - alpha
    at zero plus alpha times a Laplace with rate alpha (density
    (alpha/2) e^(-alpha |x|))."""
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    xx = np.asarray(x, dtype=float)
    lap = np.where(xx <= 0.0, 0.5 * np.exp(alpha * xx),
                   1.0 - 0.5 * np.exp(-alpha * xx))
    out = (1.0 - alpha) * (xx >= 0.0) + alpha * lap
    return float(out) if xx.ndim == 0 else out
