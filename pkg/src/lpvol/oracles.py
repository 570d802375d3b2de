"""Independent reference values: limit-case closed forms and brute force.

Everything here deliberately avoids the in-house adaptive quadrature and
the F-family tables.  Ball, box, crosspolytope and ellipsoid intrinsic
volumes come from published closed forms or 1-D integrals evaluated with
scipy's QUADPACK bindings; parallel-body volumes come from hit-or-miss
Monte Carlo backed by an exact Euclidean projection onto the ball.  The
test suite plays these references against the exactvol routines, and the
command-line `validate` suites reuse them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import erf

from .errors import ConvergenceFailure, DomainError
from .exactvol import PBallSpec
from .rng import stream
from .specfun import QuadConfig, kappa, log_choose, log_kappa
from .symfun import elementary_symmetric

__all__ = [
    "McConfig",
    "ball_vj", "cube_vj", "crosspolytope_vj", "ellipsoid_vj",
    "project_lp_ball", "steiner_mc_volume",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo controls: total draws, stream seed, draws per batch.

    Results are bitwise reproducible given (sample_count, seed, batch):
    batch b consumes its own counter-based substream keyed (seed, b), so
    merging is order-independent.
    """

    sample_count: int = 100_000
    seed: int = 0
    batch: int = 65_536

    def __post_init__(self):
        if not (isinstance(self.sample_count, int)
                and self.sample_count >= 10_000):
            raise DomainError(
                f"sample_count must be an int >= 10^4, got "
                f"{self.sample_count!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2 ** 64):
            raise DomainError(f"seed must be a 64-bit int, got {self.seed!r}")
        if not (isinstance(self.batch, int) and self.batch >= 1):
            raise DomainError(f"batch must be a positive int, got "
                              f"{self.batch!r}")


def _check_index(n: int, j: int, hi: int):
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"dimension must be a positive int, got {n!r}")
    if not (isinstance(j, (int, np.integer)) and 0 <= j <= hi):
        raise DomainError(f"index {j!r} outside 0..{hi}")


def _quad_rel(cfg: QuadConfig | None) -> float:
    # QUADPACK bottoms out near 1e-12 relative; clip requests below that
    return 1e-11 if cfg is None else max(cfg.rel_tol, 1e-12)


def _positive_vector(values, n: int, what: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (n,):
        raise DomainError(f"{what} must have shape ({n},), got {v.shape}")
    if not (np.all(np.isfinite(v)) and np.all(v > 0.0)):
        raise DomainError(f"{what} must be finite and positive")
    return v


def ball_vj(n: int, j: int) -> float:
    """V_j of the unit Euclidean ball: C(n,j) kappa_n / kappa_(n-j)."""
    _check_index(n, j, n)
    return math.exp(log_choose(n, j) + log_kappa(n) - log_kappa(n - j))


def cube_vj(n: int, j: int, half_sides: Sequence[float] = None) -> float:
    """V_j of the box prod_i [-h_i, h_i]: 2^j sigma_j(h).

    half_sides = None means the unit cube [-1, 1]^n, where the formula
    collapses to C(n,j) 2^j.
    """
    _check_index(n, j, n)
    if half_sides is None:
        return math.comb(n, j) * 2.0 ** j
    h = _positive_vector(half_sides, n, "half_sides")
    return 2.0 ** j * float(elementary_symmetric(h)[j])


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) * _INV_SQRT_2PI


def crosspolytope_vj(n: int, j: int, cfg: QuadConfig = None,
                     weights: Sequence[float] = None) -> float:
    """V_j of the crosspolytope conv{+-e_i / a_i} by 1-D quadrature.

    Unit case: 2^(j+1) C(n,j+1) ((j+1)/j!) int_0^inf phi(sqrt(j+1) x)
    (2 Phi(x) - 1)^(n-j-1) dx with phi, Phi the standard normal density
    and distribution function.  Weighted case: the same integral summed
    over all (j+1)-subsets L with weight (sum_L a_i^2) / prod_L a_i.
    j = n is the exact volume 2^n / (n! prod a_i).
    """
    _check_index(n, j, n)
    rel = _quad_rel(cfg)
    if weights is not None:
        a = _positive_vector(weights, n, "weights")
    if j == n:
        log_v = n * math.log(2.0) - math.lgamma(n + 1.0)
        if weights is not None:
            log_v -= float(np.log(a).sum())
        return math.exp(log_v)
    if weights is None:
        s = math.sqrt(j + 1.0)

        def integrand(x):
            return _phi(s * x) * erf(x / _SQRT2) ** (n - j - 1)

        val, _ = integrate.quad(integrand, 0.0, np.inf,
                                epsabs=1e-13, epsrel=rel, limit=200)
        return (2.0 ** (j + 1) * math.comb(n, j + 1)
                * (j + 1) / math.factorial(j) * val)
    total = 0.0
    for L in itertools.combinations(range(n), j + 1):
        mask = np.zeros(n, dtype=bool)
        mask[list(L)] = True
        s2 = float(np.sum(a[mask] ** 2))
        s = math.sqrt(s2)
        rest = a[~mask]

        def integrand(x, s=s, rest=rest):
            return _phi(s * x) * float(np.prod(erf(rest * x / _SQRT2)))

        val, _ = integrate.quad(integrand, 0.0, np.inf,
                                epsabs=1e-13, epsrel=rel, limit=200)
        total += s2 / float(np.prod(a[mask])) * val
    return 2.0 ** (j + 1) / math.factorial(j) * total


def ellipsoid_vj(semiaxes: Sequence[float], j: int, cfg: QuadConfig = None,
                 form: str = "A") -> float:
    """V_j of the ellipsoid with the given semiaxes b, by 1-D quadrature.

    Two published representations:

        form A (j = 0..n-1):
            kappa_j sum_i b_i^2 sigma_j(b^2 without i)
            int_0^inf t^(j+1) / ((1 + b_i^2 t^2)
                                 prod_r (1 + b_r^2 t^2)^(1/2)) dt
        form B (j = 1..n): same with sigma_(j-1) and t^(j-1).

    On the overlap j = 1..n-1 the two agree (non-trivially), which the
    test suite checks.
    """
    if form not in ("A", "B"):
        raise DomainError(f"form must be 'A' or 'B', got {form!r}")
    b = np.asarray(semiaxes, dtype=float)
    n = b.shape[0] if b.ndim == 1 else 0
    b = _positive_vector(b, n, "semiaxes")
    if n < 2:
        raise DomainError("ellipsoid oracle needs dimension >= 2")
    lo = 0 if form == "A" else 1
    hi = n - 1 if form == "A" else n
    if not (isinstance(j, (int, np.integer)) and lo <= j <= hi):
        raise DomainError(f"form {form} covers j in {lo}..{hi}, got {j!r}")
    rel = _quad_rel(cfg)
    b2 = b * b
    power = j + 1 if form == "A" else j - 1
    k = j if form == "A" else j - 1
    total = 0.0
    for i in range(n):
        sig = float(elementary_symmetric(np.delete(b2, i))[k])

        def integrand(t, bi2=float(b2[i])):
            q = 1.0 + b2 * (t * t)
            return t ** power / ((1.0 + bi2 * t * t)
                                 * math.sqrt(float(np.prod(q))))

        val, _ = integrate.quad(integrand, 0.0, np.inf,
                                epsabs=1e-13, epsrel=rel, limit=200)
        total += float(b2[i]) * sig * val
    return kappa(j) * total


def _inner_coordinate_solve(x: np.ndarray, c: np.ndarray,
                            p: float) -> np.ndarray:
    """Solve y + c y^(p-1) = x coordinatewise for y in [0, x], x >= 0.

    The left side is strictly increasing in y, so plain bisection is
    safe for every p > 1; p = 2 is linear and solved directly.
    """
    if p == 2.0:
        return x / (1.0 + c)
    lo = np.zeros_like(x)
    hi = x.copy()
    e = p - 1.0
    for _ in range(54):
        mid = 0.5 * (lo + hi)
        above = mid + c * mid ** e > x
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


def _project_outside(spec: PBallSpec, x: np.ndarray) -> np.ndarray:
    """Project points with gauge > 1 onto the boundary (coordinates >= 0).

    KKT system: y_i + mu p a_i^p y_i^(p-1) = x_i with multiplier mu > 0
    chosen so that sum_i (a_i y_i)^p = 1.  The residual is decreasing in
    mu; an outer doubling bracket plus bisection pins it down.
    """
    p = spec.p
    apow = spec.weights ** p
    awt = spec.weights[None, :]

    def resid(mu):
        y = _inner_coordinate_solve(x, (p * mu)[:, None] * apow[None, :], p)
        return np.sum((awt * y) ** p, axis=1) - 1.0, y

    k = x.shape[0]
    mu_lo = np.zeros(k)
    mu_hi = np.ones(k)
    for _ in range(200):
        r, _ = resid(mu_hi)
        open_ = r > 0.0
        if not np.any(open_):
            break
        mu_lo = np.where(open_, mu_hi, mu_lo)
        mu_hi = np.where(open_, 2.0 * mu_hi, mu_hi)
    else:
        raise ConvergenceFailure("projection multiplier bracket ran away")
    for _ in range(64):
        mid = 0.5 * (mu_lo + mu_hi)
        r, _ = resid(mid)
        pos = r > 0.0
        mu_lo = np.where(pos, mid, mu_lo)
        mu_hi = np.where(pos, mu_hi, mid)
    r, y = resid(0.5 * (mu_lo + mu_hi))
    if np.max(np.abs(r)) > 1e-10:
        raise ConvergenceFailure(
            f"projection residual {np.max(np.abs(r)):.3e} above 1e-10")
    return y


def _project_batch(spec: PBallSpec, pts: np.ndarray) -> np.ndarray:
    out = np.array(pts, dtype=float)
    gauge_p = np.sum(np.abs(out * spec.weights[None, :]) ** spec.p, axis=1)
    need = gauge_p > 1.0
    if np.any(need):
        x = out[need]
        y = _project_outside(spec, np.abs(x))
        out[need] = np.copysign(y, x)
    return out


def project_lp_ball(spec: PBallSpec, x: Sequence[float]) -> np.ndarray:
    """Euclidean projection of x onto the weighted p-ball.

    Interior points come back unchanged; exterior points land on the
    boundary with gauge residual below 1e-10 (ConvergenceFailure
    otherwise).
    """
    pt = np.asarray(x, dtype=float)
    if pt.shape != (spec.n,):
        raise DomainError(f"point must have shape ({spec.n},), got "
                          f"{pt.shape}")
    if not np.all(np.isfinite(pt)):
        raise DomainError("point must be finite")
    return _project_batch(spec, pt[None, :])[0]


def _offset_contains(spec: PBallSpec, pts: np.ndarray,
                     t: float) -> np.ndarray:
    """Membership mask for the parallel body B + t B_2^n.

    Two cheap distance bounds classify almost every point: the radial
    chord ||x|| (1 - gauge^(-1)) from above and the support-plane gap
    ||x|| - h(x / ||x||) from below.  Only the sliver between them pays
    for an exact projection.
    """
    a = spec.weights
    p = spec.p
    gauge_p = np.sum(np.abs(pts * a[None, :]) ** p, axis=1)
    res = gauge_p <= 1.0
    if t == 0.0 or not np.any(~res):
        return res
    x = pts[~res]
    norm = np.linalg.norm(x, axis=1)
    gauge = gauge_p[~res] ** (1.0 / p)
    d_up = norm * (1.0 - 1.0 / gauge)
    q = p / (p - 1.0)
    h = np.sum((np.abs(x) / (norm[:, None] * a[None, :])) ** q,
               axis=1) ** (1.0 / q)
    d_lo = norm - h
    hit = d_up <= t
    sliver = ~hit & ~(d_lo > t)
    if np.any(sliver):
        xs = x[sliver]
        ys = np.copysign(_project_outside(spec, np.abs(xs)), xs)
        hit[sliver] = np.linalg.norm(xs - ys, axis=1) <= t
    out = res.copy()
    out[~res] = hit
    return out


def steiner_mc_volume(spec: PBallSpec, t: float,
                      mc: McConfig) -> tuple[float, float]:
    """Hit-or-miss Monte Carlo volume of B + t B_2^n for n in {2, 3}.

    Uniform draws over the tight bounding box prod [-1/a_i - t,
    1/a_i + t]; returns (estimate, standard error) with the binomial
    standard error of the hit count.
    """
    if spec.n not in (2, 3):
        raise DomainError(f"Monte Carlo oracle covers n in {{2, 3}}, got "
                          f"n={spec.n}")
    t = float(t)
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"offset distance must be >= 0, got {t}")
    half = 1.0 / spec.weights + t
    box_vol = float(np.prod(2.0 * half))
    total = mc.sample_count
    hits = 0
    done = 0
    chunk = 0
    while done < total:
        size = min(mc.batch, total - done)
        gen = stream(mc.seed, chunk)
        pts = (2.0 * gen.random((size, spec.n)) - 1.0) * half[None, :]
        hits += int(np.count_nonzero(_offset_contains(spec, pts, t)))
        done += size
        chunk += 1
    rate = hits / total
    estimate = box_vol * rate
    std_err = box_vol * math.sqrt(max(rate * (1.0 - rate), 0.0) / total)
    return estimate, std_err
