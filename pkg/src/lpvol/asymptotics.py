"""Phase-function analysis and high-dimension growth laws.

The large-n behaviour of the volume coefficients is governed by

    Psi_(p,beta)(theta) = ((1-beta)/2) log theta + beta log I(theta)
                          + (1-beta) log J(theta)

whose unique interior maximizer theta* solves theta J/I = (1-beta) p /
(2 (p-1) beta).  This module solves that critical equation, evaluates
the three Laplace regimes (bulk index j ~ beta n, fixed j, fixed
codimension m = n - j), the exponential volume profile g_p(alpha) of the
rescaled balls, reference profiles for the limiting polytope cases, and
surface-area growth.  Everything is analytic except 1-D maximizations
and the F-family quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import erf, log_ndtr

from .errors import ConvergenceFailure, DomainError
from .logspace import LogValue
from .specfun import (QuadConfig, _cfg, as_exponent, f_family_log_table,
                      log_choose)

__all__ = [
    "PhasePoint", "ProfilePoint", "ProfileReferences",
    "phase", "phase_maximizer", "phase_second_derivative",
    "bulk_asymptotic", "left_edge_asymptotic", "right_edge_asymptotic",
    "exp_profile", "profile_references", "surface_area_asymptotic",
]

_LOG2 = math.log(2.0)
_SQRT2 = math.sqrt(2.0)
_PHASE_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class PhasePoint:
    """Solved critical point of the phase function for one (p, beta).

    residual is |theta* J/I / rhs - 1| of the critical equation; the
    constructor enforces the 1e-10 contract and the strict concavity
    psi2_at_star < 0.
    """

    p: float
    beta: float
    theta_star: float
    psi_at_star: float
    psi2_at_star: float
    residual: float

    def __post_init__(self):
        if not (0.0 < self.beta < 1.0):
            raise DomainError(f"beta must be in (0, 1), got {self.beta}")
        if not (math.isfinite(self.theta_star) and self.theta_star > 0.0):
            raise ConvergenceFailure(
                f"phase maximizer is not positive finite: {self.theta_star}")
        if not self.psi2_at_star < 0.0:
            raise ConvergenceFailure(
                f"phase curvature must be negative, got {self.psi2_at_star}")
        if not self.residual <= _PHASE_RESIDUAL_TOL:
            raise ConvergenceFailure(
                f"critical-equation residual {self.residual:.3e} above "
                f"{_PHASE_RESIDUAL_TOL}")


@dataclass(frozen=True)
class ProfilePoint:
    """One sample of the exponential volume profile g_p.

    g_value = kappa_term + sup_psi, where kappa_term collects the
    Stirling/prefactor contribution and sup_psi the phase maximum.
    """

    alpha: float
    g_value: float
    kappa_term: float
    sup_psi: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must be in [0, 1], got {self.alpha}")
        gap = abs(self.g_value - (self.kappa_term + self.sup_psi))
        if not gap <= 1e-10 * max(1.0, abs(self.g_value)):
            raise DomainError("profile decomposition is inconsistent")


class ProfileReferences(NamedTuple):
    """Closed/semi-closed profiles of the limiting bodies at one alpha."""

    g_inf: float
    g_2: float
    g_1: float
    g_simplex: float


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (math.isfinite(beta) and 0.0 < beta < 1.0):
        raise DomainError(f"beta must be in (0, 1), got {beta!r}")
    return beta


def _log_ijk(p: float, theta: float, cfg: QuadConfig):
    nus = np.array([0.0, p - 2.0, 2.0 * p - 2.0])
    row = f_family_log_table(p, [theta], nus, cfg)[0]
    return float(row[0]), float(row[1]), float(row[2])


def phase(p, beta, theta, cfg: QuadConfig = None) -> float:
    """Psi_(p,beta)(theta) for theta > 0."""
    p = as_exponent(p)
    beta = _check_beta(beta)
    theta = float(theta)
    if not (math.isfinite(theta) and theta > 0.0):
        raise DomainError(f"theta must be positive, got {theta!r}")
    logi, logj, _ = _log_ijk(p, theta, _cfg(cfg))
    return (0.5 * (1.0 - beta) * math.log(theta)
            + beta * logi + (1.0 - beta) * logj)


def _log_g_and_slope(p: float, s: float, cfg: QuadConfig):
    """log g and theta g'/g at theta = e^s, where g = theta J/I.

    g' = [I (J/2 + pK/(2(p-1))) + theta J K] / I^2 from the JKL identity,
    so theta g'/g = 1/2 + pK/(2(p-1)J) + theta K/I; every term is a
    bounded F-ratio, which keeps the Newton step conditioned for any
    theta.
    """
    theta = math.exp(s)
    logi, logj, logk = _log_ijk(p, theta, cfg)
    log_g = s + logj - logi
    slope = (0.5 + 0.5 * p / (p - 1.0) * math.exp(logk - logj)
             + math.exp(s + logk - logi))
    return log_g, slope, logi, logj, logk


def phase_maximizer(p, beta, cfg: QuadConfig = None) -> PhasePoint:
    """Solve the critical equation theta J/I = (1-beta)p/(2(p-1)beta).

    The auxiliary g(theta) = theta J/I is strictly increasing from 0 to
    infinity, so a doubling bracket in log theta followed by safeguarded
    Newton (analytic slope) cannot miss.  Psi'' at the root comes from
    the analytic form -beta (K/I) g'/g.
    """
    p = as_exponent(p)
    beta = _check_beta(beta)
    cfg = _cfg(cfg)
    log_rhs = (math.log1p(-beta) + math.log(p)
               - math.log(2.0 * (p - 1.0)) - math.log(beta))

    def w_at(s):
        log_g, slope, logi, logj, logk = _log_g_and_slope(p, s, cfg)
        return log_g - log_rhs, slope, logi, logj, logk

    s_lo = s_hi = 0.0
    w, slope, logi, logj, logk = w_at(0.0)
    if w < 0.0:
        for _ in range(400):
            s_lo = s_hi
            s_hi += 2.0 * _LOG2
            w, slope, logi, logj, logk = w_at(s_hi)
            if w >= 0.0:
                break
        else:
            raise ConvergenceFailure("phase bracket walked off the line")
        s = s_hi
    elif w > 0.0:
        for _ in range(400):
            s_hi = s_lo
            s_lo -= 2.0 * _LOG2
            w, slope, logi, logj, logk = w_at(s_lo)
            if w <= 0.0:
                break
        else:
            raise ConvergenceFailure("phase bracket walked off the line")
        s = s_lo
    else:
        s = 0.0
    for _ in range(100):
        if w > 0.0:
            s_hi = s
        elif w < 0.0:
            s_lo = s
        if abs(w) <= 1e-14:
            break
        step = -w / slope
        s_next = s + step
        if not (s_lo < s_next < s_hi and math.isfinite(s_next)):
            s_next = 0.5 * (s_lo + s_hi)
        if s_next == s:
            break
        s = s_next
        w, slope, logi, logj, logk = w_at(s)
    theta = math.exp(s)
    psi = (0.5 * (1.0 - beta) * s + beta * logi + (1.0 - beta) * logj)
    psi2 = -beta * math.exp(logk - logi) * slope / theta
    return PhasePoint(p, beta, theta, psi, psi2, abs(math.expm1(w)))


def phase_second_derivative(p, beta, theta, cfg: QuadConfig = None) -> float:
    """Analytic Psi'' at an arbitrary theta (not only the maximizer).

    Uses the derivative identity twice: (log I)'' = (F4 I - K^2)/I^2 and
    (log J)'' = (F5 J - L^2)/J^2 with F4, F5 the family members at
    nu = 4p-4 and 5p-6.
    """
    p = as_exponent(p)
    beta = _check_beta(beta)
    theta = float(theta)
    if not (math.isfinite(theta) and theta > 0.0):
        raise DomainError(f"theta must be positive, got {theta!r}")
    cfg = _cfg(cfg)
    nus = np.array([0.0, p - 2.0, 2.0 * p - 2.0, 3.0 * p - 4.0,
                    4.0 * p - 4.0, 5.0 * p - 6.0])
    logi, logj, logk, logl, logf4, logf5 = (
        float(v) for v in f_family_log_table(p, [theta], nus, cfg)[0])
    curv_i = math.exp(2.0 * (logk - logi)) * math.expm1(
        logf4 + logi - 2.0 * logk)
    curv_j = math.exp(2.0 * (logl - logj)) * math.expm1(
        logf5 + logj - 2.0 * logl)
    return (-0.5 * (1.0 - beta) / theta ** 2
            + beta * curv_i + (1.0 - beta) * curv_j)


def _check_dim(n, name="n") -> int:
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"{name} must be a positive int, got {n!r}")
    return int(n)


def bulk_asymptotic(p, n, j, cfg: QuadConfig = None) -> LogValue:
    """Laplace approximation of V_j for j/n in the interior.

    Evaluated literally at beta = j/n: prefactor
    p (p-1)^(n-j-1) n C(n-1, j) / (2 pi^((n-j)/2) Gamma((j+p)/p)),
    the K/(theta J) boundary factor at theta*, exp(n Psi(theta*)),
    and the Gaussian width sqrt(2 pi / (n |Psi''|)).
    """
    p = as_exponent(p)
    n = _check_dim(n)
    if not (isinstance(j, (int, np.integer)) and 0 < j < n):
        raise DomainError(f"bulk regime needs 0 < j < n, got j={j!r}")
    j = int(j)
    cfg = _cfg(cfg)
    pp = phase_maximizer(p, j / n, cfg)
    logi, logj_, logk = _log_ijk(p, pp.theta_star, cfg)
    log_pref = (math.log(p) + (n - j - 1) * math.log(p - 1.0)
                + math.log(n) + log_choose(n - 1, j) - _LOG2
                - 0.5 * (n - j) * math.log(math.pi)
                - math.lgamma((j + p) / p))
    log_ratio = logk - logj_ - math.log(pp.theta_star)
    log_width = 0.5 * (math.log(2.0 * math.pi) - math.log(n)
                       - math.log(-pp.psi2_at_star))
    return LogValue.from_log(log_pref + log_ratio + n * pp.psi_at_star
                             + log_width)


def left_edge_asymptotic(p, n, j) -> float:
    """Fixed-j growth law: V_j ~ (c_p)^j n^(j(1-1/p)) / j! with

        c_p = (2 sqrt(pi))^(1/p) (Gamma(1/(2p-2)) / (p-1))^(1-1/p).
    """
    p = as_exponent(p)
    n = _check_dim(n)
    if not (isinstance(j, (int, np.integer)) and j >= 0):
        raise DomainError(f"left edge needs j >= 0, got {j!r}")
    j = int(j)
    if j == 0:
        return 1.0
    log_c = (math.log(2.0 * math.sqrt(math.pi)) / p
             + (1.0 - 1.0 / p) * (math.lgamma(1.0 / (2.0 * p - 2.0))
                                  - math.log(p - 1.0)))
    return math.exp(-math.lgamma(j + 1.0) + j * log_c
                    + j * (1.0 - 1.0 / p) * math.log(n))


def right_edge_asymptotic(p, n, m) -> LogValue:
    """Fixed-codimension growth law for V_(n-m):

        Gamma(m/2)/(2 Gamma(m)) (p(p-1)Gamma(1-1/p)/(pi Gamma(1/p)))^(m/2)
        ((2/p)Gamma(1/p))^n n^(m/2) / Gamma((n+p-m)/p).
    """
    p = as_exponent(p)
    n = _check_dim(n)
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise DomainError(f"right edge needs m >= 1, got {m!r}")
    m = int(m)
    if n < m:
        raise DomainError(f"codimension {m} exceeds dimension {n}")
    log_val = (math.lgamma(0.5 * m) - _LOG2 - math.lgamma(m)
               + 0.5 * m * (math.log(p) + math.log(p - 1.0)
                            + math.lgamma(1.0 - 1.0 / p) - math.log(math.pi)
                            - math.lgamma(1.0 / p))
               + n * (_LOG2 + math.lgamma(1.0 / p) - math.log(p))
               + 0.5 * m * math.log(n) - math.lgamma((n + p - m) / p))
    return LogValue.from_log(log_val)


def exp_profile(p, alpha, cfg: QuadConfig = None) -> ProfilePoint:
    """Exponential profile g_p(alpha) = kappa_p(alpha) + sup Psi_(p,alpha).

    Endpoints use closed forms: g_p(0) = 0 and
    g_p(1) = log(2 (e p)^(1/p) Gamma(1+1/p)).
    """
    p = as_exponent(p)
    alpha = float(alpha)
    if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must be in [0, 1], got {alpha!r}")
    if alpha == 0.0:
        kap = math.log(p - 1.0) - 0.5 * math.log(math.pi)
        return ProfilePoint(0.0, 0.0, kap, -kap)
    if alpha == 1.0:
        kap = (1.0 + math.log(p)) / p
        sup = _LOG2 + math.lgamma(1.0 + 1.0 / p)
        return ProfilePoint(1.0, kap + sup, kap, sup)
    kap = ((alpha / p) * (1.0 - math.log(alpha / p))
           + (1.0 - alpha) * math.log(p - 1.0)
           - alpha * math.log(alpha) - (1.0 - alpha) * math.log(1.0 - alpha)
           - 0.5 * (1.0 - alpha) * math.log(math.pi))
    sup = phase_maximizer(p, alpha, cfg).psi_at_star
    return ProfilePoint(alpha, kap + sup, kap, sup)


def _golden_newton_max(value, slope, curvature, lo: float, hi: float) -> float:
    """Maximize a smooth strictly concave function on [lo, hi].

    Golden-section search isolates the maximizer, then a few Newton
    steps on the derivative polish it; the bracket [0, 10] used by the
    callers comfortably contains the maximizer for every alpha of
    interest (the inner maximizer grows only like sqrt(log(1/alpha))).
    """
    ratio = 0.5 * (math.sqrt(5.0) - 1.0)
    a, b = lo, hi
    c = b - ratio * (b - a)
    d = a + ratio * (b - a)
    fc, fd = value(c), value(d)
    for _ in range(60):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = value(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = value(d)
    x = 0.5 * (a + b)
    for _ in range(8):
        step = slope(x) / curvature(x)
        x_next = min(max(x - step, lo), hi)
        if abs(x_next - x) <= 1e-15 * max(1.0, abs(x)):
            x = x_next
            break
        x = x_next
    return value(x)


def _x_log_x(x: float) -> float:
    return x * math.log(x) if x > 0.0 else 0.0


def _sup_crosspolytope(alpha: float) -> float:
    """sup over t >= 0 of -alpha t^2/2 + (1-alpha) log(2 Phi(t) - 1)."""
    if alpha in (0.0, 1.0):
        return 0.0

    def rate(t):
        # 2 phi(t) / (2 Phi(t) - 1), the log-derivative of the second term
        return (2.0 * math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)
                / erf(t / _SQRT2))

    return _golden_newton_max(
        lambda t: (-0.5 * alpha * t * t
                   + (1.0 - alpha) * math.log(erf(t / _SQRT2))),
        lambda t: -alpha * t + (1.0 - alpha) * rate(t),
        lambda t: -alpha - (1.0 - alpha) * rate(t) * (t + rate(t)),
        1e-8, 10.0)


def _sup_simplex(alpha: float) -> float:
    """sup over x of -alpha x^2/2 + (1-alpha) log Phi(x)."""
    if alpha == 0.0:
        return 0.0
    if alpha == 1.0:
        return 0.0

    def rate(x):
        # phi(x) / Phi(x), the log-derivative of log Phi
        return math.exp(-0.5 * x * x - 0.5 * math.log(2.0 * math.pi)
                        - log_ndtr(x))

    return _golden_newton_max(
        lambda x: -0.5 * alpha * x * x + (1.0 - alpha) * float(log_ndtr(x)),
        lambda x: -alpha * x + (1.0 - alpha) * rate(x),
        lambda x: -alpha - (1.0 - alpha) * rate(x) * (x + rate(x)),
        0.0, 10.0)


def profile_references(alpha) -> ProfileReferences:
    """The four limiting profiles at one alpha: cube, ball, crosspolytope
    and simplex (each body rescaled to exponential volume growth)."""
    alpha = float(alpha)
    if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must be in [0, 1], got {alpha!r}")
    entropy = -_x_log_x(alpha) - _x_log_x(1.0 - alpha)
    g_inf = entropy + alpha * _LOG2
    g_2 = (-_x_log_x(alpha) - 0.5 * _x_log_x(1.0 - alpha)
           + 0.5 * alpha * math.log(2.0 * math.pi * math.e))
    g_1 = (alpha * math.log(2.0 * math.e) - 2.0 * _x_log_x(alpha)
           - _x_log_x(1.0 - alpha) + float(_sup_crosspolytope(alpha)))
    g_simplex = (alpha - 2.0 * _x_log_x(alpha) - _x_log_x(1.0 - alpha)
                 + _sup_simplex(alpha))
    return ProfileReferences(g_inf, g_2, g_1, g_simplex)


def surface_area_asymptotic(p, n, normalized: bool = False):
    """Surface-area growth law.

    normalized=False: LogValue of the raw boundary measure asymptote
    (p(p-1)Gamma(1-1/p)/Gamma(1/p))^(1/2) ((2/p)Gamma(1/p))^n sqrt(n)
    / Gamma((n+p-1)/p), which is twice the right-edge law at m = 1.
    normalized=True: surface area of the ball rescaled to unit volume,
    2 e^(1/p) sqrt(pi (p-1) / (p sin(pi/p))) sqrt(n), returned as a
    plain float.
    """
    p = as_exponent(p)
    n = _check_dim(n)
    if normalized:
        return (2.0 * math.exp(1.0 / p)
                * math.sqrt(math.pi * (p - 1.0)
                            / (p * math.sin(math.pi / p)))
                * math.sqrt(n))
    log_val = (0.5 * (math.log(p) + math.log(p - 1.0)
                      + math.lgamma(1.0 - 1.0 / p) - math.lgamma(1.0 / p))
               + n * (_LOG2 + math.lgamma(1.0 / p) - math.log(p))
               + 0.5 * math.log(n) - math.lgamma((n + p - 1.0) / p))
    return LogValue.from_log(log_val)
