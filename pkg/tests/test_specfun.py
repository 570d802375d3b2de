"""Special-function family: closed forms, identities, expansions."""

import math

import numpy as np
import pytest

from lpvol.errors import DomainError
from lpvol.specfun import (IJKL, PExponent, QuadConfig, as_exponent,
                           f_family, f_family_at_zero, f_family_large_t,
                           f_family_log, f_family_log_table, ijkl, kappa,
                           log_choose, log_gamma, log_kappa)

from .reference import F3_AT_ZERO, f_ref

P_GRID = (1.2, 1.5, 2.0, 3.0, 5.0)
T_GRID = (0.01, 0.1, 1.0, 10.0, 100.0)


class TestExponent:
    def test_accepts_reals_above_one(self):
        assert as_exponent(1.5) == 1.5
        assert as_exponent(PExponent(3.0)) == 3.0

    @pytest.mark.parametrize("bad", [1.0, 0.5, -2.0, math.nan, math.inf])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(DomainError):
            as_exponent(bad)


class TestClosedForms:
    def test_value_at_zero(self):
        # F(0; nu) = (2/p) Gamma((nu+1)/p)
        for p in P_GRID:
            for nu in (0.0, 0.7, 2.0, p - 2.0):
                ref = 2.0 / p * math.gamma((nu + 1.0) / p)
                assert f_family(p, 0.0, nu) == pytest.approx(ref, rel=1e-12)
                assert f_family_at_zero(p, nu) == pytest.approx(ref,
                                                               rel=1e-14)

    def test_frozen_cube_root_value(self):
        assert f_family(3.0, 0.0, 0.0) == pytest.approx(F3_AT_ZERO,
                                                        rel=1e-12)

    def test_gaussian_case(self):
        # p = 2: F(t; nu) = Gamma((nu+1)/2) (1+t)^(-(nu+1)/2)
        for t in T_GRID:
            for nu in (0.0, 1.0, 2.5):
                ref = math.gamma((nu + 1.0) / 2.0) * (1.0 + t) ** (
                    -(nu + 1.0) / 2.0)
                assert f_family(2.0, t, nu) == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("p", [1.3, 1.5, 2.7])
    def test_against_quadpack(self, p):
        for t in (0.0, 0.3, 4.0):
            for nu in (p - 2.0, 0.0, 2.0 * p - 2.0):
                ref = f_ref(p, t, nu)
                assert f_family(p, t, nu) == pytest.approx(ref, rel=1e-9)


class TestShapeAndMonotonicity:
    def test_positive_and_decreasing_in_t(self):
        ts = np.array([0.0, 0.05, 0.3, 1.0, 4.0, 20.0, 200.0])
        for p in P_GRID:
            for nu in (0.0, p - 2.0, 2.0 * p - 2.0):
                vals = np.array([f_family(p, t, nu) for t in ts])
                assert np.all(vals > 0.0)
                assert np.all(np.diff(vals) < 0.0)

    def test_log_table_matches_scalar(self):
        p = 1.7
        ts = [0.0, 0.2, 3.0]
        nus = [0.0, p - 2.0, 1.4]
        tab = f_family_log_table(p, ts, nus)
        assert tab.shape == (3, 3)
        for i, t in enumerate(ts):
            for k, nu in enumerate(nus):
                assert tab[i, k] == pytest.approx(f_family_log(p, t, nu),
                                                  rel=1e-12)


class TestIdentities:
    def test_jkl_identity(self):
        # (p-1) J = p K + 2 (p-1) t L on the pinned grid
        for p in P_GRID:
            for t in T_GRID:
                v: IJKL = ijkl(p, t)
                lhs = (p - 1.0) * v.j
                rhs = p * v.k + 2.0 * (p - 1.0) * t * v.l
                assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_derivative_identity(self):
        # d/dt F(t; nu) = -F(t; nu + 2p - 2), central differences
        for p in (1.5, 2.0, 3.0):
            for t in (0.1, 1.0, 10.0):
                for nu in (0.0, p - 2.0):
                    h = 1e-5 * max(t, 1.0)
                    fd = (f_family(p, t + h, nu)
                          - f_family(p, t - h, nu)) / (2.0 * h)
                    ref = -f_family(p, t, nu + 2.0 * p - 2.0)
                    assert fd == pytest.approx(ref, rel=1e-6)

    def test_ijkl_members_are_f_values(self):
        p, t = 2.6, 0.8
        v = ijkl(p, t)
        assert v.i == pytest.approx(f_family(p, t, 0.0), rel=1e-12)
        assert v.j == pytest.approx(f_family(p, t, p - 2.0), rel=1e-12)
        assert v.k == pytest.approx(f_family(p, t, 2.0 * p - 2.0),
                                    rel=1e-12)
        assert v.l == pytest.approx(f_family(p, t, 3.0 * p - 4.0),
                                    rel=1e-12)


class TestLargeT:
    def test_two_term_expansion_accuracy(self):
        for p in (1.5, 2.0, 3.0):
            for nu in (0.0, p - 2.0):
                asym = f_family_large_t(p, nu)
                for t in (1e4, 1e6):
                    ref = f_family(p, t, nu)
                    assert asym.two_term(t) == pytest.approx(ref, rel=1e-3)

    def test_error_decay_exponent(self):
        # two-term relative error ~ t^(-2p/(2p-2)): slope within 15%;
        # the t windows keep the error well above the quadrature floor
        for p, ts in ((1.5, (1e2, 1e3, 1e4)), (3.0, (1e3, 1e5, 1e7))):
            asym = f_family_large_t(p, 0.0)
            ts = np.array(ts)
            errs = np.array([abs(asym.two_term(t) / f_family(p, t, 0.0)
                                 - 1.0) for t in ts])
            slope = np.polyfit(np.log(ts), np.log(errs), 1)[0]
            target = -2.0 * p / (2.0 * p - 2.0)
            assert abs(slope - target) <= 0.15 * abs(target)


class TestGammaHelpers:
    def test_kappa_values(self):
        assert kappa(0) == pytest.approx(1.0, rel=1e-15)
        assert kappa(1) == pytest.approx(2.0, rel=1e-15)
        assert kappa(2) == pytest.approx(math.pi, rel=1e-15)
        assert kappa(3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-15)

    def test_log_kappa_consistency(self):
        for m in range(0, 30, 3):
            assert log_kappa(m) == pytest.approx(math.log(kappa(m)),
                                                 abs=1e-12)

    def test_log_choose(self):
        assert log_choose(10, 3) == pytest.approx(math.log(120.0),
                                                  rel=1e-14)
        assert log_choose(5, 0) == 0.0

    def test_log_gamma(self):
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi),
                                               rel=1e-14)


class TestConfig:
    def test_rejects_bad_tolerances(self):
        with pytest.raises(DomainError):
            QuadConfig(rel_tol=0.0)
        with pytest.raises(DomainError):
            QuadConfig(max_subdivisions=2)

    def test_config_sharpens_result(self):
        p, t, nu = 1.5, 0.7, -0.5
        coarse = f_family(p, t, nu, QuadConfig(rel_tol=1e-6))
        fine = f_family(p, t, nu, QuadConfig(rel_tol=1e-12))
        ref = f_ref(p, t, nu)
        assert abs(fine - ref) <= abs(coarse - ref) + 1e-12 * ref
