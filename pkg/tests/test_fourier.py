import math

import numpy as np
import pytest

from dyadicwalk.digits import Params, expand
from dyadicwalk.fourier import (
    CosineSeries,
    KernelDomainError,
    QuadratureError,
    cosine_series,
    cosine_transform,
    kernel_cf,
    kernel_series,
    reconstruct,
)
from dyadicwalk.oracle import CosKernel, integrate_weighted, v_trunc

P_HALF = Params(0.5)


class TestKernelSeries:
    def test_lam_zero_is_sinc(self):
        for om in (0.0, 0.5, 2.0, 10.0):
            got = kernel_series(0.3, om, Params(0.0))
            want = 1.0 if om == 0.0 else math.sin(om) / om
            assert got.value == pytest.approx(want, abs=1e-15)
            assert got.terms_used == 1

    def test_zero_frequency_closed_form(self):
        # at omega = 0 the series telescopes to a geometric sum
        lam = 0.5
        for phi in (-2.0, 0.0, 0.4, 3.0):
            got = kernel_series(phi, 0.0, Params(lam), tol=1e-13)
            assert got.value == pytest.approx(1.0 / (1.0 - lam * math.cos(phi)), abs=1e-12)

    def test_tiny_omega_stable(self):
        a = kernel_series(0.7, 1e-9, P_HALF).value
        b = kernel_series(0.7, 0.0, P_HALF).value
        assert a == pytest.approx(b, abs=1e-8)

    def test_records_eval_point(self):
        ev = kernel_series(0.1, 2.0, P_HALF)
        assert ev.phi == 0.1 and ev.omega == 2.0


class TestKernelContinuedFraction:
    def test_lam_zero_collapses(self):
        assert kernel_cf(0.3, 2.0, Params(0.0)) == pytest.approx(math.sin(2.0) / 2.0)

    def test_multiples_of_pi_rejected(self):
        with pytest.raises(KernelDomainError):
            kernel_cf(0.0, math.pi, P_HALF)
        with pytest.raises(KernelDomainError):
            kernel_cf(0.0, 2.0 * math.pi, P_HALF)

    def test_depth_validated(self):
        with pytest.raises(ValueError):
            kernel_cf(0.0, 1.0, P_HALF, depth=0)

    def test_agrees_with_series_at_spec_point(self):
        se = kernel_series(0.7, 2.0, P_HALF, tol=1e-12)
        cf = kernel_cf(0.7, 2.0, P_HALF, depth=60)
        assert abs(se.value - cf) < 1e-8

    def test_agreement_on_grid(self):
        rng = np.random.default_rng(29)
        p = Params(0.6)
        checked = 0
        while checked < 100:
            phi = float(rng.uniform(-math.pi, math.pi))
            om = float(rng.uniform(0.2, 6.0))
            if abs(om - math.pi * round(om / math.pi)) < 0.05:
                continue
            try:
                cf = kernel_cf(phi, om, p, depth=60)
            except KernelDomainError:
                continue
            se = kernel_series(phi, om, p, tol=1e-12)
            assert abs(se.value - cf) < 1e-8
            checked += 1


class TestCosineTransform:
    def test_at_zero_matches_mean(self):
        for lam in (0.3, 0.5, 0.7):
            got = cosine_transform(0.0, Params(lam), tol=1e-10)
            assert got == pytest.approx(2.0 / math.sqrt(1.0 - lam**2), abs=1e-8)

    def test_lam_zero(self):
        for om in (0.5, 1.0, math.pi):
            got = cosine_transform(om, Params(0.0))
            assert got == pytest.approx(2.0 * math.sin(om) / om, abs=1e-10)

    def test_even_in_omega(self):
        assert cosine_transform(2.3, P_HALF) == cosine_transform(-2.3, P_HALF)

    def test_against_oracle_at_pi(self):
        res = integrate_weighted(CosKernel(math.pi), "v", P_HALF, depth=18)
        got = cosine_transform(math.pi, P_HALF, tol=1e-10)
        assert abs(got - res.value) <= res.truncation_bound + 1e-8

    def test_unreachable_tolerance_raises(self):
        with pytest.raises(QuadratureError):
            cosine_transform(1.0, Params(0.99999), tol=1e-13)


class TestReconstruction:
    def test_lam_zero_is_constant_one(self):
        cs = cosine_series(Params(0.0), 6, tol=1e-10)
        assert cs.coeffs[0] == pytest.approx(2.0, abs=1e-9)
        for x in np.linspace(-1, 1, 9):
            assert reconstruct(float(x), cs) == pytest.approx(1.0, abs=1e-8)

    def test_pointwise_value_at_third(self):
        cs = cosine_series(P_HALF, 64, tol=1e-9)
        # Gibbs-limited: the curve jumps on every dyadic rational
        assert reconstruct(1.0 / 3.0, cs) == pytest.approx(4.0 / 3.0, abs=0.1)

    def test_more_harmonics_reduce_l2_error(self):
        cs_full = cosine_series(P_HALF, 48, tol=1e-9)
        cs_few = CosineSeries(0.5, cs_full.coeffs[:13])
        xs = np.linspace(-1.0, 1.0, 201)[1:-1]
        ref = [v_trunc(expand(float(x), 18), P_HALF) for x in xs]
        e_full = math.sqrt(sum((reconstruct(float(x), cs_full) - r) ** 2 for x, r in zip(xs, ref)))
        e_few = math.sqrt(sum((reconstruct(float(x), cs_few) - r) ** 2 for x, r in zip(xs, ref)))
        assert e_full < e_few

    def test_energy_below_squared_norm(self):
        from dyadicwalk.closedform import v_power_rec

        cs = cosine_series(P_HALF, 32, tol=1e-9)
        energy = 0.5 * cs.coeffs[0] ** 2 + sum(c * c for c in cs.coeffs[1:])
        assert energy <= v_power_rec(2, P_HALF) + 1e-6
