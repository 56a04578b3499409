import math
from fractions import Fraction

import pytest

from dyadicwalk import bernoulli
from dyadicwalk.bernoulli import (
    RationalPoly,
    c_coeffs,
    monomial_in_p,
    p_poly,
    q_poly,
    u_moment_bernoulli,
)
from dyadicwalk.closedform import u_moment, v_moment
from dyadicwalk.digits import Params
from dyadicwalk.oracle import integrate_weighted

F = Fraction


class TestFreeCoefficients:
    def test_table(self):
        cs = c_coeffs(8)
        assert cs[0] == F(1)
        assert cs[2] == F(-1, 3)
        assert cs[4] == F(7, 15)
        assert cs[6] == F(-31, 21)
        assert cs[8] == F(127, 15)

    def test_odd_vanish(self):
        cs = c_coeffs(11)
        assert all(cs[k] == 0 for k in range(1, 12, 2))

    def test_large_index_exact(self):
        # denominators grow fast; exactness must survive big integers
        cs = c_coeffs(40)
        recomputed = -sum(
            F(math.comb(40, 2 * j), 40 - 2 * j + 1) * cs[2 * j] for j in range(20)
        )
        assert cs[40] == recomputed


class TestFamily:
    def test_first_members(self):
        assert p_poly(0).coeffs == (F(1),)
        assert p_poly(1).coeffs == (F(0), F(1))
        assert p_poly(2).coeffs == (F(-1, 3), F(0), F(1))

    def test_appell_step(self):
        for n in range(1, 21):
            dn = p_poly(n).derivative()
            assert dn.coeffs == tuple(n * c for c in p_poly(n - 1).coeffs)

    def test_halving_average_eigenrelation(self):
        half = F(1, 2)
        for n in range(0, 17):
            pn = p_poly(n)
            plus = pn.compose_affine(half, half)
            minus = pn.compose_affine(half, -half)
            acc = [F(0)] * (n + 1)
            for k, c in enumerate(plus.coeffs):
                acc[k] += c
            for k, c in enumerate(minus.coeffs):
                acc[k] += c
            assert acc == [F(2, 2**n) * c for c in pn.coeffs]


class TestMonomialExpansion:
    def test_smallest(self):
        assert monomial_in_p(0) == {0: F(1)}
        assert monomial_in_p(2) == {2: F(1), 0: F(1, 3)}

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            monomial_in_p(3)

    def test_roundtrip(self):
        for n in range(0, 13, 2):
            acc = [F(0)] * (n + 1)
            for idx, w in monomial_in_p(n).items():
                for k, c in enumerate(p_poly(idx).coeffs):
                    acc[k] += w * c
            want = [F(0)] * (n + 1)
            want[n] = F(1)
            assert acc == want


class TestQPoly:
    def test_constant(self):
        lam = 0.5
        q = q_poly(0, Params(lam))
        assert q.coeffs == (pytest.approx(1.0 / (1.0 - lam)),)

    def test_lam_zero_reduces_to_monomial_expansion(self):
        for n in (0, 2, 4):
            q = q_poly(n, Params(0.0))
            want = [0.0] * (n + 1)
            for idx, w in monomial_in_p(n).items():
                for k, c in enumerate(p_poly(idx).coeffs):
                    want[k] += float(w) * float(c)
            assert list(q.coeffs) == pytest.approx(want, abs=1e-15)

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            q_poly(3, Params(0.5))

    def test_pairing_identity_n2(self):
        # v paired with Q_2, shifted by the constant term, equals the
        # u moment from the determinant route
        lam = 0.5
        p = Params(lam)
        q = q_poly(2, p)
        pairing = sum(c * v_moment(n, p) for n, c in enumerate(q.coeffs))
        assert pairing - 2.0 / ((1.0 - lam) * 3.0) == pytest.approx(u_moment(2, p), rel=1e-10)


class TestUMomentRoutes:
    @pytest.mark.parametrize("lam", (0.3, 0.5, 0.7))
    def test_agree_with_determinant(self, lam):
        p = Params(lam)
        for n in range(0, 11, 2):
            a = u_moment(n, p)
            b = u_moment_bernoulli(n, p)
            assert abs(a - b) <= 1e-9 * max(1.0, abs(a))

    def test_lam_zero(self):
        for n in (0, 2, 4):
            assert u_moment_bernoulli(n, Params(0.0)) == pytest.approx(0.0, abs=1e-15)

    def test_odd_is_zero(self):
        assert u_moment_bernoulli(5, Params(0.5)) == 0.0


class TestPairingAgainstOracle:
    def test_u_v_transfer_per_member(self):
        # oracle pairing of u with family member n vs scaled v pairing
        p = Params(0.5)
        depth = 16
        for n in (0, 1, 2, 3):
            pn = p_poly(n).as_float_poly()
            left = integrate_weighted(pn, "u", p, depth=depth)
            right = integrate_weighted(pn, "v", p, depth=depth)
            factor = 1.0 / (1.0 - p.lam / 2.0**n)
            rhs = factor * right.value - (2.0 / (1.0 - p.lam) if n == 0 else 0.0)
            allowed = left.truncation_bound + factor * right.truncation_bound
            assert abs(left.value - rhs) <= allowed


class TestRationalPoly:
    def test_eval_and_derivative(self):
        q = RationalPoly((F(1), F(-2), F(3)))
        assert q(F(1, 2)) == F(3, 4)
        assert q.derivative().coeffs == (F(-2), F(6))

    def test_compose_affine(self):
        q = RationalPoly((F(0), F(0), F(1)))  # x**2
        c = q.compose_affine(F(1, 2), F(1, 2))
        assert c.coeffs == (F(1, 4), F(1, 2), F(1, 4))
