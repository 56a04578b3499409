import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadicwalk.digits import DigitExpansion, Params, expand, negate, shift, swap_pairs


def digits_of(e):
    return e.digits


class TestExpand:
    def test_half(self):
        assert digits_of(expand(0.5, 3)) == (1, 1, -1, -1)

    def test_minus_one(self):
        assert digits_of(expand(-1.0, 2)) == (-1, -1, -1)

    def test_one_third_alternates(self):
        assert digits_of(expand(1.0 / 3.0, 5)) == (1, -1, 1, -1, 1, -1)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            expand(1.5, 3)
        with pytest.raises(ValueError):
            expand(0.5, -1)

    @given(st.floats(-1.0, 1.0), st.integers(0, 40))
    @settings(max_examples=300, deadline=None)
    def test_reconstruction(self, x, m):
        e = expand(x, m)
        # 2**-50 slack for float rounding in the remainder recursion
        assert abs(e.midpoint() - x) <= 2.0 ** -(m + 1) + 2.0**-50

    @given(st.floats(-1.0, 1.0), st.integers(0, 30))
    @settings(max_examples=200, deadline=None)
    def test_interval_brackets_midpoint(self, x, m):
        e = expand(x, m)
        lo, hi = e.interval()
        assert -1.0 <= lo < hi <= 1.0
        assert lo <= e.midpoint() <= hi
        assert hi - lo == 2.0**-m


class TestMaps:
    def test_shift_definition(self):
        assert digits_of(shift(DigitExpansion((1, -1, 1)))) == (-1, 1)
        assert digits_of(shift(DigitExpansion((-1, -1)))) == (-1,)

    def test_shift_depth0_rejected(self):
        with pytest.raises(ValueError):
            shift(DigitExpansion((1,)))

    def test_shift_of_third_is_minus_third(self):
        e = expand(1.0 / 3.0, 20)
        assert abs(shift(e).midpoint() + 1.0 / 3.0) < 2.0**-19

    def test_swap_pairs(self):
        assert digits_of(swap_pairs(DigitExpansion((1, -1, -1, 1)))) == (-1, 1, 1, -1)
        assert digits_of(swap_pairs(DigitExpansion((1, 1)))) == (1, 1)
        assert digits_of(swap_pairs(DigitExpansion((1, -1, 1)))) == (-1, 1, 1)

    def test_negate(self):
        assert digits_of(negate(DigitExpansion((1, -1)))) == (-1, 1)
        e = expand(0.5, 3)
        assert abs(negate(e).midpoint() + 0.5) <= 2.0**-4

    @given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=24))
    @settings(max_examples=200, deadline=None)
    def test_involutions(self, ds):
        e = DigitExpansion(tuple(ds))
        assert negate(negate(e)) == e
        assert swap_pairs(swap_pairs(e)) == e

    @given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=24),
           st.sampled_from([-1, 1]))
    @settings(max_examples=200, deadline=None)
    def test_shift_inverts_prepend(self, ds, s):
        e = DigitExpansion(tuple(ds))
        assert shift(DigitExpansion((s,) + e.digits)) == e


class TestTypes:
    def test_bad_digits_rejected(self):
        with pytest.raises(ValueError):
            DigitExpansion((1, 0, -1))
        with pytest.raises(ValueError):
            DigitExpansion(())

    def test_params_bounds(self):
        Params(0.999)
        Params(-0.999)
        for bad in (1.0, -1.0, 1.5, math.inf, math.nan):
            with pytest.raises(ValueError):
                Params(bad)

    def test_midpoint_stays_inside(self):
        assert -1.0 < DigitExpansion((1,) * 30).midpoint() < 1.0
        assert -1.0 < DigitExpansion((-1,) * 30).midpoint() < 1.0
