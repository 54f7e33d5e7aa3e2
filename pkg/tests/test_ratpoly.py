from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from evalcomb._ratpoly import (
    betting_poly,
    count_roots_between,
    esp_fractions,
    poly_derivative,
    poly_divmod,
    poly_eval,
    poly_max_reaches,
    poly_mul,
    sturm_chain,
)

F = Fraction


def test_poly_eval_horner():
    # 2 + 3x + x^2 at x = 2 is 12
    assert poly_eval([F(2), F(3), F(1)], F(2)) == F(12)


def test_poly_mul():
    # (1 + x)(1 - x) = 1 - x^2
    assert poly_mul([F(1), F(1)], [F(1), F(-1)]) == [F(1), F(0), F(-1)]


def test_poly_derivative():
    assert poly_derivative([F(5), F(3), F(2)]) == [F(3), F(4)]
    # the zero polynomial is represented as [0], never the empty list
    assert poly_derivative([F(7)]) == [F(0)]


def test_poly_divmod_reconstructs():
    p = [F(1), F(0), F(-3), F(2), F(1)]
    q = [F(-1), F(1)]
    quot, rem = poly_divmod(p, q)
    rebuilt = poly_mul(quot, q)
    rebuilt = [a + b for a, b in zip(rebuilt + [F(0)] * len(p), rem + [F(0)] * len(p))][
        : len(p)
    ]
    assert rebuilt == p
    assert len(rem) < len(q) or rem == []


rational = st.fractions(
    min_value=-5, max_value=5, max_denominator=20
)


@given(
    st.lists(rational, min_size=1, max_size=5),
    st.lists(rational, min_size=2, max_size=4),
)
@settings(max_examples=60, deadline=None)
def test_poly_divmod_property(p, q):
    if all(c == 0 for c in q):
        return
    quot, rem = poly_divmod(p, q)
    full = poly_mul(quot, q)
    width = max(len(full), len(rem), len(p))
    full = full + [F(0)] * (width - len(full))
    rem_padded = rem + [F(0)] * (width - len(rem))
    p_padded = list(p) + [F(0)] * (width - len(p))
    assert [a + b for a, b in zip(full, rem_padded)] == p_padded


class TestSturm:
    def test_two_roots_in_unit_interval(self):
        # (x - 1/2)(x - 1/4)
        p = poly_mul([F(-1, 2), F(1)], [F(-1, 4), F(1)])
        assert count_roots_between(p, F(0), F(1)) == 2

    def test_root_outside_interval(self):
        p = [F(-2), F(1)]  # x - 2
        assert count_roots_between(p, F(0), F(1)) == 0

    def test_right_endpoint_included(self):
        p = [F(-1), F(1)]  # x - 1
        assert count_roots_between(p, F(0), F(1)) == 1

    def test_left_endpoint_excluded(self):
        p = [F(0), F(1)]  # x
        assert count_roots_between(p, F(0), F(1)) == 0

    def test_double_root_counted_once(self):
        # (x - 1/3)^2 has one distinct root
        p = poly_mul([F(-1, 3), F(1)], [F(-1, 3), F(1)])
        assert count_roots_between(p, F(0), F(1)) == 1

    def test_chain_starts_with_squarefree_part(self):
        p = poly_mul([F(-1, 3), F(1)], [F(-1, 3), F(1)])
        chain = sturm_chain(p)
        assert len(chain[0]) == 2  # degree dropped from 2 to 1


def test_betting_poly_zero_eight():
    # (1 - lam)(1 + 7 lam) = 1 + 6 lam - 7 lam^2
    assert betting_poly([F(0), F(8)]) == [F(1), F(6), F(-7)]


def test_betting_poly_trivial():
    assert betting_poly([F(1), F(1)]) == [F(1)]


def test_esp_fractions_oracle():
    assert esp_fractions([F(1), F(2), F(3)]) == [F(1), F(6), F(11), F(6)]
    assert esp_fractions([F(0), F(8)]) == [F(1), F(8), F(0)]


class TestPolyMaxReaches:
    def test_interior_maximum_reached_exactly(self):
        # sup of (1 - lam)(1 + 7 lam) is 16/7 at lam = 3/7: tangency counts
        assert poly_max_reaches([F(0), F(8)], F(16, 7))

    def test_just_above_the_maximum_fails(self):
        assert not poly_max_reaches([F(0), F(8)], F(16, 7) + F(1, 10**9))

    def test_threshold_at_most_one_always_reached(self):
        # lam = 0 gives the product 1
        assert poly_max_reaches([F(1, 2), F(1, 2)], F(1))
        assert poly_max_reaches([F(1, 2)], F(1, 2))

    def test_endpoint_maximum(self):
        # (2, 1): increasing in lam, sup at lam = 1 with value 2
        assert poly_max_reaches([F(2), F(1)], F(2))
        assert not poly_max_reaches([F(2), F(1)], F(2) + F(1, 10**12))

    def test_all_ones_reaches_nothing_above_one(self):
        assert not poly_max_reaches([F(1), F(1), F(1)], F(1) + F(1, 10**9))

    def test_agrees_with_dense_rational_grid(self):
        values = [F(0), F(3), F(1, 2), F(5)]
        poly = betting_poly(values)
        grid_max = max(poly_eval(poly, F(j, 400)) for j in range(401))
        # the grid maximum is a lower bound for the true supremum
        assert poly_max_reaches(values, grid_max)
        # and a midpoint refinement is still below anything the sup misses
        assert not poly_max_reaches(values, grid_max + F(1, 2))
