from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gdpkit.errors import InsufficientPrecision
from gdpkit.formula import parse_formula
from gdpkit.padic import (
    A_set,
    Character,
    Cyclo,
    IntPoly,
    PadicElement,
    ResidueRingElem,
    StepFunction,
    char_sum,
    count_roots_brute,
    count_roots_levels,
    count_roots_mod,
    cross,
    eval_formula_model,
    fourier_step,
    frac_p,
    gauss_sum,
    measure,
)


def test_angular_component_and_cross():
    assert int(PadicElement.exact(2, 8).ac(4)) == 1
    assert cross(2, 4, 1) == 2 and cross(2, 4, 2) == 4
    assert A_set(2, 4) == [0, 1, 2, 4]
    zero = PadicElement.exact(2, 0)
    assert int(zero.ac(4)) == 0 and zero.ord() == float("inf")


def test_model_evaluation():
    x = PadicElement.approx(2, 8, 6)
    assert eval_formula_model(parse_formula(r"ord{x} >= 0 /\ ac[4]{x} = 1"), {"x": x}, 2)
    with pytest.raises(InsufficientPrecision):
        eval_formula_model(parse_formula("ord{x} >= 5"), {"x": PadicElement.big_o(2, 3)}, 2)
    xi = ResidueRingElem(2, 4, 3)
    assert not eval_formula_model(parse_formula("A[4](xi)", {"xi": "rf[4]"}), {"xi": xi}, 2)


def test_ball_measure():
    assert measure(parse_formula("ord{x} >= 3"), 2) == Fraction(1, 8)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("k", range(6))
def test_annulus_measure(p, k):
    assert measure(parse_formula(f"ord{{x}} = {k}"), p) == (1 - Fraction(1, p)) * Fraction(1, p**k)


def test_odd_valuation_series():
    S = parse_formula(r"ac[1]{x} = 1 /\ ord{x} >= -1 /\ ord{x} ≡{2} 1")
    # strata ord x = -1, 1, 3, ... each of measure 3^(-k-1)
    assert measure(S, 3) == Fraction(9, 8)


def test_root_counts():
    assert count_roots_mod("x", 5, 4) == 1
    assert count_roots_mod("x^2", 3, 2) == 3
    assert count_roots_mod("x*y", 2, 2) == 8
    assert count_roots_levels("x^2", 3, 4) == [1, 1, 3, 3, 9]


_polys = st.sampled_from(["x^2 - y^3", "x^2 + y^2", "x*y - 2", "x^3 - x", "3*x^2 + 9", "x^2*y + y^3"])


@settings(max_examples=30, deadline=None)
@given(_polys, st.sampled_from([2, 3, 5]), st.integers(1, 3))
def test_lifting_tree_matches_enumeration(f, p, m):
    assert count_roots_mod(f, p, m) == count_roots_brute(f, p, m)


def test_polynomial_parsing():
    f = IntPoly.parse("x^2 - y^3")
    assert f(3, 2) == 1 and f.nvars == 2


def test_character_values():
    assert Character(3)(0) == Cyclo.rational(1)
    for p in (3, 5, 7):
        total = char_sum(lambda x: x, range(p), Character(p))
        assert total.is_zero()


def test_gauss_sum_for_three():
    # 1 + 2·ζ_3
    g = gauss_sum(3)
    assert g == Cyclo.rational(1) + Cyclo.root(3, 1) * 2
    assert g.abs2() == Cyclo.rational(3)


@given(st.fractions(), st.sampled_from([2, 3, 5]))
def test_fractional_part_splits_off_integers(x, p):
    f = frac_p(x, p)
    assert 0 <= f < 1
    rest = x - f
    assert rest.denominator % p != 0


def test_fourier_of_unit_ball():
    for p in (2, 3):
        one = StepFunction.indicator_ball(p)
        F1 = fourier_step(one)
        assert F1.equals(StepFunction.indicator_ball(p, r=1))
        assert fourier_step(F1).equals(one.scale(Fraction(1, p)))
    assert fourier_step(StepFunction.zero(2)).equals(StepFunction.zero(2))
