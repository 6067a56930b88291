from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gdpkit.cfun import (
    BDD,
    INT,
    ATerm,
    ZetaRational,
    cfun_to_zeta,
    clears_with,
    denominator_certificate,
    eval_cfun,
    locus,
    parse_cfun,
    sum_lemma_trl,
    sum_over_interval,
    sum_over_vg,
)
from gdpkit.errors import FormulaSyntaxError
from gdpkit.formula import VG, Var, parse_term

Y = Var("y", VG)
Q = (2, 3, 5)


# finite differences ---------------------------------------------------------------------------


def test_trl_geometric():
    form = sum_lemma_trl([1], 0)
    assert form.coeffs == (1,)
    assert form.series(10) == {n: 1 for n in range(11)}


def test_trl_linear_and_square():
    assert sum_lemma_trl([0, 1], 1).coeffs == (1, 1)
    assert list(sum_lemma_trl([0, 1], 1).series(60).values()) == list(range(61))
    assert list(sum_lemma_trl([0, 0, 1], 0).series(60).values()) == [n * n for n in range(61)]


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5), st.integers(-15, 15))
def test_trl_series_reproduces_polynomial(P, a):
    s = sum_lemma_trl(P, a).series(a + 30)
    for n, c in s.items():
        want = sum(pk * n**k for k, pk in enumerate(P)) if n >= a else 0
        assert c == want


# the coefficient ring -----------------------------------------------------------------------


def test_geometric_coefficient_value():
    assert ATerm.geometric(2).eval(3) == Fraction(9, 8)


@given(st.integers(-3, 3), st.integers(1, 3), st.integers(-3, 3), st.integers(1, 3))
def test_aterm_ring_operations_commute_with_evaluation(e1, i1, e2, i2):
    a = ATerm.qpower(e1) * ATerm.geometric(i1)
    b = ATerm.qpower(e2, 3) - ATerm.geometric(i2)
    for q in (2, 3, Fraction(7, 2)):
        assert (a + b).eval(q) == a.eval(q) + b.eval(q)
        assert (a * b).eval(q) == a.eval(q) * b.eval(q)


# evaluation -----------------------------------------------------------------------------------


def test_count_factor_over_idempotents():
    assert eval_cfun(parse_cfun("#{xi:rf[2] : xi*xi = xi}"), {}, p=2) == 2


def test_ord_constant_power():
    assert eval_cfun(parse_cfun("q^(ord(4))"), {}, p=2) == 4


def test_parse_rejects_bad_divisor():
    with pytest.raises(FormulaSyntaxError):
        parse_cfun("q^(-y) / (1 - q^(y))")


# summation --------------------------------------------------------------------------------------


def test_geometric_sum():
    g, h = sum_over_vg(parse_cfun("q^(-y)*[0 <= y]"), [Y])
    assert eval_cfun(h, {}, p=3) == 0
    for q in Q:
        assert eval_cfun(g, {}, p=q) == 1 / (1 - Fraction(1, q))


def test_weighted_geometric_sum():
    g, _ = sum_over_vg(parse_cfun("y*q^(-y)*[1 <= y]"), [Y])
    for q in Q:
        r = Fraction(1, q)
        assert eval_cfun(g, {}, p=q) == r / (1 - r) ** 2


def test_interval_sum_with_symbolic_upper_bound():
    g, _ = sum_over_interval(parse_cfun("q^(y)"), Y, parse_term("0"), parse_term("b"))
    for b in range(11):
        assert eval_cfun(g, {"b": b}, p=3) == Fraction(3 ** (b + 1) - 1, 2)


def test_double_geometric_sum():
    y1, y2 = Var("y1", VG), Var("y2", VG)
    g, _ = sum_over_vg(parse_cfun(r"q^(-y1-y2)*[0 <= y1 /\ 0 <= y2]"), [y1, y2])
    for q in Q:
        assert eval_cfun(g, {}, p=q) == 1 / (1 - Fraction(1, q)) ** 2


def test_even_exponents():
    g, _ = sum_over_vg(parse_cfun(r"q^(-y)*[0 <= y /\ y ≡{2} 0]"), [Y])
    assert [eval_cfun(g, {}, p=q) for q in (2, 3)] == [Fraction(4, 3), Fraction(9, 8)]


def test_empty_variable_list_is_identity():
    f = parse_cfun("q^(x)*[0 <= x]")
    g, _ = sum_over_vg(f, [])
    assert all(eval_cfun(g, {"x": x}, p=2) == eval_cfun(f, {"x": x}, p=2) for x in range(-3, 4))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(-4, 4), st.integers(1, 3), st.sampled_from(Q))
def test_shifted_geometric_sums(a, lo, k, q):
    f = parse_cfun(f"{k}*q^(-{a}*y)*[{lo} <= y]")
    g, h = sum_over_vg(f, [Y])
    r = Fraction(1, q**a)
    assert eval_cfun(h, {}, p=q) == 0
    assert eval_cfun(g, {}, p=q) == k * r**lo / (1 - r)


# loci ---------------------------------------------------------------------------------------------


def test_decaying_function_is_integrable_everywhere():
    h = locus(parse_cfun("q^(-y)*[0 <= y]"), Y, INT)
    assert eval_cfun(h, {}, p=2) == 0


def test_growth_needs_vanishing_coefficient():
    h = locus(parse_cfun("x*q^(y)*[0 <= y]"), Y, INT)
    for x in range(-5, 6):
        assert eval_cfun(h, {"x": x}, p=3) == x * x


def test_linear_growth_is_unbounded():
    h = locus(parse_cfun("y*[0 <= y]"), Y, BDD)
    assert eval_cfun(h, {}, p=2) != 0


# rational zeta functions ------------------------------------------------------------------------

ONE = (Fraction(0), 0)


def test_cancel_identical_factor():
    z = ZetaRational.make({ONE: 1, (Fraction(-1), 1): -1}, 0, 1, [(-1, -1)]).normalize()
    assert z.pairs == () and z == ZetaRational.one()


def test_cancel_one_of_two_factors():
    z = ZetaRational.make({ONE: 1, (Fraction(-1), 1): -1}, 0, 1, [(-1, -1), (-1, -1)]).normalize()
    assert len(z.pairs) == 1


def test_sum_with_one():
    z = (ZetaRational.make({ONE: 1}, 0, 1, [(-1, -1)]) + ZetaRational.one()).normalize()
    q, t = 3, Fraction(1, 5)
    assert z.eval(q, t) * (1 - t / q) == 2 - t / q


def test_certificates():
    assert denominator_certificate(ZetaRational.make({ONE: 1, (Fraction(-1), 0): -1}, 0, 1, [(-1, -1)])) == (0, 1, [(-1, -1)])
    assert denominator_certificate(ZetaRational.monomial(0, 2)) == (2, 1, [])
    z = ZetaRational.make({ONE: 1}, 0, 2, [(-1, -2)])
    assert denominator_certificate(z) == (0, 2, [(-1, -2)])
    assert clears_with(z, [(-1, -2)]) and not clears_with(z, [(-1, -1)])


def test_uncleared_rational_function():
    z = ZetaRational.make({ONE: 1}, 0, 1, [(-1, -1)])
    assert not clears_with(z, [(-2, -1)])


@given(st.integers(1, 3), st.integers(1, 3), st.sampled_from(Q))
def test_zeta_arithmetic_commutes_with_evaluation(a, b, q):
    x = ZetaRational.make({ONE: 1}, 0, 1, [(-a, -1)])
    y = ZetaRational.make({(Fraction(-1), 1): 2}, 1, 1, [(-1, -b)])
    t = Fraction(1, 7)
    assert (x + y).eval(q, t) == x.eval(q, t) + y.eval(q, t)
    assert (x * y).eval(q, t) == x.eval(q, t) * y.eval(q, t)


def test_summed_function_converts_to_zeta():
    g, _ = sum_over_vg(parse_cfun("(1 - q^(-1))*q^(-y)*t^(y)*[0 <= y]"), [Y])
    z = cfun_to_zeta(g)
    assert denominator_certificate(z) == (0, 1, [(-1, -1)])
    for p in Q:
        assert z.eval(p, Fraction(1, 3)) == (1 - Fraction(1, p)) / (1 - Fraction(1, 3 * p))
