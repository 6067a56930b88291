import random

from hypothesis import given, settings, strategies as st

from gdpkit.formula import RF, VG, Var, parse_formula, parse_term, to_text, vg_quantifier_count
from gdpkit.formula.transform import is_quantifier_free
from gdpkit.vgqe import (
    Trace,
    approx_linearize,
    bound_rf_function,
    check_equivalent,
    check_fiber_identity,
    eliminate_all,
    eliminate_vg_exists,
    reparameterize_linear,
    sandwich_holds,
    weak_ortho_normal_form,
)

from vg_gen import random_formula

V, X = Var("v", VG), Var("x", VG)


def test_normal_form_already_separated():
    w = weak_ortho_normal_form(parse_formula(r"cross[2](x+z) = xi /\ x+z >= 0", {"xi": "rf[2]"}))
    assert [(to_text(t), to_text(p)) for t, p in w.disjuncts] == [("0 <= x + z", "cross[2](x + z) = xi")]
    assert w.check_invariants()


def test_normal_form_membership_atom():
    w = weak_ortho_normal_form(parse_formula(r"A[4](cross[4](y)) /\ 0 <= y"))
    assert [to_text(t) for t, _ in w.disjuncts] == ["0 <= y"]


def test_cross_window_becomes_nonzero_A_element():
    f = parse_formula(r"VARS xi:rf[4]. EX y:vg. (0 <= y /\ y <= ord(4) /\ cross[4](y) = xi)")
    trace = Trace()
    g = eliminate_vg_exists(f, trace=trace)
    assert vg_quantifier_count(g) == 0
    target = parse_formula(r"A[4](xi) /\ ~ xi = 0", {"xi": "rf[4]"})
    for p in (2, 3):
        assert check_equivalent(g, target, p).ok
        assert check_equivalent(f, g, p).ok
    assert trace.to_json()


def test_pure_presburger_falls_back():
    g = eliminate_vg_exists(parse_formula(r"EX y:vg. (2*y = z /\ y >= 0)"))
    assert is_quantifier_free(g)
    assert check_equivalent(g, parse_formula(r"z >= 0 /\ z ≡{2} 0"), 2).ok


def test_mixed_even_and_cross():
    f = parse_formula(r"VARS xi:rf[4]. EX y:vg. (0 <= y /\ 2*y = z /\ cross[4](y) = xi)")
    g = eliminate_vg_exists(f)
    assert vg_quantifier_count(g) == 0
    assert check_equivalent(f, g, 2, window=(0, 12)).ok
    assert check_equivalent(f, g, 3, window=(0, 12)).ok


def test_reparameterize_pure_presburger():
    X_ = parse_formula(r"0 <= x /\ x <= z")
    r = reparameterize_linear(X_, [X])
    assert r.new_vars == [] and r.gamma == []


def test_reparameterize_cross_window():
    X_ = parse_formula(r"VARS xi:rf[4]. 0 <= x /\ x <= ord(4) /\ cross[4](x) = xi")
    r = reparameterize_linear(X_, [X])
    assert [(z.sort, n) for z, n, _ in r.new_vars] == [(RF(4), 4)]
    assert check_fiber_identity(r, X_, [X], 2)


def test_bound_constant_function():
    n, gs = bound_rf_function(parse_formula("v = y"), V)
    assert n == 1 and len(gs) == 1


def test_bound_indicator_of_zero_residue():
    G = parse_formula(r"(xi = 0 /\ v = ord(2)) \/ (~ xi = 0 /\ v = 0)", {"xi": "rf[2]"})
    n, gs = bound_rf_function(G, V)
    assert n == 2
    assert sandwich_holds(n, gs, G, V, 2) and sandwich_holds(n, gs, G, V, 3)


def test_linear_function_is_its_own_approximation():
    n, parts = approx_linearize(parse_formula("v = x"), V, [X])
    assert n == 1 and len(parts) == 1


def test_parity_split_is_exact():
    G = parse_formula(r"(x ≡{2} 0 /\ v = x) \/ (x ≡{2} 1 /\ v = x - 1)")
    n, parts = approx_linearize(G, V, [X])
    assert n == 1 and len(parts) == 2


def test_cross_dependent_offset():
    G = parse_formula(r"(cross[2](x) = 0 /\ v = x + ord(2)) \/ (~ cross[2](x) = 0 /\ v = x)")
    n, parts = approx_linearize(G, V, [X])
    assert n == 2 and len(parts) == 1
    (part,) = parts
    assert part.g.den == 1 and part.g.num == parse_term("x")


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_random_elimination_is_sound_and_idempotent(seed):
    f = parse_formula(random_formula(random.Random(seed)))
    g = eliminate_all(f)
    assert vg_quantifier_count(g) == 0
    assert check_equivalent(f, g, 2).ok
    h = eliminate_all(g)
    assert check_equivalent(g, h, 3).ok
