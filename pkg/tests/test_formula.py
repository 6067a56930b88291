import random

import pytest
from hypothesis import given, settings, strategies as st

from gdpkit.errors import FormulaSyntaxError, SortError
from gdpkit.formula import (
    RF,
    VG,
    And,
    Cross,
    Exists,
    RFEq,
    Var,
    dnf_clauses,
    formula_from_json,
    formula_to_json,
    nnf,
    normal_form,
    parse_formula,
    parse_term,
    substitute,
    to_text,
    typecheck,
)

from vg_gen import random_formula


def test_parse_existential():
    f = parse_formula("EX y:vg. 2*y = z")
    assert isinstance(f, Exists)
    assert f.var == Var("y", VG)
    assert to_text(f) == "EX y:vg. 2*y = z"


def test_cross_atom_has_residue_sort():
    f = parse_formula(r"cross[4](x) = xi /\ x >= 0", {"xi": "rf[4]"})
    assert isinstance(f, And)
    atom = f.args[0]
    assert isinstance(atom, RFEq) and isinstance(atom.lhs, Cross)
    assert atom.lhs.n == 4 and atom.rhs.sort == RF(4)


def test_cross_of_residue_variable_is_ill_sorted():
    with pytest.raises(SortError, match="r"):
        parse_formula("cross[3](r) = 0", {"r": "rf[2]"})


def test_syntax_error_reports_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("y < < z")
    assert info.value.col == 5


def test_typecheck_reduction_maps():
    t = parse_term("res[4->2](xi)", RF(2), {"xi": "rf[4]"})
    assert t.sort == RF(2)
    with pytest.raises(SortError):
        parse_term("res[4->3](xi)", RF(3), {"xi": "rf[4]"})


def test_typecheck_ord_constant():
    f = parse_formula("EX y:vg. y = ord(4)")
    assert typecheck(f) == f


def test_substitute_constant():
    f = substitute(parse_formula("y < z"), Var("z", VG), parse_term("3"))
    assert to_text(f) == "y < 3"


def test_substitute_avoids_capture():
    f = substitute(parse_formula("EX y:vg. y < z"), Var("z", VG), Var("y", VG))
    assert isinstance(f, Exists) and f.var.name != "y"
    assert to_text(f) == f"EX {f.var.name}:vg. {f.var.name} < y"


def test_substitute_checks_sorts():
    with pytest.raises(SortError):
        substitute(parse_formula("y < z"), Var("z", VG), Var("r", RF(2)))


def test_nnf_flips_comparisons():
    assert to_text(nnf(parse_formula("~(y < z)"))) == "z <= y"
    g = nnf(parse_formula(r"~(y < z /\ cross[2](y) = 1)"))
    assert to_text(g) == r"z <= y \/ ~cross[2](y) = 1"


def test_dnf_distributes():
    g = normal_form(parse_formula(r"(y < 1 \/ y > 3) /\ z = 0"), "DNF")
    assert to_text(g) == r"y < 1 /\ z = 0 \/ 3 < y /\ z = 0"
    assert len(dnf_clauses(g)) == 2


def test_ord_constants_are_normalized():
    f = parse_formula(r"VARS xi:rf[4]. EX y:vg. (0 <= y /\ y <= ord(4) /\ cross[4](y) = xi)")
    assert "2*ord(2)" in to_text(f)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_text_and_json_round_trip(seed):
    f = parse_formula(random_formula(random.Random(seed)))
    assert formula_from_json(formula_to_json(f)) == f
    assert parse_formula(to_text(f)) == f
