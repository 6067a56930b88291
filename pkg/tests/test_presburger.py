import pytest
from hypothesis import given, settings, strategies as st

from gdpkit.errors import NotPresburger, UnboundVariable
from gdpkit.formula import FALSE, VG, Var, parse_formula
from gdpkit.formula.transform import is_quantifier_free
from gdpkit.presburger import enumerate_box, eval_assignment, pres_cells, pres_qe, rectilinearize

Y = Var("y", VG)


def test_parity_elimination():
    g = pres_qe(parse_formula("EX y:vg. 2*y = z"))
    assert is_quantifier_free(g)
    assert enumerate_box(g, {"z": (-30, 30)}) == [(z,) for z in range(-30, 31) if z % 2 == 0]


def test_shifted_multiples():
    g = pres_qe(parse_formula(r"EX y:vg. (y >= 0 /\ z = 3*y + 1)"))
    want = [(z,) for z in range(-30, 31) if z >= 1 and z % 3 == 1]
    assert enumerate_box(g, {"z": (-30, 30)}) == want


def test_even_between_bounds():
    g = pres_qe(parse_formula(r"EX y:vg. (z1 <= 2*y /\ 2*y <= z2)"))
    pts = enumerate_box(g, {"z1": (-20, 20), "z2": (-20, 20)})
    want = [(a, b) for a in range(-20, 21) for b in range(-20, 21) if any(a <= 2 * y <= b for y in range(-10, 11))]
    assert sorted(pts) == sorted(want)


def test_residue_atoms_are_rejected():
    with pytest.raises(NotPresburger):
        pres_qe(parse_formula("EX y:vg. cross[2](y) = 1"))


def test_one_cell_with_stride():
    (cell,) = pres_cells(parse_formula(r"0 <= y /\ y <= z /\ y ≡{2} 1"), Y)
    assert (cell.c, cell.ell, cell.r) == (1, 2, 1)


def test_disjoint_half_lines():
    cells = pres_cells(parse_formula(r"y >= 0 \/ y <= -5"), Y)
    assert len(cells) == 2
    for y in range(-40, 40):
        hits = sum(c.contains(y, {}) for c in cells)
        assert hits == (1 if y >= 0 or y <= -5 else 0)


def test_scaled_cell_membership():
    f = parse_formula(r"3 <= 2*y /\ 2*y <= z")
    (cell,) = pres_cells(f, Y)
    assert cell.c == 2
    for z in range(0, 41):
        for y in range(-5, 25):
            assert cell.contains(y, {"z": z}) == (3 <= 2 * y <= z)


def test_enumerate_box_basics():
    assert enumerate_box(parse_formula("z ≡{2} 0"), {"z": (0, 5)}) == [(0,), (2,), (4,)]
    assert enumerate_box(FALSE, {"z": (0, 5)}) == []


def test_eval_assignment_valuations():
    assert eval_assignment(parse_formula("y < inf"), {"y": 7})
    assert eval_assignment(parse_formula("ord(4) = 2"), {}, 2)
    assert eval_assignment(parse_formula("ord(4) = 0"), {}, 3)
    with pytest.raises(UnboundVariable):
        eval_assignment(parse_formula("y < z"), {"y": 1}, 2)


def test_rectilinearize_shift():
    (piece,) = rectilinearize(parse_formula("x >= y"), [Var("x", VG)])
    assert piece.free_dim == 1
    for y in range(-5, 6):
        for x in range(y, y + 10):
            (w,) = piece.apply({"x": x, "y": y})
            assert w == x - y
            assert piece.invert((w,), {"y": y}) == {"x": x}


def test_rectilinearize_even_points_are_bounded():
    X = parse_formula(r"0 <= x /\ x <= 2*y /\ x ≡{2} 0")
    pieces = rectilinearize(X, [Var("x", VG)])
    for y in range(0, 31):
        images = []
        for x in range(0, 2 * y + 1, 2):
            owners = [pc for pc in pieces if eval_assignment(pc.part, {"x": x, "y": y})]
            assert len(owners) == 1
            images.append((id(owners[0]), owners[0].apply({"x": x, "y": y})))
        assert len(set(images)) == len(images)
        assert all(pc.free_dim == 0 for pc in pieces)


# random single-quantifier formulas against a windowed brute force ------------------------------

_coef = st.integers(-3, 3)


@st.composite
def _atoms(draw):
    a = draw(st.integers(1, 3)) * draw(st.sampled_from([1, -1]))
    b, c = draw(_coef), draw(st.integers(-4, 4))
    lhs = f"{a}*y + {b}*z + {c}"
    if draw(st.booleans()):
        return f"{lhs} {draw(st.sampled_from(['<', '<=', '=']))} 0"
    d = draw(st.integers(2, 3))
    return f"{lhs} ≡{{{d}}} {draw(st.integers(0, d - 1))}"


@settings(max_examples=40, deadline=None)
@given(st.lists(_atoms(), min_size=1, max_size=3))
def test_qe_matches_windowed_search(atoms):
    body = parse_formula(r" /\ ".join(atoms))
    g = pres_qe(parse_formula("EX y:vg. " + r" /\ ".join(f"({a})" for a in atoms)))
    assert is_quantifier_free(g)
    for z in range(-10, 11):
        want = any(eval_assignment(body, {"y": y, "z": z}) for y in range(-120, 121))
        assert eval_assignment(g, {"z": z}) == want
