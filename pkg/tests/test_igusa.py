import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gdpkit.cfun import ZetaRational, denominator_certificate
from gdpkit.errors import InsufficientDepth, NoFit
from gdpkit.igusa import (
    CountReport,
    FitResult,
    cmd_count,
    fit_rational,
    uniformity_report,
    verify_naturality,
    zeta_coefficients,
)
from gdpkit.padic import count_roots_brute


def test_counts_for_x():
    assert cmd_count("x", [3], 4).counts == {3: (1, 1, 1, 1, 1)}


def test_counts_for_square():
    assert cmd_count("x^2", [3], 4).counts == {3: (1, 1, 3, 3, 9)}


def test_counts_for_product():
    assert cmd_count("x*y", [2], 2).counts == {2: (1, 3, 8)}


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["x^2 + y^2", "x^2 - y^3", "x*y", "x^3"]), st.sampled_from([2, 3]), st.integers(1, 3))
def test_counts_agree_with_enumeration(f, p, m):
    assert cmd_count(f, [p], m).counts[p][m] == count_roots_brute(f, p, m)


def test_poincare_to_zeta_for_x():
    rep = cmd_count("x", [5], 6)
    z = zeta_coefficients(rep.poincare(5))
    assert z == [(1 - Fraction(1, 5)) * Fraction(1, 5**k) for k in range(6)]


def test_report_json_is_deterministic_and_round_trips():
    a = cmd_count("x^2 + y^2", [2, 3], 4).to_json()
    b = cmd_count("x^2 + y^2", [2, 3], 4).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "timing" not in a
    assert CountReport.from_json(a).to_json() == a


def test_csv_mirror():
    rows = cmd_count("x", [2], 2).to_csv().strip().splitlines()
    assert rows[0].split(",")[:3] == ["prime", "m", "N_m"]
    assert len(rows) == 4


@pytest.fixture(scope="module")
def fit_x():
    return fit_rational(cmd_count("x", [2, 3, 5], 6))


def test_fit_for_x(fit_x):
    for p, f in fit_x.fits.items():
        assert f.accepted and f.pairs == ((-1, -1),)
        assert f.zeta() == ZetaRational.make({(Fraction(0), 0): 1 - Fraction(1, p)}, 0, 1, [(-1, -1)], q0=p)


def test_fit_for_square():
    res = fit_rational(cmd_count("x^2", [3, 5], 6))
    for p, f in res.fits.items():
        assert f.pairs == ((-1, -2),)
        assert f.zeta() == ZetaRational.make({(Fraction(0), 0): 1 - Fraction(1, p)}, 0, 1, [(-1, -2)], q0=p)


def test_wrong_pole_is_rejected():
    with pytest.raises(NoFit):
        fit_rational(cmd_count("x", [2, 3], 6), [[(-2, -1)]])


def test_depth_too_small():
    with pytest.raises(InsufficientDepth):
        fit_rational(cmd_count("x", [2], 2), [[(-1, -1)]])


def test_fit_reproduces_every_count(fit_x):
    rep = cmd_count("x", [2, 3, 5], 6)
    assert all(f.reproduces(rep) for f in fit_x.fits.values())


def test_certificate_round_trip(fit_x):
    for f in fit_x.fits.values():
        b, c, pairs = denominator_certificate(f.zeta())
        assert (b, c, pairs) == (0, 1, [(-1, -1)])


def test_fit_json_round_trip(fit_x):
    doc = fit_x.to_json()
    assert FitResult.from_json(doc).to_json() == doc


def test_uniformity_for_x(fit_x):
    doc = uniformity_report([fit_x])
    assert doc["uniform"] and doc["pairs"] == [[-1, -1]]
    assert doc["same_minimal_set"]
    assert "consistent with" in doc["statement"]


def test_uniformity_for_square_includes_two():
    doc = uniformity_report([fit_rational(cmd_count("x^2", [2, 3, 5], 6))])
    assert doc["uniform"] and doc["pairs"] == [[-1, -2]]


def test_uniformity_needs_two_primes(fit_x):
    one = FitResult(fit_x.polynomial, fit_x.depth, {2: fit_x.fits[2]})
    doc = uniformity_report([one])
    assert not doc["uniform"] and doc["reasons"]


def test_naturality_examples():
    rows = {(r.group, r.case): r for p in (2, 3) for r in verify_naturality(p)}
    assert all(r.ok for r in rows.values())
    three = verify_naturality(3, ["geom"])
    assert [r.direct for r in three if r.case == "i=2"] == ["9/8"]
    two = verify_naturality(2, ["qbeta", "count"])
    assert [r.integral for r in two if r.case == "beta=2"] == ["4"]
    assert [r.integral for r in two if r.case == "#{xi:rf[2] : xi*xi = xi}"] == ["2"]


def test_naturality_rejects_other_primes():
    with pytest.raises(ValueError):
        verify_naturality(7)
