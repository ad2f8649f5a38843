import pytest

from jetspace.classify import (CLASSES, HOLDS, UNKNOWN, ClassifyReport, LevelRow, classify_singularities,
                               crosscheck, mld_route, singular_fiber_generators)
from jetspace.groebner import EMPTY
from jetspace.mld import MldStatus
from jetspace.poly import Polynomial

R3 = ("x", "y", "z")
R4 = ("x", "y", "z", "w")

A1 = [Polynomial.parse("x*y - z^2", R3)]
ODP = [Polynomial.parse("x^2 + y^2 + z^2 + w^2", R4)]
CONE = [Polynomial.parse("x^3 + y^3 + z^3", R3)]
PLANE = [Polynomial.parse("z - x*y", R3)]


def test_a1_surface():
    rep = classify_singularities(A1, 2, 4)
    assert [row.dim for row in rep.levels] == [0, 3, 5, 7, 9]
    assert rep.verdicts == {"log_canonical": HOLDS, "canonical": HOLDS, "terminal": "REFUTED(1)"}


def test_ordinary_double_point():
    rep = classify_singularities(ODP, 3, 3)
    assert [row.dim for row in rep.levels] == [0, 4, 7, 10]
    assert all(rep.holds(c) for c in CLASSES)


def test_elliptic_cone():
    rep = classify_singularities(CONE, 2, 3)
    assert [row.dim for row in rep.levels] == [0, 3, 6, 8]
    assert rep.holds("log_canonical")
    assert rep.verdict("canonical") == "REFUTED(2)"
    assert rep.verdict("terminal") == "REFUTED(1)"


def test_smooth_surface_has_no_singular_jets():
    rep = classify_singularities(PLANE, 2, 2)
    assert all(row.dim is EMPTY for row in rep.levels)
    assert all(rep.holds(c) for c in CLASSES)


def test_singular_fiber_generators_adds_level_zero_minors():
    gens, ring = singular_fiber_generators(A1, 3, 1)
    assert Polynomial.var("x_0", ring) in gens and Polynomial.var("y_0", ring) in gens


def test_input_validation():
    with pytest.raises(ValueError):
        classify_singularities(A1, 3, 2)
    with pytest.raises(ValueError):
        classify_singularities([], 2, 2)
    with pytest.raises(ValueError):
        classify_singularities(A1, 2, -1)


def test_unknown_on_timeout():
    rep = classify_singularities(ODP, 3, 3, pair_limit=1)
    assert UNKNOWN in rep.verdicts.values() or any(v.startswith("REFUTED") for v in rep.verdicts.values())
    assert any(row.dim is None for row in rep.levels)
    assert rep.levels[-1].to_json()["dim"] == "UNKNOWN"


@pytest.mark.parametrize("dims", [[0, 3, 5, 7], [0, 3, 6, 8], [0, 4, 7, 10], [0, 2, 6, 9], [0, 3, 7, 8]])
def test_refutation_cascades_to_stronger_classes(dims):
    d = 2 if dims[1] < 4 else 3
    rep = ClassifyReport(d, len(dims) - 1, [LevelRow(m, x, ((m + 1) * d, (m + 1) * d - 1, (m + 1) * d - 2))
                                            for m, x in enumerate(dims)])
    held = [rep.holds(c) for c in CLASSES]
    # a weaker class failing forces every stronger one to fail
    for weak, strong in zip(held, held[1:]):
        if weak is False:
            assert strong is False


def test_json_shape():
    data = classify_singularities(A1, 2, 1).to_json()
    assert sorted(data) == ["d", "levels", "m_max", "verdicts"]
    assert data["levels"][1] == {"m": 1, "dim": 3, "threshold_lc": 4, "threshold_can": 3, "threshold_term": 2}


@pytest.mark.parametrize("F,d,m", [(A1, 2, 4), (ODP, 3, 3), (CONE, 2, 3)])
def test_agrees_with_mld_route(F, d, m):
    rep = classify_singularities(F, d, m)
    route = mld_route(F)
    assert all(route[c] is not MldStatus.INCONCLUSIVE for c in CLASSES)
    assert all(crosscheck(rep, route).values())
