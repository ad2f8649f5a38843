import random

import pytest
from hypothesis import given, settings, strategies as st

from jetspace.lifting import (NOT_IN_STRATUM, NOT_STABILIZED, LiftStatus, MinorProfile, NotInJetScheme, ProfileError,
                              brute_force_lift, enumerate_profiles, greenberg_probe, in_stratum, liftable_denef,
                              lifts_to_level, minor_order_profile, off_block_min_order, reduced_lift_equations,
                              sample_jets, stratum_orders)
from jetspace.poly import Polynomial
from jetspace.series import INFINITY, JetPoint, evaluate, ord, parse_jet

CUSP = [Polynomial.parse("x^2 - y^3", ("x", "y"))]
NODE = [Polynomial.parse("x*y - z^2", ("x", "y", "z"))]
R4 = ("x", "y", "z", "w")
C2 = [Polynomial.parse("x*y - z*w", R4), Polynomial.parse("x^2 - y*w", R4)]
LINE = [Polynomial.parse("a", ("a", "b"))]


def jet(text, n, p):
    return parse_jet(text, n, p)


# -- profiles ---------------------------------------------------------------------

def test_profile_of_cusp_arc():
    prof = minor_order_profile(CUSP, jet("t^3; t^2", 2, 8))
    assert prof.e == (3,) and prof.col_perm == (0, 1)


def test_profile_smooth():
    prof = minor_order_profile(LINE, jet("0; 1 + t", 2, 3))
    assert prof.e == (0,)


def test_profile_not_in_stratum():
    assert minor_order_profile(CUSP, jet("0; 0", 2, 2)) is NOT_IN_STRATUM


def test_profile_prefers_smaller_order_column():
    prof = minor_order_profile(CUSP, jet("0; t", 2, 2))
    assert prof.e == (2,) and prof.col_perm == (1, 0)


def test_profile_realizes_stratum_orders():
    rng = random.Random(5)
    for u in sample_jets(C2, 4, 4, rng, 15, prefix=[(0, 0, 0, 0)]):
        prof = minor_order_profile(C2, u)
        if prof is NOT_IN_STRATUM:
            continue
        assert list(prof.e) == sorted(prof.e)
        assert in_stratum(C2, u, prof)
        for full, lead in stratum_orders(C2, u, prof):
            assert full == lead


def test_enumerate_profiles_shapes():
    profiles = list(enumerate_profiles(1, 3, 2))
    assert {p.col_perm[0] for p in profiles} == {0, 1, 2}
    assert all(p.e == (2,) for p in profiles)
    two = list(enumerate_profiles(2, 4, 2))
    assert {p.e for p in two} == {(0, 2), (1, 2), (2, 2)}
    assert all(p.top == 2 for p in two)


# -- the criterion -------------------------------------------------------------------

def test_denef_exact_arc():
    u = jet("t^3; t^2", 2, 8)
    assert liftable_denef(CUSP, u, minor_order_profile(CUSP, u)).liftable


def test_denef_certified_negative():
    u = jet("0; t", 2, 2)
    v = liftable_denef(CUSP, u, minor_order_profile(CUSP, u))
    assert v.status is LiftStatus.NOT_LIFTABLE
    assert v.failing_order == (3, 5)


def test_denef_smooth():
    rng = random.Random(2)
    for u in sample_jets(LINE, 2, 3, rng, 10):
        prof = minor_order_profile(LINE, u)
        assert prof.e == (0,)
        assert liftable_denef(LINE, u, prof).liftable


def test_denef_preconditions():
    with pytest.raises(NotInJetScheme):
        liftable_denef(CUSP, jet("t; t", 2, 2), MinorProfile((0,), (0, 1), (0,)))
    with pytest.raises(ProfileError):
        liftable_denef(CUSP, jet("0; t", 2, 1), MinorProfile((2,), (1, 0), (0,)))


# -- reduced equations ------------------------------------------------------------------

def test_reduced_cusp_base_case():
    prof = MinorProfile((2,), (1, 0), (0,))
    eqs = reduced_lift_equations(CUSP, prof, 2)
    assert len(eqs) == 2
    # t^3 and t^4 coefficients of x(u~)^2 - y(u~)^3 on level-2 jets
    vec = jet("0; t", 2, 2).coefficient_vector()
    assert [g.evaluate(vec) for g in eqs] == [-1, 0]


def test_reduced_count_codim_two():
    prof = MinorProfile((1, 2), (0, 1, 2, 3), (0, 1))
    assert len(reduced_lift_equations(C2, prof, 3)) == 2


@settings(max_examples=15)
@given(st.integers(0, 4), st.integers(0, 4), st.integers(2, 5))
def test_reduced_count_is_top_order(a, b, p):
    e = tuple(sorted((a, b)))
    if e[1] > p:
        return
    prof = MinorProfile(e, (0, 1, 2, 3), (0, 1))
    assert len(reduced_lift_equations(C2, prof, p)) == e[1]


@pytest.mark.parametrize("F,n", [(CUSP, 2), (NODE, 3), (C2, 4)])
def test_reduced_system_matches_criterion(F, n):
    rng = random.Random(17)
    checked = 0
    for p in range(1, 5):
        for prefix in ([], [(0,) * n]):
            for u in sample_jets(F, n, p, rng, 4, prefix=prefix):
                prof = minor_order_profile(F, u)
                if prof is NOT_IN_STRATUM or prof.top > p:
                    continue
                vec = u.coefficient_vector()
                vanish = all(g.evaluate(vec) == 0 for g in reduced_lift_equations(F, prof, p))
                assert vanish == liftable_denef(F, u, prof).liftable
                checked += 1
    assert checked >= 10


@pytest.mark.parametrize("F,n", [(CUSP, 2), (NODE, 3), (C2, 4)])
def test_off_block_entries_have_high_order(F, n):
    rng = random.Random(23)
    for p in range(1, 5):
        for u in sample_jets(F, n, p, rng, 5, prefix=[(0,) * n]):
            prof = minor_order_profile(F, u)
            if prof is NOT_IN_STRATUM:
                continue
            assert off_block_min_order(F, u, prof) >= prof.top


# -- brute force ------------------------------------------------------------------------------

def test_brute_certified_negative():
    v = brute_force_lift(CUSP, jet("0; t", 2, 2), target_cap=7)
    assert v.status is LiftStatus.NOT_LIFTABLE


def test_brute_exact_arc_witness():
    u = jet("t^3; t^2", 2, 3)
    v = brute_force_lift(CUSP, u, target_cap=10)
    assert v.status is LiftStatus.LIFTABLE
    w = v.witness
    assert w.truncate(3) == u
    assert all(ord(evaluate(f, w)) is INFINITY for f in CUSP)


def test_brute_node_agrees_with_criterion():
    u = jet("t; t; t", 3, 1)
    prof = minor_order_profile(NODE, u)
    assert brute_force_lift(NODE, u).liftable is True
    assert liftable_denef(NODE, u, prof).liftable is True


def test_brute_rejects_jets_off_the_scheme():
    with pytest.raises(NotInJetScheme):
        brute_force_lift(NODE, jet("t; t^2; t", 3, 2))


def arc_truncation(F_name, rng, p):
    def poly(low):
        return [0] * low + [rng.randint(-2, 2) for _ in range(p + 1 - low)]

    def mul(a, b):
        out = [0] * (p + 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                if i + j <= p:
                    out[i + j] += x * y
        return out

    a, b, c = poly(1), poly(0), poly(0)
    if F_name == "cusp":
        return JetPoint.from_coeffs([mul(mul(a, a), a), mul(a, a)], p)
    if F_name == "node":
        return JetPoint.from_coeffs([mul(a, mul(b, b)), mul(a, mul(c, c)), mul(a, mul(b, c))], p)
    return JetPoint.from_coeffs([mul(a, b), mul(a, mul(b, b)), mul(a, mul(b, mul(b, b))), a], p)


@pytest.mark.parametrize("name,F", [("cusp", CUSP), ("node", NODE), ("c2", C2)])
def test_arc_truncations_lift_by_both_routes(name, F):
    rng = random.Random(31)
    for p in range(1, 5):
        for _ in range(3):
            u = arc_truncation(name, rng, p)
            prof = minor_order_profile(F, u)
            assert brute_force_lift(F, u).liftable is True
            if prof is not NOT_IN_STRATUM and prof.top <= p:
                assert liftable_denef(F, u, prof).liftable is True


def test_lifts_to_level():
    assert lifts_to_level(CUSP, jet("t^3; t^2", 2, 3), 6)
    assert not lifts_to_level(CUSP, jet("0; t", 2, 2), 4)


# -- greenberg ------------------------------------------------------------------------------

def test_greenberg_smooth():
    assert greenberg_probe(LINE, 3, 8) == 3


def test_greenberg_cusp_and_node_stabilize():
    p = greenberg_probe(CUSP, 2, 8)
    assert p is not NOT_STABILIZED and p <= 8
    q = greenberg_probe(NODE, 1, 6, n_samples=8)
    assert q is not NOT_STABILIZED and q <= 6


def test_greenberg_budget_exhaustion():
    assert greenberg_probe(CUSP, 2, 3) is NOT_STABILIZED
