"""The eleven acceptance criteria. Each test records one PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from jetspace.classify import HOLDS, classify_singularities, crosscheck, mld_route
from jetspace.groebner import EMPTY
from jetspace.jets import SubschemeSpec
from jetspace.lifting import (NOT_IN_STRATUM, LiftStatus, brute_force_lift, liftable_denef, minor_order_profile,
                              off_block_min_order, reduced_lift_equations, sample_jets)
from jetspace.mld import (MldStatus, OracleKind, PairSpec, cylinder_codim, inversion_adjunction_check,
                          mld_lower_bound_test, monomial_mld_oracle, semicontinuity_probe)
from jetspace.poly import PolyMatrix, Polynomial, jacobi_minor_identity_residual, symbolic_matrix
from jetspace.series import parse_jet

from conftest import ACCEPTANCE

R2, R3, R4 = ("x", "y"), ("x", "y", "z"), ("x", "y", "z", "w")


def P(text, ring):
    return Polynomial.parse(text, ring)


def origin(ring):
    return SubschemeSpec(tuple(Polynomial.gens(ring)), "0")


def record(num, ok, detail, start):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  ({time.monotonic() - start:.1f} s) {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


LIFT_EXAMPLES = {
    "cusp": [P("x^2 - y^3", R2)],
    "node": [P("x*y - z^2", R3)],
    "codim2": [P("x*y - z*w", R4), P("x^2 - y*w", R4)],
}

# every cylinder computed in criteria 5 to 9, rechecked for level stability in criterion 11
CYLINDERS: list[tuple] = []


def collect(pair, verdict):
    for e, contacts, m, codim, _ in verdict.table:
        if codim is not None:
            CYLINDERS.append((pair, e, contacts, m, codim))
    return verdict


def sweep(pair, tau, bounds):
    return collect(pair, mld_lower_bound_test(pair, tau, bounds))


# -- 1 ---------------------------------------------------------------------------------------

def test_criterion_01_jacobi_identity():
    start = time.monotonic()
    bad = 0
    symbolic = 0
    for size in (2, 3, 4):
        A = symbolic_matrix(size)
        for i in range(size):
            for k in range(i + 1, size):
                for j in range(size):
                    for l in range(j + 1, size):
                        symbolic += 1
                        bad += not jacobi_minor_identity_residual(A, i, k, j, l).is_zero()
    rng = random.Random(20240101)
    for _ in range(500):
        s = rng.randint(3, 6)
        rows = [[Polynomial.constant(rng.randint(-9, 9), ()) for _ in range(s)] for _ in range(s)]
        i, k = sorted(rng.sample(range(s), 2))
        j, l = sorted(rng.sample(range(s), 2))
        bad += not jacobi_minor_identity_residual(PolyMatrix.from_rows(rows, ()), i, k, j, l).is_zero()
    elapsed = time.monotonic() - start
    ok = bad == 0 and elapsed < 30
    record(1, ok, f"{symbolic} symbolic index patterns + 500 random matrices, {bad} nonzero residuals", start)
    assert ok


# -- 2, 3, 4 ---------------------------------------------------------------------------------

def stratum_stream(F, seed):
    """Seeded jets at p = 1..6, alternating free draws with draws pinned at the origin."""
    n = len(F[0].ring)
    rng = random.Random(seed)
    while True:
        for p in range(1, 7):
            for prefix in ([], [(0,) * n]):
                yield from sample_jets(F, n, p, rng, 2, prefix=prefix)


@pytest.fixture(scope="module")
def lifting_runs():
    out = {}
    for seed, (name, F) in enumerate(LIFT_EXAMPLES.items(), start=404):
        start = time.monotonic()
        jets, stratum = [], []
        for u in stratum_stream(F, seed):
            prof = minor_order_profile(F, u)
            in_str = prof is not NOT_IN_STRATUM and prof.top <= u.cap
            if len(jets) < 72:
                jets.append((u, prof))
            if in_str:
                stratum.append((u, prof))
            if len(jets) >= 72 and len(stratum) >= 100:
                break
        out[name] = {"jets": jets, "stratum": stratum[:100], "sample_time": time.monotonic() - start}
    return out


def test_criterion_02_criterion_vs_brute_force(lifting_runs):
    start = time.monotonic()
    total = determined = agree = liftable = outside = undetermined = 0
    disagreements = []
    for name, F in LIFT_EXAMPLES.items():
        for u, prof in lifting_runs[name]["jets"]:
            total += 1
            brute = brute_force_lift(F, u)
            if prof is NOT_IN_STRATUM or prof.top > u.cap:
                # outside every stratum at this cap the criterion has nothing to say
                outside += 1
                continue
            if brute.liftable is None:
                undetermined += 1
                continue
            determined += 1
            denef = liftable_denef(F, u, prof).liftable
            liftable += denef
            if denef == brute.liftable:
                agree += 1
            else:
                disagreements.append((name, str(u)))
    cusp = LIFT_EXAMPLES["cusp"]
    u = parse_jet("0; t", 2, 2)
    neg = (liftable_denef(cusp, u, minor_order_profile(cusp, u)).status is LiftStatus.NOT_LIFTABLE
           and brute_force_lift(cusp, u, target_cap=7).status is LiftStatus.NOT_LIFTABLE)
    # sampling happens in the fixture; count it toward the budget
    sampled = sum(run["sample_time"] for run in lifting_runs.values())
    elapsed = time.monotonic() - start + sampled
    ok = total >= 200 and agree == determined > 0 and neg and elapsed < 300
    record(2, ok, f"{total} jets ({outside} outside every stratum, {undetermined} undetermined), "
                  f"{agree}/{determined} determined agree ({liftable} liftable), "
                  f"cusp (0; t) certified negative: {neg}; sampling {sampled:.1f} s", start)
    assert ok, disagreements


def test_criterion_03_reduced_system(lifting_runs):
    start = time.monotonic()
    counts_ok = vanish_ok = checked = 0
    for name, F in LIFT_EXAMPLES.items():
        stratum = lifting_runs[name]["stratum"]
        assert len(stratum) == 100
        for u, prof in stratum:
            eqs = reduced_lift_equations(F, prof, u.cap)
            counts_ok += len(eqs) == prof.top
            vec = u.coefficient_vector()
            vanish = all(g.evaluate(vec) == 0 for g in eqs)
            vanish_ok += vanish == liftable_denef(F, u, prof).liftable
            checked += 1
    ok = counts_ok == vanish_ok == checked == 300 and time.monotonic() - start < 300
    record(3, ok, f"{checked} stratum jets: count = e_r on {counts_ok}, vanishing agrees on {vanish_ok}", start)
    assert ok


def test_criterion_04_off_block_order(lifting_runs):
    start = time.monotonic()
    seen = good = 0
    for name, F in LIFT_EXAMPLES.items():
        pool = {str(u): (u, prof) for u, prof in lifting_runs[name]["jets"] + lifting_runs[name]["stratum"]}
        for u, prof in pool.values():
            if prof is NOT_IN_STRATUM:
                continue
            seen += 1
            good += off_block_min_order(F, u, prof) >= prof.top
    ok = seen > 0 and good == seen
    record(4, ok, f"off-block order >= e_r on {good}/{seen} stratum jets", start)
    assert ok


# -- 5, 6, 7 -----------------------------------------------------------------------------------

def sandwich(F, ring, oracle_value, below, above, bounds):
    pair = PairSpec(ring, tuple(F), (), origin(ring))
    oracle = monomial_mld_oracle(len(ring), [(F, len(F))])
    lo = sweep(pair, below, bounds)
    hi = sweep(pair, above, bounds)
    ok = (oracle.kind is OracleKind.UPPER_BOUND and oracle.value == oracle_value
          and lo.status is MldStatus.PASSED_SWEEP and hi.status is MldStatus.CERTIFIED_VIOLATION)
    return ok, pair, oracle, lo, hi


def test_criterion_05_a1_surface():
    start = time.monotonic()
    F = [P("x*y - z^2", R3)]
    ok, _, oracle, lo, hi = sandwich(F, R3, 1, 1, Fraction(3, 2), (6, 3, 4))
    rep = classify_singularities(F, 2, 4)
    cls_ok = rep.verdict("canonical") == HOLDS and rep.verdict("terminal").startswith("REFUTED")
    ok = ok and cls_ok and time.monotonic() - start < 600
    record(5, ok, f"oracle <= {oracle.value}, tau=1 {lo.status.value}, tau=3/2 {hi.status.value} "
                  f"(witness {hi.witness}); canonical {rep.verdict('canonical')}, terminal {rep.verdict('terminal')}",
           start)
    assert ok


def test_criterion_06_ordinary_double_point():
    start = time.monotonic()
    F = [P("x^2 + y^2 + z^2 + w^2", R4)]
    ok, pair, oracle, lo, hi = sandwich(F, R4, 2, 2, Fraction(5, 2), (6, 3, 4))
    rows, left, _ = inversion_adjunction_check(pair, None, [2, Fraction(5, 2)], (6, 3, 4), corollary=True)
    for row in rows:
        collect(left, row.left)
        collect(pair, row.right)
    cor_ok = (all(r.agree for r in rows)
              and [r.left.status for r in rows] == [MldStatus.PASSED_SWEEP, MldStatus.CERTIFIED_VIOLATION])
    rep = classify_singularities(F, 3, 3)
    ok = ok and cor_ok and rep.verdict("terminal") == HOLDS and time.monotonic() - start < 900
    record(6, ok, f"oracle <= {oracle.value}, tau=2 {lo.status.value}, tau=5/2 {hi.status.value}; "
                  f"mld(0; A^4, X) agrees: {cor_ok}; terminal {rep.verdict('terminal')}", start)
    assert ok


def test_criterion_07_elliptic_cone():
    start = time.monotonic()
    F = [P("x^3 + y^3 + z^3", R3)]
    ok, _, oracle, lo, hi = sandwich(F, R3, 0, 0, Fraction(1, 2), (6, 3, 4))
    rep = classify_singularities(F, 2, 3)
    route = mld_route(F)
    agree = all(crosscheck(rep, route).values())
    ok = (ok and rep.verdict("log_canonical") == HOLDS and rep.verdict("canonical").startswith("REFUTED")
          and agree and time.monotonic() - start < 900)
    record(7, ok, f"oracle <= {oracle.value}, tau=0 {lo.status.value}, tau=1/2 {hi.status.value}; "
                  f"lc {rep.verdict('log_canonical')}, canonical {rep.verdict('canonical')}; mld route agrees: {agree}",
           start)
    assert ok


# -- 8 ---------------------------------------------------------------------------------------------

def test_criterion_08_inversion_of_adjunction():
    start = time.monotonic()
    expected = [MldStatus.PASSED_SWEEP, MldStatus.CERTIFIED_VIOLATION]
    parts = []
    for ring, D in ((R3, "x^2 + y^2 + z^2"), (R2, "x")):
        pair = PairSpec(ring, (), (), origin(ring))
        rows, left, right = inversion_adjunction_check(pair, P(D, ring), [1, Fraction(3, 2)], (6, 3, 4))
        for row in rows:
            collect(left, row.left)
            collect(right, row.right)
        parts.append(all(r.agree for r in rows) and [r.left.status for r in rows] == expected
                     and [r.right.status for r in rows] == expected)
    ok = all(parts) and time.monotonic() - start < 600
    record(8, ok, f"cone in A^3 sandwiches to 1 on both sides: {parts[0]}; line in A^2: {parts[1]}", start)
    assert ok


# -- 9 ---------------------------------------------------------------------------------------------

def xy_pair(q):
    return PairSpec(R2, (), ((SubschemeSpec((P("x*y", R2),), "V(xy)"), Fraction(q)),), origin(R2))


@pytest.mark.xfail(strict=True, reason="at tau = -5 the first violating cylinder needs contact order 11, "
                                       "beyond the level bound m <= 6")
def test_criterion_09_not_log_canonical():
    start = time.monotonic()
    pair = xy_pair(Fraction(3, 2))
    oracle = monomial_mld_oracle(2, [([P("x*y", R2)], Fraction(3, 2))])
    statuses = {}
    for tau in (0, -1, -5):
        # the widest sweep the level bound allows: contact up to m = 6
        statuses[tau] = sweep(pair, tau, (6, 0, 6)).status
    ok = (oracle.kind is OracleKind.MINUS_INFINITY and oracle.argmin == (1, 1)
          and all(s is MldStatus.CERTIFIED_VIOLATION for s in statuses.values()))
    detail = ", ".join(f"tau={t} {s.value}" for t, s in statuses.items())
    record(9, ok, f"oracle {oracle.kind.value} along {oracle.argmin}; {detail}", start)
    assert ok


def test_criterion_09_beyond_the_level_bound():
    # not a criterion: the same pair with the level bound raised to 11
    start = time.monotonic()
    v = mld_lower_bound_test(xy_pair(Fraction(3, 2)), -5, (11, 0, 11))
    line = f"note 9b : tau=-5 with m <= 11: {v.status.value} witness {v.witness} ({time.monotonic() - start:.1f} s)"
    ACCEPTANCE.append(line)
    print(line)
    assert v.status is MldStatus.CERTIFIED_VIOLATION and v.witness["m"] == 11


# -- 10 --------------------------------------------------------------------------------------------

def test_criterion_10_semicontinuity():
    start = time.monotonic()
    pts = [(0, 0), (0, 1), (1, 1)]
    got = {}
    ok = True
    for q, expected in ((Fraction(1, 2), [1, Fraction(3, 2), 2]), (Fraction(1), [0, 1, 2])):
        rep = semicontinuity_probe(2, [([P("x*y", R2)], q)], pts)
        values = [Fraction(v["value"]) for v in rep["values"]]
        got[q] = values
        ok = ok and values == expected and rep["consistent"] and values == sorted(values)
        ok = ok and all(v["kind"] == "EXACT" for v in rep["values"])
    ok = ok and time.monotonic() - start < 60
    detail = "; ".join(f"q={q}: {tuple(str(v) for v in vals)}" for q, vals in got.items())
    record(10, ok, detail, start)
    assert ok


# -- 11 --------------------------------------------------------------------------------------------

def test_criterion_11_level_stability():
    start = time.monotonic()
    assert CYLINDERS, "criteria 5-9 must run first"
    seen = {}
    for pair, e, contacts, m, codim in CYLINDERS:
        seen.setdefault((pair, e, contacts), (m, codim))
    unstable = []
    for (pair, e, contacts), (m, codim) in seen.items():
        # the swept level m = max(e, m_i), then through the Denef-Loeser range max(e, m_i) + e and one beyond
        for m2 in range(m + 1, m + e + 2):
            c2 = cylinder_codim(pair, e, contacts, m2)
            if c2 != codim:
                unstable.append((pair.ring, e, contacts, m, codim, m2, c2))
    ok = not unstable
    empty = sum(1 for _, c in seen.values() if c is EMPTY)
    record(11, ok, f"{len(seen)} cylinders ({empty} empty) stable from the swept level to max(e, m_i) + e + 1",
           start)
    assert ok, unstable
