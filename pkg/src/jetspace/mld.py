"""Cylinder codimensions in arc spaces and minimal log discrepancy bounds.

The lower-bound test certifies ``mld(W; X, Y) < tau`` by exhibiting a single
cylinder whose codimension falls short of ``e + sum q_i m_i + tau``. The
monomial oracle gives exact values (or upper bounds) by minimizing over
toric valuations, which the jet computation never consults.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .groebner import EMPTY, GroebnerTimeout, ideal_dimension
from .groebner.engine import DEFAULT_PAIR_LIMIT
from .jets import (SubschemeSpec, contact_conditions, generic_expansion, jacobian_subscheme,
                   jet_ideal, jet_variables)
from .lifting import MinorProfile, enumerate_profiles, permuted_jacobian, reduced_lift_equations
from .poly import Polynomial, format_coeff, norm_coeff


# -- pairs --------------------------------------------------------------------

@dataclass(frozen=True)
class PairSpec:
    """(X = V(F) in A^n, Y = sum q_i Y_i) with a closed subset W; d = n - r."""

    ring: tuple[str, ...]
    F: tuple[Polynomial, ...] = ()
    subschemes: tuple[tuple[SubschemeSpec, Fraction], ...] = ()
    W: SubschemeSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "ring", tuple(self.ring))
        object.__setattr__(self, "F", tuple(self.F))
        subs = tuple((Y, Fraction(q)) for Y, q in self.subschemes)
        object.__setattr__(self, "subschemes", subs)
        if len(self.F) > len(self.ring):
            raise ValueError("more equations than variables")
        for f in self.F:
            if f.ring != self.ring:
                raise ValueError("equation lives in a different ring")
        for Y, q in subs:
            if q < 0:
                raise ValueError("coefficients must be nonnegative")
            if Y.ring != self.ring:
                raise ValueError("subscheme lives in a different ring")
        if self.W is not None and self.W.ring != self.ring:
            raise ValueError("W lives in a different ring")

    @property
    def n(self) -> int:
        return len(self.ring)

    @property
    def r(self) -> int:
        return len(self.F)

    @property
    def d(self) -> int:
        return self.n - self.r

    @cached_property
    def Z(self) -> SubschemeSpec:
        return jacobian_subscheme(list(self.F), self.n, self.ring)

    def to_json(self) -> dict:
        return {
            "ring": list(self.ring),
            "F": [str(f) for f in self.F],
            "subschemes": [{"q": format_coeff(norm_coeff(q)), "gens": [str(g) for g in Y.gens]}
                           for Y, q in self.subschemes],
            "W": [str(g) for g in self.W.gens] if self.W is not None else None,
        }


# -- cylinder codimension ---------------------------------------------------------

def _stratum_conditions(pair: PairSpec, profile: MinorProfile, m: int, jr):
    """Closed conditions of the lower levels of a profile and the nonvanishing product h."""
    J = permuted_jacobian(list(pair.F), pair.n, profile)
    gens = []
    h = Polynomial.constant(1, jr)
    r = pair.r
    for i in range(1, r + 1):
        ei = profile.e[i - 1]
        rows = tuple(range(i))
        if i < r:
            for cols in itertools.combinations(range(i + 1), i):
                minor = J.submatrix(rows, cols).det()
                if ei:
                    gens.extend(generic_expansion(minor, m, ei - 1, jr))
        lead = J.submatrix(rows, rows).det()
        h = h * generic_expansion(lead, m, ei, jr)[ei]
    return [g for g in gens if not g.is_zero()], h


def _base_generators(pair: PairSpec, e: int, contacts: Sequence[int], m: int):
    I = jet_ideal(list(pair.F), pair.n, m, pair.ring)
    gens = list(I.generators)
    if pair.W is not None:
        gens += contact_conditions(pair.W, 1, m)[0]
    for (Y, _), c in zip(pair.subschemes, contacts):
        gens += contact_conditions(Y, c, m)[0]
    if pair.r and e:
        gens += contact_conditions(pair.Z, e, m)[0]
    return [g for g in gens if not g.is_zero()]


def _check_level(pair, e, contacts, m):
    contacts = tuple(int(c) for c in contacts)
    if len(contacts) != len(pair.subschemes):
        raise ValueError("need one contact order per subscheme")
    if e < 0 or any(c < 0 for c in contacts):
        raise ValueError("orders must be nonnegative")
    if m < max((e,) + contacts):
        raise ValueError(f"level {m} is below max(e, contact orders)")
    return contacts


def stratum_dimension(pair: PairSpec, e: int, contacts: Sequence[int], m: int,
                      pair_limit: int = DEFAULT_PAIR_LIMIT):
    """dim psi_m of the liftable jets with Jacobian order exactly e and the given contacts."""
    contacts = _check_level(pair, e, contacts, m)
    return _stratum_dimension(pair, e, contacts, m, pair_limit)


@lru_cache(maxsize=4096)
def _stratum_dimension(pair: PairSpec, e: int, contacts: tuple, m: int, pair_limit: int):
    jr = jet_variables(pair.ring, m)
    base = _base_generators(pair, e, contacts, m)
    if pair.r == 0:
        if e > 0:
            return EMPTY
        return ideal_dimension(base, ring=jr, pair_limit=pair_limit)
    best = EMPTY
    for profile in enumerate_profiles(pair.r, pair.n, e):
        extra, h = _stratum_conditions(pair, profile, m, jr)
        lift = reduced_lift_equations(list(pair.F), profile, m)
        d = ideal_dimension(base + extra + lift, ring=jr, nonvanishing=h, pair_limit=pair_limit)
        if d is not EMPTY and (best is EMPTY or d > best):
            best = d
    return best


def cylinder_codim(pair: PairSpec, e: int, contacts: Sequence[int], m: int,
                   pair_limit: int = DEFAULT_PAIR_LIMIT):
    """(m+1)d - dim psi_m(A cap {ord_Z = e}), A the W/Y contact cylinder; EMPTY if empty."""
    dim = stratum_dimension(pair, e, contacts, m, pair_limit)
    if dim is EMPTY:
        return EMPTY
    return (m + 1) * pair.d - dim


def residual_codim(pair: PairSpec, e_min: int, contacts: Sequence[int], m: int,
                   pair_limit: int = DEFAULT_PAIR_LIMIT):
    """Codimension of the jets with ord_Z >= e_min, without restricting to liftable jets.

    This over-counts the image of the arc space, so the value is only a lower
    estimate of the true codimension and is never used to certify anything.
    """
    contacts = _check_level(pair, e_min, contacts, m)
    jr = jet_variables(pair.ring, m)
    gens = _base_generators(pair, e_min, contacts, m)
    dim = ideal_dimension(gens, ring=jr, pair_limit=pair_limit)
    if dim is EMPTY:
        return EMPTY
    return (m + 1) * pair.d - dim


# -- the lower-bound test -----------------------------------------------------------

class MldStatus(Enum):
    CERTIFIED_VIOLATION = "CERTIFIED_VIOLATION"
    PASSED_SWEEP = "PASSED_SWEEP"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class MldVerdict:
    tau: Fraction
    status: MldStatus
    sweep: tuple[int, int, int]
    witness: dict | None = None
    checked: int = 0
    uncovered: list = field(default_factory=list)
    timeouts: list = field(default_factory=list)
    residual: dict | None = None
    table: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "tau": format_coeff(norm_coeff(self.tau)),
            "status": self.status.value,
            "sweep": {"m_max": self.sweep[0], "e_max": self.sweep[1], "contact_max": self.sweep[2]},
            "checked": self.checked,
            "uncovered": [list(x) for x in self.uncovered],
            "timeouts": [list(x) for x in self.timeouts],
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.residual is not None:
            out["residual"] = self.residual
        return out


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("JETSPACE_THREADS", "1")))
    except ValueError:
        return 1


def _task(args):
    pair, e, contacts, m, pair_limit = args
    try:
        return cylinder_codim(pair, e, contacts, m, pair_limit)
    except GroebnerTimeout:
        return None


def sweep_tasks(pair: PairSpec, sweep: tuple[int, int, int]):
    """(e, contacts, m) in evaluation order, plus the combinations beyond the level budget."""
    m_max, e_max, c_max = sweep
    tasks, uncovered = [], []
    e_values = range(e_max + 1) if pair.r else range(1)
    for contacts in itertools.product(range(c_max + 1), repeat=len(pair.subschemes)):
        for e in e_values:
            m = max((e,) + contacts)
            if m > m_max:
                uncovered.append((e,) + contacts)
                continue
            tasks.append((e, contacts, m))
    tasks.sort(key=lambda t: (t[2], t[0] + sum(t[1]), t[0], t[1]))
    return tasks, uncovered


def required_bound(pair: PairSpec, e: int, contacts: Sequence[int], tau) -> Fraction:
    return e + sum(q * c for (_, q), c in zip(pair.subschemes, contacts)) + Fraction(tau)


def mld_lower_bound_test(pair: PairSpec, tau, sweep: tuple[int, int, int] = (6, 3, 4),
                         pair_limit: int = DEFAULT_PAIR_LIMIT, residual: bool = False,
                         deadline: float | None = None, threads: int | None = None) -> MldVerdict:
    """Search the sweep for a cylinder violating codim >= e + sum q_i m_i + tau."""
    tau = Fraction(tau)
    tasks, uncovered = sweep_tasks(pair, sweep)
    verdict = MldVerdict(tau, MldStatus.PASSED_SWEEP, tuple(sweep), uncovered=uncovered)
    threads = threads or _threads()
    start = time.monotonic()
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        for i in range(0, len(tasks), threads):
            if deadline is not None and time.monotonic() - start > deadline:
                verdict.timeouts.extend((e,) + c + (m,) for e, c, m in tasks[i:])
                break
            chunk = tasks[i:i + threads]
            args = [(pair, e, c, m, pair_limit) for e, c, m in chunk]
            results = list(pool.map(_task, args)) if pool else [_task(a) for a in args]
            for (e, contacts, m), codim in zip(chunk, results):
                verdict.checked += 1
                bound = required_bound(pair, e, contacts, tau)
                verdict.table.append((e, contacts, m, codim, bound))
                if codim is None:
                    verdict.timeouts.append((e,) + contacts + (m,))
                    continue
                if codim is not EMPTY and codim < bound and verdict.witness is None:
                    verdict.status = MldStatus.CERTIFIED_VIOLATION
                    verdict.witness = {"e": e, "contacts": list(contacts), "m": m, "codim": codim,
                                       "bound": format_coeff(norm_coeff(bound))}
            if verdict.witness is not None:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    if verdict.witness is None and verdict.timeouts:
        verdict.status = MldStatus.INCONCLUSIVE
    if residual and pair.r:
        verdict.residual = _residual_report(pair, tau, sweep, pair_limit)
    return verdict


def _residual_report(pair, tau, sweep, pair_limit):
    m_max, e_max, _ = sweep
    e = e_max + 1
    contacts = (0,) * len(pair.subschemes)
    if e > m_max:
        return {"e_min": e, "evaluated": False}
    try:
        codim = residual_codim(pair, e, contacts, e, pair_limit)
    except GroebnerTimeout:
        return {"e_min": e, "evaluated": False}
    bound = required_bound(pair, e, contacts, tau)
    return {"e_min": e, "m": e, "evaluated": True,
            "codim_lower_estimate": "EMPTY" if codim is EMPTY else codim,
            "bound": format_coeff(norm_coeff(bound))}


# -- the monomial oracle ----------------------------------------------------------------

class OracleKind(Enum):
    EXACT = "EXACT"
    UPPER_BOUND = "UPPER_BOUND"
    MINUS_INFINITY = "MINUS_INFINITY"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class OracleResult:
    kind: OracleKind
    value: Fraction | None = None
    argmin: tuple[int, ...] | None = None
    box: int = 0

    def to_json(self) -> dict:
        return {"kind": self.kind.value,
                "value": None if self.value is None else format_coeff(norm_coeff(self.value)),
                "argmin": None if self.argmin is None else list(self.argmin), "box": self.box}


def _exponent_sets(items):
    """Per item: q and the exponent vectors used for ord_v, plus whether all inputs were monomial."""
    monomial = True
    out = []
    for gens, q in items:
        exps = []
        for g in gens:
            if g.is_zero():
                continue
            if len(g.terms) > 1:
                monomial = False
            exps.extend(g.terms)
        out.append((Fraction(q), sorted(set(exps))))
    return out, monomial


def _box_minimum(n, sets, conormal, B):
    """Exact minimum of a(v) over integer v in the box, scaled to a common denominator."""
    den = 1
    for q, _ in sets:
        den = den * q.denominator // math.gcd(den, q.denominator)
    lows = [1 if j in conormal else 0 for j in range(n)]
    axes = [np.arange(lo, B + 1, dtype=np.int64) for lo in lows]
    best_val, best_v = None, None
    # iterate over the first coordinate to bound memory
    for first in axes[0] if n else [None]:
        if n:
            grids = np.meshgrid(*([np.array([first])] + axes[1:]), indexing="ij")
        else:
            grids = []
        V = np.stack([g.ravel() for g in grids], axis=1) if n else np.zeros((1, 0), dtype=np.int64)
        if V.size == 0 and n:
            continue
        if not conormal and n:
            V = V[V.sum(axis=1) > 0]
            if not len(V):
                continue
        vals = V.sum(axis=1) * den
        for q, exps in sets:
            if not exps or q == 0:
                continue
            A = np.array(exps, dtype=np.int64)
            mins = (V @ A.T).min(axis=1)
            vals = vals - (q.numerator * (den // q.denominator)) * mins
        k = int(np.argmin(vals))
        val = int(vals[k])
        cand = tuple(int(x) for x in V[k])
        if best_val is None or val < best_val or (val == best_val and cand < best_v):
            best_val, best_v = val, cand
    return Fraction(best_val, den), best_v


def _a_value(v, sets):
    total = Fraction(sum(v))
    for q, exps in sets:
        if exps and q:
            total -= q * min(sum(a * b for a, b in zip(v, e)) for e in exps)
    return total


def monomial_mld_oracle(n: int, items: Sequence[tuple[Sequence[Polynomial], object]],
                        center: Sequence[int] | None = None, box: int = 20, box_cap: int = 80) -> OracleResult:
    """Minimize a(v) = sum v - sum q_i min_{a in supp I_i} <v, a> over toric valuations.

    ``center`` lists the coordinates vanishing on the center (default: all,
    i.e. the origin). Exact for monomial ideals, an upper bound otherwise.
    """
    conormal = set(range(n)) if center is None else set(center)
    sets, monomial = _exponent_sets(items)
    B = box
    while True:
        val, v = _box_minimum(n, sets, conormal, B)
        if val < 0:
            # positive homogeneity: a(k v) = k a(v) decreases without bound
            g = math.gcd(*v)
            ray = tuple(x // g for x in v)
            assert _a_value(tuple(2 * x for x in ray), sets) < _a_value(ray, sets) < 0
            return OracleResult(OracleKind.MINUS_INFINITY, None, ray, B)
        if all(x < B for x in v):
            kind = OracleKind.EXACT if monomial else OracleKind.UPPER_BOUND
            return OracleResult(kind, val, v, B)
        if B >= box_cap:
            return OracleResult(OracleKind.INCONCLUSIVE, val, v, B)
        B = min(2 * B, box_cap)


# -- instance checkers ----------------------------------------------------------------

@dataclass
class ComparisonRow:
    tau: Fraction
    left: MldVerdict
    right: MldVerdict

    @property
    def agree(self) -> bool:
        return self.left.status == self.right.status

    def to_json(self) -> dict:
        return {"tau": format_coeff(norm_coeff(self.tau)), "left": self.left.to_json(),
                "right": self.right.to_json(), "agree": self.agree}


def restrict_pair(pair: PairSpec, D: Polynomial) -> PairSpec:
    """The pair on the divisor V(D) inside X, with the Y_i restricted."""
    return PairSpec(pair.ring, pair.F + (D,), pair.subschemes, pair.W)


def inversion_adjunction_check(pair: PairSpec, D: Polynomial | None, taus: Sequence,
                               sweep: tuple[int, int, int] = (6, 3, 4), corollary: bool = False,
                               pair_limit: int = DEFAULT_PAIR_LIMIT) -> tuple[list[ComparisonRow], PairSpec, PairSpec]:
    """Compare both sides of mld(W; X, D+Y) = mld(W; D, Y|_D) for each tau.

    In corollary mode compare mld(W; A^n, Y + r X) with mld(W; X, Y) instead.
    """
    if corollary:
        X = SubschemeSpec(pair.F, "X")
        left = PairSpec(pair.ring, (), pair.subschemes + ((X, Fraction(pair.r)),), pair.W)
        right = pair
    else:
        if D is None:
            raise ValueError("inversion of adjunction needs the divisor equation")
        left = PairSpec(pair.ring, pair.F, pair.subschemes + ((SubschemeSpec((D,), "D"), Fraction(1)),), pair.W)
        right = restrict_pair(pair, D)
    rows = []
    for tau in taus:
        lv = mld_lower_bound_test(left, tau, sweep, pair_limit)
        rv = mld_lower_bound_test(right, tau, sweep, pair_limit)
        rows.append(ComparisonRow(Fraction(tau), lv, rv))
    return rows, left, right


def localize_monomial(items, point: Sequence) -> list:
    """Drop exponents of coordinates that are nonzero at the point (units there)."""
    nz = [j for j, x in enumerate(point) if x != 0]
    out = []
    for gens, q in items:
        new = []
        for g in gens:
            terms = {}
            for e, c in g.terms.items():
                e2 = tuple(0 if j in nz else k for j, k in enumerate(e))
                terms[e2] = terms.get(e2, 0) + c
            new.append(Polynomial({e: c for e, c in terms.items() if c}, g.ring))
        out.append((new, q))
    return out


def semicontinuity_probe(n: int, items, points: Sequence[Sequence]) -> dict:
    """mld at each point via the oracle, and the check mld(special) <= mld(general)."""
    _, monomial = _exponent_sets(items)
    if not monomial:
        return {"skipped": True, "reason": "non-monomial data cannot be translated exactly"}
    values = []
    for pt in points:
        if len(pt) != n:
            raise ValueError("point dimension does not match the ambient space")
        local = localize_monomial(items, pt)
        # a monomial ideal containing a unit at the point imposes nothing there
        local = [(gens, q) for gens, q in local if not any(g.is_constant() and not g.is_zero() for g in gens)]
        res = monomial_mld_oracle(n, local)
        values.append(res)
    zeros = [frozenset(j for j, x in enumerate(pt) if x == 0) for pt in points]
    checks = []
    ok = True
    for a, b in itertools.permutations(range(len(points)), 2):
        if zeros[a] < zeros[b]:
            va, vb = values[a], values[b]
            holds = _oracle_le(vb, va)
            ok = ok and holds is not False
            checks.append({"general": a, "special": b, "holds": holds})
    return {"skipped": False, "values": [v.to_json() for v in values], "checks": checks, "consistent": ok}


def _oracle_le(a: OracleResult, b: OracleResult):
    if a.kind is OracleKind.MINUS_INFINITY:
        return True
    if b.kind is OracleKind.MINUS_INFINITY:
        return False
    if OracleKind.INCONCLUSIVE in (a.kind, b.kind):
        return None
    return a.value <= b.value
