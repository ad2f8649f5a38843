"""Liftability of jets on V(F_1, ..., F_r) in A^n.

Three independent routes decide whether a level-p jet extends to an arc:

* :func:`liftable_denef` checks ord(M(u~) F(u~)) >= p + e_r + 1, where M is
  the adjugate of the leading Jacobian block and u~ the canonical lift;
* :func:`reduced_lift_equations` produces e_r polynomial equations in the
  level-p coordinates cutting out the liftable jets inside a stratum;
* :func:`brute_force_lift` solves F(u~ + delta) = 0 coefficient by
  coefficient without consulting either of the above.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, Sequence

from .jets import generic_expansion, jet_variables
from .poly import PolyMatrix, Polynomial, classical_adjoint, jacobian_matrix
from .series import (INFINITY, JetPoint, TruncSeries, evaluate, ord, order_to_json,
                     series_solve_scalar)


class _Marker:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name

    __str__ = __repr__


NOT_IN_STRATUM = _Marker("NOT_IN_STRATUM")
NOT_STABILIZED = _Marker("NOT_STABILIZED")


class NotInJetScheme(ValueError):
    """The jet does not satisfy F modulo t^(p+1)."""


class ProfileError(ValueError):
    """The profile does not describe the jet, or p < e_r."""


class LiftStatus(Enum):
    LIFTABLE = "LIFTABLE"
    NOT_LIFTABLE = "NOT_LIFTABLE"
    UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class MinorProfile:
    e: tuple[int, ...]
    col_perm: tuple[int, ...]
    row_perm: tuple[int, ...]

    @property
    def top(self) -> int:
        return self.e[-1] if self.e else 0

    def to_json(self) -> dict:
        return {"e": list(self.e), "col_perm": list(self.col_perm), "row_perm": list(self.row_perm)}


@dataclass
class LiftVerdict:
    status: LiftStatus
    method: str
    witness: JetPoint | None = None
    failing_order: tuple | None = None
    detail: str = ""

    @property
    def liftable(self) -> bool | None:
        if self.status is LiftStatus.UNDETERMINED:
            return None
        return self.status is LiftStatus.LIFTABLE

    def to_json(self) -> dict:
        out = {"status": self.status.value, "liftable": self.liftable, "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness.to_text()
        if self.failing_order is not None:
            achieved, required = self.failing_order
            out["failing_order"] = {"achieved": order_to_json(achieved), "required": required}
        if self.detail:
            out["detail"] = self.detail
        return out


# -- matrices ---------------------------------------------------------------

@lru_cache(maxsize=256)
def _jacobian(F: tuple[Polynomial, ...], n: int) -> PolyMatrix:
    return jacobian_matrix(list(F), n)


def permuted_jacobian(F: Sequence[Polynomial], n: int, profile: MinorProfile) -> PolyMatrix:
    J = _jacobian(tuple(F), n)
    return J.submatrix(profile.row_perm, profile.col_perm)


def _block_det(J: PolyMatrix, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
    return _det_cached(J, tuple(rows), tuple(cols))


@lru_cache(maxsize=4096)
def _det_cached(J: PolyMatrix, rows: tuple, cols: tuple) -> Polynomial:
    return J.submatrix(rows, cols).det()


def _check_ring(F: Sequence[Polynomial], n: int):
    if len(F) > n:
        raise ValueError(f"{len(F)} equations exceed {n} variables")
    for f in F:
        if f.nvars != n:
            raise ValueError("equations must live in an n-variable ring")


def in_jet_scheme(F: Sequence[Polynomial], u: JetPoint) -> bool:
    return all(evaluate(f, u).is_zero() for f in F)


# -- strata -----------------------------------------------------------------

def minor_order_profile(F: Sequence[Polynomial], u: JetPoint):
    """Canonical stratum data of u, or NOT_IN_STRATUM when every r-minor vanishes at the cap."""
    F = list(F)
    n = u.n
    _check_ring(F, n)
    r = len(F)
    if r == 0:
        return MinorProfile((), tuple(range(n)), ())
    J = _jacobian(tuple(F), n)
    rows = tuple(range(r))
    best_order, best_cols = INFINITY, None
    for cols in combinations(range(n), r):
        o = ord(evaluate(_block_det(J, rows, cols), u))
        if o < best_order:
            best_order, best_cols = o, cols
    if best_order is INFINITY:
        return NOT_IN_STRATUM
    prefix = list(best_cols)
    rest = [c for c in range(n) if c not in best_cols]
    e = [0] * r
    e[r - 1] = best_order
    for i in range(r - 1, 0, -1):
        window = prefix[:i + 1]
        best = None
        for sub in combinations(sorted(window), i):
            o = ord(evaluate(_block_det(J, rows[:i], sub), u))
            if best is None or o < best[0]:
                best = (o, sub)
        o, sub = best
        # keep the chosen columns in their current relative order
        chosen = [c for c in window if c in sub]
        other = [c for c in window if c not in sub]
        prefix = chosen + other + prefix[i + 1:]
        e[i - 1] = o
    return MinorProfile(tuple(e), tuple(prefix + rest), rows)


def stratum_orders(F: Sequence[Polynomial], u: JetPoint, profile: MinorProfile) -> list[tuple]:
    """For each level i: (order along the i-minors of the window, order of the leading i-minor)."""
    F = list(F)
    J = permuted_jacobian(F, u.n, profile)
    r = len(F)
    out = []
    for i in range(1, r + 1):
        rows = tuple(range(i))
        width = J.cols if i == r else i + 1
        along = min(ord(evaluate(_block_det(J, rows, c), u)) for c in combinations(range(width), i))
        lead = ord(evaluate(_block_det(J, rows, rows), u))
        out.append((along, lead))
    return out


def in_stratum(F: Sequence[Polynomial], u: JetPoint, profile: MinorProfile) -> bool:
    orders = stratum_orders(F, u, profile)
    if any(o[0] != o[1] or o[0] != e for o, e in zip(orders, profile.e)):
        return False
    return profile.top <= u.cap


def enumerate_profiles(r: int, n: int, e_top: int) -> Iterator[MinorProfile]:
    """Every nondecreasing e with e_r = e_top, with every nested column chain and row order."""
    if r == 0:
        if e_top == 0:
            yield MinorProfile((), tuple(range(n)), ())
        return

    def vectors(k, upper):
        if k == 0:
            yield ()
            return
        for v in range(upper + 1):
            for rest in vectors(k - 1, v):
                yield rest + (v,)

    for head in vectors(r - 1, e_top):
        e = head + (e_top,)
        for cols in combinations(range(n), r):
            for chain in permutations(cols):
                rest = tuple(c for c in range(n) if c not in cols)
                for rows in permutations(range(r)):
                    yield MinorProfile(e, tuple(chain) + rest, tuple(rows))


# -- criterion --------------------------------------------------------------

def _require_jet_scheme(F, u):
    if not in_jet_scheme(F, u):
        raise NotInJetScheme(f"jet does not satisfy the equations modulo t^{u.cap + 1}")


def adjoint_product(F: Sequence[Polynomial], u: JetPoint, profile: MinorProfile, cap: int):
    """(M J)(u~) as series, M the adjugate of the leading r x r block of the permuted Jacobian."""
    F = list(F)
    r = len(F)
    J = permuted_jacobian(F, u.n, profile)
    A = J.submatrix(range(r), range(r))
    M = classical_adjoint(A)
    MJ = M * J
    return [[evaluate(MJ[i, j], u, cap) for j in range(J.cols)] for i in range(r)]


def off_block_min_order(F: Sequence[Polynomial], u: JetPoint, profile: MinorProfile):
    """Minimum order of the entries right of the leading block in (M J)(u~)."""
    r = len(F)
    prod = adjoint_product(F, u, profile, u.cap)
    orders = [ord(prod[i][j]) for i in range(r) for j in range(r, u.n)]
    return min(orders) if orders else INFINITY


def liftable_denef(F: Sequence[Polynomial], u: JetPoint, profile: MinorProfile) -> LiftVerdict:
    F = list(F)
    _check_ring(F, u.n)
    _require_jet_scheme(F, u)
    p = u.cap
    r = len(F)
    if r == 0:
        return LiftVerdict(LiftStatus.LIFTABLE, "denef", detail="no equations")
    e_r = profile.top
    if p < e_r:
        raise ProfileError(f"level {p} is below the top minor order {e_r}")
    required = p + e_r + 1
    cap = required
    Fp = [F[i] for i in profile.row_perm]
    J = permuted_jacobian(F, u.n, profile)
    M = classical_adjoint(J.submatrix(range(r), range(r)))
    Fu = [evaluate(f, u, cap) for f in Fp]
    Mu = [[evaluate(M[i, j], u, cap) for j in range(r)] for i in range(r)]
    achieved = INFINITY
    for i in range(r):
        s = TruncSeries.zero(cap)
        for j in range(r):
            s = s + Mu[i][j] * Fu[j]
        achieved = min(achieved, ord(s))
    if achieved >= required:
        return LiftVerdict(LiftStatus.LIFTABLE, "denef")
    return LiftVerdict(LiftStatus.NOT_LIFTABLE, "denef", failing_order=(achieved, required))


def reduced_lift_equations(F: Sequence[Polynomial], profile: MinorProfile, p: int) -> list[Polynomial]:
    """e_r polynomials in the level-p jet coordinates; see the module docstring."""
    F = list(F)
    r = len(F)
    if r == 0:
        return []
    n = F[0].nvars
    _check_ring(F, n)
    if p < profile.top:
        raise ProfileError(f"level {p} is below the top minor order {profile.top}")
    ring = F[0].ring
    jr = jet_variables(ring, p)
    J = permuted_jacobian(F, n, profile)
    Fp = [F[i] for i in profile.row_perm]
    eqs: list[Polynomial] = []
    prev = 0
    for k in range(1, r + 1):
        ek = profile.e[k - 1]
        if ek == prev:
            continue
        adj = classical_adjoint(J.submatrix(range(k), range(k)))
        P = Polynomial.zero(ring)
        for j in range(k):
            P = P + adj[k - 1, j] * Fp[j]
        coeffs = generic_expansion(P, p, p + ek, jr)
        eqs.extend(coeffs[p + prev + 1:p + ek + 1])
        prev = ek
    return eqs


# -- brute force ------------------------------------------------------------

def _solve_linear(A: list[list], b: list):
    """A solution of A x = b over Q, or None when inconsistent."""
    rows = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1]:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


def _linear_stage(F, u: JetPoint, K: int) -> bool:
    """Is F(u~) + Jac(u~) delta = 0 mod t^K solvable with ord(delta) > p?"""
    p = u.cap
    n = u.n
    degs = list(range(p + 1, K))
    if not degs:
        return all(ord(evaluate(f, u, K - 1)) >= K for f in F)
    J = _jacobian(tuple(F), n)
    Ju = [[evaluate(J[k, j], u, K - 1) for j in range(n)] for k in range(len(F))]
    A, b = [], []
    for k, f in enumerate(F):
        fu = evaluate(f, u, K - 1)
        for s in range(K):
            row = []
            for j in range(n):
                for d in degs:
                    row.append(Ju[k][j][s - d] if s >= d else 0)
            A.append(row)
            b.append(-fu[s])
    return _solve_linear(A, b) is not None


def _newton(F, u: JetPoint, cols: tuple, N: int):
    """Solve for the coordinates in ``cols`` by Newton iteration; others stay at u~."""
    r = len(F)
    n = u.n
    J = _jacobian(tuple(F), n)
    A = J.submatrix(range(r), cols)
    D = A.det()
    M = classical_adjoint(A)
    e0 = ord(evaluate(D, u, N))
    if e0 is INFINITY:
        return None
    cap = N + e0 + 1
    x = u.lift(cap)
    for _ in range(2 * N.bit_length() + 4):
        Fx = [evaluate(f, x, cap) for f in F]
        if all(ord(s.with_cap(N)) is INFINITY for s in Fx):
            return x.truncate(N)
        Dx = evaluate(D, x, cap)
        if ord(Dx) != e0:
            return None
        comps = list(x.components)
        for i in range(r):
            num = TruncSeries.zero(cap)
            for j in range(r):
                num = num + evaluate(M[i, j], x, cap) * Fx[j]
            q = series_solve_scalar(Dx, num)
            if q is None:
                return None
            q = q.with_cap(cap)
            if ord(q) <= u.cap:
                return None
            comps[cols[i]] = comps[cols[i]] - q
        x = JetPoint(comps)
    return None


def _lift_system(F, u: JetPoint, level: int) -> tuple[list[Polynomial], tuple[str, ...]]:
    """Equations on the unknown coefficients u_{j,i}, p < i <= level, for lifting u to ``level``."""
    p = u.cap
    n = u.n
    names = tuple(f"d{j}_{i}" for j in range(n) for i in range(p + 1, level + 1))
    comps = []
    idx = 0
    for j in range(n):
        series = [Polynomial.constant(u.components[j][i], names) for i in range(p + 1)]
        for i in range(p + 1, level + 1):
            series.append(Polynomial.var(idx, names))
            idx += 1
        comps.append(series)
    eqs = []
    for f in F:
        coeffs = _compose_series(f, comps, level, names)
        eqs.extend(c for c in coeffs[p + 1:] if not c.is_zero())
    return eqs, names


def _compose_series(P: Polynomial, comps: list[list[Polynomial]], cap: int, ring) -> list[Polynomial]:
    zero = Polynomial.zero(ring)

    def mul(a, b):
        out = [zero] * (cap + 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j in range(cap + 1 - i):
                if not b[j].is_zero():
                    out[i + j] = out[i + j] + x * b[j]
        return out

    one = [Polynomial.constant(1, ring)] + [zero] * cap
    total = [zero] * (cap + 1)
    powers = [[one] for _ in comps]
    for exps, c in P.terms.items():
        term = one
        for j, k in enumerate(exps):
            pw = powers[j]
            while len(pw) <= k:
                pw.append(mul(pw[-1], comps[j]))
            if k:
                term = mul(term, pw[k])
        total = [a + b * c for a, b in zip(total, term)]
    return total


def lifts_to_level(F: Sequence[Polynomial], u: JetPoint, level: int) -> bool:
    """Exact: is there a level-``level`` jet on V(F) truncating to u?"""
    from .groebner import EMPTY, ideal_dimension

    F = list(F)
    if level <= u.cap:
        return in_jet_scheme(F, u.truncate(level))
    if not in_jet_scheme(F, u):
        return False
    eqs, names = _lift_system(F, u, level)
    if not eqs:
        return True
    return ideal_dimension(eqs, ring=names) is not EMPTY


def brute_force_lift(F: Sequence[Polynomial], u: JetPoint, target_cap: int | None = None,
                     groebner_fallback: bool = True) -> LiftVerdict:
    F = list(F)
    _check_ring(F, u.n)
    _require_jet_scheme(F, u)
    p = u.cap
    N = 2 * p + 1 if target_cap is None else target_cap
    if N <= p:
        raise ValueError("target cap must exceed the jet level")
    if not F:
        return LiftVerdict(LiftStatus.LIFTABLE, "brute:trivial", witness=u.lift(N))
    # the jet read as a polynomial arc may already solve F
    padded = u.lift(N)
    if all(evaluate(f, padded).is_zero() for f in F):
        return LiftVerdict(LiftStatus.LIFTABLE, "brute:polynomial", witness=padded)
    K = min(2 * p + 2, N + 1)
    if not _linear_stage(F, u, K):
        return LiftVerdict(LiftStatus.NOT_LIFTABLE, "brute:linear",
                           detail=f"linearized system inconsistent modulo t^{K}")
    r = len(F)
    J = _jacobian(tuple(F), u.n)
    rows = tuple(range(r))
    ranked = []
    for cols in combinations(range(u.n), r):
        o = ord(evaluate(_block_det(J, rows, cols), u, N))
        if o is not INFINITY:
            ranked.append((o, cols))
    for _, cols in sorted(ranked):
        w = _newton(F, u, cols, N)
        if w is not None and _verify_witness(F, u, w, N):
            return LiftVerdict(LiftStatus.LIFTABLE, "brute:newton", witness=w)
    if groebner_fallback:
        if not lifts_to_level(F, u, N):
            return LiftVerdict(LiftStatus.NOT_LIFTABLE, "brute:groebner",
                               detail=f"no lift to level {N}")
        return LiftVerdict(LiftStatus.UNDETERMINED, "brute:groebner",
                           detail=f"lifts to level {N}; no convergent Newton branch")
    return LiftVerdict(LiftStatus.UNDETERMINED, "brute:newton", detail="no convergent Newton branch")


def _verify_witness(F, u: JetPoint, w: JetPoint, N: int) -> bool:
    if w.cap != N or w.truncate(u.cap) != u:
        return False
    return all(evaluate(f, w).is_zero() for f in F)


# -- sampling and the stabilization probe ------------------------------------

def sample_jets(F: Sequence[Polynomial], n: int, p: int, rng: random.Random, count: int,
                values: Sequence[int] = (-1, 0, 1), max_nodes: int = 20000,
                prefix: Sequence[Sequence[int]] = ()) -> list[JetPoint]:
    """Random level-p jets on V(F) with small integer coefficients (randomized depth-first search).

    ``prefix`` pins the first levels: prefix[i] is the coefficient vector of t^i.
    """
    F = list(F)
    prefix = [tuple(v) for v in prefix]
    if any(len(v) != n for v in prefix):
        raise ValueError("prefix vectors must have one entry per variable")
    out: list[JetPoint] = []
    seen = set()
    vectors = [tuple(v) for v in _product(values, n)]
    for _ in range(count * 20):
        if len(out) >= count:
            break
        budget = [max_nodes]
        rows: list[list] = [[] for _ in range(n)]

        def dfs(level):
            if level > p:
                return True
            if level < len(prefix):
                order = [prefix[level]]
            else:
                order = vectors[:]
                rng.shuffle(order)
            for vec in order:
                budget[0] -= 1
                if budget[0] < 0:
                    return False
                for j in range(n):
                    rows[j].append(vec[j])
                jet = JetPoint.from_coeffs(rows, level)
                if all(evaluate(f, jet)[level] == 0 for f in F) and dfs(level + 1):
                    return True
                for j in range(n):
                    rows[j].pop()
            return False

        if dfs(0):
            jet = JetPoint.from_coeffs(rows, p)
            key = tuple(jet.coefficient_vector())
            if key not in seen:
                seen.add(key)
                out.append(jet)
    return out


def _product(values, n):
    if n == 0:
        yield ()
        return
    for head in _product(values, n - 1):
        for v in values:
            yield head + (v,)


def greenberg_probe(F: Sequence[Polynomial], m: int, p_max: int, samples: Sequence[JetPoint] | None = None,
                    n_samples: int = 12, seed: int = 0):
    """Least p <= p_max at which liftability of sampled level-m jets to levels p, p+1, p+2 agrees."""
    F = list(F)
    if samples is None:
        n = F[0].nvars if F else 1
        samples = sample_jets(F, n, m, random.Random(seed), n_samples)
    vecs = {}
    for q in range(m, p_max + 1):
        vecs[q] = tuple(lifts_to_level(F, u, q) for u in samples)
    for p in range(m, p_max - 1):
        if vecs[p] == vecs[p + 1] == vecs[p + 2]:
            return p
    return NOT_STABILIZED


__all__ = [
    "NOT_IN_STRATUM", "NOT_STABILIZED", "NotInJetScheme", "ProfileError", "LiftStatus",
    "MinorProfile", "LiftVerdict", "minor_order_profile", "stratum_orders", "in_stratum",
    "enumerate_profiles", "adjoint_product", "off_block_min_order", "liftable_denef",
    "reduced_lift_equations", "brute_force_lift", "lifts_to_level", "sample_jets",
    "greenberg_probe", "in_jet_scheme", "permuted_jacobian",
]
