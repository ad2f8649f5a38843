"""Jet-scheme ideals, contact conditions and the Jacobian subscheme.

Jet coordinates are named ``<var>_<i>`` and ordered variable-major,
slot-minor: ``x_0, x_1, ..., x_m, y_0, ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .poly import Polynomial, all_minors, jacobian_matrix

Provenance = tuple[str, int]


def jet_variables(ring: Sequence[str], level: int) -> tuple[str, ...]:
    names = tuple(f"{v}_{i}" for v in ring for i in range(level + 1))
    if len(set(names) | set(ring)) != len(names) + len(ring):
        raise ValueError("variable names clash with jet coordinate names")
    return names


def jet_index(n_slots: int, j: int, i: int) -> int:
    """Position of u_{j,i} in a jet ring with ``n_slots`` = level+1 slots per variable."""
    return j * n_slots + i


def generic_expansion(P: Polynomial, level: int, cap: int | None = None,
                      jet_ring: Sequence[str] | None = None) -> list[Polynomial]:
    """Coefficients of t^0..t^cap of P(sum_i u_{j,i} t^i), where i runs up to ``level``."""
    cap = level if cap is None else cap
    ring = P.ring
    n = len(ring)
    jr = tuple(jet_ring) if jet_ring is not None else jet_variables(ring, level)
    slots = level + 1
    # series coefficients as {exps: coeff} dicts per t-degree
    zero = (0,) * len(jr)

    def unit_vec(idx):
        e = [0] * len(jr)
        e[idx] = 1
        return tuple(e)

    base = []
    for j in range(n):
        s = [dict() for _ in range(cap + 1)]
        for i in range(min(level, cap) + 1):
            s[i][unit_vec(jet_index(slots, j, i))] = 1
        base.append(s)

    def mul(a, b):
        out = [dict() for _ in range(cap + 1)]
        for da, ta in enumerate(a):
            if not ta:
                continue
            for db in range(cap + 1 - da):
                tb = b[db]
                if not tb:
                    continue
                o = out[da + db]
                for ea, ca in ta.items():
                    for eb, cb in tb.items():
                        e = tuple(x + y for x, y in zip(ea, eb))
                        v = o.get(e, 0) + ca * cb
                        if v:
                            o[e] = v
                        else:
                            o.pop(e, None)
        return out

    powers: list[dict[int, list]] = [{1: base[j]} for j in range(n)]

    def power(j, k):
        cache = powers[j]
        if k not in cache:
            half = power(j, k // 2)
            sq = mul(half, half)
            cache[k] = sq if k % 2 == 0 else mul(sq, base[j])
        return cache[k]

    total = [dict() for _ in range(cap + 1)]
    for exps, c in P.terms.items():
        term = None
        for j, k in enumerate(exps):
            if k:
                term = power(j, k) if term is None else mul(term, power(j, k))
        if term is None:
            term = [{zero: 1}] + [dict() for _ in range(cap)]
        for d in range(cap + 1):
            o = total[d]
            for e, v in term[d].items():
                w = o.get(e, 0) + c * v
                if w:
                    o[e] = w
                else:
                    o.pop(e, None)
    return [Polynomial(t, jr) for t in total]


@dataclass(frozen=True)
class SubschemeSpec:
    gens: tuple[Polynomial, ...]
    label: str = "Y"
    lci_warning: bool = False

    def __post_init__(self):
        if not self.gens:
            raise ValueError("subscheme needs at least one generator")
        object.__setattr__(self, "gens", tuple(self.gens))
        if len({g.ring for g in self.gens}) != 1:
            raise ValueError("generators live in different rings")

    @property
    def ring(self) -> tuple[str, ...]:
        return self.gens[0].ring


@dataclass
class JetIdeal:
    level: int
    ambient: int
    ring: tuple[str, ...]
    generators: list[Polynomial] = field(default_factory=list)
    provenance: list[Provenance] = field(default_factory=list)

    @property
    def jet_ring(self) -> tuple[str, ...]:
        return jet_variables(self.ring, self.level)

    @property
    def nvars(self) -> int:
        return self.ambient * (self.level + 1)

    def extended(self, gens: Sequence[Polynomial], prov: Sequence[Provenance]) -> "JetIdeal":
        return JetIdeal(self.level, self.ambient, self.ring,
                        self.generators + list(gens), self.provenance + list(prov))

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "ambient": self.ambient,
            "ring": list(self.jet_ring),
            "generators": [str(g) for g in self.generators],
            "provenance": [[tag, k] for tag, k in self.provenance],
        }


def jet_ideal(F: Sequence[Polynomial], n: int, m: int, ring: Sequence[str] | None = None) -> JetIdeal:
    """Level-m jets of V(F) inside A^n: all t^0..t^m coefficients of each F_k."""
    if m < 0:
        raise ValueError("level must be nonnegative")
    F = list(F)
    if ring is None:
        if not F:
            raise ValueError("ring is required when F is empty")
        ring = F[0].ring
    ring = tuple(ring)
    if len(ring) != n or any(f.ring != ring for f in F):
        raise ValueError("polynomials must live in the declared n-variable ring")
    jr = jet_variables(ring, m)
    gens, prov = [], []
    for k, f in enumerate(F):
        for i, c in enumerate(generic_expansion(f, m, m, jr)):
            gens.append(c)
            prov.append((f"F{k + 1}", i))
    return JetIdeal(m, n, ring, gens, prov)


def contact_conditions(Y: SubschemeSpec, order: int, level: int) -> tuple[list[Polynomial], list[Provenance]]:
    """Equations for ord_Y >= order on level-``level`` jets."""
    if order > level + 1:
        raise ValueError(f"contact order {order} is not expressible at level {level}")
    if order <= 0:
        return [], []
    jr = jet_variables(Y.ring, level)
    gens, prov = [], []
    for g in Y.gens:
        for i, c in enumerate(generic_expansion(g, level, order - 1, jr)):
            gens.append(c)
            prov.append((Y.label, i))
    return gens, prov


def contact_ideal(base: JetIdeal, constraints: Sequence[tuple[SubschemeSpec, int]]) -> JetIdeal:
    out = base
    for Y, c in constraints:
        if Y.ring != base.ring:
            raise ValueError("subscheme ring differs from the jet ideal's ring")
        gens, prov = contact_conditions(Y, c, base.level)
        out = out.extended(gens, prov)
    return out


def jacobian_subscheme(F: Sequence[Polynomial], n: int, ring: Sequence[str] | None = None,
                       check_lci: bool = False) -> SubschemeSpec:
    """All r-minors of the Jacobian together with F; unit ideal when X is smooth."""
    F = list(F)
    r = len(F)
    if r > n:
        raise ValueError(f"{r} equations exceed {n} variables")
    if ring is None:
        if not F:
            raise ValueError("ring is required when F is empty")
        ring = F[0].ring
    ring = tuple(ring)
    if r == 0:
        return SubschemeSpec((Polynomial.constant(1, ring),), "Z")
    J = jacobian_matrix(F, n)
    minors = [p for p in all_minors(J, r).values() if not p.is_zero()]
    gens = minors + [f for f in F if not f.is_zero()]
    if not gens:
        gens = [Polynomial.zero(ring)]
    warn = False
    if check_lci:
        warn = not lci_sanity_check(F, n)
    return SubschemeSpec(tuple(gens), "Z", warn)


def lci_sanity_check(F: Sequence[Polynomial], n: int) -> bool:
    """dim V(F) == n - r; the only complete-intersection test performed."""
    from .groebner import EMPTY, ideal_dimension

    d = ideal_dimension(list(F)) if F else n
    return d is not EMPTY and d == n - len(F)


def embed_level(P: Polynomial, ring: Sequence[str], from_level: int, to_level: int) -> Polynomial:
    """View a polynomial in level-``from_level`` jet coordinates inside a higher level ring."""
    if to_level < from_level:
        raise ValueError("target level below source level")
    src, dst = from_level + 1, to_level + 1
    index_map = [jet_index(dst, j, i) for j in range(len(ring)) for i in range(src)]
    return P.rename(jet_variables(ring, to_level), index_map)


def truncate_level(I: JetIdeal, m2: int) -> JetIdeal:
    if m2 > I.level:
        raise ValueError(f"target level {m2} exceeds ideal level {I.level}")
    if m2 < 0:
        raise ValueError("target level must be nonnegative")
    if m2 == I.level:
        return JetIdeal(I.level, I.ambient, I.ring, list(I.generators), list(I.provenance))
    src = I.level + 1
    keep_idx = [jet_index(src, j, i) for j in range(I.ambient) for i in range(m2 + 1)]
    drop = set(range(I.nvars)) - set(keep_idx)
    jr = jet_variables(I.ring, m2)
    gens, prov = [], []
    for g, (tag, k) in zip(I.generators, I.provenance):
        if k > m2:
            continue
        if any(e[v] for e in g.terms for v in drop):
            continue
        terms = {tuple(e[v] for v in keep_idx): c for e, c in g.terms.items()}
        gens.append(Polynomial(terms, jr))
        prov.append((tag, k))
    return JetIdeal(m2, I.ambient, I.ring, gens, prov)


def specialize(I: JetIdeal, coeff_vector: Sequence) -> list:
    """Evaluate every generator at a jet coefficient vector (variable-major order)."""
    return [g.evaluate(coeff_vector) for g in I.generators]
