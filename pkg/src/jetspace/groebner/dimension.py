"""Krull dimension of affine vanishing loci, saturation and ideal membership."""

from __future__ import annotations

from typing import Sequence

from ..poly import Polynomial
from .engine import (DEFAULT_PAIR_LIMIT, EMPTY, buchberger, buchberger_internal,
                     to_internal)
from .orders import MonomialOrder


def _linear_candidate(g: Polynomial):
    """A variable occurring in g only as a constant multiple of itself, or None."""
    best = None
    count: dict[int, int] = {}
    for e in g.terms:
        for i, k in enumerate(e):
            if k:
                count[i] = count.get(i, 0) + 1
    for e, c in g.terms.items():
        if sum(e) == 1:
            i = e.index(1)
            if count[i] == 1 and (best is None or i < best[0]):
                best = (i, e, c)
    return best


def _squarefree_monomials(gens: list[Polynomial]) -> list[Polynomial]:
    """Replace each single-term generator by the product of its variables (same zero set)."""
    out = []
    for g in gens:
        if len(g.terms) == 1:
            (e, _), = g.terms.items()
            g = Polynomial({tuple(min(k, 1) for k in e): 1}, g.ring)
        out.append(g)
    return out


def eliminate_linear(gens: Sequence[Polynomial]):
    """Solve away variables that some generator determines linearly.

    Returns (remaining generators, eliminated variable indices), or None when
    a nonzero constant appears (empty locus). The vanishing locus of the
    input is the graph of a polynomial map over that of the output, so the
    dimension is unchanged after dropping the eliminated variables. Single-term
    generators are replaced by their radicals, which keeps the zero set.
    """
    gens = [g for g in gens if not g.is_zero()]
    eliminated: list[int] = []
    while True:
        for g in gens:
            if g.is_constant():
                return None
        gens = _squarefree_monomials(gens)
        best = None
        for gi, g in enumerate(gens):
            cand = _linear_candidate(g)
            if cand is not None:
                key = (len(g.terms), cand[0])
                if best is None or key < best[0]:
                    best = (key, gi, cand)
        if best is None:
            return gens, eliminated
        _, gi, (i, e, c) = best
        g = gens[gi]
        rest = Polynomial({ee: cc for ee, cc in g.terms.items() if ee != e}, g.ring)
        value = rest * (-1) / c if not rest.is_zero() else Polynomial.zero(g.ring)
        out = []
        for j, h in enumerate(gens):
            if j == gi:
                continue
            if h.degree_in(i):
                h = h.substitute(i, value)
            if not h.is_zero():
                out.append(h)
        gens = out
        eliminated.append(i)


def _split(g: Polynomial, i: int) -> dict[int, Polynomial]:
    """g as sum_j g_j x_i^j with g_j free of x_i."""
    parts: dict[int, dict] = {}
    for e, c in g.terms.items():
        parts.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
    return {j: Polynomial(t, g.ring) for j, t in parts.items()}


def _divides_power(c: Polynomial, h: Polynomial, pair_limit: int) -> bool:
    """Does c divide some power of h (so that c is a unit wherever h is)?"""
    if c.is_constant():
        return True
    if not c.support() <= h.support():
        return False
    G = buchberger([c], "grevlex", pair_limit)
    p = Polynomial.constant(1, h.ring)
    for _ in range(c.total_degree()):
        p = G.reduce(p * h)
        if p.is_zero():
            return True
    return False


def _substitute_fraction(f: Polynomial, i: int, num: Polynomial, den: Polynomial) -> Polynomial:
    """den^k * f(x_i = num/den) with k the degree of f in x_i."""
    parts = _split(f, i)
    k = max(parts)
    if k == 0:
        return f
    out = Polynomial.zero(f.ring)
    for j, fj in parts.items():
        out = out + fj * num**j * den**(k - j)
    return out


def eliminate_on_open(gens: Sequence[Polynomial], h: Polynomial, pair_limit: int = DEFAULT_PAIR_LIMIT):
    """Solve variables that a generator determines on the open set h != 0.

    A generator c*x_i + r with x_i absent from c and r, and c dividing a power
    of h, fixes x_i = -r/c on D(h); the other generators and h are cleared of
    denominators by powers of c, which is a unit there. Returns (generators, h,
    eliminated indices), or None when the locus is visibly empty.
    """
    gens = [g for g in gens if not g.is_zero()]
    eliminated: list[int] = []
    while True:
        if h.is_zero() or any(g.is_constant() for g in gens):
            return None
        gens = _squarefree_monomials(gens)
        best = None
        for gi, g in enumerate(gens):
            for i in sorted(g.support()):
                parts = _split(g, i)
                if max(parts) != 1:
                    continue
                c = parts[1]
                if i in c.support() or (best is not None and len(c.terms) + len(g.terms) >= best[0]):
                    continue
                if _divides_power(c, h, pair_limit):
                    best = (len(c.terms) + len(g.terms), gi, i, c, parts.get(0, Polynomial.zero(g.ring)))
        if best is None:
            return gens, h, eliminated
        _, gi, i, c, rest = best
        num = rest * (-1)
        gens = [_substitute_fraction(f, i, num, c) for j, f in enumerate(gens) if j != gi]
        gens = [f for f in gens if not f.is_zero()]
        h = _substitute_fraction(h, i, num, c)
        eliminated.append(i)


def _components(gens: list[Polynomial]) -> list[tuple[list[int], list[Polynomial]]]:
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    supports = [sorted(g.support()) for g in gens]
    for s in supports:
        for v in s[1:]:
            ra, rb = find(s[0]), find(v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, tuple[set, list]] = {}
    for g, s in zip(gens, supports):
        root = find(s[0])
        vs, gs = groups.setdefault(root, (set(), []))
        vs.update(s)
        gs.append(g)
    return [(sorted(vs), gs) for _, (vs, gs) in sorted(groups.items())]


def min_hitting_set_size(sets: Sequence[frozenset[int]]) -> int:
    """Smallest number of elements meeting every set (exact branch and bound)."""
    sets = sorted(set(sets), key=len)
    minimal: list[frozenset[int]] = []
    for s in sets:
        if not any(m <= s for m in minimal):
            minimal.append(s)
    if any(not s for s in minimal):
        raise ValueError("empty set cannot be hit")
    best = [len(set().union(*minimal)) if minimal else 0]

    def lower_bound(unhit):
        used: set[int] = set()
        lb = 0
        for s in unhit:
            if not (s & used):
                lb += 1
                used |= s
        return lb

    def rec(chosen: frozenset, depth: int):
        unhit = [s for s in minimal if not (s & chosen)]
        if not unhit:
            best[0] = min(best[0], depth)
            return
        if depth + lower_bound(unhit) >= best[0]:
            return
        pivot = min(unhit, key=len)
        for v in sorted(pivot):
            rec(chosen | {v}, depth + 1)
            # later branches may assume v is excluded; no need to encode it for correctness

    rec(frozenset(), 0)
    return best[0]


def _component_dimension(vars_: list[int], gens: list[Polynomial], pair_limit: int):
    k = len(vars_)
    index = {v: i for i, v in enumerate(vars_)}
    names = tuple(gens[0].ring[v] for v in vars_)
    local = []
    for g in gens:
        terms = {tuple(e[v] for v in vars_): c for e, c in g.terms.items()}
        local.append(Polynomial(terms, names))
    order = MonomialOrder.grevlex(k)
    basis, _ = buchberger_internal([to_internal(p, order) for p in local], order, pair_limit)
    supports = []
    for keys, _ in basis:
        s = order.support(keys[0])
        if not s:
            return EMPTY
        supports.append(s)
    del index
    return k - min_hitting_set_size(supports)


def ideal_dimension(gens: Sequence[Polynomial], ring: Sequence[str] | None = None,
                    nonvanishing: Polynomial | None = None,
                    pair_limit: int = DEFAULT_PAIR_LIMIT):
    """Dimension of V(gens), or of V(gens) minus V(nonvanishing); EMPTY if empty."""
    gens = list(gens)
    if ring is None:
        if not gens and nonvanishing is None:
            raise ValueError("ring is required for an empty generator list")
        ring = (gens[0] if gens else nonvanishing).ring
    ring = tuple(ring)
    if any(g.ring != ring for g in gens):
        raise ValueError("generators live in different rings")
    n = len(ring)
    pre_eliminated = 0
    if nonvanishing is not None:
        if nonvanishing.ring != ring:
            raise ValueError("nonvanishing polynomial lives in a different ring")
        if nonvanishing.is_zero():
            return EMPTY
        if not nonvanishing.is_constant():
            res = eliminate_on_open(gens, nonvanishing, pair_limit)
            if res is None:
                return EMPTY
            gens, nonvanishing, done = res
            pre_eliminated = len(done)
        if not nonvanishing.is_constant():
            w = "_w"
            while w in ring:
                w += "_"
            ring2 = ring + (w,)
            up = list(range(n))
            gens = [g.rename(ring2, up) for g in gens]
            hw = nonvanishing.rename(ring2, up) * Polynomial.var(n, ring2)
            gens.append(Polynomial.constant(1, ring2) - hw)
            ring, n = ring2, n + 1
    res = eliminate_linear(gens)
    if res is None:
        return EMPTY
    rest, eliminated = res
    used = set()
    for g in rest:
        used |= g.support()
    free = n - pre_eliminated - len(eliminated) - len(used)
    total = free
    for vars_, comp in _components(rest):
        d = _component_dimension(vars_, comp, pair_limit)
        if d is EMPTY:
            return EMPTY
        total += d
    return total


def saturation(gens: Sequence[Polynomial], h: Polynomial,
               pair_limit: int = DEFAULT_PAIR_LIMIT) -> list[Polynomial]:
    """Generators of I : h^infinity, by eliminating w from I + (1 - w*h)."""
    if h.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    ring = h.ring
    gens = [g for g in gens if not g.is_zero()]
    if any(g.ring != ring for g in gens):
        raise ValueError("generators live in different rings")
    if not gens:
        return []
    n = len(ring)
    w = "_w"
    while w in ring:
        w += "_"
    ring2 = (w,) + ring
    shift = list(range(1, n + 1))
    lifted = [g.rename(ring2, shift) for g in gens]
    lifted.append(Polynomial.constant(1, ring2) - Polynomial.var(0, ring2) * h.rename(ring2, shift))
    order = MonomialOrder.elimination(n + 1, [0])
    G = buchberger(lifted, order, pair_limit)
    out = []
    for g in G.generators:
        if g.degree_in(0) == 0:
            out.append(Polynomial({e[1:]: c for e, c in g.terms.items()}, ring))
    return out


def is_member(f: Polynomial, gens: Sequence[Polynomial], pair_limit: int = DEFAULT_PAIR_LIMIT) -> bool:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return f.is_zero()
    return buchberger(gens, "grevlex", pair_limit).contains(f)
