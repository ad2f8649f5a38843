"""Buchberger's algorithm over the rationals with fraction-free integer reduction."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm as ilcm
from typing import Sequence

from ..poly import Polynomial, norm_coeff
from . import _kernel
from .orders import MonomialOrder, make_order

DEFAULT_PAIR_LIMIT = 10**6


class GroebnerTimeout(RuntimeError):
    """The pair budget ran out before the basis was complete."""

    def __init__(self, pairs: int):
        super().__init__(f"pair limit exhausted after {pairs} reductions")
        self.pairs = pairs


class _Empty:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"

    __str__ = __repr__

    def __reduce__(self):
        return (_Empty, ())


EMPTY = _Empty()


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple[Polynomial, ...]
    order: MonomialOrder
    pairs_reduced: int = 0

    @property
    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    def leading_keys(self) -> list[int]:
        return [self.order.encode(_lead_exps(g, self.order)) for g in self.generators]

    def leading_exponents(self) -> list[tuple[int, ...]]:
        return [_lead_exps(g, self.order) for g in self.generators]

    def reduce(self, f: Polynomial) -> Polynomial:
        """Remainder of f, exact (rational coefficients)."""
        return _reduce_exact(f, self)

    def contains(self, f: Polynomial) -> bool:
        if f.ring != self.generators[0].ring:
            raise ValueError("polynomial lives in a different ring")
        if f.is_zero():
            return True
        order = self.order
        entries = [_entry(to_internal(g, order), order.mask) for g in self.generators]
        fk, fc = to_internal(f, order)
        rk, _ = _kernel.normal_form(fk, fc, entries, order.mask, order.guard, False)
        return not rk


def _lead_exps(g: Polynomial, order: MonomialOrder) -> tuple[int, ...]:
    return max(g.terms, key=order.encode)


def to_internal(P: Polynomial, order: MonomialOrder) -> tuple[list[int], list[int]]:
    """Primitive integer representation with descending keys."""
    items = sorted(((order.encode(e), c) for e, c in P.terms.items()), reverse=True)
    den = 1
    for _, c in items:
        if isinstance(c, Fraction):
            den = ilcm(den, c.denominator)
    keys = [k for k, _ in items]
    coeffs = [int(c * den) for _, c in items]
    return _kernel.primitive(keys, coeffs)


def from_internal(keys: Sequence[int], coeffs: Sequence[int], order: MonomialOrder,
                  ring: Sequence[str], monic: bool = True) -> Polynomial:
    lc = coeffs[0] if coeffs else 1
    terms = {}
    for k, c in zip(keys, coeffs):
        terms[order.decode(k)] = norm_coeff(Fraction(c, lc)) if monic else c
    return Polynomial(terms, ring)


def _entry(p, mask):
    k, c = p
    return (k[0], k[0] & mask, c[0], k[1:], c[1:])


def buchberger_internal(polys, order: MonomialOrder, pair_limit: int = DEFAULT_PAIR_LIMIT):
    """Reduced Groebner basis of internal polynomials; returns (basis, pairs)."""
    mask, guard = order.mask, order.guard
    nf = _kernel.normal_form
    polys = [p for p in polys if p[0]]
    if not polys:
        return [], 0

    def divides(a, b):
        return ((b & mask | guard) - (a & mask)) & guard == guard

    lcm = order.lcm

    # interreduce the input until stable
    cur = sorted(polys, key=lambda p: p[0][0])
    while True:
        out = []
        for p in cur:
            r = nf(p[0], p[1], [_entry(q, mask) for q in out], mask, guard, True)
            if r[0]:
                out.append(r)
        if [p[0][0] for p in out] == [p[0][0] for p in cur] and len(out) == len(cur):
            cur = out
            break
        cur = sorted(out, key=lambda p: p[0][0])
    for p in cur:
        if p[0][0] & mask == 0:
            return [([p[0][0]], [1])], 0

    f: list = []
    lead: list[int] = []
    G: list[int] = []
    pairs: dict[tuple[int, int], int] = {}
    heap: list = []

    def update(ih):
        nonlocal G
        mh = lead[ih]
        C = list(G)
        D = []
        while C:
            ig = C.pop(0)
            mg = lead[ig]
            lhg = lcm(mh, mg)
            coprime = mh + mg == lhg
            if coprime or (not any(divides(lcm(mh, lead[x]), lhg) for x in C)
                           and not any(divides(lcm(mh, lead[pr[1]]), lhg) for pr in D)):
                D.append((ih, ig, lhg, coprime))
        new_pairs = {}
        for (a, b), l12 in pairs.items():
            if (not divides(mh, l12) or lcm(lead[a], mh) == l12 or lcm(lead[b], mh) == l12):
                new_pairs[(a, b)] = l12
        for a, b, l, coprime in D:
            if not coprime:
                new_pairs[(a, b)] = l
                heapq.heappush(heap, (l, a, b))
        pairs.clear()
        pairs.update(new_pairs)
        G = [ig for ig in G if not divides(mh, lead[ig])] + [ih]

    for p in sorted(cur, key=lambda p: p[0][0]):
        f.append(p)
        lead.append(p[0][0])
        update(len(f) - 1)

    count = 0
    while pairs:
        l, a, b = heapq.heappop(heap)
        if pairs.get((a, b)) != l:
            continue
        del pairs[(a, b)]
        count += 1
        if count > pair_limit:
            raise GroebnerTimeout(count - 1)
        pa, pb = f[a], f[b]
        ca, cb = pa[1][0], pb[1][0]
        g = gcd(ca, cb)
        sk, sc = _kernel.axpy(cb // g, pa[0][1:], pa[1][1:], l - lead[a],
                              -(ca // g), pb[0][1:], pb[1][1:], l - lead[b])
        if not sk:
            continue
        basis = sorted(G, key=lambda i: lead[i])
        r = nf(sk, sc, [_entry(f[i], mask) for i in basis], mask, guard, True)
        if not r[0]:
            continue
        if r[0][0] & mask == 0:
            return [([r[0][0]], [1])], count
        f.append(r)
        lead.append(r[0][0])
        update(len(f) - 1)

    # reduce: minimal leads, then tail-reduce
    Gs = sorted(G, key=lambda i: lead[i], reverse=True)
    reduced = []
    for i in Gs:
        others = [_entry(f[j], mask) for j in Gs if j != i]
        r = nf(f[i][0], f[i][1], others, mask, guard, True)
        if r[0]:
            reduced.append(r)
    reduced.sort(key=lambda p: p[0][0], reverse=True)
    return reduced, count


def buchberger(gens: Sequence[Polynomial], order="grevlex",
               pair_limit: int = DEFAULT_PAIR_LIMIT) -> GroebnerBasis:
    """Reduced Groebner basis (monic, tail-reduced) of the ideal generated by ``gens``."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator to fix the ring")
    ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise ValueError("generators live in different rings")
    order = make_order(order, len(ring))
    internal = [to_internal(g, order) for g in gens if not g.is_zero()]
    basis, count = buchberger_internal(internal, order, pair_limit)
    out = tuple(from_internal(k, c, order, ring) for k, c in basis)
    return GroebnerBasis(out, order, count)


def _reduce_exact(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of f by plain division with the monic basis."""
    order = G.order
    leads = [(order.encode(_lead_exps(g, order)), _lead_exps(g, order), g) for g in G.generators]
    rem = {}
    p = dict(f.terms)
    while p:
        e = max(p, key=order.encode)
        c = p[e]
        k = order.encode(e)
        for lk, ge, g in leads:
            if order.divides(lk, k):
                q = tuple(a - b for a, b in zip(e, ge))
                scale = Fraction(c) / Fraction(g.terms[ge])
                for ee, cc in g.terms.items():
                    t = tuple(a + b for a, b in zip(ee, q))
                    v = p.get(t, 0) - scale * cc
                    if v:
                        p[t] = norm_coeff(v)
                    else:
                        p.pop(t, None)
                break
        else:
            rem[e] = c
            del p[e]
    return Polynomial(rem, f.ring)
