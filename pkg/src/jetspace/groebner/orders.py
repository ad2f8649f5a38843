"""Monomial orders packed into single integers.

A monomial x^e maps to ``key = (order_key << D) | pe`` where ``pe`` packs the
exponents into 16-bit slots (variable i in slot i) and ``order_key`` realizes
the order. Keys compare like monomials, and ``key(a*b) == key(a) + key(b)``,
so multiplication and exact division are integer addition and subtraction.
Divisibility is read off ``pe`` with one guard bit per slot.
"""

from __future__ import annotations

from typing import Sequence

SLOT = 16
MAX_EXP = (1 << (SLOT - 1)) - 1
_DEG_BITS = 32


class MonomialOrder:
    """A block order; each block is ``("grevlex" | "lex", variable indices)``.

    Earlier blocks dominate, and within a block earlier indices are larger variables.
    """

    def __init__(self, nvars: int, blocks: Sequence[tuple[str, Sequence[int]]] | None = None):
        if blocks is None:
            blocks = [("grevlex", range(nvars))]
        blocks = [(kind, tuple(vs)) for kind, vs in blocks]
        seen = [v for _, vs in blocks for v in vs]
        if sorted(seen) != list(range(nvars)):
            raise ValueError("blocks must partition the variables")
        for kind, _ in blocks:
            if kind not in ("grevlex", "lex"):
                raise ValueError(f"unknown block kind {kind!r}")
        self.nvars = nvars
        self.blocks = tuple(blocks)
        self.D = SLOT * nvars
        self.mask = (1 << self.D) - 1
        self.guard = sum(1 << (SLOT * i + SLOT - 1) for i in range(nvars))
        widths = [SLOT * len(vs) + (_DEG_BITS if kind == "grevlex" else 0) for kind, vs in blocks]
        offs, acc = [], 0
        for w in reversed(widths):
            offs.append(acc)
            acc += w
        self._offsets = tuple(reversed(offs))

    @classmethod
    def grevlex(cls, nvars: int) -> "MonomialOrder":
        return cls(nvars, [("grevlex", range(nvars))])

    @classmethod
    def lex(cls, nvars: int, priority: Sequence[int] | None = None) -> "MonomialOrder":
        return cls(nvars, [("lex", range(nvars) if priority is None else priority)])

    @classmethod
    def elimination(cls, nvars: int, eliminate: Sequence[int]) -> "MonomialOrder":
        """grevlex on ``eliminate`` above grevlex on the rest."""
        el = list(eliminate)
        rest = [i for i in range(nvars) if i not in set(el)]
        blocks = [("grevlex", el)] + ([("grevlex", rest)] if rest else [])
        return cls(nvars, blocks)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.nvars, self.blocks) == (other.nvars, other.blocks)

    def __hash__(self):
        return hash((self.nvars, self.blocks))

    def __repr__(self):
        return f"MonomialOrder({self.nvars}, {list(self.blocks)!r})"

    def encode(self, exps: Sequence[int]) -> int:
        pe = 0
        for i, e in enumerate(exps):
            if e > MAX_EXP:
                raise OverflowError(f"exponent {e} exceeds {MAX_EXP}")
            pe |= e << (SLOT * i)
        ok = 0
        for (kind, vs), off in zip(self.blocks, self._offsets):
            k = len(vs)
            if kind == "grevlex":
                deg = 0
                bpe = 0
                for s, v in enumerate(vs):
                    deg += exps[v]
                    bpe |= exps[v] << (SLOT * s)
                bk = (deg << (SLOT * k)) - bpe
            else:
                bk = 0
                for v in vs:
                    bk = (bk << SLOT) | exps[v]
            ok |= bk << off
        return (ok << self.D) | pe

    def decode(self, key: int) -> tuple[int, ...]:
        pe = key & self.mask
        return tuple((pe >> (SLOT * i)) & 0xFFFF for i in range(self.nvars))

    def pe(self, key: int) -> int:
        return key & self.mask

    def divides(self, a: int, b: int) -> bool:
        """Whether monomial ``a`` divides monomial ``b``."""
        g = self.guard
        return ((b & self.mask | g) - (a & self.mask)) & g == g

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.decode(a), self.decode(b)
        return self.encode([x if x > y else y for x, y in zip(ea, eb)])

    def degree(self, key: int) -> int:
        return sum(self.decode(key))

    def support(self, key: int) -> frozenset[int]:
        pe = key & self.mask
        return frozenset(i for i in range(self.nvars) if (pe >> (SLOT * i)) & 0xFFFF)


def make_order(order, nvars: int) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        if order.nvars != nvars:
            raise ValueError("order is for a different number of variables")
        return order
    if order == "grevlex":
        return MonomialOrder.grevlex(nvars)
    if order == "lex":
        return MonomialOrder.lex(nvars)
    raise ValueError(f"unknown monomial order {order!r}")
