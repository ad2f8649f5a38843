"""Log canonical / canonical / terminal tests via dimensions of jets over the singular locus.

X_m is equidimensional, irreducible or normal exactly when the jets lying over
X_sing have dimension at most (m+1)d, (m+1)d - 1 or (m+1)d - 2. A finite sweep can
refute a class but only ever supports it up to the last level checked.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .groebner import EMPTY, GroebnerTimeout, ideal_dimension
from .groebner.engine import DEFAULT_PAIR_LIMIT
from .jets import SubschemeSpec, jacobian_subscheme, jet_ideal, jet_index
from .mld import MldStatus, PairSpec, mld_lower_bound_test
from .poly import Polynomial

CLASSES = ("log_canonical", "canonical", "terminal")
HOLDS = "HOLDS_UP_TO_SWEEP"
UNKNOWN = "UNKNOWN"


@dataclass
class LevelRow:
    m: int
    dim: object  # int, EMPTY, or None after a timeout
    thresholds: tuple[int, int, int]

    def breaches(self) -> tuple[bool, bool, bool] | None:
        if self.dim is None:
            return None
        if self.dim is EMPTY:
            return (False, False, False)
        return tuple(self.dim > t for t in self.thresholds)

    def to_json(self) -> dict:
        dim = "UNKNOWN" if self.dim is None else ("EMPTY" if self.dim is EMPTY else self.dim)
        lc, can, term = self.thresholds
        return {"m": self.m, "dim": dim, "threshold_lc": lc, "threshold_can": can, "threshold_term": term}


@dataclass
class ClassifyReport:
    d: int
    m_max: int
    levels: list[LevelRow] = field(default_factory=list)

    def verdict(self, cls: str) -> str:
        k = CLASSES.index(cls)
        unknown = False
        for row in self.levels:
            b = row.breaches()
            if b is None:
                unknown = True
            elif b[k]:
                return f"REFUTED({row.m})"
        return UNKNOWN if unknown else HOLDS

    def holds(self, cls: str) -> bool | None:
        v = self.verdict(cls)
        return None if v == UNKNOWN else v == HOLDS

    @property
    def verdicts(self) -> dict[str, str]:
        return {c: self.verdict(c) for c in CLASSES}

    def to_json(self) -> dict:
        return {"d": self.d, "m_max": self.m_max, "levels": [r.to_json() for r in self.levels],
                "verdicts": self.verdicts}


def singular_fiber_generators(F: Sequence[Polynomial], n: int, m: int) -> tuple[list[Polynomial], tuple]:
    """Generators of pi_m^{-1}(X_sing) as a set, and the jet ring."""
    Z = jacobian_subscheme(F, n)
    I = jet_ideal(F, n, m)
    ring = I.jet_ring
    gens = list(I.generators)
    gens += [_level0(g, ring, m) for g in Z.gens]
    return [g for g in gens if not g.is_zero()], ring


def _level0(g: Polynomial, jet_ring, m: int) -> Polynomial:
    return g.rename(jet_ring, [jet_index(m + 1, j, 0) for j in range(len(g.ring))])


def _level_dimension(args):
    F, n, m, pair_limit = args
    gens, ring = singular_fiber_generators(F, n, m)
    try:
        return ideal_dimension(gens, ring=ring, pair_limit=pair_limit)
    except GroebnerTimeout:
        return None


def classify_singularities(F: Sequence[Polynomial], d: int, m_max: int,
                           pair_limit: int = DEFAULT_PAIR_LIMIT, threads: int | None = None) -> ClassifyReport:
    F = list(F)
    if not F:
        raise ValueError("need at least one equation")
    n = len(F[0].ring)
    if d != n - len(F):
        raise ValueError(f"declared dimension {d} does not match n - r = {n - len(F)}")
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    threads = threads or max(1, int(os.environ.get("JETSPACE_THREADS", "1") or 1))
    args = [(tuple(F), n, m, pair_limit) for m in range(m_max + 1)]
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            dims = list(pool.map(_level_dimension, args))
    else:
        dims = [_level_dimension(a) for a in args]
    report = ClassifyReport(d, m_max)
    for m, dim in enumerate(dims):
        top = (m + 1) * d
        report.levels.append(LevelRow(m, dim, (top, top - 1, top - 2)))
    return report


def mld_route(F: Sequence[Polynomial], sweep: tuple[int, int, int] = (6, 0, 4),
              eps: Fraction = Fraction(1, 2), pair_limit: int = DEFAULT_PAIR_LIMIT) -> dict[str, MldStatus]:
    """Statuses of the jet mld test for (A^n, r X) along X_sing at tau = 0, 1, 1 + eps.

    The three thresholds read off log canonical (mld >= 0), canonical (mld >= 1)
    and terminal (mld > 1, probed at 1 + eps).
    """
    F = list(F)
    ring = F[0].ring
    n = len(ring)
    Z = jacobian_subscheme(F, n)
    pair = PairSpec(ring, (), ((SubschemeSpec(tuple(F), "X"), Fraction(len(F))),), SubschemeSpec(Z.gens, "W"))
    out = {}
    for cls, tau in zip(CLASSES, (Fraction(0), Fraction(1), 1 + Fraction(eps))):
        out[cls] = mld_lower_bound_test(pair, tau, sweep, pair_limit).status
    return out


def crosscheck(report: ClassifyReport, route: dict[str, MldStatus]) -> dict[str, bool | None]:
    """Per class: do the dimension verdict and the mld verdict agree (None when undecided)."""
    out = {}
    for cls in CLASSES:
        held = report.holds(cls)
        status = route[cls]
        if held is None or status is MldStatus.INCONCLUSIVE:
            out[cls] = None
        else:
            out[cls] = held == (status is MldStatus.PASSED_SWEEP)
    return out
