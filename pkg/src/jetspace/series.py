"""Truncated power series in one parameter t, jet points and orders along ideals."""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Sequence, Union

from .poly import Coeff, Polynomial, norm_coeff


@functools.total_ordering
class _Infinity:
    """The order of a series that vanishes to every computed degree."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __hash__(self):
        return hash("INFINITY")

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
ExtOrder = Union[int, _Infinity]


def order_to_json(o: ExtOrder):
    return "INFINITY" if o is INFINITY else o


class TruncSeries:
    """Element of Q[t]/(t^(cap+1))."""

    __slots__ = ("coeffs", "cap")

    def __init__(self, coeffs: Sequence = (), cap: int | None = None):
        coeffs = [norm_coeff(c) for c in coeffs]
        if cap is None:
            cap = max(len(coeffs) - 1, 0)
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        if len(coeffs) > cap + 1:
            coeffs = coeffs[:cap + 1]
        coeffs += [0] * (cap + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.cap = cap

    @classmethod
    def _raw(cls, coeffs: tuple, cap: int) -> "TruncSeries":
        s = object.__new__(cls)
        s.coeffs = coeffs
        s.cap = cap
        return s

    @classmethod
    def zero(cls, cap: int) -> "TruncSeries":
        return cls._raw((0,) * (cap + 1), cap)

    @classmethod
    def constant(cls, c, cap: int) -> "TruncSeries":
        return cls._raw((norm_coeff(c),) + (0,) * cap, cap)

    @classmethod
    def from_polynomial(cls, P: Polynomial, cap: int, strict: bool = True) -> "TruncSeries":
        """Series of a univariate polynomial in t; ``strict`` rejects degree above cap."""
        if P.nvars != 1:
            raise ValueError("expected a polynomial in the single variable t")
        if strict and P.total_degree() > cap:
            raise ValueError(f"degree {P.total_degree()} exceeds cap {cap}")
        c = [0] * (cap + 1)
        for (k,), v in P.terms.items():
            if k <= cap:
                c[k] = v
        return cls._raw(tuple(c), cap)

    def __getitem__(self, i: int) -> Coeff:
        return self.coeffs[i] if 0 <= i <= self.cap else 0

    def with_cap(self, cap: int) -> "TruncSeries":
        """Truncate, or zero-pad when raising the cap."""
        if cap <= self.cap:
            return TruncSeries._raw(self.coeffs[:cap + 1], cap)
        return TruncSeries._raw(self.coeffs + (0,) * (cap - self.cap), cap)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.constant(other, self.cap)
        cap = min(self.cap, other.cap)
        return TruncSeries._raw(tuple(norm_coeff(a + b) for a, b in zip(self.coeffs[:cap + 1], other.coeffs[:cap + 1])), cap)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw(tuple(-a for a in self.coeffs), self.cap)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncSeries) else -norm_coeff(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = norm_coeff(other)
            return TruncSeries._raw(tuple(norm_coeff(a * c) for a in self.coeffs), self.cap)
        cap = min(self.cap, other.cap)
        a, b = self.coeffs, other.coeffs
        out = [0] * (cap + 1)
        for i in range(cap + 1):
            ai = a[i]
            if ai:
                for j in range(cap + 1 - i):
                    bj = b[j]
                    if bj:
                        out[i + j] += ai * bj
        return TruncSeries._raw(tuple(norm_coeff(x) for x in out), cap)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = TruncSeries.constant(1, self.cap)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by t^k (k >= 0) keeping the cap."""
        if k <= 0:
            return self
        return TruncSeries._raw(((0,) * k + self.coeffs)[:self.cap + 1], self.cap)

    def __eq__(self, other):
        return isinstance(other, TruncSeries) and self.cap == other.cap and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.cap))

    def to_polynomial_str(self, var: str = "t") -> str:
        P = Polynomial({(i,): c for i, c in enumerate(self.coeffs) if c}, (var,))
        return str(P)

    def __repr__(self):
        return f"TruncSeries({self.to_polynomial_str()!r}, cap={self.cap})"


def ord(s: TruncSeries) -> ExtOrder:
    """Index of the first nonzero coefficient, INFINITY if none up to the cap."""
    for i, c in enumerate(s.coeffs):
        if c:
            return i
    return INFINITY


class JetPoint:
    """n truncated series sharing a cap p; equivalently its canonical degree <= p lift."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[TruncSeries]):
        components = tuple(components)
        if components and len({c.cap for c in components}) != 1:
            raise ValueError("all components must share one cap")
        self.components = components

    @classmethod
    def from_coeffs(cls, rows: Sequence[Sequence], cap: int | None = None) -> "JetPoint":
        """Build from per-variable coefficient lists [u_j0, u_j1, ...]."""
        rows = [list(r) for r in rows]
        if cap is None:
            cap = max((len(r) for r in rows), default=1) - 1
        return cls([TruncSeries(r, cap) for r in rows])

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def cap(self) -> int:
        return self.components[0].cap if self.components else 0

    def lift(self, cap: int) -> "JetPoint":
        """Canonical lift reinterpreted at a higher cap (zero padding)."""
        if cap < self.cap:
            raise ValueError("lift target below current cap")
        return JetPoint([c.with_cap(cap) for c in self.components])

    def truncate(self, cap: int) -> "JetPoint":
        return JetPoint([c.with_cap(cap) for c in self.components])

    def coefficient_vector(self, level: int | None = None) -> list[Coeff]:
        """Coordinates u_{j,i} in j-major, i-minor order, i <= level."""
        level = self.cap if level is None else level
        return [c[i] for c in self.components for i in range(level + 1)]

    def __add__(self, other: "JetPoint") -> "JetPoint":
        return JetPoint([a + b for a, b in zip(self.components, other.components)])

    def __eq__(self, other):
        return isinstance(other, JetPoint) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def to_text(self) -> str:
        return "; ".join(c.to_polynomial_str() for c in self.components)

    def __repr__(self):
        return f"JetPoint({self.to_text()!r}, cap={self.cap})"


def parse_jet(text: str, n: int, cap: int) -> JetPoint:
    """Parse ``"t^3; t^2"`` style syntax into a JetPoint with the given cap."""
    from .parsing import parse_polynomial

    parts = [p.strip() for p in text.split(";")]
    if len(parts) != n:
        raise ValueError(f"jet has {len(parts)} components, expected {n}")
    comps = []
    for part in parts:
        P = parse_polynomial(part, ("t",))
        comps.append(TruncSeries.from_polynomial(P, cap))
    return JetPoint(comps)


def evaluate(P: Polynomial, u: JetPoint, cap: int | None = None) -> TruncSeries:
    """P(u_1(t), ..., u_n(t)) truncated at ``cap`` (default: the cap of u).

    A cap above u's cap evaluates the canonical lift of u.
    """
    if P.nvars != u.n:
        raise ValueError(f"polynomial has {P.nvars} variables, jet has {u.n} components")
    cap = u.cap if cap is None else cap
    comps = [c.with_cap(cap) for c in u.components]
    powers: list[list[TruncSeries]] = [[TruncSeries.constant(1, cap)] for _ in comps]
    total = [0] * (cap + 1)
    for e, c in P.terms.items():
        term = None
        for j, k in enumerate(e):
            if not k:
                continue
            pw = powers[j]
            while len(pw) <= k:
                pw.append(pw[-1] * comps[j])
            term = pw[k] if term is None else term * pw[k]
        if term is None:
            total[0] += c
        else:
            for i, a in enumerate(term.coeffs):
                if a:
                    total[i] += c * a
    return TruncSeries._raw(tuple(norm_coeff(x) for x in total), cap)


def ord_along_ideal(gens: Sequence[Polynomial], u: JetPoint, cap: int | None = None) -> ExtOrder:
    """Minimum order of g(u) over the generators (equals the minimum over the ideal)."""
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    return min(ord(evaluate(g, u, cap)) for g in gens)


def series_solve_scalar(a: TruncSeries, b: TruncSeries) -> TruncSeries | None:
    """Return q with a*q = b modulo t^(cap+1-ord a) if b is divisible by a, else None."""
    oa = ord(a)
    if oa is INFINITY:
        return TruncSeries.zero(b.cap) if b.is_zero() else None
    ob = ord(b)
    if ob is INFINITY:
        return TruncSeries.zero(b.cap)
    if ob < oa:
        return None
    cap = min(a.cap, b.cap) - oa
    A = a.coeffs[oa:oa + cap + 1]
    B = b.coeffs[oa:oa + cap + 1]
    inv0 = Fraction(1) / Fraction(A[0])
    q = [0] * (cap + 1)
    for i in range(cap + 1):
        s = B[i] - sum(A[j] * q[i - j] for j in range(1, i + 1) if j < len(A))
        q[i] = norm_coeff(s * inv0)
    return TruncSeries._raw(tuple(q), cap)
