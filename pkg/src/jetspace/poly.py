"""Exact sparse multivariate polynomials over the rationals and polynomial matrices.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
coefficients, tied to an ordered tuple of variable names (its *ring*).
Coefficients are Python ``int`` when integral and ``Fraction`` otherwise, so
equal polynomials always have identical term maps.

Indices for rows, columns and variables are 0-based throughout.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Coeff = Union[int, Fraction]


def norm_coeff(c) -> Coeff:
    """Return ``c`` as an exact rational, demoting integral fractions to int."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return norm_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficient must be an exact rational, got {type(c).__name__}")


def grevlex_key(exps: Sequence[int]):
    """Sort key: larger key means larger monomial in graded reverse lex order."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def format_coeff(c: Coeff) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, ring: Sequence[str] = ()):
        ring = tuple(ring)
        clean: dict[tuple, Coeff] = {}
        nv = len(ring)
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nv:
                raise ValueError(f"exponent tuple {exps} does not match ring of {nv} variables")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = norm_coeff(c)
            if c:
                clean[exps] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, ring: tuple) -> "Polynomial":
        # trusted constructor: terms already normalized, no zeros
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, ring: Sequence[str]) -> "Polynomial":
        return cls._raw({}, tuple(ring))

    @classmethod
    def constant(cls, c, ring: Sequence[str]) -> "Polynomial":
        ring = tuple(ring)
        c = norm_coeff(c)
        return cls._raw({(0,) * len(ring): c} if c else {}, ring)

    @classmethod
    def var(cls, name_or_index, ring: Sequence[str]) -> "Polynomial":
        ring = tuple(ring)
        i = ring.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        if not 0 <= i < len(ring):
            raise IndexError(f"variable index {i} out of range")
        e = [0] * len(ring)
        e[i] = 1
        return cls._raw({tuple(e): 1}, ring)

    @classmethod
    def gens(cls, ring: Sequence[str]) -> list["Polynomial"]:
        return [cls.var(i, ring) for i in range(len(ring))]

    @classmethod
    def parse(cls, text: str, ring: Sequence[str]) -> "Polynomial":
        from .parsing import parse_polynomial

        return parse_polynomial(text, tuple(ring))

    # -- basic queries --------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Coeff:
        return self.terms.get((0,) * len(self.ring), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def support(self) -> frozenset[int]:
        """Indices of variables that occur in some term."""
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return frozenset(used)

    def sorted_terms(self) -> list[tuple[tuple, Coeff]]:
        """Terms in descending graded reverse lex order."""
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def leading_term(self) -> tuple[tuple, Coeff]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms.items(), key=lambda kv: grevlex_key(kv[0]))

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return Polynomial.constant(other, self.ring)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = norm_coeff(s + c)
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial._raw(out, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = norm_coeff(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial.zero(self.ring)
            return Polynomial._raw({e: norm_coeff(v * c) for e, v in self.terms.items()}, self.ring)
        other = self._coerce(other)
        out: dict[tuple, Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw({e: norm_coeff(c) for e, c in out.items() if c}, self.ring)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division by a nonzero scalar only
        c = norm_coeff(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (Fraction(1) / Fraction(c))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            c = norm_coeff(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(0,) * len(self.ring): c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and substitution ---------------------------------------
    def derivative(self, i: int) -> "Polynomial":
        if not 0 <= i < len(self.ring):
            raise IndexError(f"variable index {i} out of range for ring of {len(self.ring)} variables")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Polynomial._raw(out, self.ring)

    def evaluate(self, values: Sequence) -> Coeff:
        """Evaluate at a point with exact rational coordinates."""
        if len(values) != len(self.ring):
            raise ValueError("point dimension does not match ring")
        vals = [norm_coeff(v) for v in values]
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t *= v ** k
            total += t
        return norm_coeff(total)

    def compose(self, images: Sequence["Polynomial"], ring: Sequence[str] | None = None) -> "Polynomial":
        """Substitute ``images[i]`` for variable ``i``; images share a target ring."""
        if len(images) != len(self.ring):
            raise ValueError("need one image per variable")
        target = tuple(ring) if ring is not None else (images[0].ring if images else ())
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        result = Polynomial.zero(target)
        for e, c in self.terms.items():
            t = Polynomial.constant(c, target)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
        return result

    def substitute(self, i: int, value: "Polynomial | int | Fraction") -> "Polynomial":
        """Replace variable ``i`` by ``value`` (a polynomial in the same ring or a constant)."""
        if not isinstance(value, Polynomial):
            value = Polynomial.constant(value, self.ring)
        if value.is_constant():
            v = value.constant_term()
            out: dict[tuple, Coeff] = {}
            for e, c in self.terms.items():
                k = e[i]
                if k and not v:
                    continue
                e2 = e[:i] + (0,) + e[i + 1:]
                out[e2] = out.get(e2, 0) + c * (v ** k)
            return Polynomial._raw({e: norm_coeff(c) for e, c in out.items() if c}, self.ring)
        groups: dict[int, dict] = {}
        for e, c in self.terms.items():
            groups.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        result = Polynomial.zero(self.ring)
        for k in sorted(groups):
            part = Polynomial._raw(groups[k], self.ring)
            result = result + (part * value ** k if k else part)
        return result

    def rename(self, ring: Sequence[str], index_map: Sequence[int]) -> "Polynomial":
        """Move into ``ring``; variable ``i`` of self becomes variable ``index_map[i]``."""
        ring = tuple(ring)
        n = len(ring)
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * n
            for i, k in enumerate(e):
                if k:
                    e2[index_map[i]] += k
            out[tuple(e2)] = c
        return Polynomial._raw(out, ring)

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self * (Fraction(1) / Fraction(self.leading_term()[1]))

    # -- rendering -------------------------------------------------------
    def monomial_str(self, exps: Sequence[int]) -> str:
        parts = []
        for name, k in zip(self.ring, exps):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = self.monomial_str(e)
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{format_coeff(a)}*{mono}"
            else:
                body = format_coeff(a)
            if idx == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, ring={self.ring!r})"


def partial_derivative(P: Polynomial, i: int) -> Polynomial:
    return P.derivative(i)


class PolyMatrix:
    """Dense matrix of polynomials sharing one ring, stored row-major."""

    __slots__ = ("rows", "cols", "entries", "ring")

    def __init__(self, rows: int, cols: int, entries: Sequence[Polynomial], ring: Sequence[str] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        if ring is None:
            ring = entries[0].ring if entries else ()
        ring = tuple(ring)
        if any(p.ring != ring for p in entries):
            raise ValueError("all entries must share one ring")
        self.rows, self.cols, self.entries, self.ring = rows, cols, entries, ring

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ring: Sequence[str] = ()) -> "PolyMatrix":
        ring = tuple(ring)
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        entries = [x if isinstance(x, Polynomial) else Polynomial.constant(x, ring) for r in rows for x in r]
        return cls(len(rows), ncols, entries, ring)

    @classmethod
    def identity(cls, size: int, ring: Sequence[str] = ()) -> "PolyMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(size)] for i in range(size)], ring)

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Polynomial]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def tolist(self) -> list[list[Polynomial]]:
        return [self.row(i) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(len(row_idx), len(col_idx), [self[i, j] for i in row_idx for j in col_idx], self.ring)

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("incompatible shapes")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                s = Polynomial.zero(self.ring)
                for k in range(self.cols):
                    s = s + self[i, k] * other[k, j]
                out.append(s)
        return PolyMatrix(self.rows, other.cols, out, self.ring)

    def scale(self, p: Polynomial) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, [p * x for x in self.entries], self.ring)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and (self.rows, self.cols, self.ring) == (other.rows, other.cols, other.ring)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"PolyMatrix({[[str(x) for x in r] for r in self.tolist()]})"

    def det(self) -> Polynomial:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return _det(self, list(range(self.rows)), list(range(self.cols)))


def _det(A: PolyMatrix, rows: list[int], cols: list[int]) -> Polynomial:
    """Laplace expansion along successive rows, memoized on column subsets."""
    k = len(rows)
    one = Polynomial.constant(1, A.ring)
    if k == 0:
        return one
    # level t holds det(rows[:t] x S) for every t-subset S (as bitmask over cols)
    level = {0: one}
    for t in range(1, k + 1):
        r = rows[t - 1]
        nxt: dict[int, Polynomial] = {}
        for mask, sub in level.items():
            if sub.is_zero():
                continue
            for pos in range(k):
                bit = 1 << pos
                if mask & bit:
                    continue
                a = A[r, cols[pos]]
                if a.is_zero():
                    continue
                # column position of `pos` inside the enlarged subset
                j = bin(mask & (bit - 1)).count("1")
                term = a * sub
                if (t - 1 + j) % 2:
                    term = -term
                m2 = mask | bit
                nxt[m2] = nxt[m2] + term if m2 in nxt else term
        level = nxt
    return level.get((1 << k) - 1, Polynomial.zero(A.ring))


def jacobian_matrix(F: Sequence[Polynomial], n: int | None = None) -> PolyMatrix:
    """r x n matrix of partials dF_k/dT_l."""
    F = list(F)
    if n is None:
        if not F:
            raise ValueError("cannot infer the variable count from an empty system")
        n = F[0].nvars
    if len(F) > n:
        raise ValueError(f"{len(F)} equations exceed the {n} ambient variables")
    if any(f.nvars != n for f in F):
        raise ValueError("equation ring size differs from n")
    ring = F[0].ring if F else tuple(f"T{i}" for i in range(n))
    return PolyMatrix(len(F), n, [f.derivative(l) for f in F for l in range(n)], ring)


def minor(A: PolyMatrix, deleted_rows: Iterable[int] = (), deleted_cols: Iterable[int] = ()) -> Polynomial:
    """Determinant of A with the given rows and columns removed (no sign applied)."""
    dr, dc = set(deleted_rows), set(deleted_cols)
    if any(not 0 <= i < A.rows for i in dr) or any(not 0 <= j < A.cols for j in dc):
        raise IndexError("deleted index out of range")
    rows = [i for i in range(A.rows) if i not in dr]
    cols = [j for j in range(A.cols) if j not in dc]
    if len(rows) != len(cols):
        raise ValueError(f"remaining submatrix is {len(rows)}x{len(cols)}, not square")
    return _det(A, rows, cols)


def all_minors(A: PolyMatrix, size: int) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Polynomial]:
    """Every size x size minor keyed by (row subset, column subset), subsets ascending."""
    out = {}
    for rs in combinations(range(A.rows), size):
        for cs in combinations(range(A.cols), size):
            out[(rs, cs)] = _det(A, list(rs), list(cs))
    return out


def classical_adjoint(A: PolyMatrix) -> PolyMatrix:
    """Adjugate M with m_ij = (-1)^(i+j) * minor(A, {j}, {i}), so M*A = A*M = det(A)*I."""
    if not A.is_square():
        raise ValueError("classical adjoint needs a square matrix")
    r = A.rows
    out = []
    for i in range(r):
        for j in range(r):
            d = minor(A, [j], [i])
            out.append(-d if (i + j) % 2 else d)
    return PolyMatrix(r, r, out, A.ring)


def jacobi_minor_identity_residual(A: PolyMatrix, i: int, k: int, j: int, l: int) -> Polynomial:
    """delta_{i,j} delta_{k,l} - delta_{i,l} delta_{k,j} - det(A) delta_{ik,jl}; always zero."""
    if not A.is_square():
        raise ValueError("identity is stated for square matrices")
    r = A.rows
    if r < 2:
        raise ValueError("matrix must be at least 2x2")
    if not (0 <= i < k < r and 0 <= j < l < r):
        raise ValueError(f"need 0 <= i < k < {r} and 0 <= j < l < {r}, got i={i} k={k} j={j} l={l}")
    d_ij = minor(A, [i], [j])
    d_kl = minor(A, [k], [l])
    d_il = minor(A, [i], [l])
    d_kj = minor(A, [k], [j])
    d_ikjl = minor(A, [i, k], [j, l])
    return d_ij * d_kl - d_il * d_kj - A.det() * d_ikjl


def symbolic_matrix(size: int, prefix: str = "a") -> PolyMatrix:
    """Generic size x size matrix whose entries are distinct variables a_i_j."""
    ring = tuple(f"{prefix}_{i}_{j}" for i in range(size) for j in range(size))
    return PolyMatrix(size, size, Polynomial.gens(ring), ring)
