"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples of ``int``; rational vectors are tuples of
:class:`fractions.Fraction`.  Nothing in this module touches floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
QVector = tuple[Fraction, ...]


class LatticeError(ValueError):
    pass


class NotAnInvolution(LatticeError):
    pass


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings such as ``"-3/2"``.  Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def qvec(values: Iterable) -> QVector:
    return tuple(as_fraction(v) for v in values)


def fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise LatticeError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(M: Sequence[Sequence]) -> tuple:
    return tuple(zip(*M)) if M else ()


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in A)


def vecmat(v: Sequence, A: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    if len(v) != len(A):
        raise LatticeError("dimension mismatch in vecmat")
    if not A:
        return ()
    return tuple(sum(v[i] * A[i][j] for i in range(len(A))) for j in range(len(A[0])))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _rows(M) -> list[list[int]]:
    rows = [list(r) for r in M]
    for r in rows:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise LatticeError(f"non-integer matrix entry {x!r}")
    return rows


def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``.  The nonzero
    rows of ``H`` come first, have positive pivots strictly moving right, and
    the entries above each pivot are reduced into ``[0, pivot)``.
    """
    A = _rows(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = [list(r) for r in identity(m)]

    def combine(i, j, a, b, c, d):
        # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)
        for T in (A, U):
            ri, rj = T[i], T[j]
            T[i] = [a * x + b * y for x, y in zip(ri, rj)]
            T[j] = [c * x + d * y for x, y in zip(ri, rj)]

    r = 0
    for col in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = A[i][col]
            if b == 0:
                continue
            a = A[r][col]
            g, x, y = xgcd(a, b)
            combine(r, i, x, y, -b // g, a // g)
        p = A[r][col]
        if p == 0:
            continue
        if p < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
            p = -p
        for i in range(r):
            q = A[i][col] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return tuple(map(tuple, A)), tuple(map(tuple, U))


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` diagonal, ``D[i][i] | D[i+1][i+1]``.

    ``U`` and ``V`` are unimodular; diagonal entries are non-negative.
    """
    A = _rows(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return tuple(map(tuple, A)), tuple(map(tuple, U)), tuple(map(tuple, V))


def determinant(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    if any(len(row) != n for row in A):
        raise LatticeError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    A = [[Fraction(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1]) if M else 0


def solve_left(B: Sequence[Sequence], v: Sequence) -> QVector | None:
    """Find rational ``c`` with ``c @ B == v`` (``B`` given by rows), or ``None``."""
    if not B:
        return () if all(x == 0 for x in v) else None
    k = len(B)
    # Augment B^T | v and row-reduce.
    aug = [list(col) + [x] for col, x in zip(transpose(B), v)]
    R, pivots = rref(aug)
    if k in pivots:
        return None
    c = [Fraction(0)] * k
    for row, p in zip(R, pivots):
        c[p] = row[k]
    return tuple(c)


def integer_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Basis (rows) of ``{y in Z^n : M y = 0}``; always saturated."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return identity(n)
    H, U = hermite_normal_form(transpose(M))
    return tuple(U[i] for i in range(n) if not any(H[i]))


def clear_denominators(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive integer multiple of ``v``."""
    den = math.lcm(*(Fraction(x).denominator for x in v)) if v else 1
    return tuple(int(Fraction(x) * den) for x in v)


def orthogonal_projection(v: Sequence, basis: Sequence[Sequence]) -> QVector:
    """Project ``v`` onto the rational span of ``basis`` (standard dot product)."""
    v = tuple(Fraction(x) for x in v)
    if not basis:
        return tuple(Fraction(0) for _ in v)
    gram = [[Fraction(dot(a, b)) for b in basis] for a in basis]
    rhs = [Fraction(dot(a, v)) for a in basis]
    c = solve_left(gram, rhs)  # gram is symmetric
    if c is None:
        raise LatticeError("degenerate basis in projection")
    return tuple(sum(ci * b[j] for ci, b in zip(c, basis)) for j in range(len(v)))


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of ``Z^ambient`` stored by its canonical HNF basis.

    Two sublattices are equal iff their bases are equal.  ``index`` is the
    index of the lattice in its saturation (1 for saturated lattices).
    """

    ambient: int
    basis: IntMatrix
    index: int = field(default=1, compare=False)

    @classmethod
    def span(cls, generators: Iterable[Sequence[int]], ambient: int) -> "Sublattice":
        gens = [tuple(g) for g in generators]
        for g in gens:
            if len(g) != ambient:
                raise LatticeError(f"generator {g} not in Z^{ambient}")
        if not gens:
            return cls(ambient, (), 1)
        H, _ = hermite_normal_form(gens)
        basis = tuple(r for r in H if any(r))
        if not basis:
            return cls(ambient, (), 1)
        D, _, _ = smith_normal_form(basis)
        idx = math.prod(D[i][i] for i in range(len(basis)))
        return cls(ambient, basis, idx)

    @classmethod
    def full(cls, n: int) -> "Sublattice":
        return cls(n, identity(n), 1)

    @classmethod
    def kernel(cls, functionals: Iterable[Sequence], ambient: int) -> "Sublattice":
        """``{y in Z^ambient : <f, y> = 0 for every f}`` (rational ``f`` allowed)."""
        rows = [clear_denominators(f) for f in functionals]
        rows = [r for r in rows if any(r)]
        return cls.span(integer_kernel(rows, ambient), ambient)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def _pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    @property
    def is_saturated(self) -> bool:
        return self.index == 1

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coordinates of ``v`` in :attr:`basis`, or ``None``."""
        if len(v) != self.ambient:
            raise LatticeError(f"vector of length {len(v)} in Z^{self.ambient}")
        # the basis is echelon, so peel off one pivot at a time
        rest = list(v)
        coords = []
        for row, p in zip(self.basis, self._pivots):
            if any(rest[:p]):
                return None
            c, r = divmod(rest[p], row[p])
            if r:
                return None
            coords.append(c)
            if c:
                rest = [a - c * b for a, b in zip(rest, row)]
        return tuple(coords) if not any(rest) else None

    def rational_coordinates(self, v: Sequence) -> QVector | None:
        return solve_left(self.basis, v)

    def point(self, coords: Sequence[int]) -> tuple[int, ...]:
        if not self.basis:
            return tuple(0 for _ in range(self.ambient))
        return tuple(int(x) for x in vecmat(tuple(coords), self.basis))

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(b in self for b in other.basis)

    def saturation(self) -> "Sublattice":
        if not self.basis:
            return self
        # The saturation is the kernel of the annihilator.
        ann = integer_kernel(self.basis, self.ambient)
        return Sublattice.span(integer_kernel(ann, self.ambient), self.ambient)

    def __add__(self, other: "Sublattice") -> "Sublattice":
        if other.ambient != self.ambient:
            raise LatticeError("ambient mismatch")
        return Sublattice.span(self.basis + other.basis, self.ambient)

    def intersection(self, other: "Sublattice") -> "Sublattice":
        if other.ambient != self.ambient:
            raise LatticeError("ambient mismatch")
        if not self.basis or not other.basis:
            return Sublattice(self.ambient, (), 1)
        # c @ B1 - d @ B2 = 0
        stacked = self.basis + tuple(tuple(-x for x in r) for r in other.basis)
        rel = integer_kernel(transpose(stacked), len(stacked))
        k = self.rank
        return Sublattice.span((self.point(r[:k]) for r in rel), self.ambient)

    def annihilated(self, functionals: Iterable[Sequence]) -> "Sublattice":
        """``{y in self : <f, y> = 0 for every f}``."""
        fs = list(functionals)
        if not fs or not self.basis:
            return self
        vals = [clear_denominators([dot(f, b) for b in self.basis]) for f in fs]
        vals = [r for r in vals if any(r)]
        coords = integer_kernel(vals, self.rank)
        return Sublattice.span((self.point(c) for c in coords), self.ambient)

    def points_in_box(self, radius: int) -> list[tuple[int, ...]]:
        """All lattice points with sup-norm at most ``radius``, sorted."""
        if not self.basis:
            return [tuple(0 for _ in range(self.ambient))]
        _, pivots = rref(self.basis)
        P = [[Fraction(b[p]) for p in pivots] for b in self.basis]
        # c = v_pivots @ P^{-1}; bound each |c_i| by radius * sum_j |P^{-1}[j][i]|
        inv = [solve_left(P, tuple(int(i == j) for i in range(self.rank))) for j in range(self.rank)]
        bounds = []
        for i in range(self.rank):
            s = sum(abs(inv[j][i]) for j in range(self.rank))
            bounds.append(math.floor(radius * s))
        pts = []
        for c in itertools.product(*(range(-b, b + 1) for b in bounds)):
            y = self.point(c)
            if max(abs(x) for x in y) <= radius:
                pts.append(y)
        pts.sort()
        return pts


def integer_combination(generators: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...] | None:
    """Integers ``c`` with ``c @ generators = v``, or ``None`` if ``v`` is not in their span."""
    gens = [tuple(g) for g in generators]
    if not gens:
        return () if not any(v) else None
    H, U = hermite_normal_form(gens)
    rows = [i for i, r in enumerate(H) if any(r)]
    if not rows:
        return tuple(0 for _ in gens) if not any(v) else None
    c = Sublattice(len(v), tuple(H[i] for i in rows)).coordinates(v)
    if c is None:
        return None
    return tuple(sum(ci * U[i][j] for ci, i in zip(c, rows)) for j in range(len(gens)))


def quotient_index(outer: Sublattice, inner: Sublattice) -> int | float:
    """Group index ``[outer : inner]``; ``math.inf`` when the ranks differ."""
    if not outer.contains_lattice(inner):
        raise LatticeError("inner lattice is not contained in outer lattice")
    if inner.rank != outer.rank:
        return math.inf
    if outer.rank == 0:
        return 1
    return QuotientGroup(outer, inner).order


class QuotientGroup:
    """The finite group ``outer / inner`` for equal-rank lattices, via Smith form.

    After the change of basis ``b' = V^{-1} B`` of ``outer`` the inner lattice is
    spanned by ``d_i b'_i``, so cosets are labelled by residues ``a_i mod d_i``.
    """

    def __init__(self, outer: Sublattice, inner: Sublattice):
        if inner.rank != outer.rank:
            raise LatticeError("quotient of unequal ranks is infinite")
        if not outer.contains_lattice(inner):
            raise LatticeError("inner lattice is not contained in outer lattice")
        self.outer = outer
        self.inner = inner
        C = tuple(outer.coordinates(b) for b in inner.basis)
        D, _, V = smith_normal_form(C) if C else ((), (), ())
        self.invariants = tuple(D[i][i] for i in range(len(C)))
        Vinv = _unimodular_inverse(V)
        # rows of Vinv expressed in outer coordinates
        self._new_basis = tuple(outer.point(row) for row in Vinv)
        self._to_new = V  # outer coords c -> new coords c @ V

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    def label(self, v: Sequence[int]) -> tuple[int, ...]:
        c = self.outer.coordinates(v)
        if c is None:
            raise LatticeError(f"{tuple(v)} is not in the outer lattice")
        new = vecmat(c, self._to_new) if c else ()
        return tuple(int(x) % d for x, d in zip(new, self.invariants))

    def representatives(self) -> list[tuple[int, ...]]:
        """One outer-lattice point per coset, indexed like ``labels()``."""
        reps = []
        for a in self.labels():
            reps.append(tuple(int(x) for x in vecmat(a, self._new_basis)) if a else
                        tuple(0 for _ in range(self.outer.ambient)))
        return reps

    def labels(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(d) for d in self.invariants)))


def _unimodular_inverse(V: IntMatrix) -> IntMatrix:
    n = len(V)
    if n == 0:
        return ()
    inv = []
    for j in range(n):
        e = tuple(int(i == j) for i in range(n))
        c = solve_left(V, e)  # c @ V = e_j
        inv.append(tuple(int(x) for x in c))
    return tuple(inv)


def eigenlattice(A: Sequence[Sequence[int]], sign: int) -> Sublattice:
    """``{y : A y = sign * y}`` for an integer involution ``A``."""
    if sign not in (1, -1):
        raise LatticeError("sign must be +1 or -1")
    n = len(A)
    if any(len(r) != n for r in A):
        raise NotAnInvolution("matrix is not square")
    if matmul(A, A) != identity(n):
        raise NotAnInvolution("matrix does not square to the identity")
    shifted = [[A[i][j] - sign * int(i == j) for j in range(n)] for i in range(n)]
    return Sublattice.span(integer_kernel(shifted, n), n)
