"""Based root data, Weyl groups, standard parabolics and coset representatives.

Characters ``X`` and cocharacters ``Y`` are both ``Z^rank`` with the standard
dot product as pairing.  Subsets of the simple system are tuples of indices
into :attr:`BasedRootDatum.simple` (0-based); the user-facing names are
``alpha_1, alpha_2, ...``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .lattice import (
    IntMatrix,
    Sublattice,
    dot,
    identity,
    matmul,
    matvec,
    rank,
    solve_left,
    transpose,
)

WEYL_SIZE_LIMIT = 10**5


class RootDatumError(ValueError):
    pass


def simple_name(i: int) -> str:
    return f"alpha_{i + 1}"


def parse_simple_names(names: Iterable[str], count: int) -> tuple[int, ...]:
    """Accept ``alpha_3``, ``a3`` or ``3`` (1-based) and return sorted indices."""
    out = set()
    for raw in names:
        s = str(raw).strip()
        if not s:
            continue
        digits = s.removeprefix("alpha_").removeprefix("alpha").removeprefix("a")
        if not digits.isdigit():
            raise RootDatumError(f"unrecognised simple root name {raw!r}")
        k = int(digits) - 1
        if not 0 <= k < count:
            raise RootDatumError(f"simple root {raw!r} out of range 1..{count}")
        out.add(k)
    return tuple(sorted(out))


@dataclass(frozen=True)
class BasedRootDatum:
    rank: int
    roots: tuple[tuple[int, ...], ...]
    coroots: tuple[tuple[int, ...], ...]
    simple: tuple[int, ...]
    name: str = field(default="", compare=False)

    @classmethod
    def from_roots(cls, rank, roots, simple, coroots=None, name=""):
        roots = tuple(tuple(int(x) for x in r) for r in roots)
        if coroots is None:
            coroots = []
            for r in roots:
                n2 = dot(r, r)
                if n2 == 0 or any((2 * x) % n2 for x in r):
                    raise RootDatumError(f"cannot infer an integral coroot for {r}")
                coroots.append(tuple(2 * x // n2 for x in r))
        coroots = tuple(tuple(int(x) for x in c) for c in coroots)
        return cls(rank, roots, coroots, tuple(simple), name)

    @property
    def simple_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.roots[i] for i in self.simple)

    @property
    def simple_coroots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.coroots[i] for i in self.simple)

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple)

    def coroot_of(self, root: Sequence[int]) -> tuple[int, ...]:
        return self.coroots[self.roots.index(tuple(root))]

    def simple_coefficients(self, v: Sequence) -> tuple[Fraction, ...] | None:
        """Coefficients of ``v`` on the simple roots, ``None`` outside their span."""
        return solve_left(self.simple_roots, v)

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        pos = []
        for r in self.roots:
            c = self.simple_coefficients(r)
            if c is not None and all(x >= 0 for x in c):
                pos.append((sum(c), tuple(-x for x in c), r))
        pos.sort()
        return tuple(r for _, _, r in pos)

    @cached_property
    def _positive_set(self) -> frozenset:
        return frozenset(self.positive_roots)

    def is_positive(self, v: Sequence[int]) -> bool:
        return tuple(v) in self._positive_set

    def reflection(self, i: int) -> IntMatrix:
        """Matrix of the simple reflection ``s_i`` on ``X``: x -> x - <x, a^v> a."""
        a = self.roots[self.simple[i]]
        av = self.coroots[self.simple[i]]
        n = self.rank
        return tuple(tuple(int(r == c) - a[r] * av[c] for c in range(n)) for r in range(n))

    def levi_roots(self, I: Iterable[int]) -> tuple[tuple[int, ...], ...]:
        I = tuple(I)
        span = [self.simple_roots[i] for i in I]
        out = []
        for r in self.roots:
            c = solve_left(span, r) if span else None
            if c is not None:
                out.append(r)
        return tuple(out)


def gl(n: int) -> BasedRootDatum:
    """Standard type-A datum of ``GL_n``: roots ``e_i - e_j``, Borel = upper triangular."""
    if n < 1:
        raise RootDatumError("GL_n needs n >= 1")
    roots = []
    for i, j in itertools.permutations(range(n), 2):
        v = [0] * n
        v[i], v[j] = 1, -1
        roots.append(tuple(v))
    roots.sort(key=lambda v: (v.index(1), v.index(-1)))
    simple = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        simple.append(roots.index(tuple(v)))
    return BasedRootDatum(n, tuple(roots), tuple(roots), tuple(simple), f"GL{n}")


def validate(rd: BasedRootDatum) -> list[str]:
    """Return every violated root-datum axiom as a message; empty means valid."""
    issues: list[str] = []
    n = rd.rank
    if len(rd.roots) != len(rd.coroots):
        return [f"{len(rd.roots)} roots but {len(rd.coroots)} coroots"]
    for r, c in zip(rd.roots, rd.coroots):
        if len(r) != n or len(c) != n:
            issues.append(f"root {r} or coroot {c} has wrong length (rank {n})")
    if issues:
        return issues
    if len(set(rd.roots)) != len(rd.roots):
        issues.append("repeated roots")
    roots = set(rd.roots)
    for r, c in zip(rd.roots, rd.coroots):
        if dot(r, c) != 2:
            issues.append(f"<{r}, {c}> = {dot(r, c)}, expected 2")
        if tuple(-x for x in r) not in roots:
            issues.append(f"-{r} is not a root")
    if any(not 0 <= i < len(rd.roots) for i in rd.simple):
        issues.append("simple index out of range")
        return issues
    if len(set(rd.simple)) != len(rd.simple):
        issues.append("repeated simple roots")
    if rd.simple and rank(rd.simple_roots) != len(rd.simple):
        issues.append("simple roots are linearly dependent")
        return issues
    coroot_of = dict(zip(rd.roots, rd.coroots))
    for a, av in zip(rd.roots, rd.coroots):
        for b, bv in zip(rd.roots, rd.coroots):
            sb = tuple(x - dot(b, av) * y for x, y in zip(b, a))
            if sb not in roots:
                issues.append(f"reflection in {a} sends root {b} to non-root {sb}")
                continue
            sbv = tuple(x - dot(a, bv) * y for x, y in zip(bv, av))
            if coroot_of[sb] != sbv:
                issues.append(f"reflection in {a} is not compatible on coroot {bv}")
    for r in rd.roots:
        c = rd.simple_coefficients(r)
        if c is None:
            issues.append(f"root {r} is not in the span of the simple roots")
            continue
        if any(x.denominator != 1 for x in c):
            issues.append(f"root {r} is not an integral combination of simple roots")
        if not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
            issues.append(f"root {r} has mixed-sign simple coefficients")
    return issues


@dataclass(frozen=True)
class ParabolicData:
    subset: tuple[int, ...]
    unipotent_roots: tuple[tuple[int, ...], ...]
    levi_roots: tuple[tuple[int, ...], ...]
    split_lattice: Sublattice
    two_rho: tuple[int, ...]


def parabolic(rd: BasedRootDatum, I: Iterable[int]) -> ParabolicData:
    """Standard parabolic ``P_I``; ``two_rho`` is the exponent of its modulus character.

    With ``|x| = q^{-val(x)}`` one has ``delta_P(s) = q^{-<two_rho, val(s)>}``.
    """
    I = tuple(sorted(set(I)))
    if any(not 0 <= i < len(rd.simple) for i in I):
        raise RootDatumError(f"subset {I} is not inside the simple system")
    levi = rd.levi_roots(I)
    levi_set = set(levi)
    unip = tuple(r for r in rd.positive_roots if r not in levi_set)
    two_rho = tuple(sum(r[k] for r in unip) for k in range(rd.rank))
    A_I = Sublattice.kernel([rd.simple_roots[i] for i in I], rd.rank)
    return ParabolicData(I, unip, levi, A_I, two_rho)


def center_lattice(rd: BasedRootDatum) -> Sublattice:
    """Cocharacters of the split center: ``{y : <a, y> = 0 for all simple a}``."""
    return Sublattice.kernel(rd.simple_roots, rd.rank)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element: its matrix on ``X`` and a reduced word in simple reflections."""

    matrix: IntMatrix
    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, x: Sequence) -> tuple:
        return matvec(self.matrix, x)

    def act_dual(self, y: Sequence) -> tuple:
        # contragredient: (M^{-1})^T, and M^{-1} preserves the pairing
        return matvec(transpose(_integer_inverse(self.matrix)), y)

    def inverse(self) -> "WeylElement":
        return WeylElement(_integer_inverse(self.matrix), tuple(reversed(self.word)))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(matmul(self.matrix, other.matrix), self.word + other.word)

    def permutation(self) -> tuple[int, ...] | None:
        """For permutation matrices: ``p`` with ``w(e_j) = e_{p[j]}``, else ``None``."""
        cols = transpose(self.matrix)
        perm = []
        for col in cols:
            if sorted(col) != [0] * (len(col) - 1) + [1]:
                return None
            perm.append(col.index(1))
        return tuple(perm)


def _integer_inverse(M: IntMatrix) -> IntMatrix:
    n = len(M)
    # solve_left(M^T, e_j) is column j of M^{-1}
    cols = [
        tuple(int(x) for x in solve_left(transpose(M), tuple(int(i == j) for i in range(n))))
        for j in range(n)
    ]
    return tuple(tuple(r) for r in transpose(cols))


def weyl_group(rd: BasedRootDatum, size_limit: int = WEYL_SIZE_LIMIT) -> list[WeylElement]:
    """All of ``W`` by breadth-first search, so each word is reduced."""
    return list(_weyl_group_cached(rd, size_limit))


_WEYL_CACHE: dict = {}


def _weyl_group_cached(rd: BasedRootDatum, size_limit: int) -> tuple[WeylElement, ...]:
    key = (rd, size_limit)
    if key in _WEYL_CACHE:
        return _WEYL_CACHE[key]
    gens = [rd.reflection(i) for i in range(len(rd.simple))]
    e = identity(rd.rank)
    seen = {e: ()}
    order = [e]
    queue = deque([e])
    while queue:
        m = queue.popleft()
        word = seen[m]
        for i, s in enumerate(gens):
            nm = matmul(m, s)
            if nm not in seen:
                seen[nm] = word + (i,)
                order.append(nm)
                queue.append(nm)
                if len(seen) > size_limit:
                    raise RootDatumError(f"Weyl group exceeds size limit {size_limit}")
    result = tuple(WeylElement(m, seen[m]) for m in order)
    _WEYL_CACHE[key] = result
    return result


def coset_reps(
    rd: BasedRootDatum,
    I_left: Iterable[int] = (),
    I_right: Iterable[int] | None = None,
    size_limit: int = WEYL_SIZE_LIMIT,
) -> list[WeylElement]:
    """Minimal-length representatives of ``W_{I_left} \\ W`` (or of the double cosets).

    ``w`` is minimal in ``W_{I_left} w`` iff ``w^{-1}(a) > 0`` for ``a`` in
    ``I_left``, and minimal in ``w W_{I_right}`` iff ``w(b) > 0`` for ``b`` in
    ``I_right``.  Output is sorted by length, then by word.
    """
    left = [rd.simple_roots[i] for i in I_left]
    right = [rd.simple_roots[i] for i in (I_right or ())]
    reps = []
    for w in _weyl_group_cached(rd, size_limit):
        winv = w.inverse() if left else None
        if all(rd.is_positive(winv.act(a)) for a in left) and all(
            rd.is_positive(w.act(b)) for b in right
        ):
            reps.append(w)
    reps.sort(key=lambda w: (w.length, w.word))
    return reps


def inversion_count(rd: BasedRootDatum, w: WeylElement) -> int:
    return sum(1 for a in rd.positive_roots if not rd.is_positive(w.act(a)))
