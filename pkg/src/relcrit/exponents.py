"""Jacquet-module exponents of induced representations of GL_n.

Everything is normalized: the Jacquet module of ``Ind_P(tau)`` along the
Borel is, up to semisimplification, a sum over coset representatives ``w``
with ``w(I_L) > 0`` of ``w`` applied to the Borel exponents of ``tau``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .lattice import LatticeError, QVector, Sublattice, as_fraction, orthogonal_projection, qvec
from .rootdatum import gl, coset_reps

MAX_RANK = 8


class ExponentError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    """Unramified character of ``GL_1^k``; ``vector[i]`` is the exponent of ``|t_i|``."""

    vector: QVector

    def __init__(self, vector):
        object.__setattr__(self, "vector", qvec(vector))
        if not self.vector:
            raise ExponentError("empty character")

    @property
    def size(self) -> int:
        return len(self.vector)


@dataclass(frozen=True)
class Steinberg:
    """Steinberg representation of ``GL_k`` twisted by ``|det|^twist``."""

    k: int
    twist: Fraction = Fraction(0)

    def __init__(self, k: int, twist=0):
        if k < 1:
            raise ExponentError("Steinberg block needs k >= 1")
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "twist", as_fraction(twist))

    @property
    def size(self) -> int:
        return self.k


@dataclass(frozen=True)
class Induced:
    composition: tuple[int, ...]
    children: tuple["RepSpec", ...]

    def __init__(self, composition, children):
        comp = tuple(int(c) for c in composition)
        kids = tuple(children)
        if len(comp) != len(kids) or any(c < 1 for c in comp):
            raise ExponentError("composition and blocks do not match")
        for c, kid in zip(comp, kids):
            if kid.size != c:
                raise ExponentError(f"block of size {kid.size} placed in a slot of size {c}")
        object.__setattr__(self, "composition", comp)
        object.__setattr__(self, "children", kids)

    @property
    def size(self) -> int:
        return sum(self.composition)


RepSpec = Union[Character, Steinberg, Induced]


@dataclass(frozen=True)
class TaggedVector:
    vector: QVector
    tag: tuple  # coset permutations, outermost first

    def __str__(self):
        return f"{tag_str(self.tag)}: ({', '.join(str(x) for x in self.vector)})"


def tag_str(tag) -> str:
    if not tag:
        return "e"
    return " . ".join("[" + " ".join(str(i + 1) for i in p) + "]" for p in tag)


@dataclass(frozen=True)
class ExponentMultiset:
    entries: tuple[TaggedVector, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def vectors(self) -> list[QVector]:
        return [e.vector for e in self.entries]

    def counts(self) -> Counter:
        return Counter(self.vectors())


def steinberg_vector(k: int, twist=0) -> QVector:
    """rho-shift of ``GL_k`` plus the determinant twist."""
    t = as_fraction(twist)
    return tuple(Fraction(k - 1 - 2 * i, 2) + t for i in range(k))


def composition_subset(composition: Sequence[int]) -> tuple[int, ...]:
    """Simple roots of the standard Levi of block type ``composition``."""
    out, pos = [], 0
    for c in composition:
        out.extend(range(pos, pos + c - 1))
        pos += c
    return tuple(out)


def _exponents(rep: RepSpec) -> list[TaggedVector]:
    if isinstance(rep, Character):
        return [TaggedVector(rep.vector, ())]
    if isinstance(rep, Steinberg):
        return [TaggedVector(steinberg_vector(rep.k, rep.twist), ())]
    n = rep.size
    reps = coset_reps(gl(n), (), composition_subset(rep.composition))
    blocks = [_exponents(kid) for kid in rep.children]
    out = []
    for w in reps:
        perm = w.permutation()
        for combo in itertools.product(*blocks):
            v = tuple(x for part in combo for x in part.vector)
            inner = tuple(t for part in combo for t in part.tag)
            out.append(TaggedVector(w.act(v), (perm,) + inner))
    return out


def borel_exponents(rep: RepSpec) -> ExponentMultiset:
    if rep.size > MAX_RANK:
        raise ExponentError(f"GL_{rep.size} exceeds the size guard GL_{MAX_RANK}")
    return ExponentMultiset(tuple(_exponents(rep)))


def levi_center(n: int, I: Sequence[int]) -> Sublattice:
    rd = gl(n)
    return Sublattice.kernel([rd.simple_roots[i] for i in I], n)


def parabolic_exponents(rep: RepSpec, I: Sequence[int]) -> ExponentMultiset:
    """Borel exponents restricted to ``A_I``, kept with multiplicity.

    Restricted vectors are the orthogonal projections onto ``A_I (x) Q``,
    the canonical representative of a functional on that lattice.
    """
    n = rep.size
    if any(not 0 <= i < n - 1 for i in I):
        raise ExponentError(f"subset {tuple(I)} is not a set of simple roots of GL_{n}")
    A = levi_center(n, I)
    return ExponentMultiset(tuple(
        TaggedVector(orthogonal_projection(e.vector, A.basis), e.tag) for e in borel_exponents(rep)
    ))


def restrict_to_S(data, I: Sequence[int], multiset: ExponentMultiset, prefix: str = "chi"):
    """Exponents on ``S_I``; duplicates merged, lambda-support left unset."""
    from .criterion import Exponent

    base = data.base
    if base.rank != len(multiset.entries[0].vector if multiset.entries else [0] * base.rank):
        raise LatticeError("exponents and involution data live on different lattices")
    if base.roots != gl(base.rank).roots:
        raise LatticeError("exponent calculus is only available on the standard GL_n datum")
    S = data.subset(I).lattice
    seen: dict[QVector, tuple] = {}
    for e in multiset:
        v = orthogonal_projection(e.vector, S.basis)
        if v not in seen:
            seen[v] = (e.vector, e.tag)
    return [
        Exponent(f"{prefix}{k + 1}", v, False, src, tag_str(tag))
        for k, (v, (src, tag)) in enumerate(seen.items())
    ]
