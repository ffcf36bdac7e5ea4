"""The involution on a based root datum and everything derived from it.

Restricted characters are modelled inside ``X (x) Q`` by the projection
``p(v) = (v - sigma v) / 2``.  Pairing ``p(v)`` with an antifixed cocharacter
gives the same value as pairing ``v`` itself, so this agrees with restriction
to the maximal split torus on every lattice we ever pair against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .lattice import (
    IntMatrix,
    NotAnInvolution,
    QVector,
    Sublattice,
    eigenlattice,
    identity,
    matmul,
    matvec,
    quotient_index,
    solve_left,
    transpose,
)
from .rootdatum import BasedRootDatum, RootDatumError, validate


class InvolutionError(ValueError):
    pass


class SigmaBasisViolated(InvolutionError):
    def __init__(self, root):
        super().__init__(f"sigma-basis property fails at positive root {root}")
        self.root = root


def restricted_name(i: int) -> str:
    return f"abar_{i + 1}"


@dataclass(frozen=True)
class RestrictedRoot:
    vector: QVector
    preimages: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SigmaSplitSubset:
    restricted: tuple[int, ...]  # indices into restricted_simple
    subset: tuple[int, ...]  # indices into the simple system
    lattice: Sublattice  # S_I


class InvolutionData:
    """A based root datum together with an involution ``sigma`` of ``X``.

    ``sigma`` must be an integral involution permuting the roots, and the simple
    system must already be a sigma-basis; nothing is repaired here.
    """

    def __init__(self, base: BasedRootDatum, sigma: Sequence[Sequence[int]]):
        issues = validate(base)
        if issues:
            raise RootDatumError("; ".join(issues))
        n = base.rank
        sigma = tuple(tuple(int(x) for x in row) for row in sigma)
        if len(sigma) != n or any(len(r) != n for r in sigma):
            raise NotAnInvolution(f"sigma must be a {n}x{n} matrix")
        if matmul(sigma, sigma) != identity(n):
            raise NotAnInvolution("sigma does not square to the identity")
        roots = set(base.roots)
        for r in base.roots:
            if matvec(sigma, r) not in roots:
                raise InvolutionError(f"sigma does not permute the roots: {r} -> {matvec(sigma, r)}")
        for r in base.positive_roots:
            s = matvec(sigma, r)
            if s != r and base.is_positive(s):
                raise SigmaBasisViolated(r)
        self.base = base
        self.sigma = sigma
        # contragredient on Y; sigma^{-1} = sigma
        self.sigma_dual: IntMatrix = transpose(sigma)

    @property
    def rank(self) -> int:
        return self.base.rank

    def restrict(self, v: Sequence) -> QVector:
        sv = matvec(self.sigma, v)
        return tuple((Fraction(a) - b) / 2 for a, b in zip(v, sv))

    @cached_property
    def fixed_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r for r in self.base.roots if matvec(self.sigma, r) == r)

    @cached_property
    def fixed_simple(self) -> tuple[int, ...]:
        return tuple(
            i for i, a in enumerate(self.base.simple_roots) if matvec(self.sigma, a) == a
        )

    @cached_property
    def restricted_roots(self) -> tuple[RestrictedRoot, ...]:
        """The deduplicated set of nonzero restrictions, each with its preimages."""
        seen: dict[QVector, list] = {}
        for r in self.base.roots:
            v = self.restrict(r)
            if any(v):
                seen.setdefault(v, []).append(r)
        return tuple(RestrictedRoot(v, tuple(pre)) for v, pre in seen.items())

    @cached_property
    def restricted_simple(self) -> tuple[RestrictedRoot, ...]:
        """The restricted basis, in order of first appearance along the simple system."""
        order: list[QVector] = []
        pre: dict[QVector, list] = {}
        for a in self.base.simple_roots:
            v = self.restrict(a)
            if any(v):
                if v not in pre:
                    order.append(v)
                    pre[v] = []
                pre[v].append(a)
        return tuple(RestrictedRoot(v, tuple(pre[v])) for v in order)

    @property
    def restricted_vectors(self) -> tuple[QVector, ...]:
        return tuple(r.vector for r in self.restricted_simple)

    def restricted_index_of_simple(self, i: int) -> int | None:
        v = self.restrict(self.base.simple_roots[i])
        if not any(v):
            return None
        return self.restricted_vectors.index(v)

    @cached_property
    def S0(self) -> Sublattice:
        return eigenlattice(self.sigma_dual, -1)

    @cached_property
    def Z0(self) -> Sublattice:
        return self.S0.annihilated(self.base.simple_roots)

    def sigma_split(self, Ibar: Iterable[int]) -> tuple[int, ...]:
        """``[Ibar]``: simple roots restricting into ``Ibar``, together with the fixed ones."""
        Ibar = set(Ibar)
        if any(not 0 <= k < len(self.restricted_simple) for k in Ibar):
            raise InvolutionError(f"restricted subset {sorted(Ibar)} out of range")
        out = set(self.fixed_simple)
        for i in range(len(self.base.simple)):
            k = self.restricted_index_of_simple(i)
            if k is not None and k in Ibar:
                out.add(i)
        return tuple(sorted(out))

    def restricted_subset(self, I: Iterable[int]) -> tuple[int, ...]:
        """Inverse of :meth:`sigma_split` on sigma-split subsets."""
        ks = set()
        for i in I:
            k = self.restricted_index_of_simple(i)
            if k is not None:
                ks.add(k)
        return tuple(sorted(ks))

    def is_sigma_split(self, I: Iterable[int]) -> bool:
        I = tuple(sorted(set(I)))
        return self.sigma_split(self.restricted_subset(I)) == I

    def split_lattice(self, Ibar: Iterable[int]) -> Sublattice:
        """``S_Ibar``: antifixed cocharacters killed by every restricted root in ``Ibar``."""
        vecs = self.restricted_vectors
        return self.S0.annihilated([vecs[k] for k in Ibar])

    def subset(self, I: Iterable[int]) -> SigmaSplitSubset:
        I = tuple(sorted(set(I)))
        if not self.is_sigma_split(I):
            raise InvolutionError(f"{I} is not a sigma-split subset of the simple system")
        Ibar = self.restricted_subset(I)
        return SigmaSplitSubset(Ibar, I, self.split_lattice(Ibar))

    def subset_from_restricted(self, Ibar: Iterable[int]) -> SigmaSplitSubset:
        Ibar = tuple(sorted(set(Ibar)))
        return SigmaSplitSubset(Ibar, self.sigma_split(Ibar), self.split_lattice(Ibar))

    @cached_property
    def _subsets(self) -> tuple[SigmaSplitSubset, ...]:
        k = len(self.restricted_simple)
        out = []
        for size in range(k + 1):
            for Ibar in itertools.combinations(range(k), size):
                out.append(self.subset_from_restricted(Ibar))
        return tuple(out)

    @property
    def full_subset(self) -> tuple[int, ...]:
        return tuple(range(len(self.base.simple)))


def build(rd: BasedRootDatum, sigma: Sequence[Sequence[int]]) -> InvolutionData:
    return InvolutionData(rd, sigma)


def restricted_root_system(data: InvolutionData) -> tuple[tuple[RestrictedRoot, ...], tuple[RestrictedRoot, ...]]:
    return data.restricted_roots, data.restricted_simple


def sigma_split_subsets(data: InvolutionData) -> list[SigmaSplitSubset]:
    """All ``2^|restricted basis|`` sigma-split subsets, smallest first."""
    return list(data._subsets)


def maximal_proper_subsets(data: InvolutionData) -> list[SigmaSplitSubset]:
    k = len(data.restricted_simple)
    return [
        data.subset_from_restricted(tuple(j for j in range(k) if j != i)) for i in range(k)
    ]


def component_lattices(data: InvolutionData, Ibar: Iterable[int]):
    """``(S_Ibar, S_complement, [S0 : S_Ibar + S_complement])``.

    Also checks that the two lattices meet exactly in ``Z0``.
    """
    Ibar = tuple(sorted(set(Ibar)))
    comp = tuple(k for k in range(len(data.restricted_simple)) if k not in Ibar)
    A = data.split_lattice(Ibar)
    B = data.split_lattice(comp)
    if A.intersection(B) != data.Z0:
        raise InvolutionError("split components do not intersect in Z0")
    return A, B, quotient_index(data.S0, A + B)


def group_case(rd: BasedRootDatum) -> InvolutionData:
    """``(G x G) / diagonal`` with the factor swap.

    The second factor's simple roots are negated so that the swap sends
    positive roots of the first factor to negative roots.
    """
    n = rd.rank
    roots = [tuple(r) + (0,) * n for r in rd.roots] + [(0,) * n + tuple(r) for r in rd.roots]
    coroots = [tuple(c) + (0,) * n for c in rd.coroots] + [(0,) * n + tuple(c) for c in rd.coroots]
    m = len(rd.roots)
    simple = list(rd.simple)
    for i in rd.simple:
        neg = (0,) * n + tuple(-x for x in rd.roots[i])
        simple.append(roots.index(neg))
    doubled = BasedRootDatum(2 * n, tuple(roots), tuple(coroots), tuple(simple),
                             f"{rd.name}x{rd.name}" if rd.name else "")
    swap = tuple(
        tuple(int(c == (r + n) % (2 * n)) for c in range(2 * n)) for r in range(2 * n)
    )
    return InvolutionData(doubled, swap)
