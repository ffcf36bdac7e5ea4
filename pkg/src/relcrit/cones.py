"""Valuation cones on the antifixed cocharacter lattice.

A torus point ``s`` is replaced by its valuation ``y = val(s)`` in ``Y``; with
``|x| = q^{-val(x)}`` the condition ``|s^a| <= q^{-N}`` reads ``<a, y> >= N``.
Thresholds ``N`` are integers (``N = 0`` is ``epsilon = 1``).
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .involution import InvolutionData, sigma_split_subsets
from .lattice import (
    LatticeError,
    QuotientGroup,
    Sublattice,
    dot,
    integer_combination,
    xgcd,
)

KINDS = ("S_I_minus", "S0_I_minus", "pre_I_S0_minus", "S0_minus")


class AmbientError(ValueError):
    pass


def thread_cap() -> int:
    raw = os.environ.get("RELCRIT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"RELCRIT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError("RELCRIT_THREADS must be at least 1")
    return n


@dataclass(frozen=True)
class Ray:
    """Lattice generator of one extreme ray of a simplicial cone modulo its center.

    ``point`` pairs to ``value > 0`` with functional ``index`` and to zero with the others.
    """

    index: int
    point: tuple[int, ...]
    value: Fraction


def cone_rays(lattice: Sublattice, functionals: Sequence[Sequence]) -> list[Ray]:
    """Extreme rays of ``{y in lattice (x) Q : f_j(y) >= 0}`` modulo the common kernel.

    The functionals must be linearly independent on the lattice modulo their
    common kernel, so the cone is simplicial and the rays are dual to them.
    """
    rays = []
    for j, f in enumerate(functionals):
        others = [g for k, g in enumerate(functionals) if k != j]
        L = lattice.annihilated(others)
        vals = [Fraction(dot(f, b)) for b in L.basis]
        if not any(vals):
            raise LatticeError(f"functional {j} vanishes on its ray lattice")
        den = math.lcm(*(v.denominator for v in vals))
        ints = [int(v * den) for v in vals]
        hit = next((i for i, v in enumerate(ints) if abs(v) == math.gcd(*ints)), None)
        if hit is not None:
            sgn = 1 if ints[hit] > 0 else -1
            coeffs = [0] * len(ints)
            coeffs[hit] = sgn
        else:
            g, coeffs = ints[0], [1] + [0] * (len(ints) - 1)
            if g < 0:
                g, coeffs[0] = -g, -1
            for i in range(1, len(ints)):
                g2, x, y = xgcd(g, ints[i])
                coeffs = [c * x for c in coeffs]
                coeffs[i] = y
                g = g2
        point = L.point(coeffs)
        rays.append(Ray(j, point, Fraction(dot(f, point))))
    return rays


@dataclass(frozen=True)
class ConeRegion:
    """One of the regions ``S_I^-(eps)``, ``S_{0,I}^-(eps)``, ``_I S_0^-(eps)``, ``S_0^-``.

    ``plus`` selects the inverse region (``y`` is tested as ``-y``).
    """

    data: InvolutionData = field(repr=False, compare=False)
    kind: str
    subset: tuple[int, ...]
    threshold: int = 0
    plus: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")
        if not self.data.is_sigma_split(self.subset):
            raise ValueError(f"{self.subset} is not sigma-split")

    @property
    def ambient(self) -> Sublattice:
        if self.kind == "S_I_minus":
            return self.data.subset(self.subset).lattice
        return self.data.S0

    def in_ambient(self, y: Sequence[int]) -> bool:
        return len(y) == self.data.rank and tuple(y) in self.ambient


def region_contains(region: ConeRegion, y: Sequence[int], via_restricted: bool = False) -> bool:
    """Exact membership; ``via_restricted`` tests with restricted roots instead of simple roots."""
    y = tuple(y)
    if len(y) != region.data.rank or not all(isinstance(x, int) for x in y):
        raise AmbientError(f"{y} is not an integer point of rank {region.data.rank}")
    if y not in region.ambient:
        raise AmbientError(f"{y} is not in the ambient lattice of {region.kind}")
    if region.plus:
        y = tuple(-x for x in y)
    data, N = region.data, region.threshold
    I = set(region.subset)
    if via_restricted:
        Ibar = set(data.restricted_subset(I))
        tests = [(k in Ibar, vec) for k, vec in enumerate(data.restricted_vectors)]
    else:
        # sigma-fixed simple roots vanish on S0 and impose nothing
        fixed = set(data.fixed_simple)
        tests = [(i in I, a) for i, a in enumerate(data.base.simple_roots) if i not in fixed]
    for inside, f in tests:
        v = dot(f, y)
        if region.kind == "S0_minus":
            ok = v >= 0
        elif not inside:
            ok = v >= N
        elif region.kind == "S_I_minus":
            ok = True  # zero on the ambient lattice
        elif region.kind == "S0_I_minus":
            ok = v >= 0
        else:
            ok = 0 <= v < N
        if not ok:
            return False
    return True


@dataclass
class PartitionReport:
    threshold: int
    radius: int
    points: int = 0
    overlaps: int = 0
    gaps: int = 0
    first_violation: tuple | None = None
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.overlaps == 0 and self.gaps == 0


def partition_check(data: InvolutionData, N: int, radius: int = 8, workers: int | None = None) -> PartitionReport:
    """Check that the ``_I S_0^-(q^-N)`` tile ``S_0^-`` on every box point.

    Violations are returned, never raised; with several workers the
    lexicographically least violating point is reported.
    """
    if N < 1:
        raise ValueError("threshold must be at least 1")
    subsets = [s.subset for s in sigma_split_subsets(data)]
    regions = [ConeRegion(data, "pre_I_S0_minus", I, N) for I in subsets]
    whole = ConeRegion(data, "S0_minus", subsets[0], N)
    pts = [y for y in data.S0.points_in_box(radius) if region_contains(whole, y)]
    workers = workers or thread_cap()

    def scan(chunk):
        rep = PartitionReport(N, radius)
        for y in chunk:
            hits = [I for I, reg in zip(subsets, regions) if region_contains(reg, y)]
            rep.points += 1
            if len(hits) == 1:
                rep.counts[hits[0]] = rep.counts.get(hits[0], 0) + 1
                continue
            if hits:
                rep.overlaps += 1
            else:
                rep.gaps += 1
            viol = (y, tuple(hits))
            if rep.first_violation is None or viol < rep.first_violation:
                rep.first_violation = viol
        return rep

    size = max(1, math.ceil(len(pts) / workers))
    chunks = [pts[i:i + size] for i in range(0, len(pts), size)] or [[]]
    if workers == 1 or len(chunks) == 1:
        parts = [scan(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(scan, chunks))
    out = PartitionReport(N, radius)
    for p in parts:
        out.points += p.points
        out.overlaps += p.overlaps
        out.gaps += p.gaps
        for k, v in p.counts.items():
            out.counts[k] = out.counts.get(k, 0) + v
        if p.first_violation is not None and (
            out.first_violation is None or p.first_violation < out.first_violation
        ):
            out.first_violation = p.first_violation
    return out


def _pairings(data: InvolutionData, y) -> tuple[int, ...]:
    return tuple(int(dot(v, y)) for v in data.restricted_vectors)


class LatticeSplit:
    """Finite data attached to a sigma-split ``I`` for factoring cone points.

    ``gammas`` represent ``S0 / (S_Ibar + S_complement)`` inside ``S_0^-``;
    ``constant`` is the largest pairing of a representative with a restricted
    root outside ``Ibar``.
    """

    def __init__(self, data: InvolutionData, I: Sequence[int]):
        sub = data.subset(I)
        self.data = data
        self.subset = sub.subset
        self.Ibar = sub.restricted
        k = len(data.restricted_simple)
        self.outside = tuple(j for j in range(k) if j not in self.Ibar)
        self.S_I = sub.lattice
        self.S_comp = data.split_lattice(self.outside)
        self.summed = self.S_I + self.S_comp
        self.quotient = QuotientGroup(data.S0, self.summed)
        vecs = data.restricted_vectors
        # a summed-lattice point strictly positive on every restricted simple root
        omega = [0] * data.rank
        for lat, idx in ((self.S_I, self.outside), (self.S_comp, self.Ibar)):
            if idx:
                for r in cone_rays(lat, [vecs[j] for j in idx]):
                    omega = [a + b for a, b in zip(omega, r.point)]
        self.omega = tuple(omega)
        gammas = []
        for g in self.quotient.representatives():
            m = 0
            while True:
                cand = tuple(a + m * b for a, b in zip(g, self.omega))
                if all(x >= 0 for x in _pairings(data, cand)):
                    break
                m += 1
            gammas.append(cand)
        self.gammas = gammas
        self.constant = max(
            (_pairings(data, g)[j] for g in gammas for j in self.outside), default=0
        )
        self._pairing_rows = [_pairings(data, b) for b in data.S0.basis]

    def coset_rep(self, y) -> tuple[int, ...]:
        return self.gammas[self.quotient.labels().index(self.quotient.label(y))]

    def lift(self, u: Sequence[int]) -> tuple[int, ...] | None:
        """An ``S0`` point with restricted pairings ``u`` (unique modulo ``Z0``), or ``None``."""
        data = self.data
        if not data.restricted_simple:
            return tuple(0 for _ in range(data.rank)) if not u else None
        c = integer_combination(self._pairing_rows, u)
        return None if c is None else data.S0.point(c)


@dataclass(frozen=True)
class Factorization:
    """``y = y_I + t + z`` with ``y_I`` in ``S_I^-(q^-N')``, ``t`` a listed translate, ``z`` in ``Z0``."""

    y: tuple[int, ...]
    y_I: tuple[int, ...]
    t: tuple[int, ...]
    z: tuple[int, ...]


@dataclass
class DecompositionWitness:
    subset: tuple[int, ...]
    threshold: int
    reduced_threshold: int
    translates: list[tuple[int, ...]]
    gammas: list[tuple[int, ...]]
    factorizations: list[Factorization] = field(default_factory=list)


class PointDecomposer:
    """Factor points of ``_I S_0^-(q^-N)`` through finitely many translates.

    Every point is ``y_I + t_i + z``; ``y_I`` lies in ``S_I^-(q^-N')`` with
    ``N' = N - constant`` (negative when ``N`` is small), ``t_i`` runs over a
    fixed finite list inside ``S_0^-`` and ``z`` lies in ``Z0``.
    """

    def __init__(self, data: InvolutionData, I: Sequence[int], N: int):
        if N < 0:
            raise ValueError("threshold must be non-negative")
        self.data = data
        self.split = LatticeSplit(data, I)
        self.N = N
        sp = self.split
        self.reduced_threshold = N - sp.constant
        k = len(data.restricted_simple)
        bounds = []
        for j in range(k):
            bounds.append(range(0, N) if j in sp.Ibar else range(0, sp.constant + 1))
        translates = {}
        for u in itertools.product(*bounds):
            x = sp.lift(u)
            if x is not None:
                translates[u] = x
        zero = tuple(0 for _ in range(k))
        if zero in translates:
            translates[zero] = tuple(0 for _ in range(data.rank))
        self.translates = translates
        self.region = ConeRegion(data, "pre_I_S0_minus", sp.subset, N)
        self.target = ConeRegion(data, "S_I_minus", sp.subset, max(self.reduced_threshold, 0))

    def witness(self) -> DecompositionWitness:
        return DecompositionWitness(
            self.split.subset, self.N, self.reduced_threshold,
            sorted(self.translates.values()), list(self.split.gammas),
        )

    def decompose(self, y: Sequence[int]) -> Factorization:
        y = tuple(y)
        if not region_contains(self.region, y):
            raise ValueError(f"{y} is not in the region _I S_0^-(q^-{self.N})")
        sp = self.split
        gamma = sp.coset_rep(y)
        u_y = _pairings(self.data, y)
        u_g = _pairings(self.data, gamma)
        u_t = tuple(u_y[j] if j in sp.Ibar else u_g[j] for j in range(len(u_y)))
        t = self.translates[u_t]
        y_I = tuple(a - b for a, b in zip(y, t))
        z = tuple(0 for _ in y)
        f = Factorization(y, y_I, t, z)
        self.verify(f)
        return f

    def verify(self, f: Factorization) -> None:
        data, sp = self.data, self.split
        if tuple(a + b + c for a, b, c in zip(f.y_I, f.t, f.z)) != f.y:
            raise AssertionError("factorization does not sum to the point")
        if f.y_I not in sp.S_I:
            raise AssertionError("y_I is not in S_I")
        if any(_pairings(data, f.y_I)[j] < self.reduced_threshold for j in sp.outside):
            raise AssertionError("y_I misses the reduced threshold")
        if f.t not in self.translates.values():
            raise AssertionError("translate not from the finite list")
        if any(x < 0 for x in _pairings(data, f.t)):
            raise AssertionError("translate outside S_0^-")
        if f.z not in data.Z0:
            raise AssertionError("z is not in Z0")


def decompose_point(data: InvolutionData, I: Sequence[int], N: int, y: Sequence[int]) -> Factorization:
    return PointDecomposer(data, I, N).decompose(y)


def inclusion_threshold(data: InvolutionData, I: Sequence[int], N: int) -> int:
    """Some ``N'`` with ``S_{0,I}^-(q^-N') contained in S_I^-(q^-N) + S_0^-``."""
    return N + LatticeSplit(data, I).constant


def factor_inclusion(data: InvolutionData, I: Sequence[int], N: int, y: Sequence[int]):
    """Write ``y`` in ``S_{0,I}^-(q^-N')`` as ``a + b``, ``a`` in ``S_I^-(q^-N)``, ``b`` in ``S_0^-``."""
    sp = LatticeSplit(data, I)
    Np = N + sp.constant
    y = tuple(y)
    if not region_contains(ConeRegion(data, "S0_I_minus", sp.subset, Np), y):
        raise ValueError(f"{y} is not in S_(0,I)^-(q^-{Np})")
    gamma = sp.coset_rep(y)
    rest = tuple(a - b for a, b in zip(y, gamma))
    # rest = y1 + y2 with y1 in S_I, y2 in S_complement
    y1 = _split_sum(sp, rest)
    b = tuple(a - c for a, c in zip(y, y1))
    if not region_contains(ConeRegion(data, "S_I_minus", sp.subset, N), y1):
        raise AssertionError("inclusion factor misses S_I^-")
    if not region_contains(ConeRegion(data, "S0_minus", sp.subset, 0), b):
        raise AssertionError("inclusion remainder misses S_0^-")
    return y1, b


def _split_sum(sp: LatticeSplit, v):
    """The ``S_I`` part of ``v`` in ``S_I + S_complement`` (defined modulo ``Z0``)."""
    A, B = sp.S_I.basis, sp.S_comp.basis
    c = integer_combination(A + B, v)
    if c is None:
        raise LatticeError("point outside the summed lattice")
    return sp.S_I.point(c[:len(A)]) if A else tuple(0 for _ in v)
