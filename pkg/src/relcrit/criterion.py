"""Cone-positivity decisions for square integrability.

|chi(s)| = q^{-<e, val(s)>}, so ``|chi| < 1`` on a cone is strict positivity of
``e`` there.  The cones met here are simplicial modulo a center lattice, hence
positivity on a cone minus its center is decided by the center (``e`` must
vanish there) and one pairing per extreme ray.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cones import Ray, cone_rays, thread_cap
from .involution import (
    InvolutionData,
    group_case,
    maximal_proper_subsets,
    restricted_name,
    sigma_split_subsets,
)
from .lattice import QVector, Sublattice, dot, orthogonal_projection, qvec
from .rootdatum import BasedRootDatum, center_lattice, simple_name


class CriterionError(ValueError):
    pass


class NotRestrictionClosed(CriterionError):
    pass


@dataclass(frozen=True)
class Exponent:
    """Unramified part of a quasi-character: ``|chi(s)| = q^{-<vector, val(s)>}``.

    ``reference_vector`` optionally records the same exponent in another
    normalization; it is reported but never used in a decision.
    """

    label: str
    vector: QVector
    lambda_support: bool = False
    reference_vector: QVector | None = None
    origin: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vector", qvec(self.vector))
        if self.reference_vector is not None:
            object.__setattr__(self, "reference_vector", qvec(self.reference_vector))


def _key(I: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(int(i) for i in I)))


@dataclass
class ExponentFamily:
    entries: dict[tuple[int, ...], tuple[Exponent, ...]] = field(default_factory=dict)
    unitary: bool = True
    central_character: QVector | None = None

    def __post_init__(self):
        self.entries = {_key(k): tuple(v) for k, v in self.entries.items()}

    def get(self, I) -> tuple[Exponent, ...] | None:
        return self.entries.get(_key(I))

    def __eq__(self, other):
        if not isinstance(other, ExponentFamily):
            return NotImplemented
        return (self.entries == other.entries and self.unitary == other.unitary
                and self.central_character == other.central_character)


@dataclass(frozen=True)
class Witness:
    """A cone point outside the center where the exponent pairs to ``<= 0``."""

    label: str
    point: tuple[int, ...]
    pairing: Fraction
    reason: str


@dataclass(frozen=True)
class ExponentResult:
    label: str
    vector: QVector
    passed: bool
    pairings: tuple[Fraction, ...]
    witness: Witness | None = None
    reason: str = ""
    reference_pairings: tuple[Fraction, ...] | None = None
    lambda_support: bool = False


@dataclass(frozen=True)
class ParabolicVerdict:
    subset: tuple[int, ...]
    names: tuple[str, ...]
    passed: bool
    rays: tuple[Ray, ...] = ()
    ray_names: tuple[str, ...] = ()
    results: tuple[ExponentResult, ...] = ()
    skipped: tuple[str, ...] = ()
    reason: str = ""


@dataclass(frozen=True)
class Verdict:
    kind: str
    lambda_only: bool
    parabolics: tuple[ParabolicVerdict, ...]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.parabolics)

    def first_failure(self) -> ParabolicVerdict | None:
        return next((p for p in self.parabolics if not p.passed), None)


@dataclass(frozen=True)
class ConeProblem:
    """``{y in lattice : f(y) >= 0 for all f}`` taken modulo ``center``."""

    lattice: Sublattice
    center: Sublattice
    functionals: tuple[tuple, ...]
    names: tuple[str, ...]

    def rays(self) -> tuple[Ray, ...]:
        return tuple(cone_rays(self.lattice, self.functionals)) if self.functionals else ()

    def contains(self, y) -> bool:
        return tuple(y) in self.lattice and all(dot(f, y) >= 0 for f in self.functionals)


def relative_problem(data: InvolutionData, I: Iterable[int]) -> ConeProblem:
    sub = data.subset(I)
    k = len(data.restricted_simple)
    out = [j for j in range(k) if j not in sub.restricted]
    return ConeProblem(
        sub.lattice, data.Z0,
        tuple(data.restricted_vectors[j] for j in out),
        tuple(restricted_name(j) for j in out),
    )


def ordinary_problem(rd: BasedRootDatum, I: Iterable[int]) -> ConeProblem:
    I = set(I)
    simple = rd.simple_roots
    A = Sublattice.kernel([simple[i] for i in sorted(I)], rd.rank)
    out = [i for i in range(len(simple)) if i not in I]
    return ConeProblem(A, center_lattice(rd), tuple(simple[i] for i in out),
                       tuple(simple_name(i) for i in out))


def _center_witness(problem: ConeProblem, rays, label, e) -> Witness | None:
    """Slide a ray point along the center until the pairing drops to zero or below.

    Among all rays and center generators the candidate of least sup-norm is kept.
    """
    best = None
    for b in problem.center.basis:
        eb = Fraction(dot(e, b))
        if not eb:
            continue
        s = -1 if eb > 0 else 1
        for r in rays:
            m = max(0, math.ceil(Fraction(dot(e, r.point)) / abs(eb)))
            y = tuple(a + m * s * c for a, c in zip(r.point, b))
            key = (max(abs(x) for x in y), y)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    y = best[1]
    return Witness(label, y, Fraction(dot(e, y)), "does not vanish on the center lattice")


def evaluate(problem: ConeProblem, exponent: Exponent, rays=None, unitary: bool = True) -> ExponentResult:
    """Decide strict positivity of one exponent on ``cone minus center``."""
    e = exponent.vector
    if len(e) != problem.lattice.ambient:
        raise CriterionError(
            f"exponent {exponent.label!r} has {len(e)} coordinates, lattice has rank {problem.lattice.ambient}"
        )
    rays = problem.rays() if rays is None else rays
    pairings = tuple(Fraction(dot(e, r.point)) for r in rays)
    ref = None
    if exponent.reference_vector is not None:
        ref = tuple(Fraction(dot(exponent.reference_vector, r.point)) for r in rays)
    common = dict(vector=e, pairings=pairings, reference_pairings=ref,
                  lambda_support=exponent.lambda_support)
    if any(dot(e, b) for b in problem.center.basis):
        w = _center_witness(problem, rays, exponent.label, e)
        reason = ("central exponent is not unitary" if unitary
                  else "obstruction on the center lattice")
        return ExponentResult(exponent.label, passed=False, witness=w, reason=reason, **common)
    for r, p in zip(rays, pairings):
        if p <= 0:
            w = Witness(exponent.label, r.point, p, f"pairing {p} on ray {problem.names[r.index]}")
            return ExponentResult(exponent.label, passed=False, witness=w,
                                  reason="non-positive ray pairing", **common)
    return ExponentResult(exponent.label, passed=True, **common)


def verify_witness(problem: ConeProblem, vector: Sequence, witness: Witness) -> bool:
    y = witness.point
    return (
        problem.contains(y)
        and y not in problem.center
        and Fraction(dot(vector, y)) == witness.pairing
        and witness.pairing <= 0
    )


def _run(problem: ConeProblem, subset, names, exponents, lambda_only, unitary) -> ParabolicVerdict:
    rays = problem.rays()
    considered = [e for e in exponents if e.lambda_support or not lambda_only]
    skipped = tuple(e.label for e in exponents if lambda_only and not e.lambda_support)
    results = tuple(evaluate(problem, e, rays, unitary) for e in considered)
    for r in results:
        if r.witness is not None and not verify_witness(problem, r.vector, r.witness):
            raise AssertionError(f"witness for {r.label} does not re-verify")
    return ParabolicVerdict(
        tuple(subset), tuple(names), all(r.passed for r in results),
        rays, problem.names, results, skipped,
    )


def check_parabolic(data: InvolutionData, I, exponents: Sequence[Exponent],
                    lambda_only: bool = False, unitary: bool = True) -> ParabolicVerdict:
    I = _key(I)
    problem = relative_problem(data, I)
    return _run(problem, I, [simple_name(i) for i in I], exponents, lambda_only, unitary)


def _no_data(I) -> ParabolicVerdict:
    return ParabolicVerdict(I, tuple(simple_name(i) for i in I), False, reason="no data")


def _map(fn, items):
    workers = thread_cap()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _validate_keys(data: InvolutionData, family: ExponentFamily):
    for I in family.entries:
        if not data.is_sigma_split(I):
            raise CriterionError(f"exponents declared on {I}, which is not sigma-split")


def _check_subsets(data, family, subsets, lambda_only) -> Verdict:
    def one(I):
        exps = family.get(I)
        if exps is None:
            return _no_data(I)
        return check_parabolic(data, I, exps, lambda_only, family.unitary)

    return Verdict("relative", lambda_only, tuple(_map(one, list(subsets))))


def proper_subsets(data: InvolutionData) -> list[tuple[int, ...]]:
    full = data.full_subset
    return [s.subset for s in sigma_split_subsets(data) if s.subset != full]


def check_all(data: InvolutionData, family: ExponentFamily, lambda_only: bool = False) -> Verdict:
    """Conjunction over every proper sigma-split subset; absent data fails."""
    _validate_keys(data, family)
    return _check_subsets(data, family, proper_subsets(data), lambda_only)


def _canonical(data: InvolutionData, I, v) -> QVector:
    return orthogonal_projection(v, data.subset(I).lattice.basis)


def restriction_closure(data: InvolutionData, family: ExponentFamily) -> ExponentFamily:
    """Add the restriction of every exponent on ``S_I1`` to each ``S_I2``, ``I1 < I2 < Delta``.

    A restricted exponent matching an existing entry only propagates its
    lambda-support flag.  The whole subset ``Delta`` is left alone: its lattice
    is the center, which no condition reads.
    """
    _validate_keys(data, family)
    order = proper_subsets(data)
    entries = {I: list(family.entries[I]) for I in order if I in family.entries}
    extra = {I: v for I, v in family.entries.items() if I not in entries}
    for I1 in order:
        for I2 in order:
            if I1 == I2 or not set(I1) <= set(I2) or I1 not in entries:
                continue
            target = entries.setdefault(I2, [])
            canon = [_canonical(data, I2, t.vector) for t in target]
            names = ",".join(simple_name(i) for i in I2)
            for e in entries[I1]:
                v = _canonical(data, I2, e.vector)
                if v in canon:
                    k = canon.index(v)
                    if e.lambda_support and not target[k].lambda_support:
                        target[k] = replace(target[k], lambda_support=True)
                    continue
                target.append(Exponent(f"{e.label}|{{{names}}}", v, e.lambda_support,
                                       origin=f"restricted from {list(I1)}"))
                canon.append(v)
    out = {I: tuple(v) for I, v in entries.items()}
    out.update(extra)
    return ExponentFamily(out, family.unitary, family.central_character)


def check_maximal_reduction(data: InvolutionData, family: ExponentFamily, lambda_only: bool = True):
    """``(verdict over all subsets, verdict over maximal ones, agreement)``."""
    closed = restriction_closure(data, family)
    if closed != family:
        for I, exps in closed.entries.items():
            have = family.get(I) or ()
            if exps != have:
                missing = [e.label for e in exps if e not in have]
                raise NotRestrictionClosed(
                    f"family is not restriction-closed on {list(I)}: missing or unflagged {missing}"
                )
    every = check_all(data, family, lambda_only)
    maximal = _check_subsets(data, family, [s.subset for s in maximal_proper_subsets(data)], lambda_only)
    return every, maximal, every.passed == maximal.passed


def casselman_check(rd: BasedRootDatum, family, unitary: bool = True) -> Verdict:
    """Casselman's condition on every proper standard parabolic (exponents on ``A_I``)."""
    if isinstance(family, ExponentFamily):
        unitary = family.unitary
        family = family.entries
    family = {_key(k): tuple(v) for k, v in family.items()}
    r = len(rd.simple)

    def one(I):
        if I not in family:
            return _no_data(I)
        return _run(ordinary_problem(rd, I), I, [simple_name(i) for i in I], family[I], False, unitary)

    subsets = [I for n in range(r) for I in itertools.combinations(range(r), n)]
    return Verdict("casselman", False, tuple(_map(one, subsets)))


def transport_to_group_case(rd: BasedRootDatum, family: Mapping, data: InvolutionData | None = None):
    """Exponents ``e`` on ``A_I`` become ``(e, 0)`` on the split component of ``[I]``."""
    data = data or group_case(rd)
    n = rd.rank
    out = {}
    for I, exps in family.items():
        J = data.sigma_split(_key(I))
        out[J] = tuple(
            replace(e, vector=tuple(e.vector) + (Fraction(0),) * n, reference_vector=None)
            for e in exps
        )
    return data, ExponentFamily(out)


def group_case_equivalence(rd: BasedRootDatum, family: Mapping) -> bool:
    """Casselman's verdict on ``rd`` equals the relative verdict on the group case."""
    if isinstance(family, ExponentFamily):
        family = family.entries
    data, transported = transport_to_group_case(rd, family)
    cas = casselman_check(rd, family)
    rel = check_all(data, transported)
    if cas.passed != rel.passed:
        return False
    by_subset = {p.subset: p.passed for p in rel.parabolics}
    return all(by_subset[data.sigma_split(p.subset)] == p.passed for p in cas.parabolics)


def restrict_family(data: InvolutionData, full_family: Mapping) -> ExponentFamily:
    if isinstance(full_family, ExponentFamily):
        full_family = full_family.entries
    full_family = {_key(k): v for k, v in full_family.items()}
    out = {}
    for I in proper_subsets(data):
        if I in full_family:
            out[I] = tuple(replace(e, vector=_canonical(data, I, e.vector)) for e in full_family[I])
    return ExponentFamily(out)


def casselman_implies_relative(data: InvolutionData, full_family: Mapping) -> bool:
    """Square integrable exponents restrict to H-square integrable ones."""
    if not casselman_check(data.base, full_family).passed:
        return True
    return check_all(data, restrict_family(data, full_family)).passed


# --- series probe ---------------------------------------------------------

DEFAULT_SCHEDULE = (4, 8, 12, 16)


@dataclass(frozen=True)
class ProbeFit:
    radius: int
    ratio: float | None
    partial_sum: float


@dataclass(frozen=True)
class ProbeReport:
    classification: str
    ratio: float | None
    fits: tuple[ProbeFit, ...]
    log_shells: tuple[float | None, ...]
    raw_ratios: tuple[float | None, ...]
    reason: str = ""


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for a in range(n + 1):
        for rest in _compositions(n - a, k - 1):
            yield (a,) + rest


def _logsumexp(xs):
    m = max(xs)
    return m + math.log(math.fsum(math.exp(x - m) for x in xs))


def _fit_ratio(log_shells, upto):
    import numpy as np

    pts = [(n, v) for n, v in enumerate(log_shells[: upto + 1]) if n >= 1 and v is not None]
    if len(pts) < 2:
        return None
    n = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    cols = [np.ones_like(n), n]
    if len(pts) >= 3:
        cols.append(np.log1p(n))
    coef, *_ = np.linalg.lstsq(np.stack(cols, axis=1), y, rcond=None)
    return float(math.exp(coef[1]))


def series_probe(data: InvolutionData, I, exponent, poly_degree: int = 1, q: int = 2,
                 radius_schedule: Sequence[int] = DEFAULT_SCHEDULE) -> ProbeReport:
    """Numerically sum ``q^{-2<e,y>} (1+|y|)^{2d}`` over the cone ``S_I^-`` modulo ``Z0``.

    A cone point is recorded by its restricted pairings ``u``; shells are
    ``|u|_1 = n``.  The decay ratio is the exponential rate of a fit
    ``log shell_n ~ a + b n + c log(1+n)``, which separates the geometric part
    from the polynomial weight and the shell sizes.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if poly_degree < 0:
        raise ValueError("polynomial degree must be non-negative")
    e = exponent.vector if isinstance(exponent, Exponent) else qvec(exponent)
    problem = relative_problem(data, I)
    schedule = tuple(sorted(radius_schedule))
    if any(dot(e, b) for b in problem.center.basis):
        return ProbeReport("divergent", None, (), (), (),
                           "exponent does not vanish on Z0: every term repeats along Z0")
    if not problem.functionals:
        return ProbeReport("convergent", None, (), (), (), "cone modulo Z0 is a single point")
    rays = problem.rays()
    k = len(rays)
    slopes = [Fraction(dot(e, r.point)) / r.value for r in rays]
    rows = []
    for b in problem.lattice.basis:
        vals = [Fraction(dot(f, b)) for f in problem.functionals]
        if any(v.denominator != 1 for v in vals):
            raise CriterionError("restricted pairings are not integral on the lattice")
        rows.append(tuple(int(v) for v in vals))
    image = Sublattice.span(rows, k)
    logq = math.log(q)
    R = schedule[-1]
    log_shells: list[float | None] = []
    for n in range(R + 1):
        terms = []
        for u in _compositions(n, k):
            if u not in image:
                continue
            pairing = sum(ui * s for ui, s in zip(u, slopes))
            terms.append(-2 * float(pairing) * logq + 2 * poly_degree * math.log1p(n))
        log_shells.append(_logsumexp(terms) if terms else None)
    raw = [None]
    for a, b in zip(log_shells, log_shells[1:]):
        raw.append(math.exp(b - a) if a is not None and b is not None else None)
    fits = []
    for radius in schedule:
        vals = [v for v in log_shells[: radius + 1] if v is not None]
        try:
            partial = math.exp(_logsumexp(vals))
        except OverflowError:
            partial = math.inf
        fits.append(ProbeFit(radius, _fit_ratio(log_shells, radius), partial))
    ratio = fits[-1].ratio
    tail = [v for v in log_shells[R // 2:] if v is not None]
    rising = all(b >= a for a, b in zip(tail, tail[1:]))
    falling = all(b < a for a, b in zip(tail, tail[1:]))
    if ratio is None:
        cls, why = "inconclusive", "too few shells"
    elif ratio >= 1 - 1e-6 or rising:
        cls, why = "divergent", "shell sums do not decay"
    elif ratio < 0.95 and falling:
        cls, why = "convergent", "shell sums decay geometrically"
    else:
        cls, why = "inconclusive", "decay ratio too close to 1"
    return ProbeReport(cls, ratio, tuple(fits), tuple(log_shells), tuple(raw), why)
