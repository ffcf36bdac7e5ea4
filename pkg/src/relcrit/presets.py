"""Worked symmetric spaces: GL3 with an inner involution, GL4/Sp2, and group cases."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .criterion import Exponent, ExponentFamily
from .exponents import Character, Induced, Steinberg, borel_exponents, steinberg_vector
from .involution import InvolutionData, build, group_case
from .lattice import Sublattice, qvec
from .rootdatum import BasedRootDatum, gl

PRESET_NAMES = ("gl3_inner", "gl4_symplectic", "group_case(<n>)")


@dataclass(frozen=True)
class GoldenData:
    fixed_simple: tuple[int, ...]
    restricted_rank: int
    S0: Sublattice
    Z0: Sublattice
    sigma_split: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PresetDescriptor:
    name: str
    root_datum: BasedRootDatum
    sigma: tuple[tuple[int, ...], ...]
    description: str
    golden: GoldenData
    data: InvolutionData = field(repr=False, compare=False)

    def build(self) -> InvolutionData:
        return build(self.root_datum, self.sigma)


def _reversal(n):
    return tuple(tuple(int(c == n - 1 - r) for c in range(n)) for r in range(n))


def _gl3() -> PresetDescriptor:
    rd = gl(3)
    sigma = _reversal(3)
    golden = GoldenData((), 1, Sublattice.span([(1, 0, -1)], 3), Sublattice.span([], 3), ((), (0, 1)))
    return PresetDescriptor(
        "gl3_inner", rd, sigma,
        "GL3 with the inner involution by the antidiagonal matrix; sigma reverses "
        "torus coordinates and S0 = diag(s, 1, 1/s).",
        golden, build(rd, sigma),
    )


def _gl4() -> PresetDescriptor:
    rd = gl(4)
    # g -> J tg^-1 J^-1 acts on the diagonal torus as x -> -P x, P = (12)(34)
    P = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0))
    sigma = tuple(tuple(-x for x in row) for row in P)
    golden = GoldenData(
        (0, 2), 1,
        Sublattice.span([(1, 1, 0, 0), (0, 0, 1, 1)], 4),
        Sublattice.span([(1, 1, 1, 1)], 4),
        ((0, 2), (0, 1, 2)),
    )
    return PresetDescriptor(
        "gl4_symplectic", rd, sigma,
        "GL4 / Sp2 with S0 = diag(s1, s1, s2, s2); the minimal sigma-split parabolic has type (2,2).",
        golden, build(rd, sigma),
    )


def _group(n: int) -> PresetDescriptor:
    if n < 1:
        raise ValueError("group case needs n >= 1")
    rd1 = gl(n)
    data = group_case(rd1)
    # S0 = {(y, -y)}, Z0 = {(z, -z) : z central}
    S0 = Sublattice.span([tuple(int(i == j) for i in range(n)) + tuple(-int(i == j) for i in range(n))
                          for j in range(n)], 2 * n)
    Z0 = Sublattice.span([(1,) * n + (-1,) * n], 2 * n)
    k = n - 1
    splits = tuple(
        tuple(sorted(I + tuple(i + k for i in I)))
        for size in range(k + 1) for I in itertools.combinations(range(k), size)
    )
    golden = GoldenData((), k, S0, Z0, splits)
    return PresetDescriptor(
        f"group_case({n})", data.base, data.sigma,
        f"(GL{n} x GL{n}) / diagonal with the factor swap; the second factor's "
        "simple roots are negated so that the simple system is a sigma-basis.",
        golden, data,
    )


def preset(name: str) -> PresetDescriptor:
    name = name.strip()
    if name == "gl3_inner":
        return _gl3()
    if name == "gl4_symplectic":
        return _gl4()
    m = re.fullmatch(r"group_case(?:\((\d+)\)|_(\d+))", name)
    if m:
        return _group(int(m.group(1) or m.group(2)))
    raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")


# representations of the worked examples
def gl3_rep():
    """pi(St2) = Ind from the (1,2) parabolic of 1 (x) St2."""
    return Induced((1, 2), (Character([0]), Steinberg(2)))


def gl4_rep():
    """I(St2) = Ind from the (2,2) parabolic of St2|det|^(1/2) (x) St2|det|^(-1/2)."""
    return Induced((2, 2), (Steinberg(2, Fraction(1, 2)), Steinberg(2, Fraction(-1, 2))))


GL3_REFERENCE = {
    # the display in the worked example uses twice the normalized vectors
    (Fraction(0), Fraction(1, 2), Fraction(-1, 2)): ("chi1", (0, 1, -1)),
    (Fraction(1, 2), Fraction(0), Fraction(-1, 2)): ("chi2", (1, 0, -1)),
    (Fraction(1, 2), Fraction(-1, 2), Fraction(0)): ("chi3", (1, -1, 0)),
}


def golden_exponent_family(name: str) -> ExponentFamily:
    p = preset(name)
    if p.name == "gl3_inner":
        exps = []
        for v in borel_exponents(gl3_rep()).vectors():
            label, ref = GL3_REFERENCE[v]
            exps.append(Exponent(label, v, True, ref, "geometric lemma"))
        exps.sort(key=lambda e: e.label)
        return ExponentFamily({(): tuple(exps)})
    if p.name == "gl4_symplectic":
        # only the central character of the case (iii) piece can be lambda-supported
        e = Exponent("|s1||s2|^-1", qvec([1, 0, 0, -1]), True, None, "central character, case (iii)")
        return ExponentFamily({(0, 2): (e,)})
    n = p.root_datum.rank // 2
    if n == 2:
        v = steinberg_vector(2)
        e = Exponent("St2", tuple(v) + (Fraction(0),) * 2, True, None, "Steinberg of GL2, transported")
        return ExponentFamily({(): (e,)})
    raise KeyError(f"no golden exponents for {name!r}")
