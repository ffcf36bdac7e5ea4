"""Random exponent families and a brute-force cone oracle shared by the tests."""

import itertools
from fractions import Fraction

from relcrit.criterion import Exponent, ExponentFamily, proper_subsets, relative_problem
from relcrit.lattice import dot


def rational(rng, den=4, bound=2):
    d = rng.randint(1, den)
    return Fraction(rng.randint(-bound * d, bound * d), d)


def random_vector(rng, n, den=4):
    return tuple(rational(rng, den) for _ in range(n))


def positive_combination(rng, vectors, n, den=4):
    out = [Fraction(0)] * n
    for v in vectors:
        c = Fraction(rng.randint(1, 2 * den), den)
        out = [a + c * b for a, b in zip(out, v)]
    return tuple(out)


def perturb(rng, v, den=4, scale=1):
    return tuple(x + Fraction(rng.randint(-scale, scale), rng.randint(1, den)) for x in v)


def _exponent(rng, good_dirs, n, label, den=4, roll=None):
    roll = rng.random() if roll is None else roll
    if roll < 0.5:
        v = positive_combination(rng, good_dirs, n, den)
    elif roll < 0.8:
        v = perturb(rng, positive_combination(rng, good_dirs, n, den), den)
    else:
        v = random_vector(rng, n, den)
    return Exponent(label, v, rng.random() < 0.7)


def casselman_family(rng, rd, den=4, per=(1, 2)):
    """Exponents on every proper standard parabolic.

    Half of the families are built to pass (positive combinations of the
    simple roots outside ``I``); the rest mix in perturbed and random vectors.
    """
    r = len(rd.simple)
    simple = rd.simple_roots
    roll = 0.0 if rng.random() < 0.5 else None
    fam = {}
    for size in range(r):
        for I in itertools.combinations(range(r), size):
            dirs = [simple[i] for i in range(r) if i not in I]
            fam[I] = tuple(_exponent(rng, dirs, rd.rank, f"e{k}", den, roll)
                           for k in range(rng.randint(*per)))
    return fam


def relative_family(rng, data, den=4, per=(1, 2), only_minimal=False):
    vecs = data.restricted_vectors
    roll = 0.0 if rng.random() < 0.5 else None
    fam = {}
    subsets = proper_subsets(data)
    for I in subsets[:1] if only_minimal else subsets:
        Ibar = data.restricted_subset(I)
        dirs = [v for k, v in enumerate(vecs) if k not in Ibar]
        fam[I] = tuple(_exponent(rng, dirs, data.rank, f"e{k}", den, roll)
                       for k in range(rng.randint(*per)))
    return ExponentFamily(fam)


def box_counterexample(problem, vector, radius):
    """A lattice point of the cone, off the center, in the box, with pairing <= 0."""
    for y in problem.lattice.points_in_box(radius):
        if y in problem.center or not problem.contains(y):
            continue
        if dot(vector, y) <= 0:
            return y
    return None


def grid_values(den_choices=(1, 2), bound=2):
    return sorted({Fraction(a, d) for a in range(-bound, bound + 1) for d in den_choices})


__all__ = [
    "box_counterexample",
    "casselman_family",
    "grid_values",
    "perturb",
    "positive_combination",
    "random_vector",
    "rational",
    "relative_family",
    "relative_problem",
]
