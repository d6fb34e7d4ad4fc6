import random
from fractions import Fraction

import pytest

from solvfill import linalg as la
from solvfill.lie import LieAlgebraSpec, abelian, heisenberg, spec_from_sparse


@pytest.fixture
def heis():
    return heisenberg()


@pytest.fixture
def heis_tame():
    return heisenberg((1, 1, 2))


@pytest.fixture
def heis_mixed():
    return heisenberg((1, -1, 0))


@pytest.fixture
def sol():
    return spec_from_sparse(
        2, ("x", "y"), [], [[[-1, 0], [0, 1]]]
    )


@pytest.fixture
def abelian3_rank2():
    return abelian(3, [(1, 0, -1), (0, 1, -1)])


def random_rational(rng, num=6, den=4):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_vec(rng, n, num=6, den=4):
    return la.vec([random_rational(rng, num, den) for _ in range(n)])


def conjugated_spec(base: LieAlgebraSpec, rng) -> LieAlgebraSpec:
    """Change basis of a known-valid algebra by a random unimodular matrix."""
    n = base.dim
    while True:
        p = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            p[i][i] += 1
        pm = la.mat(p)
        pinv = la.inv(pm)
        if pinv is not None:
            break
    # new basis f_i = P e_i; brackets transform accordingly
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            br = base.bracket_vec(la.columns(pm)[i], la.columns(pm)[j])
            row.append(la.mat_vec(pinv, br))
        table.append(tuple(row))
    ders = tuple(la.matmul(pinv, la.matmul(d, pm)) for d in base.derivations)
    return LieAlgebraSpec(
        dim=n, labels=base.labels, brackets=tuple(table), derivations=ders
    )


@pytest.fixture
def random_valid_specs():
    rng = random.Random(20240811)
    seeds = [
        heisenberg(),
        heisenberg((1, 1, 2)),
        abelian(4, [(1, 2, -1, 0)]),
        spec_from_sparse(
            4,
            ("e1", "e2", "e3", "e4"),
            [[1, 2, 3, "1"], [1, 3, 4, "1"]],
            [],
        ),
    ]
    out = []
    for k in range(50):
        out.append(conjugated_spec(seeds[k % len(seeds)], rng))
    return out
