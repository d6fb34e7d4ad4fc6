import random
from fractions import Fraction
from itertools import combinations

import pytest

from solvfill import linalg as la
from solvfill.lie import abelian, heisenberg, spec_from_sparse
from solvfill.weights import (
    AModule,
    GuardExceeded,
    UnsupportedActionError,
    check_grading,
    enumerate_conic_subsets,
    hull_contains_origin,
    maximal_conic_subsets,
    module_of_derivations,
    tame_subalgebra,
    tame_witness,
    tameness_certificate,
    weight_decomposition,
    zero_component,
)


def wt(*xs):
    return la.vec(xs)


def test_sol_weights(sol):
    wd = weight_decomposition(sol)
    assert wd.weights == (wt(-1), wt(1))
    assert all(len(wd.space(w)) == 1 for w in wd.weights)
    assert wd.scale == 1


def test_heisenberg_tame_weights(heis_tame):
    wd = weight_decomposition(heis_tame)
    assert wd.weights == (wt(1), wt(2))
    assert len(wd.space(wt(1))) == 2
    assert len(wd.space(wt(2))) == 1
    assert check_grading(heis_tame, wd) == []


def test_zero_derivations_single_weight(heis):
    spec = heisenberg((0, 0, 0))
    wd = weight_decomposition(spec)
    assert wd.weights == (wt(0),)
    assert len(wd.space(wt(0))) == 3


def test_irrational_action_reported():
    spec = spec_from_sparse(2, ("a", "b"), [], [[[0, 2], [1, 0]]])
    with pytest.raises(UnsupportedActionError):
        weight_decomposition(spec)


def test_nilpotent_jordan_block_weights():
    # one generalized weight with a nontrivial nilpotent part
    spec = spec_from_sparse(2, ("a", "b"), [], [[[1, 1], [0, 1]]])
    wd = weight_decomposition(spec)
    assert wd.weights == (wt(1),)
    assert len(wd.space(wt(1))) == 2
    assert not la.is_zero_mat(wd.nilpotent[0])


def test_grading_check(heis_mixed):
    assert check_grading(heis_mixed) == []


def test_zero_component_cases(heis_tame, heis_mixed):
    assert len(zero_component(module_of_derivations(heis_tame))) == 0
    z = zero_component(module_of_derivations(heis_mixed))
    assert len(z) == 1
    assert z[0] == la.vec([0, 0, 1])
    trivial = AModule(dim=2, actions=(), labels=("a", "b"))
    assert len(zero_component(trivial)) == 2


def test_conic_subsets_sol(sol):
    wd = weight_decomposition(sol)
    conics = enumerate_conic_subsets(wd.weights)
    members = sorted(c.members for c in conics)
    assert members == [(wt(-1),), (wt(1),)]
    for c in conics:
        assert c.verify(wd.weights)


def test_conic_subsets_positive_ray():
    # colinear same-sign weights always travel together: only {1,2} is conic
    conics = enumerate_conic_subsets([wt(1), wt(2)])
    assert [c.members for c in conics] == [(wt(1), wt(2))]


def test_conic_subsets_zero_weight_only():
    assert enumerate_conic_subsets([wt(0)]) == ()


def test_conic_subsets_rank2():
    weights = [wt(1, 0), wt(0, 1), wt(-1, -1)]
    conics = enumerate_conic_subsets(weights)
    members = {c.members for c in conics}
    singles = {(wt(1, 0),), (wt(0, 1),), (wt(-1, -1),)}
    pairs = {
        (wt(0, 1), wt(1, 0)),
        (wt(-1, -1), wt(0, 1)),
        (wt(-1, -1), wt(1, 0)),
    }
    assert members == singles | pairs
    maximal = maximal_conic_subsets(conics)
    assert {c.members for c in maximal} == pairs


def test_guard():
    with pytest.raises(GuardExceeded):
        enumerate_conic_subsets([wt(i, 1) for i in range(25)], guard=20)


def test_tame_witness_examples():
    a = tame_witness([wt(1), wt(2)])
    assert a is not None and a[0] < 0
    assert tame_witness([wt(1), wt(-1)]) is None
    assert tame_witness([wt(1, 0), wt(0, 1), wt(-1, -1)]) is None


def test_tameness_farkas_certificate():
    cert = tameness_certificate([wt(1, 0), wt(0, 1), wt(-1, -1)])
    assert cert.witness is None
    coeffs = cert.farkas
    assert coeffs is not None and sum(coeffs) == 1 and all(c >= 0 for c in coeffs)
    pts = [wt(1, 0), wt(0, 1), wt(-1, -1)]
    combo = la.zeros_vec(2)
    for c, p in zip(coeffs, sorted({tuple(p) for p in pts})):
        combo = la.add_vec(combo, la.scale_vec(c, p))
    assert la.is_zero_vec(combo)


def test_tame_witness_iff_hull_misses_origin():
    rng = random.Random(99)
    for _ in range(120):
        pts = [
            wt(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
               Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
            for _ in range(4)
        ]
        witness = tame_witness(pts)
        hull = hull_contains_origin(sorted({tuple(p) for p in pts}))
        assert (witness is None) == (hull is not None)


def test_tame_subalgebra_whole_and_sub(heis_tame, heis_mixed):
    conics = enumerate_conic_subsets(weight_decomposition(heis_tame).weights)
    assert len(conics) == 1
    sub = tame_subalgebra(heis_tame, conics[0])
    assert sub.spec.dim == 3
    from solvfill.lie import validate

    assert validate(sub.spec).ok

    conics_m = enumerate_conic_subsets(weight_decomposition(heis_mixed).weights)
    plus = [c for c in conics_m if c.members == (wt(1),)]
    assert len(plus) == 1
    sub1 = tame_subalgebra(heis_mixed, plus[0])
    assert sub1.spec.dim == 1
    assert all(la.is_zero_vec(sub1.spec.brackets[i][j])
               for i in range(1) for j in range(1))


def test_tame_subalgebra_abelian(abelian3_rank2):
    wd = weight_decomposition(abelian3_rank2)
    conics = enumerate_conic_subsets(wd.weights)
    for c in conics:
        sub = tame_subalgebra(abelian3_rank2, c)
        assert sub.spec.dim == len(c.members)
