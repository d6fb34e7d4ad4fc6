import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solvfill import linalg as la
from solvfill.group import (
    GroupElement,
    adjoint,
    adjoint_interval,
    adjoint_matrix,
    group_conj,
    group_inv,
    group_mul,
    identity_element,
)
from solvfill.lie import heisenberg, spec_from_sparse
from solvfill.weights import UnsupportedActionError

# --- faithful matrix model of the rank-one extension from the introduction ---
# Diagonal scalings (t1^s, t2^s) with t1 = 1/2, t2 = 2 acting on the plane;
# matrix coordinates (s, x, y) multiply by exact 3x3 matrix products when s is
# an integer.

T1 = Fraction(1, 2)
T2 = Fraction(2)


def sol_mat(s: int, x: Fraction, y: Fraction):
    return la.mat([[T1**s, 0, x], [0, T2**s, y], [0, 0, 1]])


def sol_mat_mul(p, q):
    s1, x1, y1 = p
    s2, x2, y2 = q
    m = la.matmul(sol_mat(*p), sol_mat(*q))
    s = s1 + s2
    assert m[0][0] == T1**s and m[1][1] == T2**s
    return (s, m[0][2], m[1][2])


def to_group(spec, p) -> GroupElement:
    s, x, y = p
    # g = a(s) . exp(u): matrix coords (x, y) = (t1^s * u1, t2^s * u2)
    return GroupElement(a=(Fraction(s),), u=(x / T1**s, y / T2**s))


def from_group(g: GroupElement):
    s = g.a[0]
    assert s.denominator == 1
    s = int(s)
    return (s, g.u[0] * T1**s, g.u[1] * T2**s)


def random_sol_triple(rng):
    return (
        rng.randint(-5, 5),
        Fraction(rng.randint(-40, 40), rng.randint(1, 7)),
        Fraction(rng.randint(-40, 40), rng.randint(1, 7)),
    )


def test_sol_group_matches_matrix_oracle(sol):
    rng = random.Random(123)
    for _ in range(300):
        p, q = random_sol_triple(rng), random_sol_triple(rng)
        got = from_group(group_mul(to_group(sol, p), to_group(sol, q), sol))
        assert got == sol_mat_mul(p, q)


def test_adjoint_sign_fixture(sol):
    # adjoint(a, log u) = log(a u a^{-1}) in the matrix model
    rng = random.Random(5)
    for _ in range(50):
        s = rng.randint(-4, 4)
        x = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        y = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        u = GroupElement(a=(Fraction(0),), u=(x, y))
        a = GroupElement(a=(Fraction(s),), u=(Fraction(0), Fraction(0)))
        conj = group_mul(group_mul(a, u, sol), group_inv(a, sol), sol)
        assert conj.a == (Fraction(0),)
        assert conj.u == adjoint((Fraction(s),), (x, y), sol)
        # matrix side: conjugation scales (x, y) by (t1^s, t2^s)
        assert conj.u == (T1**s * x, T2**s * y)


def test_identity_and_inverse(sol, heis_tame):
    for spec in (sol, heis_tame):
        e = identity_element(spec)
        rng = random.Random(17)
        for _ in range(40):
            g = GroupElement(
                a=tuple(Fraction(rng.randint(-3, 3)) for _ in range(spec.a_dim)),
                u=tuple(
                    Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                    for _ in range(spec.dim)
                ),
            )
            assert group_mul(g, e, spec) == g
            assert group_mul(e, g, spec) == g
            assert group_mul(g, group_inv(g, spec), spec) == e
            assert group_mul(group_inv(g, spec), g, spec) == e


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_associativity_heis_tame(data):
    spec = heisenberg((1, 1, 2))
    elts = []
    for _ in range(3):
        a = data.draw(st.integers(min_value=-3, max_value=3))
        u = data.draw(
            st.lists(
                st.fractions(min_value=-3, max_value=3, max_denominator=3),
                min_size=3,
                max_size=3,
            )
        )
        elts.append(GroupElement(a=(Fraction(a),), u=tuple(u)))
    g, h, k = elts
    spec_ = spec
    left = group_mul(group_mul(g, h, spec_), k, spec_)
    right = group_mul(g, group_mul(h, k, spec_), spec_)
    assert left == right


def test_adjoint_is_bracket_automorphism(heis_tame):
    rng = random.Random(3)
    for _ in range(30):
        a = (Fraction(rng.randint(-3, 3)),)
        x = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3))
        y = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3))
        lhs = adjoint(a, heis_tame.bracket_vec(x, y), heis_tame)
        rhs = heis_tame.bracket_vec(adjoint(a, x, heis_tame), adjoint(a, y, heis_tame))
        assert lhs == rhs


def test_adjoint_zero_is_identity(heis_tame):
    x = (Fraction(3), Fraction(-2), Fraction(5, 3))
    assert adjoint((Fraction(0),), x, heis_tame) == x


def test_adjoint_diagonal_multiplier(heis_tame):
    # weight 2 on e3: adjoint(a) multiplies by 2^(2a)
    e3 = (Fraction(0), Fraction(0), Fraction(1))
    assert adjoint((Fraction(3),), e3, heis_tame) == (0, 0, Fraction(64))
    assert adjoint((Fraction(-2),), e3, heis_tame) == (0, 0, Fraction(1, 16))


def test_adjoint_nonint_pairing_raises_and_interval_encloses(heis_tame):
    x = (Fraction(1), Fraction(0), Fraction(0))
    with pytest.raises(UnsupportedActionError):
        adjoint((Fraction(1, 2),), x, heis_tame)
    iv = adjoint_interval((Fraction(1, 2),), x, heis_tame, prec_bits=80)
    lo, hi = iv[0]
    assert lo < hi
    assert lo * lo <= 2 <= hi * hi  # encloses 2^(1/2)
    assert iv[1] == (0, 0) and iv[2] == (0, 0)


def test_adjoint_with_nilpotent_part():
    spec = spec_from_sparse(2, ("a", "b"), [], [[[1, 1], [0, 1]]])
    # D = I + N with N = E12: adjoint(a) = 2^a * exp(a*N)
    got = adjoint((Fraction(1),), (Fraction(0), Fraction(1)), spec)
    assert got == (Fraction(2), Fraction(2))
    m = adjoint_matrix((Fraction(1),), spec)
    assert m == la.mat([[2, 2], [0, 2]])


def test_group_conj_matches_mul(heis_tame):
    g = GroupElement(a=(Fraction(2),), u=(Fraction(1), Fraction(2), Fraction(3)))
    a = (Fraction(1),)
    ae = GroupElement(a=a, u=(0, 0, 0))
    lhs = group_mul(group_mul(ae, g, heis_tame), group_inv(ae, heis_tame), heis_tame)
    assert group_conj(a, g, heis_tame) == lhs
