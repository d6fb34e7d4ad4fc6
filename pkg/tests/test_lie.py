import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solvfill import linalg as la
from solvfill.lie import (
    StructureError,
    bch_multiply,
    bch_table,
    heisenberg,
    lower_central_series,
    nilpotency_class,
    spec_from_sparse,
    validate,
)

# --- 3x3 unitriangular matrix oracle for the Heisenberg group ----------------
# e1 -> E12, e2 -> E23, e3 -> E13 realizes [e1,e2] = e3 faithfully.


def _heis_mat(x):
    return la.mat([[1, x[0], x[2]], [0, 1, x[1]], [0, 0, 1]])


def _heis_exp(x):
    # exp of the strictly upper triangular matrix with entries (x1, x2, x3)
    return la.mat(
        [
            [1, x[0], x[2] + Fraction(x[0] * x[1], 2)],
            [0, 1, x[1]],
            [0, 0, 1],
        ]
    )


def _heis_log(m):
    a = m[0][1]
    b = m[1][2]
    c = m[0][2]
    return la.vec([a, b, c - Fraction(a * b, 2)])


def sl2():
    return spec_from_sparse(
        3,
        ("h", "e", "f"),
        [[1, 2, 2, "2"], [1, 3, 3, "-2"], [2, 3, 1, "1"]],
        [],
    )


def test_validate_heisenberg_ok(heis):
    assert validate(heis).ok


def test_validate_antisymmetry_violation():
    # force c[1][2][3] = c[2][1][3] = 1 explicitly
    spec = spec_from_sparse(
        3, ("e1", "e2", "e3"), [[1, 2, 3, "1"], [2, 1, 3, "1"]], []
    )
    rep = validate(spec)
    assert "antisymmetry" in rep.kinds()
    assert any(v.indices == (1, 2, 3) for v in rep.violations)


def test_validate_sl2_not_nilpotent():
    rep = validate(sl2())
    assert "nilpotency" in rep.kinds()
    series = lower_central_series(sl2())
    assert len(series[-1]) == 3  # stabilizes at the whole algebra


def test_validate_bad_derivation():
    # the identity matrix is not a derivation of the Heisenberg algebra
    spec = spec_from_sparse(
        3, ("e1", "e2", "e3"), [[1, 2, 3, "1"]], [la.identity(3)]
    )
    rep = validate(spec)
    assert "derivation" in rep.kinds()


def test_validate_noncommuting_derivations():
    d1 = [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
    d2 = [[0, 0, 0], [1, 0, 0], [0, 0, 0]]
    spec = spec_from_sparse(3, ("a", "b", "c"), [], [d1, d2])
    rep = validate(spec)
    assert "commutation" in rep.kinds()


def test_structure_error_is_distinct():
    with pytest.raises(StructureError):
        spec_from_sparse(2, ("a",), [], [])
    with pytest.raises(StructureError):
        spec_from_sparse(2, ("a", "b"), [[1, 2, 5, "1"]], [])


def test_bch_table_low_degrees():
    table = dict((w, c) for c, w in [(c, w) for c, w in bch_table(2)])
    assert table[(0,)] == 1
    assert table[(1,)] == 1
    # the two degree-2 words both contribute +1/4, jointly [x,y]/2
    assert table[(0, 1)] == Fraction(1, 4)
    assert table[(1, 0)] == Fraction(-1, 4)


def test_bch_commuting_is_addition():
    spec = spec_from_sparse(3, ("a", "b", "c"), [], [])
    x = la.vec([1, Fraction(1, 2), -3])
    y = la.vec([-2, 5, Fraction(7, 3)])
    assert bch_multiply(x, y, spec) == la.add_vec(x, y)


def test_bch_heisenberg_half_bracket(heis):
    e1 = la.vec([1, 0, 0])
    e2 = la.vec([0, 1, 0])
    z = bch_multiply(e1, e2, heis)
    assert z == la.vec([1, 1, Fraction(1, 2)])


def test_bch_inverse(heis):
    x = la.vec([Fraction(3, 2), -2, 5])
    assert bch_multiply(x, la.neg_vec(x), heis) == la.zeros_vec(3)


def test_bch_matches_matrix_oracle(heis):
    rng = random.Random(7)
    for _ in range(50):
        x = la.vec([Fraction(rng.randint(-8, 8), rng.randint(1, 5)) for _ in range(3)])
        y = la.vec([Fraction(rng.randint(-8, 8), rng.randint(1, 5)) for _ in range(3)])
        expected = _heis_log(la.matmul(_heis_exp(x), _heis_exp(y)))
        assert bch_multiply(x, y, heis) == expected


@settings(max_examples=30, deadline=None)
@given(
    st.lists(
        st.fractions(min_value=-4, max_value=4, max_denominator=4),
        min_size=9,
        max_size=9,
    )
)
def test_bch_associative_heisenberg(vals):
    spec = heisenberg()
    x, y, z = la.vec(vals[0:3]), la.vec(vals[3:6]), la.vec(vals[6:9])
    left = bch_multiply(bch_multiply(x, y, spec), z, spec)
    right = bch_multiply(x, bch_multiply(y, z, spec), spec)
    assert left == right


def test_bch_associative_class3():
    # a filiform class-3 algebra: [e1,e2]=e3, [e1,e3]=e4
    spec = spec_from_sparse(
        4, ("e1", "e2", "e3", "e4"), [[1, 2, 3, "1"], [1, 3, 4, "1"]], []
    )
    assert nilpotency_class(spec) == 3
    rng = random.Random(11)
    for _ in range(20):
        x, y, z = (
            la.vec([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(4)])
            for _ in range(3)
        )
        left = bch_multiply(bch_multiply(x, y, spec), z, spec)
        right = bch_multiply(x, bch_multiply(y, z, spec), spec)
        assert left == right


def test_nilpotency_class_values(heis):
    assert nilpotency_class(heis) == 2
    ab = spec_from_sparse(3, ("a", "b", "c"), [], [])
    assert nilpotency_class(ab) == 1
