from fractions import Fraction

from solvfill import linalg as la


def test_rref_rank_nullspace():
    m = la.mat([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert la.rank(m) == 2
    ns = la.nullspace(m)
    assert len(ns) == 1
    for v in ns:
        assert la.is_zero_vec(la.mat_vec(m, v))


def test_solve_and_inv():
    m = la.mat([[2, 1], [1, 1]])
    b = la.vec([3, 2])
    x = la.solve(m, b)
    assert la.mat_vec(m, x) == b
    mi = la.inv(m)
    assert la.matmul(m, mi) == la.identity(2)
    assert la.solve(la.mat([[1, 1], [1, 1]]), la.vec([1, 2])) is None


def test_span_utilities():
    b1 = (la.vec([1, 0, 0]), la.vec([0, 1, 0]))
    b2 = (la.vec([1, 1, 0]), la.vec([0, 0, 1]))
    inter = la.intersect_spans(b1, b2)
    assert len(inter) == 1
    assert la.in_span(b1, inter[0]) and la.in_span(b2, inter[0])
    assert la.coords_in_span(b1, la.vec([2, 3, 0])) == (Fraction(2), Fraction(3))
    assert la.coords_in_span(b1, la.vec([0, 0, 1])) is None


def test_char_poly_and_roots():
    m = la.mat([[2, 0, 0], [0, 2, 1], [0, 0, 3]])
    poly = la.char_poly(m)
    roots, rem = la.rational_roots(poly)
    assert roots == {Fraction(2): 2, Fraction(3): 1}
    assert len(rem) == 1
    # an irrational spectrum leaves a quadratic remainder
    r2 = la.mat([[0, 2], [1, 0]])
    roots, rem = la.rational_roots(la.char_poly(r2))
    assert roots == {}
    assert len(rem) == 3


def test_char_poly_matches_determinant_on_companion():
    # companion matrix of x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
    m = la.mat([[0, 0, 6], [1, 0, -11], [0, 1, 6]])
    roots, rem = la.rational_roots(la.char_poly(m))
    assert roots == {Fraction(1): 1, Fraction(2): 1, Fraction(3): 1}


def test_inth_root_and_pow2_interval():
    assert la.inth_root_floor(7, 3) == 1
    assert la.inth_root_floor(8, 3) == 2
    assert la.inth_root_floor(10**12, 4) == 1000
    lo, hi = la.pow2_interval(Fraction(1, 2), 80)
    assert lo < hi
    assert lo * lo <= 2 <= hi * hi
    exact = la.pow2_interval(Fraction(-3), 16)
    assert exact == (Fraction(1, 8), Fraction(1, 8))
