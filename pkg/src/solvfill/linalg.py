"""Exact linear algebra over the rationals.

Matrices are immutable tuples of tuples of :class:`fractions.Fraction`,
vectors are tuples of Fraction.  Every rank / kernel / membership decision
here is exact, which is what makes the certificates produced downstream
replayable bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, isqrt

Vec = tuple
Mat = tuple


def frac(x) -> Fraction:
    """Coerce ints, strings like "p/q" and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vec(xs) -> Vec:
    return tuple(frac(x) for x in xs)


def mat(rows) -> Mat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def zeros_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def zeros(r: int, c: int) -> Mat:
    return ((Fraction(0),) * c,) * r


def identity(n: int) -> Mat:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def basis_vec(n: int, i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def shape(m: Mat) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def add_vec(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def sub_vec(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def neg_vec(a: Vec) -> Vec:
    return tuple(-x for x in a)


def scale_vec(c, a: Vec) -> Vec:
    c = frac(c)
    return tuple(c * x for x in a)


def dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def norm_inf(a: Vec) -> Fraction:
    return max((abs(x) for x in a), default=Fraction(0))


def norm_one(a: Vec) -> Fraction:
    return sum((abs(x) for x in a), Fraction(0))


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def matmul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(a: Mat) -> Mat:
    if not a:
        return ()
    return tuple(tuple(row[j] for row in a) for j in range(len(a[0])))


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(add_vec(x, y) for x, y in zip(a, b, strict=True))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(sub_vec(x, y) for x, y in zip(a, b, strict=True))


def mat_scale(c, a: Mat) -> Mat:
    return tuple(scale_vec(c, row) for row in a)


def mat_pow(a: Mat, k: int) -> Mat:
    n = len(a)
    out = identity(n)
    for _ in range(k):
        out = matmul(out, a)
    return out


def is_zero_mat(a: Mat) -> bool:
    return all(is_zero_vec(r) for r in a)


def trace(a: Mat) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def op_norm_inf(a: Mat) -> Fraction:
    """Max absolute row sum; exact bound for the sup-norm operator norm."""
    return max((norm_one(row) for row in a), default=Fraction(0))


def rref(a: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form with the pivot column indices.

    Deterministic: scans columns left to right and takes the first row with
    a nonzero entry, so identical inputs give identical output.
    """
    rows = [list(r) for r in a]
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        sel = None
        for i in range(r, nr):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in rows), tuple(pivots)


def rank(a: Mat) -> int:
    return len(rref(a)[1])


def nullspace(a: Mat) -> tuple[Vec, ...]:
    """Basis of the right kernel, one vector per free column, free entry 1."""
    if not a:
        return ()
    nc = len(a[0])
    r, pivots = rref(a)
    pivset = set(pivots)
    free = [c for c in range(nc) if c not in pivset]
    out = []
    for fc in free:
        v = [Fraction(0)] * nc
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][fc]
        out.append(tuple(v))
    return tuple(out)


def solve(a: Mat, b: Vec):
    """One exact solution of a x = b, or None if inconsistent."""
    nr, nc = shape(a)
    aug = tuple(tuple(a[i]) + (b[i],) for i in range(nr))
    r, pivots = rref(aug)
    if nc in pivots:
        return None
    x = [Fraction(0)] * nc
    for i, pc in enumerate(pivots):
        x[pc] = r[i][nc]
    return tuple(x)


def inv(a: Mat):
    n = len(a)
    aug = tuple(tuple(a[i]) + identity(n)[i] for i in range(n))
    r, pivots = rref(aug)
    if pivots != tuple(range(n)):
        return None
    return tuple(tuple(r[i][n:]) for i in range(n))


def columns(a: Mat) -> tuple[Vec, ...]:
    return transpose(a)


def from_columns(cols) -> Mat:
    cols = tuple(cols)
    if not cols:
        return ()
    return transpose(mat(cols))


def column_space_basis(a: Mat) -> tuple[Vec, ...]:
    """The pivot columns of a, in order (a deterministic image basis)."""
    _, pivots = rref(a)
    cols = columns(a)
    return tuple(cols[p] for p in pivots)


def span_basis(vectors) -> tuple[Vec, ...]:
    """Deterministic basis of the span of the given vectors."""
    vectors = tuple(vectors)
    if not vectors:
        return ()
    return column_space_basis(from_columns(vectors))


def coords_in_span(basis, v: Vec):
    """Coordinates of v in the given basis, or None if v is outside."""
    basis = tuple(basis)
    if not basis:
        return () if is_zero_vec(v) else None
    m = from_columns(basis)
    return solve(m, v)


def in_span(basis, v: Vec) -> bool:
    return coords_in_span(basis, v) is not None


def spans_equal(b1, b2) -> bool:
    return all(in_span(b1, v) for v in b2) and all(in_span(b2, v) for v in b1)


def intersect_spans(b1, b2) -> tuple[Vec, ...]:
    """Basis of span(b1) ∩ span(b2)."""
    b1, b2 = tuple(b1), tuple(b2)
    if not b1 or not b2:
        return ()
    m = from_columns(b1 + tuple(neg_vec(v) for v in b2))
    out = []
    for k in nullspace(m):
        v = zeros_vec(len(b1[0]))
        for c, bv in zip(k[: len(b1)], b1):
            v = add_vec(v, scale_vec(c, bv))
        if not is_zero_vec(v):
            out.append(v)
    return span_basis(out)


def sum_spans(*bases) -> tuple[Vec, ...]:
    vs = []
    for b in bases:
        vs.extend(b)
    return span_basis(vs)


# ---------------------------------------------------------------------------
# characteristic polynomials and rational roots
# ---------------------------------------------------------------------------


def char_poly(a: Mat) -> tuple[Fraction, ...]:
    """Coefficients (low degree first) of det(xI - a); leading coeff 1.

    Faddeev-LeVerrier, exact over the rationals.
    """
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = a
    c = -trace(m)
    coeffs[n - 1] = c
    for k in range(2, n + 1):
        m = matmul(a, mat_add(m, mat_scale(c, identity(n))))
        c = -trace(m) / k
        coeffs[n - k] = c
    return tuple(coeffs)


def poly_eval(coeffs, x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def poly_deflate(coeffs, root: Fraction) -> tuple[Fraction, ...]:
    """Divide by (x - root); assumes root is an exact root."""
    out = []
    carry = Fraction(0)
    for c in reversed(coeffs):
        carry = c + carry * root
        out.append(carry)
    assert out[-1] == 0, "not a root"
    return tuple(reversed(out[:-1]))


def _divisors(n: int, limit: int = 10**13) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    if n > limit:
        raise ArithmeticError(f"divisor search too large: {n}")
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(coeffs) -> tuple[dict, tuple[Fraction, ...]]:
    """All rational roots with multiplicity, plus the unfactored remainder.

    The remainder has degree 0 exactly when the polynomial splits over Q.
    """
    coeffs = tuple(frac(c) for c in coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    roots: dict = {}
    # factor out x^k
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return roots, coeffs
    den_lcm = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in coeffs), 1)
    ints = [int(c * den_lcm) for c in coeffs]
    g = reduce(gcd, (abs(v) for v in ints if v != 0), 0)
    if g > 1:
        ints = [v // g for v in ints]
    cand = set()
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            cand.add(Fraction(p, q))
            cand.add(Fraction(-p, q))
    for r in sorted(cand):
        while len(coeffs) > 1 and poly_eval(coeffs, r) == 0:
            roots[r] = roots.get(r, 0) + 1
            coeffs = poly_deflate(coeffs, r)
    return roots, coeffs


# ---------------------------------------------------------------------------
# rational intervals (used to enclose 2^(p/q) when exactness is impossible)
# ---------------------------------------------------------------------------


def inth_root_floor(x: int, n: int) -> int:
    """floor(x ** (1/n)) for nonnegative integers, exact."""
    if x < 0:
        raise ValueError("negative radicand")
    if n == 1 or x in (0, 1):
        return x
    if n == 2:
        return isqrt(x)
    # start above the root; Newton then decreases monotonically to the floor
    guess = 1 << (-(-x.bit_length() // n))
    while True:
        nxt = ((n - 1) * guess + x // guess ** (n - 1)) // n
        if nxt >= guess:
            break
        guess = nxt
    while guess**n > x:
        guess -= 1
    while (guess + 1) ** n <= x:
        guess += 1
    return guess


def pow2_interval(e: Fraction, prec_bits: int = 64) -> tuple[Fraction, Fraction]:
    """Enclosing rational interval for 2**e; degenerate when e is integral."""
    e = frac(e)
    if e.denominator == 1:
        v = Fraction(2) ** int(e)
        return (v, v)
    p, q = e.numerator, e.denominator
    shift = prec_bits
    # 2^e * 2^shift = (2^(p + q*shift)) ** (1/q)
    expo = p + q * shift
    while expo < 0:
        shift += prec_bits
        expo = p + q * shift
    m = inth_root_floor(1 << expo, q) if expo >= 0 else 0
    lo = Fraction(m, 1 << shift)
    hi = Fraction(m + 1, 1 << shift)
    return (lo, hi)


def interval_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def interval_scale(c: Fraction, a):
    if c >= 0:
        return (c * a[0], c * a[1])
    return (c * a[1], c * a[0])


def interval_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))
