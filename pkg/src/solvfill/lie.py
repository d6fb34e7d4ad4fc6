"""Nilpotent Lie algebras by structure constants, with an exact group law.

A :class:`LieAlgebraSpec` packages a rational nilpotent Lie algebra together
with a commuting family of derivations (the infinitesimal action of the
abelian factor).  Products in the associated unipotent group are computed in
exponential coordinates through a Dynkin-coefficient table that is exact for
the algebra's nilpotency class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .linalg import Mat, Vec, frac


class StructureError(ValueError):
    """Malformed dimensions or indices; distinct from invariant violations."""


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


@dataclass(frozen=True)
class LieAlgebraSpec:
    """Structure constants c[i][j] = coordinates of [e_i, e_j], plus derivations."""

    dim: int
    labels: tuple[str, ...]
    brackets: tuple[tuple[Vec, ...], ...]
    derivations: tuple[Mat, ...]

    def __post_init__(self):
        n = self.dim
        if n < 0:
            raise StructureError("negative dimension")
        if len(self.labels) != n:
            raise StructureError(f"expected {n} labels, got {len(self.labels)}")
        if len(self.brackets) != n or any(len(row) != n for row in self.brackets):
            raise StructureError("bracket table is not dim x dim")
        for i in range(n):
            for j in range(n):
                if len(self.brackets[i][j]) != n:
                    raise StructureError(f"bracket [{i}][{j}] has wrong length")
        for m, d in enumerate(self.derivations):
            r, c = la.shape(d)
            if (r, c) != (n, n):
                raise StructureError(f"derivation {m} is {r}x{c}, expected {n}x{n}")

    @property
    def a_dim(self) -> int:
        return len(self.derivations)

    def bracket(self, i: int, j: int) -> Vec:
        return self.brackets[i][j]

    def bracket_vec(self, x: Vec, y: Vec) -> Vec:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            xi = x[i]
            if xi == 0:
                continue
            for j in range(n):
                yj = y[j]
                if yj == 0:
                    continue
                cij = self.brackets[i][j]
                f = xi * yj
                for k in range(n):
                    if cij[k] != 0:
                        out[k] += f * cij[k]
        return tuple(out)

    def bracket_norm_const(self) -> Fraction:
        """K with |[X,Y]|_inf <= K |X|_inf |Y|_inf, exact."""
        n = self.dim
        best = Fraction(0)
        for k in range(n):
            s = sum(
                (abs(self.brackets[i][j][k]) for i in range(n) for j in range(n)),
                Fraction(0),
            )
            best = max(best, s)
        return best


def spec_from_sparse(dim, labels, entries, derivations) -> LieAlgebraSpec:
    """Build a spec from sparse 1-based entries [i, j, k, value].

    An entry fixes c[i][j][k]; the mirror c[j][i][k] defaults to the negative
    unless the file sets it explicitly (so broken antisymmetry is expressible
    and gets reported by validate rather than silently repaired).
    """
    table = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    explicit = set()
    for ent in entries:
        if len(ent) != 4:
            raise StructureError(f"bracket entry {ent!r} is not [i, j, k, value]")
        i, j, k, v = ent
        if not all(isinstance(t, int) for t in (i, j, k)):
            raise StructureError(f"bracket indices must be integers: {ent!r}")
        if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
            raise StructureError(f"bracket index out of range 1..{dim}: {ent!r}")
        if (i, j, k) in explicit:
            raise StructureError(f"duplicate bracket entry for ({i},{j},{k})")
        table[i - 1][j - 1][k - 1] = frac(v)
        explicit.add((i, j, k))
    for (i, j, k) in list(explicit):
        if (j, i, k) not in explicit:
            table[j - 1][i - 1][k - 1] = -table[i - 1][j - 1][k - 1]
    return LieAlgebraSpec(
        dim=dim,
        labels=tuple(labels),
        brackets=tuple(tuple(tuple(col) for col in row) for row in table),
        derivations=tuple(la.mat(d) for d in derivations),
    )


def heisenberg(derivation_diag=None) -> LieAlgebraSpec:
    """The 3-dimensional algebra [e1,e2] = e3, optionally with one diagonal derivation."""
    ders = []
    if derivation_diag is not None:
        d = [frac(x) for x in derivation_diag]
        ders.append(
            tuple(
                tuple(d[i] if i == j else Fraction(0) for j in range(3))
                for i in range(3)
            )
        )
    return spec_from_sparse(3, ("e1", "e2", "e3"), [[1, 2, 3, "1"]], ders)


def abelian(dim, derivation_diags=()) -> LieAlgebraSpec:
    ders = []
    for diag in derivation_diags:
        d = [frac(x) for x in diag]
        ders.append(
            tuple(
                tuple(d[i] if i == j else Fraction(0) for j in range(dim))
                for i in range(dim)
            )
        )
    return spec_from_sparse(dim, tuple(f"e{i+1}" for i in range(dim)), [], ders)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def lower_central_series(spec: LieAlgebraSpec) -> list[tuple[Vec, ...]]:
    """Bases of g_1 >= g_2 >= ..., stopping at zero or at stabilization."""
    n = spec.dim
    full = tuple(la.basis_vec(n, i) for i in range(n))
    series = [full]
    current = full
    while True:
        nxt = la.span_basis(
            [spec.bracket_vec(la.basis_vec(n, i), v) for i in range(n) for v in current]
        )
        series.append(nxt)
        if len(nxt) == 0 or len(nxt) == len(current):
            return series
        current = nxt


def nilpotency_class(spec: LieAlgebraSpec) -> int:
    series = lower_central_series(spec)
    if series[-1]:
        raise ValueError("algebra is not nilpotent")
    if spec.dim == 0:
        return 1
    return max(1, len(series) - 1)


def validate(spec: LieAlgebraSpec) -> ValidationReport:
    """Check every structural invariant exactly; empty report means valid."""
    n = spec.dim
    out: list[Violation] = []

    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if spec.brackets[i][j][k] != -spec.brackets[j][i][k]:
                    out.append(
                        Violation(
                            "antisymmetry",
                            (i + 1, j + 1, k + 1),
                            f"c[{i+1}][{j+1}][{k+1}] != -c[{j+1}][{i+1}][{k+1}]",
                        )
                    )

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ei, ej, ek = (la.basis_vec(n, t) for t in (i, j, k))
                s = la.add_vec(
                    la.add_vec(
                        spec.bracket_vec(ei, spec.bracket_vec(ej, ek)),
                        spec.bracket_vec(ej, spec.bracket_vec(ek, ei)),
                    ),
                    spec.bracket_vec(ek, spec.bracket_vec(ei, ej)),
                )
                if not la.is_zero_vec(s):
                    out.append(Violation("jacobi", (i + 1, j + 1, k + 1)))

    series = lower_central_series(spec)
    if series[-1]:
        out.append(
            Violation(
                "nilpotency",
                (len(series),),
                f"lower central series stabilizes at dimension {len(series[-1])}",
            )
        )

    for m, d in enumerate(spec.derivations):
        for i in range(n):
            for j in range(i + 1, n):
                ei, ej = la.basis_vec(n, i), la.basis_vec(n, j)
                lhs = la.mat_vec(d, spec.bracket_vec(ei, ej))
                rhs = la.add_vec(
                    spec.bracket_vec(la.mat_vec(d, ei), ej),
                    spec.bracket_vec(ei, la.mat_vec(d, ej)),
                )
                if lhs != rhs:
                    out.append(Violation("derivation", (m, i + 1, j + 1)))

    for a in range(len(spec.derivations)):
        for b in range(a + 1, len(spec.derivations)):
            da, db = spec.derivations[a], spec.derivations[b]
            if la.matmul(da, db) != la.matmul(db, da):
                out.append(Violation("commutation", (a, b)))

    return ValidationReport(tuple(out))


def require_valid(spec: LieAlgebraSpec) -> None:
    rep = validate(spec)
    if not rep.ok:
        kinds = ", ".join(sorted(rep.kinds()))
        raise ValueError(f"invalid structure constants ({kinds})")


# ---------------------------------------------------------------------------
# the group law in exponential coordinates
# ---------------------------------------------------------------------------


def _series_mul(s1: dict, s2: dict, cutoff: int) -> dict:
    out: dict = {}
    for w1, c1 in s1.items():
        for w2, c2 in s2.items():
            if len(w1) + len(w2) > cutoff:
                continue
            w = w1 + w2
            out[w] = out.get(w, Fraction(0)) + c1 * c2
    return {w: c for w, c in out.items() if c != 0}


def _series_exp(letter: int, cutoff: int) -> dict:
    out = {(): Fraction(1)}
    f = 1
    for k in range(1, cutoff + 1):
        f *= k
        out[(letter,) * k] = Fraction(1, f)
    return out


def _series_log(s: dict, cutoff: int) -> dict:
    q = {w: c for w, c in s.items() if w != ()}
    out: dict = {}
    power = {(): Fraction(1)}
    sign = Fraction(1)
    for m in range(1, cutoff + 1):
        power = _series_mul(power, q, cutoff)
        for w, c in power.items():
            out[w] = out.get(w, Fraction(0)) + sign * c / m
        sign = -sign
    return {w: c for w, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def bch_table(nilpotency: int) -> tuple[tuple[Fraction, tuple[int, ...]], ...]:
    """Dynkin coefficients of log(exp x exp y) up to bracket depth `nilpotency`.

    Each entry (coeff, word) contributes coeff * [w1,[w2,[...,wm]]] with
    letters 0 -> x, 1 -> y; the division by word length in Dynkin's projection
    is folded into the coefficient.  Truncation is exact for algebras of the
    given class.
    """
    c = max(1, nilpotency)
    series = _series_mul(_series_exp(0, c), _series_exp(1, c), c)
    logser = _series_log(series, c)
    entries = []
    for word in sorted(logser, key=lambda w: (len(w), w)):
        coeff = logser[word]
        entries.append((coeff / len(word), word))
    return tuple(entries)


def bch_multiply(x: Vec, y: Vec, spec: LieAlgebraSpec) -> Vec:
    """log(exp x . exp y) in the algebra, exact."""
    n = spec.dim
    cls = nilpotency_class(spec)
    gens = (tuple(x), tuple(y))
    out = [Fraction(0)] * n
    for coeff, word in bch_table(cls):
        acc = gens[word[-1]]
        for letter in reversed(word[:-1]):
            acc = spec.bracket_vec(gens[letter], acc)
            if la.is_zero_vec(acc):
                break
        else:
            for k in range(n):
                if acc[k] != 0:
                    out[k] += coeff * acc[k]
    return tuple(out)


def bch_inverse(x: Vec) -> Vec:
    """log of (exp x)^{-1}; in exponential coordinates just negation."""
    return la.neg_vec(x)
