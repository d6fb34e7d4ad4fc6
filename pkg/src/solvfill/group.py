"""Exact arithmetic in the semidirect product of a unipotent group by R^d.

Elements are written a * u with the abelian part on the left.  Conjugation
by a acts on the algebra through 2**<weight, a> on each weight space times
the exponential of the nilpotent part; the dyadic base amounts to an integer
reparameterization of the abelian factor and is what makes the arithmetic
exact on integer pairings.  The sign convention is pinned by the fixture
adjoint(a, log u) = log(a u a^{-1}), verified against a faithful matrix
model in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .lie import LieAlgebraSpec, bch_multiply
from .linalg import Vec
from .weights import UnsupportedActionError, weight_decomposition


@dataclass(frozen=True)
class GroupElement:
    a: Vec  # coordinates in the abelian factor
    u: Vec  # exponential coordinates in the unipotent factor

    def __post_init__(self):
        object.__setattr__(self, "a", la.vec(self.a))
        object.__setattr__(self, "u", la.vec(self.u))

    @property
    def is_identity(self) -> bool:
        return la.is_zero_vec(self.a) and la.is_zero_vec(self.u)

    @property
    def in_unipotent(self) -> bool:
        return la.is_zero_vec(self.a)

    @property
    def in_abelian(self) -> bool:
        return la.is_zero_vec(self.u)


def identity_element(spec: LieAlgebraSpec) -> GroupElement:
    return GroupElement(a=la.zeros_vec(spec.a_dim), u=la.zeros_vec(spec.dim))


def a_element(spec: LieAlgebraSpec, a) -> GroupElement:
    return GroupElement(a=la.vec(a), u=la.zeros_vec(spec.dim))


def u_element(spec: LieAlgebraSpec, x) -> GroupElement:
    return GroupElement(a=la.zeros_vec(spec.a_dim), u=la.vec(x))


def _exp_nilpotent(nmat, x: Vec, n: int) -> Vec:
    out = x
    term = x
    fact = 1
    for k in range(1, n + 1):
        term = la.mat_vec(nmat, term)
        if la.is_zero_vec(term):
            break
        fact *= k
        out = la.add_vec(out, la.scale_vec(Fraction(1, fact), term))
    return out


def adjoint(a, x, spec: LieAlgebraSpec) -> Vec:
    """log(alpha u alpha^{-1}) for alpha with coordinates a and u = exp(x).

    Exact whenever every pairing <weight, a> is an integer; otherwise raises
    UnsupportedActionError (see adjoint_interval for the enclosure fallback).
    """
    a = la.vec(a)
    x = la.vec(x)
    wd = weight_decomposition(spec)
    n = spec.dim
    if n == 0:
        return x
    coords = la.mat_vec(wd.block_matrix_inv, x)
    out = [Fraction(0)] * n
    col = 0
    for w, basis in wd.spaces:
        pairing = la.dot(la.vec(w), a)
        if pairing.denominator != 1:
            raise UnsupportedActionError(
                f"pairing <{w}, {tuple(a)}> = {pairing} is not an integer; "
                "the dyadic multiplier is irrational (use adjoint_interval)"
            )
        mult = Fraction(2) ** int(pairing)
        for bvec in basis:
            c = coords[col] * mult
            if c != 0:
                for k in range(n):
                    if bvec[k] != 0:
                        out[k] += c * bvec[k]
            col += 1
    semis = tuple(out)
    if not spec.derivations:
        return semis
    nmat = None
    for am, nm in zip(a, wd.nilpotent):
        scaled = la.mat_scale(am, nm)
        nmat = scaled if nmat is None else la.mat_add(nmat, scaled)
    return _exp_nilpotent(nmat, semis, n)


def adjoint_interval(a, x, spec: LieAlgebraSpec, prec_bits: int = 64):
    """Rational interval enclosure of adjoint(a, x) for non-integer pairings."""
    a = la.vec(a)
    x = la.vec(x)
    wd = weight_decomposition(spec)
    n = spec.dim
    coords = la.mat_vec(wd.block_matrix_inv, x) if n else ()
    out = [(Fraction(0), Fraction(0))] * n
    col = 0
    for w, basis in wd.spaces:
        pairing = la.dot(la.vec(w), a)
        mult = la.pow2_interval(pairing, prec_bits)
        for bvec in basis:
            c = la.interval_scale(coords[col], mult)
            for k in range(n):
                if bvec[k] != 0:
                    out[k] = la.interval_add(out[k], la.interval_scale(bvec[k], c))
            col += 1
    nmat = None
    for am, nm in zip(a, wd.nilpotent):
        scaled = la.mat_scale(am, nm)
        nmat = scaled if nmat is None else la.mat_add(nmat, scaled)
    if nmat is None or la.is_zero_mat(nmat):
        return tuple(out)
    # exp of the exact nilpotent part applied to the interval vector
    acc = list(out)
    term = list(out)
    fact = 1
    for k in range(1, n + 1):
        nxt = [(Fraction(0), Fraction(0))] * n
        for i in range(n):
            for j in range(n):
                if nmat[i][j] != 0:
                    nxt[i] = la.interval_add(
                        nxt[i], la.interval_scale(nmat[i][j], term[j])
                    )
        term = nxt
        fact *= k
        acc = [
            la.interval_add(acc[i], la.interval_scale(Fraction(1, fact), term[i]))
            for i in range(n)
        ]
    return tuple(acc)


def group_mul(g: GroupElement, h: GroupElement, spec: LieAlgebraSpec) -> GroupElement:
    """(a1 u1)(a2 u2) = (a1 + a2) (a2^{-1} u1 a2) u2, exact."""
    twisted = adjoint(la.neg_vec(h.a), g.u, spec)
    return GroupElement(
        a=la.add_vec(g.a, h.a),
        u=bch_multiply(twisted, h.u, spec),
    )


def group_inv(g: GroupElement, spec: LieAlgebraSpec) -> GroupElement:
    return GroupElement(a=la.neg_vec(g.a), u=adjoint(g.a, la.neg_vec(g.u), spec))


def group_conj(a, g: GroupElement, spec: LieAlgebraSpec) -> GroupElement:
    """alpha g alpha^{-1} for a pure abelian alpha with coordinates a."""
    return GroupElement(a=g.a, u=adjoint(a, g.u, spec))


def adjoint_matrix(a, spec: LieAlgebraSpec):
    """The exact matrix of adjoint(a, .) on the algebra."""
    n = spec.dim
    cols = [adjoint(a, la.basis_vec(n, i), spec) for i in range(n)]
    return la.from_columns(cols) if cols else ()
