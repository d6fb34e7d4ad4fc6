"""Vectorized floating-point group arithmetic for the geometry pipeline.

The certification path never touches floats; this module exists so square
maps can be sampled on large grids quickly.  A CompiledGroup freezes the
structure tensor, the Dynkin table, the weight projectors and the nilpotent
parts of one algebra into numpy arrays, and all operations are batched over
leading axes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .group import GroupElement
from .lie import LieAlgebraSpec, bch_table, nilpotency_class
from .weights import weight_decomposition

LOG2 = float(np.log(2.0))


class CompiledGroup:
    def __init__(self, spec: LieAlgebraSpec):
        self.spec = spec
        n, d = spec.dim, spec.a_dim
        self.n, self.d = n, d
        self.tensor = np.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    self.tensor[i, j, k] = float(spec.brackets[i][j][k])
        cls = nilpotency_class(spec) if n else 1
        self.bch_terms = [
            (float(c), w) for c, w in bch_table(cls) if len(w) > 1
        ]
        wd = weight_decomposition(spec)
        block = np.array(
            [[float(x) for x in row] for row in wd.block_matrix]
        ) if n else np.zeros((0, 0))
        block_inv = np.array(
            [[float(x) for x in row] for row in wd.block_matrix_inv]
        ) if n else np.zeros((0, 0))
        self.projectors = []
        col = 0
        for w, basis in wd.spaces:
            sel = np.zeros((n, n))
            for _ in basis:
                sel[col, col] = 1.0
                col += 1
            proj = block @ sel @ block_inv
            alpha = np.array([float(c) for c in w])
            self.projectors.append((alpha, proj))
        self.nilpotents = np.array(
            [[[float(x) for x in row] for row in m] for m in wd.nilpotent]
        ) if d and n else np.zeros((d, n, n))
        self.has_nilpotent = bool(self.nilpotents.size) and bool(
            np.any(self.nilpotents)
        )

    # -- elements ------------------------------------------------------------

    def from_exact(self, g: GroupElement):
        return (
            np.array([float(x) for x in g.a]),
            np.array([float(x) for x in g.u]),
        )

    def identity(self, shape=()):
        return (
            np.zeros(shape + (self.d,)),
            np.zeros(shape + (self.n,)),
        )

    # -- algebra -------------------------------------------------------------

    def bracket(self, x, y):
        return np.einsum("ijk,...i,...j->...k", self.tensor, x, y)

    def bch(self, x, y):
        out = x + y
        vecs = (x, y)
        for coeff, word in self.bch_terms:
            acc = vecs[word[-1]]
            for letter in word[-2::-1]:
                acc = self.bracket(vecs[letter], acc)
            out = out + coeff * acc
        return out

    def adjoint(self, a, x):
        if self.n == 0:
            return x
        out = np.zeros_like(x)
        for alpha, proj in self.projectors:
            pairing = a @ alpha if self.d else 0.0
            mult = np.exp2(pairing)
            out = out + mult[..., None] * np.einsum("kj,...j->...k", proj, x)
        if not self.has_nilpotent:
            return out
        na = np.einsum("...m,mjk->...jk", a, self.nilpotents)
        acc = out
        term = out
        for i in range(1, self.n + 1):
            term = np.einsum("...jk,...k->...j", na, term) / i
            acc = acc + term
        return acc

    # -- group ---------------------------------------------------------------

    def mul(self, g, h):
        ga, gu = g
        ha, hu = h
        twisted = self.adjoint(-ha, gu)
        return (ga + ha, self.bch(twisted, hu))

    def inv(self, g):
        ga, gu = g
        return (-ga, self.adjoint(ga, -gu))

    def norm(self, g):
        ga, gu = g
        return np.sqrt(np.sum(ga * ga, axis=-1) + np.sum(gu * gu, axis=-1))

    def dist(self, g, h):
        """First-order left-invariant distance of nearby elements."""
        return self.norm(self.mul(self.inv(g), h))


@lru_cache(maxsize=None)
def compiled(spec: LieAlgebraSpec) -> CompiledGroup:
    return CompiledGroup(spec)
