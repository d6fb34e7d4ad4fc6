"""Piecewise paths into the group: word paths and functional loops.

A word path traverses one letter per parameter slab, each slab a left
translate of a one-parameter segment, so its Lipschitz constant is exactly
the letter count times the largest letter norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from . import linalg as la
from .group import GroupElement, identity_element
from .lie import LieAlgebraSpec
from .numeric import CompiledGroup, compiled
from .words import Word, word_prefixes


def _norm2(vec) -> float:
    return sqrt(sum(float(x) * float(x) for x in vec))


class WordPath:
    """The standard path of a word: letter i on [i/L, (i+1)/L], left-translated."""

    def __init__(self, spec: LieAlgebraSpec, word: Word, base: GroupElement | None = None):
        self.spec = spec
        self.word = word
        self.base = base if base is not None else identity_element(spec)
        self.group: CompiledGroup = compiled(spec)
        from .group import group_mul

        prefixes = word_prefixes(word, spec)
        self.exact_prefixes = [group_mul(self.base, p, spec) for p in prefixes]
        self.length = len(word)
        d, n = self.group.d, self.group.n
        L = max(self.length, 1)
        self.pa = np.zeros((L + 1, d))
        self.pu = np.zeros((L + 1, n))
        for i, p in enumerate(self.exact_prefixes):
            self.pa[i] = [float(x) for x in p.a]
            self.pu[i] = [float(x) for x in p.u]
        if self.length == 0:
            self.pa[1] = self.pa[0]
            self.pu[1] = self.pu[0]
        self.xi_a = np.zeros((L, d))
        self.xi_u = np.zeros((L, n))
        for i, letter in enumerate(word.letters):
            self.xi_a[i] = [float(x) for x in letter.element.a]
            self.xi_u[i] = [float(x) for x in letter.element.u]

    @property
    def start(self) -> GroupElement:
        return self.exact_prefixes[0]

    @property
    def end(self) -> GroupElement:
        return self.exact_prefixes[-1]

    def is_loop(self) -> bool:
        return self.start == self.end

    def letter_norms(self) -> list[float]:
        return [
            _norm2(l.element.a) + 0.0 if l.is_a_letter else _norm2(l.element.u)
            for l in self.word.letters
        ]

    def lip_bound(self) -> float:
        """Exact speed bound: letter count times the largest letter norm."""
        if self.length == 0:
            return 0.0
        return self.length * max(self.letter_norms())

    def max_letter_norm(self) -> float:
        return max(self.letter_norms(), default=0.0)

    def eval_batch(self, t: np.ndarray):
        t = np.asarray(t, dtype=float)
        L = max(self.length, 1)
        idx = np.clip(np.floor(t * L).astype(int), 0, L - 1)
        tau = t * L - idx
        a = self.pa[idx]
        u = self.pu[idx]
        step_a = tau[..., None] * self.xi_a[idx] if self.length else np.zeros_like(a)
        step_u = tau[..., None] * self.xi_u[idx] if self.length else np.zeros_like(u)
        return self.group.mul((a, u), (step_a, step_u))

    def ball_bound(self, center: GroupElement) -> Fraction:
        """Exact sup-norm bound on coordinates of center^-1 * path(t)."""
        from .group import group_inv, group_mul

        best = Fraction(0)
        inv_c = group_inv(center, self.spec)
        for i, p in enumerate(self.exact_prefixes):
            rel = group_mul(inv_c, p, self.spec)
            r = max(la.norm_inf(rel.a), la.norm_inf(rel.u))
            if i < self.length:
                letter = self.word.letters[i]
                r += max(la.norm_inf(letter.element.a), la.norm_inf(letter.element.u))
                growth = self.spec.bracket_norm_const()
                r += growth * r * r  # crude second-order padding, certified upward
            best = max(best, r)
        return best


class FuncPath:
    """A loop given by a coordinate function; used for analytic families."""

    def __init__(self, spec: LieAlgebraSpec, fn, lip_hint: float, ball: float,
                 start: GroupElement | None = None):
        self.spec = spec
        self.group = compiled(spec)
        self.fn = fn
        self._lip = lip_hint
        self._ball = ball
        self.start = start if start is not None else identity_element(spec)
        self.end = self.start
        self.length = 1

    def eval_batch(self, t: np.ndarray):
        return self.fn(np.asarray(t, dtype=float))

    def lip_bound(self) -> float:
        return self._lip

    def is_loop(self) -> bool:
        return True

    def ball_bound(self, center: GroupElement) -> float:
        return self._ball


def word_path(w: Word, spec: LieAlgebraSpec, base: GroupElement | None = None) -> WordPath:
    return WordPath(spec, w, base)


def circle_loop(spec: LieAlgebraSpec, i: int, j: int, radius: float) -> FuncPath:
    """A round loop of the given radius in the (e_i, e_j) coordinate plane."""
    group = compiled(spec)
    n = group.n

    def fn(t):
        theta = 2.0 * np.pi * t
        a = np.zeros(t.shape + (group.d,))
        u = np.zeros(t.shape + (n,))
        u[..., i] = radius * (np.cos(theta) - 1.0)
        u[..., j] = radius * np.sin(theta)
        return (a, u)

    return FuncPath(
        spec,
        fn,
        lip_hint=2.0 * np.pi * radius,
        ball=2.0 * radius,
    )
