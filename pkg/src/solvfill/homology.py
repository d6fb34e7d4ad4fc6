"""Second Lie algebra homology and the symmetric-square invariance quotient.

Both are computed as exact quotient modules with the induced action of the
derivations, so their zero-weight components are decided exactly.  Bases of
the wedge and symmetric squares are lexicographic on index pairs and quotient
representatives come from the pivot-free columns of a reduced row echelon
form, which keeps certificates reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .lie import LieAlgebraSpec, require_valid
from .linalg import Mat, Vec
from .weights import AModule, zero_component


def wedge2_basis(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def wedge3_basis(n: int):
    return [
        (i, j, k)
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(j + 1, n)
    ]


def sym2_basis(n: int):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _wedge_coords(x: Vec, idx: int, n: int, basis_index: dict) -> Vec:
    """Coordinates of x ^ e_idx in the lexicographic wedge-2 basis."""
    out = [Fraction(0)] * len(basis_index)
    for m in range(n):
        c = x[m]
        if c == 0 or m == idx:
            continue
        if m < idx:
            out[basis_index[(m, idx)]] += c
        else:
            out[basis_index[(idx, m)]] -= c
    return tuple(out)


def boundary_d2(spec: LieAlgebraSpec) -> Mat:
    """Matrix of (x ^ y) -> -[x, y] on the lexicographic pair basis."""
    n = spec.dim
    pairs = wedge2_basis(n)
    cols = [la.neg_vec(spec.bracket(i, j)) for (i, j) in pairs]
    return la.from_columns(cols) if cols else la.zeros(n, 0)


def boundary_d3(spec: LieAlgebraSpec) -> Mat:
    """Matrix of (x^y^z) -> [x,y]^z + [y,z]^x + [z,x]^y; satisfies d2 d3 = 0."""
    n = spec.dim
    pairs = wedge2_basis(n)
    pair_index = {p: t for t, p in enumerate(pairs)}
    cols = []
    for (i, j, k) in wedge3_basis(n):
        v = la.zeros_vec(len(pairs))
        v = la.add_vec(v, _wedge_coords(spec.bracket(i, j), k, n, pair_index))
        v = la.add_vec(v, _wedge_coords(spec.bracket(j, k), i, n, pair_index))
        v = la.add_vec(v, _wedge_coords(spec.bracket(k, i), j, n, pair_index))
        cols.append(v)
    if not cols:
        return la.zeros(len(pairs), 0)
    return la.from_columns(cols)


def wedge2_action(d: Mat, n: int) -> Mat:
    """Leibniz action on the wedge square: D(x^y) = Dx^y + x^Dy."""
    pairs = wedge2_basis(n)
    pair_index = {p: t for t, p in enumerate(pairs)}
    cols = []
    for (i, j) in pairs:
        v = [Fraction(0)] * len(pairs)
        for m in range(n):
            if d[m][i] != 0 and m != j:
                a, b, sign = (m, j, 1) if m < j else (j, m, -1)
                v[pair_index[(a, b)]] += sign * d[m][i]
            if d[m][j] != 0 and m != i:
                a, b, sign = (i, m, 1) if i < m else (m, i, -1)
                v[pair_index[(a, b)]] += sign * d[m][j]
        cols.append(tuple(v))
    return la.from_columns(cols) if cols else ()


def sym2_action(d: Mat, n: int) -> Mat:
    """Leibniz action on the symmetric square."""
    pairs = sym2_basis(n)
    pair_index = {p: t for t, p in enumerate(pairs)}
    cols = []
    for (i, j) in pairs:
        v = [Fraction(0)] * len(pairs)
        for m in range(n):
            if d[m][i] != 0:
                a, b = (m, j) if m <= j else (j, m)
                v[pair_index[(a, b)]] += d[m][i]
            if d[m][j] != 0:
                a, b = (i, m) if i <= m else (m, i)
                v[pair_index[(a, b)]] += d[m][j]
        cols.append(tuple(v))
    return la.from_columns(cols) if cols else ()


def _sym_coords(x: Vec, idx: int, n: int, basis_index: dict) -> Vec:
    out = [Fraction(0)] * len(basis_index)
    for m in range(n):
        c = x[m]
        if c == 0:
            continue
        a, b = (m, idx) if m <= idx else (idx, m)
        out[basis_index[(a, b)]] += c
    return tuple(out)


@dataclass(frozen=True)
class QuotientModule:
    """kernel/image with the induced commuting action, all exact."""

    ambient_dim: int
    ambient_labels: tuple[str, ...]
    kernel_basis: tuple[Vec, ...]
    image_basis: tuple[Vec, ...]
    quotient_reps: tuple[Vec, ...]
    actions: tuple[Mat, ...]      # induced on the quotient
    labels: tuple[str, ...]       # representative labels

    @property
    def dim(self) -> int:
        return len(self.quotient_reps)

    def module(self) -> AModule:
        return AModule(dim=self.dim, actions=self.actions, labels=self.labels)


def _pretty(coeffs: Vec, names) -> str:
    terms = []
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        if c == 1:
            terms.append(name)
        elif c == -1:
            terms.append(f"-{name}")
        else:
            terms.append(f"{c}*{name}")
    return " + ".join(terms) if terms else "0"


def make_quotient(
    kernel_basis,
    image_basis,
    ambient_actions,
    ambient_dim: int,
    ambient_labels,
) -> QuotientModule:
    """Quotient span(kernel)/span(image) with the induced action.

    Representatives are the kernel basis columns at the pivot-free positions
    of the image written in kernel coordinates (a deterministic complement).
    """
    kernel_basis = tuple(kernel_basis)
    image_basis = tuple(image_basis)
    z = len(kernel_basis)
    img_coords = []
    for v in image_basis:
        coords = la.coords_in_span(kernel_basis, v)
        if coords is None:
            raise ValueError("image is not contained in the kernel")
        img_coords.append(coords)
    if img_coords:
        _, pivots = la.rref(la.mat(img_coords))
    else:
        pivots = ()
    free = [c for c in range(z) if c not in set(pivots)]
    reps = tuple(kernel_basis[c] for c in free)

    # the action in (image basis + representatives) coordinates; the
    # representative block is the induced matrix
    mixed = image_basis + reps
    induced = []
    for act in ambient_actions:
        cols = []
        for r in reps:
            img = la.mat_vec(act, r)
            coords = la.coords_in_span(mixed, img)
            if coords is None:
                raise ValueError("action does not preserve the kernel")
            cols.append(tuple(coords[len(image_basis):]))
        induced.append(la.from_columns(cols) if cols else ())
    for act, ind in zip(ambient_actions, induced):
        for b in image_basis:
            if not la.in_span(image_basis, la.mat_vec(act, b)):
                raise ValueError("action does not preserve the image")
    labels = tuple(_pretty(r, ambient_labels) for r in reps)
    return QuotientModule(
        ambient_dim=ambient_dim,
        ambient_labels=tuple(ambient_labels),
        kernel_basis=kernel_basis,
        image_basis=image_basis,
        quotient_reps=reps,
        actions=tuple(induced),
        labels=labels,
    )


def h2(spec: LieAlgebraSpec) -> QuotientModule:
    """ker d2 / im d3 with the induced derivation action."""
    require_valid(spec)
    n = spec.dim
    d2 = boundary_d2(spec)
    d3 = boundary_d3(spec)
    if d3 and d2 and not la.is_zero_mat(la.matmul(d2, d3)):
        raise AssertionError("d2 . d3 != 0; structure constants are inconsistent")
    pairs = wedge2_basis(n)
    names = [f"{spec.labels[i]}^{spec.labels[j]}" for (i, j) in pairs]
    kernel = la.nullspace(d2) if pairs else ()
    image = la.column_space_basis(d3) if pairs else ()
    actions = tuple(wedge2_action(d, n) for d in spec.derivations)
    return make_quotient(kernel, image, actions, len(pairs), names)


def killing_module(spec: LieAlgebraSpec) -> QuotientModule:
    """Sym^2 modulo the span of [x,y].z - y.[x,z] over basis triples."""
    require_valid(spec)
    n = spec.dim
    pairs = sym2_basis(n)
    pair_index = {p: t for t, p in enumerate(pairs)}
    names = [f"{spec.labels[i]}.{spec.labels[j]}" for (i, j) in pairs]
    rels = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                rel = la.sub_vec(
                    _sym_coords(spec.bracket(i, j), k, n, pair_index),
                    _sym_coords(spec.bracket(i, k), j, n, pair_index),
                )
                if not la.is_zero_vec(rel):
                    rels.append(rel)
    image = la.span_basis(rels)
    kernel = tuple(la.basis_vec(len(pairs), t) for t in range(len(pairs)))
    actions = tuple(sym2_action(d, n) for d in spec.derivations)
    return make_quotient(kernel, image, actions, len(pairs), names)


@dataclass(frozen=True)
class ZeroParts:
    h2_dim: int
    kill_dim: int
    h2_zero_basis: tuple[Vec, ...]
    kill_zero_basis: tuple[Vec, ...]
    h2_module: QuotientModule
    kill_module: QuotientModule

    @property
    def h2_zero_dim(self) -> int:
        return len(self.h2_zero_basis)

    @property
    def kill_zero_dim(self) -> int:
        return len(self.kill_zero_basis)


def zero_parts(spec: LieAlgebraSpec) -> ZeroParts:
    """Dimensions and bases of the zero-weight parts of both quotients."""
    hm = h2(spec)
    km = killing_module(spec)
    return ZeroParts(
        h2_dim=hm.dim,
        kill_dim=km.dim,
        h2_zero_basis=zero_component(hm.module()),
        kill_zero_basis=zero_component(km.module()),
        h2_module=hm,
        kill_module=km,
    )
