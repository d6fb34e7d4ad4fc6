"""Weight decompositions, conic subsets and tameness certificates.

The abelian factor acts on the algebra through its derivations; the joint
generalized eigenspaces are the weight spaces, and everything downstream
(standard solvability, the fatal opposite-weight pair, tame subalgebras)
is sign bookkeeping on the finite weight set, done exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from math import gcd

from . import linalg as la
from . import simplex
from .lie import LieAlgebraSpec, require_valid
from .linalg import Mat, Vec, frac


class UnsupportedActionError(ValueError):
    """The action is not diagonalizable over Q; names the offending matrix."""

    def __init__(self, msg, which=None, char_poly=None):
        super().__init__(msg)
        self.which = which
        self.char_poly = char_poly


class GuardExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class AModule:
    """A rational vector space with commuting action matrices."""

    dim: int
    actions: tuple[Mat, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        for m in self.actions:
            r, c = la.shape(m)
            if (r, c) != (self.dim, self.dim):
                raise ValueError("action matrix has wrong shape")
        for i in range(len(self.actions)):
            for j in range(i + 1, len(self.actions)):
                a, b = self.actions[i], self.actions[j]
                if la.matmul(a, b) != la.matmul(b, a):
                    raise ValueError("action matrices do not commute")


def joint_weight_spaces(mats, dim) -> tuple[tuple[Vec, tuple[Vec, ...]], ...]:
    """Joint generalized eigenspaces of commuting rational matrices.

    Returns (weight tuple, basis) pairs sorted by weight; raises
    UnsupportedActionError when some characteristic polynomial has an
    irrational root.
    """
    mats = tuple(mats)
    if not mats:
        if dim == 0:
            return ()
        return (((), tuple(la.basis_vec(dim, i) for i in range(dim))),)
    eigs = []
    for m_index, m in enumerate(mats):
        poly = la.char_poly(m)
        roots, remainder = la.rational_roots(poly)
        if len(remainder) > 1:
            raise UnsupportedActionError(
                f"action matrix {m_index} has an irrational eigenvalue "
                f"(unfactored characteristic polynomial part of degree {len(remainder)-1})",
                which=m_index,
                char_poly=poly,
            )
        eigs.append(sorted(roots))
    spaces = []
    ident = la.identity(dim)

    def refine(block_basis, m_index):
        if m_index == len(mats):
            return [((), block_basis)]
        out = []
        m = mats[m_index]
        for lam in eigs[m_index]:
            shifted = la.mat_sub(m, la.mat_scale(lam, ident))
            power = la.mat_pow(shifted, dim)
            gen = la.nullspace(power)
            inter = la.intersect_spans(block_basis, gen)
            if inter:
                for wt, basis in refine(inter, m_index + 1):
                    out.append(((lam,) + wt, basis))
        return out

    full = tuple(la.basis_vec(dim, i) for i in range(dim))
    for wt, basis in refine(full, 0):
        spaces.append((wt, basis))
    total = sum(len(b) for _, b in spaces)
    if total != dim:
        raise UnsupportedActionError(
            f"joint eigenspaces span dimension {total} of {dim}"
        )
    return tuple(sorted(spaces, key=lambda p: p[0]))


@dataclass(frozen=True)
class WeightDecomposition:
    weights: tuple[Vec, ...]              # distinct weights, sorted
    spaces: tuple[tuple[Vec, tuple[Vec, ...]], ...]
    scale: int                            # integer making scale*weight integral
    semisimple: tuple[Mat, ...]
    nilpotent: tuple[Mat, ...]
    block_matrix: Mat                     # columns: weight-space bases, in order
    block_matrix_inv: Mat

    def space(self, weight) -> tuple[Vec, ...]:
        for w, b in self.spaces:
            if w == tuple(weight):
                return b
        return ()

    def weight_multiset(self) -> tuple[Vec, ...]:
        out = []
        for w, b in self.spaces:
            out.extend([w] * len(b))
        return tuple(out)

    def int_weights(self) -> tuple[Vec, ...]:
        return tuple(la.scale_vec(self.scale, w) for w in self.weights)

    def component(self, x: Vec, weight) -> Vec:
        """The weight-space component of x, exactly."""
        coords = la.mat_vec(self.block_matrix_inv, x)
        out = [Fraction(0)] * len(x)
        col = 0
        for w, basis in self.spaces:
            for bvec in basis:
                if w == tuple(weight):
                    for k in range(len(x)):
                        out[k] += coords[col] * bvec[k]
                col += 1
        return tuple(out)

    def pairing(self, weight, a: Vec) -> Fraction:
        return la.dot(la.vec(weight), la.vec(a))


def _weights_scale(weights) -> int:
    dens = [c.denominator for w in weights for c in w]
    return reduce(lambda a, b: a * b // gcd(a, b), dens, 1)


@lru_cache(maxsize=None)
def weight_decomposition(spec: LieAlgebraSpec) -> WeightDecomposition:
    """Weights and generalized weight spaces of the derivation action."""
    require_valid(spec)
    spaces = joint_weight_spaces(spec.derivations, spec.dim)
    weights = tuple(sorted({w for w, _ in spaces}))
    cols = []
    for _, basis in spaces:
        cols.extend(basis)
    block = la.from_columns(cols) if cols else ()
    block_inv = la.inv(block) if cols else ()
    if cols and block_inv is None:
        raise UnsupportedActionError("weight-space bases are not jointly full rank")
    semis, nils = [], []
    n = spec.dim
    for m_index, d in enumerate(spec.derivations):
        diag_entries = []
        for w, basis in spaces:
            diag_entries.extend([w[m_index]] * len(basis))
        diag = tuple(
            tuple(diag_entries[i] if i == j else Fraction(0) for j in range(n))
            for i in range(n)
        )
        s = la.matmul(block, la.matmul(diag, block_inv)) if n else ()
        nmat = la.mat_sub(d, s) if n else ()
        if n and not la.is_zero_mat(la.mat_pow(nmat, n)):
            raise UnsupportedActionError(
                f"nilpotent part of derivation {m_index} is not nilpotent"
            )
        semis.append(s)
        nils.append(nmat)
    return WeightDecomposition(
        weights=weights,
        spaces=spaces,
        scale=_weights_scale(weights),
        semisimple=tuple(semis),
        nilpotent=tuple(nils),
        block_matrix=block,
        block_matrix_inv=block_inv,
    )


def check_grading(spec: LieAlgebraSpec, wd: WeightDecomposition | None = None):
    """Exact check of [u_a, u_b] <= u_{a+b}; returns violations (empty = graded)."""
    wd = wd or weight_decomposition(spec)
    bad = []
    weightset = set(wd.weights)
    for wa, ba in wd.spaces:
        for wb, bb in wd.spaces:
            target = tuple(x + y for x, y in zip(wa, wb))
            tbasis = wd.space(target) if target in weightset else ()
            for x in ba:
                for y in bb:
                    br = spec.bracket_vec(x, y)
                    if la.is_zero_vec(br):
                        continue
                    if target not in weightset or not la.in_span(tbasis, br):
                        bad.append((wa, wb, target))
    return bad


def module_of_derivations(spec: LieAlgebraSpec) -> AModule:
    return AModule(
        dim=spec.dim, actions=spec.derivations, labels=spec.labels
    )


def zero_component(module: AModule) -> tuple[Vec, ...]:
    """Basis of the joint generalized eigenspace for the zero weight."""
    if module.dim == 0:
        return ()
    if not module.actions:
        return tuple(la.basis_vec(module.dim, i) for i in range(module.dim))
    basis = tuple(la.basis_vec(module.dim, i) for i in range(module.dim))
    for m in module.actions:
        power = la.mat_pow(m, module.dim)
        basis = la.intersect_spans(basis, la.nullspace(power))
        if not basis:
            return ()
    return basis


def module_weights(module: AModule):
    """Weight multiset of a module (with multiplicities), sorted."""
    spaces = joint_weight_spaces(module.actions, module.dim)
    out = []
    for w, b in spaces:
        out.extend([w] * len(b))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# conic subsets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConicSubset:
    """Weights cut out by an open convex cone, with certifying functionals.

    The cone is the set where every functional is strictly positive; each
    member weight satisfies f(w) >= 1 for all functionals, and every
    non-member weight is pushed out by at least one functional.
    """

    members: tuple[Vec, ...]
    functionals: tuple[Vec, ...]

    def verify(self, all_weights) -> bool:
        members = set(self.members)
        for w in self.members:
            if any(la.dot(f, w) < 1 for f in self.functionals):
                return False
        for w in all_weights:
            w = tuple(w)
            if w in members:
                continue
            if all(la.dot(f, w) > 0 for f in self.functionals):
                return False
        return True

    def contains(self, weight) -> bool:
        return tuple(weight) in set(self.members)

    def key(self) -> str:
        return "{" + ",".join("(" + ",".join(str(c) for c in w) + ")" for w in self.members) + "}"


def _cone_functionals(members, others):
    """Functionals positive (margin 1) on members, each non-member excluded."""
    base_rows = [la.neg_vec(w) for w in members]
    base_rhs = [Fraction(-1)] * len(members)
    f0 = simplex.find_feasible(base_rows, base_rhs)
    if f0 is None:
        return None
    functionals = [f0]
    for beta in others:
        f = simplex.find_feasible(base_rows + [la.vec(beta)], base_rhs + [Fraction(0)])
        if f is None:
            return None
        functionals.append(f)
    return tuple(functionals)


def enumerate_conic_subsets(weights, guard: int = 20) -> tuple[ConicSubset, ...]:
    """All subsets of the weight set cut out by an open convex cone.

    Brute force over subsets with an exact feasibility check per subset;
    the guard protects against accidental huge weight sets.
    """
    distinct = sorted({tuple(la.vec(w)) for w in weights})
    nonzero = [w for w in distinct if not la.is_zero_vec(w)]
    if len(nonzero) > guard:
        raise GuardExceeded(
            f"{len(nonzero)} distinct nonzero weights exceeds the guard {guard}"
        )
    out = []
    for size in range(1, len(nonzero) + 1):
        for cand in combinations(nonzero, size):
            others = [w for w in distinct if w not in set(cand)]
            fs = _cone_functionals(cand, others)
            if fs is not None:
                c = ConicSubset(members=tuple(cand), functionals=fs)
                assert c.verify(distinct)
                out.append(c)
    return tuple(out)


def maximal_conic_subsets(conics) -> tuple[ConicSubset, ...]:
    """Conic subsets not strictly contained in another, sorted by functional."""
    out = []
    for c in conics:
        mem = set(c.members)
        if any(mem < set(d.members) for d in conics):
            continue
        out.append(c)
    return tuple(sorted(out, key=lambda c: (c.functionals[0], c.members)))


# ---------------------------------------------------------------------------
# tameness
# ---------------------------------------------------------------------------


def hull_contains_origin(points):
    """Convex coefficients for 0 in conv(points), or None.

    Independent of the simplex route: enumerates affinely independent
    subsets of size <= d+1 and solves each square system exactly.
    """
    pts = [tuple(la.vec(p)) for p in points]
    if not pts:
        return None
    d = len(pts[0])
    for size in range(1, d + 2):
        for idx in combinations(range(len(pts)), size):
            rows = [tuple(pts[i][k] for i in idx) for k in range(d)]
            rows.append((Fraction(1),) * size)
            rhs = la.zeros_vec(d) + (Fraction(1),)
            m = la.mat(rows)
            if la.rank(m) != size:
                continue  # not affinely independent; a smaller subset covers it
            sol = la.solve(m, rhs)
            if sol is None:
                continue
            if all(c >= 0 for c in sol):
                coeffs = [Fraction(0)] * len(pts)
                for pos, i in enumerate(idx):
                    coeffs[i] += sol[pos]
                return tuple(coeffs)
    return None


@dataclass(frozen=True)
class TamenessCertificate:
    witness: Vec | None                 # a with <w, a> <= -1 for all weights
    farkas: tuple[Fraction, ...] | None  # convex coefficients putting 0 in the hull

    @property
    def tame(self) -> bool:
        return self.witness is not None


def tameness_certificate(weights) -> TamenessCertificate:
    distinct = sorted({tuple(la.vec(w)) for w in weights})
    if not distinct:
        return TamenessCertificate(witness=(), farkas=None)
    a = simplex.feasible_strict_negative(distinct)
    if a is not None:
        for w in distinct:
            assert la.dot(w, a) <= -1
        return TamenessCertificate(witness=a, farkas=None)
    coeffs = hull_contains_origin(distinct)
    if coeffs is None:
        raise AssertionError(
            "infeasible negativity system but 0 is outside the hull; "
            "one of the two exact solvers is wrong"
        )
    return TamenessCertificate(witness=None, farkas=coeffs)


def tame_witness(weights) -> Vec | None:
    """Rational a with w(a) < 0 for every weight, or None if none exists."""
    return tameness_certificate(weights).witness


# ---------------------------------------------------------------------------
# tame subalgebras
# ---------------------------------------------------------------------------


class InternalConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class TameSubalgebra:
    spec: LieAlgebraSpec
    embedding: Mat                       # columns embed the subalgebra
    basis_weights: tuple[Vec, ...]

    def embed(self, x: Vec) -> Vec:
        return la.mat_vec(self.embedding, x)

    def project(self, x: Vec):
        return la.coords_in_span(la.columns(self.embedding), x)


def tame_subalgebra(spec: LieAlgebraSpec, conic: ConicSubset) -> TameSubalgebra:
    """Restriction of brackets and derivations to the conic weight spaces."""
    wd = weight_decomposition(spec)
    cols, wts = [], []
    for w, basis in wd.spaces:
        if conic.contains(w):
            for v in basis:
                cols.append(v)
                wts.append(w)
    m = len(cols)
    emb = la.from_columns(cols) if cols else ()
    table = [[la.zeros_vec(m) for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            br = spec.bracket_vec(cols[i], cols[j])
            coords = la.coords_in_span(cols, br)
            if coords is None:
                raise InternalConsistencyError(
                    "bracket escapes the conic subspace; invalid conic witness"
                )
            table[i][j] = coords
    ders = []
    for d in spec.derivations:
        dcols = []
        for v in cols:
            coords = la.coords_in_span(cols, la.mat_vec(d, v))
            if coords is None:
                raise InternalConsistencyError("derivation escapes the conic subspace")
            dcols.append(coords)
        ders.append(la.from_columns(dcols) if dcols else ())
    sub = LieAlgebraSpec(
        dim=m,
        labels=tuple(f"c{k}" for k in range(m)),
        brackets=tuple(tuple(table[i][j] for j in range(m)) for i in range(m)),
        derivations=tuple(ders),
    )
    return TameSubalgebra(spec=sub, embedding=emb, basis_weights=tuple(wts))
