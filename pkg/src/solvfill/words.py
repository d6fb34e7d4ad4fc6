"""Words over compact generating-set descriptors and their normal forms.

Generating sets are balls described by radii and membership predicates, not
finite sets: the groups here are continuous, and every construction only
ever needs membership tests and norm bounds.  Word length is the letter
count.  Normal forms compress unipotent elements into logarithmically many
letters by conjugating them into a fixed ball with a certified contraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .group import GroupElement, adjoint, adjoint_matrix, group_inv, group_mul, identity_element, u_element
from .lie import LieAlgebraSpec, bch_multiply, bch_table, lower_central_series, nilpotency_class
from .linalg import Vec
from .weights import (
    ConicSubset,
    enumerate_conic_subsets,
    maximal_conic_subsets,
    tame_witness,
    weight_decomposition,
)

A_FACTOR = "A"
U_FACTOR = "U"


class MembershipError(ValueError):
    pass


class MalcevCoverageError(ValueError):
    def __init__(self, uncovered):
        self.uncovered = tuple(uncovered)
        super().__init__(f"weights not covered by the conic order: {self.uncovered}")


@dataclass(frozen=True)
class Letter:
    factor: str
    element: GroupElement

    @property
    def is_a_letter(self) -> bool:
        return self.element.in_abelian

    @property
    def is_identity(self) -> bool:
        return self.element.is_identity

    def inverse(self) -> "Letter":
        return Letter(
            self.factor,
            GroupElement(a=la.neg_vec(self.element.a), u=la.neg_vec(self.element.u)),
        )


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __getitem__(self, sl):
        if isinstance(sl, slice):
            return Word(self.letters[sl])
        return self.letters[sl]

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    @property
    def is_empty(self) -> bool:
        return not self.letters


EMPTY_WORD = Word()


def word_of(letters) -> Word:
    return Word(tuple(letters))


def a_letter(spec: LieAlgebraSpec, a, factor: str = A_FACTOR) -> Letter:
    return Letter(factor, GroupElement(a=la.vec(a), u=la.zeros_vec(spec.dim)))


def u_letter(spec: LieAlgebraSpec, x, factor: str = U_FACTOR) -> Letter:
    return Letter(factor, GroupElement(a=la.zeros_vec(spec.a_dim), u=la.vec(x)))


def identity_letter(spec: LieAlgebraSpec, factor: str = A_FACTOR) -> Letter:
    return Letter(factor, identity_element(spec))


def eval_word(w: Word, spec: LieAlgebraSpec) -> GroupElement:
    out = identity_element(spec)
    for letter in w.letters:
        out = group_mul(out, letter.element, spec)
    return out


def word_prefixes(w: Word, spec: LieAlgebraSpec) -> list[GroupElement]:
    """Evaluations of the empty prefix through the full word, length + 1 entries."""
    out = [identity_element(spec)]
    for letter in w.letters:
        out.append(group_mul(out[-1], letter.element, spec))
    return out


@dataclass(frozen=True)
class GenSetDescriptor:
    """Symmetric compact generating set: an abelian box and unipotent balls.

    ``subspaces`` maps a factor tag to the basis of its unipotent subalgebra
    (None meaning all of it).  Contains the identity and is closed under
    inverses by construction.
    """

    a_radius: Fraction
    u_radius: Fraction
    subspaces: tuple[tuple[str, tuple[Vec, ...] | None], ...] = ((U_FACTOR, None),)

    def subspace(self, tag: str):
        for t, basis in self.subspaces:
            if t == tag:
                return basis
        raise MembershipError(f"unknown factor tag {tag!r}")

    def check(self, letter: Letter) -> None:
        e = letter.element
        if letter.is_a_letter:
            if la.norm_inf(e.a) > self.a_radius:
                raise MembershipError(
                    f"abelian letter of size {la.norm_inf(e.a)} exceeds radius {self.a_radius}"
                )
            return
        if not e.in_unipotent:
            raise MembershipError("letters must be pure abelian or pure unipotent")
        if la.norm_inf(e.u) > self.u_radius:
            raise MembershipError(
                f"unipotent letter of size {la.norm_inf(e.u)} exceeds radius {self.u_radius}"
            )
        basis = self.subspace(letter.factor if letter.factor != A_FACTOR else U_FACTOR)
        if basis is not None and not la.in_span(basis, e.u):
            raise MembershipError(f"letter is outside the {letter.factor} subalgebra")

    def member(self, letter: Letter) -> bool:
        try:
            self.check(letter)
            return True
        except MembershipError:
            return False

    def check_word(self, w: Word) -> None:
        for letter in w.letters:
            self.check(letter)


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def boxword_a(spec: LieAlgebraSpec, v, a_radius, factor: str = A_FACTOR) -> Word:
    """A minimal-length box word for an abelian element.

    Integer vectors with radius >= 1 get integer steps (so evaluation stays
    exact); otherwise the word uses equal fractional chunks.
    """
    v = la.vec(v)
    a_radius = la.frac(a_radius)
    if la.is_zero_vec(v):
        return EMPTY_WORD
    if a_radius <= 0:
        raise MembershipError("abelian radius must be positive")
    count = _ceil_frac(la.norm_inf(v) / a_radius)
    integral = all(c.denominator == 1 for c in v) and a_radius >= 1
    letters = []
    if integral:
        step_cap = int(a_radius)
        rem = list(v)
        while any(c != 0 for c in rem):
            step = tuple(
                max(min(c, Fraction(step_cap)), Fraction(-step_cap)) for c in rem
            )
            letters.append(a_letter(spec, step, factor))
            rem = [c - s for c, s in zip(rem, step)]
        assert len(letters) == count
    else:
        chunk = la.scale_vec(Fraction(1, count), v)
        letters = [a_letter(spec, chunk, factor) for _ in range(count)]
    return word_of(letters)


# ---------------------------------------------------------------------------
# contraction certificates
# ---------------------------------------------------------------------------


class ContractionSearchError(RuntimeError):
    pass


def _bch_growth_bound(spec: LieAlgebraSpec, radius: Fraction) -> Fraction:
    """Exact B with |log(exp X exp Y)|_inf <= B whenever |X|,|Y| <= radius."""
    k = spec.bracket_norm_const()
    total = Fraction(0)
    for coeff, word in bch_table(nilpotency_class(spec)):
        m = len(word)
        total += abs(coeff) * (k ** (m - 1) if m > 1 else Fraction(1)) * radius**m
    return total


def _restricted_op_bound(matrix, basis) -> Fraction:
    """Certified sup-norm operator bound of a matrix on a column-spanned subspace."""
    if basis is None:
        return la.op_norm_inf(matrix)
    if not basis:
        return Fraction(0)
    e = la.from_columns(basis)
    gram = la.matmul(la.transpose(e), e)
    gram_inv = la.inv(gram)
    left_inv = la.matmul(gram_inv, la.transpose(e))
    return la.op_norm_inf(la.matmul(matrix, e)) * la.op_norm_inf(left_inv)


@dataclass(frozen=True)
class ContractionData:
    """a and a radius R with a certified Ad(a)(ball_R * ball_R) inside ball_R.

    ``a`` is the contracting abelian translation (all weight pairings are
    negative integers), ``radius`` the letter ball, ``factor`` the certified
    operator bound of Ad(a) on the relevant subalgebra, and ``growth`` the
    product-ball bound: factor * growth <= radius replays the inclusion.
    """

    spec: LieAlgebraSpec
    a: Vec
    radius: Fraction
    factor: Fraction
    growth: Fraction
    steps: int
    conic_tag: str = U_FACTOR
    subspace: tuple[Vec, ...] | None = None

    def verify(self) -> bool:
        m = _restricted_op_bound(adjoint_matrix(self.a, self.spec), self.subspace)
        return (
            m <= self.factor
            and _bch_growth_bound(self.spec, self.radius) <= self.growth
            and self.factor * self.growth <= self.radius
        )

    def descriptor(self) -> GenSetDescriptor:
        return GenSetDescriptor(
            a_radius=max(la.norm_inf(self.a), Fraction(1)),
            u_radius=self.radius,
            subspaces=((self.conic_tag, self.subspace),)
            if self.conic_tag != U_FACTOR
            else ((U_FACTOR, self.subspace),),
        )

    def contract(self, x: Vec) -> Vec:
        return adjoint(self.a, x, self.spec)

    def expand(self, x: Vec) -> Vec:
        return adjoint(la.neg_vec(self.a), x, self.spec)


def _integralize_witness(spec: LieAlgebraSpec, a0) -> Vec:
    """Scale a tame witness so the vector and all weight pairings are integers."""
    a0 = la.vec(a0)
    wd = weight_decomposition(spec)
    dens = [c.denominator for c in a0]
    for w in wd.weights:
        dens.append(la.dot(la.vec(w), a0).denominator)
    from math import lcm

    return la.scale_vec(lcm(*dens) if dens else 1, a0)


def contraction_data(
    spec: LieAlgebraSpec,
    a0,
    radius=Fraction(1),
    conic: ConicSubset | None = None,
    guard: int = 64,
) -> ContractionData:
    """Find a power of the witness whose conjugation certifiably contracts.

    Searches t = 1, 2, ... for a = t * a1 (a1 the integralized witness) with
    opnorm(Ad(a)) * B(radius) <= radius, B the exact product-ball growth
    bound.  Raises ContractionSearchError if the guard is hit.
    """
    radius = la.frac(radius)
    a1 = _integralize_witness(spec, a0)
    wd = weight_decomposition(spec)
    members = None
    subspace = None
    tag = U_FACTOR
    if conic is not None:
        members = set(conic.members)
        cols = []
        for w, basis in wd.spaces:
            if w in members:
                cols.extend(basis)
        subspace = tuple(cols)
        tag = "C" + conic.key()
    for w in wd.weights:
        if members is not None and w not in members:
            continue
        if la.dot(la.vec(w), a1) >= 0:
            raise ContractionSearchError(
                f"witness does not strictly contract weight {w}"
            )
    growth = _bch_growth_bound(spec, radius)
    for t in range(1, guard + 1):
        a = la.scale_vec(t, a1)
        m = _restricted_op_bound(adjoint_matrix(a, spec), subspace)
        if m * growth <= radius:
            cd = ContractionData(
                spec=spec,
                a=a,
                radius=radius,
                factor=m,
                growth=growth,
                steps=t,
                conic_tag=tag,
                subspace=subspace,
            )
            assert cd.verify()
            return cd
    raise ContractionSearchError(
        f"no contracting power up to {guard}; raise the guard"
    )


def tame_normal_form(u: GroupElement, cd: ContractionData) -> Word:
    """The word a^{-k} s a^{k} with s the k-fold contraction of u, k minimal.

    Our adjoint convention conjugates by a on the left, so the contracting
    letters sit on the right; length is 2k + 1 (0 for the identity).
    """
    spec = cd.spec
    if not u.in_unipotent:
        raise ValueError("tame normal form expects a unipotent element")
    if u.is_identity:
        return EMPTY_WORD
    if cd.subspace is not None and not la.in_span(cd.subspace, u.u):
        raise MembershipError("element is outside the conic subalgebra")
    x = u.u
    k = 0
    while la.norm_inf(x) > cd.radius:
        x = cd.contract(x)
        k += 1
        if k > 10**6:
            raise ContractionSearchError("contraction did not reach the ball")
    back = a_letter(spec, la.neg_vec(cd.a), A_FACTOR)
    fwd = a_letter(spec, cd.a, A_FACTOR)
    middle = Letter(cd.conic_tag, u_element(spec, x))
    return word_of([back] * k + [middle] + [fwd] * k)


def contraction_depth(u: GroupElement, cd: ContractionData) -> int:
    """Minimal k with the k-fold contraction of u inside the letter ball."""
    x = u.u
    k = 0
    while la.norm_inf(x) > cd.radius:
        x = cd.contract(x)
        k += 1
    return k


def deep_word(u: GroupElement, cd: ContractionData, depth: int) -> Word:
    """Like the normal form but at a prescribed conjugation depth."""
    spec = cd.spec
    x = u.u
    for _ in range(depth):
        x = cd.contract(x)
    if la.norm_inf(x) > cd.radius:
        raise ValueError(f"depth {depth} does not reach the letter ball")
    back = a_letter(spec, la.neg_vec(cd.a), A_FACTOR)
    fwd = a_letter(spec, cd.a, A_FACTOR)
    middle = Letter(cd.conic_tag, u_element(spec, x))
    return word_of([back] * depth + [middle] + [fwd] * depth)


def adjoint_box_bound(spec: LieAlgebraSpec, a_radius: Fraction) -> Fraction:
    """Certified bound on opnorm(Ad(x)) over the box |x|_inf <= a_radius."""
    wd = weight_decomposition(spec)
    a_radius = la.frac(a_radius)
    exponent = max(
        (la.norm_one(la.vec(w)) * a_radius for w in wd.weights), default=Fraction(0)
    )
    mult = Fraction(2) ** _ceil_frac(exponent)
    nil_norm = sum((la.op_norm_inf(nm) for nm in wd.nilpotent), Fraction(0))
    x = a_radius * nil_norm
    nil_bound = Fraction(0)
    term = Fraction(1)
    for j in range(spec.dim + 1):
        nil_bound += term
        term = term * x / (j + 1)
    basis_norm = (
        la.op_norm_inf(wd.block_matrix) * la.op_norm_inf(wd.block_matrix_inv)
        if spec.dim
        else Fraction(1)
    )
    return mult * nil_bound * basis_norm


def box_crossing_bound(cd: ContractionData, a_radius: Fraction) -> tuple[int, Fraction]:
    """(C, M_box): crossing one box letter then C extra contractions keeps the ball.

    M_box certifiably bounds opnorm(Ad(x)) over the box |x|_inf <= a_radius;
    C is minimal with M_box * factor^C <= 1.
    """
    m_box = adjoint_box_bound(cd.spec, a_radius)
    c = 0
    acc = m_box
    while acc > 1:
        acc *= cd.factor
        c += 1
        if c > 10**4:
            raise ContractionSearchError("box crossing bound search exceeded guard")
    return max(c, 1), m_box


# ---------------------------------------------------------------------------
# constructive factorization into conic subgroups
# ---------------------------------------------------------------------------


def default_conic_order(spec: LieAlgebraSpec) -> tuple[ConicSubset, ...]:
    """Maximal conic subsets sorted by their first witness functional."""
    wd = weight_decomposition(spec)
    return maximal_conic_subsets(enumerate_conic_subsets(wd.weights))


def _flag_basis(spec: LieAlgebraSpec, order):
    """Weight-graded basis adapted to the lower central series.

    Ordered so every tail spans an ideal; within a central level, vectors are
    sorted by the first conic subset containing their weight, which is what
    makes the emitted factor sequence follow the requested order.
    """
    wd = weight_decomposition(spec)
    weights_used = {w for w, b in wd.spaces if b}
    uncovered = [
        w for w in weights_used if not any(c.contains(w) for c in order)
    ]
    if uncovered:
        raise MalcevCoverageError(sorted(uncovered))

    def conic_index(w):
        for idx, c in enumerate(order):
            if c.contains(w):
                return idx
        raise AssertionError

    series = lower_central_series(spec)
    levels = [lvl for lvl in series if lvl]
    levels.append(())
    flag = []
    for depth in range(len(levels) - 1):
        gi, gnext = levels[depth], levels[depth + 1]
        chosen = la.span_basis(gnext)
        for w, basis in sorted(
            wd.spaces, key=lambda p: (conic_index(p[0]), p[0])
        ):
            block = la.intersect_spans(gi, basis)
            for v in block:
                if not la.in_span(chosen, v):
                    flag.append((v, w, conic_index(w)))
                    chosen = la.span_basis(tuple(chosen) + (v,))
    assert len(flag) == spec.dim
    return flag


@dataclass(frozen=True)
class MalcevFactor:
    element: GroupElement
    conic_index: int
    tag: str


def malcev_decompose(
    u: GroupElement, spec: LieAlgebraSpec, order=None
) -> list[MalcevFactor]:
    """Factor a unipotent element into ordered conic-subgroup pieces, exactly.

    Peels one flag coordinate at a time along a weight-graded refinement of
    the lower central series and merges consecutive factors that land in the
    same conic subgroup.  The product of the factors reproduces u exactly
    (asserted), and every factor log lies in its conic subalgebra.
    """
    if not u.in_unipotent:
        raise ValueError("factorization expects a unipotent element")
    if order is None:
        order = default_conic_order(spec)
    order = tuple(order)
    flag = _flag_basis(spec, order)
    x = u.u
    raw: list[tuple[Vec, int]] = []
    for j, (bvec, _w, cidx) in enumerate(flag):
        coords = la.coords_in_span([f[0] for f in flag], x)
        c = coords[j]
        raw.append((la.scale_vec(c, bvec), cidx))
        x = bch_multiply(la.scale_vec(-c, bvec), x, spec)
    assert la.is_zero_vec(x)
    merged: list[MalcevFactor] = []
    for piece, cidx in raw:
        if merged and merged[-1].conic_index == cidx:
            prev = merged[-1]
            combined = bch_multiply(prev.element.u, piece, spec)
            merged[-1] = MalcevFactor(
                element=u_element(spec, combined),
                conic_index=cidx,
                tag=prev.tag,
            )
        else:
            merged.append(
                MalcevFactor(
                    element=u_element(spec, piece),
                    conic_index=cidx,
                    tag="C" + order[cidx].key(),
                )
            )
    merged = [f for f in merged if not f.element.is_identity]
    check = identity_element(spec)
    for f in merged:
        check = group_mul(check, f.element, spec)
    assert check == u, "factor product does not reproduce the element"
    wd = weight_decomposition(spec)
    for f in merged:
        cols = []
        for w, basis in wd.spaces:
            if order[f.conic_index].contains(w):
                cols.extend(basis)
        assert la.in_span(cols, f.element.u)
    return merged


# ---------------------------------------------------------------------------
# the normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormPlan:
    """Either a single contraction (tame case) or per-conic contractions."""

    spec: LieAlgebraSpec
    order: tuple[ConicSubset, ...]
    contractions: tuple[ContractionData, ...]
    a_radius: Fraction = Fraction(1)

    @property
    def tame(self) -> bool:
        return len(self.contractions) == 1 and self.contractions[0].subspace is None

    def contraction_for(self, conic_index: int) -> ContractionData:
        return self.contractions[conic_index]


def tame_plan(spec: LieAlgebraSpec, radius=Fraction(1)) -> NormalFormPlan:
    wd = weight_decomposition(spec)
    a0 = tame_witness(wd.weights)
    if a0 is None:
        raise ValueError("group is not tame; no all-negative direction exists")
    cd = contraction_data(spec, a0, radius=radius)
    return NormalFormPlan(
        spec=spec, order=(), contractions=(cd,), a_radius=max(la.norm_inf(cd.a), Fraction(1))
    )


def general_plan(spec: LieAlgebraSpec, radius=Fraction(1)) -> NormalFormPlan:
    order = default_conic_order(spec)
    cds = []
    for c in order:
        a0 = tame_witness(c.members)
        assert a0 is not None, "a conic subset always has a negative direction"
        cds.append(contraction_data(spec, a0, radius=radius, conic=c))
    a_rad = max(
        [Fraction(1)] + [la.norm_inf(cd.a) for cd in cds]
    )
    return NormalFormPlan(
        spec=spec, order=order, contractions=tuple(cds), a_radius=a_rad
    )


def make_plan(spec: LieAlgebraSpec, radius=Fraction(1)) -> NormalFormPlan:
    wd = weight_decomposition(spec)
    if tame_witness(wd.weights) is not None:
        return tame_plan(spec, radius)
    return general_plan(spec, radius)


def omega(g: GroupElement, spec: LieAlgebraSpec, plan: NormalFormPlan) -> Word:
    """Normal form: a box word for the abelian part, then unipotent factors.

    Tame groups use the single contraction; otherwise the unipotent part is
    factored into conic pieces and each piece gets its own normal form.
    """
    if g.is_identity:
        return EMPTY_WORD
    head = boxword_a(spec, g.a, plan.a_radius)
    u = u_element(spec, g.u)
    if u.is_identity:
        return head
    if plan.tame:
        return head + tame_normal_form(u, plan.contractions[0])
    tail = EMPTY_WORD
    for f in malcev_decompose(u, spec, plan.order):
        tail = tail + tame_normal_form(f.element, plan.contraction_for(f.conic_index))
    return head + tail


# ---------------------------------------------------------------------------
# free-product reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    prefix: Word
    block: Word
    suffix: Word
    tag: str


@dataclass(frozen=True)
class FreeReduction:
    trace: tuple[ReductionStep, ...]
    residue: Word
    trivial: bool

    def replay(self) -> bool:
        """Deleting each block reproduces the next triple verbatim."""
        for j in range(len(self.trace) - 1):
            cur, nxt = self.trace[j], self.trace[j + 1]
            after = cur.prefix.letters + cur.suffix.letters
            recon = nxt.prefix.letters + nxt.block.letters + nxt.suffix.letters
            if after != recon:
                return False
        if self.trivial:
            last = self.trace[-1]
            return not (last.prefix.letters or last.block.letters or last.suffix.letters)
        return True


def _maximal_runs(letters):
    runs = []
    start = 0
    for i in range(1, len(letters) + 1):
        if i == len(letters) or letters[i].factor != letters[start].factor:
            runs.append((start, i))
            start = i
    return runs


def free_reduce(w: Word, spec: LieAlgebraSpec) -> FreeReduction:
    """Reduce a free-product word by deleting trivial maximal one-factor blocks.

    Every letter must carry its factor tag.  Terminates with the empty word
    exactly when the word is trivial in the free product; otherwise the
    irreducible residue is returned (not an error).
    """
    for letter in w.letters:
        if letter.factor == A_FACTOR:
            raise MembershipError(
                "free-product letters must be tagged with their factor copy"
            )
    letters = list(w.letters)
    trace: list[ReductionStep] = []
    for _ in range(len(w) + 1):
        if not letters:
            trace.append(ReductionStep(EMPTY_WORD, EMPTY_WORD, EMPTY_WORD, ""))
            return FreeReduction(tuple(trace), EMPTY_WORD, True)
        deleted = False
        for (s, e) in _maximal_runs(letters):
            block = letters[s:e]
            val = identity_element(spec)
            for letter in block:
                val = group_mul(val, letter.element, spec)
            if val.is_identity:
                trace.append(
                    ReductionStep(
                        prefix=Word(tuple(letters[:s])),
                        block=Word(tuple(block)),
                        suffix=Word(tuple(letters[e:])),
                        tag=block[0].factor,
                    )
                )
                letters = letters[:s] + letters[e:]
                deleted = True
                break
        if not deleted:
            return FreeReduction(tuple(trace), Word(tuple(letters)), False)
    raise AssertionError("reduction exceeded the length bound")
