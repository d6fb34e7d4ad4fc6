"""The verdict layer: decide which sufficient condition applies and say why.

Four outcomes, in precedence order:

* ``NotL1C-Sol``   -- the abelianization carries two opposite colinear
  weights; an explicit rank-one quotient with exponential filling area is
  constructed as the witness, so the negative verdict is machine checkable.
* ``L1C-Tame``     -- some direction of the abelian factor contracts
  everything; the witness is that direction.
* ``L1C-Theorem``  -- standard solvable, both homological obstructions
  vanish, and no opposite pair exists.
* ``Inconclusive`` -- none of the sufficient conditions fired; the failing
  checks are listed.  The criteria are sufficient, not necessary, so this is
  an honest fourth state rather than a negative answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .homology import ZeroParts, boundary_d2, make_quotient, zero_parts
from .lie import LieAlgebraSpec, require_valid, validate
from .linalg import Mat, Vec
from .weights import (
    AModule,
    UnsupportedActionError,
    module_weights,
    tameness_certificate,
    weight_decomposition,
    zero_component,
)

NOT_L1C_SOL = "NotL1C-Sol"
L1C_TAME = "L1C-Tame"
L1C_THEOREM = "L1C-Theorem"
INCONCLUSIVE = "Inconclusive"


def abelianization_module(spec: LieAlgebraSpec) -> tuple[AModule, "QuotientData"]:
    """u/[u,u] with the induced action, as a quotient of the ambient algebra."""
    n = spec.dim
    derived = la.column_space_basis(boundary_d2(spec)) if n else ()
    kernel = tuple(la.basis_vec(n, i) for i in range(n))
    q = make_quotient(kernel, derived, spec.derivations, n, spec.labels)
    return q.module(), q


def principal_weights(spec: LieAlgebraSpec):
    """Weight multiset of the abelianization (the weights that survive killing brackets)."""
    module, _ = abelianization_module(spec)
    return module_weights(module)


def standard_solvable(spec: LieAlgebraSpec) -> tuple[bool, tuple]:
    """True iff the zero component of the abelianization vanishes."""
    module, _ = abelianization_module(spec)
    zc = zero_component(module)
    return (len(zc) == 0, module_weights(module))


@dataclass(frozen=True)
class SolWitness:
    """An opposite colinear pair of principal weights plus the explicit quotient.

    ``projection`` maps the algebra onto a 2-dimensional abelian quotient on
    which the action has exactly the two weights, i.e. a rank-one extension
    of the plane by opposite dilations.
    """

    alpha: Vec
    beta: Vec
    projection: Mat
    quotient: LieAlgebraSpec

    def verify(self, spec: LieAlgebraSpec) -> bool:
        p = self.projection
        if la.rank(p) != 2:
            return False
        n = spec.dim
        # brackets die in the quotient
        for i in range(n):
            for j in range(n):
                if not la.is_zero_vec(la.mat_vec(p, spec.bracket(i, j))):
                    return False
        # equivariance: P D = D_bar P for each derivation
        for d, dq in zip(spec.derivations, self.quotient.derivations):
            if la.matmul(p, d) != la.matmul(dq, p):
                return False
        if not validate(self.quotient).ok:
            return False
        if module_weights(
            AModule(dim=2, actions=self.quotient.derivations, labels=("q1", "q2"))
        ) != tuple(sorted((self.alpha, self.beta))):
            return False
        return _opposite_pair(self.alpha, self.beta)


def _opposite_pair(alpha, beta) -> bool:
    """0 lies in the open segment (alpha, beta): beta = mu*alpha with mu < 0."""
    alpha, beta = la.vec(alpha), la.vec(beta)
    if la.is_zero_vec(alpha) or la.is_zero_vec(beta):
        return False
    mu = None
    for x, y in zip(alpha, beta):
        if x == 0 and y == 0:
            continue
        if x == 0 or y == 0:
            return False
        r = y / x
        if mu is None:
            mu = r
        elif mu != r:
            return False
    return mu is not None and mu < 0


def _invariant_codim_one(spec, wd, block_weight, ambient_kernel):
    """Extend the kernel so the block contributes one dimension, invariantly.

    Adds the images of the nilpotent parts inside the block, then all but the
    first block vector that is still independent.  Anything containing the
    nilpotent images is invariant, so the choice is safe and deterministic.
    """
    extra = list(ambient_kernel)
    block = wd.space(block_weight)
    for nm in wd.nilpotent:
        for v in block:
            img = la.mat_vec(nm, v)
            if not la.is_zero_vec(img):
                extra.append(img)
    span = la.span_basis(extra)
    kept = None
    for v in block:
        if not la.in_span(span, v):
            if kept is None:
                kept = v
            else:
                span = la.span_basis(tuple(span) + (v,))
    if kept is None:
        raise AssertionError("weight block already inside the kernel")
    return span, kept


def sol_obstruction(spec: LieAlgebraSpec):
    """The first opposite colinear pair of principal weights, with its quotient."""
    module, qdata = abelianization_module(spec)
    pweights = sorted(set(module_weights(module)))
    found = None
    for i, alpha in enumerate(pweights):
        for beta in pweights[i + 1:]:
            if _opposite_pair(alpha, beta):
                found = (alpha, beta)
                break
        if found:
            break
    if not found:
        return None
    alpha, beta = found
    wd = weight_decomposition(spec)
    n = spec.dim
    derived = la.column_space_basis(boundary_d2(spec)) if n else ()
    kernel = list(derived)
    for w, basis in wd.spaces:
        if w != alpha and w != beta:
            kernel.extend(basis)
    kernel, rep_a = _invariant_codim_one(spec, wd, alpha, la.span_basis(kernel))
    kernel, rep_b = _invariant_codim_one(spec, wd, beta, kernel)
    # projection: coordinates along rep_a, rep_b in the basis kernel + reps
    full = tuple(kernel) + (rep_a, rep_b)
    t = la.from_columns(full)
    tinv = la.inv(t)
    assert tinv is not None
    p = la.mat([tinv[len(kernel)], tinv[len(kernel) + 1]])
    quotient = LieAlgebraSpec(
        dim=2,
        labels=("q1", "q2"),
        brackets=((la.zeros_vec(2), la.zeros_vec(2)),) * 2,
        derivations=tuple(
            la.mat([[alpha[m], 0], [0, beta[m]]]) for m in range(spec.a_dim)
        ),
    )
    w = SolWitness(alpha=alpha, beta=beta, projection=p, quotient=quotient)
    assert w.verify(spec)
    return w


@dataclass(frozen=True)
class Certificate:
    verdict: str
    checks: dict = field(default_factory=dict)
    sol_witness: SolWitness | None = None
    tame_vector: Vec | None = None
    failures: tuple[str, ...] = ()

    def payload(self) -> dict:
        """Serialization-friendly summary; exact values as strings."""
        out = {"verdict": self.verdict, "checks": {}}
        for k, v in self.checks.items():
            out["checks"][k] = v
        if self.sol_witness is not None:
            out["sol_pair"] = [
                [str(c) for c in self.sol_witness.alpha],
                [str(c) for c in self.sol_witness.beta],
            ]
            out["sol_projection"] = [
                [str(c) for c in row] for row in self.sol_witness.projection
            ]
        if self.tame_vector is not None:
            out["tame_vector"] = [str(c) for c in self.tame_vector]
        if self.failures:
            out["failures"] = list(self.failures)
        return out


def certify(spec: LieAlgebraSpec, *, sol_branch: bool = True) -> Certificate:
    """Run the checks in precedence order and package a replayable verdict."""
    require_valid(spec)
    try:
        wd = weight_decomposition(spec)
    except UnsupportedActionError as e:
        return Certificate(
            verdict=INCONCLUSIVE,
            checks={"unsupported_action": str(e)},
            failures=("unsupported-action",),
        )
    ss, pweights = standard_solvable(spec)
    checks: dict = {
        "standard_solvable": ss,
        "principal_weights": [[str(c) for c in w] for w in pweights],
    }
    sol = sol_obstruction(spec) if ss else None
    if sol is not None and sol_branch:
        checks["sol_pair_found"] = True
        return Certificate(verdict=NOT_L1C_SOL, checks=checks, sol_witness=sol)
    tame = tameness_certificate(wd.weight_multiset())
    if tame.tame:
        checks["tame"] = True
        return Certificate(verdict=L1C_TAME, checks=checks, tame_vector=tame.witness)
    zp = zero_parts(spec)
    checks["h2_dim"] = zp.h2_dim
    checks["h2_zero_dim"] = zp.h2_zero_dim
    checks["kill_dim"] = zp.kill_dim
    checks["kill_zero_dim"] = zp.kill_zero_dim
    checks["sol_pair_found"] = sol is not None
    failures = []
    if not ss:
        failures.append("not-standard-solvable")
    if zp.h2_zero_dim != 0:
        failures.append(f"h2-zero-dim={zp.h2_zero_dim}")
    if zp.kill_zero_dim != 0:
        failures.append(f"kill-zero-dim={zp.kill_zero_dim}")
    if sol is not None:
        failures.append("sol-pair-present")
    if not failures:
        return Certificate(verdict=L1C_THEOREM, checks=checks)
    return Certificate(
        verdict=INCONCLUSIVE,
        checks=checks,
        failures=tuple(failures),
        sol_witness=sol,
    )


def verify_certificate(spec: LieAlgebraSpec, cert: Certificate) -> bool:
    """Replay the checks a certificate names; True iff everything reproduces."""
    if cert.verdict == NOT_L1C_SOL:
        return cert.sol_witness is not None and cert.sol_witness.verify(spec)
    if cert.verdict == L1C_TAME:
        if cert.tame_vector is None:
            return False
        wd = weight_decomposition(spec)
        return all(la.dot(w, cert.tame_vector) < 0 for w in wd.weights)
    if cert.verdict == L1C_THEOREM:
        ss, _ = standard_solvable(spec)
        zp = zero_parts(spec)
        return (
            ss
            and zp.h2_zero_dim == 0
            and zp.kill_zero_dim == 0
            and sol_obstruction(spec) is None
        )
    if cert.verdict == INCONCLUSIVE:
        fresh = certify(spec, sol_branch=False)
        return set(fresh.failures) >= set(
            f for f in cert.failures if f != "sol-pair-present"
        )
    return False
