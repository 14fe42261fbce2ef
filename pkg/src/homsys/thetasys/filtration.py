"""Filtration certificates: verification, search, reordering and grouping.

A step ``M_{i-1} -> M_i -> Theta(k)^s -> M_{i-1}[1]`` is stored rotated, as
the morphism ``psi: M_i -> Theta(k)^s`` together with the certificate that
its cone is ``M_{i-1}[1]``.  Indices are positions in the normalized order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..exactfield import QQ, Matrix, solve
from ..derivedcat import (
    ConsistencyError,
    DbMorphism,
    DbObject,
    TriangleCert,
    compose,
    cone_full,
    from_coordinates,
    hom_db,
    hom_space,
    triangle_verify,
    vstack,
)
from .system import ThetaSystem


class MultiplicityError(ValueError):
    """The multiplicity system has no admissible solution."""


@dataclass
class FiltrationStep:
    prev: DbObject
    cur: DbObject
    index: int
    mult: int
    psi: DbMorphism
    tri: TriangleCert

    def iota(self, seed: int = 0) -> DbMorphism:
        """The map M_{i-1} -> M_i of the step."""
        c = cone_full(self.psi, seed)
        if c.obj != self.prev.shift(1):
            raise ConsistencyError("step cone does not match the previous object")
        return c.h.shift(-1)


@dataclass
class FiltrationCertificate:
    target: DbObject
    steps: list = field(default_factory=list)

    def indices(self) -> list:
        return [s.index for s in self.steps]

    def counts(self, t: int) -> list:
        out = [0] * t
        for s in self.steps:
            out[s.index - 1] += s.mult
        return out

    @property
    def length(self) -> int:
        return sum(s.mult for s in self.steps)

    def support(self) -> set:
        return {s.index for s in self.steps if s.mult > 0}

    @property
    def min(self):
        return min(self.support()) if self.steps else math.inf

    @property
    def max(self):
        return max(self.support()) if self.steps else -math.inf

    def is_ordered(self) -> bool:
        ks = self.indices()
        return all(a >= b for a, b in zip(ks, ks[1:]))

    def is_grouped(self) -> bool:
        ks = self.indices()
        return all(a > b for a, b in zip(ks, ks[1:]))

    def digests(self) -> list:
        return [s.tri.digest() for s in self.steps]


def make_step(cur: DbObject, psi: DbMorphism, index: int, mult: int, seed: int = 0) -> FiltrationStep:
    c = cone_full(psi, seed)
    prev = c.obj.shift(-1)
    return FiltrationStep(prev, cur, index, mult, psi, TriangleCert(psi, c.obj))


def filtration_verify(M: DbObject, cert: FiltrationCertificate, allowed, S: ThetaSystem,
                      probes: Sequence[DbObject] | None = None, seed: int = 0) -> bool:
    """Chain invariants, allowed factor indices and every step triangle."""
    return filtration_diagnose(M, cert, allowed, S, probes, seed) == ""


def filtration_diagnose(M, cert, allowed, S, probes=None, seed=0) -> str:
    n = S.normalized()
    allowed = set(allowed)
    if cert.target != M:
        return "certificate is for a different object"
    if not cert.steps:
        return "" if M.is_zero() else "empty certificate for a nonzero object"
    if not cert.steps[0].prev.is_zero():
        return "chain does not start at 0"
    if cert.steps[-1].cur != M:
        return "chain does not end at the object"
    for a, b in zip(cert.steps, cert.steps[1:]):
        if a.cur != b.prev:
            return "chain is broken"
    probes = list(probes) if probes is not None else list(n.theta)
    for k, st in enumerate(cert.steps):
        if st.index not in allowed:
            return f"step {k}: factor index {st.index} not allowed"
        if st.psi.source != st.cur or st.psi.target != n.theta[st.index - 1].power(st.mult):
            return f"step {k}: morphism has the wrong ends"
        if st.tri.f is not st.psi and st.tri.f != st.psi:
            return f"step {k}: triangle is not built on the step morphism"
        if st.tri.C != st.prev.shift(1):
            return f"step {k}: triangle third object is not the previous term"
        res = triangle_verify(st.tri, probes, seed)
        if not res:
            return f"step {k}: {res.reason}"
    return ""


# multiplicities ------------------------------------------------------------

def multiplicity_matrix(Q: Sequence, S: ThetaSystem, idx: Sequence[int]) -> list:
    n = S.normalized()
    return [[hom_db(Q[i - 1], n.theta[j - 1], 0) for j in idx] for i in idx]


def multiplicities(M: DbObject, Q: Sequence, S: ThetaSystem, cert: FiltrationCertificate | None = None,
                   indices: Sequence[int] | None = None) -> list:
    """Solve D X = C with d_ij = dim Hom(Q(i), Theta(j)), c_i = dim Hom(Q(i), M).

    ``Q`` is indexed by normalized position (entries may be ``None`` outside
    ``indices``).  Returns a full-length vector with zeros off ``indices``.
    """
    n = S.normalized()
    t = n.t
    idx = list(indices) if indices is not None else [i for i in range(1, t + 1) if Q[i - 1] is not None]
    out = [0] * t
    if not idx:
        if not M.is_zero():
            raise MultiplicityError("no relative projectives available for a nonzero object")
        return out
    D = multiplicity_matrix(Q, S, idx)
    C = [hom_db(Q[i - 1], M, 0) for i in idx]
    A = Matrix(QQ, len(idx), len(idx), D)
    if A.rank() < len(idx):
        raise MultiplicityError("singular multiplicity matrix")
    X = solve(A, C)
    for i, x in zip(idx, X):
        if Fraction(x).denominator != 1:
            raise MultiplicityError(f"non-integral solution {x} at index {i}")
        if x < 0:
            raise MultiplicityError(f"negative solution {x} at index {i}")
        out[i - 1] = int(x)
    if cert is not None and cert.counts(t) != out:
        raise MultiplicityError(f"certificate tallies {cert.counts(t)} differ from solver {out}")
    return out


# certificate search ---------------------------------------------------------

def certify(M: DbObject, Q: Sequence, S: ThetaSystem, seed: int = 0, tries: int = 6,
            indices: Sequence[int] | None = None) -> FiltrationCertificate:
    """Ordered certificate for M, guided by the multiplicity solver.

    The top factor is Theta(k) for the least index k with positive
    multiplicity; a random morphism M -> Theta(k) is split off and the
    remaining cocone is certified recursively.  Raises MultiplicityError when
    M is rejected by the solver and ConsistencyError when the bounded search
    fails.
    """
    n = S.normalized()
    X = multiplicities(M, Q, S, indices=indices)
    if not M.is_zero() and not any(X):
        raise MultiplicityError("zero solution for a nonzero object")
    rng = random.Random(seed)
    steps = _certify_rec(M, X, Q, n, rng, tries, indices)
    return FiltrationCertificate(M, steps)


def _certify_rec(M, X, Q, n, rng, tries, indices):
    if M.is_zero():
        if any(X):
            raise ConsistencyError("zero object with positive multiplicities")
        return []
    if not any(X):
        raise ConsistencyError("nonzero object with zero multiplicities")
    k = min(i + 1 for i, x in enumerate(X) if x > 0)
    theta = n.theta[k - 1]
    basis = hom_space(M, theta)
    if not basis:
        raise ConsistencyError(f"no morphism to Theta({k}) to split off")
    F = M.field
    want = list(X)
    want[k - 1] -= 1
    for attempt in range(tries):
        coeffs = [F.random(rng, 5) for _ in basis]
        if attempt == 0 and len(basis) == 1:
            coeffs = [F.one]
        psi = from_coordinates(M, theta, coeffs)
        if psi.is_zero():
            continue
        step = make_step(M, psi, k, 1, rng.randrange(1 << 30))
        N = step.prev
        try:
            got = multiplicities(N, Q, ThetaSystem(n.theta), indices=indices)
        except Exception:
            continue
        if got != want:
            continue
        try:
            lower = _certify_rec(N, want, Q, n, rng, tries, indices)
        except ConsistencyError:
            continue
        return lower + [step]
    raise ConsistencyError(f"certificate search failed on {M.describe()}")


# lifting helpers ------------------------------------------------------------

def lift_through(psi: DbMorphism, iota: DbMorphism):
    """Some x: X -> T with x o iota = psi for iota: Y -> X, psi: Y -> T (or None)."""
    X, T = iota.target, psi.target
    basis = hom_space(X, T)
    target = psi.coordinates()
    if not basis:
        return DbMorphism.zero(X, T) if all(c == 0 for c in target) else None
    cols = [compose(b, iota).coordinates() for b in basis]
    if not target:
        return DbMorphism.zero(X, T)
    A = Matrix.from_columns(psi.source.field, len(target), cols)
    x = solve(A, target)
    if x is None:
        return None
    return from_coordinates(X, T, x)


def factor_map(alpha: DbMorphism, eps: DbMorphism):
    """Some u with eps o u = alpha, for alpha: W -> M and eps: Q -> M (or None)."""
    W, Q = alpha.source, eps.source
    basis = hom_space(W, Q)
    target = alpha.coordinates()
    if not target:
        return DbMorphism.zero(W, Q)
    if not basis:
        return DbMorphism.zero(W, Q) if all(c == 0 for c in target) else None
    cols = [compose(eps, b).coordinates() for b in basis]
    A = Matrix.from_columns(alpha.source.field, len(target), cols)
    x = solve(A, target)
    return None if x is None else from_coordinates(W, Q, x)


# reordering (exchange) ---------------------------------------------------------

def exchange(lower: FiltrationStep, upper: FiltrationStep, S: ThetaSystem, seed: int = 0):
    """Swap two adjacent steps Z -> Y -> theta1 and Y -> X -> theta2.

    Needs Hom(theta2, theta1[1]) = 0.  Returns the steps Z -> W -> theta2 and
    W -> X -> theta1.
    """
    n = S.normalized()
    t1, t2 = n.theta[lower.index - 1], n.theta[upper.index - 1]
    if hom_db(t2, t1, 1):
        raise ConsistencyError("exchange needs Hom(theta2, theta1[1]) = 0")
    iota_Y = upper.iota(seed)  # Y -> X
    psi1 = lift_through(lower.psi, iota_Y)  # X -> theta1^s
    if psi1 is None:
        raise ConsistencyError("restriction to Y is not surjective")
    c = cone_full(psi1, seed)
    W = c.obj.shift(-1)
    iota_W = c.h.shift(-1)  # W -> X
    psi2 = compose(upper.psi, iota_W)  # W -> theta2^s
    new_lower = make_step(W, psi2, upper.index, upper.mult, seed)
    if new_lower.prev != lower.prev:
        raise ConsistencyError(
            f"exchange produced {new_lower.prev.describe()} instead of {lower.prev.describe()}")
    new_upper = FiltrationStep(W, upper.cur, lower.index, lower.mult, psi1, TriangleCert(psi1, c.obj))
    return new_lower, new_upper


def reorder_filtration(cert: FiltrationCertificate, S: ThetaSystem, seed: int = 0) -> FiltrationCertificate:
    """Bubble adjacent out-of-order steps until indices decrease along the chain."""
    steps = list(cert.steps)
    changed = True
    while changed:
        changed = False
        for k in range(len(steps) - 1):
            if steps[k].index < steps[k + 1].index:
                steps[k], steps[k + 1] = exchange(steps[k], steps[k + 1], S, seed)
                changed = True
    return FiltrationCertificate(cert.target, steps)


# grouping -------------------------------------------------------------------

def group_filtration(cert: FiltrationCertificate, S: ThetaSystem, seed: int = 0) -> FiltrationCertificate:
    """Merge runs of equal factor index into single steps Theta(k)^s."""
    if not cert.is_ordered():
        raise ValueError("grouping needs an ordered certificate")
    n = S.normalized()
    out = []
    steps = cert.steps
    a = 0
    while a < len(steps):
        b = a
        while b + 1 < len(steps) and steps[b + 1].index == steps[a].index:
            b += 1
        if a == b:
            out.append(steps[a])
        else:
            out.append(_merge_run(steps[a:b + 1], n, seed))
        a = b + 1
    return FiltrationCertificate(cert.target, out)


def _merge_run(run: list, n: ThetaSystem, seed: int) -> FiltrationStep:
    top = run[-1]
    M = top.cur
    parts = [top.psi]
    # iota chain from each earlier M_j up to M
    into_top = DbMorphism.identity(M)
    for st in reversed(run[1:]):
        into_top = compose(into_top, st.iota(seed))  # st.prev -> M
        lower = run[run.index(st) - 1]
        lifted = lift_through(lower.psi, into_top)
        if lifted is None:
            raise ConsistencyError("grouping lift failed")
        parts.append(lifted)
    stacked, _ = vstack(M, parts)
    total = sum(st.mult for st in run)
    theta = n.theta[top.index - 1]
    if stacked.target != theta.power(total):
        raise ConsistencyError("stacked target is not a power of the factor")
    step = make_step(M, stacked, top.index, total, seed)
    if step.prev != run[0].prev:
        raise ConsistencyError(f"grouped step cocone {step.prev.describe()} != {run[0].prev.describe()}")
    return step


# extension closure ------------------------------------------------------------

def glue(lower: FiltrationCertificate, upper: FiltrationCertificate, psi: DbMorphism, S: ThetaSystem,
         seed: int = 0) -> FiltrationCertificate:
    """Certificate for E given psi: E -> U with cocone L, lower for L, upper for U.

    Each step of ``upper`` is pulled back along psi, so the chain runs through
    L first and then the preimages of the filtration of U.
    """
    E = psi.source
    c = cone_full(psi, seed)
    if c.obj != lower.target.shift(1):
        raise ConsistencyError("cocone of psi is not the lower object")
    steps = list(lower.steps)
    # walk U's chain from the top: U_m = U, U_{m-1}, ...; pulled back objects E_j with E_j -> U_j
    cur_E, cur_map = E, psi
    pulled = []
    for st in reversed(upper.steps):
        comp = compose(st.psi, cur_map)  # E_j -> theta^s
        step = make_step(cur_E, comp, st.index, st.mult, seed)
        pulled.append(step)
        # next: E_{j-1} = cocone(comp), with map to U_{j-1}
        iota_E = step.iota(seed)  # E_{j-1} -> E_j
        restricted = compose(cur_map, iota_E)  # E_{j-1} -> U_j
        iota_U = st.iota(seed)  # U_{j-1} -> U_j
        down = factor_map(restricted, iota_U)
        if down is None:
            raise ConsistencyError("pulled-back map does not descend")
        cur_E, cur_map = step.prev, down
    if cur_E != lower.target:
        raise ConsistencyError("gluing did not reach the lower object")
    return FiltrationCertificate(E, steps + list(reversed(pulled)))


def random_filtered(S: ThetaSystem, rng: random.Random, length: int, seed: int = 0,
                    indices: Sequence[int] | None = None) -> FiltrationCertificate:
    """Random object of F(Theta) with a certificate of the given length.

    Each step picks a factor index (random, or the next entry of ``indices``
    listed from the bottom of the chain) and a random class Theta(k) -> M[1];
    the new object is the cone of Theta(k)[-1] -> M.
    """
    n = S.normalized()
    q = n.theta[0].quiver
    F = q.field
    M = DbObject.zero(q)
    steps = []
    if indices is not None:
        length = len(indices)
    for step_no in range(length):
        k = indices[step_no] if indices is not None else rng.randint(1, n.t)
        theta = n.theta[k - 1]
        basis = hom_space(theta.shift(-1), M)
        coeffs = [F.random(rng, 4) for _ in basis]
        u = from_coordinates(theta.shift(-1), M, coeffs)
        c = cone_full(u, seed)
        psi = c.h  # new M -> theta
        step = make_step(c.obj, psi, k, 1, seed)
        if step.prev != M:
            raise ConsistencyError("random extension step is inconsistent")
        steps.append(step)
        M = c.obj
    return FiltrationCertificate(M, steps)
