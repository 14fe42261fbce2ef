"""Endomorphism algebras of relative projectives, standard modules and stratification checks.

Left A-modules for A = End(Q)^op are the spaces Hom(Q, M) with A acting by
precomposition.  An algebra element is a coordinate vector in the basis of
the Hom blocks Hom(Q(i), Q(j)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .derivedcat import DbMorphism, DbObject, compose, hom_db, hom_space
from .exactfield import (
    Matrix,
    complement_basis,
    independent_subset,
    is_irreducible,
    kernel_basis,
    min_poly,
    solve,
)
from .report import Report


class AlgebraError(RuntimeError):
    """Structure constants violate an algebra axiom."""


# based algebras -------------------------------------------------------------

@dataclass
class BasedAlgebra:
    """Finite-dimensional algebra given by structure constants.

    ``labels[a] = (i, j, k)`` tags basis element a as the k-th basis morphism
    of Hom(Q(i), Q(j)); ``mult[a][b]`` is the coordinate vector of a*b.
    With ``op`` set, a*b is the composite "first a, then b".
    """

    field: object
    labels: list
    mult: list
    unit: tuple
    idempotents: list
    op: bool = True
    morphisms: list = field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def zero(self) -> tuple:
        return tuple([self.field.zero] * self.dim)

    def basis_vector(self, a: int) -> tuple:
        F = self.field
        return tuple(F.one if b == a else F.zero for b in range(self.dim))

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        F = self.field
        out = [F.zero] * self.dim
        for a, xa in enumerate(x):
            if xa == 0:
                continue
            for b, yb in enumerate(y):
                if yb == 0:
                    continue
                c = xa * yb
                for e, v in enumerate(self.mult[a][b]):
                    if v != 0:
                        out[e] += c * v
        return tuple(F.reduce(v) for v in out)

    def left_matrix(self, x: Sequence) -> Matrix:
        """Matrix of y -> x*y."""
        return Matrix.from_columns(self.field, self.dim, [self.mul(x, self.basis_vector(b)) for b in range(self.dim)])

    def check(self) -> str:
        """Empty string when associativity, unit and idempotent laws hold on the basis."""
        d = self.dim
        basis = [self.basis_vector(a) for a in range(d)]
        for a in range(d):
            if self.mul(self.unit, basis[a]) != basis[a] or self.mul(basis[a], self.unit) != basis[a]:
                return f"unit law fails on basis element {a}"
        for a in range(d):
            for b in range(d):
                ab = self.mult[a][b]
                if not any(ab):
                    continue
                for c in range(d):
                    if self.mul(ab, basis[c]) != self.mul(basis[a], self.mult[b][c]):
                        return f"associativity fails on ({a}, {b}, {c})"
        es = self.idempotents
        for i, e in enumerate(es):
            for j, f in enumerate(es):
                want = e if i == j else self.zero()
                if self.mul(e, f) != want:
                    return f"idempotents {i + 1}, {j + 1} are not orthogonal idempotents"
        total = self.zero()
        for e in es:
            total = tuple(self.field.reduce(u + v) for u, v in zip(total, e))
        if total != tuple(self.unit):
            return "idempotents do not sum to the unit"
        return ""

    def block_dims(self) -> dict:
        out = {}
        for i, j, _ in self.labels:
            out[(i, j)] = out.get((i, j), 0) + 1
        return out


def endo_algebra(Q: Sequence[DbObject], op: bool = True, verify: bool = True) -> BasedAlgebra:
    """End(Q(1) + ... + Q(t)), reversed when ``op`` is set.

    ``Q`` may also be projective-system data, whose Q list is used.
    """
    if hasattr(Q, "Q"):
        Q = Q.Q
    Q = list(Q)
    t = len(Q)
    F = Q[0].field
    labels, mors, offset = [], [], {}
    for i in range(t):
        for j in range(t):
            offset[(i, j)] = len(labels)
            for k, m in enumerate(hom_space(Q[i], Q[j])):
                labels.append((i + 1, j + 1, k))
                mors.append(m)
    d = len(labels)
    zero = [F.zero] * d

    def place(i, j, coords):
        v = list(zero)
        for k, c in enumerate(coords):
            v[offset[(i, j)] + k] = F.reduce(c)
        return tuple(v)

    mult = [[tuple(zero)] * d for _ in range(d)]
    for a, (ia, ja, _) in enumerate(labels):
        for b, (ib, jb, _) in enumerate(labels):
            if op and ja == ib:  # a: Q(ia)->Q(ja), then b: Q(ja)->Q(jb)
                mult[a][b] = place(ia - 1, jb - 1, compose(mors[b], mors[a]).coordinates())
            elif not op and jb == ia:  # b first, then a
                mult[a][b] = place(ib - 1, ja - 1, compose(mors[a], mors[b]).coordinates())
    idem = [place(i, i, DbMorphism.identity(Q[i]).coordinates()) for i in range(t)]
    unit = tuple(F.reduce(sum(e[k] for e in idem)) for k in range(d))
    A = BasedAlgebra(F, labels, mult, unit, idem, op, mors)
    if verify:
        why = A.check()
        if why:
            raise AlgebraError(why)
    return A


# modules ----------------------------------------------------------------------

@dataclass
class AModule:
    """Left module: ``act[a]`` is the matrix of basis element a (column vectors)."""

    algebra: BasedAlgebra
    dim: int
    act: list

    @property
    def field(self):
        return self.algebra.field

    def action(self, x: Sequence) -> Matrix:
        F = self.field
        out = Matrix.zeros(F, self.dim, self.dim)
        for a, c in enumerate(x):
            if c != 0:
                out = out + self.act[a].scale(c)
        return out

    def check(self) -> str:
        A = self.algebra
        if self.action(A.unit) != Matrix.identity(self.field, self.dim):
            return "unit does not act as the identity"
        for a in range(A.dim):
            for b in range(A.dim):
                if self.act[a] @ self.act[b] != self.action(A.mult[a][b]):
                    return f"action is not multiplicative on ({a}, {b})"
        return ""


def regular_module(A: BasedAlgebra) -> AModule:
    return AModule(A, A.dim, [A.left_matrix(A.basis_vector(a)) for a in range(A.dim)])


def _coords(F, basis: list, dim: int, v) -> tuple:
    x = solve(Matrix.from_columns(F, dim, basis), v)
    if x is None:
        raise ValueError("vector is not in the span")
    return x


def span_closure(M: AModule, gens: Sequence) -> list:
    """Basis of the submodule generated by ``gens`` (vectors in M)."""
    F = M.field
    basis = []

    def add(v):
        if not any(x != 0 for x in v):
            return False
        if len(independent_subset(F, M.dim, basis + [tuple(v)])) > len(basis):
            basis.append(tuple(v))
            return True
        return False

    queue = [tuple(g) for g in gens]
    while queue:
        v = queue.pop()
        if add(v):
            queue.extend(m.apply(v) for m in M.act)
    return basis


def submodule(M: AModule, basis: list) -> AModule:
    F = M.field
    k = len(basis)
    act = []
    for m in M.act:
        cols = [_coords(F, basis, M.dim, m.apply(v)) for v in basis]
        act.append(Matrix.from_columns(F, k, cols) if k else Matrix.zeros(F, 0, 0))
    return AModule(M.algebra, k, act)


def quotient(M: AModule, sub: list):
    """``(M/sub, complement basis)``; quotient coordinates are the complement part."""
    F = M.field
    comp = complement_basis(F, M.dim, sub)
    allb = list(sub) + comp
    k = len(sub)
    act = []
    for m in M.act:
        cols = [_coords(F, allb, M.dim, m.apply(v))[k:] for v in comp]
        act.append(Matrix.from_columns(F, len(comp), cols) if comp else Matrix.zeros(F, 0, 0))
    return AModule(M.algebra, len(comp), act), comp


def direct_sum_modules(mods: Sequence[AModule]) -> AModule:
    A = mods[0].algebra
    F = A.field
    n = sum(m.dim for m in mods)
    act = []
    for a in range(A.dim):
        out = Matrix.zeros(F, n, n)
        off = 0
        for m in mods:
            for r in range(m.dim):
                for c in range(m.dim):
                    out.rows[off + r][off + c] = m.act[a].rows[r][c]
            off += m.dim
        act.append(out)
    return AModule(A, n, act)


def module_hom_basis(M: AModule, N: AModule) -> list:
    """Basis of Hom_A(M, N) as N.dim x M.dim matrices."""
    F = M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    rows = []
    # unknown X[r][c] at position r*m + c; equation X Ma - Na X = 0
    for a in range(M.algebra.dim):
        Ma, Na = M.act[a], N.act[a]
        for r in range(n):
            for c in range(m):
                row = [F.zero] * (n * m)
                for k in range(m):
                    if Ma.rows[k][c] != 0:
                        row[r * m + k] += Ma.rows[k][c]
                for k in range(n):
                    if Na.rows[r][k] != 0:
                        row[k * m + c] -= Na.rows[r][k]
                rows.append([F.reduce(x) for x in row])
    sol = kernel_basis(Matrix(F, len(rows), n * m, rows))
    return [Matrix(F, n, m, [list(v[r * m:(r + 1) * m]) for r in range(n)]) for v in sol]


def module_iso(M: AModule, N: AModule, seed: int = 0, tries: int = 8):
    """An isomorphism M -> N found among random homomorphisms, or ``None``."""
    if M.dim != N.dim:
        return None
    if M.dim == 0:
        return Matrix.zeros(M.field, 0, 0)
    basis = module_hom_basis(M, N)
    if not basis:
        return None
    F = M.field
    rng = random.Random(seed)
    for attempt in range(tries):
        coeffs = [F.one] if len(basis) == 1 else [F.random(rng, 9) for _ in basis]
        X = Matrix.zeros(F, N.dim, M.dim)
        for c, B in zip(coeffs, basis):
            X = X + B.scale(c)
        if X.is_invertible():
            return X
    return None


# evaluation functor -------------------------------------------------------------

def _hom_blocks(Q, M):
    return [hom_space(q, M) for q in Q]


def eval_functor(Q, A: BasedAlgebra, M: DbObject) -> AModule:
    """Hom(Q, M) with A acting by precomposition."""
    if hasattr(Q, "Q"):
        Q = Q.Q
    F = A.field
    blocks = _hom_blocks(Q, M)
    off, n = [], 0
    for b in blocks:
        off.append(n)
        n += len(b)
    act = []
    for a, (i, j, _) in enumerate(A.labels):
        phi = A.morphisms[a]  # Q(i) -> Q(j)
        mat = Matrix.zeros(F, n, n)
        for k, f in enumerate(blocks[j - 1]):
            img = compose(f, phi).coordinates()
            for r, v in enumerate(img):
                mat.rows[off[i - 1] + r][off[j - 1] + k] = v
        act.append(mat)
    return AModule(A, n, act)


def eval_morphism(Q, f: DbMorphism) -> Matrix:
    """Matrix of Hom(Q, f): Hom(Q, M) -> Hom(Q, N)."""
    if hasattr(Q, "Q"):
        Q = Q.Q
    F = f.source.field
    src = _hom_blocks(Q, f.source)
    tgt = _hom_blocks(Q, f.target)
    m = sum(len(b) for b in src)
    n = sum(len(b) for b in tgt)
    out = Matrix.zeros(F, n, m)
    ro = co = 0
    for sb, tb in zip(src, tgt):
        for k, g in enumerate(sb):
            for r, v in enumerate(compose(f, g).coordinates()):
                out.rows[ro + r][co + k] = v
        ro += len(tb)
        co += len(sb)
    return out


# standard modules ---------------------------------------------------------------

@dataclass
class DeltaData:
    """Delta(i) = P(i) / trace of P(j), j > i, with the construction trace."""

    deltas: list
    projectives: list
    trace_dims: list
    quotient_dims: list


def projective_module(A: BasedAlgebra, i: int) -> tuple:
    """``(A e_i, basis in A)``."""
    R = regular_module(A)
    e = A.idempotents[i - 1]
    gens = [A.mul(A.basis_vector(b), e) for b in range(A.dim)]
    basis = span_closure(R, gens)
    return submodule(R, basis), basis


def a_delta(A: BasedAlgebra) -> DeltaData:
    """Standard modules for the natural order on the idempotents."""
    t = len(A.idempotents)
    R = regular_module(A)
    F = A.field
    deltas, projs, tdims, qdims = [], [], [], []
    for i in range(1, t + 1):
        P, pb = projective_module(A, i)
        ei = A.idempotents[i - 1]
        gens = []
        for j in range(i + 1, t + 1):
            ej = A.idempotents[j - 1]
            for b in range(A.dim):
                y = A.mul(A.mul(ej, A.basis_vector(b)), ei)
                if any(x != 0 for x in y):
                    gens.append(y)
        tr = span_closure(R, gens)
        tr_in_P = [_coords(F, pb, A.dim, v) for v in tr]
        D, _ = quotient(P, tr_in_P)
        deltas.append(D)
        projs.append(P)
        tdims.append(len(tr))
        qdims.append(D.dim)
    return DeltaData(deltas, projs, tdims, qdims)


def delta_matches_theta(A: BasedAlgebra, delta: DeltaData, Q, S) -> Report:
    """e_Q(Theta(i)) is isomorphic to Delta(i) for every i."""
    n = S.normalized()
    rep = Report()
    bad = None
    for i, th in enumerate(n.theta, start=1):
        E = eval_functor(Q, A, th)
        if module_iso(E, delta.deltas[i - 1], seed=i) is None and bad is None:
            bad = ([S.label(i)], [E.dim, delta.deltas[i - 1].dim])
    rep.add("e_Q(Theta) = Delta", bad is None, witness=bad[0] if bad else None, dims=bad[1] if bad else None)
    return rep


@dataclass
class DeltaStep:
    index: int
    mult: int
    dims: tuple  # (dim sub, dim middle, dim factor)


def _image_sequence_ok(Q, step, seed) -> str:
    i_mat = eval_morphism(Q, step.iota(seed))
    p_mat = eval_morphism(Q, step.psi)
    a, b, c = i_mat.ncols, i_mat.nrows, p_mat.nrows
    if a and i_mat.rank() != a:
        return "image of the first map is not injective"
    if c and p_mat.rank() != c:
        return "image of the second map is not surjective"
    if a and c and not (p_mat @ i_mat).is_zero():
        return "composite of the image maps is not zero"
    if b != a + c:
        return f"dimensions {a} + {c} != {b}"
    return ""


def standardly_stratified_check(A: BasedAlgebra, delta: DeltaData, D, S, seed: int = 0):
    """Delta-filtrations of the projective A-modules, from Theta-filtrations of Q(i).

    Returns ``(Report, certificates)`` with one list of DeltaSteps per i.
    """
    from .thetasys.filtration import make_step

    n = S.normalized()
    t = n.t
    rep = Report()
    certs = []
    bad = None
    for i in range(1, t + 1):
        steps = list(D.Kcert[i - 1].steps) + [make_step(D.Q[i - 1], D.beta[i - 1], i, 1, seed)]
        out = []
        for st in steps:
            why = _image_sequence_ok(D.Q, st, seed)
            fac = eval_functor(D.Q, A, n.theta[st.index - 1].power(st.mult))
            want = direct_sum_modules([delta.deltas[st.index - 1]] * st.mult)
            if not why and module_iso(fac, want, seed) is None:
                why = f"factor is not Delta({S.label(st.index)})^{st.mult}"
            if why and bad is None:
                bad = ([S.label(i), S.label(st.index)], why)
            out.append(DeltaStep(S.label(st.index), st.mult, (eval_functor(D.Q, A, st.prev).dim, fac.dim)))
        P = eval_functor(D.Q, A, D.Q[i - 1])
        if module_iso(P, delta.projectives[i - 1], seed) is None and bad is None:
            bad = ([S.label(i)], "e_Q(Q(i)) is not the projective A e_i")
        certs.append(out)
    rep.add("proj(A) in F(Delta)", bad is None, witness=bad[0] if bad else None, detail=bad[1] if bad else "")
    return rep, certs


# division tests -------------------------------------------------------------------

def division_status(F, mats: Sequence[Matrix], seed: int = 0, tries: int = 12) -> str:
    """``division``, ``not`` or ``indeterminate`` for the algebra spanned by ``mats``."""
    d = len(mats)
    if d == 0:
        return "not"
    if d == 1:
        return "division"
    rng = random.Random(seed)
    cands = list(mats) + []
    for _ in range(tries):
        X = Matrix.zeros(F, mats[0].nrows, mats[0].ncols)
        for m in mats:
            X = X + m.scale(F.random(rng, 9))
        cands.append(X)
    for X in cands:
        if not X.is_zero() and not X.is_invertible():
            return "not"
    commutative = all(a @ b == b @ a for a in mats for b in mats)
    if commutative:
        for X in cands:
            p = min_poly(X)
            if len(p) - 1 == d and is_irreducible(F, p):
                return "division"
    return "indeterminate"


def endomorphism_matrices(M: AModule) -> list:
    return module_hom_basis(M, M)


def quasi_hereditary_check(A: BasedAlgebra, delta: DeltaData, labels=None, seed: int = 0):
    """``(statuses, Report)``: End(Delta(i)) division test per i."""
    rep = Report()
    statuses = []
    for i, D in enumerate(delta.deltas, start=1):
        st = division_status(A.field, endomorphism_matrices(D), seed)
        statuses.append(st)
        lab = labels(i) if labels else i
        rep.add(f"End(Delta({lab})) division", st == "division", witness=[lab] if st != "division" else None,
                detail=st)
    return statuses, rep


def basic_check(Q: Sequence[DbObject], labels=None) -> Report:
    """Pairwise non-isomorphism of the Q(i)."""
    if hasattr(Q, "Q"):
        Q = Q.Q
    rep = Report()
    bad = None
    for i in range(len(Q)):
        for j in range(i + 1, len(Q)):
            if Q[i] == Q[j] and bad is None:
                bad = [labels(i + 1) if labels else i + 1, labels(j + 1) if labels else j + 1]
    rep.add("basic", bad is None, witness=bad)
    return rep


# equivalence probe -----------------------------------------------------------------

def equivalence_probe(D, A: BasedAlgebra, M: DbObject, N: DbObject, certs=(), seed: int = 0) -> Report:
    """Hom dimensions agree through e_Q, and certificate triangles map to exact sequences."""
    rep = Report()
    lhs = hom_db(M, N, 0)
    rhs = len(module_hom_basis(eval_functor(D, A, M), eval_functor(D, A, N)))
    rep.add("full and faithful", lhs == rhs, dims=[lhs, rhs])
    bad = None
    for ci, cert in enumerate(certs):
        for k, st in enumerate(cert.steps):
            why = _image_sequence_ok(D.Q if hasattr(D, "Q") else D, st, seed)
            if why and bad is None:
                bad = ([ci, k], why)
    rep.add("exact", bad is None, witness=bad[0] if bad else None, detail=bad[1] if bad else "")
    return rep


# exceptional sequences -----------------------------------------------------------------

def _window(X: DbObject, Y: DbObject) -> range:
    gaps = [a - b for a in X.shifts() for b in Y.shifts()] or [0]
    return range(min(gaps) - 1, max(gaps) + 2)


def exceptional_check(E: Sequence[DbObject], seed: int = 0) -> Report:
    """ES1-ES4; witnesses are (j, i, k) triples with dim Hom(E_j, E_i[k]) != 0."""
    rep = Report()
    t = len(E)
    w1 = []
    for i, X in enumerate(E, start=1):
        if X.is_zero():
            w1.append(i)
            continue
        Aend = endo_algebra([X], op=False)
        mats = [Aend.left_matrix(Aend.basis_vector(a)) for a in range(Aend.dim)]
        if division_status(Aend.field, mats, seed) != "division":
            w1.append(i)
    rep.add("ES1", not w1, witness=w1[0] if w1 else None, detail=f"all: {w1}" if w1 else "")

    def scan(pairs, nonzero_only):
        found = []
        for j, i in pairs:
            for k in _window(E[j - 1], E[i - 1]):
                if nonzero_only and k == 0:
                    continue
                d = hom_db(E[j - 1], E[i - 1], k)
                if d:
                    found.append(([j, i, k], d))
        return found

    w2 = scan([(i, i) for i in range(1, t + 1)], True)
    w3 = scan([(j, i) for j in range(t, 0, -1) for i in range(j - 1, 0, -1)], False)
    w4 = scan([(j, i) for j in range(1, t + 1) for i in range(1, t + 1)], True)
    for name, w in (("ES2", w2), ("ES3", w3), ("ES4", w4)):
        rep.add(name, not w, witness=w[0][0] if w else None, dims=w[0][1] if w else None,
                detail="violations: " + ", ".join(f"{x}:{d}" for x, d in w) if w else "")
    return rep
