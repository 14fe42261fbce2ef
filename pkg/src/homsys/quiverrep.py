"""Representations of acyclic quivers over an exact field.

Conventions: vertices are numbered 1..n in the public API and 0..n-1
internally; the map attached to an arrow ``a: s -> t`` is a ``dim_t x dim_s``
matrix acting on column vectors; ``P(v)`` is spanned by the paths starting at
``v`` and ``I(v)`` by the paths ending at ``v``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .exactfield import (
    QQ,
    Field,
    Matrix,
    complement_basis,
    factor_poly,
    is_irreducible,
    kernel_basis,
    min_poly,
    poly_at_matrix,
    poly_mul,
    solve,
    solve_many,
)


class QuiverError(ValueError):
    pass


# canonical representatives of indecomposables, shared by equal quivers
_REGISTRIES: dict = {}


class Quiver:
    """Finite acyclic quiver with a fixed scalar field."""

    def __init__(self, n: int, arrows: Sequence[Sequence[int]], field: Field = QQ, name: str = ""):
        self.n = n
        self.field = field
        self.name = name
        self.src = []
        self.tgt = []
        for a in arrows:
            s, t = int(a[0]), int(a[1])
            if not (1 <= s <= n and 1 <= t <= n):
                raise QuiverError(f"arrow {tuple(a)} has an endpoint outside 1..{n}")
            self.src.append(s - 1)
            self.tgt.append(t - 1)
        self.topological_order()  # raises on cycles
        self._paths_from = {}
        self._op = None

    @property
    def arrows(self) -> list:
        return [(s + 1, t + 1) for s, t in zip(self.src, self.tgt)]

    @property
    def narrows(self) -> int:
        return len(self.src)

    def topological_order(self) -> list:
        indeg = [0] * self.n
        for t in self.tgt:
            indeg[t] += 1
        ready = [v for v in range(self.n) if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a, s in enumerate(self.src):
                if s == v:
                    indeg[self.tgt[a]] -= 1
                    if indeg[self.tgt[a]] == 0:
                        ready.append(self.tgt[a])
        if len(order) != self.n:
            raise QuiverError("quiver has a directed cycle")
        return order

    def paths_from(self, v: int) -> dict:
        """Paths starting at internal vertex ``v`` grouped by end vertex."""
        if v not in self._paths_from:
            out = {w: [] for w in range(self.n)}
            frontier = [((), v)]
            while frontier:
                p, end = frontier.pop(0)
                out[end].append(p)
                for a, s in enumerate(self.src):
                    if s == end:
                        frontier.append((p + (a,), self.tgt[a]))
            self._paths_from[v] = out
        return self._paths_from[v]

    def opposite(self) -> "Quiver":
        if self._op is None:
            q = Quiver(self.n, [(t + 1, s + 1) for s, t in zip(self.src, self.tgt)], self.field,
                       name=(self.name + "^op") if self.name else "")
            q._op = self
            self._op = q
        return self._op

    def iso_registry(self) -> list:
        return _REGISTRIES.setdefault(self.key(), [])

    def with_field(self, field: Field) -> "Quiver":
        return Quiver(self.n, self.arrows, field, self.name)

    def key(self):
        return (self.n, tuple(self.src), tuple(self.tgt), self.field)

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Quiver({self.n}, {self.arrows}, {self.field!r})"


def linear_quiver(n: int, field: Field = QQ) -> Quiver:
    """``1 -> 2 -> ... -> n``."""
    return Quiver(n, [(i, i + 1) for i in range(1, n)], field, name=f"A{n}")


def d4_quiver(field: Field = QQ) -> Quiver:
    return Quiver(4, [(1, 4), (2, 4), (3, 4)], field, name="D4")


class Rep:
    """A finite-dimensional representation; treat as immutable."""

    __slots__ = ("quiver", "dims", "maps", "_key", "_hash")

    def __init__(self, quiver: Quiver, dims: Sequence[int], maps: Sequence[Matrix] | None = None):
        self.quiver = quiver
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != quiver.n:
            raise QuiverError(f"expected {quiver.n} dimensions, got {len(self.dims)}")
        if any(d < 0 for d in self.dims):
            raise QuiverError("negative dimension")
        F = quiver.field
        if maps is None:
            maps = [Matrix.zeros(F, self.dims[t], self.dims[s]) for s, t in zip(quiver.src, quiver.tgt)]
        maps = tuple(maps)
        if len(maps) != quiver.narrows:
            raise QuiverError(f"expected {quiver.narrows} arrow maps, got {len(maps)}")
        for a, m in enumerate(maps):
            want = (self.dims[quiver.tgt[a]], self.dims[quiver.src[a]])
            if m.shape != want:
                raise QuiverError(f"arrow {a + 1} {quiver.arrows[a]}: matrix shape {m.shape}, expected {want}")
            if m.field != F:
                raise QuiverError("matrix over a different field")
        self.maps = maps
        self._key = None
        self._hash = None

    def key(self):
        if self._key is None:
            self._key = (self.dims, tuple(m.key() for m in self.maps))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Rep) and self.quiver == other.quiver and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self):
        return f"Rep(dims={self.dims})"

    @property
    def field(self):
        return self.quiver.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_map(self, path: Sequence[int], start: int) -> Matrix:
        m = Matrix.identity(self.field, self.dims[start])
        for a in path:
            m = self.maps[a] @ m
        return m

    def identity(self) -> "RepMorphism":
        return RepMorphism(self, self, [Matrix.identity(self.field, d) for d in self.dims], check=False)

    def zero_to(self, other: "Rep") -> "RepMorphism":
        return RepMorphism(self, other, [Matrix.zeros(self.field, e, d) for d, e in zip(self.dims, other.dims)],
                           check=False)


class RepMorphism:
    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Rep, target: Rep, mats: Sequence[Matrix], check: bool = True):
        self.source = source
        self.target = target
        self.mats = tuple(mats)
        if check:
            self.validate()

    def validate(self):
        q = self.source.quiver
        if self.target.quiver != q:
            raise QuiverError("morphism between representations of different quivers")
        for v, m in enumerate(self.mats):
            if m.shape != (self.target.dims[v], self.source.dims[v]):
                raise QuiverError(f"vertex {v + 1}: shape {m.shape} does not match dimensions")
        for a, (s, t) in enumerate(zip(q.src, q.tgt)):
            if self.mats[t] @ self.source.maps[a] != self.target.maps[a] @ self.mats[s]:
                raise QuiverError(f"square at arrow {a + 1} does not commute")

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(other.source, self.target, [a @ b for a, b in zip(self.mats, other.mats)], check=False)

    def __add__(self, other):
        return RepMorphism(self.source, self.target, [a + b for a, b in zip(self.mats, other.mats)], check=False)

    def __sub__(self, other):
        return RepMorphism(self.source, self.target, [a - b for a, b in zip(self.mats, other.mats)], check=False)

    def scale(self, c):
        return RepMorphism(self.source, self.target, [m.scale(c) for m in self.mats], check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def is_iso(self) -> bool:
        return all(m.is_invertible() for m in self.mats)

    def inverse(self) -> "RepMorphism":
        return RepMorphism(self.target, self.source, [m.inverse() for m in self.mats], check=False)

    def flat(self) -> tuple:
        return tuple(x for m in self.mats for r in m.rows for x in r)

    def __eq__(self, other):
        return isinstance(other, RepMorphism) and self.mats == other.mats

    def __hash__(self):
        return hash(self.mats)


def check_same(M: Rep, N: Rep):
    if M.quiver != N.quiver:
        raise QuiverError("representations live on different quivers or fields")


# Hom spaces -------------------------------------------------------------

def _hom_system(M: Rep, N: Rep):
    q = M.quiver
    F = q.field
    offs = []
    o = 0
    for v in range(q.n):
        offs.append(o)
        o += N.dims[v] * M.dims[v]
    nvars = o
    rows = []
    for a, (s, t) in enumerate(zip(q.src, q.tgt)):
        Ma, Na = M.maps[a], N.maps[a]
        dt_N, ds_M = N.dims[t], M.dims[s]
        for i in range(dt_N):
            for j in range(ds_M):
                row = [F.zero] * nvars
                # (f_t M_a)[i][j] = sum_k f_t[i][k] M_a[k][j]
                for k in range(M.dims[t]):
                    c = Ma.rows[k][j]
                    if c != 0:
                        idx = offs[t] + i * M.dims[t] + k
                        row[idx] = F.reduce(row[idx] + c)
                # -(N_a f_s)[i][j] = -sum_k N_a[i][k] f_s[k][j]
                for k in range(N.dims[s]):
                    c = Na.rows[i][k]
                    if c != 0:
                        idx = offs[s] + k * M.dims[s] + j
                        row[idx] = F.reduce(row[idx] - c)
                rows.append(row)
    return offs, nvars, rows


def _unflatten(M: Rep, N: Rep, offs, vec) -> list:
    F = M.field
    mats = []
    for v in range(M.quiver.n):
        r, c = N.dims[v], M.dims[v]
        base = offs[v]
        mats.append(Matrix._raw(F, r, c, [[vec[base + i * c + j] for j in range(c)] for i in range(r)]))
    return mats


@lru_cache(maxsize=20000)
def hom_basis(M: Rep, N: Rep) -> tuple:
    """Basis of Hom(M, N) as the kernel of the commuting-square constraints."""
    check_same(M, N)
    offs, nvars, rows = _hom_system(M, N)
    if nvars == 0:
        return ()
    F = M.field
    if not rows:
        basis = [tuple(F.one if i == j else F.zero for i in range(nvars)) for j in range(nvars)]
    else:
        basis = kernel_basis(Matrix._raw(F, len(rows), nvars, rows))
    return tuple(RepMorphism(M, N, _unflatten(M, N, offs, b), check=False) for b in basis)


def hom_dim(M: Rep, N: Rep) -> int:
    return len(hom_basis(M, N))


def hom_coordinates(f: RepMorphism) -> tuple:
    """Coordinates of ``f`` in :func:`hom_basis` of its source/target."""
    basis = hom_basis(f.source, f.target)
    F = f.source.field
    if not basis:
        return ()
    A = Matrix.from_columns(F, len(basis[0].flat()), [b.flat() for b in basis])
    x = solve(A, f.flat())
    if x is None:
        raise QuiverError("not a morphism")
    return x


def combine(basis: Sequence[RepMorphism], coeffs: Sequence, source: Rep, target: Rep) -> RepMorphism:
    out = source.zero_to(target)
    for c, b in zip(coeffs, basis):
        if c != 0:
            out = out + b.scale(c)
    return out


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    """sum_v d_v e_v - sum_{a: s->t} d_s e_t."""
    if len(d) != q.n or len(e) != q.n:
        raise QuiverError("dimension vector size mismatch")
    return sum(x * y for x, y in zip(d, e)) - sum(d[s] * e[t] for s, t in zip(q.src, q.tgt))


# sub- and quotient representations ---------------------------------------

def subrep(X: Rep, bases: Sequence[Sequence]) -> tuple:
    """Subrepresentation spanned vertex-wise by ``bases`` (must be invariant)."""
    q = X.quiver
    F = q.field
    B = [Matrix.from_columns(F, X.dims[v], bases[v]) for v in range(q.n)]
    dims = [len(bases[v]) for v in range(q.n)]
    maps = []
    for a, (s, t) in enumerate(zip(q.src, q.tgt)):
        img = X.maps[a] @ B[s]
        Y = solve_many(B[t], img) if dims[t] else (Matrix.zeros(F, 0, dims[s]) if img.is_zero() else None)
        if Y is None:
            raise QuiverError(f"subspace family is not invariant under arrow {a + 1}")
        maps.append(Y)
    S = Rep(q, dims, maps)
    return S, RepMorphism(S, X, B, check=False)


def quotient(X: Rep, bases: Sequence[Sequence]) -> tuple:
    """Quotient X / U for an invariant family ``bases`` spanning U.

    Returns ``(Q, projection, section_matrices)``.
    """
    q = X.quiver
    F = q.field
    proj, sect, dims = [], [], []
    for v in range(q.n):
        d = X.dims[v]
        U = list(bases[v])
        C = complement_basis(F, d, U)
        T = Matrix.from_columns(F, d, U + C)
        Tinv = T.inverse() if d else Matrix.zeros(F, 0, 0)
        k = len(U)
        proj.append(Tinv.submatrix(range(k, d), range(d)))
        sect.append(Matrix.from_columns(F, d, C) if C else Matrix.zeros(F, d, 0))
        dims.append(d - k)
    maps = [proj[t] @ X.maps[a] @ sect[s] for a, (s, t) in enumerate(zip(q.src, q.tgt))]
    Q = Rep(q, dims, maps)
    return Q, RepMorphism(X, Q, proj, check=False), sect


@dataclass
class MorphismParts:
    kernel: Rep
    kernel_inclusion: RepMorphism
    image: Rep
    image_inclusion: RepMorphism
    corestriction: RepMorphism
    cokernel: Rep
    cokernel_projection: RepMorphism


def morphism_parts(f: RepMorphism) -> MorphismParts:
    M, N = f.source, f.target
    q = M.quiver
    F = q.field
    kb = [kernel_basis(f.mats[v]) if M.dims[v] else [] for v in range(q.n)]
    K, kinc = subrep(M, kb)
    ib = []
    for v in range(q.n):
        m = f.mats[v]
        if m.ncols == 0 or m.nrows == 0:
            ib.append([])
        else:
            _, piv = m.rref()
            ib.append([m.column(c) for c in piv])
    I, iinc = subrep(N, ib)
    cor = []
    for v in range(q.n):
        if I.dims[v] == 0:
            cor.append(Matrix.zeros(F, 0, M.dims[v]))
        else:
            cor.append(solve_many(iinc.mats[v], f.mats[v]))
    C, cproj, _ = quotient(N, ib)
    return MorphismParts(K, kinc, I, iinc, RepMorphism(M, I, cor, check=False), C, cproj)


# direct sums --------------------------------------------------------------

def direct_sum(reps: Sequence[Rep], quiver: Quiver | None = None) -> tuple:
    """Direct sum with its inclusions and projections."""
    if not reps:
        if quiver is None:
            raise QuiverError("empty direct sum needs a quiver")
        return Rep(quiver, [0] * quiver.n), [], []
    q = reps[0].quiver
    F = q.field
    dims = [sum(r.dims[v] for r in reps) for v in range(q.n)]
    maps = []
    for a, (s, t) in enumerate(zip(q.src, q.tgt)):
        m = Matrix.zeros(F, dims[t], dims[s])
        ro, co = 0, 0
        for r in reps:
            blk = r.maps[a]
            for i in range(blk.nrows):
                for j in range(blk.ncols):
                    m.rows[ro + i][co + j] = blk.rows[i][j]
            ro += r.dims[t]
            co += r.dims[s]
        maps.append(m)
    S = Rep(q, dims, maps)
    incs, projs = [], []
    offs = [0] * q.n
    for r in reps:
        inc, pr = [], []
        for v in range(q.n):
            I = Matrix.zeros(F, dims[v], r.dims[v])
            P = Matrix.zeros(F, r.dims[v], dims[v])
            for i in range(r.dims[v]):
                I.rows[offs[v] + i][i] = F.one
                P.rows[i][offs[v] + i] = F.one
            inc.append(I)
            pr.append(P)
        incs.append(RepMorphism(r, S, inc, check=False))
        projs.append(RepMorphism(S, r, pr, check=False))
        offs = [o + r.dims[v] for v, o in enumerate(offs)]
    return S, incs, projs


def hstack_morphisms(target: Rep, source: Rep, parts: Sequence[RepMorphism]) -> RepMorphism:
    """Morphism from ``source`` (a direct sum) assembled from component maps."""
    F = target.field
    mats = []
    for v in range(target.quiver.n):
        m = Matrix.zeros(F, target.dims[v], 0)
        for p in parts:
            m = m.hstack(p.mats[v])
        mats.append(m)
    return RepMorphism(source, target, mats, check=False)


# special representations ----------------------------------------------------

def special_rep(q: Quiver, kind: str, v: int) -> Rep:
    """P(v), I(v) or S(v) for a 1-based vertex ``v``."""
    if not 1 <= v <= q.n:
        raise QuiverError(f"vertex {v} outside 1..{q.n}")
    F = q.field
    v0 = v - 1
    if kind == "simple":
        dims = [1 if w == v0 else 0 for w in range(q.n)]
        return Rep(q, dims)
    if kind == "projective":
        paths = q.paths_from(v0)
        dims = [len(paths[w]) for w in range(q.n)]
        maps = []
        for a, (s, t) in enumerate(zip(q.src, q.tgt)):
            m = Matrix.zeros(F, dims[t], dims[s])
            for j, p in enumerate(paths[s]):
                m.rows[paths[t].index(p + (a,))][j] = F.one
            maps.append(m)
        return Rep(q, dims, maps)
    if kind == "injective":
        ending = {w: [p for p in q.paths_from(w)[v0]] for w in range(q.n)}
        dims = [len(ending[w]) for w in range(q.n)]
        maps = []
        for a, (s, t) in enumerate(zip(q.src, q.tgt)):
            m = Matrix.zeros(F, dims[t], dims[s])
            for j, p in enumerate(ending[s]):
                if p and p[0] == a:
                    m.rows[ending[t].index(p[1:])][j] = F.one
            maps.append(m)
        return Rep(q, dims, maps)
    raise QuiverError(f"unknown kind {kind!r}")


def dual_rep(M: Rep, qop: Quiver | None = None) -> Rep:
    """Vector-space dual: a representation of the opposite quiver."""
    qop = qop or M.quiver.opposite()
    return Rep(qop, M.dims, [m.T for m in M.maps])


def random_rep(q: Quiver, dims: Sequence[int], rng: random.Random, bound: int = 3) -> Rep:
    F = q.field
    maps = []
    for s, t in zip(q.src, q.tgt):
        maps.append(Matrix(F, dims[t], dims[s],
                           [[F.reduce(rng.randint(-bound, bound)) for _ in range(dims[s])] for _ in range(dims[t])]))
    return Rep(q, dims, maps)


# endomorphism algebra helpers ----------------------------------------------

def _block_matrix(phi: RepMorphism) -> Matrix:
    F = phi.source.field
    n = phi.source.total_dim
    m = Matrix.zeros(F, n, n)
    o = 0
    for blk in phi.mats:
        for i in range(blk.nrows):
            for j in range(blk.ncols):
                m.rows[o + i][o + j] = blk.rows[i][j]
        o += blk.nrows
    return m


def _power(phi: RepMorphism, k: int) -> RepMorphism:
    out = phi.source.identity()
    for _ in range(k):
        out = phi @ out
    return out


def algebra_is_local(basis_mats: Sequence[Matrix], rng: random.Random, trials: int = 16):
    """Decide whether the matrix algebra spanned by ``basis_mats`` is local.

    The radical is the kernel of the trace form (valid in characteristic 0 or
    above the matrix size).  Locality is certified when the semisimple
    quotient is 1-dimensional or generated by one element with irreducible
    minimal polynomial of full degree.  Returns ``(verdict, splitter)`` with
    verdict in {"local", "split", "unknown"}; ``splitter`` is a coefficient
    vector whose element has a non-primary minimal polynomial.
    """
    k = len(basis_mats)
    if k == 0:
        return "unknown", None
    F = basis_mats[0].field
    n = basis_mats[0].nrows
    if k == 1:
        return "local", None
    if F.characteristic and F.characteristic <= n:
        return "unknown", None
    flat = [tuple(x for r in m.rows for x in r) for m in basis_mats]
    Bmat = Matrix.from_columns(F, n * n, flat)

    def trace(m):
        return F.reduce(sum(m.rows[i][i] for i in range(m.nrows)))

    G = Matrix(F, k, k, [[trace(a @ b) for b in basis_mats] for a in basis_mats])
    J = kernel_basis(G)
    r = k - len(J)
    if r == 1:
        return "local", None
    comp = complement_basis(F, k, J)
    T = Matrix.from_columns(F, k, list(J) + comp)
    Tinv = T.inverse()
    for _ in range(trials):
        coeffs = [F.random(rng) for _ in range(k)]
        a = Matrix.zeros(F, n, n)
        for c, m in zip(coeffs, basis_mats):
            a = a + m.scale(c)
        mp = min_poly(a)
        facs = factor_poly(F, mp)
        if len(facs) > 1:
            return "split", coeffs
        # left multiplication by a on A / J
        cols = []
        for cvec in comp:
            b = Matrix.zeros(F, n, n)
            for c, m in zip(cvec, basis_mats):
                b = b + m.scale(c)
            prod = a @ b
            x = solve(Bmat, tuple(v for row in prod.rows for v in row))
            y = Tinv.apply(x)
            cols.append(y[len(J):])
        L = Matrix.from_columns(F, r, cols)
        q = min_poly(L)
        if len(q) - 1 == r and is_irreducible(F, q):
            return "local", None
    return "unknown", None


@dataclass
class Decomposition:
    """Krull-Schmidt decomposition with embeddings of every summand copy."""

    original: Rep
    parts: list  # list of (indecomposable Rep, [embedding RepMorphism per copy])
    complete: bool = True

    @property
    def summands(self) -> list:
        return [(r, len(embs)) for r, embs in self.parts]

    def certificate(self) -> RepMorphism:
        reps = [r for r, embs in self.parts for _ in embs]
        S, _, _ = direct_sum(reps, self.original.quiver)
        return hstack_morphisms(self.original, S, [e for _, embs in self.parts for e in embs])


def _split_once(M: Rep, rng: random.Random, trials: int):
    """Find a proper splitting of M as invariant subspaces, or certify locality."""
    q = M.quiver
    E = hom_basis(M, M)
    if len(E) <= 1:
        return None, True
    N = M.total_dim
    for phi in E:
        pw = _power(phi, N)
        ker = [kernel_basis(m) if m.ncols else [] for m in pw.mats]
        kd = sum(len(k) for k in ker)
        if 0 < kd < N:
            img = []
            for m in pw.mats:
                if m.ncols == 0 or m.nrows == 0:
                    img.append([])
                else:
                    _, piv = m.rref()
                    img.append([m.column(c) for c in piv])
            return [ker, img], True
    F = q.field
    for _ in range(trials):
        coeffs = [F.random(rng) for _ in E]
        phi = combine(E, coeffs, M, M)
        blocks = _primary_blocks(phi)
        if blocks is not None:
            return blocks, True
    verdict, coeffs = algebra_is_local([_block_matrix(e) for e in E], rng)
    if verdict == "split":
        blocks = _primary_blocks(combine(E, coeffs, M, M))
        if blocks is not None:
            return blocks, True
    return None, verdict == "local"


def _primary_blocks(phi: RepMorphism):
    big = _block_matrix(phi)
    mp = min_poly(big)
    facs = factor_poly(phi.source.field, mp)
    if len(facs) <= 1:
        return None
    blocks = []
    for f, e in facs:
        fe = [phi.source.field.one]
        for _ in range(e):
            fe = poly_mul(phi.source.field, fe, f)
        blocks.append([kernel_basis(poly_at_matrix(fe, m)) if m.ncols else [] for m in phi.mats])
    return blocks


def _decompose_rec(M: Rep, rng, trials, out: list) -> bool:
    if M.is_zero():
        return True
    blocks, certified = _split_once(M, rng, trials)
    if blocks is None:
        out.append((M, M.identity()))
        return certified
    ok = True
    for b in blocks:
        S, inc = subrep(M, b)
        sub = []
        ok &= _decompose_rec(S, rng, trials, sub)
        out.extend((r, inc @ e) for r, e in sub)
    return ok


def decompose(M: Rep, seed: int = 0, trials: int = 32) -> Decomposition:
    """Krull-Schmidt decomposition.

    Fitting splits over the endomorphism basis come first, then primary
    decomposition of random endomorphisms.  Summands that resist splitting are
    certified local through the radical of their endomorphism algebra;
    ``complete`` is False when some summand could not be certified.
    """
    rng = random.Random(seed)
    pieces = []
    complete = _decompose_rec(M, rng, trials, pieces)
    parts = []
    for r, emb in pieces:
        for entry in parts:
            verdict, iso = is_isomorphic(entry[0], r, seed)
            if verdict == "yes":
                entry[1].append(emb @ iso)
                break
        else:
            parts.append((r, [emb]))
    return Decomposition(M, parts, complete)


def is_indecomposable(M: Rep, seed: int = 0) -> bool:
    if M.is_zero():
        return False
    d = decompose(M, seed)
    return d.complete and len(d.parts) == 1 and len(d.parts[0][1]) == 1


def is_isomorphic(M: Rep, N: Rep, seed: int = 0, trials: int = 32):
    """``("yes", iso)``, ``("no", None)`` or ``("indeterminate", None)``."""
    check_same(M, N)
    if M.dims != N.dims:
        return "no", None
    if M == N:
        return "yes", M.identity()
    H = hom_basis(M, N)
    if len(H) != len(hom_basis(N, M)) or len(H) != len(hom_basis(M, M)) or len(H) != len(hom_basis(N, N)):
        return "no", None
    if not H:
        return ("yes", M.identity()) if M.is_zero() else ("no", None)
    if len(H) == 1:
        return ("yes", H[0]) if H[0].is_iso() else ("no", None)
    rng = random.Random(seed)
    F = M.field
    for _ in range(trials):
        f = combine(H, [F.random(rng) for _ in H], M, N)
        if f.is_iso():
            return "yes", f
    return "indeterminate", None


def canonical_form(M: Rep, seed: int = 0):
    """Registered representative of the isomorphism class of an indecomposable.

    Returns ``(rep, iso)`` with ``iso: rep -> M``.  The registry lives on the
    quiver so that equal classes are represented by identical objects.
    """
    reg = M.quiver.iso_registry()
    for R in reg:
        if R.dims == M.dims:
            verdict, iso = is_isomorphic(R, M, seed)
            if verdict == "yes":
                return R, iso
    reg.append(M)
    return M, M.identity()


def registry_index(M: Rep) -> int:
    for i, R in enumerate(M.quiver.iso_registry()):
        if R is M:
            return i
    raise QuiverError("representation is not a registered canonical form")
