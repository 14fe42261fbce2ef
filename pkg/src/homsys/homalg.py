"""Ext^1 with explicit cocycles, extensions, universal extensions and traces."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .exactfield import Matrix, complement_basis, solve, solve_many
from .quiverrep import (
    QuiverError,
    Rep,
    RepMorphism,
    check_same,
    direct_sum,
    hom_basis,
    special_rep,
    subrep,
)


@dataclass(frozen=True)
class Ext1Space:
    """Ext^1(M, N) as the cokernel of the arrow cochain map.

    Cochains are flattened per arrow, row-major, in arrow order.  ``basis``
    holds standard cochains spanning a complement of the coboundaries.
    """

    M: Rep
    N: Rep
    delta: Matrix
    basis: tuple
    _present: Matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def cochain_dim(self) -> int:
        return self.delta.nrows

    def to_matrices(self, vec: Sequence) -> list:
        """Split a flat cochain into per-arrow matrices."""
        q = self.M.quiver
        out, o = [], 0
        for s, t in zip(q.src, q.tgt):
            r, c = self.N.dims[t], self.M.dims[s]
            out.append(Matrix._raw(self.M.field, r, c, [list(vec[o + i * c: o + (i + 1) * c]) for i in range(r)]))
            o += r * c
        return out

    def from_matrices(self, mats: Sequence[Matrix]) -> tuple:
        return tuple(x for m in mats for row in m.rows for x in row)

    def cocycle(self, coords: Sequence) -> list:
        """Per-arrow matrices of the cochain with the given class coordinates."""
        F = self.M.field
        vec = [F.zero] * self.cochain_dim
        for c, b in zip(coords, self.basis):
            if c != 0:
                vec = [F.reduce(x + c * y) for x, y in zip(vec, b)]
        return self.to_matrices(vec)

    def coordinates(self, cochain) -> tuple:
        """Class coordinates of a cochain (flat vector or per-arrow matrices)."""
        if cochain and isinstance(cochain[0], Matrix):
            cochain = self.from_matrices(cochain)
        if self.dim == 0:
            return ()
        x = solve(self._present, tuple(cochain))
        if x is None:
            raise QuiverError("cochain has the wrong shape")
        return tuple(x[self.delta.ncols:])

    def coboundary(self, g: Sequence[Matrix]) -> list:
        """The cochain g_t M_a - N_a g_s for vertex maps g_v: M_v -> N_v."""
        q = self.M.quiver
        return [g[t] @ self.M.maps[a] - self.N.maps[a] @ g[s] for a, (s, t) in enumerate(zip(q.src, q.tgt))]


@lru_cache(maxsize=20000)
def ext1_space(M: Rep, N: Rep) -> Ext1Space:
    check_same(M, N)
    q = M.quiver
    F = q.field
    vert_offs, o = [], 0
    for v in range(q.n):
        vert_offs.append(o)
        o += N.dims[v] * M.dims[v]
    nvert = o
    arrow_offs, o = [], 0
    for s, t in zip(q.src, q.tgt):
        arrow_offs.append(o)
        o += N.dims[t] * M.dims[s]
    narr = o
    delta = Matrix.zeros(F, narr, nvert)
    for a, (s, t) in enumerate(zip(q.src, q.tgt)):
        Ma, Na = M.maps[a], N.maps[a]
        cs = M.dims[s]
        for i in range(N.dims[t]):
            for j in range(cs):
                row = delta.rows[arrow_offs[a] + i * cs + j]
                for k in range(M.dims[t]):
                    c = Ma.rows[k][j]
                    if c != 0:
                        idx = vert_offs[t] + i * M.dims[t] + k
                        row[idx] = F.reduce(row[idx] + c)
                for k in range(N.dims[s]):
                    c = Na.rows[i][k]
                    if c != 0:
                        idx = vert_offs[s] + k * cs + j
                        row[idx] = F.reduce(row[idx] - c)
    if nvert:
        _, piv = delta.rref()
        image = [delta.column(c) for c in piv]
    else:
        image = []
    basis = tuple(complement_basis(F, narr, image))
    present = delta.hstack(Matrix.from_columns(F, narr, basis)) if basis else delta
    return Ext1Space(M, N, delta, basis, present)


def ext1_dim(M: Rep, N: Rep) -> int:
    return ext1_space(M, N).dim


@dataclass
class ShortExactSeq:
    """0 -> A --i--> E --p--> C -> 0."""

    A: Rep
    E: Rep
    C: Rep
    i: RepMorphism
    p: RepMorphism

    def verify(self) -> bool:
        for v in range(self.E.quiver.n):
            iv, pv = self.i.mats[v], self.p.mats[v]
            if iv.ncols and iv.rank() != iv.ncols:
                return False
            if pv.nrows and pv.rank() != pv.nrows:
                return False
            if not (pv @ iv).is_zero():
                return False
            if self.E.dims[v] != self.A.dims[v] + self.C.dims[v]:
                return False
        try:
            self.i.validate()
            self.p.validate()
        except QuiverError:
            return False
        return True


def realize_extension(phi: Sequence[Matrix], M: Rep, N: Rep) -> ShortExactSeq:
    """The sequence 0 -> N -> E -> M -> 0 with E_a = [[N_a, phi_a], [0, M_a]]."""
    check_same(M, N)
    q = M.quiver
    F = q.field
    if len(phi) != q.narrows:
        raise QuiverError("cocycle needs one matrix per arrow")
    maps = []
    for a, (s, t) in enumerate(zip(q.src, q.tgt)):
        if phi[a].shape != (N.dims[t], M.dims[s]):
            raise QuiverError(f"cocycle component at arrow {a + 1} has shape {phi[a].shape}")
        top = N.maps[a].hstack(phi[a])
        bot = Matrix.zeros(F, M.dims[t], N.dims[s]).hstack(M.maps[a])
        maps.append(top.vstack(bot))
    dims = [N.dims[v] + M.dims[v] for v in range(q.n)]
    E = Rep(q, dims, maps)
    inc, proj = [], []
    for v in range(q.n):
        n, m = N.dims[v], M.dims[v]
        inc.append(Matrix.identity(F, n).vstack(Matrix.zeros(F, m, n)))
        proj.append(Matrix.zeros(F, m, n).hstack(Matrix.identity(F, m)))
    return ShortExactSeq(N, E, M, RepMorphism(N, E, inc, check=False), RepMorphism(E, M, proj, check=False))


def extension_from_coords(M: Rep, N: Rep, coords: Sequence) -> ShortExactSeq:
    return realize_extension(ext1_space(M, N).cocycle(coords), M, N)


def connecting_cocycle(ses: ShortExactSeq) -> list:
    """Per-arrow cochain C_s -> A_t representing the class of ``ses``."""
    q = ses.E.quiver
    F = q.field
    sect = []
    for v in range(q.n):
        if ses.C.dims[v] == 0:
            sect.append(Matrix.zeros(F, ses.E.dims[v], 0))
            continue
        sv = solve_many(ses.p.mats[v], Matrix.identity(F, ses.C.dims[v]))
        if sv is None:
            raise QuiverError("p is not surjective")
        sect.append(sv)
    psi = []
    for a, (s, t) in enumerate(zip(q.src, q.tgt)):
        diff = ses.E.maps[a] @ sect[s] - sect[t] @ ses.C.maps[a]
        if ses.A.dims[t] == 0:
            psi.append(Matrix.zeros(F, 0, ses.C.dims[s]))
            continue
        x = solve_many(ses.i.mats[t], diff)
        if x is None:
            raise QuiverError("sequence is not exact in the middle")
        psi.append(x)
    return psi


def connecting_class(ses: ShortExactSeq) -> tuple:
    """Coordinates in ``ext1_space(C, A)`` of the class of ``ses``."""
    return ext1_space(ses.C, ses.A).coordinates(connecting_cocycle(ses))


def identity_sequence(C: Rep) -> ShortExactSeq:
    Z = Rep(C.quiver, [0] * C.quiver.n)
    return ShortExactSeq(Z, C, C, Z.zero_to(C), C.identity())


def universal_extension_left(C: Rep, A: Rep) -> ShortExactSeq:
    """0 -> A^n -> E -> C -> 0 with n = dim Ext^1(C, A), all classes at once.

    When Ext^1(A, A) vanishes the middle term satisfies Ext^1(E, A) = 0; this
    is checked before returning.
    """
    X = ext1_space(C, A)
    n = X.dim
    if n == 0:
        return identity_sequence(C)
    q = C.quiver
    An, _, _ = direct_sum([A] * n)
    cocycles = [X.cocycle([1 if k == j else 0 for k in range(n)]) for j in range(n)]
    phi = []
    for a in range(q.narrows):
        m = cocycles[0][a]
        for j in range(1, n):
            m = m.vstack(cocycles[j][a])
        phi.append(m)
    ses = realize_extension(phi, C, An)
    if ext1_dim(A, A) == 0 and ext1_dim(ses.E, A) != 0:
        raise ArithmeticError("universal extension failed to kill Ext^1(-, A)")
    return ses


def universal_extension_right(N: Rep, theta: Rep) -> ShortExactSeq:
    """0 -> N -> N_t -> theta^m -> 0 with m = dim Ext^1(theta, N).

    The middle term always satisfies Ext^1(theta, N_t) = 0 when
    Ext^1(theta, theta) = 0; checked before returning.
    """
    X = ext1_space(theta, N)
    m = X.dim
    if m == 0:
        return ShortExactSeq(N, N, Rep(N.quiver, [0] * N.quiver.n), N.identity(),
                             N.zero_to(Rep(N.quiver, [0] * N.quiver.n)))
    q = N.quiver
    Tm, _, _ = direct_sum([theta] * m)
    cocycles = [X.cocycle([1 if k == j else 0 for k in range(m)]) for j in range(m)]
    phi = []
    for a in range(q.narrows):
        mat = cocycles[0][a]
        for j in range(1, m):
            mat = mat.hstack(cocycles[j][a])
        phi.append(mat)
    ses = realize_extension(phi, Tm, N)
    if ext1_dim(theta, theta) == 0 and ext1_dim(theta, ses.E) != 0:
        raise ArithmeticError("universal extension failed to kill Ext^1(theta, -)")
    return ses


def trace(M: Rep, N: Rep) -> tuple:
    """Sum of the images of all morphisms M -> N, as ``(subrep, inclusion)``."""
    check_same(M, N)
    q = N.quiver
    bases = []
    for v in range(q.n):
        cols = [c for f in hom_basis(M, N) for c in f.mats[v].columns()] if N.dims[v] else []
        if cols:
            m = Matrix.from_columns(N.field, N.dims[v], cols)
            _, piv = m.rref()
            bases.append([cols[p] for p in piv])
        else:
            bases.append([])
    return subrep(N, bases)


# free modules and the standard resolution ---------------------------------

class FreeModule:
    """Direct sum of indecomposable projectives P(v_g), one per generator."""

    def __init__(self, quiver, gens: Sequence[int]):
        self.quiver = quiver
        self.gens = list(gens)  # internal (0-based) vertices
        reps = [special_rep(quiver, "projective", v + 1) for v in self.gens]
        self.rep, _, _ = direct_sum(reps, quiver)
        self._offs = {}
        self.labels = [[] for _ in range(quiver.n)]  # coordinate order at each vertex
        offs = [0] * quiver.n
        for g, v in enumerate(self.gens):
            paths = quiver.paths_from(v)
            for w in range(quiver.n):
                for k, p in enumerate(paths[w]):
                    self._offs[(g, p)] = offs[w] + k
                    self.labels[w].append((g, p))
                offs[w] += len(paths[w])

    def index(self, g: int, path: tuple) -> int:
        return self._offs[(g, path)]

    def end_vertex(self, g: int, path: tuple) -> int:
        return self.quiver.tgt[path[-1]] if path else self.gens[g]

    def generator(self, g: int) -> tuple:
        """Coordinate vector of generator ``g`` at its vertex."""
        F = self.quiver.field
        v = self.gens[g]
        vec = [F.zero] * self.rep.dims[v]
        vec[self.index(g, ())] = F.one
        return tuple(vec)

    def map_to(self, X: Rep, images: Sequence[Sequence]) -> RepMorphism:
        """Morphism sending generator g to ``images[g]`` in X_{v_g}."""
        q = self.quiver
        F = q.field
        mats = [Matrix.zeros(F, X.dims[w], self.rep.dims[w]) for w in range(q.n)]
        for g, v in enumerate(self.gens):
            x = Matrix.from_columns(F, X.dims[v], [images[g]]) if X.dims[v] else Matrix.zeros(F, 0, 1)
            paths = q.paths_from(v)
            for w in range(q.n):
                for p in paths[w]:
                    col = X.path_map(p, v) @ x
                    j = self.index(g, p)
                    for i in range(X.dims[w]):
                        mats[w].rows[i][j] = col.rows[i][0]
        return RepMorphism(self.rep, X, mats, check=False)


@dataclass
class StandardResolution:
    """0 -> P1 --d--> P0 --eps--> M -> 0."""

    M: Rep
    P1: FreeModule
    P0: FreeModule
    d: RepMorphism
    eps: RepMorphism
    gens0: list  # (vertex, k) labels
    gens1: list  # (arrow, k) labels


@lru_cache(maxsize=4096)
def standard_resolution(M: Rep) -> StandardResolution:
    q = M.quiver
    F = q.field
    labels0 = [(v, k) for v in range(q.n) for k in range(M.dims[v])]
    P0 = FreeModule(q, [v for v, _ in labels0])
    pos0 = {lab: g for g, lab in enumerate(labels0)}
    labels1 = [(a, k) for a in range(q.narrows) for k in range(M.dims[q.src[a]])]
    P1 = FreeModule(q, [q.tgt[a] for a, _ in labels1])
    eps = P0.map_to(M, [tuple(F.one if i == k else F.zero for i in range(M.dims[v])) for v, k in labels0])
    images = []
    for a, k in labels1:
        s, t = q.src[a], q.tgt[a]
        vec = [F.zero] * P0.rep.dims[t]
        vec[P0.index(pos0[(s, k)], (a,))] = F.one
        for l in range(M.dims[t]):
            c = M.maps[a].rows[l][k]
            if c != 0:
                idx = P0.index(pos0[(t, l)], ())
                vec[idx] = F.reduce(vec[idx] - c)
        images.append(tuple(vec))
    d = P1.map_to(P0.rep, images)
    return StandardResolution(M, P1, P0, d, eps, labels0, labels1)


def hom_ext_via_resolution(M: Rep, N: Rep) -> tuple:
    """(dim Hom, dim Ext^1) from Hom(P0, N) -> Hom(P1, N); an independent oracle."""
    res = standard_resolution(M)
    q = M.quiver
    F = q.field
    offs0, o = [], 0
    for v in res.P0.gens:
        offs0.append(o)
        o += N.dims[v]
    n0 = o
    offs1, o = [], 0
    for v in res.P1.gens:
        offs1.append(o)
        o += N.dims[v]
    n1 = o
    cols = []
    for g, v in enumerate(res.P0.gens):
        for k in range(N.dims[v]):
            images = [tuple(F.one if (h == g and i == k) else F.zero for i in range(N.dims[w]))
                      for h, w in enumerate(res.P0.gens)]
            f = res.P0.map_to(N, images)
            col = []
            for h, w in enumerate(res.P1.gens):
                col.extend((f @ res.d).mats[w].column(res.P1.index(h, ())))
            cols.append(tuple(col))
    if n0 == 0:
        return 0, n1
    D = Matrix.from_columns(F, n1, cols) if n1 else Matrix.zeros(F, 0, n0)
    r = D.rank() if n1 else 0
    return n0 - r, n1 - r
