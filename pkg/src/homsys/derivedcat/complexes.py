"""Bounded complexes of projective representations.

Internal computation device behind cones.  A complex stores one free module
per degree and the differential as images of generators; chain maps likewise
store generator images.  Normal forms come with an explicit quasi-isomorphism
from the standard resolution of the normalized object.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exactfield import Matrix, kernel_basis, solve, solve_many
from ..homalg import FreeModule, ext1_space, standard_resolution
from ..quiverrep import (
    QuiverError,
    RepMorphism,
    canonical_form,
    decompose,
    quotient,
    subrep,
)
from .objects import DbMorphism, DbObject, IndeterminateError


class Complex:
    """Cochain complex of free modules; ``diffs[n][g]`` is d(generator g of degree n)."""

    def __init__(self, quiver, mods: dict, diffs: dict):
        self.quiver = quiver
        self.mods = {n: m for n, m in mods.items() if m.gens}
        self.diffs = {n: diffs.get(n, []) for n in self.mods}
        self._dmat = {}

    def degrees(self) -> list:
        return sorted(self.mods)

    def module(self, n: int) -> FreeModule:
        m = self.mods.get(n)
        if m is None:
            m = FreeModule(self.quiver, [])
        return m

    def dmat(self, n: int) -> RepMorphism:
        """Differential d^n as a morphism of representations."""
        if n not in self._dmat:
            src, tgt = self.module(n), self.module(n + 1)
            imgs = self.diffs.get(n, [])
            if not src.gens:
                imgs = []
            self._dmat[n] = src.map_to(tgt.rep, imgs)
        return self._dmat[n]

    def check(self):
        for n in self.degrees():
            if not (self.dmat(n + 1) @ self.dmat(n)).is_zero():
                raise QuiverError(f"d^2 != 0 at degree {n}")


class ChainMap:
    """Chain map given by generator images ``images[n][g]`` in target degree n."""

    def __init__(self, source: Complex, target: Complex, images: dict):
        self.source = source
        self.target = target
        self.images = images
        self._mat = {}

    def mat(self, n: int) -> RepMorphism:
        if n not in self._mat:
            src = self.source.module(n)
            self._mat[n] = src.map_to(self.target.module(n).rep, self.images.get(n, []) if src.gens else [])
        return self._mat[n]

    def image(self, n: int, g: int) -> tuple:
        return self.images[n][g]

    def compose_after(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        out = {}
        for n, imgs in other.images.items():
            m = self.mat(n)
            gens = other.source.module(n).gens
            out[n] = [m.mats[gens[g]].apply(x) if m.mats[gens[g]].nrows else () for g, x in enumerate(imgs)]
        return ChainMap(other.source, self.target, out)

    def check(self):
        for n in set(self.source.degrees()) | {d - 1 for d in self.source.degrees()}:
            lhs = self.target.dmat(n) @ self.mat(n)
            rhs = self.mat(n + 1) @ self.source.dmat(n)
            if lhs != rhs:
                raise QuiverError(f"not a chain map at degree {n}")


def _embed(small: FreeModule, big: FreeModule, goff: int, w: int, vec) -> list:
    """Coordinates of ``vec`` (in ``small`` at vertex w) inside ``big``."""
    F = big.quiver.field
    out = [F.zero] * big.rep.dims[w]
    for x, (g, p) in zip(vec, small.labels[w]):
        if x != 0:
            out[big.index(g + goff, p)] = x
    return out


@dataclass
class Resolution:
    """Standard resolution of a normalized object, with copy bookkeeping."""

    obj: DbObject
    complex: Complex
    # per copy: (res, degree of P0, generator offset of P0, offset of P1)
    layout: list


def resolve(A: DbObject) -> Resolution:
    q = A.quiver
    gens = {}
    layout = []
    for M, s in A.copies():
        res = standard_resolution(M)
        n0, n1 = -s, -s - 1
        g0 = gens.setdefault(n0, [])
        off0 = len(g0)
        g0.extend(res.P0.gens)
        g1 = gens.setdefault(n1, [])
        off1 = len(g1)
        g1.extend(res.P1.gens)
        layout.append((res, n0, off0, off1))
    mods = {n: FreeModule(q, g) for n, g in gens.items()}
    diffs = {n: [None] * len(g) for n, g in gens.items()}
    for res, n0, off0, off1 in layout:
        big0 = mods[n0]
        for h, w in enumerate(res.P1.gens):
            dv = res.d.mats[w].column(res.P1.index(h, ()))
            diffs[n0 - 1][off1 + h] = tuple(_embed(res.P0, big0, off0, w, dv))
        for g, w in enumerate(res.P0.gens):
            diffs[n0][off0 + g] = ()
    F = q.field
    for n in diffs:
        for g, x in enumerate(diffs[n]):
            if x == () or x is None:
                w = gens[n][g]
                diffs[n][g] = tuple([F.zero] * (mods[n + 1].rep.dims[w] if (n + 1) in mods else 0))
    return Resolution(A, Complex(q, mods, diffs), layout)


def chain_map_of(f: DbMorphism, RA: Resolution, RB: Resolution) -> ChainMap:
    """Lift a morphism of normalized objects to the standard resolutions."""
    F = f.source.field
    CA, CB = RA.complex, RB.complex
    images = {n: [tuple([F.zero] * CB.module(n).rep.dims[w]) for w in CA.mods[n].gens] for n in CA.mods}
    images = {n: [list(x) for x in v] for n, v in images.items()}
    for (i, j), (kind, val) in f.comps.items():
        resA, na, offa0, offa1 = RA.layout[i]
        resB, nb, offb0, offb1 = RB.layout[j]
        M, N = resA.M, resB.M
        if kind == "hom":
            # P0 generator (v,k) -> sum_l f_v[l,k] (v,l); P1 generator (a,k) -> sum_l f_s[l,k] (a,l)
            pos0 = {lab: g for g, lab in enumerate(resB.gens0)}
            pos1 = {lab: g for g, lab in enumerate(resB.gens1)}
            bigB0, bigB1 = CB.module(nb), CB.module(nb - 1)
            for g, (v, k) in enumerate(resA.gens0):
                vec = images[na][offa0 + g]
                for l in range(N.dims[v]):
                    c = val.mats[v].rows[l][k]
                    if c != 0:
                        idx = bigB0.index(offb0 + pos0[(v, l)], ())
                        vec[idx] = F.reduce(vec[idx] + c)
            q = M.quiver
            for h, (a, k) in enumerate(resA.gens1):
                vec = images[na - 1][offa1 + h]
                s = q.src[a]
                for l in range(N.dims[s]):
                    c = val.mats[s].rows[l][k]
                    if c != 0:
                        idx = bigB1.index(offb1 + pos1[(a, l)], ())
                        vec[idx] = F.reduce(vec[idx] + c)
        else:
            phi = ext1_space(M, N).cocycle(val)
            pos0 = {lab: g for g, lab in enumerate(resB.gens0)}
            bigB0 = CB.module(nb)
            q = M.quiver
            for h, (a, k) in enumerate(resA.gens1):
                vec = images[na - 1][offa1 + h]
                t = q.tgt[a]
                for l in range(N.dims[t]):
                    c = phi[a].rows[l][k]
                    if c != 0:
                        idx = bigB0.index(offb0 + pos0[(t, l)], ())
                        vec[idx] = F.reduce(vec[idx] + c)
    return ChainMap(CA, CB, {n: [tuple(x) for x in v] for n, v in images.items()})


def extract_morphism(G: ChainMap, RA: Resolution, RB: Resolution, signs: bool = False) -> DbMorphism:
    """Read a chain map between standard resolutions as a normalized morphism.

    With ``signs`` the block in degree n is multiplied by (-1)^n, which turns a
    map into the naive shift of a complex into one into the resolution of the
    shifted object.
    """
    A, B = RA.obj, RB.obj
    F = A.field
    q = A.quiver
    comps = {}
    for i, (resA, na, offa0, offa1) in enumerate(RA.layout):
        M = resA.M
        for j, (resB, nb, offb0, offb1) in enumerate(RB.layout):
            N = resB.M
            bigB0 = RB.complex.module(nb)
            if nb == na:
                sign = -1 if (signs and na % 2) else 1
                mats = []
                for v in range(q.n):
                    cols = []
                    for k in range(M.dims[v]):
                        g = resA.gens0.index((v, k))
                        x = G.image(na, offa0 + g)
                        y = [x[bigB0.index(offb0 + gg, p)] for gg, p in resB.P0.labels[v]]
                        col = resB.eps.mats[v].apply(y) if N.dims[v] else ()
                        cols.append(tuple(F.reduce(sign * c) for c in col))
                    mats.append(Matrix.from_columns(F, N.dims[v], cols) if cols else Matrix.zeros(F, N.dims[v], 0))
                f = RepMorphism(M, N, mats, check=False)
                if not f.is_zero():
                    comps[(i, j)] = ("hom", f)
            elif nb == na - 1:
                sign = -1 if (signs and (na - 1) % 2) else 1
                psi = []
                for a, (s, t) in enumerate(zip(q.src, q.tgt)):
                    cols = []
                    for k in range(M.dims[s]):
                        h = resA.gens1.index((a, k))
                        x = G.image(na - 1, offa1 + h)
                        y = [x[bigB0.index(offb0 + gg, p)] for gg, p in resB.P0.labels[t]]
                        col = resB.eps.mats[t].apply(y) if N.dims[t] else ()
                        cols.append(tuple(F.reduce(sign * c) for c in col))
                    psi.append(Matrix.from_columns(F, N.dims[t], cols) if cols else Matrix.zeros(F, N.dims[t], 0))
                X = ext1_space(M, N)
                if X.dim:
                    coords = X.coordinates(psi)
                    if any(c != 0 for c in coords):
                        comps[(i, j)] = ("ext", coords)
    return DbMorphism(A, B, comps, check=False)


# cones --------------------------------------------------------------------

@dataclass
class ConeComplex:
    complex: Complex
    incl: ChainMap  # target complex -> cone
    proj_offsets: dict  # degree n -> number of generators coming from source^{n+1}


def cone_complex(Fm: ChainMap) -> ConeComplex:
    """Cone^n = A^{n+1} + B^n with d = [[-d_A, 0], [F, d_B]]."""
    A, B = Fm.source, Fm.target
    q = A.quiver
    F = q.field
    degs = {n - 1 for n in A.degrees()} | set(B.degrees())
    mods, offs = {}, {}
    for n in degs:
        ga, gb = A.module(n + 1).gens, B.module(n).gens
        mods[n] = FreeModule(q, ga + gb)
        offs[n] = len(ga)
    diffs = {}
    for n in degs:
        out = []
        tgt = mods.get(n + 1) or FreeModule(q, [])
        amod, bmod = A.module(n + 1), B.module(n)
        for g, w in enumerate(amod.gens):
            da = A.diffs[n + 1][g] if (n + 1) in A.mods else ()
            fa = Fm.images[n + 1][g] if (n + 1) in Fm.images else ()
            vec = [F.zero] * tgt.rep.dims[w]
            if da:
                for x, (gg, p) in zip(da, A.module(n + 2).labels[w]):
                    if x != 0:
                        idx = tgt.index(gg, p)
                        vec[idx] = F.reduce(vec[idx] - x)
            if fa:
                for x, (gg, p) in zip(fa, B.module(n + 1).labels[w]):
                    if x != 0:
                        idx = tgt.index(gg + offs.get(n + 1, 0), p)
                        vec[idx] = F.reduce(vec[idx] + x)
            out.append(tuple(vec))
        for g, w in enumerate(bmod.gens):
            db = B.diffs[n][g] if n in B.mods else ()
            vec = [F.zero] * tgt.rep.dims[w]
            if db:
                for x, (gg, p) in zip(db, B.module(n + 1).labels[w]):
                    if x != 0:
                        idx = tgt.index(gg + offs.get(n + 1, 0), p)
                        vec[idx] = F.reduce(vec[idx] + x)
            out.append(tuple(vec))
        diffs[n] = out
    C = Complex(q, mods, diffs)
    incl = {}
    for n in B.degrees():
        cm = C.module(n)
        imgs = []
        for g, w in enumerate(B.module(n).gens):
            vec = [F.zero] * cm.rep.dims[w]
            vec[cm.index(g + offs[n], ())] = F.one
            imgs.append(tuple(vec))
        incl[n] = imgs
    return ConeComplex(C, ChainMap(B, C, incl), offs)


def projection_to_source(cc: ConeComplex, A: Complex, G: ChainMap) -> ChainMap:
    """Compose ``G`` (into the cone) with the projection onto A^{n+1}, per degree n.

    The result lands in the complex A shifted by one (degree n holds A^{n+1});
    callers read it through :func:`extract_morphism` with sign correction.
    """
    F = A.quiver.field
    out = {}
    for n, imgs in G.images.items():
        cm = cc.complex.module(n)
        am = A.module(n + 1)
        gens = G.source.module(n).gens
        res = []
        for g, x in enumerate(imgs):
            w = gens[g]
            vec = [F.zero] * am.rep.dims[w]
            for c, (gg, p) in zip(x, cm.labels[w]):
                if c != 0 and gg < cc.proj_offsets[n]:
                    vec[am.index(gg, p)] = c
            res.append(tuple(vec))
        out[n] = res
    shifted = Complex(A.quiver, {n - 1: m for n, m in A.mods.items()},
                      {n - 1: d for n, d in A.diffs.items()})
    return ChainMap(G.source, shifted, out)


# normal forms -------------------------------------------------------------

@dataclass
class NormalForm:
    obj: DbObject
    res: Resolution
    iota: ChainMap  # resolution of obj -> complex (quasi-isomorphism)


def normal_form(C: Complex, seed: int = 0) -> NormalForm:
    q = C.quiver
    copies = []  # (canonical rep, shift, lift matrices W_v -> C^n_v)
    for n in C.degrees():
        dn = C.dmat(n)
        Cn = C.module(n).rep
        kb = [kernel_basis(dn.mats[v]) if Cn.dims[v] else [] for v in range(q.n)]
        Z, zinc = subrep(Cn, kb)
        if Z.is_zero():
            continue
        dprev = C.dmat(n - 1)
        bb = []
        for v in range(q.n):
            if Z.dims[v] == 0 or dprev.mats[v].ncols == 0:
                bb.append([])
                continue
            coords = solve_many(zinc.mats[v], dprev.mats[v])
            if coords is None:
                raise QuiverError("boundaries are not cycles")
            if coords.ncols:
                _, piv = coords.rref()
                bb.append([coords.column(c) for c in piv])
            else:
                bb.append([])
        H, hproj, sect = quotient(Z, bb)
        if H.is_zero():
            continue
        d = decompose(H, seed)
        if not d.complete:
            raise IndeterminateError("cohomology decomposition not certified; rerun over a prime field")
        for W, embs in d.parts:
            Wc, iso = canonical_form(W, seed)
            for e in embs:
                lift = [zinc.mats[v] @ sect[v] @ e.mats[v] @ iso.mats[v] for v in range(q.n)]
                copies.append((Wc, -n, lift))
    counts = {}
    for Wc, s, _ in copies:
        k = (id(Wc), s)
        counts[k] = (Wc, s, counts.get(k, (Wc, s, 0))[2] + 1)
    obj = DbObject(q, list(counts.values()))
    slots = {}
    for i, (r, s) in enumerate(obj.copies()):
        slots.setdefault((id(r), s), []).append(i)
    lifts = [None] * len(obj.copies())
    for Wc, s, lift in copies:
        lifts[slots[(id(Wc), s)].pop(0)] = lift
    R = resolve(obj)
    images = {n: [None] * len(m.gens) for n, m in R.complex.mods.items()}
    for (res, n0, off0, off1), lift in zip(R.layout, lifts):
        W = res.M
        imgs0 = []
        for g, (v, k) in enumerate(res.gens0):
            col = lift[v].column(k)
            imgs0.append(col)
            images[n0][off0 + g] = col
        iota0 = res.P0.map_to(C.module(n0).rep, imgs0)
        dprev = C.dmat(n0 - 1)
        for h, (a, k) in enumerate(res.gens1):
            t = q.tgt[a]
            dv = res.d.mats[t].column(res.P1.index(h, ()))
            y = iota0.mats[t].apply(dv) if iota0.mats[t].nrows else ()
            if dprev.mats[t].ncols == 0:
                if any(c != 0 for c in y):
                    raise QuiverError("relation is not a boundary")
                z = ()
            else:
                z = solve(dprev.mats[t], y)
                if z is None:
                    raise QuiverError("relation is not a boundary")
            images[n0 - 1][off1 + h] = tuple(z)
    return NormalForm(obj, R, ChainMap(R.complex, C, images))


def factor_through(phi: ChainMap, RA: Resolution, nf: NormalForm) -> DbMorphism:
    """Find G: A -> H with iota o R(G) homotopic to ``phi``.

    Unknowns are the coordinates of G in the Hom-space basis and the
    generator images of a homotopy s (degree -1).  The equation
    iota R(G) - phi = d s + s d is imposed on every generator of R(A).
    """
    from .objects import hom_space

    A, H = RA.obj, nf.obj
    C = phi.target
    q = A.quiver
    F = q.field
    CA = RA.complex
    basis = hom_space(A, H)
    cols_basis = []
    for b in basis:
        cm = nf.iota.compose_after(chain_map_of(b, RA, nf.res))
        cols_basis.append(cm)
    # homotopy unknowns
    hvars = {}
    nv = len(basis)
    for n in CA.degrees():
        for g, w in enumerate(CA.mods[n].gens):
            dimw = C.module(n - 1).rep.dims[w]
            hvars[(n, g)] = (nv, dimw)
            nv += dimw
    rows, rhs = [], []
    for n in CA.degrees():
        cm = C.module(n)
        dC = C.dmat(n - 1)
        for g, w in enumerate(CA.mods[n].gens):
            dim = cm.rep.dims[w]
            if dim == 0:
                continue
            block = [[F.zero] * nv for _ in range(dim)]
            for bi, cmb in enumerate(cols_basis):
                x = cmb.images[n][g]
                for r in range(dim):
                    block[r][bi] = x[r]
            # - d_C s(g)
            o, dd = hvars[(n, g)]
            for r in range(dim):
                for c in range(dd):
                    val = dC.mats[w].rows[r][c]
                    if val != 0:
                        block[r][o + c] = F.reduce(block[r][o + c] - val)
            # - s(d_A g)
            dvec = CA.diffs[n][g] if n in CA.diffs else ()
            nxt = CA.module(n + 1)
            for x, (gg, p) in zip(dvec, nxt.labels[w]):
                if x == 0:
                    continue
                o2, d2 = hvars[(n + 1, gg)]
                start = nxt.gens[gg]
                P = C.module(n).rep.path_map(p, start)
                for r in range(dim):
                    for c in range(d2):
                        val = P.rows[r][c]
                        if val != 0:
                            block[r][o2 + c] = F.reduce(block[r][o2 + c] - x * val)
            rows.extend(block)
            rhs.extend(phi.images[n][g])
    if not rows:
        return DbMorphism.zero(A, H)
    sol = solve(Matrix(F, len(rows), nv, rows), rhs)
    if sol is None:
        raise QuiverError("chain map does not factor through the normal form")
    out = DbMorphism.zero(A, H)
    for c, b in zip(sol[:len(basis)], basis):
        if c != 0:
            out = out + b.scale(c)
    return out
