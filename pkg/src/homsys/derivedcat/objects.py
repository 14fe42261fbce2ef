"""Normalized objects and morphisms of the bounded derived category of kQ.

Every object is a finite sum of shifted indecomposable representations,
stored in Krull-Schmidt normal form with canonical representatives.  A
morphism is a matrix of components between the expanded summand copies;
hereditarity leaves only Hom components (equal shifts) and Ext^1 classes
(target shift one higher).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..exactfield import Matrix
from ..homalg import ext1_space
from ..quiverrep import (
    Quiver,
    QuiverError,
    Rep,
    RepMorphism,
    canonical_form,
    decompose,
    dual_rep,
    hom_basis,
    hom_coordinates,
    registry_index,
)


class IndeterminateError(RuntimeError):
    """Raised when a decomposition could not be certified complete."""


class DbObject:
    """Formal sum of shifted indecomposables ``M[s]^m`` in canonical order."""

    __slots__ = ("quiver", "entries", "_copies")

    def __init__(self, quiver: Quiver, entries: Sequence[tuple] = ()):
        self.quiver = quiver
        ents = [(r, int(s), int(m)) for r, s, m in entries if m > 0]
        ents.sort(key=lambda e: (e[1], registry_index(e[0])))
        for a, b in zip(ents, ents[1:]):
            if a[0] is b[0] and a[1] == b[1]:
                raise QuiverError("repeated (class, shift) entry")
        self.entries = tuple(ents)
        self._copies = None

    # construction ----------------------------------------------------
    @classmethod
    def zero(cls, quiver: Quiver) -> "DbObject":
        return cls(quiver, ())

    @classmethod
    def from_summands(cls, quiver: Quiver, items: Iterable[tuple], seed: int = 0) -> "DbObject":
        """Normalize ``(Rep, shift[, mult])`` items; reps may be decomposable."""
        return normalize_with_maps(quiver, items, seed)[0]

    @classmethod
    def from_rep(cls, M: Rep, shift: int = 0, mult: int = 1, seed: int = 0) -> "DbObject":
        return cls.from_summands(M.quiver, [(M, shift, mult)], seed)

    # inspection --------------------------------------------------------
    @property
    def field(self):
        return self.quiver.field

    def copies(self) -> list:
        """Expanded list of ``(rep, shift)``, one item per summand copy."""
        if self._copies is None:
            self._copies = [(r, s) for r, s, m in self.entries for _ in range(m)]
        return self._copies

    def is_zero(self) -> bool:
        return not self.entries

    def shifts(self) -> list:
        return sorted({s for _, s, _ in self.entries})

    def total_mult(self) -> int:
        return sum(m for _, _, m in self.entries)

    def is_indecomposable(self) -> bool:
        return len(self.entries) == 1 and self.entries[0][2] == 1

    def module_part(self, shift: int) -> list:
        """Copies living at ``shift`` as ``(copy index, rep)``."""
        return [(i, r) for i, (r, s) in enumerate(self.copies()) if s == shift]

    def shift(self, n: int) -> "DbObject":
        return DbObject(self.quiver, [(r, s + n, m) for r, s, m in self.entries])

    def __add__(self, other: "DbObject") -> "DbObject":
        return direct_sum_objects([self, other])[0]

    def power(self, m: int) -> "DbObject":
        return DbObject(self.quiver, [(r, s, k * m) for r, s, k in self.entries])

    def key(self):
        return tuple((registry_index(r), s, m) for r, s, m in self.entries)

    def __eq__(self, other):
        return isinstance(other, DbObject) and self.quiver == other.quiver and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def describe(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for r, s, m in self.entries:
            txt = "(" + ",".join(map(str, r.dims)) + ")"
            if s:
                txt += f"[{s}]"
            if m > 1:
                txt += f"^{m}"
            parts.append(txt)
        return " + ".join(parts)

    __repr__ = lambda self: f"DbObject({self.describe()})"


def normalize_with_maps(quiver: Quiver, items: Iterable[tuple], seed: int = 0):
    """Normal form plus, per input item, the list of ``(copy index, iso)``.

    ``iso`` maps the canonical copy into the item's representation.
    """
    pieces = []  # (canonical rep, shift, item index, embedding)
    items = list(items)
    for idx, it in enumerate(items):
        M, s = it[0], it[1]
        mult = it[2] if len(it) > 2 else 1
        if M.quiver != quiver:
            raise QuiverError("summand lives on a different quiver")
        if M.is_zero():
            continue
        d = decompose(M, seed)
        if not d.complete:
            raise IndeterminateError("decomposition not certified; rerun over a prime field")
        for W, embs in d.parts:
            Wc, iso = canonical_form(W, seed)
            for _ in range(mult):
                for e in embs:
                    pieces.append((Wc, s, idx, e @ iso))
    counts = {}
    for Wc, s, _, _ in pieces:
        counts[(id(Wc), s)] = (Wc, s, counts.get((id(Wc), s), (Wc, s, 0))[2] + 1)
    obj = DbObject(quiver, list(counts.values()))
    slots = {}
    for i, (r, s) in enumerate(obj.copies()):
        slots.setdefault((id(r), s), []).append(i)
    maps = [[] for _ in items]
    for Wc, s, idx, e in pieces:
        maps[idx].append((slots[(id(Wc), s)].pop(0), e))
    return obj, maps


def direct_sum_objects(objs: Sequence[DbObject]):
    """Direct sum with the copy-index placement of every summand's copies."""
    if not objs:
        raise QuiverError("empty direct sum")
    q = objs[0].quiver
    counts = {}
    for o in objs:
        for r, s, m in o.entries:
            k = (id(r), s)
            counts[k] = (r, s, counts.get(k, (r, s, 0))[2] + m)
    S = DbObject(q, list(counts.values()))
    slots = {}
    for i, (r, s) in enumerate(S.copies()):
        slots.setdefault((id(r), s), []).append(i)
    placement = []
    for o in objs:
        placement.append([slots[(id(r), s)].pop(0) for r, s in o.copies()])
    return S, placement


class DbMorphism:
    """Morphism between normalized objects, stored componentwise.

    ``comps`` maps ``(source copy, target copy)`` to ``("hom", RepMorphism)``
    or ``("ext", coordinates)``; missing keys are zero.
    """

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: DbObject, target: DbObject, comps: dict | None = None, check: bool = True):
        self.source = source
        self.target = target
        self.comps = {}
        sc, tc = source.copies(), target.copies()
        for (i, j), (kind, val) in (comps or {}).items():
            gap = tc[j][1] - sc[i][1]
            if kind == "hom":
                if gap != 0:
                    raise QuiverError(f"Hom component between shifts {sc[i][1]} and {tc[j][1]}")
                if check:
                    val.validate()
                if not val.is_zero():
                    self.comps[(i, j)] = ("hom", val)
            elif kind == "ext":
                if gap != 1:
                    raise QuiverError(f"Ext component between shifts {sc[i][1]} and {tc[j][1]}")
                val = tuple(source.field.reduce(x) for x in val)
                if any(x != 0 for x in val):
                    self.comps[(i, j)] = ("ext", val)
            else:
                raise QuiverError(f"unknown component kind {kind!r}")

    @classmethod
    def zero(cls, A: DbObject, B: DbObject) -> "DbMorphism":
        return cls(A, B, {}, check=False)

    @classmethod
    def identity(cls, A: DbObject) -> "DbMorphism":
        return cls(A, A, {(i, i): ("hom", r.identity()) for i, (r, _) in enumerate(A.copies())}, check=False)

    def is_zero(self) -> bool:
        return not self.comps

    def kinds(self) -> set:
        return {k for k, _ in self.comps.values()}

    def __add__(self, other: "DbMorphism") -> "DbMorphism":
        out = dict(self.comps)
        for key, (kind, val) in other.comps.items():
            if key in out:
                k0, v0 = out[key]
                if kind == "hom":
                    out[key] = ("hom", v0 + val)
                else:
                    out[key] = ("ext", tuple(a + b for a, b in zip(v0, val)))
            else:
                out[key] = (kind, val)
        return DbMorphism(self.source, self.target, out, check=False)

    def scale(self, c) -> "DbMorphism":
        out = {}
        for key, (kind, val) in self.comps.items():
            out[key] = (kind, val.scale(c)) if kind == "hom" else (kind, tuple(c * x for x in val))
        return DbMorphism(self.source, self.target, out, check=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "DbMorphism") -> "DbMorphism":
        return compose(self, other)

    def shift(self, n: int) -> "DbMorphism":
        return DbMorphism(self.source.shift(n), self.target.shift(n), dict(self.comps), check=False)

    def restrict(self, src_idx: Sequence[int] | None = None, tgt_idx: Sequence[int] | None = None,
                 source: DbObject | None = None, target: DbObject | None = None) -> "DbMorphism":
        """Submatrix on chosen copies; ``source``/``target`` give the sub-objects."""
        smap = {i: k for k, i in enumerate(src_idx)} if src_idx is not None else None
        tmap = {j: k for k, j in enumerate(tgt_idx)} if tgt_idx is not None else None
        out = {}
        for (i, j), c in self.comps.items():
            if (smap is None or i in smap) and (tmap is None or j in tmap):
                out[(smap[i] if smap else i, tmap[j] if tmap else j)] = c
        return DbMorphism(source or self.source, target or self.target, out, check=False)

    def coordinates(self) -> tuple:
        """Coordinates in the basis returned by :func:`hom_space`."""
        out = []
        F = self.source.field
        for i, j, kind, dim in hom_layout(self.source, self.target):
            c = self.comps.get((i, j))
            if c is None:
                out.extend([F.zero] * dim)
            elif kind == "hom":
                out.extend(hom_coordinates(c[1]))
            else:
                out.extend(c[1])
        return tuple(out)

    def __eq__(self, other):
        return (isinstance(other, DbMorphism) and self.source == other.source and self.target == other.target
                and self.coordinates() == other.coordinates())

    def __repr__(self):
        return f"DbMorphism({self.source.describe()} -> {self.target.describe()}, {len(self.comps)} components)"


def hom_layout(A: DbObject, B: DbObject) -> list:
    """``(i, j, kind, dim)`` for every copy pair with a nonzero Hom space."""
    out = []
    bc = B.copies()
    for i, (M, s) in enumerate(A.copies()):
        for j, (N, t) in enumerate(bc):
            if t == s:
                d = len(hom_basis(M, N))
                if d:
                    out.append((i, j, "hom", d))
            elif t == s + 1:
                d = ext1_space(M, N).dim
                if d:
                    out.append((i, j, "ext", d))
    return out


def hom_space(A: DbObject, B: DbObject) -> list:
    """Basis of Hom(A, B) in degree 0, ordered by :func:`hom_layout`."""
    basis = []
    bc, ac = B.copies(), A.copies()
    for i, j, kind, dim in hom_layout(A, B):
        if kind == "hom":
            for f in hom_basis(ac[i][0], bc[j][0]):
                basis.append(DbMorphism(A, B, {(i, j): ("hom", f)}, check=False))
        else:
            for k in range(dim):
                basis.append(DbMorphism(A, B, {(i, j): ("ext", tuple(1 if x == k else 0 for x in range(dim)))},
                                        check=False))
    return basis


def from_coordinates(A: DbObject, B: DbObject, coords: Sequence) -> DbMorphism:
    out = DbMorphism.zero(A, B)
    for c, b in zip(coords, hom_space(A, B)):
        if c != 0:
            out = out + b.scale(c)
    return out


def hom_db(X: DbObject, Y: DbObject, k: int = 0) -> int:
    """dim Hom(X, Y[k]), additive over summands."""
    total = 0
    for M, s, m in X.entries:
        for N, t, n in Y.entries:
            gap = t + k - s
            if gap == 0:
                total += m * n * len(hom_basis(M, N))
            elif gap == 1:
                total += m * n * ext1_space(M, N).dim
    return total


def shift(X, n: int):
    return X.shift(n)


def _compose_component(g, f, L: Rep, N: Rep):
    """Compose g after f where f: L -> M and g: M -> N as typed components."""
    gk, gv = g
    fk, fv = f
    if fk == "hom" and gk == "hom":
        return ("hom", gv @ fv)
    if fk == "ext" and gk == "ext":
        return None
    if fk == "hom":  # pull back the class along f
        M = fv.target
        X = ext1_space(M, N)
        phi = X.cocycle(gv)
        q = L.quiver
        psi = [phi[a] @ fv.mats[s] for a, s in enumerate(q.src)]
        return ("ext", ext1_space(L, N).coordinates(psi))
    M = gv.source  # push the class forward along g
    X = ext1_space(L, M)
    phi = X.cocycle(fv)
    q = L.quiver
    psi = [gv.mats[t] @ phi[a] for a, t in enumerate(q.tgt)]
    return ("ext", ext1_space(L, N).coordinates(psi))


def compose(g: DbMorphism, f: DbMorphism) -> DbMorphism:
    """``g o f``."""
    if f.target != g.source:
        raise QuiverError("morphisms are not composable")
    by_mid = {}
    for (m, j), c in g.comps.items():
        by_mid.setdefault(m, []).append((j, c))
    out = {}
    sc, tc = f.source.copies(), g.target.copies()
    for (i, m), fc in f.comps.items():
        for j, gc in by_mid.get(m, ()):
            c = _compose_component(gc, fc, sc[i][0], tc[j][0])
            if c is None:
                continue
            if (i, j) in out:
                k0, v0 = out[(i, j)]
                out[(i, j)] = (k0, v0 + c[1]) if k0 == "hom" else (k0, tuple(a + b for a, b in zip(v0, c[1])))
            else:
                out[(i, j)] = c
    return DbMorphism(f.source, g.target, out, check=False)


def inclusion(S: DbObject, placement: Sequence[int], A: DbObject) -> DbMorphism:
    """Split inclusion of the summand A placed at ``placement`` inside S."""
    return DbMorphism(A, S, {(i, j): ("hom", A.copies()[i][0].identity()) for i, j in enumerate(placement)},
                      check=False)


def projection(S: DbObject, placement: Sequence[int], A: DbObject) -> DbMorphism:
    return DbMorphism(S, A, {(j, i): ("hom", A.copies()[i][0].identity()) for i, j in enumerate(placement)},
                      check=False)


def sub_object(A: DbObject, idx: Sequence[int]) -> DbObject:
    """Summand of A on the chosen copies (indices must respect canonical order)."""
    cp = A.copies()
    counts = {}
    for i in idx:
        r, s = cp[i]
        k = (id(r), s)
        counts[k] = (r, s, counts.get(k, (r, s, 0))[2] + 1)
    return DbObject(A.quiver, list(counts.values()))


def hstack(target: DbObject, parts: Sequence[DbMorphism]):
    """Morphism from the direct sum of the sources, assembled from parts."""
    S, placement = direct_sum_objects([p.source for p in parts])
    out = DbMorphism.zero(S, target)
    for p, pl in zip(parts, placement):
        out = out + DbMorphism(S, target, {(pl[i], j): c for (i, j), c in p.comps.items()}, check=False)
    return out, placement


def vstack(source: DbObject, parts: Sequence[DbMorphism]):
    """Morphism into the direct sum of the targets, assembled from parts."""
    S, placement = direct_sum_objects([p.target for p in parts])
    out = DbMorphism.zero(source, S)
    for p, pl in zip(parts, placement):
        out = out + DbMorphism(source, S, {(i, pl[j]): c for (i, j), c in p.comps.items()}, check=False)
    return out, placement


# duality ------------------------------------------------------------------

def dual_object(X: DbObject, seed: int = 0) -> DbObject:
    """Vector-space duality: ``M[s]`` becomes ``DM[-s]`` over the opposite quiver."""
    return dual_object_with_map(X, seed)[0]


def dual_object_with_map(X: DbObject, seed: int = 0):
    """Dual object plus, per copy of X, ``(dual copy index, iso canonical -> D(rep))``."""
    qop = X.quiver.opposite()
    items = [(dual_rep(r, qop), -s) for r, s in X.copies()]
    obj, maps = normalize_with_maps(qop, items, seed)
    return obj, [m[0] for m in maps]


def dual_morphism(f: DbMorphism, seed: int = 0) -> DbMorphism:
    """Transpose ``f: A -> B`` to ``D f: DB -> DA``."""
    DA, amap = dual_object_with_map(f.source, seed)
    DB, bmap = dual_object_with_map(f.target, seed)
    ac, bc = f.source.copies(), f.target.copies()
    out = {}
    for (i, j), (kind, val) in f.comps.items():
        ii, iso_a = amap[i]  # canonical -> D(M_i)
        jj, iso_b = bmap[j]
        M, N = ac[i][0], bc[j][0]
        if kind == "hom":
            t = [m.T for m in val.mats]  # D N -> D M
            mats = [iso_a.inverse().mats[v] @ t[v] @ iso_b.mats[v] for v in range(len(t))]
            out[(jj, ii)] = ("hom", RepMorphism(DB.copies()[jj][0], DA.copies()[ii][0], mats, check=False))
        else:
            phi = ext1_space(M, N).cocycle(val)
            # arrow a: s -> t in Q is t -> s in Q^op; phi_a: M_s -> N_t transposes to DN_t -> DM_s
            ainv = iso_a.inverse()
            q = M.quiver
            psi = [ainv.mats[q.src[a]] @ phi[a].T @ iso_b.mats[q.tgt[a]] for a in range(q.narrows)]
            X = ext1_space(DB.copies()[jj][0], DA.copies()[ii][0])
            out[(jj, ii)] = ("ext", X.coordinates(psi))
    return DbMorphism(DB, DA, out, check=False)


def morphism_from_matrix_blocks(A: DbObject, B: DbObject, blocks: dict) -> DbMorphism:
    return DbMorphism(A, B, blocks)


def module_morphism_at(f: DbMorphism, shift: int):
    """Assemble the Hom components at one shift into a module map.

    Returns ``(source rep, target rep, RepMorphism, source copies, target copies)``
    with the direct sums taken in copy order.
    """
    from ..quiverrep import direct_sum

    q = f.source.quiver
    F = q.field
    si = [i for i, (_, s) in enumerate(f.source.copies()) if s == shift]
    tj = [j for j, (_, s) in enumerate(f.target.copies()) if s == shift]
    Ms = [f.source.copies()[i][0] for i in si]
    Ns = [f.target.copies()[j][0] for j in tj]
    SM, _, _ = direct_sum(Ms, q)
    SN, _, _ = direct_sum(Ns, q)
    mats = []
    for v in range(q.n):
        m = Matrix.zeros(F, SN.dims[v], SM.dims[v])
        ro = 0
        for j, N in zip(tj, Ns):
            co = 0
            for i, M in zip(si, Ms):
                c = f.comps.get((i, j))
                if c is not None and c[0] == "hom":
                    blk = c[1].mats[v]
                    for a in range(blk.nrows):
                        for b in range(blk.ncols):
                            m.rows[ro + a][co + b] = blk.rows[a][b]
                co += M.dims[v]
            ro += N.dims[v]
        mats.append(m)
    return SM, SN, RepMorphism(SM, SN, mats, check=False), si, tj


def ext_cocycle_at(f: DbMorphism, shift: int):
    """Assemble the Ext components from ``shift`` to ``shift + 1`` into one cocycle.

    Returns ``(source rep, target rep, per-arrow cocycle)`` over copy-ordered sums.
    """
    from ..quiverrep import direct_sum

    q = f.source.quiver
    F = q.field
    si = [i for i, (_, s) in enumerate(f.source.copies()) if s == shift]
    tj = [j for j, (_, s) in enumerate(f.target.copies()) if s == shift + 1]
    Ms = [f.source.copies()[i][0] for i in si]
    Ns = [f.target.copies()[j][0] for j in tj]
    SM, _, _ = direct_sum(Ms, q)
    SN, _, _ = direct_sum(Ns, q)
    phi = []
    cocycles = {}
    for (i, j), (kind, val) in f.comps.items():
        if kind == "ext" and i in si and j in tj:
            cocycles[(i, j)] = ext1_space(f.source.copies()[i][0], f.target.copies()[j][0]).cocycle(val)
    for a, (s, t) in enumerate(zip(q.src, q.tgt)):
        m = Matrix.zeros(F, SN.dims[t], SM.dims[s])
        ro = 0
        for j, N in zip(tj, Ns):
            co = 0
            for i, M in zip(si, Ms):
                c = cocycles.get((i, j))
                if c is not None:
                    blk = c[a]
                    for x in range(blk.nrows):
                        for y in range(blk.ncols):
                            m.rows[ro + x][co + y] = blk.rows[x][y]
                co += M.dims[s]
            ro += N.dims[t]
        phi.append(m)
    return SM, SN, phi
