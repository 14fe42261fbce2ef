"""Cones, triangle certificates and their verification."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

from ..exactfield import Matrix
from ..homalg import realize_extension
from ..quiverrep import morphism_parts
from .complexes import (
    ConeComplex,
    NormalForm,
    Resolution,
    chain_map_of,
    cone_complex,
    extract_morphism,
    factor_through,
    normal_form,
    projection_to_source,
    resolve,
)
from .objects import (
    DbMorphism,
    DbObject,
    compose,
    ext_cocycle_at,
    hom_space,
    module_morphism_at,
)


class ConsistencyError(RuntimeError):
    """Two independent computations of the same object disagree."""


@dataclass
class Cone:
    """A completed triangle A --f--> B --g--> C --h--> A[1]."""

    f: DbMorphism
    obj: DbObject
    nf: NormalForm
    cc: ConeComplex
    RA: Resolution
    RB: Resolution
    _g: DbMorphism | None = None
    _h: DbMorphism | None = None

    @property
    def g(self) -> DbMorphism:
        """B -> C, found by factoring the inclusion through the normal form."""
        if self._g is None:
            self._g = factor_through(self.cc.incl, self.RB, self.nf)
        return self._g

    @property
    def h(self) -> DbMorphism:
        """C -> A[1], read off the projection composed with the normal-form map."""
        if self._h is None:
            G = projection_to_source(self.cc, self.RA.complex, self.nf.iota)
            self._h = extract_morphism(G, self.nf.res, resolve(self.f.source.shift(1)), signs=True)
        return self._h

    def cert(self) -> "TriangleCert":
        return TriangleCert(self.f, self.obj)


def closed_form_cone(f: DbMorphism, seed: int = 0):
    """Cone of a morphism with only Hom or only Ext components, else ``None``."""
    q = f.source.quiver
    kinds = f.kinds()
    shifts = sorted(set(f.source.shifts()) | set(f.target.shifts()))
    items = []
    if kinds <= {"hom"}:
        for s in shifts:
            _, _, g, _, _ = module_morphism_at(f, s)
            parts = morphism_parts(g)
            items.append((parts.cokernel, s))
            items.append((parts.kernel, s + 1))
        return DbObject.from_summands(q, items, seed)
    if kinds == {"ext"}:
        src = set(f.source.shifts())
        for s in f.source.shifts():
            SM, SN, phi = ext_cocycle_at(f, s)
            items.append((realize_extension(phi, SM, SN).E, s + 1))
        for t in f.target.shifts():
            if t - 1 not in src:
                for _, r in f.target.module_part(t):
                    items.append((r, t))
        return DbObject.from_summands(q, items, seed)
    return None


def cone_full(f: DbMorphism, seed: int = 0, cross_check: bool = True) -> Cone:
    RA, RB = resolve(f.source), resolve(f.target)
    F = chain_map_of(f, RA, RB)
    cc = cone_complex(F)
    nf = normal_form(cc.complex, seed)
    if cross_check:
        closed = closed_form_cone(f, seed)
        if closed is not None and closed != nf.obj:
            raise ConsistencyError(
                f"cone backend gave {nf.obj.describe()} but the closed form gives {closed.describe()}")
    return Cone(f, nf.obj, nf, cc, RA, RB)


def cone(f: DbMorphism, seed: int = 0):
    """``(C, TriangleCert)`` for the triangle A -> B -> C -> A[1]."""
    c = cone_full(f, seed)
    return c.obj, c.cert()


def cocone(f: DbMorphism, seed: int = 0) -> Cone:
    """Cone data of f; the cocone is ``result.obj.shift(-1)``."""
    return cone_full(f, seed)


@dataclass
class TriangleCert:
    """Certificate that A --f--> B -> C -> A[1] is distinguished."""

    f: DbMorphism
    C: DbObject

    @property
    def A(self) -> DbObject:
        return self.f.source

    @property
    def B(self) -> DbObject:
        return self.f.target

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.A.describe().encode())
        h.update(self.B.describe().encode())
        h.update(self.C.describe().encode())
        h.update(repr(self.f.coordinates()).encode())
        return h.hexdigest()[:16]

    def rotate(self, seed: int = 0) -> "TriangleCert":
        """B --g--> C -> A[1]."""
        c = cone_full(self.f, seed)
        if c.obj != self.C:
            raise ConsistencyError("certificate does not describe the cone of f")
        return TriangleCert(c.g, self.A.shift(1))


@dataclass
class VerifyResult:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _rank(field, vecs, dim) -> int:
    if not vecs or dim == 0:
        return 0
    return Matrix.from_columns(field, dim, vecs).rank()


def induced_rank(P: DbObject, f: DbMorphism, k: int) -> int:
    """Rank of Hom(P, A[k]) -> Hom(P, B[k]) given by composition with f."""
    fk = f.shift(k)
    src = hom_space(P, fk.source)
    if not src:
        return 0
    imgs = [compose(fk, b).coordinates() for b in src]
    return _rank(P.field, imgs, len(imgs[0]))


def degree_window(P: DbObject, objs: Sequence[DbObject]) -> range:
    ps = P.shifts() or [0]
    os_ = [s for o in objs for s in o.shifts()] or [0]
    return range(min(ps) - max(os_) - 2, max(ps) - min(os_) + 3)


def triangle_verify(T: TriangleCert, probes: Sequence[DbObject], seed: int = 0) -> VerifyResult:
    """Cone identity plus long-exact Hom bookkeeping for every probe and degree."""
    from .objects import hom_db

    try:
        c = cone_full(T.f, seed)
    except ConsistencyError as exc:
        return VerifyResult(False, str(exc))
    if c.obj != T.C:
        return VerifyResult(False, f"cone is {c.obj.describe()}, certificate claims {T.C.describe()}")
    A, B, C = T.A, T.B, T.C
    for pi, P in enumerate(probes):
        ranks = {}
        for k in degree_window(P, [A, B, C]):
            for kk in (k, k + 1):
                if kk not in ranks:
                    ranks[kk] = induced_rank(P, T.f, kk)
            lhs = hom_db(P, C, k)
            rhs = (hom_db(P, B, k) - ranks[k]) + (hom_db(P, A, k + 1) - ranks[k + 1])
            if lhs != rhs:
                return VerifyResult(False, f"probe {pi} degree {k}: dim Hom(P,C[k]) = {lhs}, sequence predicts {rhs}")
    return VerifyResult(True)
