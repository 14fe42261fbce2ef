"""Relative projective and injective systems: construction and checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from ..derivedcat import (
    ConsistencyError,
    DbMorphism,
    DbObject,
    TriangleCert,
    compose,
    cone_full,
    dual_object,
    from_coordinates,
    hom_db,
    hom_space,
    sub_object,
    triangle_verify,
    vstack,
)
from ..report import Report
from .filtration import (
    MultiplicityError,
    certify,
    filtration_diagnose,
)
from .system import ThetaSystem


@dataclass
class ProjectiveSystemData:
    """Q(i), K(i), beta_i: Q(i) -> Theta(i), the triangles and K-certificates.

    Lists are indexed by normalized position (entry k-1 for index k).
    """

    Q: list
    K: list
    beta: list
    eta: list  # TriangleCert(beta_i, K(i)[1])
    Kcert: list  # FiltrationCertificate of K(i) by indices > i

    @property
    def t(self) -> int:
        return len(self.Q)


@dataclass
class InjectiveSystemData:
    """Y(i), Z(i) and the dual projective data they come from.

    ``dual`` is projective data for ``system.dual()``; position k there
    corresponds to index t + 1 - k here.
    """

    Y: list
    Z: list
    dual: ProjectiveSystemData
    dual_system: ThetaSystem

    @property
    def t(self) -> int:
        return len(self.Y)


def _stack_basis(U: DbObject, target: DbObject):
    """All morphisms U -> target stacked into U -> target^a (a = dim Hom)."""
    basis = hom_space(U, target)
    if not basis:
        return None
    h, _ = vstack(U, basis)
    return h


def build_projective_system(S: ThetaSystem, seed: int = 0) -> ProjectiveSystemData:
    """Inductive construction of Q(i), from i = t down to 1.

    Start from U_0 = Theta(i); at step k, take the universal triangle for all
    classes U_{k-1} -> Theta(i+k)[1], and keep the indecomposable summand W of
    the cocone whose map to U_{k-1} has cone in add(Theta(i+k)[1]).
    """
    n = S.normalized()
    t = n.t
    Q = [None] * t
    K = [None] * t
    beta = [None] * t
    eta = [None] * t
    Kcert = [None] * t
    for i in range(t, 0, -1):
        U = n.theta[i - 1]
        if not U.is_indecomposable():
            raise ConsistencyError(f"Theta({i}) is not indecomposable")
        b = DbMorphism.identity(U)
        for k in range(1, t - i + 1):
            j = i + k
            target = n.theta[j - 1].shift(1)
            h = _stack_basis(U, target)
            if h is None:
                continue
            c = cone_full(h, seed)
            Unew = c.obj.shift(-1)
            to_U = c.h.shift(-1)  # Unew -> U
            chosen = None
            tj = n.theta[j - 1].shift(1)
            for idx in range(len(Unew.copies())):
                W = sub_object(Unew, [idx])
                iw = to_U.restrict([idx], None, source=W)
                cw = cone_full(iw, seed).obj
                if all(r is tj.entries[0][0] and s == tj.entries[0][1] for r, s, _ in cw.entries):
                    chosen = (W, iw)
                    break
            if chosen is None:
                raise ConsistencyError(f"no summand of the universal cocone passes the selection at ({i},{j})")
            U, iw = chosen
            b = compose(b, iw)
        Q[i - 1] = U
        beta[i - 1] = b
        c = cone_full(b, seed)
        K[i - 1] = c.obj.shift(-1)
        eta[i - 1] = TriangleCert(b, c.obj)
        Kcert[i - 1] = certify(K[i - 1], Q, n, seed, indices=list(range(i + 1, t + 1)))
    return ProjectiveSystemData(Q, K, beta, eta, Kcert)


def projective_data_from_objects(S: ThetaSystem, Qobjs: Sequence[DbObject], seed: int = 0) -> ProjectiveSystemData:
    """Complete user-given Q(i) (normalized order) to full data.

    beta_i is a random morphism Q(i) -> Theta(i) (the unique one up to scalar
    when that Hom space is a line); K(i) certificates are searched with the
    given Q.  Missing triangles or certificates are left as ``None`` and fail
    the PS5 check.
    """
    n = S.normalized()
    t = n.t
    rng = random.Random(seed)
    beta, K, eta, Kcert = [None] * t, [None] * t, [None] * t, [None] * t
    for i in range(1, t + 1):
        basis = hom_space(Qobjs[i - 1], n.theta[i - 1])
        if not basis:
            continue
        coeffs = [1] if len(basis) == 1 else [n.theta[0].field.random(rng, 5) for _ in basis]
        b = from_coordinates(Qobjs[i - 1], n.theta[i - 1], coeffs)
        c = cone_full(b, seed)
        beta[i - 1], K[i - 1], eta[i - 1] = b, c.obj.shift(-1), TriangleCert(b, c.obj)
    for i in range(1, t + 1):
        if K[i - 1] is None:
            continue
        try:
            Kcert[i - 1] = certify(K[i - 1], list(Qobjs), n, seed, indices=list(range(i + 1, t + 1)))
        except (MultiplicityError, ConsistencyError):
            Kcert[i - 1] = None
    return ProjectiveSystemData(list(Qobjs), K, beta, eta, Kcert)


def check_projective_system(S: ThetaSystem, D: ProjectiveSystemData, probes=None, seed: int = 0,
                            labels: str = "PS") -> Report:
    """Axioms PS1-PS5 (witness indices in normalized positions mapped to labels)."""
    rep = Report()
    n = S.normalized()
    t = n.t
    lab = S.label
    rep.add(f"{labels}1", D.t == t and sorted(S.order) == list(range(1, t + 1)), dims=t)
    zero = [lab(k) for k in range(1, t + 1) if n.theta[k - 1].is_zero()]
    rep.add(f"{labels}2", not zero, witness=zero[0] if zero else None)
    w3 = None
    for j in range(1, t + 1):
        for i in range(1, j):
            d = hom_db(n.theta[j - 1], n.theta[i - 1], 0)
            if d and w3 is None:
                w3 = ([lab(j), lab(i)], d)
    rep.add(f"{labels}3", w3 is None, witness=w3[0] if w3 else None, dims=w3[1] if w3 else None)
    w4 = None
    for i in range(1, t + 1):
        Qi = D.Q[i - 1]
        if Qi is None or not Qi.is_indecomposable():
            w4 = w4 or ([lab(i)], "Q not indecomposable")
            continue
        for j in range(1, t + 1):
            for k in (-1, 1):
                d = hom_db(Qi, n.theta[j - 1], k)
                if d and w4 is None:
                    w4 = ([lab(i), lab(j), k], d)
    rep.add(f"{labels}4", w4 is None, witness=w4[0] if w4 else None, dims=w4[1] if w4 else None)
    w5 = None
    probes = list(probes) if probes is not None else list(n.theta)
    for i in range(1, t + 1):
        tri, Kc = D.eta[i - 1], D.Kcert[i - 1]
        if tri is None or Kc is None:
            w5 = ([lab(i)], "missing triangle or certificate")
            break
        if tri.A != D.Q[i - 1] or tri.B != n.theta[i - 1] or tri.C != D.K[i - 1].shift(1):
            w5 = ([lab(i)], "triangle has the wrong terms")
            break
        res = triangle_verify(tri, probes, seed)
        if not res:
            w5 = ([lab(i)], res.reason)
            break
        why = filtration_diagnose(D.K[i - 1], Kc, range(i + 1, t + 1), S, probes, seed)
        if why:
            w5 = ([lab(i)], why)
            break
        d = hom_db(D.K[i - 1].shift(1), n.theta[i - 1], 0)
        if d:
            w5 = ([lab(i)], f"Hom(K[1], Theta) has dimension {d}")
            break
    rep.add(f"{labels}5", w5 is None, witness=w5[0] if w5 else None, detail=w5[1] if w5 else "")
    return rep


# injective side (through duality) ----------------------------------------------

def build_injective_system(S: ThetaSystem, seed: int = 0) -> InjectiveSystemData:
    Sd = S.dual(seed)
    Dd = build_projective_system(Sd, seed)
    return _injective_from_dual(S, Sd, Dd, seed)


def _injective_from_dual(S: ThetaSystem, Sd: ThetaSystem, Dd: ProjectiveSystemData, seed: int):
    t = S.t
    Y = [None] * t
    Z = [None] * t
    for k in range(1, t + 1):
        i = t + 1 - k
        Y[i - 1] = dual_object(Dd.Q[k - 1], seed) if Dd.Q[k - 1] is not None else None
        Z[i - 1] = dual_object(Dd.K[k - 1], seed) if Dd.K[k - 1] is not None else None
    return InjectiveSystemData(Y, Z, Dd, Sd)


def injective_data_from_objects(S: ThetaSystem, Yobjs: Sequence[DbObject], seed: int = 0) -> InjectiveSystemData:
    Sd = S.dual(seed)
    t = S.t
    Qd = [dual_object(Yobjs[t - k], seed) for k in range(1, t + 1)]
    Dd = projective_data_from_objects(Sd, Qd, seed)
    return _injective_from_dual(S, Sd, Dd, seed)


def check_injective_system(S: ThetaSystem, D: InjectiveSystemData, probes=None, seed: int = 0) -> Report:
    """IS1-IS5 as PS1-PS5 of the dual data; witnesses mapped back to original labels."""
    rep = check_projective_system(D.dual_system, D.dual, None, seed, labels="IS")
    n = S.normalized()
    t = n.t
    for v in rep.verdicts:
        if isinstance(v.witness, list):
            v.witness = [S.label(t + 1 - x) if isinstance(x, int) and k < 2 else x for k, x in enumerate(v.witness)]
    return rep


def is_nonsplit(D: ProjectiveSystemData, S: ThetaSystem, i: int, seed: int = 0) -> bool:
    """eta_i does not split: Q(i) is not Theta(i) + K(i)."""
    n = S.normalized()
    return D.Q[i - 1] != n.theta[i - 1] + D.K[i - 1]
