"""Precovers, approximation triangles and the cotorsion-pair desk check."""

from __future__ import annotations

from dataclasses import dataclass

from ..derivedcat import (
    ConsistencyError,
    DbMorphism,
    DbObject,
    TriangleCert,
    compose,
    cone_full,
    hom_db,
    hom_space,
    hstack,
    sub_object,
    triangle_verify,
    vstack,
)
from ..report import Report
from .filtration import (
    FiltrationCertificate,
    MultiplicityError,
    certify,
    factor_map,
    filtration_diagnose,
    reorder_filtration,
)
from .projective import InjectiveSystemData, ProjectiveSystemData
from .system import ThetaSystem


@dataclass
class Precover:
    """N -> Q0 --eps--> M -> N[1] with a certificate for N."""

    Q0: DbObject
    eps: DbMorphism
    N: DbObject
    tri: TriangleCert  # TriangleCert(eps, N[1])
    Ncert: FiltrationCertificate


def _precover_cocone(eps, D, n, seed, above):
    c = cone_full(eps, seed)
    N = c.obj.shift(-1)
    idx = [k for k in range(above + 1, n.t + 1)]
    Ncert = certify(N, D.Q, n, seed, indices=idx)
    return N, c.obj, Ncert


def projective_precover(M: DbObject, cert: FiltrationCertificate | None, D: ProjectiveSystemData,
                        S: ThetaSystem, seed: int = 0, minimal: bool = True) -> Precover:
    """Precover of M by add(Q), following the reverse induction on min(M).

    The top step M' -> M -> Theta(i)^m of an ordered certificate is handled by
    lifting beta_i^m through psi; the rest comes from the precover of M'.
    With ``minimal`` set, summands of Q0 whose component factors through the
    remaining ones are dropped as long as the cocone keeps a certificate with
    all indices above min(M).
    """
    n = S.normalized()
    q = n.theta[0].quiver
    if M.is_zero():
        Z = DbObject.zero(q)
        return Precover(Z, DbMorphism.zero(Z, M), Z, TriangleCert(DbMorphism.zero(Z, M), M),
                        FiltrationCertificate(Z, []))
    if cert is None:
        cert = certify(M, D.Q, n, seed)
    if not cert.is_ordered():
        cert = reorder_filtration(cert, n, seed)
    eps = _precover_map(cert.steps, D, n, seed)
    lo = cert.min
    if minimal:
        eps = _minimize(eps, D, n, seed, lo)
    N, C, Ncert = _precover_cocone(eps, D, n, seed, lo)
    return Precover(eps.source, eps, N, TriangleCert(eps, C), Ncert)


def _precover_map(steps, D, n, seed) -> DbMorphism:
    top = steps[-1]
    M = top.cur
    i, m = top.index, top.mult
    beta = D.beta[i - 1]
    theta_m = n.theta[i - 1].power(m)
    alphas = []
    for k in range(m):
        target_k = _into_copy(beta, theta_m, k)
        a = factor_map(target_k, top.psi)
        if a is None:
            raise ConsistencyError(f"beta_{i} does not lift through the top step")
        alphas.append(a)
    parts = list(alphas)
    if len(steps) > 1:
        lower = _precover_map(steps[:-1], D, n, seed)
        parts.insert(0, compose(top.iota(seed), lower))
    eps, _ = hstack(M, parts)
    return eps


def _into_copy(beta: DbMorphism, power: DbObject, k: int) -> DbMorphism:
    """beta followed by the inclusion of the k-th copy of its target."""
    return DbMorphism(beta.source, power, {(i, k): c for (i, j), c in beta.comps.items()}, check=False)


def _minimize(eps: DbMorphism, D, n, seed, lo) -> DbMorphism:
    k = len(eps.source.copies()) - 1
    while k >= 0 and len(eps.source.copies()) > 1:
        cp = eps.source.copies()
        keep = [j for j in range(len(cp)) if j != k]
        W = sub_object(eps.source, [k])
        R = sub_object(eps.source, keep)
        part = eps.restrict([k], None, source=W)
        rest = eps.restrict(keep, None, source=R)
        if factor_map(part, rest) is not None:
            try:
                _precover_cocone(rest, D, n, seed, lo)
                eps = rest
            except (MultiplicityError, ConsistencyError):
                pass
        k -= 1
    return eps


# approximation triangles --------------------------------------------------------

@dataclass
class Approximation:
    """X -> Y_X -> C_X -> X[1] and X[-1] -> K_X -> Q_X -> X."""

    X: DbObject
    Y: DbObject
    phi: DbMorphism  # X -> Y_X
    C: DbObject
    tri_Y: TriangleCert  # TriangleCert(phi, C_X)
    Ccert: FiltrationCertificate
    Q: DbObject
    psi: DbMorphism  # Q_X -> X
    K: DbObject
    tri_Q: TriangleCert  # TriangleCert(psi, K_X[1])
    Kcert: FiltrationCertificate


def _all_maps_into(U: DbObject, T: DbObject):
    basis = hom_space(U, T)
    if not basis:
        return None
    return vstack(U, basis)[0]


def _all_maps_from(T: DbObject, U: DbObject):
    basis = hom_space(T, U)
    if not basis:
        return None
    return hstack(U, basis)[0]


def approximate(X: DbObject, S: ThetaSystem, D: ProjectiveSystemData, seed: int = 0) -> Approximation:
    """Both approximation triangles of X, one universal step per index."""
    n = S.normalized()
    t = n.t
    # X -> Y_X: kill Hom(Theta(s), -[1]) from s = t down to 1
    N, phi = X, DbMorphism.identity(X)
    for s in range(t, 0, -1):
        h = _all_maps_from(n.theta[s - 1].shift(-1), N)
        if h is None:
            continue
        c = cone_full(h, seed)
        phi = compose(c.g, phi)
        N = c.obj
    Y = N
    cy = cone_full(phi, seed)
    C = cy.obj
    Ccert = certify(C, D.Q, n, seed)
    # Q_X -> X: kill Hom(-, Theta(s)[1]) from s = 1 up to t
    N, psi = X, DbMorphism.identity(X)
    for s in range(1, t + 1):
        h = _all_maps_into(N, n.theta[s - 1].shift(1))
        if h is None:
            continue
        c = cone_full(h, seed)
        psi = compose(psi, c.h.shift(-1))
        N = c.obj.shift(-1)
    Qx = N
    cq = cone_full(psi, seed)
    K = cq.obj.shift(-1)
    Kcert = certify(K, D.Q, n, seed)
    return Approximation(X, Y, phi, C, TriangleCert(phi, C), Ccert, Qx, psi, K, TriangleCert(psi, cq.obj), Kcert)


def in_P(X: DbObject, S: ThetaSystem) -> bool:
    """Hom(X, Theta(j)[1]) = 0 for every j."""
    return all(hom_db(X, th, 1) == 0 for th in S.normalized().theta)


def in_I(X: DbObject, S: ThetaSystem) -> bool:
    """Hom(Theta(j), X[1]) = 0 for every j."""
    return all(hom_db(th, X, 1) == 0 for th in S.normalized().theta)


def in_F(X: DbObject, S: ThetaSystem, D: ProjectiveSystemData, seed: int = 0):
    """``(True, cert)``, ``(False, reason)`` from the solver screen, or ``(None, reason)``."""
    try:
        return True, certify(X, D.Q, S.normalized(), seed)
    except MultiplicityError as exc:
        return False, str(exc)
    except ConsistencyError as exc:
        return None, str(exc)


def cotorsion_check(S: ThetaSystem, D: ProjectiveSystemData, Dinj: InjectiveSystemData, probes,
                    seed: int = 0) -> Report:
    """Approximation decompositions, Ext-orthogonality and core identities on probes.

    Orthogonality is read as Hom(X, Y[1]) = 0.
    """
    n = S.normalized()
    t = n.t
    rep = Report()
    theta = list(n.theta)
    built = []
    w_tri = None
    for pi, X in enumerate(probes):
        try:
            a = approximate(X, n, D, seed)
        except (MultiplicityError, ConsistencyError) as exc:
            w_tri = w_tri or ([pi], str(exc))
            continue
        why = ""
        if not in_I(a.Y, n):
            why = "Y_X is not Theta-injective"
        elif not in_P(a.Q, n):
            why = "Q_X is not Theta-projective"
        else:
            for tri in (a.tri_Y, a.tri_Q):
                res = triangle_verify(tri, theta, seed)
                if not res:
                    why = res.reason
                    break
        why = why or filtration_diagnose(a.C, a.Ccert, range(1, t + 1), n, None, seed)
        why = why or filtration_diagnose(a.K, a.Kcert, range(1, t + 1), n, None, seed)
        if why and w_tri is None:
            w_tri = ([pi], why)
        built.extend([a.C, a.K])
    rep.add("approximation", w_tri is None, witness=w_tri[0] if w_tri else None,
            detail=w_tri[1] if w_tri else "", dims=len(probes))

    w_orth = None
    for i in range(1, t + 1):
        for F in theta + built:
            if w_orth is None and hom_db(D.Q[i - 1], F, 1):
                w_orth = ([S.label(i)], f"Hom(Q, F[1]) != 0 for F = {F.describe()}")
            if w_orth is None and Dinj.Y[i - 1] is not None and hom_db(F, Dinj.Y[i - 1], 1):
                w_orth = ([S.label(i)], f"Hom(F, Y[1]) != 0 for F = {F.describe()}")
    rep.add("ext-orthogonality", w_orth is None, witness=w_orth[0] if w_orth else None,
            detail=w_orth[1] if w_orth else "Hom(X, Y[1]) = 0 convention")

    Qs = {q for q in D.Q}
    Ys = {y for y in Dinj.Y}
    w_core = None
    for pi, X in enumerate(list(probes) + list(D.Q) + list(Dinj.Y)):
        inF, info = in_F(X, n, D, seed)
        if inF is None:
            w_core = w_core or ([pi], f"membership undecided: {info}")
            continue
        pieces = [DbObject.from_summands(X.quiver, [(r, s)]) for r, s in X.copies()]
        if inF and in_P(X, n) and not all(p in Qs for p in pieces):
            w_core = w_core or ([pi], "object of F and P(Theta) outside add(Q)")
        if inF and in_I(X, n) and not all(p in Ys for p in pieces):
            w_core = w_core or ([pi], "object of F and I(Theta) outside add(Y)")
        if all(p in Qs for p in pieces) and not (inF and in_P(X, n)):
            w_core = w_core or ([pi], "object of add(Q) outside F and P(Theta)")
        if all(p in Ys for p in pieces) and not (inF and in_I(X, n)):
            w_core = w_core or ([pi], "object of add(Y) outside F and I(Theta)")
    rep.add("core", w_core is None, witness=w_core[0] if w_core else None, detail=w_core[1] if w_core else "")
    return rep
