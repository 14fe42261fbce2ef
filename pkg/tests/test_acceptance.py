"""Acceptance suite: one PASS/FAIL line per criterion.

Timed criteria run in a fresh interpreter so that no cache warmed by other
tests can flatter the timing; only the pipeline itself is timed, not imports.
"""

import json
import random
import subprocess
import sys
import textwrap

import pytest

from conftest import P, a3_indecomposables
from homsys.derivedcat import DbObject
from homsys.homalg import ext1_dim, universal_extension_left, universal_extension_right
from homsys.quiverrep import is_isomorphic, linear_quiver, random_rep
from homsys.stratalg import a_delta, endo_algebra, equivalence_probe, exceptional_check, quasi_hereditary_check
from homsys.thetasys import (
    ThetaSystem,
    approximate,
    build_projective_system,
    certify,
    cotorsion_check,
    filtration_verify,
    in_I,
    in_P,
    multiplicities,
    random_filtered,
    reorder_filtration,
)


@pytest.fixture
def verdict(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            line = f"\n[acceptance {n:>2}] {'PASS' if ok else 'FAIL'}  {title}"
            print(line + (f"  ({detail})" if detail else ""))
        assert ok, detail
    return emit


def fresh(script: str) -> dict:
    """Run ``script`` in a new interpreter; it must print one JSON object."""
    proc = subprocess.run([sys.executable, "-c", textwrap.dedent(script)], capture_output=True, text=True,
                          timeout=600)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout.strip().splitlines()[-1])


def test_1_a3_reproduction(verdict):
    res = fresh("""
        import json, time
        from homsys.cli import load_demo, parse_session
        from homsys import stratalg, thetasys as ts
        sess = parse_session(load_demo("a3"))
        t0 = time.perf_counter()
        S = sess.require_theta()
        sys_ok = ts.check_theta_system(S).passed
        es = stratalg.exceptional_check(S.theta)
        D = ts.build_projective_system(S)
        A = stratalg.endo_algebra(D)
        delta = stratalg.a_delta(A)
        ss, _ = stratalg.standardly_stratified_check(A, delta, D, S)
        _, qh = stratalg.quasi_hereditary_check(A, delta)
        elapsed = time.perf_counter() - t0
        off = sum(d for (i, j), d in A.block_dims().items() if i != j)
        print(json.dumps({"sys": sys_ok, "es3": [es["ES3"].passed, es["ES3"].witness, es["ES3"].dims],
                          "q": D.Q == list(S.theta), "dim": A.dim, "off": off,
                          "ss": ss.passed, "qh": qh.passed, "t": elapsed}))
    """)
    ok = (res["sys"] and res["es3"] == [False, [3, 2, 2], 1] and res["q"] and res["dim"] == 3
          and res["off"] == 0 and res["ss"] and res["qh"] and res["t"] < 1.0)
    verdict(1, "I2[0], I2[2], I2[4] system, ES3 witness, A of dim 3, stratified and quasi-hereditary", ok,
            f"{res['t']:.3f} s, ES3 {res['es3']}, dim A {res['dim']}")


def test_2_simples_pipeline(verdict):
    res = fresh("""
        import json, time
        from homsys.derivedcat import DbObject
        from homsys.quiverrep import linear_quiver, special_rep, is_isomorphic
        from homsys import stratalg, thetasys as ts
        q = linear_quiver(3)
        t0 = time.perf_counter()
        S = ts.ThetaSystem([DbObject.from_rep(special_rep(q, "simple", v)) for v in (1, 2, 3)])
        sys_ok = ts.check_theta_system(S).passed
        D = ts.build_projective_system(S)
        Di = ts.build_injective_system(S)

        def certified(objs, kind):
            out = []
            for v, o in enumerate(objs, start=1):
                (r, s, m), = o.entries
                verdict, iso = is_isomorphic(r, special_rep(q, kind, v))
                out.append(verdict == "yes" and s == 0 and m == 1 and iso.is_iso())
            return all(out)

        qs, ys = certified(D.Q, "projective"), certified(Di.Y, "injective")
        A = stratalg.endo_algebra(D)
        Dm = ts.multiplicity_matrix(D.Q, S, [1, 2, 3])
        unitri = all(Dm[i][i] == 1 and all(Dm[i][j] == 0 for j in range(i)) for i in range(3))
        P1 = DbObject.from_rep(special_rep(q, "projective", 1))
        X = ts.multiplicities(P1, D.Q, S)
        elapsed = time.perf_counter() - t0
        print(json.dumps({"sys": sys_ok, "q": qs, "y": ys, "dim": A.dim, "unitri": unitri, "x": X, "t": elapsed}))
    """)
    ok = (res["sys"] and res["q"] and res["y"] and res["dim"] == 6 and res["unitri"] and res["x"] == [1, 1, 1]
          and res["t"] < 1.0)
    verdict(2, "simples on A3: Q = projectives, Y = injectives, dim A = 6, P(1) multiplicities (1,1,1)", ok,
            f"{res['t']:.3f} s, X = {res['x']}")


def test_3_strongly_exceptional(verdict, a3):
    E = [P(a3, 3), P(a3, 2), P(a3, 1)]
    es = exceptional_check(E)
    S_ = ThetaSystem(E)
    A = endo_algebra(build_projective_system(S_))
    statuses, qh = quasi_hereditary_check(A, a_delta(A))
    ok = es.passed and A.dim == 6 and qh.passed
    verdict(3, "(P3, P2, P1) passes ES1-ES4 and gives a quasi-hereditary A of dim 6", ok,
            f"ES {[v.passed for v in es.verdicts]}, dim A {A.dim}, {statuses}")


def test_4_euler_identity(verdict):
    res = fresh("""
        import json, random, time
        from homsys.homalg import ext1_dim
        from homsys.quiverrep import d4_quiver, euler_form, hom_dim, linear_quiver, random_rep
        t0 = time.perf_counter()
        total = good = 0
        for qi, q in enumerate((linear_quiver(3), linear_quiver(4), d4_quiver())):
            rng = random.Random(1000 + qi)
            reps = [random_rep(q, [rng.randint(0, 3) for _ in range(q.n)], rng) for _ in range(200)]
            for M, N in zip(reps, reps[1:] + reps[:1]):
                total += 1
                good += hom_dim(M, N) - ext1_dim(M, N) == euler_form(q, M.dims, N.dims)
        print(json.dumps({"total": total, "good": good, "t": time.perf_counter() - t0}))
    """)
    ok = res["good"] == res["total"] == 600 and res["t"] < 10.0
    verdict(4, "dim Hom - dim Ext1 = Euler form on 200 random reps each of A3, A4, D4", ok,
            f"{res['good']}/{res['total']} in {res['t']:.2f} s")


def _rigid(q, rng):
    while True:
        T = random_rep(q, [rng.randint(0, 2) for _ in range(q.n)], rng)
        if not T.is_zero() and ext1_dim(T, T) == 0:
            return T


def test_5_universal_extensions(verdict):
    right_ok = left_ok = left_applicable = 0
    for k in range(100):
        rng = random.Random(5000 + k)
        q = linear_quiver(3 + k % 2)
        N = random_rep(q, [rng.randint(0, 2) for _ in range(q.n)], rng)
        theta = _rigid(q, rng)
        ses = universal_extension_right(N, theta)
        right_ok += ses.verify() and ext1_dim(theta, ses.E) == 0
        C = random_rep(q, [rng.randint(0, 2) for _ in range(q.n)], rng)
        A = _rigid(q, rng) if k % 2 else random_rep(q, [rng.randint(0, 2) for _ in range(q.n)], rng)
        ses = universal_extension_left(C, A)
        if ext1_dim(A, A) == 0:
            left_applicable += 1
            left_ok += ses.verify() and ext1_dim(ses.E, A) == 0
        else:
            left_ok += ses.verify()
    ok = right_ok == 100 and left_ok == 100
    verdict(5, "universal extensions kill Ext1 on 100 random pairs", ok,
            f"right {right_ok}/100, left {left_ok}/100 ({left_applicable} with Ext1(A, A) = 0)")


def test_6_multiplicity_independence(verdict, simples_system, simples_data):
    good = 0
    for k in range(100):
        rng = random.Random(6000 + k)
        cert = random_filtered(simples_system, rng, rng.randint(1, 5), seed=k)
        M = cert.target
        shuffled = reorder_filtration(cert, simples_system, seed=k)
        other = certify(M, simples_data.Q, simples_system, seed=k + 1)
        X = multiplicities(M, simples_data.Q, simples_system)
        good += (X == cert.counts(3) == shuffled.counts(3) == other.counts(3)
                 and filtration_verify(M, shuffled, range(1, 4), simples_system)
                 and filtration_verify(M, other, range(1, 4), simples_system))
    verdict(6, "solver multiplicities equal the tallies of reordered and re-certified filtrations", good == 100,
            f"{good}/100")


def test_7_approximations(verdict, a3, simples_system, simples_data):
    rng = random.Random(7)
    probes = a3_indecomposables(a3)
    while len(probes) < 56:
        M = random_rep(a3, [rng.randint(0, 2) for _ in range(3)], rng)
        if not M.is_zero():
            probes.append(DbObject.from_rep(M))
    good = 0
    for X in probes:
        a = approximate(X, simples_system, simples_data)
        good += (in_I(a.Y, simples_system) and in_P(a.Q, simples_system)
                 and filtration_verify(a.C, a.Ccert, range(1, 4), simples_system)
                 and filtration_verify(a.K, a.Kcert, range(1, 4), simples_system))
    verdict(7, "approximation triangles for 6 indecomposables and 50 random modules", good == 56, f"{good}/56")


def test_8_equivalence_probe(verdict, simples_system, simples_data):
    A = endo_algebra(simples_data)
    good = 0
    for k in range(50):
        rng = random.Random(8000 + k)
        cM = random_filtered(simples_system, rng, rng.randint(1, 4), seed=k)
        cN = random_filtered(simples_system, rng, rng.randint(1, 4), seed=k)
        good += equivalence_probe(simples_data, A, cM.target, cN.target, certs=[cM, cN], seed=k).passed
    verdict(8, "Hom dimensions and exactness preserved by e_Q on 50 pairs", good == 50, f"{good}/50")


def test_9_cotorsion(verdict, a3, simples_system, simples_data, simples_inj):
    probes = [X.shift(s) for s in (-1, 0, 1) for X in a3_indecomposables(a3)]
    rep = cotorsion_check(simples_system, simples_data, simples_inj, probes)
    verdict(9, "cotorsion desk check on A3 indecomposables at shifts -1, 0, 1", rep.passed,
            ", ".join(f"{v.anchor}: {'pass' if v.passed else v.detail}" for v in rep.verdicts))


def test_10_uniqueness(verdict, simples_system, shifted_system):
    good = []
    for S_ in (shifted_system, simples_system):
        Q1 = build_projective_system(S_, seed=1).Q
        Q2 = build_projective_system(S_, seed=12345).Q
        same = True
        for x, y in zip(Q1, Q2):
            (r1, s1, m1), = x.entries
            (r2, s2, m2), = y.entries
            same &= s1 == s2 and m1 == m2 and is_isomorphic(r1, r2, seed=3)[0] == "yes"
        good.append(same)
    verdict(10, "two seeds give isomorphic Q families on both demo systems", all(good), f"{good}")
