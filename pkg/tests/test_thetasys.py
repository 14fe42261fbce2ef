import random

import pytest

from conftest import I, P, S, a3_indecomposables
from homsys.derivedcat import DbObject, hom_db, hom_space, induced_rank, triangle_verify
from homsys.thetasys import (
    FiltrationCertificate,
    MultiplicityError,
    ThetaInputError,
    ThetaSystem,
    approximate,
    build_injective_system,
    build_projective_system,
    certify,
    check_injective_system,
    check_projective_system,
    check_theta_system,
    cotorsion_check,
    filtration_verify,
    glue,
    group_filtration,
    in_F,
    in_I,
    in_P,
    injective_data_from_objects,
    is_nonsplit,
    multiplicities,
    multiplicity_matrix,
    projective_data_from_objects,
    projective_precover,
    random_filtered,
    reorder_filtration,
)

ALL = range(1, 4)


def verdicts(rep):
    return {v.anchor: v.passed for v in rep.verdicts}


# systems ---------------------------------------------------------------------

def test_theta_axioms_pass(shifted_system, simples_system):
    assert check_theta_system(shifted_system).passed
    assert check_theta_system(simples_system).passed


def test_reordered_simples_fail_s4(a3):
    rep = check_theta_system(ThetaSystem([S(a3, 2), S(a3, 1), S(a3, 3)]))
    assert verdicts(rep) == {"S1": True, "S2": True, "S3": True, "S4": False, "S5": True}
    assert rep["S4"].witness == [2, 1] and rep["S4"].dims == 1
    # the same failure through a permuted order reports original labels
    rep = check_theta_system(ThetaSystem([S(a3, 1), S(a3, 2), S(a3, 3)], order=[2, 1, 3]))
    assert rep["S4"].witness == [1, 2]


def test_bad_order_rejected(a3):
    with pytest.raises(ThetaInputError):
        ThetaSystem([S(a3, 1), S(a3, 2)], order=[1, 1])


def test_decomposable_member_fails_s2(a3):
    rep = check_theta_system(ThetaSystem([S(a3, 1) + S(a3, 3), S(a3, 2)]))
    assert not rep["S2"].passed and rep["S2"].witness == 1


# projective and injective systems -------------------------------------------------

def test_shifted_system_is_its_own_projective_system(shifted_system, shifted_data):
    assert shifted_data.Q == shifted_system.theta
    assert all(K.is_zero() for K in shifted_data.K)
    assert check_projective_system(shifted_system, shifted_data).passed
    Dinj = build_injective_system(shifted_system)
    assert Dinj.Y == shifted_system.theta
    assert check_injective_system(shifted_system, Dinj).passed


def test_simples_build(a3, simples_system, simples_data, simples_inj):
    assert simples_data.Q == [P(a3, 1), P(a3, 2), P(a3, 3)]
    assert simples_data.K[1] == S(a3, 3)
    assert simples_data.K[0] == P(a3, 2)
    assert simples_data.Kcert[0].counts(3) == [0, 1, 1]
    assert check_projective_system(simples_system, simples_data).passed
    assert simples_inj.Y == [I(a3, 1), I(a3, 2), I(a3, 3)]
    assert check_injective_system(simples_system, simples_inj).passed
    assert is_nonsplit(simples_data, simples_system, 1)


def test_user_given_projectives(a3, simples_system):
    D = projective_data_from_objects(simples_system, [P(a3, 1), P(a3, 2), P(a3, 3)])
    assert check_projective_system(simples_system, D).passed
    bad = projective_data_from_objects(simples_system, [S(a3, 1), P(a3, 2), P(a3, 3)])
    rep = check_projective_system(simples_system, bad)
    assert not rep["PS4"].passed and rep["PS4"].witness == [1, 2, 1]
    Y = injective_data_from_objects(simples_system, [I(a3, 1), I(a3, 2), I(a3, 3)])
    assert check_injective_system(simples_system, Y).passed


def test_single_object_system(a3):
    S1 = ThetaSystem([I(a3, 2)])
    D = build_projective_system(S1)
    assert D.Q == [I(a3, 2)] and D.K[0].is_zero()
    Y = build_injective_system(S1)
    assert Y.Y == [I(a3, 2)] and Y.Z[0].is_zero()


def test_duality_round_trip(simples_system):
    back = simples_system.dual().dual()
    assert back.theta == simples_system.theta


def test_uniqueness_across_seeds(simples_system, shifted_system):
    for S_ in (simples_system, shifted_system):
        assert build_projective_system(S_, seed=1).Q == build_projective_system(S_, seed=99).Q


def test_d_matrix_upper_unitriangular(simples_system, simples_data, shifted_system, shifted_data):
    for S_, D in ((simples_system, simples_data), (shifted_system, shifted_data)):
        M = multiplicity_matrix(D.Q, S_, [1, 2, 3])
        for i in range(3):
            assert M[i][i] != 0
            assert all(M[i][j] == 0 for j in range(i))


def test_projective_system_axioms_on_build(simples_system, simples_data):
    n = simples_system.normalized()
    for Qi in simples_data.Q:
        for th in n.theta:
            assert hom_db(Qi, th, 1) == 0 and hom_db(Qi, th, -1) == 0
    assert all(not b.is_zero() for b in simples_data.beta)


def test_precover_property_of_beta(simples_system, simples_data):
    n = simples_system.normalized()
    for i in ALL:
        beta = simples_data.beta[i - 1]
        for W in simples_data.Q:
            assert induced_rank(W, beta, 0) == hom_db(W, n.theta[i - 1], 0)


# filtrations -----------------------------------------------------------------------

def test_filtration_verify_examples(a3, simples_system, simples_data):
    Z = DbObject.zero(a3)
    assert filtration_verify(Z, FiltrationCertificate(Z, []), ALL, simples_system)
    cert = certify(P(a3, 1), simples_data.Q, simples_system)
    assert cert.indices() == [3, 2, 1]
    assert filtration_verify(P(a3, 1), cert, ALL, simples_system)
    assert not filtration_verify(P(a3, 1), cert, {1, 2}, simples_system)


def test_multiplicity_examples(a3, simples_system, simples_data, shifted_system, shifted_data):
    for i in ALL:
        want = [1 if j == i else 0 for j in ALL]
        assert multiplicities(simples_system[i], simples_data.Q, simples_system) == want
    assert multiplicities(P(a3, 1), simples_data.Q, simples_system) == [1, 1, 1]
    M = I(a3, 2, 0) + I(a3, 2, 4)
    assert multiplicities(M, shifted_data.Q, shifted_system) == [1, 0, 1]


def test_non_integral_multiplicity(a3, simples_system):
    Q = [P(a3, 1), S(a3, 3), S(a3, 2) + P(a3, 2)]
    with pytest.raises(MultiplicityError, match="non-integral solution 1/2 at index 2"):
        multiplicities(P(a3, 1), Q, simples_system)


def test_zero_tallies_reject_nonzero_object(a3, simples_system, simples_data):
    ok, why = in_F(P(a3, 1, 1), simples_system, simples_data)
    assert ok is False and "zero solution" in why


def test_reorder_examples(simples_system, simples_data):
    rng = random.Random(5)
    ordered = certify(P(simples_data.Q[0].quiver, 1), simples_data.Q, simples_system)
    assert reorder_filtration(ordered, simples_system).indices() == ordered.indices()
    single = random_filtered(simples_system, rng, 1)
    assert reorder_filtration(single, simples_system).indices() == single.indices()


@pytest.mark.parametrize("seed", range(6))
def test_reorder_preserves_multiset_and_verifies(simples_system, simples_data, seed):
    rng = random.Random(seed)
    cert = random_filtered(simples_system, rng, 4, seed)
    M = cert.target
    assert filtration_verify(M, cert, ALL, simples_system)
    out = reorder_filtration(cert, simples_system, seed)
    assert out.is_ordered()
    assert sorted(out.indices()) == sorted(cert.indices())
    assert filtration_verify(M, out, ALL, simples_system)
    assert multiplicities(M, simples_data.Q, simples_system, cert=out) == cert.counts(3)


def test_group_examples(simples_system):
    rng = random.Random(2)
    cert = random_filtered(simples_system, rng, 0, indices=[3, 3, 1])
    grouped = group_filtration(cert, simples_system)
    assert [(s.index, s.mult) for s in grouped.steps] == [(3, 2), (1, 1)]
    assert filtration_verify(cert.target, grouped, ALL, simples_system)
    again = group_filtration(grouped, simples_system)
    assert [(s.index, s.mult) for s in again.steps] == [(3, 2), (1, 1)]
    distinct = random_filtered(simples_system, rng, 0, indices=[3, 2, 1])
    assert [s.mult for s in group_filtration(distinct, simples_system).steps] == [1, 1, 1]
    with pytest.raises(ValueError):
        group_filtration(random_filtered(simples_system, rng, 0, indices=[1, 3]), simples_system)


def test_glue_extension_closure(a3, simples_system, simples_data):
    (psi,) = hom_space(I(a3, 2), S(a3, 1))
    lower = certify(S(a3, 2), simples_data.Q, simples_system)
    upper = certify(S(a3, 1), simples_data.Q, simples_system)
    out = glue(lower, upper, psi, simples_system)
    assert out.indices() == [2, 1]
    assert filtration_verify(I(a3, 2), out, ALL, simples_system)


@pytest.mark.parametrize("seed", range(4))
def test_hom_vanishing_propagates(simples_system, seed):
    rng = random.Random(seed)
    # Hom(S_a, S3) = 0 for a in {1, 2}
    N = random_filtered(simples_system, rng, 0, indices=[rng.choice([1, 2]) for _ in range(3)]).target
    M = random_filtered(simples_system, rng, 0, indices=[3, 3]).target
    assert hom_db(N, M, 0) == 0
    # S3 is projective, so Hom(S3, X[1]) = 0 for every module X
    N = random_filtered(simples_system, rng, 0, indices=[3, 3]).target
    M = random_filtered(simples_system, rng, 3).target
    assert hom_db(N, M, 1) == 0


# precovers and approximations ------------------------------------------------------------

def test_precover_examples(a3, simples_system, simples_data):
    pc = projective_precover(DbObject.zero(a3), None, simples_data, simples_system)
    assert pc.Q0.is_zero() and pc.N.is_zero()
    pc = projective_precover(S(a3, 3), None, simples_data, simples_system)
    assert pc.Q0 == P(a3, 3) and pc.N.is_zero()
    pc = projective_precover(I(a3, 2), None, simples_data, simples_system)
    assert pc.Q0 == P(a3, 1)
    assert pc.N == S(a3, 3)
    assert pc.Ncert.min > 1
    assert triangle_verify(pc.tri, list(simples_system.theta))


def test_precover_on_shifted_system(a3, shifted_system, shifted_data):
    M = I(a3, 2, 0) + I(a3, 2, 4)
    pc = projective_precover(M, None, shifted_data, shifted_system)
    assert pc.Q0 == M and pc.N.is_zero()


def test_approximate_examples(a3, simples_system, simples_data):
    a = approximate(P(a3, 1), simples_system, simples_data)
    assert a.Y == P(a3, 1) and a.C.is_zero()
    a = approximate(S(a3, 2), simples_system, simples_data)
    assert a.Y == I(a3, 2) and a.C == S(a3, 1)
    assert a.Q == P(a3, 2) and a.K == S(a3, 3)
    a = approximate(S(a3, 3), simples_system, simples_data)
    assert a.Y == I(a3, 3) and a.C == I(a3, 2)
    assert sorted(a.Ccert.indices()) == [1, 2]
    assert in_I(a.Y, simples_system) and in_P(a.Q, simples_system)
    assert filtration_verify(a.C, a.Ccert, ALL, simples_system)


def test_cotorsion_examples(a3, simples_system, simples_data, simples_inj):
    rep = cotorsion_check(simples_system, simples_data, simples_inj, list(simples_system.theta))
    assert rep.passed
    rep = cotorsion_check(simples_system, simples_data, simples_inj, a3_indecomposables(a3))
    assert rep.passed and rep["approximation"].dims == 6
    assert rep["ext-orthogonality"].detail == "Hom(X, Y[1]) = 0 convention"
    probe = simples_data.Q[0] + simples_system[3]
    assert cotorsion_check(simples_system, simples_data, simples_inj, [probe]).passed


def test_core_membership(a3, simples_system, simples_data):
    assert in_F(P(a3, 2), simples_system, simples_data)[0] and in_P(P(a3, 2), simples_system)
    assert not in_P(S(a3, 2), simples_system)
    assert in_I(I(a3, 1), simples_system) and not in_I(S(a3, 3), simples_system)
