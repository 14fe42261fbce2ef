import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from homsys.exactfield import QQ, Matrix, PrimeField
from homsys.quiverrep import (
    Quiver,
    QuiverError,
    Rep,
    canonical_form,
    decompose,
    direct_sum,
    euler_form,
    hom_basis,
    hom_dim,
    is_indecomposable,
    is_isomorphic,
    linear_quiver,
    morphism_parts,
    random_rep,
    special_rep,
)


def sympy_hom_dim(M, N):
    """Independent count: unknown matrices X_v, constraints X_t M_a = N_a X_s."""
    q = M.quiver
    syms = {}
    for v in range(q.n):
        for i in range(N.dims[v]):
            for j in range(M.dims[v]):
                syms[(v, i, j)] = sympy.Symbol(f"x{v}_{i}_{j}")
    X = [sympy.Matrix(N.dims[v], M.dims[v], lambda i, j, v=v: syms[(v, i, j)]) for v in range(q.n)]
    eqs = []
    for a, (s, t) in enumerate(zip(q.src, q.tgt)):
        Ma = sympy.Matrix(M.dims[t], M.dims[s], lambda i, j: M.maps[a].rows[i][j])
        Na = sympy.Matrix(N.dims[t], N.dims[s], lambda i, j: N.maps[a].rows[i][j])
        eqs.extend(list(X[t] * Ma - Na * X[s]))
    unknowns = list(syms.values())
    if not unknowns:
        return 0
    if not eqs:
        return len(unknowns)
    A, _ = sympy.linear_eq_to_matrix(eqs, unknowns)
    return len(unknowns) - A.rank()


def test_cycle_rejected():
    with pytest.raises(QuiverError):
        Quiver(2, [(1, 2), (2, 1)])
    with pytest.raises(QuiverError):
        Quiver(2, [(1, 3)])


def test_rep_shape_checked(a3):
    with pytest.raises(QuiverError):
        Rep(a3, [1, 1, 0], [Matrix(QQ, 1, 2, [[1, 0]]), Matrix.zeros(QQ, 0, 1)])


@pytest.mark.parametrize("kind,v,dims", [
    ("projective", 1, (1, 1, 1)),
    ("projective", 3, (0, 0, 1)),
    ("injective", 2, (1, 1, 0)),
    ("injective", 3, (1, 1, 1)),
    ("simple", 2, (0, 1, 0)),
])
def test_special_dims(a3, kind, v, dims):
    assert special_rep(a3, kind, v).dims == dims


def test_hom_examples(a3):
    S1, S2 = special_rep(a3, "simple", 1), special_rep(a3, "simple", 2)
    P1, P2 = special_rep(a3, "projective", 1), special_rep(a3, "projective", 2)
    assert hom_dim(S2, S2) == 1
    assert hom_dim(S1, S2) == 0
    assert hom_dim(P2, P1) == 1
    for f in hom_basis(P2, P1):
        f.validate()


def test_euler_examples(a3):
    assert euler_form(a3, (1, 0, 0), (1, 0, 0)) == 1
    assert euler_form(a3, (1, 0, 0), (0, 1, 0)) == -1
    assert euler_form(a3, (1, 1, 1), (0, 0, 1)) == 0
    with pytest.raises(QuiverError):
        euler_form(a3, (1, 0), (1, 0, 0))


def test_morphism_parts(a3):
    P1, P2 = special_rep(a3, "projective", 1), special_rep(a3, "projective", 2)
    ident = morphism_parts(P1.identity())
    assert ident.kernel.is_zero() and ident.cokernel.is_zero() and ident.image.dims == P1.dims
    zero = morphism_parts(P2.zero_to(P1))
    assert zero.kernel.dims == P2.dims and zero.cokernel.dims == P1.dims
    (f,) = hom_basis(P2, P1)
    parts = morphism_parts(f)
    assert parts.kernel.is_zero()
    assert is_isomorphic(parts.cokernel, special_rep(a3, "simple", 1))[0] == "yes"


def test_decompose_examples(a3):
    S1, P1 = special_rep(a3, "simple", 1), special_rep(a3, "projective", 1)
    twice, _, _ = direct_sum([S1, S1])
    d = decompose(twice)
    assert d.complete and [(r.dims, m) for r, m in d.summands] == [((1, 0, 0), 2)]
    assert is_indecomposable(P1)
    mixed, _, _ = direct_sum([special_rep(a3, "injective", 2), special_rep(a3, "projective", 3)])
    d = decompose(mixed)
    assert sorted((r.dims, m) for r, m in d.summands) == [((0, 0, 1), 1), ((1, 1, 0), 1)]
    assert d.certificate().is_iso()


def test_isomorphism_examples(a3):
    P2 = special_rep(a3, "projective", 2)
    verdict, iso = is_isomorphic(P2, P2)
    assert verdict == "yes" and iso.is_iso()
    assert is_isomorphic(special_rep(a3, "simple", 1), special_rep(a3, "simple", 2))[0] == "no"
    verdict, iso = is_isomorphic(special_rep(a3, "injective", 3), special_rep(a3, "projective", 1))
    assert verdict == "yes" and iso.is_iso()


def test_canonical_form_is_shared(a3):
    I3 = special_rep(a3, "injective", 3)
    P1 = special_rep(a3, "projective", 1)
    assert canonical_form(I3)[0] is canonical_form(P1)[0]


def test_prime_field_decomposition():
    q = linear_quiver(2, PrimeField(5))
    M = random_rep(q, (2, 2), random.Random(3))
    d = decompose(M)
    assert d.complete
    assert d.certificate().is_iso()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.lists(st.integers(0, 2), min_size=3, max_size=3),
       st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_hom_dim_against_sympy(seed, d, e):
    q = linear_quiver(3)
    rng = random.Random(seed)
    M, N = random_rep(q, d, rng), random_rep(q, e, rng)
    assert hom_dim(M, N) == sympy_hom_dim(M, N)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_decomposition_reassembles(seed, d):
    q = linear_quiver(3)
    M = random_rep(q, d, random.Random(seed))
    dec = decompose(M, seed)
    assert dec.complete
    assert dec.certificate().is_iso()
    for r, _ in dec.summands:
        assert is_indecomposable(r)
