from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liepower.exactlinalg import GF2, GF3, ZZ, HomologyGroup, rank
from liepower.functors import Compose, DirectSum, ExteriorPower, Id, LiePower, RestrictedLiePower, Tensor, TensorPower
from liepower.simplicial import (
    ResourceCap,
    TruncationTooShallow,
    apply_functor,
    boundary,
    eilenberg_maclane,
    homotopy_groups,
    moore_complex,
    tensor_simplicial,
    unnormalized_complex,
    zero_simplicial,
)


def trivial(ring) -> HomologyGroup:
    return HomologyGroup(ring, 0)


def test_em_dims():
    assert eilenberg_maclane(ZZ, 1, 4).dims() == [0, 1, 2, 3, 4]
    assert eilenberg_maclane(GF2, 2, 5).dims() == [0, 0, 1, 3, 6, 10]
    assert eilenberg_maclane(ZZ, 3, 6).dims() == [comb(q, 3) for q in range(7)]


@pytest.mark.parametrize("ring", [ZZ, GF2, GF3], ids=str)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_em_homotopy_is_concentrated(ring, m):
    A = eilenberg_maclane(ring, m, m + 3)
    assert A.identity_failures() == []
    pis = homotopy_groups(A, m + 2)
    for i, g in enumerate(pis):
        assert g == (HomologyGroup(ring, 1) if i == m else trivial(ring))


def test_em_requires_room():
    with pytest.raises(TruncationTooShallow):
        eilenberg_maclane(ZZ, 3, 2)
    with pytest.raises(TruncationTooShallow):
        homotopy_groups(eilenberg_maclane(ZZ, 1, 2), 2)


def test_apply_functor_examples():
    A = eilenberg_maclane(ZZ, 1, 3)
    assert apply_functor(Id(), A).dims() == A.dims()
    X = apply_functor(LiePower(2), A)
    assert X.dims() == [0, 0, 1, 3]
    assert X.identity_failures() == []
    assert [str(g) for g in homotopy_groups(X, 2)] == ["0", "0", "Z"]
    Y = apply_functor(ExteriorPower(3), eilenberg_maclane(GF2, 1, 3))
    assert all(g.is_trivial for g in homotopy_groups(Y, 2))


def test_resource_cap():
    with pytest.raises(ResourceCap):
        apply_functor(LiePower(6), eilenberg_maclane(ZZ, 1, 5), max_dim=100)


def test_unnormalized_examples():
    A = eilenberg_maclane(ZZ, 1, 2)
    assert boundary(A, 1).is_zero()
    # both basis surjections [2] -> [1] have alternating face sum zero;
    # anything else would make pi_1 finite
    assert boundary(A, 2).is_zero()
    assert rank(boundary(eilenberg_maclane(ZZ, 1, 3), 3)) == 2
    assert unnormalized_complex(A).check_d_squared()
    Z = zero_simplicial(ZZ, 3)
    assert unnormalized_complex(Z).euler_characteristic() == 0


def test_moore_examples():
    N1 = moore_complex(eilenberg_maclane(ZZ, 1, 3))
    assert [N1.dim(q) for q in range(4)] == [0, 1, 0, 0]
    N2 = moore_complex(eilenberg_maclane(ZZ, 2, 4))
    assert [N2.dim(q) for q in range(5)] == [0, 0, 1, 0, 0]


def test_tensor_examples():
    K = eilenberg_maclane(ZZ, 1, 3)
    T = tensor_simplicial(K, K)
    assert T.dims() == [0, 1, 4, 9]
    assert T.identity_failures() == []
    pis = homotopy_groups(T, 2)
    assert pis[1].is_trivial and str(pis[2]) == "Z"
    Z = tensor_simplicial(zero_simplicial(ZZ, 3), K)
    assert Z.dims() == [0, 0, 0, 0]


@pytest.mark.parametrize("a,b", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_tensor_connectivity(a, b):
    top = a + b + 2
    A = eilenberg_maclane(ZZ, a + 1, top + 1)
    B = eilenberg_maclane(ZZ, b + 1, top + 1)
    pis = homotopy_groups(tensor_simplicial(A, B), top)
    assert all(g.is_trivial for g in pis[: a + b + 2])
    assert pis[top] == HomologyGroup(ZZ, 1)


SMALL_FUNCTORS = [
    LiePower(2),
    LiePower(3),
    ExteriorPower(2),
    ExteriorPower(3),
    TensorPower(2),
    Compose(ExteriorPower(2), Id()),
    Tensor((Id(), LiePower(2))),
    DirectSum((Id(), ExteriorPower(2))),
]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SMALL_FUNCTORS), st.sampled_from([1, 2]), st.sampled_from([ZZ, GF2, GF3]))
def test_moore_agrees_with_unnormalized(F, m, ring):
    X = apply_functor(F, eilenberg_maclane(ring, m, m + 3))
    M = moore_complex(X)
    assert M.check_d_squared()
    pis = homotopy_groups(X, m + 2)
    for q in range(m + 3):
        assert M.homology(q) == pis[q]


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(SMALL_FUNCTORS + [RestrictedLiePower(2)]), st.sampled_from([1, 2]))
def test_simplicial_identities_after_functor(F, m):
    ring = GF2
    X = apply_functor(F, eilenberg_maclane(ring, m, m + 2))
    assert X.identity_failures() == []


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SMALL_FUNCTORS), st.sampled_from([1, 2]), st.integers(2, 4), st.sampled_from([ZZ, GF2]))
def test_truncation_consistency(F, m, N, ring):
    if N < m:
        return
    a = homotopy_groups(apply_functor(F, eilenberg_maclane(ring, m, N)), N - 1)
    b = homotopy_groups(apply_functor(F, eilenberg_maclane(ring, m, N + 1)), N - 1)
    assert a == b


def test_composite_connectivity_instance():
    X = apply_functor(Compose(ExteriorPower(2), LiePower(2)), eilenberg_maclane(GF2, 1, 3))
    assert all(g.is_trivial for g in homotopy_groups(X, 2))
