from __future__ import annotations

from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liepower.exactlinalg import GF2, GF3, ZZ, ExactMatrix
from liepower.functors import (
    Compose,
    DirectSum,
    ExteriorPower,
    Id,
    LiePower,
    NotInSpan,
    RestrictedLiePower,
    Tensor,
    TensorPower,
    UnsupportedRing,
    apply_on_morphism,
    apply_on_object,
    is_lyndon,
    lie_basis,
    lie_basis_cached,
    lyndon_words,
    restricted_lie_basis,
    witt_dimension,
)
from liepower.functors.lie import TensorVectors


def brute_lyndon(d: int, n: int) -> list[tuple[int, ...]]:
    out = []
    for w in product(range(d), repeat=n):
        if all(w < w[i:] + w[:i] for i in range(1, n)):
            out.append(w)
    return out


def tensor_product(x: dict, y: dict, ring) -> dict:
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            out[u + v] = out.get(u + v, 0) + a * b
    return {w: ring.reduce(c) for w, c in out.items() if ring.reduce(c)}


def test_lyndon_examples():
    assert lyndon_words(2, 1) == ((0,), (1,))
    assert lyndon_words(2, 3) == ((0, 0, 1), (0, 1, 1))
    assert lyndon_words(3, 2) == ((0, 1), (0, 2), (1, 2))


@pytest.mark.parametrize("d,n", [(d, n) for d in range(1, 4) for n in range(1, 7)])
def test_lyndon_matches_brute_force(d, n):
    assert list(lyndon_words(d, n)) == brute_lyndon(d, n)
    assert all(is_lyndon(w) for w in lyndon_words(d, n))


def test_witt_examples():
    assert witt_dimension(2, 2) == 1
    assert witt_dimension(2, 6) == 9
    assert witt_dimension(4, 4) == 60


def test_lie_basis_examples():
    b = lie_basis(2, 2, ZZ)
    assert b[0].tensor_expansion == {(0, 1): 1, (1, 0): -1}
    b = lie_basis(2, 3, ZZ)[0]
    assert b.bracketing == (0, (0, 1))
    assert b.tensor_expansion == {(0, 0, 1): 1, (0, 1, 0): -2, (1, 0, 0): 1}
    assert lie_basis(2, 3, GF2)[0].tensor_expansion == {(0, 0, 1): 1, (1, 0, 0): 1}


@pytest.mark.parametrize("d,n", [(2, 4), (3, 4), (2, 6), (3, 5)])
def test_leading_term_triangularity(d, n):
    for el in lie_basis(d, n, ZZ):
        words = sorted(el.tensor_expansion)
        assert words[0] == el.word
        assert el.tensor_expansion[el.word] == 1


def test_restricted_examples():
    assert len(restricted_lie_basis(2, 1)) == 2
    assert len(restricted_lie_basis(2, 2)) == 3
    assert len(restricted_lie_basis(2, 4)) == 6


@pytest.mark.parametrize("d,n", [(2, 2), (2, 4), (3, 4), (2, 6)])
def test_restricted_square_is_tensor_square(d, n):
    ordinary = {el.word: el.tensor_expansion for m in range(1, n) for el in lie_basis(d, m, GF2)}
    for el in restricted_lie_basis(d, n):
        if el.exponent == 1:
            continue
        base = ordinary[el.word]
        sq = base
        e = 1
        while e < el.exponent:
            sq = tensor_product(sq, sq, GF2)
            e *= 2
        assert sq == el.tensor_expansion


def test_restricted_off_f2_rejected():
    with pytest.raises(UnsupportedRing):
        apply_on_object(RestrictedLiePower(2), 2, ZZ)
    with pytest.raises(UnsupportedRing):
        apply_on_morphism(RestrictedLiePower(2), ExactMatrix.identity(GF3, 2))


def test_object_examples():
    m = apply_on_object(ExteriorPower(2), 3, ZZ)
    assert m.dim == 3 and [str(x) for x in m.labels] == ["e1 ^ e2", "e1 ^ e3", "e2 ^ e3"]
    assert apply_on_object(Compose(ExteriorPower(2), LiePower(2)), 3, ZZ).dim == 3
    assert apply_on_object(Tensor((Id(), LiePower(2))), 2, ZZ).dim == 2


def test_morphism_examples():
    assert apply_on_morphism(LiePower(2), ExactMatrix.identity(ZZ, 2)) == ExactMatrix.identity(ZZ, 1)
    swap = ExactMatrix.from_dense(ZZ, [[0, 1], [1, 0]])
    assert apply_on_morphism(LiePower(2), swap).to_dense() == [[-1]]
    shear = ExactMatrix.from_dense(ZZ, [[1, 1], [0, 1]])
    assert apply_on_morphism(ExteriorPower(2), shear).to_dense() == [[1]]


def test_express_rejects_non_lie_tensor():
    basis = lie_basis_cached(2, 2)
    t = TensorVectors([1], [1], [0], 1, 2, 2)  # the word "ab" alone
    with pytest.raises(NotInSpan):
        basis.express(t, ZZ, check=True)


# random functor expressions of total degree <= 4


def atoms(restricted: bool):
    base = [st.just(Id()), st.builds(LiePower, st.integers(1, 4)), st.builds(ExteriorPower, st.integers(1, 3)), st.builds(TensorPower, st.integers(1, 2))]
    if restricted:
        base.append(st.builds(RestrictedLiePower, st.integers(1, 4)))
    return st.one_of(base)


def exprs(restricted: bool = False, max_leaves: int = 5):
    return st.recursive(
        atoms(restricted),
        lambda kids: st.one_of(
            st.builds(Compose, kids, kids),
            st.builds(lambda xs: Tensor(tuple(xs)), st.lists(kids, min_size=2, max_size=3)),
            st.builds(lambda xs: DirectSum(tuple(xs)), st.lists(kids, min_size=2, max_size=3)),
        ),
        max_leaves=max_leaves,
    ).filter(lambda F: F.degree <= 4 and F.dim(3) <= 400)


def matrices(ring, rows, cols):
    return st.lists(st.lists(st.integers(-2, 2), min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda a: ExactMatrix.from_dense(ring, a, (rows, cols))
    )


@st.composite
def composable_pair(draw, ring):
    a, b, c = (draw(st.integers(1, 3)) for _ in range(3))
    return draw(matrices(ring, b, a)), draw(matrices(ring, c, b))


@settings(max_examples=60, deadline=None)
@given(st.data(), st.sampled_from([ZZ, GF2, GF3]))
def test_functoriality(data, ring):
    F = data.draw(exprs(restricted=ring == GF2))
    f, g = data.draw(composable_pair(ring))
    lhs = apply_on_morphism(F, g @ f, check=True)
    rhs = apply_on_morphism(F, g, check=True) @ apply_on_morphism(F, f, check=True)
    assert lhs == rhs
    d = f.n_cols
    assert apply_on_morphism(F, ExactMatrix.identity(ring, d)) == ExactMatrix.identity(ring, F.dim(d))
    assert apply_on_object(F, d, ring).dim == F.dim(d)


@settings(max_examples=30, deadline=None)
@given(exprs(), st.integers(0, 4), st.integers(1, 3))
def test_exterior_of_functor_dimension(F, k, d):
    assert apply_on_object(Compose(ExteriorPower(k), F), d, ZZ).dim == comb(F.dim(d), k)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.data())
def test_lie_power_of_map_is_integral(n, data):
    f = data.draw(matrices(ZZ, data.draw(st.integers(1, 3)), data.draw(st.integers(1, 3))))
    m = apply_on_morphism(LiePower(n), f, check=True)
    assert m.shape == (witt_dimension(f.n_rows, n), witt_dimension(f.n_cols, n))


def test_labels_are_lazy_and_sized():
    m = apply_on_object(DirectSum((Tensor((Id(), LiePower(3))), Compose(ExteriorPower(2), LiePower(2)))), 2, ZZ)
    assert m.dim == len(m.labels) == 2 * 2 + 0
