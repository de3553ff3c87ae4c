from math import comb

import pytest
from hypothesis import given, strategies as st

from reedyfib.category import FiniteCategory, chains, indiscrete, nerve, ordinal, poset, product_category
from reedyfib.presheaf import StructuralError, validate


@given(st.integers(0, 3))
def test_ordinal_homs(n):
    C = ordinal(n)
    for a in range(n + 1):
        for b in range(n + 1):
            assert len(C.hom(a, b)) == (1 if a <= b else 0)


@given(st.integers(0, 3), st.integers(0, 3))
def test_nerve_of_ordinal_is_simplex(n, m):
    X = nerve(ordinal(n), 3)
    if m <= 3:
        assert X.count((m,)) == comb(n + m + 1, n)


def test_indiscrete_is_groupoid():
    C = indiscrete(2)
    assert C.n_morphisms == 4
    g, h = C.morphism(["g01"]), C.morphism(["g10"])
    assert C.is_identity(C.compose(h, g))
    assert C.has_loops()


def test_square_poset_commutes():
    C = poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert len(C.hom(0, 3)) == 1


def test_cyclic_cover_rejected():
    with pytest.raises(StructuralError):
        poset(2, [(0, 1), (1, 0)])


def test_json_roundtrip():
    C = indiscrete(2)
    D = FiniteCategory.from_json(C.to_json())
    assert D.n_morphisms == C.n_morphisms and D.objects == C.objects


def test_product_category_size():
    P = product_category(ordinal(1), ordinal(1))
    assert len(P.objects) == 4 and P.n_morphisms == 9


def test_nondegenerate_chains():
    assert len(chains(ordinal(2), 2)) == 1
    assert validate(nerve(indiscrete(2), 3)).holds


def test_unknown_endpoint():
    with pytest.raises(StructuralError):
        FiniteCategory(["a"], {"f": ("a", "b")})
