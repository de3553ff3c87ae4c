import pytest

from reedyfib import shapes
from reedyfib.algebra import product, pushout
from reedyfib.category import indiscrete, nerve, ordinal, poset, product_category
from reedyfib.grothendieck import find_iso
from reedyfib.oracles import homology
from reedyfib.presheaf import is_mono, same_presheaf, validate
from reedyfib.reindex import fdiag

T = (3, 3)


def test_J1_two_cells_per_dimension():
    X = shapes.J(1, (4,))
    for m in range(5):
        assert sum(1 for d in X.degs if d == (m,)) == 2


def test_J_is_nerve_of_indiscrete():
    assert same_presheaf(shapes.J(2, (3,)), nerve(indiscrete(3), 3))


@pytest.mark.parametrize("C,D", [(ordinal(1), ordinal(1)), (ordinal(1), ordinal(2)), (poset(3, [(0, 1), (0, 2)]), ordinal(1))])
def test_nerve_preserves_products(C, D):
    N = 3
    lhs = nerve(product_category(C, D), N)
    rhs = product(nerve(C, N), nerve(D, N)).obj
    assert find_iso(lhs, rhs) is not None


@pytest.mark.parametrize("n", [1, 2, 3])
def test_diagonals_of_F_and_G_are_points(n):
    for X in (shapes.F(n, T), shapes.G(n, T)[0]):
        H = homology(fdiag(X), 2)
        assert H.betti[:3] == (1, 0, 0) and not any(H.torsion)


@pytest.mark.parametrize("k,n", [(0, 1), (1, 0), (1, 1), (1, 2), (2, 2)])
def test_partialF2_is_pushout_product(k, n):
    tr = (2, 2, 2)
    built = shapes.partialF2(k, n, tr)[1]
    pp = shapes.partialF2_pp(k, n, tr)
    assert find_iso(built.source, pp.source) is not None
    assert find_iso(built.target, pp.target) is not None


def test_F1_counts():
    X = shapes.F(1, T)
    assert all(X.count((k, l)) == k + 2 for k in range(4) for l in range(4))


def test_spine_as_pushout_of_vertices():
    po = pushout(shapes.vertex_map(1, 1, T), shapes.vertex_map(1, 0, T))
    G2 = shapes.G(2, T)[0]
    assert find_iso(po.obj, G2) is not None
    assert sum(1 for d in G2.degs if d == (0, 0)) == 3
    assert sum(1 for d in G2.degs if d == (1, 0)) == 2


def test_degenerate_edge_map():
    f = shapes.simplex_map((0, 0), 1, T)
    assert not is_mono(f).holds
    assert f.target.count((0, 0)) == 2


def test_G_inclusion_is_mono():
    for n in (2, 3):
        assert is_mono(shapes.G(n, T)[1]).holds


def test_build_dispatch_errors():
    with pytest.raises(shapes.ShapeError):
        shapes.build("nope")
    with pytest.raises(shapes.ShapeError):
        shapes.build("horn", 2)
    with pytest.raises(shapes.ShapeError):
        shapes.F(1, (3, 3, 3))


def test_default_truncation_env(monkeypatch):
    monkeypatch.setenv("REEDYFIB_TRUNC", "2")
    assert shapes.default_trunc(2) == (2, 2)
    assert shapes.F(1).trunc == (2, 2)
    monkeypatch.delenv("REEDYFIB_TRUNC")
    assert shapes.default_trunc(3) == (2, 2, 2)


def test_nerve_shape_validates():
    assert validate(shapes.build("nerve", trunc=(3,), category=ordinal(2))).holds
