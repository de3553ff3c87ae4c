import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from reedyfib import shapes
from reedyfib.algebra import pushout
from reedyfib.oracles import (
    Square,
    collapse_sequence,
    contractible,
    diag_contractible,
    homology,
    homotopy_pullback,
    pi0,
    smith_diagonal,
    unit_square,
    weq,
)
from reedyfib.presheaf import StructuralError, compose_maps, identity_map, to_point
from reedyfib.search import HomSearch

N = 3


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_matches_sympy(rows):
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    ref = sorted(abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0)
    assert smith_diagonal(rows) == ref


def test_torsion():
    assert smith_diagonal([[2, 0], [0, 3]]) == [1, 6]


@pytest.mark.parametrize("n", range(4))
def test_pi0_simplex(n):
    assert len(pi0(shapes.delta(n, (N,)))) == 1


def test_pi0_spine_space():
    from reedyfib.reindex import fdiag

    assert len(pi0(fdiag(shapes.G(3, (3, 3))[0]))) == 1


def test_homology_spheres():
    H2 = homology(shapes.boundary(2, (N,))[0], 2)
    assert H2.betti == (1, 1, 0)
    H3 = homology(shapes.boundary(3, (N,))[0], 3)
    assert H3.betti == (1, 0, 1, 0)
    assert H3.describe() == "H0=Z H1=0 H2=Z H3=0"


def test_weq_identity():
    assert weq(identity_map(shapes.boundary(2, (N,))[0])).holds


def test_weq_boundary_inclusion_fails_on_H1():
    v = weq(shapes.boundary(2, (N,))[1])
    assert v.fails
    assert v.evidence["homology_degree"] == 1


def test_weq_interval_to_point():
    v = weq(to_point(shapes.delta(1, (N,))))
    assert v.holds


def test_weq_rejects_bisimplicial():
    with pytest.raises(StructuralError):
        weq(identity_map(shapes.F(1, (2, 2))))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_spine_diagonally_contractible(n):
    assert diag_contractible(shapes.G(n, (3, 3))[0]).holds


def test_boundary_of_F2_not_diagonally_contractible():
    v = diag_contractible(shapes.partialF(2, (3, 3))[0])
    assert v.fails


def test_collapse_of_simplex():
    D = shapes.delta(2, (N,))
    assert len(collapse_sequence(D, [0])) == 3
    assert collapse_sequence(D) is None
    assert contractible(shapes.J(1, (3,))).holds


def test_unit_square_is_homotopy_pullback():
    f = to_point(shapes.J(1, (3,)))
    kan = weq(identity_map(f.target))
    assert homotopy_pullback(unit_square(f), kan).holds


def test_homotopy_pullback_needs_evidence():
    f = to_point(shapes.delta(1, (N,)))
    with pytest.raises(StructuralError):
        homotopy_pullback(unit_square(f), None)


def test_trivial_fibration_pullback_stable():
    # pull back J1 -> pt (a trivial fibration at truncation) along a vertex
    J = shapes.J(1, (3,))
    p = to_point(J)
    v = shapes.delta(0, (3,))
    x = to_point(v)
    from reedyfib.algebra import pullback

    pb = pullback(x, p)
    sq = Square(pb.pr2, p, pb.pr1, x)
    assert homotopy_pullback(sq, contractible(J)).holds


SPACES = {
    "D0": lambda: shapes.delta(0, (N,)),
    "D1": lambda: shapes.delta(1, (N,)),
    "D2": lambda: shapes.delta(2, (N,)),
    "h20": lambda: shapes.horn(2, 0, (N,))[0],
    "bd2": lambda: shapes.boundary(2, (N,))[0],
    "J1": lambda: shapes.J(1, (N,)),
}


@given(st.sampled_from(sorted(SPACES)), st.sampled_from(sorted(SPACES)), st.sampled_from(sorted(SPACES)), st.data())
def test_two_out_of_three(a, b, c, data):
    A, B, C = SPACES[a](), SPACES[b](), SPACES[c]()
    fs, gs = HomSearch(A, B).maps(12), HomSearch(B, C).maps(12)
    if not fs or not gs:
        return
    f = fs[data.draw(st.integers(0, len(fs) - 1))]
    g = gs[data.draw(st.integers(0, len(gs) - 1))]
    vs = [weq(f), weq(g), weq(compose_maps(g, f))]
    if sum(v.holds for v in vs) >= 2:
        assert not any(v.fails for v in vs)


@given(st.sampled_from(sorted(SPACES)), st.sampled_from(sorted(SPACES)), st.data())
def test_weq_sound_against_homology(a, b, data):
    A, B = SPACES[a](), SPACES[b]()
    fs = HomSearch(A, B).maps(12)
    if not fs:
        return
    f = fs[data.draw(st.integers(0, len(fs) - 1))]
    v = weq(f)
    if v.holds:
        m = min(A.trunc[0], B.trunc[0]) - 1
        assert homology(A, m) == homology(B, m)


def test_circle_homology():
    i = shapes.boundary(1, (N,))[1]
    assert homology(pushout(i, i).obj, 2).betti == (1, 1, 0)
