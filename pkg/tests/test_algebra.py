import pytest
from hypothesis import given, strategies as st

from reedyfib import shapes
from reedyfib.algebra import (
    boxprod,
    commutes,
    coproduct,
    fiber,
    product,
    pullback,
    pushout,
    pushout_product,
)
from reedyfib.grothendieck import find_iso
from reedyfib.mapping import internal_hom, map_space, map_space_over
from reedyfib.oracles import homology
from reedyfib.presheaf import (
    TruncationError,
    empty,
    empty_map,
    identity_map,
    validate,
)
from reedyfib.search import HomSearch

N = 3
SMALL = {
    "D0": lambda: shapes.delta(0, (N,)),
    "D1": lambda: shapes.delta(1, (N,)),
    "bd1": lambda: shapes.boundary(1, (N,))[0],
    "h20": lambda: shapes.horn(2, 0, (N,))[0],
    "J1": lambda: shapes.J(1, (N,)),
}


def _nd(X, d):
    return sum(1 for e in X.degs if e == d)


def test_square_product_counts():
    P = product(shapes.delta(1, (N,)), shapes.delta(1, (N,))).obj
    assert (_nd(P, (0,)), _nd(P, (1,)), _nd(P, (2,))) == (4, 5, 2)
    assert validate(P).holds


def test_pullback_of_identities():
    X = shapes.G(2, (2, 2))[0]
    pb = pullback(identity_map(X), identity_map(X))
    assert find_iso(pb.obj, X) is not None


def test_fiber_of_vertex_one_over_zero_is_empty():
    T = (2, 2)
    p = shapes.vertex_map(1, 1, T)
    fb = fiber(p, shapes.vertex_map(1, 0, T))
    assert len(fb.obj.degs) == 0
    assert len(fiber(p, p).obj.degs) > 0


def test_pushout_along_identity():
    f = shapes.vertex_map(1, 0, (2, 2))
    po = pushout(identity_map(f.source), f)
    assert find_iso(po.obj, f.target) is not None


def test_circle_from_two_edges():
    i = shapes.boundary(1, (N,))[1]
    S1 = pushout(i, i).obj
    assert (_nd(S1, (0,)), _nd(S1, (1,))) == (2, 2)
    H = homology(S1, 2)
    assert H.betti[:2] == (1, 1)


def test_coproduct_of_points():
    P = shapes.delta(0, (2,))
    X = coproduct(P, P).obj
    assert _nd(X, (0,)) == 2 and len(X.degs) == 2


@pytest.mark.parametrize("X,Y,count", [
    (lambda: shapes.delta(1, (N,)), lambda: shapes.delta(1, (N,)), 3),
    (lambda: shapes.boundary(1, (N,))[0], lambda: shapes.delta(1, (N,)), 4),
])
def test_map_space_vertices(X, Y, count):
    M = map_space(X(), Y(), 1)
    assert M.count((0,)) == count


def test_map_space_over_vertex():
    T = (2, 2)
    v1, v0 = shapes.vertex_map(1, 1, T), shapes.vertex_map(1, 0, T)
    assert map_space_over(v1, v1, 1).count((0,)) == 1
    assert map_space_over(v0, v1, 1).count((0,)) == 0


@given(st.sampled_from(sorted(SMALL)), st.sampled_from(sorted(SMALL)))
def test_map_space_degree_zero_counts_maps(a, b):
    X, Y = SMALL[a](), SMALL[b]()
    assert map_space(X, Y, 0).count((0,)) == HomSearch(X, Y).count()


@given(st.sampled_from(["D0", "D1", "bd1"]), st.sampled_from(["D0", "D1", "bd1"]), st.sampled_from(sorted(SMALL)))
def test_adjunction_counting(a, b, c):
    A, B, C = SMALL[a](), SMALL[b](), SMALL[c]()
    dA = max(d[0] for d in A.degs)
    AB = product(A, B, (N,)).obj
    CB = internal_hom(B, C, (dA,)).obj
    assert HomSearch(AB, C).count() == HomSearch(A.restrict((dA,)), CB).count()


def test_boundary_square():
    i = shapes.boundary(1, (N,))[1]
    pp = pushout_product(i, i)
    S = pp.source
    assert (_nd(S, (0,)), _nd(S, (1,)), _nd(S, (2,))) == (4, 4, 0)
    assert (_nd(pp.target, (1,)), _nd(pp.target, (2,))) == (5, 2)


@given(st.sampled_from(["bd1", "h10", "e0"]), st.sampled_from(["bd1", "h10", "e0"]))
def test_pushout_product_symmetric(a, b):
    ms = {
        "bd1": shapes.boundary(1, (N,))[1],
        "h10": shapes.horn(1, 0, (N,))[1],
        "e0": empty_map(shapes.delta(0, (N,))),
    }
    ij, ji = pushout_product(ms[a], ms[b]), pushout_product(ms[b], ms[a])
    assert find_iso(ij.source, ji.source) is not None
    assert find_iso(ij.target, ji.target) is not None


def test_pushout_product_of_boundaries_in_F():
    tr = (2, 2, 2)
    for k, n in [(1, 1), (2, 1)]:
        assert find_iso(shapes.partialF2(k, n, tr)[0], shapes.partialF2_pp(k, n, tr).source) is not None


def test_boxprod_degrees():
    X = boxprod(shapes.delta(1, (2,)), shapes.delta(0, (2,)))
    assert X.arity == 2
    assert find_iso(X, shapes.F(1, (2, 2))) is not None


def test_pullback_square_commutes():
    p = shapes.vertex_map(1, 1, (2, 2))
    pb = pullback(p, identity_map(p.target))
    assert commutes(pb.pr2, identity_map(p.target), pb.pr1, p)


def test_map_space_truncation_refused():
    with pytest.raises(TruncationError):
        map_space(shapes.delta(1, (2,)), shapes.delta(1, (2,)), 3)


def test_empty_is_initial():
    E = empty(1, (N,))
    for k in SMALL:
        assert HomSearch(E, SMALL[k]()).count() == 1
