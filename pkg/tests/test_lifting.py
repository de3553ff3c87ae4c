import random

import pytest
from hypothesis import given, strategies as st

from reedyfib import shapes
from reedyfib.lifting import (
    LiftingProblem,
    adjunction_agreement,
    factor,
    family,
    fillers,
    horns,
    problems,
    rlp,
    solve_lift,
)
from reedyfib.presheaf import (
    PresheafMap,
    StructuralError,
    compose_maps,
    empty_map,
    identity_map,
    maps_equal,
    to_point,
)
from reedyfib.search import HomSearch

N = 3


def _vertex(X, v):
    return PresheafMap(shapes.delta(0, X.trunc), X, [(X.names.index(str(v)), ((0,),))])


def test_degenerate_edge_fills_vertex_horn():
    D2 = shapes.delta(2, (N,))
    i = shapes.horn(1, 0, (N,))[1]
    f = to_point(D2)
    top = PresheafMap(i.source, D2, [(D2.names.index("1"), ((0,),))])
    bottom = to_point(i.target)
    v = solve_lift(LiftingProblem(i, f, top, bottom))
    assert v.holds
    # the edge goes to s0 of vertex 1
    assert v.evidence["filler"]["2"] == [1, [[0]]]


def _horn20_square():
    D2 = shapes.delta(2, (N,))
    H, i = shapes.horn(2, 0, (N,))
    f = to_point(D2)
    # horn edges {0,1} -> 01 and {0,2} -> degenerate at 0
    want = {"01": (D2.names.index("01"), ((0, 1),)), "02": (D2.names.index("0"), ((0, 0),)),
            "0": (D2.names.index("0"), ((0,),)), "1": (D2.names.index("1"), ((0,),)),
            "2": (D2.names.index("0"), ((0,),))}
    top = PresheafMap(H, D2, [want[n] for n in H.names])
    return LiftingProblem(i, f, top, to_point(i.target))


def test_outer_horn_with_backward_edge_fails():
    sq = _horn20_square()
    assert sq.commutes()
    assert solve_lift(sq).fails
    assert fillers(sq) == []


def test_rlp_simplex_to_point_fails_at_outer_horn():
    v = rlp(to_point(shapes.delta(2, (N,))), horns(2, 1, (N,)))
    assert v.fails
    assert v.evidence["unsolvable"]["member"] == "L[2,0]"
    assert v.bound == (2,)


def test_groupoid_nerve_is_kan():
    v = rlp(to_point(shapes.J(1, (4,))), horns(3, 1, (4,)))
    assert v.holds and v.bound == (3,)


def test_rlp_threads_do_not_change_verdict():
    f = to_point(shapes.horn(2, 1, (N,))[0])
    F = horns(2, 1, (N,))
    assert rlp(f, F, 1).to_json() == rlp(f, F, 3).to_json()


@given(st.sampled_from(["h10", "h11", "h20", "h21", "bd1"]), st.sampled_from(["D1", "D2", "J1", "bd2"]), st.data())
def test_fillers_are_sound(mono, obj, data):
    ms = {"h10": shapes.horn(1, 0, (N,))[1], "h11": shapes.horn(1, 1, (N,))[1],
          "h20": shapes.horn(2, 0, (N,))[1], "h21": shapes.horn(2, 1, (N,))[1],
          "bd1": shapes.boundary(1, (N,))[1]}
    obs = {"D1": shapes.delta(1, (N,)), "D2": shapes.delta(2, (N,)), "J1": shapes.J(1, (N,)),
           "bd2": shapes.boundary(2, (N,))[0]}
    i, Y = ms[mono], obs[obj]
    sqs = list(problems(to_point(Y), i))
    sq = sqs[data.draw(st.integers(0, len(sqs) - 1))]
    v = solve_lift(sq)
    for h in fillers(sq, limit=2):
        assert maps_equal(compose_maps(h, i), sq.top)
        assert maps_equal(compose_maps(sq.f, h), sq.bottom)
    assert v.holds == bool(fillers(sq, limit=1))


def test_noncommuting_square_rejected():
    D1 = shapes.delta(1, (N,))
    i = shapes.horn(1, 0, (N,))[1]
    f = identity_map(D1)
    top = PresheafMap(i.source, D1, [(D1.names.index("1"), ((0,),))])
    bottom = identity_map(D1)
    with pytest.raises(StructuralError):
        solve_lift(LiftingProblem(i, f, top, bottom))


@pytest.mark.parametrize("fam,budget", [("inner_horns", 50), ("horns", 40)])
def test_factor_composite_is_input(fam, budget):
    f = to_point(shapes.boundary(2, (2,))[0])
    F = family(fam, 2, 1, (2,))
    r = factor(f, F, budget)
    assert maps_equal(compose_maps(r.right, r.left), f)
    assert r.consumed <= budget + max(len(m.target.degs) for m in F)
    if not r.exhausted:
        assert rlp(r.right, F).holds
    else:
        assert fam == "horns"


def test_adjunction_agreement_random():
    monos = [shapes.horn(1, 0, (N,))[1], shapes.horn(1, 1, (N,))[1], shapes.boundary(1, (N,))[1],
             empty_map(shapes.delta(0, (N,)))]
    objs = [shapes.delta(1, (N,)), shapes.J(1, (N,)), shapes.boundary(2, (N,))[0], shapes.delta(2, (N,))]
    rng = random.Random(3)
    seen = 0
    while seen < 10:
        A, B = rng.choice(objs), rng.choice(objs)
        ps = HomSearch(A, B).maps(20)
        if not ps:
            continue
        r = adjunction_agreement(rng.choice(monos), rng.choice(monos), rng.choice(ps))
        assert r["agree"], r
        seen += 1


def test_unknown_family():
    with pytest.raises(StructuralError):
        family("nope", 2)
