import pytest

from reedyfib import fibrations as fb
from reedyfib import shapes
from reedyfib.algebra import product
from reedyfib.category import ordinal
from reedyfib.grothendieck import DiagramFunctor, constant, groth, slice_replacement_over
from reedyfib.oracles import homotopy_pullback
from reedyfib.presheaf import (
    PresheafMap,
    StructuralError,
    empty,
    identity_map,
    point,
    to_point,
)
from reedyfib.reindex import reindex_map

T2 = (2, 2)
T3 = (2, 2, 2)


def _empty_to_point():
    C = ordinal(1)
    E, P = empty(2, T2), point(2, T2)
    return groth(DiagramFunctor(C, {"0": E, "1": P}, {"01": PresheafMap(E, P, [])}))


def _const(X):
    return groth(constant(ordinal(1), X))


def test_kan_examples():
    assert fb.is_kan_fib(to_point(shapes.J(1, (3,)))).holds
    assert fb.is_kan_fib(to_point(shapes.delta(2, (3,)))).fails
    assert fb.is_kan_fib(identity_map(shapes.delta(2, (3,)))).holds


def test_reedy_identity_and_projection():
    assert fb.is_reedy_fib(identity_map(shapes.F(1, T2))).holds
    P = product(shapes.F(1, T2), shapes.E(1, T2))
    assert fb.is_reedy_fib(P.pr1).holds


def test_reedy_failure_names_level():
    D = shapes.delta(2, (2,))
    p = reindex_map(to_point(D), (1, 2, (1,)), T2)
    v = fb.is_reedy_fib(p)
    assert v.fails and v.evidence["part"] == "reedy[0]"


def test_reedy_modes_agree():
    T = (1, 1, 2)
    bad = reindex_map(to_point(shapes.delta(2, (2,))), (1, 2, (1,)), (1, 2))
    seen = set()
    for q in (identity_map(shapes.F(1, (1, 2))), shapes.vertex_map(1, 0, (1, 2)), bad):
        p = fb.lemb_map(q, T)
        a = fb.is_bireedy_fib(p, mode="comparison")
        b = fb.is_bireedy_fib(p, mode="rlp")
        assert a.status == b.status
        seen.add(a.status.value)
    assert seen == {"Holds", "Fails"}


def test_left_fibration_dichotomy():
    one, zero = shapes.vertex_map(1, 1, T2), shapes.vertex_map(1, 0, T2)
    assert fb.is_left_fib(one).holds
    v = fb.is_left_fib(zero)
    assert v.fails and v.evidence["part"] == "square[n=1]"
    assert fb.is_right_fib(zero).holds
    assert fb.is_right_fib(one).fails
    assert fb.is_left_fib(identity_map(shapes.F(1, T2))).holds


def test_left_square_levels():
    sq = fb.left_square(shapes.vertex_map(1, 0, T2), 1)
    kan = fb.is_kan_fib(fb.level_map(shapes.vertex_map(1, 0, T2), {0: 0}))
    v = homotopy_pullback(sq, kan)
    assert v.fails and v.evidence["comparison"]["evidence"]["pi0"] == [1, 2]


def test_reedy_left_examples():
    assert fb.is_reedy_left_fib(fb.lemb_map(identity_map(shapes.F(1, T2)), T3)).verdict.holds
    G = _empty_to_point()
    assert fb.is_reedy_left_fib(G.proj).verdict.holds
    assert G.total.count((1, 1, 0)) == 1


def test_reedy_left_fails_at_left_check():
    # VEmb of a discrete two-point space over LEmb(F(1)) at vertex 0
    T = T3
    v0 = fb.lemb_map(shapes.vertex_map(1, 0, T2), T)
    v = fb.is_reedy_left_fib(v0)
    assert v.verdict.fails
    assert v.verdict.evidence["part"].startswith("left[")


def test_reedy_left_needs_lemb_base():
    with pytest.raises(StructuralError):
        fb.is_reedy_left_fib(identity_map(shapes.F2(1, 1, T3)))


def test_local_examples():
    seg = fb.localizer("segal", 2)
    assert fb.is_local(fb.lemb_map(identity_map(shapes.F(1, T2)), T3), seg).holds
    assert fb.is_local(_const(shapes.F(1, T2)).proj, seg).holds
    v = fb.is_local(_const(shapes.G(2, T2)[0]).proj, seg)
    assert v.fails and "G(2)" in v.evidence["part"]


def test_class_examples():
    assert fb.check_class(_empty_to_point().proj, "left").verdict.holds
    c = _const(shapes.F(1, T2))
    assert fb.check_class(c.proj, "segal_cocart").verdict.holds
    cart = fb.check_class(_empty_to_point().proj, "cart").verdict
    assert cart.fails and cart.evidence["part"].startswith("reedy_right.")


def test_class_monotonicity():
    for X in (shapes.F(1, T2), shapes.E(1, T2), shapes.G(2, T2)[0]):
        p = _const(X).proj
        if fb.check_class(p, "cocart").verdict.holds:
            assert fb.check_class(p, "segal_cocart").verdict.holds


def test_unknown_class():
    with pytest.raises(StructuralError):
        fb.check_class(_empty_to_point().proj, "nope")


@pytest.mark.parametrize("X,expect", [("F1", "Holds"), ("G2", "Fails")])
def test_characterization_agrees(X, expect):
    Y = {"F1": shapes.F(1, T2), "G2": shapes.G(2, T2)[0]}[X]
    rep = fb.characterization_crosscheck(_const(Y).proj, fb.localizer("segal", 2))
    assert rep["agree"]
    assert set(rep["decided"].values()) == {expect}


def test_characterization_identity():
    rep = fb.characterization_crosscheck(fb.lemb_map(identity_map(shapes.F(1, T2)), T3), fb.localizer("segal", 2))
    assert set(rep["decided"].values()) == {"Holds"}


def test_conditions():
    assert fb.condition_check(shapes.G(2, (2, 2))[1], "C").holds
    from reedyfib import ops

    E1 = shapes.E(1, T2)
    f = shapes.yoneda(E1, (0, (ops.identity(0), ops.identity(0))), shapes.F(0, T2))
    assert fb.condition_check(f, "D").holds
    g = shapes.G(2, T2)[1]
    assert fb.condition_P_sample(g, [point(2, T2)], [shapes.F(1, T2)]).holds


def test_matching_object_zero_is_base():
    G = _empty_to_point()
    mo = fb.matching_object(G.proj, 0)
    assert len(mo.obj.degs) == len(G.base.degs)
    mo1 = fb.matching_object(G.proj, 1)
    a = fb.is_left_fib(mo1.comparison)
    b = fb.is_left_fib(fb.level_map(G.proj, {0: 1}))
    assert a.status == b.status


def test_recognition_examples():
    Y = _empty_to_point()
    Z = groth(constant(Y.F.C, point(2, T2)))
    alpha = {o: PresheafMap(V, point(2, T2), to_point(V).images) for o, V in zip(Y.F.C.objects, Y.F.values)}
    from reedyfib.grothendieck import natural_transformation_map

    g = natural_transformation_map(Y, Z, alpha)
    R = [slice_replacement_over(Y, x) for x in range(2)]
    S = fb.localizer("kan", 2)
    v = fb.recognition_equiv(g, Y.proj, Z.proj, R, S)
    assert v.fails and v.evidence["part"].startswith("x=0")
    ident = natural_transformation_map(Y, Y, {o: identity_map(V) for o, V in zip(Y.F.C.objects, Y.F.values)})
    assert fb.recognition_equiv(ident, Y.proj, Y.proj, R, S).holds


def test_recognition_unknown_without_fibrancy():
    G = _const(shapes.G(2, T2)[0])
    ident = identity_map(G.total)
    R = [slice_replacement_over(G, x) for x in range(2)]
    v = fb.recognition_equiv(ident, G.proj, G.proj, R, fb.localizer("segal", 2))
    assert v.unknown


def test_equivalence_criteria_identity():
    p = _const(shapes.F(1, T2)).proj
    crit = fb.equivalence_criteria(identity_map(p.source))
    crit["fiberwise"] = fb.fiberwise_criterion(identity_map(p.source), p, p)
    assert {v.status.value for v in crit.values()} == {"Holds"}


def test_dual_is_involution():
    p = shapes.vertex_map(1, 0, T2)
    q = fb.dual(fb.dual(p, 0), 0)
    assert q.images == p.images
