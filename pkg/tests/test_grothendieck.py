import json

import pytest

from reedyfib import fibrations as fb
from reedyfib import shapes
from reedyfib.algebra import product
from reedyfib.category import indiscrete, ordinal
from reedyfib.corpus import fiber_pool, generate
from reedyfib.grothendieck import (
    DiagramFunctor,
    constant,
    diagram_from_json,
    fiber,
    fiber_check,
    find_iso,
    groth,
    projectively_fibrant_check,
    slice_replacement,
    slice_replacement_space,
)
from reedyfib.presheaf import PresheafMap, StructuralError, empty, is_iso, point
from reedyfib.reindex import const_space, lemb

T = (2, 2)


def test_empty_to_point_is_vertex_one():
    C = ordinal(1)
    E, P = empty(2, T), point(2, T)
    G = groth(DiagramFunctor(C, {"0": E, "1": P}, {"01": PresheafMap(E, P, [])}))
    assert len(G.total.degs) == 1
    (c, _), = G.proj.images
    assert G.base.degs[c] == (0, 0, 0)
    assert len(fiber(G, 0).degs) == 0 and len(fiber(G, 1).degs) == 1


def test_representable_fibers_are_points():
    C = ordinal(2)
    G = groth(constant(C, point(2, T)))
    for c in range(3):
        assert len(fiber(G, c).degs) == 1


@pytest.mark.parametrize("k", range(0, 30, 3))
def test_fibers_round_trip_on_corpus(k):
    it = generate(0, 30)[k]
    G = groth(it.diagram)
    for o in range(len(it.diagram.C.objects)):
        assert fiber_check(G, o).holds


@pytest.mark.parametrize("name", ["F1", "G2", "two"])
def test_constant_is_product(name):
    P = fiber_pool(T)[name]
    G = groth(constant(ordinal(1), P))
    prod = product(_vemb(P), lemb(shapes.F(1, T), 2)).obj
    assert find_iso(G.total, prod) is not None


def _vemb(P):
    from reedyfib.reindex import vemb

    return vemb(P, 2)


def test_projective_fibrancy():
    seg = fb.localizer("segal", 2)
    kan = fb.localizer("kan", 2)
    F1 = constant(ordinal(1), shapes.F(1, T))
    assert projectively_fibrant_check(F1, seg).holds
    v = projectively_fibrant_check(F1, kan)
    assert v.fails and v.evidence["part"].startswith("local[")
    bad = constant(ordinal(1), const_space(shapes.delta(2, (2,)), 2))
    v = projectively_fibrant_check(bad, kan)
    assert v.fails and v.evidence["part"] == "reedy[0]"


def test_fibrant_diagram_gives_reedy_left_fibration():
    for it in generate(0, 30)[:12:4]:
        G = groth(it.diagram)
        assert fb.is_reedy_left_fib(G.proj).verdict.holds


def test_slice_replacements_of_ordinal():
    r0 = slice_replacement(ordinal(1), 0, 2)
    assert len(r0.source.degs) == 1
    assert is_iso(slice_replacement(ordinal(1), 1, 2))


def test_groupoid_slice_is_right_fibration():
    for x in (0, 1):
        r = slice_replacement_space(indiscrete(2), x, 2, 2)
        assert fb.is_right_fib(r).holds


def test_diagram_json_roundtrip(tmp_path):
    it = generate(0, 30)[20]
    p = tmp_path / "d.json"
    p.write_text(json.dumps(it.to_json()))
    D = diagram_from_json(json.loads(p.read_text()), str(tmp_path))
    assert [len(V.degs) for V in D.values] == [len(V.degs) for V in it.diagram.values]


def test_bad_diagram_rejected():
    with pytest.raises(StructuralError):
        diagram_from_json({"format": "nope"})
    C = ordinal(1)
    P, F1 = point(2, T), shapes.F(1, T)
    with pytest.raises(StructuralError):
        DiagramFunctor(C, {"0": F1, "1": P}, {"01": PresheafMap(P, P, [(0, ((0,), (0,)))])})
