import copy
import json
from math import comb

import pytest
from hypothesis import given, strategies as st

from reedyfib import ops, shapes
from reedyfib.io import load, map_to_json, presheaf_from_json, presheaf_to_json, save
from reedyfib.presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    TruncationError,
    cell_count,
    is_iso,
    is_mono,
    restrict_map,
    same_presheaf,
    validate,
)
from reedyfib.reindex import (
    LEMB,
    VEMB,
    UnsupportedFunctor,
    compose_specs,
    lemb,
    named,
    reindex,
    val,
)


def _corrupt(X: Presheaf, c: int, j: int, i: int, nf) -> Presheaf:
    faces = copy.deepcopy(X.faces)
    faces[c][j][i] = nf
    return Presheaf(X.arity, X.trunc, X.degs, faces, label="corrupt")


def test_corrupted_triangle_fails_validation():
    D = shapes.delta(2, (2,))
    top = D.degs.index((2,))
    # d0 of the 2-cell is edge 12; point it at 02 instead
    X = _corrupt(D, top, 0, 0, (D.names.index("02"), (ops.identity(1),)))
    v = validate(X)
    assert v.fails
    assert v.evidence["cell"] == top


def test_trisimplicial_validates():
    assert validate(shapes.F2(1, 1, (2, 2, 2))).holds


@pytest.mark.parametrize("n", range(4))
def test_delta_counts_closed_form(n):
    X = shapes.delta(n, (4,))
    for k in range(5):
        assert cell_count(X, (k,)) == comb(n + k + 1, k + 1)


def test_delta2_degree1():
    assert cell_count(shapes.delta(2, (3,)), (1,)) == 6


@given(st.integers(0, 3), st.integers(0, 3))
def test_F1_counts_constant_in_space(k, l):
    assert cell_count(shapes.F(1, (3, 3)), (k, l)) == k + 2


@given(st.integers(0, 3))
def test_E1_degree_one(l):
    assert cell_count(shapes.E(1, (3, 3)), (1, l)) == 4


def test_count_outside_truncation():
    with pytest.raises(TruncationError):
        cell_count(shapes.delta(1, (2,)), (3,))


def test_val_of_lemb_is_constant_level_zero():
    X = shapes.F(1, (2, 2))
    V = val(lemb(X, 2))
    assert all(d[0] == 0 for d in V.degs)
    for k in range(3):
        for l in range(3):
            assert V.count((k, l)) == X.count((0, l))


@pytest.mark.parametrize("spec,k,n", [(LEMB, 0, 1), (VEMB, 1, 0)])
def test_F2_is_an_embedded_F1(spec, k, n):
    from reedyfib.grothendieck import find_iso

    Y, _ = reindex(shapes.F(1, (2, 2)), spec)
    assert find_iso(shapes.F2(k, n, (2, 2, 2)), Y) is not None


@given(st.sampled_from(["F1", "G2", "E1"]))
def test_reindex_respects_composition(name):
    X = {"F1": shapes.F(1, (2, 2)), "G2": shapes.G(2, (2, 2))[0], "E1": shapes.E(1, (2, 2))}[name]
    r, s = LEMB, named("Valk", 1)
    once, _ = reindex(X, compose_specs(r, s))
    twice, _ = reindex(reindex(X, r)[0], s)
    for d in once.degrees():
        assert once.count(d) == twice.count(d)
        for j in range(once.arity):
            if d[j] > 0:
                for i in range(d[j] + 1):
                    assert once.face_table(d, j, i) == twice.face_table(d, j, i)


def test_unknown_reindexing():
    with pytest.raises(UnsupportedFunctor):
        named("nope")


@given(st.integers(0, 3), st.data())
def test_normalization_idempotent(n, data):
    X = shapes.delta(n, (3,))
    c = data.draw(st.integers(0, len(X.degs) - 1))
    m = X.degs[c][0]
    e = data.draw(st.integers(m, 3))
    sig = data.draw(st.sampled_from(ops.surjections(e, m)))
    nf = X.degenerate((c, (ops.identity(m),)), (sig,))
    assert X.degenerate(nf, (ops.identity(e),)) == nf
    assert X.level((e,))[X.index(nf)] == nf


def test_spine_inclusion_is_mono():
    assert is_mono(shapes.G(2, (2, 2))[1]).holds


def test_degenerate_vertex_map_not_mono():
    f = shapes.simplex_map((0, 0), 1, (2, 2))
    assert not is_mono(f).holds


def test_structural_errors():
    with pytest.raises(StructuralError):
        Presheaf(4, (1, 1, 1, 1), [], [])
    D = shapes.delta(1, (2,))
    with pytest.raises(StructuralError):
        PresheafMap(D, shapes.F(0, (2, 2)), [(0, (ops.identity(0),))] * 3)


@pytest.mark.parametrize("kind", ["delta", "G", "E", "F2"])
def test_json_roundtrip(kind, tmp_path):
    X = {"delta": shapes.delta(2, (3,)), "G": shapes.G(3, (2, 2))[0], "E": shapes.E(1, (2, 2)),
         "F2": shapes.F2(1, 1, (2, 2, 2))}[kind]
    Y = presheaf_from_json(json.loads(json.dumps(presheaf_to_json(X))))
    assert same_presheaf(X, Y)
    p = tmp_path / "x.json"
    save(X, str(p))
    assert same_presheaf(load(str(p)), X)


def test_map_roundtrip(tmp_path):
    f = shapes.boundary(2, (3,))[1]
    save(f, str(tmp_path / "f.json"))
    g = load(str(tmp_path / "f.json"))
    assert map_to_json(g) == map_to_json(f)


def test_restrict_map_identity_is_iso():
    f = restrict_map(shapes.vertex_map(1, 0, (3, 3)), (2, 2))
    assert f.source.trunc == (2, 2)
    assert not is_iso(f)
