import json

from hypothesis import given, strategies as st

from reedyfib import verify
from reedyfib.corpus import FIBER_CLASSES, categories, fiber_pool, generate, write
from reedyfib.fibrations import local_wrt, localizer
from reedyfib.presheaf import to_point, validate


def test_generate_is_seeded():
    a = [json.dumps(it.to_json(), sort_keys=True) for it in generate(5, 30)]
    b = [json.dumps(it.to_json(), sort_keys=True) for it in generate(5, 30)]
    assert a == b
    assert len(a) >= 30


def test_corpus_covers_categories():
    cats = {it.category for it in generate(0, 30)}
    assert cats == set(categories())


def test_fiber_classes_match_locality():
    pool = fiber_pool((2, 2))
    for name, X in pool.items():
        assert validate(X).holds
        for S in ("segal", "css", "kan"):
            v = local_wrt(to_point(X), localizer(S, 2).members_for(X.trunc))
            assert v.holds == (S in FIBER_CLASSES[name]), (name, S)


def test_write(tmp_path):
    paths = write(generate(0, 30)[:3], str(tmp_path))
    assert [p.rsplit("/", 1)[1] for p in paths] == ["diagram_000.json", "diagram_001.json", "diagram_002.json"]


@given(st.lists(st.integers(), max_size=12), st.integers(1, 4))
def test_pmap_keeps_order(xs, threads):
    assert verify.pmap(lambda x: x * 2, xs, threads) == [2 * x for x in xs]


def test_small_suites_pass():
    items = generate(0, 30)[:2]
    assert verify.suite_recognition(items, max_maps=2)["passed"]
    assert verify.suite_matching(items, ks=(0,))["passed"]
