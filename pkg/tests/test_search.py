import pytest
from hypothesis import given, strategies as st

from reedyfib import search, shapes
from reedyfib.presheaf import to_point

OBJS = {
    "D1": lambda: shapes.delta(1, (3,)),
    "D2": lambda: shapes.delta(2, (3,)),
    "bd2": lambda: shapes.boundary(2, (3,))[0],
    "J1": lambda: shapes.J(1, (3,)),
    "F1": lambda: shapes.F(1, (2, 2)),
    "G2": lambda: shapes.G(2, (2, 2))[0],
    "E1": lambda: shapes.E(1, (2, 2)),
}
PAIRS = [(a, b) for a in OBJS for b in OBJS if (a in ("F1", "G2", "E1")) == (b in ("F1", "G2", "E1"))]


@pytest.mark.skipif(search._compiled is None, reason="compiled kernel not built")
@given(st.sampled_from(PAIRS))
def test_kernels_agree(pair):
    A, Y = OBJS[pair[0]](), OBJS[pair[1]]()
    hs = search.HomSearch(A, Y)
    assert hs.keys(kernel="compiled") == hs.keys(kernel="python")


def test_backend_env(monkeypatch):
    monkeypatch.setenv("REEDYFIB_KERNEL", "python")
    assert search.backend() == "python"


@pytest.mark.parametrize("n,m,count", [(1, 1, 3), (1, 2, 6), (2, 1, 4), (0, 3, 4)])
def test_simplex_maps_are_monotone_maps(n, m, count):
    from math import comb

    assert search.HomSearch(shapes.delta(n, (3,)), shapes.delta(m, (3,))).count() == comb(n + m + 1, n + 1) == count


def test_limit_and_first():
    hs = search.HomSearch(shapes.delta(1, (3,)), shapes.J(1, (3,)))
    assert hs.count() == 4
    assert len(hs.maps(2)) == 2
    assert hs.first() is not None


def test_over_constraint():
    p = to_point(shapes.delta(1, (3,)))
    hs = search.HomSearch(shapes.delta(0, (3,)), shapes.delta(1, (3,)), over=(p, to_point(shapes.delta(0, (3,)))))
    assert hs.count() == 2
