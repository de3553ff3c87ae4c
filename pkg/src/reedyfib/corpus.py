"""Seeded corpus of diagrams over small categories, and their expected classes."""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass, field

from . import ops
from .category import FiniteCategory, indiscrete, ordinal
from .grothendieck import DiagramFunctor, constant
from .presheaf import Presheaf, PresheafMap, StructuralError, degrees_upto, empty, from_levels, identity_map, point
from .search import HomSearch

DEFAULT_TRUNC = (2, 2)


def grid_space(k: int, trunc=DEFAULT_TRUNC) -> Presheaf:
    """``(n, l) -> {functions [n] x [l] -> {0..k-1}}``.

    The simplicial space of maps ``F(n) x D[l] -> J``, where ``J`` is the nerve
    of the contractible groupoid on ``k`` objects: Reedy fibrant, Segal,
    complete and homotopically constant.
    """
    trunc = tuple(trunc)
    grids = {d: list(itertools.product(range(k), repeat=(d[0] + 1) * (d[1] + 1))) for d in degrees_upto(trunc)}
    index = {d: {g: i for i, g in enumerate(gs)} for d, gs in grids.items()}

    def apply(d, g, j, theta):
        n, l = d
        rows = [g[r * (l + 1):(r + 1) * (l + 1)] for r in range(n + 1)]
        if j == 0:
            rows = [rows[t] for t in theta]
        else:
            rows = [tuple(row[t] for t in theta) for row in rows]
        return tuple(x for row in rows for x in row)

    counts, face, degen = {}, {}, {}
    for d in degrees_upto(trunc):
        counts[d] = len(grids[d])
        for j in range(2):
            if d[j] > 0:
                lower = tuple(x - (t == j) for t, x in enumerate(d))
                for i in range(d[j] + 1):
                    th = ops.coface(d[j], i)
                    face[(d, j, i)] = [index[lower][apply(d, g, j, th)] for g in grids[d]]
            if d[j] < trunc[j]:
                upper = tuple(x + (t == j) for t, x in enumerate(d))
                for i in range(d[j] + 1):
                    th = ops.codegeneracy(d[j], i)
                    degen[(d, j, i)] = [index[upper][apply(d, g, j, th)] for g in grids[d]]
    X, _ = from_levels(2, trunc, counts, face, degen, label=f"J{k - 1}space")
    return X


def _two_points(trunc) -> Presheaf:
    from .algebra import coproduct

    P = point(2, trunc)
    X = coproduct(P, P).obj
    X.label = "two"
    return X


def fiber_pool(trunc=DEFAULT_TRUNC) -> dict[str, Presheaf]:
    from .shapes import E, F, G

    return {
        "empty": empty(2, trunc),
        "point": point(2, trunc),
        "F1": F(1, trunc),
        "E1": E(1, trunc),
        "two": _two_points(trunc),
        "G2": G(2, trunc)[0],
    }


# local for: segal, css, kan
FIBER_CLASSES = {
    "empty": {"segal", "css", "kan"},
    "point": {"segal", "css", "kan"},
    "F1": {"segal", "css"},
    "E1": {"segal"},
    "two": {"segal", "css", "kan"},
    "G2": set(),
}


def categories() -> dict[str, FiniteCategory]:
    return {"[1]": ordinal(1), "[2]": ordinal(2), "I[1]": indiscrete(2)}


@dataclass
class CorpusItem:
    name: str
    category: str
    fibers: list[str]
    diagram: DiagramFunctor
    seed: int
    expected: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        d = self.diagram.to_json()
        d["corpus"] = {"name": self.name, "category": self.category, "fibers": self.fibers,
                       "seed": self.seed, "expected": self.expected}
        return d


def _expected(fibers: list[str]) -> dict[str, bool]:
    return {S: all(S in FIBER_CLASSES[f] for f in fibers) for S in ("segal", "css", "kan")}


def _random_map(rng: random.Random, A: Presheaf, B: Presheaf, cap: int = 64) -> PresheafMap | None:
    maps = HomSearch(A, B).maps(cap)
    if not maps:
        return None
    return maps[rng.randrange(len(maps))]


def _poset_diagram(rng: random.Random, C: FiniteCategory, names: list[str], pool) -> DiagramFunctor | None:
    """Random values along a chain ``0 -> 1 -> ...``, maps chosen among all maps."""
    values = {o: pool[n] for o, n in zip(C.objects, names)}
    maps = {}
    for a, (s, t) in sorted(C.arrows.items()):
        m = _random_map(rng, values[s], values[t])
        if m is None:
            return None
        maps[a] = m
    try:
        return DiagramFunctor(C, values, maps)
    except StructuralError:
        return None


def _groupoid_diagram(rng: random.Random, C: FiniteCategory, name: str, pool) -> DiagramFunctor:
    """A functor out of ``I[1]``: one value with an automorphism (and its inverse)."""
    V = pool[name]
    autos = [m for m in HomSearch(V, V).maps(64) if _is_auto(m)]
    g = autos[rng.randrange(len(autos))] if autos else identity_map(V)
    inv = _inverse(g)
    maps = {"g01": g, "g10": inv}
    return DiagramFunctor(C, {o: V for o in C.objects}, maps)


def _is_auto(m: PresheafMap) -> bool:
    from .presheaf import is_iso

    return is_iso(m)


def _inverse(g: PresheafMap) -> PresheafMap:
    from .lifting import _inverse as inv

    return inv(g)


def generate(seed: int = 0, size: int = 30, trunc=DEFAULT_TRUNC) -> list[CorpusItem]:
    """At least ``size`` diagrams over ``[1]``, ``[2]`` and ``I[1]``, deterministic in ``seed``.

    The constant diagrams at every pool value over every category come first,
    then random ones.
    """
    rng = random.Random(seed)
    pool = fiber_pool(trunc)
    cats = categories()
    names = sorted(pool)
    out: list[CorpusItem] = []

    def push(cat: str, fibers: list[str], D: DiagramFunctor) -> None:
        out.append(CorpusItem(f"{cat}:{'/'.join(fibers)}#{len(out)}", cat, fibers, D, seed, _expected(fibers)))

    for cat in ("[1]", "I[1]"):
        for n in names:
            C = cats[cat]
            push(cat, [n] * len(C.objects), constant(C, pool[n]))
    attempts = 0
    while len(out) < size and attempts < 50 * size:
        attempts += 1
        cat = rng.choice(["[1]", "[2]", "I[1]"])
        C = cats[cat]
        if cat == "I[1]":
            n = rng.choice(names)
            push(cat, [n, n], _groupoid_diagram(rng, C, n, pool))
            continue
        fibers = [rng.choice(names) for _ in C.objects]
        D = _poset_diagram(rng, C, fibers, pool)
        if D is not None:
            push(cat, fibers, D)
    return out


def write(items: list[CorpusItem], directory: str) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    paths = []
    for k, it in enumerate(items):
        p = os.path.join(directory, f"diagram_{k:03d}.json")
        with open(p, "w") as fh:
            json.dump(it.to_json(), fh, sort_keys=True, indent=1)
            fh.write("\n")
        paths.append(p)
    return paths
