"""Lifting problems, generating families, and a bounded small-object argument."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import ops
from .algebra import Pushout, boxprod, boxprod_map, pushout_product
from .io import assignment_to_json
from .presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    TruncationError,
    compose_maps,
    empty,
    id_sigma,
    is_iso,
    leq,
    maps_equal,
    point,
    restrict_map,
)
from .search import HomSearch
from .verdict import Verdict, fails, holds


@dataclass
class LiftingProblem:
    """A square ``top: A -> Y``, ``bottom: B -> X`` over ``i: A -> B`` and ``f: Y -> X``."""

    i: PresheafMap
    f: PresheafMap
    top: PresheafMap
    bottom: PresheafMap
    label: str = ""

    def commutes(self) -> bool:
        return maps_equal(compose_maps(self.f, self.top), compose_maps(self.bottom, self.i))

    def to_json(self) -> dict:
        return {
            "member": self.label or self.i.label,
            "top": assignment_to_json(self.top),
            "bottom": assignment_to_json(self.bottom),
        }


def fillers(sq: LiftingProblem, limit: int = -1) -> list[PresheafMap]:
    """Diagonal fillers ``h: B -> Y`` with ``h o i = top`` and ``f o h = bottom``."""
    i = sq.i
    fixed: dict[int, tuple] = {}
    exact = True
    for c, (t, sig) in enumerate(i.images):
        if all(s == ops.identity(len(s) - 1) for s in sig):
            if t in fixed and fixed[t] != sq.top.images[c]:
                return []
            fixed[t] = sq.top.images[c]
        else:
            exact = False
    hs = HomSearch(i.target, sq.f.source, over=(sq.f, sq.bottom), fixed=fixed)
    if exact:
        return hs.maps(limit)
    out = []
    for h in hs.maps():
        if maps_equal(compose_maps(h, i), sq.top):
            out.append(h)
            if 0 <= limit <= len(out):
                break
    return out


def solve_lift(sq: LiftingProblem) -> Verdict:
    """Holds with a filler, or Fails with the (exhaustively unsolvable) problem."""
    if not sq.commutes():
        raise StructuralError("lifting problem square does not commute")
    bound = sq.f.source.trunc
    if is_iso(sq.i):
        inv = _inverse(sq.i)
        h = compose_maps(sq.top, inv)
        return holds({"filler": assignment_to_json(h), "via": "inverse"}, bound)
    hs = fillers(sq, limit=1)
    if hs:
        return holds({"filler": assignment_to_json(hs[0])}, bound)
    return fails({"unsolvable": sq.to_json()}, bound)


def _inverse(i: PresheafMap) -> PresheafMap:
    B = i.target
    images: list = [None] * len(B.degs)
    for c, e in enumerate(B.degs):
        k = i.array(e).index(B.nd_index(c))
        images[c] = i.source.level(e)[k]
    return PresheafMap(B, i.source, images)


# ---------------------------------------------------------------------------
# Generating families


@dataclass
class GeneratingFamily:
    """A finite list of monomorphisms, all of one arity, up to a dimension bound."""

    name: str
    bound: int
    members: list[PresheafMap] = field(default_factory=list)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


def _space_embed(i: PresheafMap, arity: int, trunc: Sequence[int]) -> PresheafMap:
    """Place an arity-1 map in the last (space) direction: ``pt [x] ... [x] i``."""
    if arity == 1:
        return i
    pts = [point(1, (trunc[t],)) for t in range(arity - 1)]
    cur_s, cur_t, m = i.source, i.target, i
    for P in reversed(pts):
        S = boxprod(P, cur_s)
        T = boxprod(P, cur_t)
        m = boxprod_map(PresheafMap(P, P, [(0, (ops.identity(0),))]), m, S, T)
        cur_s, cur_t = S, T
    return m


def horns(bound: int, arity: int = 1, trunc=None, kind: str = "all") -> GeneratingFamily:
    """Horn inclusions ``L[n,i] -> D[n]`` for ``1 <= n <= bound`` (in the space direction)."""
    from .shapes import horn

    trunc = _trunc(trunc, arity, bound)
    out = []
    for n in range(1, bound + 1):
        for i in range(n + 1):
            if kind == "inner" and not 0 < i < n:
                continue
            if kind == "left" and not i < n:
                continue
            if kind == "right" and not i > 0:
                continue
            m = horn(n, i, trunc[-1])[1]
            m = _space_embed(m, arity, trunc)
            m.label = f"L[{n},{i}]"
            out.append(m)
    name = {"all": "horns", "inner": "inner_horns", "left": "left_horns", "right": "right_horns"}[kind]
    return GeneratingFamily(name, bound, out)


def boundaries(bound: int, arity: int = 1, trunc=None) -> GeneratingFamily:
    """``dD[n] -> D[n]`` for ``0 <= n <= bound`` (``n = 0`` is the empty inclusion)."""
    from .shapes import boundary, delta

    trunc = _trunc(trunc, arity, bound)
    out = []
    for n in range(bound + 1):
        if n == 0:
            D = delta(0, trunc[-1])
            m = PresheafMap(empty(1, (trunc[-1],)), D, [])
        else:
            m = boundary(n, trunc[-1])[1]
        m = _space_embed(m, arity, trunc)
        m.label = f"dD[{n}]"
        out.append(m)
    return GeneratingFamily("boundaries", bound, out)


def spine_inclusions(bound: int, trunc=None) -> GeneratingFamily:
    from .shapes import G

    trunc = _trunc(trunc, 2, bound)
    return GeneratingFamily("spine_inclusions", bound, [G(n, trunc)[1] for n in range(2, bound + 1)])


def completeness_inclusion(trunc=None) -> GeneratingFamily:
    from .shapes import E, F, yoneda

    trunc = _trunc(trunc, 2, 1)
    E1 = E(1, trunc)
    m = yoneda(E1, (0, (ops.identity(0), ops.identity(0))), F(0, trunc), label="F(0)->E(1)")
    return GeneratingFamily("completeness_inclusion", 1, [m])


def vertex_inclusions(bound: int, trunc=None) -> GeneratingFamily:
    from .shapes import vertex_map

    trunc = _trunc(trunc, 2, bound)
    return GeneratingFamily("vertex_inclusions", bound, [vertex_map(n, 0, trunc) for n in range(bound + 1)])


def pp_closure(fam1: GeneratingFamily, fam2: GeneratingFamily, trunc=None) -> GeneratingFamily:
    out = []
    for a in fam1:
        for b in fam2:
            m = pushout_product(a, b, trunc)
            m.label = f"{a.label}[]{b.label}"
            out.append(m)
    return GeneratingFamily(f"pp_closure({fam1.name},{fam2.name})", max(fam1.bound, fam2.bound), out)


def _trunc(trunc, arity: int, bound: int):
    if trunc is None:
        return (max(bound, 1),) * arity
    if isinstance(trunc, int):
        return (trunc,) * arity
    return tuple(trunc)


FAMILIES: dict[str, Callable] = {
    "horns": lambda b, a=1, t=None: horns(b, a, t),
    "inner_horns": lambda b, a=1, t=None: horns(b, a, t, "inner"),
    "left_horns": lambda b, a=1, t=None: horns(b, a, t, "left"),
    "right_horns": lambda b, a=1, t=None: horns(b, a, t, "right"),
    "boundaries": lambda b, a=1, t=None: boundaries(b, a, t),
    "spine_inclusions": lambda b, a=2, t=None: spine_inclusions(b, t),
    "completeness_inclusion": lambda b, a=2, t=None: completeness_inclusion(t),
    "vertex_inclusions": lambda b, a=2, t=None: vertex_inclusions(b, t),
}


def family(name: str, bound: int, arity: int = 1, trunc=None) -> GeneratingFamily:
    key = name.replace("-", "_")
    if key in ("left_anodyne",):
        key = "left_horns"
    if key in ("right_anodyne",):
        key = "right_horns"
    if key not in FAMILIES:
        raise StructuralError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
    return FAMILIES[key](bound, arity, trunc)


# ---------------------------------------------------------------------------
# Right lifting property


def problems(f: PresheafMap, i: PresheafMap):
    """All lifting problems of ``i`` against ``f``, in canonical order."""
    X, Y = f.target, f.source
    for d in i.target.degs:
        if not leq(d, X.trunc) or not leq(d, Y.trunc):
            raise TruncationError(
                f"member {i.label} has cells in degree {d}; needs truncation >= {d}, have {Y.trunc}"
            )
    for b in HomSearch(i.target, X).maps():
        bi = compose_maps(b, i)
        for a in HomSearch(i.source, Y, over=(f, bi)).maps():
            yield LiftingProblem(i, f, a, b, i.label)


def _first_failure(f: PresheafMap, i: PresheafMap):
    n = 0
    for sq in problems(f, i):
        n += 1
        if not fillers(sq, limit=1):
            return sq, n
    return None, n


def rlp(f: PresheafMap, fam: GeneratingFamily, threads: int = 1) -> Verdict:
    """Right lifting property of ``f`` against every member of ``fam``.

    Fails carries the first unsolvable problem in canonical order (member
    order, then bottom map, then top map); the bound is the family's.
    """
    bound = (fam.bound,)
    members = list(fam)
    if threads > 1 and len(members) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(lambda m: _first_failure(f, m), members))
    else:
        results = []
        for m in members:
            r = _first_failure(f, m)
            results.append(r)
            if r[0] is not None:
                break
    total = 0
    for m, (sq, n) in zip(members, results):
        total += n
        if sq is not None:
            return fails({"family": fam.name, "unsolvable": sq.to_json()}, bound)
    return holds({"family": fam.name, "members": len(members), "problems": total}, bound)


def _top_dim(X: Presheaf) -> int:
    return max((d[0] for d in X.degs), default=0)


def adjunction_agreement(i: PresheafMap, j: PresheafMap, p: PresheafMap) -> dict:
    """Compare ``i [] j`` lifting against ``p`` with ``i`` lifting against ``exp(j, p)``.

    Maps of simplicial sets only. The comparison is exact when the top
    nondegenerate dimensions of ``i`` and ``j`` add up to at most the
    truncation of ``p``.
    """
    from .mapping import pullback_exponential

    if {i.source.arity, j.source.arity, p.source.arity} != {1}:
        raise StructuralError("adjunction agreement is checked on simplicial sets")
    N = min(p.source.trunc[0], p.target.trunc[0])
    a, b = _top_dim(i.target), _top_dim(j.target)
    if a + b > N:
        raise TruncationError(f"need dim(i) + dim(j) <= {N}, have {a} + {b}")
    pp = pushout_product(i, j, (N,))
    left = rlp(p, GeneratingFamily("pp", N, [pp]))
    e = pullback_exponential(j, p, trunc_out=(a,))
    right = rlp(e, GeneratingFamily("i", a, [restrict_map(i, (a,))]))
    return {"pp": left.status.value, "exp": right.status.value, "agree": left.status is right.status}


# ---------------------------------------------------------------------------
# Small-object argument


@dataclass
class FactorizationResult:
    middle: Presheaf
    left: PresheafMap
    right: PresheafMap
    consumed: int
    exhausted: bool
    rounds: int = 0

    def to_json(self) -> dict:
        return {
            "middle_cells": len(self.middle.degs),
            "consumed": self.consumed,
            "exhausted": self.exhausted,
            "rounds": self.rounds,
        }


def factor(f: PresheafMap, fam: GeneratingFamily, budget: int, max_rounds: int = 50) -> FactorizationResult:
    """Factor ``f = right o left`` by attaching fillers breadth-first.

    Each round collects every unsolved problem of a family member against the
    current right map, then attaches one filler cell-complex per problem
    (skipping problems an earlier attachment of the round already solved).
    The budget counts attached nondegenerate cells.
    """
    Z = f.source
    left = PresheafMap(Z, Z, [(c, id_sigma(d)) for c, d in enumerate(Z.degs)], "id")
    right = f
    consumed = 0
    for rnd in range(max_rounds):
        todo = [sq for m in fam for sq in problems(right, m) if not fillers(sq, limit=1)]
        if not todo:
            return FactorizationResult(Z, left, right, consumed, False, rnd)
        for k in range(len(todo)):
            sq = todo[k]
            if fillers(sq, limit=1):
                continue
            cost = len(sq.i.target.degs) - len(sq.i.source.degs)
            if consumed + cost > budget:
                return FactorizationResult(Z, left, right, consumed, True, rnd)
            po = Pushout(sq.top, sq.i)
            right = po.induced(right, sq.bottom)
            left = compose_maps(po.inl, left)
            Z = po.obj
            consumed += cost
            todo = [LiftingProblem(p.i, right, compose_maps(po.inl, p.top), p.bottom, p.label) for p in todo]
    return FactorizationResult(Z, left, right, consumed, True, max_rounds)
