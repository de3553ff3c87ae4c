"""Fibration classes of simplicial and bisimplicial spaces, decided at finite truncation.

Directions: simplicial spaces are ``(n, l)``, bisimplicial spaces
``(k, n, l)`` with ``l`` the space direction.  Over a base ``LEmb(X)``
(constant in ``k``) the ``k``-th level ``Y_k = LFib_k(Y)`` lives over ``X``
and the value ``Val_n(Y)`` fixes ``n``.  Right (Cartesian) variants reverse
the base direction and reuse the left checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import ops
from .algebra import Pullback, pushout_product
from .lifting import GeneratingFamily, _space_embed, horns, rlp
from .mapping import Cotensor, PullbackExponential, restriction
from .oracles import Square, diag_contractible, homotopy_pullback, weq
from .presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    compose_maps,
    empty,
    id_sigma,
    identity_map,
    point,
    to_point,
)
from .reindex import VEMB, opposite, opposite_map, reindex, reindex_map
from .search import HomSearch
from .verdict import FibrationReport, Verdict, holds, meet, unknown


# ---------------------------------------------------------------------------
# Levels


def _level_spec(arity: int, fixed: dict[int, int]):
    """Reindexing that fixes some directions and keeps the rest in order."""
    coords = []
    out = 0
    for t in range(arity):
        if t in fixed:
            coords.append(("c", fixed[t]))
        else:
            coords.append(out)
            out += 1
    return (arity, out, tuple(coords))


def _cached_level(Y: Presheaf, fixed: dict[int, int]):
    cache = Y.__dict__.setdefault("_levels", {})
    key = tuple(sorted(fixed.items()))
    if key not in cache:
        cache[key] = reindex(Y, _level_spec(Y.arity, fixed))
    return cache[key]


def level(Y: Presheaf, fixed: dict[int, int]) -> Presheaf:
    return _cached_level(Y, fixed)[0]


def level_map(f: PresheafMap, fixed: dict[int, int]) -> PresheafMap:
    S, ps = _cached_level(f.source, fixed)
    T, pt_ = _cached_level(f.target, fixed)
    spec = _level_spec(f.source.arity, fixed)
    images = []
    for c, e in enumerate(S.degs):
        raw = ps[e].index(S.nd_index(c))
        img = f.array(_in(spec, e))[raw]
        images.append(T.level(e)[pt_[e][img]])
    return PresheafMap(S, T, images, f.label)


def _in(spec, e):
    return tuple(c[1] if isinstance(c, tuple) else e[c] for c in spec[2])


def level_operator(Y: Presheaf, j: int, n: int, theta: ops.Op, rest: dict[int, int] | None = None) -> PresheafMap:
    """``theta^*`` between the levels ``n`` and ``m`` of direction ``j``, for ``theta: [m] -> [n]``."""
    rest = dict(rest or {})
    m = len(theta) - 1
    A, pa = _cached_level(Y, {**rest, j: n})
    B, pb = _cached_level(Y, {**rest, j: m})
    spec = _level_spec(Y.arity, {**rest, j: n})
    images = []
    for c, e in enumerate(A.degs):
        din = _in(spec, e)
        raw = pa[e].index(A.nd_index(c))
        nf = Y.act(Y.level(din)[raw], j, theta)
        images.append(B.level(e)[pb[e][Y.index(nf)]])
    return PresheafMap(A, B, images, f"{tuple(theta)}*")


# ---------------------------------------------------------------------------
# Kan and Reedy fibrations


def _bound1(f: PresheafMap, bound) -> int:
    N = min(f.source.trunc[0], f.target.trunc[0])
    return N if bound is None else min(int(bound), N)


def is_kan_fib(f: PresheafMap, bound: int | None = None, threads: int = 1) -> Verdict:
    """Right lifting against horns through dimension ``bound``."""
    if f.source.arity != 1:
        raise StructuralError("Kan fibrations are maps of simplicial sets")
    b = _bound1(f, bound)
    if b < 1:
        return holds({"family": "horns", "members": 0}, (b,))
    return rlp(f, horns(b, 1, f.target.trunc), threads)


def _boundary_inclusion(arity: int, deg: Sequence[int], trunc) -> PresheafMap:
    from .shapes import F, F2, partialF, partialF2

    deg = tuple(deg)
    if arity == 2:
        (n,) = deg
        if n == 0:
            T = F(0, trunc)
            return PresheafMap(empty(2, trunc), T, [], "dF(0)->F(0)")
        return partialF(n, trunc)[1]
    k, n = deg
    if k == 0 and n == 0:
        T = F2(0, 0, trunc)
        return PresheafMap(empty(3, trunc), T, [], "dF(0,0)->F(0,0)")
    return partialF2(k, n, trunc)[1]


def _reedy_degrees(p: PresheafMap, bounds) -> list[tuple[int, ...]]:
    from .presheaf import degrees_upto

    a = p.source.arity
    T = tuple(min(x, y) for x, y in zip(p.source.trunc, p.target.trunc))[: a - 1]
    if bounds is not None:
        T = tuple(min(x, int(b)) for x, b in zip(T, bounds))
    return degrees_upto(T)


def matching_map(p: PresheafMap, deg: Sequence[int]) -> PresheafMap:
    """``Map(F(deg), Y) -> Map(dF(deg), Y) x Map(F(deg), X)`` (a map of spaces)."""
    a = p.source.arity
    i = _boundary_inclusion(a, deg, p.target.trunc)
    L = min(p.source.trunc[-1], p.target.trunc[-1])
    return PullbackExponential(i, p, free=(a - 1,), trunc_out=(L,)).map


def _reedy(p: PresheafMap, bounds, space_bound, mode: str, name: str) -> Verdict:
    degs = _reedy_degrees(p, bounds)
    parts = []
    if mode in ("comparison", "both"):
        for d in degs:
            v = is_kan_fib(matching_map(p, d), space_bound)
            parts.append((f"{name}[{','.join(map(str, d))}]", v))
    if mode in ("rlp", "both"):
        fam = reedy_family(p.source.arity, degs, p.target.trunc, space_bound)
        parts.append((f"{name}-rlp", rlp(p, fam)))
    if mode == "both":
        decided = {v.status for _, v in parts if v.decided}
        if len(decided) > 1:
            raise AssertionError("comparison and lifting modes disagree")
    return meet(parts, p.target.trunc)


def reedy_family(arity: int, degs, trunc, space_bound=None) -> GeneratingFamily:
    """Pushout-products of boundary inclusions with horns in the space direction."""
    L = trunc[-1] if space_bound is None else min(trunc[-1], space_bound)
    hs = [_space_embed(h, arity, trunc) for h in horns(L, 1, trunc[-1])] if L >= 1 else []
    members = []
    for d in degs:
        i = _boundary_inclusion(arity, d, trunc)
        for h in hs:
            m = pushout_product(i, h, trunc)
            m.label = f"{i.label}[]{h.label}"
            members.append(m)
    return GeneratingFamily("reedy_pp", L, members)


def is_reedy_fib(p: PresheafMap, bounds=None, mode: str = "comparison", space_bound=None) -> Verdict:
    """Reedy fibration of simplicial spaces via matching maps (or the lifting family)."""
    if p.source.arity != 2:
        raise StructuralError("is_reedy_fib expects a map of simplicial spaces")
    if isinstance(bounds, int):
        bounds = (bounds,)
    return _reedy(p, bounds, space_bound, mode, "reedy")


def is_bireedy_fib(p: PresheafMap, bounds=None, mode: str = "comparison", space_bound=None) -> Verdict:
    """BiReedy fibration of bisimplicial spaces, one matching map per ``(k, n)``."""
    if p.source.arity != 3:
        raise StructuralError("is_bireedy_fib expects a map of bisimplicial spaces")
    return _reedy(p, bounds, space_bound, mode, "bireedy")


# ---------------------------------------------------------------------------
# Left and right fibrations of simplicial spaces


def left_square(p: PresheafMap, n: int) -> Square:
    """``Y_n -> Y_0`` over ``X_n -> X_0`` along the initial vertex."""
    theta = (0,)
    top = level_operator(p.source, 0, n, theta)
    bottom = level_operator(p.target, 0, n, theta)
    return Square(top, level_map(p, {0: 0}), level_map(p, {0: n}), bottom)


def is_left_fib(p: PresheafMap, bound: int | None = None, reedy: Verdict | None = None) -> Verdict:
    """Reedy fibration whose initial-vertex squares are homotopy pullbacks."""
    if p.source.arity != 2:
        raise StructuralError("is_left_fib expects a map of simplicial spaces")
    N = min(p.source.trunc[0], p.target.trunc[0])
    bound = N if bound is None else min(bound, N)
    if reedy is None:
        reedy = is_reedy_fib(p, (bound,))
    parts = [("reedy", reedy)]
    kan0 = is_kan_fib(level_map(p, {0: 0}))
    if not kan0.holds:
        parts.append(("level0_kan", kan0))
        return meet(parts, p.target.trunc)
    for n in range(1, bound + 1):
        parts.append((f"square[n={n}]", homotopy_pullback(left_square(p, n), kan0)))
    return meet(parts, p.target.trunc)


def is_right_fib(p: PresheafMap, bound: int | None = None) -> Verdict:
    """Dual of :func:`is_left_fib`: reverse the categorical direction."""
    if p.source.arity != 2:
        raise StructuralError("is_right_fib expects a map of simplicial spaces")
    return is_left_fib(opposite_map(p, 0), bound)


# ---------------------------------------------------------------------------
# Reedy left fibrations of bisimplicial spaces


def is_lemb_shaped(X: Presheaf) -> bool:
    """Constant in the ``k`` direction: every nondegenerate cell has ``k``-degree 0."""
    return X.arity == 3 and all(d[0] == 0 for d in X.degs)


def _need_lemb(p: PresheafMap, require_lemb: bool) -> None:
    if p.source.arity != 3:
        raise StructuralError("expected a map of bisimplicial spaces")
    if require_lemb and not is_lemb_shaped(p.target):
        raise StructuralError("target is not of the form LEmb(X)")


def _memo(p: PresheafMap, key: tuple, fn: Callable):
    """Results of deterministic checks, kept on the map they are about."""
    store = p.__dict__.setdefault("_checks", {})
    if key not in store:
        store[key] = fn()
    return store[key]


def _copy_report(rep: FibrationReport) -> FibrationReport:
    return FibrationReport(rep.kind, rep.bounds, list(rep.parts), list(rep.notes))


def is_reedy_left_fib(p: PresheafMap, bounds=None, require_lemb: bool = True) -> FibrationReport:
    """BiReedy fibration and every level ``Y_k -> X`` a left fibration."""
    _need_lemb(p, require_lemb)
    key = ("reedy_left", None if bounds is None else tuple(bounds))
    return _copy_report(_memo(p, key, lambda: _reedy_left(p, bounds)))


def _reedy_left(p: PresheafMap, bounds) -> FibrationReport:
    T = tuple(min(x, y) for x, y in zip(p.source.trunc, p.target.trunc))
    b = T if bounds is None else tuple(min(x, int(y)) for x, y in zip(T, bounds))
    rep = FibrationReport("reedy_left", T)
    rep.add("bireedy", is_bireedy_fib(p, b[:2]))
    for k in range(b[0] + 1):
        rep.add(f"left[k={k}]", is_left_fib(level_map(p, {0: k}), b[1]))
    rep.notes.append("levelwise reading: each Y_k -> X is a left fibration")
    return rep


def is_reedy_right_fib(p: PresheafMap, bounds=None, require_lemb: bool = True) -> FibrationReport:
    _need_lemb(p, require_lemb)
    rep = is_reedy_left_fib(opposite_map(p, 1), bounds, require_lemb)
    rep.kind = "reedy_right"
    rep.notes.append("dual: base direction reversed")
    return rep


# ---------------------------------------------------------------------------
# Localizers and locality


@dataclass
class LocalizerSet:
    """Monomorphisms of simplicial spaces (directions ``(k, l)``) up to a bound."""

    name: str
    bound: int
    custom: list[PresheafMap] = field(default_factory=list)

    def members_for(self, trunc) -> list[PresheafMap]:
        from .shapes import E, F, G, vertex_map, yoneda

        trunc = tuple(trunc)
        K = trunc[0]
        b = min(self.bound, K)
        if self.name == "custom":
            return list(self.custom)
        out = []
        if self.name in ("segal", "css"):
            out += [G(n, trunc)[1] for n in range(2, b + 1)]
        if self.name == "css":
            E1 = E(1, trunc)
            out.append(yoneda(E1, (0, (ops.identity(0), ops.identity(0))), F(0, trunc), label="F(0)->E(1)"))
        if self.name == "kan":
            out += [vertex_map(n, 0, trunc) for n in range(1, b + 1)]
        return out


def localizer(name: str, bound: int = 2, members: Sequence[PresheafMap] = ()) -> LocalizerSet:
    if name not in ("segal", "css", "kan", "custom"):
        raise StructuralError(f"unknown localizer {name!r}")
    return LocalizerSet(name, bound, list(members))


def _embed_vemb(i: PresheafMap, trunc) -> PresheafMap:
    return reindex_map(i, VEMB, trunc)


def _factors_through_vertex(b: PresheafMap) -> bool:
    targets = {c for c, _ in b.images}
    return len(targets) == 1 and not any(b.target.degs[c] != (0,) * b.target.arity for c in targets)


def local_wrt(p: PresheafMap, members: Sequence[PresheafMap], embed: str | None = None,
              through_vertex: bool = False, effort: str = "medium") -> Verdict:
    """Restriction of over-mapping spaces along each member is a weak equivalence.

    ``embed="vemb"`` places simplicial-space members into bisimplicial spaces
    (constant in the base direction).  Every structure map of the member's
    codomain into the base is tried unless ``through_vertex`` restricts to the
    constant ones.
    """
    Y, X = p.source, p.target
    a = Y.arity
    L = min(Y.trunc[-1], X.trunc[-1])
    parts = []
    for idx, i in enumerate(members):
        ie = _embed_vemb(i, X.trunc) if embed == "vemb" else i
        if ie.source.arity != a:
            raise StructuralError("member arity does not match")
        structure = HomSearch(ie.target, X).maps()
        if through_vertex:
            structure = [b for b in structure if _factors_through_vertex(b)]
        for sidx, b in enumerate(structure):
            big = Cotensor(ie.target, Y, (a - 1,), (L,), over=(p, b))
            small = Cotensor(ie.source, Y, (a - 1,), (L,), over=(p, compose_maps(b, ie)))
            r = restriction(ie, big, small)
            parts.append((f"{i.label or idx}@{sidx}", weq(r, effort)))
    v = meet(parts, (L,))
    if v.holds:
        return holds({"members": len(members), "checks": len(parts), "through_vertex": through_vertex}, (L,))
    return v


def is_local(p: PresheafMap, S: LocalizerSet, bounds=None, through_vertex: bool = False) -> Verdict:
    """Locality of a bisimplicial map against ``VEmb`` of the localizer members."""
    if p.source.arity != 3:
        raise StructuralError("is_local expects a map of bisimplicial spaces")
    T = p.target.trunc
    members = S.members_for((T[0], T[2]))
    if S.name == "custom":
        return local_wrt(p, members, "vemb", through_vertex)
    return _memo(p, ("local", S.name, S.bound, through_vertex), lambda: local_wrt(p, members, "vemb", through_vertex))


CLASSES = {
    "segal_cocart": ("left", "segal"),
    "cocart": ("left", "css"),
    "left": ("left", "kan"),
    "segal_cart": ("right", "segal"),
    "cart": ("right", "css"),
    "right": ("right", "kan"),
}


def check_class(p: PresheafMap, cls: str, bounds=None, require_lemb: bool = True,
                localizer_bound: int | None = None) -> FibrationReport:
    """Reedy left/right fibration plus locality against the class's localizer."""
    if cls not in CLASSES:
        raise StructuralError(f"unknown class {cls!r}; choose from {sorted(CLASSES)}")
    variance, lname = CLASSES[cls]
    _need_lemb(p, require_lemb)
    sub = (is_reedy_left_fib if variance == "left" else is_reedy_right_fib)(p, bounds, require_lemb)
    rep = FibrationReport(cls, sub.bounds)
    for name, v in sub.parts:
        rep.add(f"{sub.kind}.{name}", v)
    S = localizer(lname, localizer_bound if localizer_bound is not None else p.target.trunc[0])
    rep.add(f"local[{lname}]", is_local(p, S, bounds))
    rep.notes.extend(sub.notes)
    return rep


# ---------------------------------------------------------------------------
# Characterization readings


def val_map(p: PresheafMap, n: int = 0) -> PresheafMap:
    """``Val_n(p)``: fix the base direction at ``n``."""
    return level_map(p, {1: n})


def lfib_map(p: PresheafMap, k: int = 0) -> PresheafMap:
    """``LFib_k(p)``: fix the ``k`` direction."""
    return level_map(p, {0: k})


def base_points(X: Presheaf) -> list[PresheafMap]:
    """All maps from the point into ``X`` (vertices)."""
    P = point(X.arity, X.trunc)
    z = tuple(0 for _ in range(X.arity))
    return [PresheafMap(P, X, [(c, id_sigma(z))]) for c in X.cells(z)]


def fiber_over(p: PresheafMap, x: PresheafMap) -> PresheafMap:
    pb = Pullback(x, p)
    return pb.pr1


def characterization_crosscheck(p: PresheafMap, S: LocalizerSet, bounds=None) -> dict:
    """Five independent locality readings and whether the decided ones agree."""
    _need_lemb(p, True)
    T = p.target.trunc
    K, N, L = T
    b = T if bounds is None else tuple(min(x, int(y)) for x, y in zip(T, bounds))
    readings: dict[str, Verdict] = {}
    readings["global"] = is_local(p, S)
    mem2 = S.members_for((K, L))
    readings["val"] = local_wrt(val_map(p, 0), mem2)
    readings["val_k"] = meet([(f"n={n}", local_wrt(val_map(p, n), mem2)) for n in range(b[1] + 1)], (L,))
    parts = []
    for xi, x3 in enumerate(base_points(p.target)):
        fib = fiber_over(p, x3)
        parts.append((f"x={xi}", local_wrt(to_point(level(fib.source, {1: 0})), mem2)))
    readings["fiberwise"] = meet(parts, (L,))
    parts = []
    for n in range(b[1] + 1):
        for si, sig in enumerate(_simplices(p.target, n)):
            pb = Pullback(sig, p)
            parts.append((f"n={n}#{si}", is_local(pb.pr1, S)))
    readings["pullback_simplices"] = meet(parts, (L,))
    decided = {k: v.status.value for k, v in readings.items() if v.decided}
    agree = len(set(decided.values())) <= 1
    return {
        "readings": {k: v.to_json() for k, v in readings.items()},
        "decided": decided,
        "agree": agree,
        "unknown": sorted(k for k, v in readings.items() if v.unknown),
    }


def _simplices(B: Presheaf, n: int) -> list[PresheafMap]:
    """Maps ``LEmb(F(n)) -> B`` (representable in the base direction)."""
    from .shapes import F

    Fn = F(n, (B.trunc[1], B.trunc[2]))
    R = reindex(Fn, (2, 3, (1, 2)), B.trunc)[0]
    out = []
    for f in HomSearch(R, B).maps():
        out.append(f)
    # keep only maps determined by a nondegenerate or degenerate n-simplex: all maps qualify
    return out


# ---------------------------------------------------------------------------
# Conditions on localizing maps


def condition_check(f: PresheafMap, which: str, effort: str = "medium") -> Verdict:
    """(S): the diagonal of ``f`` is a weak equivalence; (D): the codomain is diagonally contractible; (C): both."""
    from .reindex import fdiag_map

    if f.source.arity != 2:
        raise StructuralError("conditions apply to maps of simplicial spaces")
    if which not in ("S", "D", "C"):
        raise StructuralError("condition must be S, D or C")
    parts = []
    if which in ("S", "C"):
        parts.append(("S", weq(fdiag_map(f), effort)))
    if which in ("D", "C"):
        parts.append(("D", diag_contractible(f.target, effort)))
    return meet(parts, f.target.trunc)


def condition_P_sample(f: PresheafMap, local_objects: Sequence[Presheaf], shapes: Sequence[Presheaf]) -> Verdict:
    """Sampled (P): for each ``S``-local ``W`` and shape ``K``, ``W^K`` stays local against ``f``."""
    from .mapping import internal_hom

    parts = []
    for wi, W in enumerate(local_objects):
        base = local_wrt(to_point(W), [f])
        if not base.holds:
            parts.append((f"W{wi}", unknown(f"sample object {wi} is not certified local", W.trunc)))
            continue
        for ki, K in enumerate(shapes):
            WK = internal_hom(K, W).obj
            parts.append((f"W{wi}^K{ki}", local_wrt(to_point(WK), [_retrunc(f, WK.trunc)])))
    v = meet(parts, f.target.trunc)
    if v.holds:
        return holds({"sampled": len(parts), "note": "sampled necessary check"}, f.target.trunc)
    return v


def _retrunc(f: PresheafMap, trunc) -> PresheafMap:
    from .presheaf import restrict_map

    return f if f.target.trunc == tuple(trunc) else restrict_map(f, trunc)


# ---------------------------------------------------------------------------
# Matching objects


@dataclass
class MatchingObject:
    obj: Presheaf
    to_base: PresheafMap
    comparison: PresheafMap
    exp: PullbackExponential


def matching_object(p: PresheafMap, k: int) -> MatchingObject:
    """``M_k L`` relative to ``LEmb(X)``, with ``L_k -> M_k L -> Map(F(k), LEmb X) = X``."""
    from .shapes import boundary, delta

    _need_lemb(p, True)
    T = p.target.trunc
    if k > T[0]:
        raise StructuralError("k exceeds the truncation")
    D = delta(k, T[0])
    if k == 0:
        i1 = PresheafMap(empty(1, (T[0],)), D, [])
    else:
        i1 = boundary(k, T[0])[1]
    i = _space_embed_first(i1, T)
    pe = PullbackExponential(i, p, free=(1, 2), trunc_out=(T[1], T[2]))
    return MatchingObject(pe.pb.obj, pe.pb.pr2, pe.map, pe)


def _space_embed_first(i: PresheafMap, T) -> PresheafMap:
    """``i [x] pt [x] pt`` for an arity-1 map ``i`` in the ``k`` direction."""
    from .algebra import boxprod, boxprod_map

    P = point(2, (T[1], T[2]))
    S = boxprod(i.source, P)
    Tt = boxprod(i.target, P)
    return boxprod_map(i, identity_map(P), S, Tt)


# ---------------------------------------------------------------------------
# Equivalences between Reedy left fibrations


def equivalence_criteria(g: PresheafMap, bounds=None, effort: str = "medium") -> dict[str, Verdict]:
    """Levelwise, value and fiberwise readings of a map over a common ``LEmb(X)``."""
    Y, Z = g.source, g.target
    T = tuple(min(a, b) for a, b in zip(Y.trunc, Z.trunc))
    b = T if bounds is None else tuple(min(x, int(y)) for x, y in zip(T, bounds))
    lv = []
    for k in range(b[0] + 1):
        for n in range(b[1] + 1):
            lv.append((f"{k},{n}", weq(level_map(g, {0: k, 1: n}), effort)))
    val = [(f"k={k}", weq(level_map(g, {0: k, 1: 0}), effort)) for k in range(b[0] + 1)]
    return {"levelwise": meet(lv, T), "val": meet(val, T)}


def fiberwise_criterion(g: PresheafMap, pY: PresheafMap, pZ: PresheafMap, bounds=None, effort: str = "medium") -> Verdict:
    """For each vertex, ``Fib_x Val(Y) -> Fib_x Val(Z)`` is a levelwise weak equivalence."""
    T = pY.target.trunc
    b = T if bounds is None else tuple(min(x, int(y)) for x, y in zip(T, bounds))
    parts = []
    for xi, x3 in enumerate(base_points(pY.target)):
        fy, fz = Pullback(x3, pY), Pullback(x3, pZ)
        h = fz.pair(fy.pr1, compose_maps(g, fy.pr2))
        for k in range(b[0] + 1):
            parts.append((f"x={xi},k={k}", weq(level_map(h, {0: k, 1: 0}), effort)))
    return meet(parts, T)


def total_diagonal(f: PresheafMap) -> PresheafMap:
    spec = (f.source.arity, 1, tuple(0 for _ in range(f.source.arity)))
    return reindex_map(f, spec)


CLASS_OF = {"segal": "segal_cocart", "css": "cocart", "kan": "left"}


def certified_fibrant(p: PresheafMap, S: LocalizerSet) -> Verdict:
    """``p`` is an ``S``-localized Reedy left fibration."""
    if S.name in CLASS_OF:
        return check_class(p, CLASS_OF[S.name]).verdict
    rep = is_reedy_left_fib(p)
    return meet([("reedy_left", rep.verdict), ("local", is_local(p, S))], p.target.trunc)


def recognition_equiv(g: PresheafMap, pY: PresheafMap, pZ: PresheafMap, replacements: Sequence[PresheafMap],
                      S: LocalizerSet, fibrant: bool | None = None, effort: str = "medium") -> Verdict:
    """Pull back along each right fibrant replacement ``R_x -> LEmb(X)`` and compare diagonals.

    The diagonal ``(k, n, l) -> (k, l, l)`` of each pulled-back map must be an
    ``S``-localized Reedy equivalence.  Between ``S``-fibrant objects both
    sides are Reedy equivalent to ``S``-local objects, so the levelwise
    reading decides it; otherwise a localized fibrant replacement would be
    needed and the answer is Unknown.
    """
    from .reindex import fdiag_map

    T = pY.target.trunc
    if fibrant is None:
        fibrant = certified_fibrant(pY, S).holds and certified_fibrant(pZ, S).holds
    if not fibrant:
        return unknown("objects not certified S-fibrant; localized replacement not attempted", T)
    parts = []
    for xi, R in enumerate(replacements):
        py, pz = Pullback(R, pY), Pullback(R, pZ)
        h = fdiag_map(pz.pair(py.pr1, compose_maps(g, py.pr2)))
        for k in range(h.source.trunc[0] + 1):
            parts.append((f"x={xi},k={k}", weq(level_map(h, {0: k}), effort)))
    return meet(parts, T)


def mapping_space_criterion(g: PresheafMap, pY: PresheafMap, pZ: PresheafMap, fibrant_objects: Sequence[PresheafMap],
                            effort: str = "medium") -> Verdict:
    """``Map_X(Z, W) -> Map_X(Y, W)`` is a weak equivalence for every listed fibrant ``W -> X``."""
    parts = []
    L = pY.target.trunc[-1]
    for wi, pW in enumerate(fibrant_objects):
        W = pW.source
        big = Cotensor(pZ.source, W, (2,), (L,), over=(pW, pZ))
        small = Cotensor(pY.source, W, (2,), (L,), over=(pW, pY))
        parts.append((f"W{wi}", weq(restriction(g, big, small), effort)))
    return meet(parts, (L,))


def lemb_map(f: PresheafMap, trunc) -> PresheafMap:
    """``LEmb`` of a map of simplicial spaces."""
    return reindex_map(f, (2, 3, (1, 2)), trunc)


def over_lemb(p: PresheafMap, k_trunc: int) -> PresheafMap:
    """Convenience wrapper: lift an arity-2 map ``Y -> X`` to ``LEmb(Y) -> LEmb(X)``."""
    T = (k_trunc,) + p.target.trunc
    return lemb_map(p, T)


def dual(p: PresheafMap, t: int) -> PresheafMap:
    return opposite_map(p, t)


def op_presheaf(X: Presheaf, t: int) -> Presheaf:
    return opposite(X, t)


Checker = Callable[[PresheafMap], Verdict]
