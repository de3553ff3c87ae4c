"""The standard objects: simplices, boundaries, horns, F(n), E(n), spines, F(k,n)."""

from __future__ import annotations

import os
from itertools import combinations
from typing import Sequence

from . import ops
from .algebra import Pushout, boxprod, pushout_product
from .category import FiniteCategory, indiscrete, nerve
from .presheaf import Presheaf, PresheafMap, StructuralError, id_sigma, point


class ShapeError(ValueError):
    """Invalid shape parameters."""


def default_trunc(arity: int) -> tuple[int, ...]:
    """Default truncation; overridable through ``REEDYFIB_TRUNC`` (comma separated)."""
    env = os.environ.get("REEDYFIB_TRUNC")
    if env:
        vals = [int(v) for v in env.split(",")]
        if len(vals) == 1:
            vals = vals * arity
        if len(vals) >= arity:
            return tuple(vals[-arity:]) if len(vals) > arity else tuple(vals)
    return {1: (4,), 2: (3, 3), 3: (2, 2, 2)}[arity]


def _t(trunc, arity: int) -> tuple[int, ...]:
    if trunc is None:
        return default_trunc(arity)
    if isinstance(trunc, int):
        return (trunc,) * arity
    trunc = tuple(trunc)
    if len(trunc) != arity:
        raise ShapeError(f"truncation {trunc} does not have arity {arity}")
    return trunc


# ---------------------------------------------------------------------------
# Simplices


def delta(n: int, trunc=None) -> Presheaf:
    """The standard ``n``-simplex; nondegenerate cells are nonempty vertex sets."""
    if n < 0:
        raise ShapeError("delta needs n >= 0")
    (N,) = _t(trunc, 1)
    return _simplex_sub(n, N, lambda V: True, f"D[{n}]")


def _simplex_sub(n: int, N: int, keep, label: str) -> Presheaf:
    sets = [V for m in range(min(n, N) + 1) for V in combinations(range(n + 1), m + 1) if keep(V)]
    idx = {V: i for i, V in enumerate(sets)}
    degs, faces = [], []
    for V in sets:
        m = len(V) - 1
        degs.append((m,))
        row = []
        if m > 0:
            for i in range(m + 1):
                W = V[:i] + V[i + 1 :]
                if W not in idx:
                    raise StructuralError(f"{label}: vertex set {V} has missing face {W}")
                row.append((idx[W], (ops.identity(m - 1),)))
        faces.append([row])
    names = ["".join(map(str, V)) if n < 10 else ",".join(map(str, V)) for V in sets]
    dims = max((len(V) - 1 for V in sets), default=0)
    X = Presheaf(1, (N,), degs, faces, dim_bound=(dims,), names=names, label=label)
    X._vsets = idx  # type: ignore[attr-defined]
    return X


def _sub_inclusion(X: Presheaf, n: int, N: int, keep, label: str) -> tuple[Presheaf, PresheafMap]:
    S = _simplex_sub(n, N, keep, label)
    images = [(X._vsets[V], (ops.identity(len(V) - 1),)) for V in S._vsets]  # type: ignore[attr-defined]
    return S, PresheafMap(S, X, images, f"{label}->D[{n}]")


def boundary(n: int, trunc=None) -> tuple[Presheaf, PresheafMap]:
    """``dD[n]`` with its inclusion."""
    if n < 1:
        raise ShapeError("boundary needs n >= 1")
    (N,) = _t(trunc, 1)
    return _sub_inclusion(delta(n, N), n, N, lambda V: len(V) <= n, f"dD[{n}]")


def horn(n: int, i: int, trunc=None) -> tuple[Presheaf, PresheafMap]:
    """``L[n,i]``: the union of the faces containing vertex ``i``, with its inclusion."""
    if n < 1 or not 0 <= i <= n:
        raise ShapeError("horn needs n >= 1 and 0 <= i <= n")
    (N,) = _t(trunc, 1)
    full = tuple(range(n + 1))
    skip = full[:i] + full[i + 1 :]
    return _sub_inclusion(delta(n, N), n, N, lambda V: len(V) <= n and V != skip, f"L[{n},{i}]")


def spine(n: int, trunc=None) -> tuple[Presheaf, PresheafMap]:
    """Arity-1 spine: the edges ``{i, i+1}`` and all vertices."""
    (N,) = _t(trunc, 1)
    return _sub_inclusion(
        delta(n, N), n, N, lambda V: len(V) == 1 or (len(V) == 2 and V[1] == V[0] + 1), f"Sp[{n}]"
    )


def simplex_nf(X: Presheaf, seq: Sequence[int]) -> tuple[int, tuple]:
    """Normal form in ``delta(n)`` of the cell with vertex sequence ``seq`` (monotone)."""
    seq = tuple(seq)
    if any(a > b for a, b in zip(seq, seq[1:])):
        raise ShapeError(f"vertex sequence {list(seq)} is not monotone")
    V = tuple(sorted(set(seq)))
    if V not in X._vsets:  # type: ignore[attr-defined]
        raise ShapeError(f"vertex sequence {list(seq)} is not a cell")
    epi, _ = ops.epi_mono(seq)
    return (X._vsets[V], (epi,))  # type: ignore[attr-defined]


def J(l: int, trunc=None) -> Presheaf:
    """Nerve of the contractible groupoid on ``l + 1`` objects."""
    if l < 0:
        raise ShapeError("J needs l >= 0")
    (N,) = _t(trunc, 1)
    X = nerve(indiscrete(l + 1), N, label=f"J[{l}]")
    return X


def nerve_shape(C: FiniteCategory, trunc=None) -> Presheaf:
    (N,) = _t(trunc, 1)
    return nerve(C, N)


# ---------------------------------------------------------------------------
# Simplicial spaces: arity-1 factors placed in the categorical direction


def _pt(L: int) -> Presheaf:
    return point(1, (L,))


def F(n: int, trunc=None) -> Presheaf:
    """``F(n)_{k,l} = D[n]_k``."""
    N, L = _t(trunc, 2)
    X = boxprod(delta(n, N), _pt(L), label=f"F({n})")
    return X


def partialF(n: int, trunc=None) -> tuple[Presheaf, PresheafMap]:
    N, L = _t(trunc, 2)
    B, i = boundary(n, N)
    return _box_pt(i, L, f"dF({n})", f"F({n})")


def E(n: int, trunc=None) -> Presheaf:
    """``E(n)_{k,l} = J[n]_k``."""
    N, L = _t(trunc, 2)
    return boxprod(J(n, N), _pt(L), label=f"E({n})")


def _box_pt(i: PresheafMap, L: int, sl: str, tl: str) -> tuple[Presheaf, PresheafMap]:
    from .algebra import boxprod_map

    P = _pt(L)
    S = boxprod(i.source, P, label=sl)
    T = boxprod(i.target, P, label=tl)
    return S, boxprod_map(i, _id(P), S, T)


def _id(X: Presheaf) -> PresheafMap:
    return PresheafMap(X, X, [(c, id_sigma(d)) for c, d in enumerate(X.degs)], "id")


def F_cell(X: Presheaf, seq: Sequence[int]) -> tuple[int, tuple]:
    """Normal form in ``F(n)`` of the ``(k,0)``-cell with vertex sequence ``seq``."""
    D, P, idx = X._box  # type: ignore[attr-defined]
    c, (epi,) = simplex_nf(D, seq)
    return (idx[(c, 0)], (epi, (0,)))


def vertex_map(n: int, i: int, trunc=None) -> PresheafMap:
    """``<i>: F(0) -> F(n)``."""
    if not 0 <= i <= n:
        raise ShapeError(f"vertex {i} outside [0, {n}]")
    return simplex_map([i], n, trunc)


def simplex_map(seq: Sequence[int], n: int, trunc=None) -> PresheafMap:
    """``<a_0, ..., a_k>: F(k) -> F(n)`` for a monotone sequence."""
    seq = list(seq)
    if not seq or any(not 0 <= a <= n for a in seq):
        raise ShapeError(f"sequence {seq} outside [0, {n}]")
    if any(a > b for a, b in zip(seq, seq[1:])):
        raise ShapeError(f"sequence {seq} is not monotone")
    tr = _t(trunc, 2)
    k = len(seq) - 1
    S, T = F(k, tr), F(n, tr)
    return yoneda(T, F_cell(T, seq), S, label="<" + ",".join(map(str, seq)) + ">")


def representable(deg: Sequence[int], trunc) -> Presheaf:
    """``F``-type representable: simplices in every direction but the last, which is a point."""
    deg = tuple(deg)
    a = len(deg)
    trunc = _t(trunc, a)
    if deg[-1] != 0:
        raise ShapeError("representables here are discrete in the space direction")
    if a == 1:
        return delta(0, trunc)
    if a == 2:
        return F(deg[0], trunc)
    return F2(deg[0], deg[1], trunc)


def yoneda(X: Presheaf, nf, R: Presheaf | None = None, label: str = "") -> PresheafMap:
    """The map from the representable of the degree of ``nf`` into ``X`` picking ``nf``.

    The representable is a point in the last direction, so ``nf`` must have
    degree ``0`` there; for arity 1 this means a vertex.
    """
    c, sig = nf
    deg = tuple(len(s) - 1 for s in sig)
    if R is None:
        R = representable(deg, X.trunc)
    images = []
    for cell, d in enumerate(R.degs):
        cur = nf
        vs = _rep_vertex_sets(R, cell)
        for j, V in enumerate(vs):
            if V is not None:
                cur = X.act(cur, j, V)
        images.append(cur)
    return PresheafMap(R, X, images, label or "yoneda")


def _rep_vertex_sets(R: Presheaf, cell: int) -> list:
    """Per direction, the vertex set of a representable's nondegenerate cell."""
    inv = getattr(R, "_inv", None)
    if hasattr(R, "_vsets"):
        if inv is None:
            inv = R._inv = {v: k for k, v in R._vsets.items()}  # type: ignore[attr-defined]
        return [inv[cell]]
    if hasattr(R, "_box"):
        A, B, idx = R._box  # type: ignore[attr-defined]
        if inv is None:
            inv = R._inv = {v: k for k, v in idx.items()}  # type: ignore[attr-defined]
        a, b = inv[cell]
        return _rep_vertex_sets(A, a) + _rep_vertex_sets(B, b)
    return [None] * R.arity


# ---------------------------------------------------------------------------
# Spines


def G(n: int, trunc=None) -> tuple[Presheaf, PresheafMap]:
    """Spine of ``F(n)``: ``F(1)`` copies glued end to start, with its inclusion."""
    if n < 1:
        raise ShapeError("G needs n >= 1")
    tr = _t(trunc, 2)
    Fn = F(n, tr)
    cur = F(1, tr)
    inc = yoneda(Fn, F_cell(Fn, [0, 1]), cur)
    for i in range(1, n):
        last_vertex = _vertex_of(cur, inc, Fn, i)
        f = yoneda(cur, last_vertex, F(0, tr))
        g = vertex_map(1, 0, tr)
        po = Pushout(f, g)
        edge = yoneda(Fn, F_cell(Fn, [i, i + 1]), g.target)
        inc = po.induced(inc, edge)
        cur = po.obj
    cur.label = f"G({n})"
    inc.label = f"G({n})->F({n})"
    return cur, inc


def _vertex_of(X: Presheaf, inc: PresheafMap, Fn: Presheaf, v: int):
    want = F_cell(Fn, [v])
    for c, d in enumerate(X.degs):
        if sum(d) == 0 and inc.images[c] == want:
            return (c, id_sigma(d))
    raise StructuralError(f"vertex {v} not found")


# ---------------------------------------------------------------------------
# Bisimplicial spaces


def F2(k: int, n: int, trunc=None) -> Presheaf:
    """``F(k,n)_{a,b,c} = D[k]_a x D[n]_b``."""
    K, N, L = _t(trunc, 3)
    return boxprod(delta(k, K), boxprod(delta(n, N), _pt(L)), label=f"F({k},{n})")


def partialF2(k: int, n: int, trunc=None) -> tuple[Presheaf, PresheafMap]:
    """Boundary of ``F(k,n)``: cells missing the top simplex in at least one direction."""
    K, N, L = _t(trunc, 3)
    T = F2(k, n, (K, N, L))
    Dk, rest, idx = T._box  # type: ignore[attr-defined]
    Dn, P, idx2 = rest._box  # type: ignore[attr-defined]
    topk = Dk._vsets.get(tuple(range(k + 1)))  # type: ignore[attr-defined]
    topn = Dn._vsets.get(tuple(range(n + 1)))  # type: ignore[attr-defined]
    inv2 = {v: kk for kk, v in idx2.items()}
    keep = []
    for (a, r), c in idx.items():
        b, _ = inv2[r]
        if a != topk or b != topn:
            keep.append(c)
    S, kept = T.subobject(keep)
    S.label = f"dF({k},{n})"
    return S, PresheafMap(S, T, [(c, id_sigma(T.degs[c])) for c in kept], f"dF({k},{n})->F({k},{n})")


def partialF2_pp(k: int, n: int, trunc=None) -> PresheafMap:
    """``(dF(k,0) -> F(k,0)) [] (dF(0,n) -> F(0,n))``; empty boundaries for 0."""
    tr = _t(trunc, 3)
    return pushout_product(_bd3(k, 0, tr), _bd3(0, n, tr), tr)


def _bd3(k: int, n: int, tr) -> PresheafMap:
    from .presheaf import empty

    if k == 0 and n == 0:
        T = F2(0, 0, tr)
        return PresheafMap(empty(3, tr), T, [])
    return partialF2(k, n, tr)[1]


# ---------------------------------------------------------------------------
# Dispatcher


KINDS = ("delta", "boundary", "horn", "J", "F", "partialF", "E", "G", "F2", "partialF2", "nerve", "spine")


def build(kind: str, *params, trunc=None, category: FiniteCategory | None = None):
    """Build a named object; inclusion kinds return ``(object, inclusion)``."""
    try:
        if kind == "delta":
            return delta(*params, trunc=trunc)
        if kind == "boundary":
            return boundary(*params, trunc=trunc)
        if kind == "horn":
            return horn(*params, trunc=trunc)
        if kind == "spine":
            return spine(*params, trunc=trunc)
        if kind == "J":
            return J(*params, trunc=trunc)
        if kind == "F":
            return F(*params, trunc=trunc)
        if kind == "partialF":
            return partialF(*params, trunc=trunc)
        if kind == "E":
            return E(*params, trunc=trunc)
        if kind == "G":
            return G(*params, trunc=trunc)
        if kind == "F2":
            return F2(*params, trunc=trunc)
        if kind == "partialF2":
            return partialF2(*params, trunc=trunc)
        if kind == "nerve":
            if category is None:
                raise ShapeError("nerve needs a category")
            return nerve_shape(category, trunc)
    except TypeError as exc:
        raise ShapeError(f"bad parameters for {kind}: {params}") from exc
    raise ShapeError(f"unknown shape kind {kind!r}; choose from {', '.join(KINDS)}")
