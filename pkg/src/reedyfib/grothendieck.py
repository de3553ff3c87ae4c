"""Category-of-elements construction over nerves of finite categories.

For ``F: C -> (presheaves of arity a)`` the result has arity ``a + 1``; the
base direction is inserted just before the space direction.  A cell over an
``n``-chain ``s`` of ``C`` is a cell of ``F(s(0))``; base faces other than
``d_0`` keep it, ``d_0`` transports it along the first arrow of ``s``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Pullback
from .category import (
    FiniteCategory,
    all_chains,
    chain_face,
    chain_vertices,
    nerve,
    nerve_cell_id,
)
from .io import assignment_to_json, nf_from_json, presheaf_from_json, presheaf_to_json
from .presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    compose_maps,
    degrees_upto,
    empty,
    from_levels,
    id_sigma,
    identity_map,
    is_iso,
    maps_equal,
)
from .reindex import CONST_SPACE, VEMB, reindex
from .search import HomSearch
from .verdict import Verdict, fails, holds, meet


def _restricted(X: Presheaf, trunc) -> Presheaf:
    """``X`` at the requested truncation, or ``X`` itself when it already matches."""
    return X if X.trunc == tuple(trunc) else X.restrict(trunc)


class DiagramFunctor:
    """A functor from a finite category to presheaves of a fixed arity.

    ``values`` maps object names to presheaves (all with one truncation);
    ``arrow_maps`` maps generating arrow names to presheaf maps.
    """

    def __init__(self, C: FiniteCategory, values: dict[str, Presheaf], arrow_maps: dict[str, PresheafMap],
                 label: str = "") -> None:
        self.C = C
        self.label = label
        if set(values) != set(C.objects):
            raise StructuralError("a diagram needs exactly one value per object")
        arities = {X.arity for X in values.values()}
        truncs = {X.trunc for X in values.values()}
        if len(arities) != 1 or len(truncs) != 1:
            raise StructuralError("diagram values must share arity and truncation")
        self.arity = arities.pop()
        self.trunc = truncs.pop()
        self.values = [values[o] for o in C.objects]
        if set(arrow_maps) != set(C.arrows):
            raise StructuralError("a diagram needs exactly one map per generating arrow")
        self.arrow_maps = dict(arrow_maps)
        for a, (s, t) in C.arrows.items():
            m = arrow_maps[a]
            if m.source.degs != values[s].degs or m.target.degs != values[t].degs:
                raise StructuralError(f"map for arrow {a} has the wrong endpoints")
        self._mor: dict[int, PresheafMap] = {}
        self.check_functorial()

    def value(self, obj: int) -> Presheaf:
        return self.values[obj]

    def on_word(self, word: Sequence[str], src: int) -> PresheafMap:
        f = identity_map(self.values[src])
        for a in word:
            m = self.arrow_maps[a]
            f = compose_maps(PresheafMap(self.values[self.C.obj_index[self.C.arrows[a][0]]],
                                         self.values[self.C.obj_index[self.C.arrows[a][1]]], m.images), f)
        return f

    def on_morphism(self, f: int) -> PresheafMap:
        m = self._mor.get(f)
        if m is None:
            m = self.on_word(self.C.mor_word[f], self.C.mor_src[f])
            self._mor[f] = m
        return m

    def check_functorial(self) -> None:
        for l, r in self.C.relations:
            src = self.C.obj_index[self.C.arrows[l[0]][0]] if l else self.C.obj_index[self.C.arrows[r[0]][0]]
            if not maps_equal(self.on_word(l, src), self.on_word(r, src)):
                raise StructuralError(f"functoriality violated on relation {l} = {r}")

    def to_json(self) -> dict:
        return {
            "format": "diagram/1",
            "category": self.C.to_json(),
            "values": {o: presheaf_to_json(X) for o, X in zip(self.C.objects, self.values)},
            "arrow_maps": {a: assignment_to_json(m) for a, m in sorted(self.arrow_maps.items())},
        }


def diagram_from_json(data: dict, base_dir: str = ".") -> DiagramFunctor:
    if data.get("format") != "diagram/1":
        raise StructuralError(f"expected format diagram/1, got {data.get('format')!r}")
    C = FiniteCategory.from_json(data["category"])
    values = {}
    for o, v in data["values"].items():
        if isinstance(v, str):
            with open(os.path.join(base_dir, v)) as fh:
                v = json.load(fh)
        values[o] = presheaf_from_json(v)
    maps = {}
    for a, asg in data["arrow_maps"].items():
        s, t = C.arrows[a]
        S, T = values[s], values[t]
        images = []
        for c, d in enumerate(S.degs):
            if str(c) not in asg:
                raise StructuralError(f"arrow {a}: no image for cell {c}")
            images.append(nf_from_json(asg[str(c)], d))
        m = PresheafMap(S, T, images)
        bad = m.naturality_violations()
        if bad:
            raise StructuralError(f"arrow {a}: map is not natural: {bad[0]}")
        maps[a] = m
    return DiagramFunctor(C, values, maps)


def constant(C: FiniteCategory, P: Presheaf) -> DiagramFunctor:
    return DiagramFunctor(C, {o: P for o in C.objects}, {a: identity_map(P) for a in C.arrows},
                          label=f"const({P.label})")


# ---------------------------------------------------------------------------
# The construction


@dataclass
class Groth:
    """``p: total -> base`` plus the bookkeeping needed for fibers."""

    F: DiagramFunctor
    total: Presheaf
    base: Presheaf
    proj: PresheafMap
    nerve: Presheaf
    base_pos: int
    cells: dict = field(default_factory=dict)


def _base_of(Nv: Presheaf, arity: int, trunc) -> tuple[Presheaf, dict]:
    """Nerve placed as a constant-in-space (and constant-in-k) base of the given arity."""
    if arity == 2:
        return reindex(Nv, (1, 2, (0,)), trunc)
    return reindex(Nv, (1, 3, (1,)), trunc)


def groth(F: DiagramFunctor, N: int | None = None, label: str = "") -> Groth:
    """The category of elements ``p: int F -> N(C)`` (base embedded constantly)."""
    C = F.C
    a = F.arity
    out_arity = a + 1
    pos = a - 1
    N = F.trunc[0] if N is None else N
    trunc = F.trunc[:pos] + (N,) + F.trunc[pos:]
    Nv = nerve(C, N)
    chains = {n: all_chains(C, n) for n in range(N + 1)}
    chain_idx = {n: {ch: k for k, ch in enumerate(chains[n])} for n in chains}
    src = {n: [chain_vertices(C, ch, n)[0] for ch in chains[n]] for n in chains}

    def split(D):
        return D[pos], D[:pos] + D[pos + 1:]

    raw: dict = {}
    offs: dict = {}
    counts = {}
    for D in degrees_upto(trunc):
        n, d = split(D)
        o, lst = [], []
        tot = 0
        for k, ch in enumerate(chains[n]):
            o.append(tot)
            cnt = F.value(src[n][k]).count(d)
            lst.extend((k, x) for x in range(cnt))
            tot += cnt
        offs[D], raw[D], counts[D] = o, lst, tot

    face, degen = {}, {}
    for D in degrees_upto(trunc):
        n, d = split(D)
        for j in range(out_arity):
            if j == pos:
                if n > 0:
                    Dm = D[:pos] + (n - 1,) + D[pos + 1:]
                    for i in range(n + 1):
                        tab = []
                        for k, x in raw[D]:
                            ch = chains[n][k]
                            fch = chain_face(C, ch, n, i)
                            k2 = chain_idx[n - 1][fch]
                            y = x
                            if i == 0:
                                y = F.on_morphism(ch[0]).array(d)[x]
                            tab.append(offs[Dm][k2] + y)
                        face[(D, j, i)] = tab
                if n < N:
                    Dp = D[:pos] + (n + 1,) + D[pos + 1:]
                    for i in range(n + 1):
                        tab = []
                        for k, x in raw[D]:
                            ch = chains[n][k]
                            v = chain_vertices(C, ch, n)[i]
                            sch = (v,) if n == 0 else ch[:i] + (C.identity(v),) + ch[i:]
                            tab.append(offs[Dp][chain_idx[n + 1][sch]] + x)
                        degen[(D, j, i)] = tab
            else:
                jj = j if j < pos else j - 1
                e = d[jj]
                if e > 0:
                    Dm = tuple(x - (t == j) for t, x in enumerate(D))
                    for i in range(e + 1):
                        tab = []
                        for k, x in raw[D]:
                            V = F.value(src[n][k])
                            tab.append(offs[Dm][k] + V.face_table(d, jj, i)[x])
                        face[(D, j, i)] = tab
                if e < trunc[j]:
                    Dp = tuple(x + (t == j) for t, x in enumerate(D))
                    for i in range(e + 1):
                        tab = []
                        for k, x in raw[D]:
                            V = F.value(src[n][k])
                            tab.append(offs[Dp][k] + V.degen_table(d, jj, i)[x])
                        degen[(D, j, i)] = tab

    db = None
    vb = [V.dim_bound for V in F.values]
    Nb = Nv.dim_bound
    if Nb is not None and all(b is not None for b in vb):
        m = tuple(max(b[t] for b in vb) for t in range(a)) if vb else (0,) * a
        db = m[:pos] + (Nb[0],) + m[pos:]
    total, perm = from_levels(out_arity, trunc, counts, face, degen, dim_bound=db,
                              label=label or f"int({F.label or C.name})")
    base, bperm = _base_of(Nv, out_arity, trunc)
    arrays = {}
    for D in degrees_upto(trunc):
        n, _ = split(D)
        inv = [0] * len(perm[D])
        for r, cidx in enumerate(perm[D]):
            inv[cidx] = r
        arr = []
        for cidx in range(len(inv)):
            k, _ = raw[D][inv[cidx]]
            ch = chains[n][k]
            nf = nerve_cell_id(C, Nv, ch, n)
            nf = (nf[0], (nf[1],))
            arr.append(bperm[D][Nv.index(nf)])
        arrays[D] = arr
    proj = PresheafMap.from_arrays(total, base, arrays, label="proj")
    return Groth(F, total, base, proj, Nv, pos, {"raw": raw, "perm": perm})


def base_vertex(G: Groth, obj: int) -> PresheafMap:
    """The point of the base over object ``obj``."""
    from .presheaf import point

    B = G.base
    P = point(B.arity, B.trunc)
    zero = tuple(0 for _ in range(B.arity))
    vs = B.cells(zero)
    return PresheafMap(P, B, [(vs[obj], id_sigma(zero))], label=f"<{G.F.C.objects[obj]}>")


def fiber(G: Groth, obj: int) -> Presheaf:
    return Pullback(base_vertex(G, obj), G.proj).obj


def _embedded_value(G: Groth, obj: int, trunc) -> Presheaf:
    V = G.F.value(obj)
    spec = CONST_SPACE if V.arity == 1 else VEMB
    return reindex(V, spec, trunc)[0]


def find_iso(X: Presheaf, Y: Presheaf) -> PresheafMap | None:
    if X.arity != Y.arity:
        return None
    if [X.count(d) for d in X.degrees()] != [Y.count(d) for d in X.degrees()]:
        return None
    for f in HomSearch(X, Y).maps():
        if is_iso(f):
            return f
    return None


def fiber_check(G: Groth, obj: int) -> Verdict:
    """Is the fiber over ``obj`` isomorphic to ``F(obj)``?"""
    Fb = fiber(G, obj)
    E = _embedded_value(G, obj, Fb.trunc)
    if Fb.trunc != E.trunc:
        E = _restricted(E, Fb.trunc)
    f = find_iso(Fb, E)
    if f is not None:
        return holds({"object": G.F.C.objects[obj], "iso": assignment_to_json(f)}, Fb.trunc)
    return fails({"object": G.F.C.objects[obj],
                  "fiber_cells": [Fb.count(d) for d in Fb.degrees()],
                  "value_cells": [E.count(d) for d in E.degrees()]}, Fb.trunc)


def natural_transformation_map(G1: Groth, G2: Groth, alpha: dict[str, PresheafMap]) -> PresheafMap:
    """``int(alpha): int F -> int F'`` over the common base."""
    F1, F2 = G1.F, G2.F
    C = F1.C
    if F2.C is not C:
        raise StructuralError("natural transformation needs a common category")
    for a, (s, t) in C.arrows.items():
        lhs = compose_maps(alpha[t], F1.arrow_maps[a])
        rhs = compose_maps(F2.arrow_maps[a], alpha[s])
        if not maps_equal(lhs, rhs):
            raise StructuralError(f"naturality fails at arrow {a}")
    T1, T2 = G1.total, G2.total
    pos = G1.base_pos
    perm1, perm2, raw1, raw2 = G1.cells["perm"], G2.cells["perm"], G1.cells["raw"], G2.cells["raw"]
    arrays = {}
    for D in T1.degrees():
        n = D[pos]
        d = D[:pos] + D[pos + 1:]
        inv = [0] * len(perm1[D])
        for r, c in enumerate(perm1[D]):
            inv[c] = r
        where = {kx: r for r, kx in enumerate(raw2[D])}
        chs = all_chains(C, n)
        arr = []
        for c in range(len(inv)):
            k, x = raw1[D][inv[c]]
            o = chain_vertices(C, chs[k], n)[0]
            y = alpha[C.objects[o]].array(d)[x]
            arr.append(perm2[D][where[(k, y)]])
        arrays[D] = arr
    return PresheafMap.from_arrays(T1, T2, arrays, label="int(alpha)")


# ---------------------------------------------------------------------------
# Fibrancy of diagrams and slice replacements


def projectively_fibrant_check(F: DiagramFunctor, S, bound=None) -> Verdict:
    """Objectwise Reedy fibrancy and ``S``-locality of every value.

    For the poset-shaped corpus categories projective and objectwise fibrancy
    agree at the truncations used here.
    """
    from .fibrations import is_reedy_fib, local_wrt

    parts = []
    for o, V in zip(F.C.objects, F.values):
        if V.arity != 2:
            raise StructuralError("projective fibrancy is checked for simplicial-space valued diagrams")
        p = _to_point(V)
        parts.append((f"reedy[{o}]", is_reedy_fib(p, bound)))
        parts.append((f"local[{o}]", local_wrt(p, S.members_for(V.trunc), embed=None)))
    return meet(parts, F.trunc)


def _to_point(V: Presheaf) -> PresheafMap:
    from .presheaf import to_point

    return to_point(V)


def slice_category(C: FiniteCategory, x: int) -> tuple[FiniteCategory, list[int], dict[str, int]]:
    """``C/x`` with its object list (morphisms into ``x``) and arrow labels (morphisms of C)."""
    objs = [f for f in range(C.n_morphisms) if C.mor_tgt[f] == x]
    names = [f"m{f}" for f in objs]
    arrows: dict[str, tuple[str, str]] = {}
    label: dict[str, int] = {}
    for ia, a in enumerate(objs):
        for ib, b in enumerate(objs):
            for g in C.hom(C.mor_src[a], C.mor_src[b]):
                if C.is_identity(g) and ia == ib:
                    continue
                if C.compose(b, g) == a:
                    nm = f"g{g}_{ia}_{ib}"
                    arrows[nm] = (names[ia], names[ib])
                    label[nm] = g
    rels = []
    for n1, (s1, t1) in arrows.items():
        for n2, (s2, t2) in arrows.items():
            if t1 != s2:
                continue
            comp = C.compose(label[n2], label[n1])
            if s1 == t2 and C.is_identity(comp):
                rels.append(((n1, n2), ()))
                continue
            tgt = [n for n, (s, t) in arrows.items() if s == s1 and t == t2 and label[n] == comp]
            if tgt:
                rels.append(((n1, n2), (tgt[0],)))
    S = FiniteCategory(names, arrows, rels, name=f"{C.name}/{C.objects[x]}")
    return S, [C.mor_src[f] for f in objs], label


def slice_replacement(C: FiniteCategory, x: int, N: int) -> PresheafMap:
    """``N(C/x) -> N(C)``, the right fibrant replacement of the vertex ``x``."""
    S, obj_of, label = slice_category(C, x)
    NS, NC = nerve(S, N), nerve(C, N)
    images = []
    for c, (m,) in enumerate(NS.degs):
        ch = _chain_of_cell(S, NS, c, m)
        if m == 0:
            base_ch = (obj_of[ch[0]],)
        else:
            base_ch = tuple(_word_label(C, S, f, label) for f in ch)
        cid, sig = nerve_cell_id(C, NC, base_ch, m)
        images.append((cid, (sig,)))
    f = PresheafMap(NS, NC, images, label=f"R_{C.objects[x]}")
    return f


def _word_label(C: FiniteCategory, S: FiniteCategory, f: int, label: dict[str, int]) -> int:
    g = None
    for a in S.mor_word[f]:
        g = label[a] if g is None else C.compose(label[a], g)
    return g  # type: ignore[return-value]


def _chain_of_cell(S: FiniteCategory, NS: Presheaf, c: int, m: int) -> tuple[int, ...]:
    from .category import chains

    lst = chains(S, m)
    first = NS.cells((m,))[0]
    return lst[c - first]


def slice_replacement_space(C: FiniteCategory, x: int, N: int, L: int) -> PresheafMap:
    """The slice replacement as a map of simplicial spaces constant in the space direction."""
    from .reindex import reindex_map

    f = slice_replacement(C, x, N)
    return reindex_map(f, (1, 2, (0,)), (N, L))


def slice_replacement_over(G: Groth, x: int) -> PresheafMap:
    """The slice replacement of ``x`` as a map into the base of ``G``."""
    from .reindex import reindex_map

    f = slice_replacement(G.F.C, x, G.base.trunc[G.base_pos])
    spec = (1, 2, (0,)) if G.base.arity == 2 else (1, 3, (1,))
    r = reindex_map(f, spec, G.base.trunc)
    return PresheafMap(r.source, G.base, r.images, r.label)


def empty_diagram(C: FiniteCategory, arity: int, trunc) -> DiagramFunctor:
    E = empty(arity, trunc)
    return DiagramFunctor(C, {o: E for o in C.objects}, {a: identity_map(E) for a in C.arrows}, label="empty")


__all__ = [
    "DiagramFunctor", "Groth", "base_vertex", "constant", "diagram_from_json", "empty_diagram", "fiber",
    "fiber_check", "find_iso", "groth", "natural_transformation_map", "projectively_fibrant_check",
    "slice_category", "slice_replacement", "slice_replacement_over", "slice_replacement_space",
]
