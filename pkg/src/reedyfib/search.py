"""Enumeration of presheaf maps by backtracking over nondegenerate cells.

The kernel is compiled when ``reedyfib._kernels`` is importable and
``REEDYFIB_KERNEL`` is not ``python``; otherwise the pure-Python twin runs.
"""

from __future__ import annotations

import os
from . import _search, ops
from .presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    TruncationError,
    degrees_upto,
    leq,
)

try:  # pragma: no cover - depends on the build
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover
    _compiled = None


def backend() -> str:
    if _compiled is not None and os.environ.get("REEDYFIB_KERNEL", "").lower() != "python":
        return "compiled"
    return "python"


def _solver(name: str | None = None):
    name = name or backend()
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel not built")
        return _compiled.solve
    return _search.solve


class FlatTarget:
    """Global cell numbering and flat operator tables of a target presheaf."""

    def __init__(self, Y: Presheaf) -> None:
        self.Y = Y
        self.degs = degrees_upto(Y.trunc)
        self.off: dict[tuple, int] = {}
        n = 0
        for d in self.degs:
            self.off[d] = n
            n += Y.count(d)
        self.NY = n
        self.M = max(Y.trunc) + 2
        a, M, NY = Y.arity, self.M, self.NY
        face = [-1] * (a * M * NY)
        degen = [-1] * (a * M * NY)
        for d in self.degs:
            o = self.off[d]
            for j in range(a):
                if d[j] > 0:
                    od = self.off[tuple(x - (k == j) for k, x in enumerate(d))]
                    for i in range(d[j] + 1):
                        t = Y.face_table(d, j, i)
                        base = (j * M + i) * NY + o
                        for x, y in enumerate(t):
                            face[base + x] = od + y
                if d[j] < Y.trunc[j]:
                    ou = self.off[tuple(x + (k == j) for k, x in enumerate(d))]
                    for i in range(d[j] + 1):
                        t = Y.degen_table(d, j, i)
                        base = (j * M + i) * NY + o
                        for x, y in enumerate(t):
                            degen[base + x] = ou + y
        self.face, self.degen = face, degen
        ptr = [0] * (a * M * (NY + 1))
        items: list[int] = []
        for j in range(a):
            for i in range(M):
                base = (j * M + i) * NY
                buckets: dict[int, list[int]] = {}
                for g in range(NY):
                    f = face[base + g]
                    if f >= 0:
                        buckets.setdefault(f, []).append(g)
                pbase = (j * M + i) * (NY + 1)
                for f in range(NY):
                    ptr[pbase + f] = len(items)
                    items.extend(buckets.get(f, ()))
                ptr[pbase + NY] = len(items)
        self.cand_ptr, self.cand_items = ptr, items

    def arrays(self):
        """Numpy copies of the tables for the compiled kernel (built once)."""
        arr = getattr(self, "_np", None)
        if arr is None:
            import numpy as np

            arr = self._np = tuple(
                np.asarray(x if len(x) else [0], dtype=np.int_)
                for x in (self.face, self.degen, self.cand_ptr, self.cand_items)
            )
        return arr

    def glob(self, nf) -> int:
        d = self.Y.nf_degree(nf)
        return self.off[d] + self.Y.index(nf)

    def nf(self, g: int, d) -> tuple:
        return self.Y.level(d)[g - self.off[d]]


def flat(Y: Presheaf) -> FlatTarget:
    ft = getattr(Y, "_flat", None)
    if ft is None:
        ft = FlatTarget(Y)
        Y._flat = ft  # type: ignore[attr-defined]
    return ft


def _chain(sig) -> list[tuple[int, int]]:
    out = []
    for k, s in enumerate(sig):
        for i in sorted(ops.collapsed(s)):
            out.append((k, i))
    return out


def _closure_order(A: Presheaf) -> list[int]:
    """Faces before cofaces, visiting each top cell's closure depth-first.

    Every vertex is followed closely by an edge that constrains it, so the
    search prunes early instead of first enumerating all vertex assignments.
    """
    seen: set[int] = set()
    out: list[int] = []
    roots = sorted(range(len(A.degs)), key=lambda c: (-sum(A.degs[c]), c))
    for r in roots:
        if r in seen:
            continue
        stack = [(r, False)]
        while stack:
            c, done = stack.pop()
            if done:
                out.append(c)
                continue
            if c in seen:
                continue
            seen.add(c)
            stack.append((c, True))
            e = A.degs[c]
            for j in reversed(range(A.arity)):
                for i in reversed(range(e[j] + 1) if e[j] > 0 else ()):
                    t = A.faces[c][j][i][0]
                    if t not in seen:
                        stack.append((t, False))
    return out


class HomSearch:
    """All maps ``A -> Y``, optionally with prescribed images and a projection constraint.

    ``over=(q, s)`` restricts to maps ``h`` with ``q o h == s`` where ``q: Y -> X``
    and ``s: A -> X``.  ``fixed`` maps nondegenerate cells of ``A`` to normal
    forms in ``Y``.
    """

    def __init__(self, A: Presheaf, Y: Presheaf, *, over: tuple[PresheafMap, PresheafMap] | None = None,
                 fixed: dict[int, tuple] | None = None) -> None:
        if A.arity != Y.arity:
            raise StructuralError("hom search needs equal arity")
        for d in A.degs:
            if not leq(d, Y.trunc):
                raise TruncationError(f"source cell in degree {d} beyond target truncation {Y.trunc}")
        self.A, self.Y = A, Y
        ft = flat(Y)
        self.ft = ft
        order = _closure_order(A)
        self.order = order
        pos = {c: k for k, c in enumerate(order)}
        n = len(order)
        self.var_off = [ft.off[A.degs[c]] for c in order]
        self.var_cnt = [Y.count(A.degs[c]) for c in order]
        self.fixed = [-1] * n
        if fixed:
            for c, nf in fixed.items():
                if Y.nf_degree(nf) != A.degs[c]:
                    raise StructuralError(f"prescribed image of cell {c} has the wrong degree")
                self.fixed[pos[c]] = ft.glob(nf)
        self.req = [-1] * n
        self.qproj: list[int] = []
        if over is not None:
            q, s = over
            X = q.target
            fx = flat(X)
            qp = [0] * ft.NY
            for d in ft.degs:
                arr = q.array(d)
                o, ox = ft.off[d], fx.off[d]
                for k, v in enumerate(arr):
                    qp[o + k] = ox + v
            self.qproj = qp
            for c in order:
                self.req[pos[c]] = fx.glob(s.image_nf((c, tuple(ops.identity(e) for e in A.degs[c]))))
        slot_ptr = [0]
        sj, si, ss, cptr, cd, ci = [], [], [], [0], [], []
        for c in order:
            e = A.degs[c]
            for j in range(A.arity):
                if e[j] == 0:
                    continue
                for i in range(e[j] + 1):
                    t, sig = A.faces[c][j][i]
                    sj.append(j)
                    si.append(i)
                    ss.append(pos[t])
                    for k, idx in _chain(sig):
                        cd.append(k)
                        ci.append(idx)
                    cptr.append(len(cd))
            slot_ptr.append(len(sj))
        self.slots = (slot_ptr, sj, si, ss, cptr, cd, ci)

    def run(self, limit: int = -1, kernel: str | None = None) -> list[list[int]]:
        """Raw solutions (global target indices per variable, in search order)."""
        ft = self.ft
        slot_ptr, sj, si, ss, cptr, cd, ci = self.slots
        kernel = kernel or backend()
        tables = ft.arrays() if kernel == "compiled" else (ft.face, ft.degen, ft.cand_ptr, ft.cand_items)
        face, degen, cand_ptr, cand_items = tables
        return _solver(kernel)(
            len(self.order), self.var_off, self.var_cnt, self.fixed, self.req, self.qproj,
            slot_ptr, sj, si, ss, cptr, cd, ci,
            face, degen, ft.M, ft.NY, cand_ptr, cand_items, limit,
        )

    def images(self, sol: list[int]) -> list[tuple]:
        out: list = [None] * len(self.order)
        for k, c in enumerate(self.order):
            out[c] = self.ft.nf(sol[k], self.A.degs[c])
        return out

    def maps(self, limit: int = -1, kernel: str | None = None) -> list[PresheafMap]:
        return [PresheafMap(self.A, self.Y, self.images(s)) for s in self.run(limit, kernel)]

    def count(self, kernel: str | None = None) -> int:
        return len(self.run(-1, kernel))

    def first(self, kernel: str | None = None) -> PresheafMap | None:
        sols = self.run(1, kernel)
        return PresheafMap(self.A, self.Y, self.images(sols[0])) if sols else None

    def keys(self, limit: int = -1, kernel: str | None = None) -> list[tuple]:
        """Solutions as hashable tuples indexed by source cell id."""
        out = []
        for sol in self.run(limit, kernel):
            key = [0] * len(self.order)
            for k, c in enumerate(self.order):
                key[c] = sol[k]
            out.append(tuple(key))
        return out


def hom(A: Presheaf, Y: Presheaf, **kw) -> list[PresheafMap]:
    return HomSearch(A, Y, **kw).maps()


def count_maps(A: Presheaf, Y: Presheaf, **kw) -> int:
    return HomSearch(A, Y, **kw).count()


def first_map(A: Presheaf, Y: Presheaf, **kw) -> PresheafMap | None:
    return HomSearch(A, Y, **kw).first()


def extensions(i: PresheafMap, a: PresheafMap, Y: Presheaf | None = None, over=None, limit: int = -1) -> list[PresheafMap]:
    """Maps ``h: B -> Y`` with ``h o i == a`` (``i`` must be injective on nondegenerate cells)."""
    B = i.target
    Y = Y or a.target
    fixed: dict[int, tuple] = {}
    for c, (t, sig) in enumerate(i.images):
        if not all(s == ops.identity(len(s) - 1) for s in sig):
            raise StructuralError("extension search needs an inclusion of nondegenerate cells")
        if t in fixed and fixed[t] != a.images[c]:
            return []
        fixed[t] = a.images[c]
    return HomSearch(B, Y, over=over, fixed=fixed).maps(limit)

