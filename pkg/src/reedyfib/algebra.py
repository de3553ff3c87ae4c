"""Finite limits and colimits, products and the two-variable calculus."""

from __future__ import annotations

from itertools import product as iproduct
from typing import Sequence

from . import ops
from .presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    TruncationError,
    degrees_upto,
    from_levels,
    id_sigma,
    leq,
    maps_equal,
    same_presheaf,
    sub,
    unit,
)


def _min_trunc(*ts):
    return tuple(min(x) for x in zip(*ts))


def _fit(X: Presheaf, trunc) -> Presheaf:
    """``X`` at exactly ``trunc`` (lowering always, raising only when complete)."""
    if X.trunc == tuple(trunc):
        return X
    return X.restrict(trunc)


# ---------------------------------------------------------------------------
# Shuffles


def _shuffles(a: int, b: int, top: int) -> list[tuple[ops.Op, ops.Op]]:
    """Jointly injective pairs of surjections ``[m] -> [a]``, ``[m] -> [b]`` with ``m <= top``."""
    out = []
    for m in range(max(a, b), min(a + b, top) + 1):
        for s in ops.surjections(m, a):
            for t in ops.surjections(m, b):
                if all(s[i] != s[i + 1] or t[i] != t[i + 1] for i in range(m)):
                    out.append((s, t))
    return out


def _split(s: ops.Op, t: ops.Op) -> tuple[ops.Op, ops.Op, ops.Op]:
    """Factor a pair of monotone maps on ``[m]`` through a jointly injective pair.

    Returns ``(s', t', rho)`` with ``s = s' o rho``, ``t = t' o rho``.
    """
    rho = [0]
    v = 0
    for i in range(len(s) - 1):
        if s[i] != s[i + 1] or t[i] != t[i + 1]:
            v += 1
        rho.append(v)
    s2 = [0] * (v + 1)
    t2 = [0] * (v + 1)
    for i, r in enumerate(rho):
        s2[r] = s[i]
        t2[r] = t[i]
    return tuple(s2), tuple(t2), tuple(rho)


class Product:
    """Binary product with its projections and pairing."""

    def __init__(self, X: Presheaf, Y: Presheaf, trunc: Sequence[int] | None = None) -> None:
        if X.arity != Y.arity:
            raise StructuralError(f"product needs equal arity, got {X.arity} and {Y.arity}")
        T = tuple(trunc) if trunc is not None else _min_trunc(X.trunc, Y.trunc)
        if not (leq(T, X.trunc) or X.complete) or not (leq(T, Y.trunc) or Y.complete):
            raise TruncationError(f"product truncation {T} exceeds a factor")
        self.X, self.Y = X, Y
        a = X.arity
        keys: list[tuple] = []
        for x, dx in enumerate(X.degs):
            for y, dy in enumerate(Y.degs):
                per = [_shuffles(dx[j], dy[j], T[j]) for j in range(a)]
                if any(not p for p in per):
                    continue
                for combo in iproduct(*per):
                    keys.append((x, y, tuple(c[0] for c in combo), tuple(c[1] for c in combo)))
        keys.sort(key=lambda k: (sum(len(s) - 1 for s in k[2]), tuple(len(s) - 1 for s in k[2]), k))
        self.index = {k: i for i, k in enumerate(keys)}
        self.keys = keys
        degs = [tuple(len(s) - 1 for s in k[2]) for k in keys]
        faces = []
        for k in keys:
            x, y, s, t = k
            e = tuple(len(q) - 1 for q in s)
            fc = []
            for j in range(a):
                row = []
                if e[j] > 0:
                    for i in range(e[j] + 1):
                        fx = X.act((x, s), j, ops.coface(e[j], i))
                        fy = Y.act((y, t), j, ops.coface(e[j], i))
                        row.append(self._pair(fx, fy))
                fc.append(row)
            faces.append(fc)
        db = None
        if X.dim_bound is not None and Y.dim_bound is not None:
            db = tuple(p + q for p, q in zip(X.dim_bound, Y.dim_bound))
        self.obj = Presheaf(a, T, degs, faces, dim_bound=db, label=f"({X.label}x{Y.label})")
        self.pr1 = PresheafMap(self.obj, X, [(k[0], k[2]) for k in keys], "pr1")
        self.pr2 = PresheafMap(self.obj, Y, [(k[1], k[3]) for k in keys], "pr2")

    def _pair(self, fx, fy):
        x, sx = fx
        y, sy = fy
        outer_s, outer_t, rho = [], [], []
        for s, t in zip(sx, sy):
            s2, t2, r = _split(s, t)
            outer_s.append(s2)
            outer_t.append(t2)
            rho.append(r)
        return (self.index[(x, y, tuple(outer_s), tuple(outer_t))], tuple(rho))

    def pair_nf(self, fx, fy):
        """Normal form in the product of the cell with components ``fx`` and ``fy``."""
        return self._pair(fx, fy)

    def pair(self, f: PresheafMap, g: PresheafMap) -> PresheafMap:
        """The map ``<f, g>: W -> X x Y``."""
        if f.source is not g.source and not same_presheaf(f.source, g.source):
            raise StructuralError("pairing needs a common source")
        return PresheafMap(f.source, self.obj, [self._pair(a, b) for a, b in zip(f.images, g.images)], "pair")


def product(X: Presheaf, Y: Presheaf, trunc=None) -> Product:
    return Product(X, Y, trunc)


def product_map(f: PresheafMap, g: PresheafMap, P: Product | None = None, Q: Product | None = None) -> PresheafMap:
    """``f x g`` between (possibly precomputed) products."""
    P = P or Product(f.source, g.source)
    Q = Q or Product(f.target, g.target, P.obj.trunc if leq(P.obj.trunc, _min_trunc(f.target.trunc, g.target.trunc)) else None)
    images = []
    for x, y, s, t in P.keys:
        images.append(Q.pair_nf(f.image_nf((x, s)), g.image_nf((y, t))))
    return PresheafMap(P.obj, Q.obj, images, "x")


# ---------------------------------------------------------------------------
# Limits


class Pullback:
    """``Y x_X Z`` as a sub-presheaf of the product, with projections."""

    def __init__(self, f: PresheafMap, g: PresheafMap) -> None:
        if f.target is not g.target and not same_presheaf(f.target, g.target):
            raise StructuralError("pullback needs a common target")
        self.f, self.g = f, g
        self.prod = Product(f.source, g.source)
        keep = []
        for i, (y, z, s, t) in enumerate(self.prod.keys):
            if f.image_nf((y, s)) == g.image_nf((z, t)):
                keep.append(i)
        self.obj, self.kept = self.prod.obj.subobject(keep)
        self.obj.label = f"({f.source.label}x_{f.target.label}{g.source.label})"
        self._pos = {c: i for i, c in enumerate(self.kept)}
        self.pr1 = PresheafMap(self.obj, f.source, [self.prod.pr1.images[c] for c in self.kept], "pr1")
        self.pr2 = PresheafMap(self.obj, g.source, [self.prod.pr2.images[c] for c in self.kept], "pr2")

    def pair(self, a: PresheafMap, b: PresheafMap) -> PresheafMap:
        """Universal map from a cone ``(a, b)``; raises if it does not commute."""
        images = []
        for na, nb in zip(a.images, b.images):
            c, rho = self.prod.pair_nf(na, nb)
            if c not in self._pos:
                raise StructuralError("cone does not commute over the base")
            images.append((self._pos[c], rho))
        return PresheafMap(a.source, self.obj, images, "pair")


def pullback(f: PresheafMap, g: PresheafMap) -> Pullback:
    return Pullback(f, g)


def fiber(p: PresheafMap, x: PresheafMap) -> Pullback:
    """Fiber of ``p`` over a point ``x`` of its base (pullback along ``x``)."""
    return Pullback(x, p)


# ---------------------------------------------------------------------------
# Colimits


class _UF:
    def __init__(self, n: int) -> None:
        self.p = list(range(n))

    def find(self, a: int) -> int:
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            if a < b:
                self.p[b] = a
            else:
                self.p[a] = b


class Pushout:
    """``B +_A C`` computed levelwise, with injections and induced maps."""

    def __init__(self, f: PresheafMap, g: PresheafMap, trunc=None) -> None:
        if f.source is not g.source and not same_presheaf(f.source, g.source):
            raise StructuralError("pushout needs a common source")
        A = f.source
        B, C = f.target, g.target
        if B.arity != C.arity:
            raise StructuralError("pushout needs equal arity")
        T = tuple(trunc) if trunc is not None else _min_trunc(B.trunc, C.trunc)
        if not leq(T, A.trunc) and not A.complete:
            raise TruncationError(f"pushout at {T} needs the common source known there")
        if not leq(T, A.trunc):
            A2 = A.restrict(T)
            f = PresheafMap(A2, B, f.images)
            g = PresheafMap(A2, C, g.images)
            A = A2
        for Z in (B, C):
            if not leq(T, Z.trunc) and not Z.complete:
                raise TruncationError(f"pushout at {T} exceeds truncation of {Z!r}")
        self.f, self.g = f, g
        self.B, self.C = B, C
        a = B.arity
        counts, face, degen, cls = {}, {}, {}, {}
        for d in degrees_upto(T):
            nb, nc = B.count(d), C.count(d)
            uf = _UF(nb + nc)
            for x in range(A.count(d)):
                uf.union(f.array(d)[x], nb + g.array(d)[x])
            roots = sorted({uf.find(r) for r in range(nb + nc)})
            rid = {r: i for i, r in enumerate(roots)}
            cls[d] = ([rid[uf.find(r)] for r in range(nb + nc)], roots)
            counts[d] = len(roots)
        for d in degrees_upto(T):
            members, roots = cls[d]
            nb = B.count(d)
            for j in range(a):
                ops_here = []
                if d[j] > 0:
                    ops_here += [("f", i, sub(d, unit(a, j)), ops.coface(d[j], i)) for i in range(d[j] + 1)]
                if d[j] < T[j]:
                    ops_here += [("s", i, tuple(x + (1 if k == j else 0) for k, x in enumerate(d)), ops.codegeneracy(d[j], i)) for i in range(d[j] + 1)]
                for kind, i, d2, theta in ops_here:
                    tb = B.op_table(d, j, theta)
                    tc = C.op_table(d, j, theta)
                    nb2 = B.count(d2)
                    mem2 = cls[d2][0]
                    row = []
                    for r in roots:
                        raw = tb[r] if r < nb else nb2 + tc[r - nb]
                        row.append(mem2[raw])
                    (face if kind == "f" else degen)[(d, j, i)] = row
        db = None
        if B.dim_bound is not None and C.dim_bound is not None:
            db = tuple(max(p, q) for p, q in zip(B.dim_bound, C.dim_bound))
        self.obj, perm = from_levels(a, T, counts, face, degen, dim_bound=db, label=f"({B.label}+{C.label})")
        self._classes = cls
        self._perm = perm
        self.inl = self._injection(B, 0)
        self.inr = self._injection(C, 1)
        self._pre = {}
        for d in degrees_upto(T):
            members, roots = cls[d]
            canon = perm[d]
            pre = [0] * len(roots)
            for k, r in enumerate(roots):
                pre[canon[k]] = r
            self._pre[d] = pre

    def _injection(self, Z: Presheaf, side: int) -> PresheafMap:
        T = self.obj.trunc
        Zt = _fit(Z, T)
        images = []
        for c, e in enumerate(Zt.degs):
            k = Z.index((_orig_id(Z, Zt, c), id_sigma(e)))
            raw = k if side == 0 else self.B.count(e) + k
            images.append(self.obj.level(e)[self._perm[e][self._classes[e][0][raw]]])
        return PresheafMap(Zt, self.obj, images, "inl" if side == 0 else "inr")

    def induced(self, hb: PresheafMap, hc: PresheafMap) -> PresheafMap:
        """The map out of the pushout determined by ``hb`` and ``hc``."""
        images = []
        nbs = {}
        for c, e in enumerate(self.obj.degs):
            raw = self._pre[e][self.obj.nd_index(c)]
            nb = nbs.setdefault(e, self.B.count(e))
            if raw < nb:
                images.append(hb.image_nf(self.B.level(e)[raw]))
            else:
                images.append(hc.image_nf(self.C.level(e)[raw - nb]))
        return PresheafMap(self.obj, hb.target, images, "induced")


def _orig_id(Z: Presheaf, Zt: Presheaf, c: int) -> int:
    if Zt is Z:
        return c
    # restrict keeps cells in the same relative order
    keep = [k for k, d in enumerate(Z.degs) if leq(d, Zt.trunc)]
    keep.sort(key=lambda k: (sum(Z.degs[k]), Z.degs[k], k))
    return keep[c]


def pushout(f: PresheafMap, g: PresheafMap, trunc=None) -> Pushout:
    return Pushout(f, g, trunc)


def coproduct(X: Presheaf, Y: Presheaf) -> Pushout:
    from .presheaf import empty

    E = empty(X.arity, _min_trunc(X.trunc, Y.trunc))
    return Pushout(PresheafMap(E, X, []), PresheafMap(E, Y, []))


# ---------------------------------------------------------------------------
# External product


def boxprod(X: Presheaf, Y: Presheaf, label: str = "") -> Presheaf:
    """``(X [x] Y)_{d, e} = X_d x Y_e`` on concatenated directions."""
    a = X.arity + Y.arity
    if a > 3:
        raise StructuralError("external product exceeds arity 3")
    keys = [(x, y) for x in range(len(X.degs)) for y in range(len(Y.degs))]
    keys.sort(key=lambda k: (sum(X.degs[k[0]]) + sum(Y.degs[k[1]]), X.degs[k[0]] + Y.degs[k[1]], k))
    idx = {k: i for i, k in enumerate(keys)}
    degs, faces = [], []
    for x, y in keys:
        dx, dy = X.degs[x], Y.degs[y]
        degs.append(dx + dy)
        fc = []
        for j in range(X.arity):
            fc.append([(idx[(t, y)], sig + id_sigma(dy)) for t, sig in X.faces[x][j]])
        for j in range(Y.arity):
            fc.append([(idx[(x, t)], id_sigma(dx) + sig) for t, sig in Y.faces[y][j]])
        faces.append(fc)
    db = X.dim_bound + Y.dim_bound if X.dim_bound is not None and Y.dim_bound is not None else None
    names = None
    if X.names and Y.names:
        names = [f"{X.names[x]}|{Y.names[y]}" for x, y in keys]
    P = Presheaf(a, X.trunc + Y.trunc, degs, faces, dim_bound=db, names=names, label=label or f"{X.label}[x]{Y.label}")
    P._box = (X, Y, idx)  # type: ignore[attr-defined]
    return P


def boxprod_map(f: PresheafMap, g: PresheafMap, S: Presheaf | None = None, T: Presheaf | None = None) -> PresheafMap:
    S = S or boxprod(f.source, g.source)
    T = T or boxprod(f.target, g.target)
    _, _, sidx = S._box  # type: ignore[attr-defined]
    _, _, tidx = T._box  # type: ignore[attr-defined]
    images = [None] * len(S.degs)
    for (x, y), c in sidx.items():
        cx, sx = f.images[x]
        cy, sy = g.images[y]
        images[c] = (tidx[(cx, cy)], sx + sy)
    return PresheafMap(S, T, images, "[x]")


# ---------------------------------------------------------------------------
# Pushout-product


class PushoutProduct:
    """``i [] j``: the corner map ``B x C +_{A x C} A x D -> B x D``."""

    def __init__(self, i: PresheafMap, j: PresheafMap, trunc=None) -> None:
        A, B = i.source, i.target
        C, D = j.source, j.target
        if A.arity != C.arity:
            raise StructuralError("pushout-product needs equal arity")
        T = tuple(trunc) if trunc is not None else _min_trunc(B.trunc, D.trunc)
        BD = Product(B, D, T)
        AC = Product(A, C, T) if (leq(T, _min_trunc(A.trunc, C.trunc)) or (A.complete and C.complete)) else Product(A, C)
        BC = Product(B, C, T)
        AD = Product(A, D, T)
        idC = _identity(C)
        idA = _identity(A)
        idB = _identity(B)
        idD = _identity(D)
        ic = product_map(i, idC, AC, BC)
        aj = product_map(idA, j, AC, AD)
        self.po = Pushout(ic, aj, T)
        self.map = self.po.induced(product_map(idB, j, BC, BD), product_map(i, idD, AD, BD))
        self.map.label = "pp"
        self.domain = self.po.obj
        self.codomain = BD.obj


def _identity(X: Presheaf) -> PresheafMap:
    return PresheafMap(X, X, [(c, id_sigma(d)) for c, d in enumerate(X.degs)], "id")


def pushout_product(i: PresheafMap, j: PresheafMap, trunc=None) -> PresheafMap:
    return PushoutProduct(i, j, trunc).map


def commutes(top: PresheafMap, right: PresheafMap, left: PresheafMap, bottom: PresheafMap) -> bool:
    """Does ``right o top == bottom o left`` hold cell by cell?"""
    from .presheaf import compose_maps

    return maps_equal(compose_maps(right, top), compose_maps(bottom, left))
