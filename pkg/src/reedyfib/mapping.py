"""Cotensors ``Hom(K x R(m), Y)``: mapping spaces, internal homs, exponentials.

``R(m)`` is a simplex ``D[m_p]`` in each free direction and a point in the
others.  A cell of degree ``m`` is a map ``K x R(m) -> Y``; faces and
degeneracies come from precomposing with ``K x R(theta)``.  Requests with
``m`` beyond the target truncation in a free direction are refused.
"""

from __future__ import annotations

from typing import Sequence

from . import ops
from .algebra import Product, Pullback, boxprod, boxprod_map
from .presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    TruncationError,
    compose_maps,
    degrees_upto,
    from_levels,
    id_sigma,
    point,
    restrict_map,
)
from .search import HomSearch, _chain, flat


def _delta_op(theta: ops.Op, m_src: int, m_tgt: int, N: int) -> PresheafMap:
    from .shapes import delta, simplex_nf, yoneda

    D = delta(m_tgt, N)
    return yoneda(D, simplex_nf(D, theta), delta(m_src, N))


class _Frame:
    """The representables ``R(m)`` and their operator maps for fixed free directions."""

    def __init__(self, arity: int, free: Sequence[int], trunc: Sequence[int]) -> None:
        self.arity = arity
        self.free = tuple(free)
        self.trunc = tuple(trunc)
        self._R: dict = {}
        self._ops: dict = {}

    def _factor(self, t: int, m: Sequence[int]):
        from .shapes import delta

        if t in self.free:
            return delta(m[self.free.index(t)], self.trunc[t])
        return point(1, (self.trunc[t],))

    def R(self, m: tuple) -> Presheaf:
        R = self._R.get(m)
        if R is None:
            facs = [self._factor(t, m) for t in range(self.arity)]
            R = self._nest(facs)
            self._R[m] = R
        return R

    @staticmethod
    def _nest(facs):
        if len(facs) == 1:
            return facs[0]
        return boxprod(facs[0], _Frame._nest(facs[1:]))

    def op(self, m: tuple, p: int, theta: ops.Op) -> PresheafMap:
        """``R(theta)``: ``R(m')`` to ``R(m)`` for ``theta: [m'_p] -> [m_p]``."""
        key = (m, p, theta)
        f = self._ops.get(key)
        if f is None:
            m2 = tuple(len(theta) - 1 if q == p else x for q, x in enumerate(m))
            t = self.free[p]
            maps = []
            for s in range(self.arity):
                fac = self._factor(s, m2 if s == t else m)
                if s == t:
                    maps.append(_delta_op(theta, m2[p], m[p], self.trunc[t]))
                else:
                    maps.append(PresheafMap(fac, fac, [(c, id_sigma(d)) for c, d in enumerate(fac.degs)]))
            f = self._nest_map(maps, self.R(m2), self.R(m))
            self._ops[key] = f
        return f

    def _nest_map(self, maps, S, T):
        if len(maps) == 1:
            return PresheafMap(S, T, maps[0].images)
        A, rest_s, _ = S._box  # type: ignore[attr-defined]
        B, rest_t, _ = T._box  # type: ignore[attr-defined]
        inner = self._nest_map(maps[1:], rest_s, rest_t)
        return boxprod_map(PresheafMap(A, B, maps[0].images), inner, S, T)


class Cotensor:
    """The presheaf ``m -> Hom(K x R(m), Y)`` (optionally over a base).

    ``over=(q, s)`` with ``q: Y -> X``, ``s: K -> X`` keeps the maps ``h`` with
    ``q o h = s o pr``.
    """

    def __init__(self, K: Presheaf, Y: Presheaf, free: Sequence[int], trunc_out: Sequence[int],
                 over: tuple[PresheafMap, PresheafMap] | None = None, label: str = "") -> None:
        if K.arity != Y.arity:
            raise StructuralError("cotensor needs equal arity")
        free = tuple(free)
        trunc_out = tuple(trunc_out)
        if len(trunc_out) != len(free):
            raise StructuralError("one output truncation per free direction")
        for p, t in enumerate(free):
            if trunc_out[p] > Y.trunc[t]:
                raise TruncationError(
                    f"degree {trunc_out[p]} in direction {t} needs target truncation >= {trunc_out[p]}; "
                    f"have {Y.trunc[t]} (largest sound bound is {Y.trunc[t]})"
                )
        self.K, self.Y, self.free, self.trunc = K, Y, free, trunc_out
        self.over = over
        self.frame = _Frame(Y.arity, free, Y.trunc)
        self._dom: dict = {}
        self.maps: dict[tuple, list[PresheafMap]] = {}
        self.keys: dict[tuple, dict[tuple, int]] = {}
        self.sols: dict[tuple, list[tuple]] = {}
        for m in degrees_upto(trunc_out):
            P = self.domain(m)
            ov = None
            if over is not None:
                q, s = over
                ov = (q, compose_maps(s, P.pr1))
            hs = HomSearch(P.obj, Y, over=ov)
            sols = hs.keys()
            self.maps[m] = [PresheafMap(P.obj, Y, hs.images(_unkey(hs, k))) for k in sols]
            self.keys[m] = {k: i for i, k in enumerate(sols)}
            self.sols[m] = sols
        b = len(free)
        counts, face, degen = {}, {}, {}
        for m in degrees_upto(trunc_out):
            counts[m] = len(self.maps[m])
            for p in range(b):
                if m[p] > 0:
                    for i in range(m[p] + 1):
                        face[(m, p, i)] = self._table(m, p, ops.coface(m[p], i))
                if m[p] < trunc_out[p]:
                    for i in range(m[p] + 1):
                        degen[(m, p, i)] = self._table(m, p, ops.codegeneracy(m[p], i))
        self.obj, self.perm = from_levels(b, trunc_out, counts, face, degen, label=label or f"[{K.label},{Y.label}]")
        self._inv = {m: _invert(self.perm[m]) for m in self.perm}

    def domain(self, m: tuple) -> Product:
        P = self._dom.get(m)
        if P is None:
            P = Product(self.K, self.frame.R(m), self.Y.trunc)
            self._dom[m] = P
        return P

    def _precomposer(self, m: tuple, p: int, theta: ops.Op) -> tuple[tuple, PresheafMap]:
        m2 = tuple(len(theta) - 1 if q == p else x for q, x in enumerate(m))
        P, P2 = self.domain(m), self.domain(m2)
        r = self.frame.op(m, p, theta)
        images = [P.pair_nf((x, s), r.image_nf((y, t))) for x, y, s, t in P2.keys]
        return m2, PresheafMap(P2.obj, P.obj, images)

    def _table(self, m: tuple, p: int, theta: ops.Op) -> list[int]:
        m2, pre = self._precomposer(m, p, theta)
        ft = flat(self.Y)
        degen, M, NY = ft.degen, ft.M, ft.NY
        # each precomposed cell is a degeneracy of a source cell: follow the flat tables
        plan = [(c, [(j * M + i) * NY for j, i in _chain(sig)]) for c, sig in pre.images]
        keys = self.keys[m2]
        out = []
        for key in self.sols[m]:
            img = []
            for c, chain in plan:
                g = key[c]
                for b in chain:
                    g = degen[b + g]
                img.append(g)
            out.append(keys[tuple(img)])
        return out

    # -------------------------------------------------------------- access
    def cell_map(self, nf) -> PresheafMap:
        """The map ``K x R(m) -> Y`` represented by a cell of the cotensor."""
        m = self.obj.nf_degree(nf)
        return self.maps[m][self._inv[m][self.obj.index(nf)]]

    def cell_of(self, h: PresheafMap, m: tuple) -> tuple:
        ft = flat(self.Y)
        key = tuple(ft.glob(nf) for nf in h.images)
        raw = self.keys[m][key]
        return self.obj.level(m)[self.perm[m][raw]]

    def vertices(self) -> list[PresheafMap]:
        z = tuple(0 for _ in self.free)
        return [self.cell_map(nf) for nf in self.obj.level(z)]


def _unkey(hs: HomSearch, key: tuple) -> list[int]:
    return [key[c] for c in hs.order]


def _invert(perm: list[int]) -> list[int]:
    inv = [0] * len(perm)
    for raw, can in enumerate(perm):
        inv[can] = raw
    return inv


def _level_map(src: Cotensor, tgt: Cotensor, fn) -> PresheafMap:
    """Map of cotensors from a per-cell transformation of representing maps."""
    images = []
    for c, e in enumerate(src.obj.degs):
        h = src.cell_map((c, id_sigma(e)))
        images.append(tgt.cell_of(fn(h, e), e))
    return PresheafMap(src.obj, tgt.obj, images)


def restriction(i: PresheafMap, big: Cotensor, small: Cotensor) -> PresheafMap:
    """``Y^B -> Y^A`` induced by ``i: A -> B``."""
    def fn(h, m):
        P, P2 = big.domain(m), small.domain(m)
        pre = [P.pair_nf(i.image_nf((x, s)), (y, t)) for x, y, s, t in P2.keys]
        return PresheafMap(P2.obj, big.Y, [h.image_nf(nf) for nf in pre])
    return _level_map(big, small, fn)


def postcomposition(p: PresheafMap, src: Cotensor, tgt: Cotensor) -> PresheafMap:
    """``Y^K -> X^K`` induced by ``p: Y -> X``."""
    def fn(h, m):
        return PresheafMap(tgt.domain(m).obj, p.target, [p.image_nf(nf) for nf in h.images])
    return _level_map(src, tgt, fn)


# ---------------------------------------------------------------------------
# Front ends


def map_space(X: Presheaf, Y: Presheaf, N: int) -> Presheaf:
    """``Map(X, Y)_n = Hom(X x D[n], Y)`` with ``D[n]`` in the space direction."""
    return Cotensor(X, Y, (Y.arity - 1,), (N,)).obj


def map_space_over(f: PresheafMap, g: PresheafMap, N: int) -> Presheaf:
    """``Map_{/X}(Y, Z)`` for ``f: Y -> X`` and ``g: Z -> X``."""
    if f.target is not g.target and f.target.degs != g.target.degs:
        raise StructuralError("over-mapping space needs a common base")
    return Cotensor(f.source, g.source, (g.source.arity - 1,), (N,), over=(g, f)).obj


def internal_hom(B: Presheaf, Y: Presheaf, trunc_out: Sequence[int] | None = None) -> Cotensor:
    """``Y^B`` (all directions free)."""
    tr = tuple(trunc_out) if trunc_out is not None else Y.trunc
    return Cotensor(B, Y, tuple(range(Y.arity)), tr)


class PullbackExponential:
    """``exp(i, p): Y^B -> Y^A x_{X^A} X^B``."""

    def __init__(self, i: PresheafMap, p: PresheafMap, free: Sequence[int] | None = None,
                 trunc_out: Sequence[int] | None = None) -> None:
        if p.source.trunc != p.target.trunc:
            p = restrict_map(p, tuple(min(a, b) for a, b in zip(p.source.trunc, p.target.trunc)))
        Y, X = p.source, p.target
        free = tuple(free) if free is not None else tuple(range(Y.arity))
        tr = tuple(trunc_out) if trunc_out is not None else tuple(Y.trunc[t] for t in free)
        A, B = i.source, i.target
        self.YB = Cotensor(B, Y, free, tr)
        self.YA = Cotensor(A, Y, free, tr)
        self.XB = Cotensor(B, X, free, tr)
        self.XA = Cotensor(A, X, free, tr)
        self.res_Y = restriction(i, self.YB, self.YA)
        self.res_X = restriction(i, self.XB, self.XA)
        self.post_B = postcomposition(p, self.YB, self.XB)
        self.post_A = postcomposition(p, self.YA, self.XA)
        self.pb = Pullback(self.post_A, self.res_X)
        self.map = self.pb.pair(self.res_Y, self.post_B)
        self.map.label = "exp"


def pullback_exponential(i: PresheafMap, p: PresheafMap, free=None, trunc_out=None) -> PresheafMap:
    return PullbackExponential(i, p, free, trunc_out).map
