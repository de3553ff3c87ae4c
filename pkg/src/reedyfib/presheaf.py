"""Finite truncated presheaves on products of the simplex category.

A presheaf of arity ``a`` lives on ``Delta^a`` and is known in every
multidegree ``d <= trunc`` (componentwise).  Only nondegenerate cells are
stored.  Every cell has a unique normal form ``(c, sigma)``: a nondegenerate
cell ``c`` and one monotone surjection per direction, meaning ``sigma^* c``.

Direction conventions: the last direction is always the "space" direction.
Arity 2 is ``(n, l)``; arity 3 is ``(k, n, l)`` with ``n`` the base direction.
"""

from __future__ import annotations

from itertools import product as iproduct
from typing import Iterable, Sequence

from . import ops
from .verdict import Verdict, fails, holds

Degree = tuple[int, ...]
Sigma = tuple[ops.Op, ...]
NF = tuple[int, Sigma]


class StructuralError(ValueError):
    """Malformed data: dangling references, wrong degrees, bad words."""


class TruncationError(ValueError):
    """A request exceeds what the truncation bound can soundly answer."""


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def unit(arity: int, j: int) -> Degree:
    return tuple(1 if t == j else 0 for t in range(arity))


def add(a: Sequence[int], b: Sequence[int]) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def degrees_upto(trunc: Sequence[int]) -> list[Degree]:
    """All multidegrees ``<= trunc`` ordered by total degree, then lexicographically."""
    ds = list(iproduct(*(range(t + 1) for t in trunc)))
    ds.sort(key=lambda d: (sum(d), d))
    return ds


def id_sigma(deg: Sequence[int]) -> Sigma:
    return tuple(ops.identity(e) for e in deg)


def sigma_compose(outer: Sigma, inner: Sigma) -> Sigma:
    """Per-direction ``outer o inner``; ``(outer o inner)^* = inner^* outer^*``."""
    return tuple(ops.compose(a, b) for a, b in zip(outer, inner))


class Presheaf:
    """A validated-on-demand finite truncated multisimplicial set.

    ``degs[c]`` is the multidegree of nondegenerate cell ``c`` and
    ``faces[c][j][i]`` the normal form of its ``i``-th face in direction ``j``.
    ``dim_bound`` is a per-direction bound on nondegenerate degrees when it is
    known (``None`` for objects with cells in unboundedly high degree, such as
    nerves of groupoids).
    """

    def __init__(
        self,
        arity: int,
        trunc: Sequence[int],
        degs: Sequence[Degree],
        faces: Sequence[Sequence[Sequence[NF]]],
        *,
        dim_bound: Sequence[int] | None = None,
        names: Sequence[str] | None = None,
        label: str = "",
    ) -> None:
        if arity not in (1, 2, 3):
            raise StructuralError(f"arity must be 1, 2 or 3, got {arity}")
        self.arity = arity
        self.trunc: Degree = tuple(int(t) for t in trunc)
        if len(self.trunc) != arity or any(t < 0 for t in self.trunc):
            raise StructuralError(f"bad truncation {trunc} for arity {arity}")
        self.degs: list[Degree] = [tuple(d) for d in degs]
        self.faces = [[list(fj) for fj in fc] for fc in faces]
        self.dim_bound: Degree | None = tuple(dim_bound) if dim_bound is not None else None
        self.names = list(names) if names is not None else None
        self.label = label
        self._by_degree: dict[Degree, list[int]] = {}
        for c, d in enumerate(self.degs):
            self._by_degree.setdefault(d, []).append(c)
        self._levels: dict[Degree, list[NF]] = {}
        self._index: dict[Degree, dict[NF, int]] = {}
        self._act_memo: dict = {}
        self._tables: dict = {}
        self._checked = False

    # ------------------------------------------------------------------ basic
    def __len__(self) -> int:
        return len(self.degs)

    def __repr__(self) -> str:
        name = self.label or "Presheaf"
        return f"<{name} arity={self.arity} trunc={self.trunc} nd={len(self.degs)}>"

    @property
    def complete(self) -> bool:
        """True if no nondegenerate cells exist beyond the truncation."""
        return self.dim_bound is not None and leq(self.dim_bound, self.trunc)

    def cells(self, d: Sequence[int]) -> list[int]:
        """Nondegenerate cell ids in multidegree ``d``."""
        return list(self._by_degree.get(tuple(d), []))

    def degrees(self) -> list[Degree]:
        return degrees_upto(self.trunc)

    def nd_dims(self) -> Degree:
        if not self.degs:
            return tuple(0 for _ in range(self.arity))
        return tuple(max(d[j] for d in self.degs) for j in range(self.arity))

    def is_empty(self) -> bool:
        return not self.degs

    # ----------------------------------------------------------- structure
    def check_structure(self) -> None:
        """Raise :class:`StructuralError` on malformed references."""
        if self._checked:
            return
        n = len(self.degs)
        for c, d in enumerate(self.degs):
            if len(d) != self.arity or not leq(d, self.trunc) or any(x < 0 for x in d):
                raise StructuralError(f"cell {c} has degree {d} outside truncation {self.trunc}")
            fc = self.faces[c]
            if len(fc) != self.arity:
                raise StructuralError(f"cell {c}: face table needs {self.arity} directions")
            for j in range(self.arity):
                want = d[j] + 1 if d[j] > 0 else 0
                if len(fc[j]) != want:
                    raise StructuralError(f"cell {c}: direction {j} needs {want} faces, got {len(fc[j])}")
                fdeg = sub(d, unit(self.arity, j))
                for i, nf in enumerate(fc[j]):
                    t, sig = nf
                    if not (isinstance(t, int) and 0 <= t < n):
                        raise StructuralError(f"cell {c}: face d{i} (direction {j}) references unknown cell {t!r}")
                    td = self.degs[t]
                    if sum(td) >= sum(d):
                        raise StructuralError(f"cell {c}: face d{i} (direction {j}) has no smaller total degree")
                    if len(sig) != self.arity:
                        raise StructuralError(f"cell {c}: face d{i} has malformed degeneracy data")
                    for k in range(self.arity):
                        if len(sig[k]) != fdeg[k] + 1 or not ops.is_surjective(sig[k], td[k]):
                            raise StructuralError(
                                f"cell {c}: face d{i} (direction {j}) degeneracy in direction {k} "
                                f"is not a surjection [{fdeg[k]}] -> [{td[k]}]"
                            )
        self._checked = True

    # ------------------------------------------------------------ operators
    def act(self, nf: NF, j: int, theta: ops.Op) -> NF:
        """Normal form of ``theta^*`` applied to ``nf`` in direction ``j``."""
        key = (nf, j, theta)
        hit = self._act_memo.get(key)
        if hit is not None:
            return hit
        c, sigma = nf
        e = self.degs[c]
        s = ops.compose(sigma[j], theta)
        epi, mono = ops.epi_mono(s)
        cur: NF = (c, id_sigma(e))
        if len(mono) != e[j] + 1:
            for m in reversed(ops.missing(mono, e[j])):
                cur = self._elementary_face(cur, j, m)
        c2, tau = cur
        out = tuple(
            ops.compose(tau[k], epi) if k == j else ops.compose(tau[k], sigma[k]) for k in range(self.arity)
        )
        res = (c2, out)
        self._act_memo[key] = res
        return res

    def _elementary_face(self, nf: NF, j: int, m: int) -> NF:
        c, tau = nf
        if tau[j] == ops.identity(len(tau[j]) - 1):
            t, rho = self.faces[c][j][m]
            return (t, tuple(rho[k] if k == j else ops.compose(rho[k], tau[k]) for k in range(self.arity)))
        return self.act(nf, j, ops.coface(len(tau[j]) - 1, m))

    def degenerate(self, nf: NF, sigma: Sigma) -> NF:
        """Apply a multi-degeneracy (surjections) to a normal form."""
        c, tau = nf
        return (c, sigma_compose(tau, sigma))

    def nf_degree(self, nf: NF) -> Degree:
        return tuple(len(s) - 1 for s in nf[1])

    # ---------------------------------------------------------- level tables
    def level(self, d: Sequence[int]) -> list[NF]:
        """All cells (degenerate included) of multidegree ``d`` in canonical order."""
        d = tuple(d)
        lv = self._levels.get(d)
        if lv is not None:
            return lv
        if not leq(d, self.trunc):
            raise TruncationError(f"degree {d} exceeds truncation {self.trunc}")
        out: list[NF] = []
        for c, e in enumerate(self.degs):
            if leq(e, d):
                for sig in iproduct(*(ops.surjections(d[k], e[k]) for k in range(self.arity))):
                    out.append((c, tuple(sig)))
        out.sort()
        self._levels[d] = out
        self._index[d] = {nf: i for i, nf in enumerate(out)}
        return out

    def index(self, nf: NF) -> int:
        d = self.nf_degree(nf)
        if d not in self._index:
            self.level(d)
        return self._index[d][nf]

    def count(self, d: Sequence[int]) -> int:
        return len(self.level(d))

    def op_table(self, d: Sequence[int], j: int, theta: ops.Op) -> list[int]:
        """Index map ``X_d -> X_{d'}`` of the operator ``theta`` in direction ``j``."""
        d = tuple(d)
        key = (d, j, theta)
        t = self._tables.get(key)
        if t is None:
            tgt = tuple(len(theta) - 1 if k == j else d[k] for k in range(self.arity))
            self.level(tgt)
            idx = self._index[tgt]
            t = [idx[self.act(nf, j, theta)] for nf in self.level(d)]
            self._tables[key] = t
        return t

    def face_table(self, d: Sequence[int], j: int, i: int) -> list[int]:
        return self.op_table(d, j, ops.coface(d[j], i))

    def degen_table(self, d: Sequence[int], j: int, i: int) -> list[int]:
        return self.op_table(d, j, ops.codegeneracy(d[j], i))

    def nd_index(self, c: int) -> int:
        """Level index of nondegenerate cell ``c`` inside its own degree."""
        return self.index((c, id_sigma(self.degs[c])))

    def is_nondegenerate(self, nf: NF) -> bool:
        return all(s == ops.identity(len(s) - 1) for s in nf[1])

    # ------------------------------------------------------------- variants
    def restrict(self, trunc: Sequence[int]) -> "Presheaf":
        """Lower (or, for complete objects, raise) the truncation."""
        trunc = tuple(trunc)
        if not leq(trunc, self.trunc) and not self.complete:
            raise TruncationError(f"cannot raise truncation of incomplete {self!r} to {trunc}")
        keep = [c for c, d in enumerate(self.degs) if leq(d, trunc)]
        return self.subobject(keep, trunc=trunc)[0]

    def subobject(self, keep: Iterable[int], trunc: Sequence[int] | None = None) -> tuple["Presheaf", list[int]]:
        """Sub-presheaf on a face-closed set of nondegenerate cells.

        Returns the subobject and the list of kept original ids (new id = position).
        """
        keep = sorted(set(keep), key=lambda c: (sum(self.degs[c]), self.degs[c], c))
        pos = {c: i for i, c in enumerate(keep)}
        faces = []
        for c in keep:
            fc = []
            for j in range(self.arity):
                row = []
                for t, sig in self.faces[c][j]:
                    if t not in pos:
                        raise StructuralError(f"subobject not closed: cell {c} has face {t} outside")
                    row.append((pos[t], sig))
                fc.append(row)
            faces.append(fc)
        names = [self.names[c] for c in keep] if self.names else None
        sub_ = Presheaf(
            self.arity,
            trunc if trunc is not None else self.trunc,
            [self.degs[c] for c in keep],
            faces,
            dim_bound=self.dim_bound,
            names=names,
            label=self.label,
        )
        return sub_, keep

    def closure(self, seeds: Iterable[int]) -> set[int]:
        """Smallest face-closed set containing ``seeds``."""
        out: set[int] = set()
        stack = list(seeds)
        while stack:
            c = stack.pop()
            if c in out:
                continue
            out.add(c)
            for fj in self.faces[c]:
                for t, _ in fj:
                    stack.append(t)
        return out


def empty(arity: int, trunc: Sequence[int]) -> Presheaf:
    return Presheaf(arity, trunc, [], [], dim_bound=tuple(0 for _ in range(arity)), label="empty")


def point(arity: int, trunc: Sequence[int]) -> Presheaf:
    z = tuple(0 for _ in range(arity))
    return Presheaf(arity, trunc, [z], [[[] for _ in range(arity)]], dim_bound=z, label="pt")


# ---------------------------------------------------------------------------
# Rebuilding from explicit level tables


def from_levels(
    arity: int,
    trunc: Sequence[int],
    counts: dict[Degree, int],
    face: dict[tuple[Degree, int, int], Sequence[int]],
    degen: dict[tuple[Degree, int, int], Sequence[int]],
    *,
    dim_bound: Sequence[int] | None = None,
    label: str = "",
) -> tuple[Presheaf, dict[Degree, list[int]]]:
    """Normalize a presheaf given by full level tables.

    ``face[(d, j, i)]`` maps cells of degree ``d`` to degree ``d - e_j``;
    ``degen[(d, j, i)]`` maps degree ``d`` to ``d + e_j`` (only needed inside
    the truncation).  Returns the normalized presheaf and, for each degree,
    the map from raw indices to canonical level indices.
    """
    trunc = tuple(trunc)
    ds = degrees_upto(trunc)
    nfs: dict[Degree, list[NF | None]] = {d: [None] * counts.get(d, 0) for d in ds}
    degs: list[Degree] = []
    faces: list[list[list[NF]]] = []
    for d in ds:
        cur = nfs[d]
        # mark degenerate cells via degeneracy images from lower degrees
        for j in range(arity):
            if d[j] == 0:
                continue
            lower = sub(d, unit(arity, j))
            for i in range(d[j]):
                table = degen.get((lower, j, i))
                if table is None:
                    raise StructuralError(f"missing degeneracy table {(lower, j, i)}")
                for y, x in enumerate(table):
                    if cur[x] is None:
                        c, tau = nfs[lower][y]
                        sig = tuple(
                            ops.compose(tau[k], ops.codegeneracy(d[j] - 1, i)) if k == j else tau[k]
                            for k in range(arity)
                        )
                        cur[x] = (c, sig)
        for x in range(len(cur)):
            if cur[x] is None:
                cid = len(degs)
                degs.append(d)
                fc = []
                for j in range(arity):
                    row = []
                    if d[j] > 0:
                        lower = sub(d, unit(arity, j))
                        for i in range(d[j] + 1):
                            row.append(nfs[lower][face[(d, j, i)][x]])
                    fc.append(row)
                faces.append(fc)
                cur[x] = (cid, id_sigma(d))
    X = Presheaf(arity, trunc, degs, faces, dim_bound=dim_bound, label=label)
    perm: dict[Degree, list[int]] = {}
    for d in ds:
        lv = X.level(d)
        if len(lv) != len(nfs[d]):
            raise StructuralError(f"level {d}: tables do not satisfy the simplicial identities")
        idx = X._index[d]
        try:
            perm[d] = [idx[nf] for nf in nfs[d]]
        except KeyError as exc:
            raise StructuralError(f"level {d}: inconsistent degeneracy data") from exc
        if len(set(perm[d])) != len(perm[d]):
            raise StructuralError(f"level {d}: two raw cells share a normal form")
    return X, perm


def level_tables(X: Presheaf) -> tuple[dict, dict, dict]:
    """Full level tables of ``X`` (counts, faces, degeneracies)."""
    counts, face, degen = {}, {}, {}
    for d in X.degrees():
        counts[d] = X.count(d)
        for j in range(X.arity):
            if d[j] > 0:
                for i in range(d[j] + 1):
                    face[(d, j, i)] = X.face_table(d, j, i)
            if d[j] < X.trunc[j]:
                for i in range(d[j] + 1):
                    degen[(d, j, i)] = X.degen_table(d, j, i)
    return counts, face, degen


# ---------------------------------------------------------------------------
# Validation and counting


def identity_violations(X: Presheaf, first_only: bool = True) -> list[dict]:
    """Check ``d_i d_j = d_{j-1} d_i`` (i < j) per direction and cross-direction commutation."""
    X.check_structure()
    out = []
    for c, e in enumerate(X.degs):
        fc = {}
        for j in range(X.arity):
            for i in range(e[j] + 1 if e[j] > 0 else 0):
                fc[(j, i)] = X.faces[c][j][i]
        for j in range(X.arity):
            for a in range(e[j] + 1 if e[j] > 1 else 0):
                for b in range(a + 1, e[j] + 1):
                    lhs = X.act(fc[(j, b)], j, ops.coface(e[j] - 1, a))
                    rhs = X.act(fc[(j, a)], j, ops.coface(e[j] - 1, b - 1))
                    if lhs != rhs:
                        out.append(
                            {
                                "cell": c,
                                "direction": j,
                                "identity": f"d{a}d{b} != d{b - 1}d{a}",
                                "lhs": _nf_json(lhs),
                                "rhs": _nf_json(rhs),
                            }
                        )
                        if first_only:
                            return out
            for j2 in range(j + 1, X.arity):
                if e[j] == 0 or e[j2] == 0:
                    continue
                for a in range(e[j] + 1):
                    for b in range(e[j2] + 1):
                        lhs = X.act(fc[(j2, b)], j, ops.coface(e[j], a))
                        rhs = X.act(fc[(j, a)], j2, ops.coface(e[j2], b))
                        if lhs != rhs:
                            out.append(
                                {
                                    "cell": c,
                                    "direction": [j, j2],
                                    "identity": f"d{a}^({j}) d{b}^({j2}) != d{b}^({j2}) d{a}^({j})",
                                    "lhs": _nf_json(lhs),
                                    "rhs": _nf_json(rhs),
                                }
                            )
                            if first_only:
                                return out
    return out


def _nf_json(nf: NF) -> list:
    c, sig = nf
    return [c, [ops.word_from_surjection(s) for s in sig]]


def validate(X: Presheaf) -> Verdict:
    """Holds iff the face data satisfies all simplicial identities.

    Malformed references raise :class:`StructuralError` instead.
    """
    bad = identity_violations(X)
    if bad:
        return fails(bad[0], X.trunc)
    return holds({"cells": len(X.degs), "checked": "simplicial identities"}, X.trunc)


def cell_count(X: Presheaf, d: Sequence[int]) -> int:
    """Number of all cells (degenerate included) in multidegree ``d``."""
    d = tuple(d)
    if len(d) != X.arity:
        raise StructuralError(f"degree {d} has wrong arity for {X!r}")
    if not leq(d, X.trunc):
        raise TruncationError(f"degree {d} exceeds truncation {X.trunc}")
    return X.count(d)


# ---------------------------------------------------------------------------
# Maps


class PresheafMap:
    """A natural transformation between presheaves of equal arity.

    Determined by ``images[c]``: the normal form in the target of the image of
    source nondegenerate cell ``c``.  The target truncation must dominate the
    source truncation.
    """

    def __init__(self, source: Presheaf, target: Presheaf, images: Sequence[NF], label: str = "") -> None:
        if source.arity != target.arity:
            raise StructuralError("maps need equal arity")
        if not leq(source.trunc, target.trunc):
            raise StructuralError(f"target truncation {target.trunc} below source {source.trunc}")
        if len(images) != len(source.degs):
            raise StructuralError("one image per nondegenerate source cell is required")
        self.source = source
        self.target = target
        self.images: list[NF] = [tuple(x) for x in images]  # type: ignore[misc]
        self.label = label
        self._arrays: dict[Degree, list[int]] = {}

    def __repr__(self) -> str:
        return f"<Map {self.label or ''} {self.source!r} -> {self.target!r}>"

    def image_nf(self, nf: NF) -> NF:
        c, sig = nf
        return self.target.degenerate(self.images[c], sig)

    def array(self, d: Sequence[int]) -> list[int]:
        d = tuple(d)
        a = self._arrays.get(d)
        if a is None:
            a = [self.target.index(self.image_nf(nf)) for nf in self.source.level(d)]
            self._arrays[d] = a
        return a

    def naturality_violations(self) -> list[dict]:
        """Cells whose image's faces disagree with the images of their faces."""
        S, T = self.source, self.target
        out = []
        for c, e in enumerate(S.degs):
            img = self.images[c]
            if T.nf_degree(img) != e:
                out.append({"cell": c, "problem": "degree mismatch"})
                continue
            for j in range(S.arity):
                if e[j] == 0:
                    continue
                for i in range(e[j] + 1):
                    want = self.image_nf(S.faces[c][j][i])
                    got = T.act(img, j, ops.coface(e[j], i))
                    if want != got:
                        out.append({"cell": c, "direction": j, "face": i})
        return out

    @classmethod
    def from_arrays(cls, source: Presheaf, target: Presheaf, arrays: dict[Degree, Sequence[int]], label: str = "") -> "PresheafMap":
        images = []
        for c, e in enumerate(source.degs):
            images.append(target.level(e)[arrays[e][source.nd_index(c)]])
        m = cls(source, target, images, label)
        return m


def identity_map(X: Presheaf) -> PresheafMap:
    return PresheafMap(X, X, [(c, id_sigma(d)) for c, d in enumerate(X.degs)], "id")


def compose_maps(g: PresheafMap, f: PresheafMap) -> PresheafMap:
    """``g o f``."""
    if f.target is not g.source and not same_presheaf(f.target, g.source):
        raise StructuralError("maps are not composable")
    return PresheafMap(f.source, g.target, [g.image_nf(nf) for nf in f.images], f"{g.label}o{f.label}")


def same_presheaf(X: Presheaf, Y: Presheaf) -> bool:
    """Literal equality of the stored data (not isomorphism)."""
    return X.arity == Y.arity and X.trunc == Y.trunc and X.degs == Y.degs and X.faces == Y.faces


def maps_equal(f: PresheafMap, g: PresheafMap) -> bool:
    return f.images == g.images


def is_mono(f: PresheafMap) -> Verdict:
    """Holds iff ``f`` is injective in every multidegree within the truncation."""
    for d in f.source.degrees():
        arr = f.array(d)
        seen: dict[int, int] = {}
        for x, y in enumerate(arr):
            if y in seen:
                return fails(
                    {"degree": list(d), "cells": [seen[y], x], "image": y, "reason": "two cells collapse"},
                    f.source.trunc,
                )
            seen[y] = x
    return holds({"levelwise": "injective"}, f.source.trunc)


def is_iso(f: PresheafMap) -> bool:
    if f.source.trunc != f.target.trunc:
        return False
    for d in f.source.degrees():
        arr = f.array(d)
        if len(arr) != f.target.count(d) or len(set(arr)) != len(arr):
            return False
    return True


def empty_map(X: Presheaf) -> PresheafMap:
    return PresheafMap(empty(X.arity, X.trunc), X, [])


def restrict_map(f: PresheafMap, trunc: Sequence[int]) -> PresheafMap:
    """``f`` with both ends restricted to ``trunc``."""
    trunc = tuple(trunc)
    S, ks = f.source.subobject([c for c, d in enumerate(f.source.degs) if leq(d, trunc)], trunc=trunc)
    T, kt = f.target.subobject([c for c, d in enumerate(f.target.degs) if leq(d, trunc)], trunc=trunc)
    pos = {c: i for i, c in enumerate(kt)}
    return PresheafMap(S, T, [(pos[f.images[c][0]], f.images[c][1]) for c in ks], f.label)


def to_point(X: Presheaf) -> PresheafMap:
    P = point(X.arity, X.trunc)
    return PresheafMap(X, P, [(0, tuple(ops.surjections(e, 0)[0] for e in d)) for d in X.degs])
