"""Homotopy certificates for finite simplicial sets.

Weak equivalence is not decidable in general at finite truncation.  Every
answer here is backed by a certificate: an inverse, a trivial-fibration
lifting check, a collapse sequence, an explicit homotopy inverse, or a
homology / components mismatch.  Anything else is Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import ops
from .algebra import Product, Pullback
from .io import assignment_to_json
from .presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    TruncationError,
    compose_maps,
    identity_map,
    is_iso,
    is_mono,
    to_point,
)
from .search import HomSearch
from .verdict import Verdict, fails, holds, unknown


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
            self.p[max(a, b)] = min(a, b)


def _need_space(X: Presheaf) -> None:
    if X.arity != 1:
        raise StructuralError(f"expected a simplicial set, got arity {X.arity}")


def pi0(X: Presheaf) -> list[list[int]]:
    """Connected components as sorted lists of vertex indices."""
    _need_space(X)
    n = X.count((0,))
    uf = _UF(n)
    if X.trunc[0] >= 1:
        d0, d1 = X.face_table((1,), 0, 0), X.face_table((1,), 0, 1)
        for a, b in zip(d0, d1):
            uf.union(a, b)
    comps: dict[int, list[int]] = {}
    for v in range(n):
        comps.setdefault(uf.find(v), []).append(v)
    return sorted(comps.values())


def pi0_map(f: PresheafMap) -> list[int]:
    """Induced map on components (indices into ``pi0``)."""
    src, tgt = pi0(f.source), pi0(f.target)
    where = {v: k for k, comp in enumerate(tgt) for v in comp}
    arr = f.array((0,))
    return [where[arr[comp[0]]] for comp in src]


# ---------------------------------------------------------------------------
# Homology


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form, in divisibility order."""
    A = [list(r) for r in rows if any(r)]
    diag: list[int] = []
    while A and A[0]:
        m, n = len(A), len(A[0])
        piv = None
        for i in range(m):
            for j in range(n):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        A[0], A[i0] = A[i0], A[0]
        for r in A:
            r[0], r[j0] = r[j0], r[0]
        while True:
            p = A[0][0]
            done = True
            for i in range(1, m):
                q = A[i][0] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[0])]
                if A[i][0]:
                    done = False
            for j in range(1, n):
                q = A[0][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[0]
                if A[0][j]:
                    done = False
            if done:
                bad = next(((i, j) for i in range(1, m) for j in range(1, n) if A[i][j] % p), None)
                if bad is None:
                    break
                A[0] = [a + b for a, b in zip(A[0], A[bad[0]])]
                continue
            # move the smallest remaining entry of row/col 0 to the corner
            best = (0, 0)
            for i in range(m):
                if A[i][0] and abs(A[i][0]) < abs(A[best[0]][best[1]]):
                    best = (i, 0)
            for j in range(n):
                if A[0][j] and abs(A[0][j]) < abs(A[best[0]][best[1]]):
                    best = (0, j)
            if best[1] == 0:
                A[0], A[best[0]] = A[best[0]], A[0]
            else:
                for r in A:
                    r[0], r[best[1]] = r[best[1]], r[0]
        diag.append(abs(A[0][0]))
        A = [r[1:] for r in A[1:]]
        A = [r for r in A if any(r)]
    return sorted(diag)


@dataclass(frozen=True)
class HomologyTable:
    """Betti numbers and torsion coefficients per dimension ``0..maxdim``."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    @property
    def maxdim(self) -> int:
        return len(self.betti) - 1

    def to_json(self) -> dict:
        return {str(n): {"rank": b, "torsion": list(t)} for n, (b, t) in enumerate(zip(self.betti, self.torsion))}

    def describe(self) -> str:
        parts = []
        for n, (b, t) in enumerate(zip(self.betti, self.torsion)):
            terms = (["Z^%d" % b if b > 1 else "Z"] if b else []) + [f"Z/{q}" for q in t]
            parts.append(f"H{n}=" + ("+".join(terms) if terms else "0"))
        return " ".join(parts)


def boundary_matrix(X: Presheaf, n: int) -> list[list[int]]:
    """Normalized boundary ``C_n -> C_{n-1}`` (rows: nondegenerate (n-1)-cells)."""
    lo = X.cells((n - 1,))
    hi = X.cells((n,))
    row = {c: k for k, c in enumerate(lo)}
    M = [[0] * len(hi) for _ in lo]
    for col, c in enumerate(hi):
        for i, (t, sig) in enumerate(X.faces[c][0]):
            if sig[0] == ops.identity(n - 1):
                M[row[t]][col] += -1 if i % 2 else 1
    return M


def homology(X: Presheaf, maxdim: int | None = None) -> HomologyTable:
    """Integral homology of the normalized chain complex through ``maxdim``."""
    _need_space(X)
    N = X.trunc[0]
    if maxdim is None:
        maxdim = N if X.complete else N - 1
    if maxdim < 0:
        raise TruncationError("homology needs maxdim >= 0")
    if maxdim + 1 > N and not X.complete:
        raise TruncationError(
            f"homology through degree {maxdim} needs truncation >= {maxdim + 1}; have {N} "
            f"(largest sound maxdim is {N - 1})"
        )
    ranks = {}
    divs = {}
    for n in range(1, maxdim + 2):
        if n > N:
            ranks[n], divs[n] = 0, []
            continue
        d = smith_diagonal(boundary_matrix(X, n))
        ranks[n], divs[n] = len(d), [q for q in d if q > 1]
    betti, tors = [], []
    for n in range(maxdim + 1):
        cn = len(X.cells((n,))) if n <= N else 0
        betti.append(cn - ranks.get(n, 0) - ranks[n + 1])
        tors.append(tuple(divs[n + 1]))
    return HomologyTable(tuple(betti), tuple(tors))


# ---------------------------------------------------------------------------
# Collapses


def collapse_sequence(X: Presheaf, keep: Sequence[int] = ()) -> list[tuple[int, int, int]] | None:
    """Elementary collapses of a complete ``X`` onto the subcomplex ``keep``.

    Each step ``(sigma, tau, i)`` removes a nondegenerate cell and its free
    face ``tau = d_i sigma``; this is the pushout of a horn inclusion, so the
    inclusion of what remains is anodyne.  Returns None if greedy collapsing
    gets stuck (which does not refute anything).
    """
    _need_space(X)
    if not X.complete:
        return None
    alive = set(range(len(X.degs))) - set(keep)
    kept = set(keep)
    cofaces: dict[int, list[tuple[int, int]]] = {c: [] for c in range(len(X.degs))}
    for c, (d,) in enumerate(X.degs):
        if d > 0:
            for i, (t, sig) in enumerate(X.faces[c][0]):
                if sig[0] == ops.identity(d - 1):
                    cofaces[t].append((c, i))
    present = alive | kept
    steps = []
    changed = True
    while changed:
        changed = False
        for tau in sorted(alive, key=lambda c: (-X.degs[c][0], c)):
            if tau not in alive:
                continue
            cf = [(c, i) for c, i in cofaces[tau] if c in present]
            if len(cf) == 1 and cf[0][0] in alive and not any(c in present for c, _ in cofaces[cf[0][0]]):
                sigma, i = cf[0]
                alive -= {sigma, tau}
                present -= {sigma, tau}
                steps.append((sigma, tau, i))
                changed = True
    return steps if not alive else None


def contractible(X: Presheaf) -> Verdict:
    """Holds via collapse to a vertex; Fails on a homology or components witness."""
    _need_space(X)
    bound = X.trunc
    if X.count((0,)) == 0:
        return fails({"empty": True}, bound)
    comps = pi0(X)
    if len(comps) != 1:
        return fails({"components": len(comps)}, bound)
    if X.complete:
        v = X.cells((0,))[0]
        seq = collapse_sequence(X, [v])
        if seq is not None:
            return holds({"collapse_to_vertex": v, "steps": len(seq)}, bound)
    else:
        triv = _trivial_fibration(to_point(X))
        if triv is not None:
            return triv
    H = homology(X)
    if any(H.betti[1:]) or any(H.torsion) or H.betti[0] != 1:
        return fails({"homology": H.to_json()}, bound)
    return unknown("acyclic and connected but no collapse or lifting certificate", bound)


# ---------------------------------------------------------------------------
# Weak equivalences


def _trivial_fibration(f: PresheafMap) -> Verdict | None:
    from .lifting import boundaries, rlp

    N = min(f.source.trunc[0], f.target.trunc[0])
    fam = boundaries(N, 1, N)
    v = rlp(f, fam)
    if v.holds:
        return holds({"certificate": "trivial_fibration", "family": "boundaries", "max_dim": N}, (N,))
    return None


def _restricted(f: PresheafMap) -> PresheafMap:
    from .presheaf import restrict_map

    if f.source.trunc == f.target.trunc:
        return f
    return restrict_map(f, (min(f.source.trunc[0], f.target.trunc[0]),))


def _homology_witness(f: PresheafMap) -> Verdict | None:
    X, Y = f.source, f.target
    N = min(X.trunc[0], Y.trunc[0])
    if len(pi0(X)) != len(pi0(Y)) or sorted(set(pi0_map(f))) != list(range(len(pi0(Y)))):
        return fails({"pi0": [len(pi0(X)), len(pi0(Y))], "surjective": len(set(pi0_map(f))) == len(pi0(Y))}, (N,))
    # with equal truncation both homologies are exact up to N-1
    md = N - 1 if not (X.complete and Y.complete) else max(N, 0)
    if md < 0:
        return None
    HX, HY = homology(X, md), homology(Y, md)
    for n in range(md + 1):
        if HX.betti[n] != HY.betti[n] or HX.torsion[n] != HY.torsion[n]:
            return fails({"homology_degree": n, "source": HX.describe(), "target": HY.describe()}, (N,))
    return None


def _mapping_cylinder_collapse(f: PresheafMap) -> Verdict | None:
    """For a complete monomorphism: collapse the target onto the image."""
    X, Y = f.source, f.target
    if not (X.complete and Y.complete) or not is_mono(f).holds:
        return None
    image = [t for t, sig in f.images if all(s == ops.identity(len(s) - 1) for s in sig)]
    seq = collapse_sequence(Y, image)
    if seq is None:
        return None
    return holds({"certificate": "collapse", "steps": len(seq)}, Y.trunc)


def _two_of_three(f: PresheafMap) -> Verdict | None:
    a, b = contractible(f.source), contractible(f.target)
    if a.holds and b.holds:
        return holds({"certificate": "both_contractible", "source": a.evidence, "target": b.evidence}, f.target.trunc)
    return None


def _ends(X: Presheaf) -> tuple[Product, list[PresheafMap]]:
    """``X x D[1]`` with its two end inclusions ``X x {0}`` and ``X x {1}``."""
    from .shapes import delta, yoneda

    I = delta(1, X.trunc)
    P = Product(X, I, X.trunc)
    ends = []
    for v in (0, 1):
        const = compose_maps(yoneda(I, (I.cells((0,))[v], ((0,),))), to_point(X))
        ends.append(P.pair(identity_map(X), const))
    return P, ends


def _homotopic(a: PresheafMap, b: PresheafMap) -> bool:
    """Is there a direct homotopy ``X x D[1] -> Y`` from ``a`` to ``b`` or from ``b`` to ``a``?"""
    X = a.source
    P, ends = _ends(X)
    for u, w in ((a, b), (b, a)):
        fixed: dict[int, tuple] = {}
        for e, g in zip(ends, (u, w)):
            for c, (t, sig) in enumerate(e.images):
                if all(s == ops.identity(len(s) - 1) for s in sig):
                    fixed[t] = g.images[c]
        if HomSearch(P.obj, a.target, fixed=fixed).first() is not None:
            return True
    return False


def _homotopy_inverse(f: PresheafMap, limit: int = 200) -> Verdict | None:
    X, Y = f.source, f.target
    if not (X.complete and Y.complete):
        return None
    tried = 0
    for g in HomSearch(Y, X).maps(limit):
        tried += 1
        if _homotopic(compose_maps(g, f), identity_map(X)) and _homotopic(compose_maps(f, g), identity_map(Y)):
            return holds({"certificate": "homotopy_inverse", "inverse": assignment_to_json(g), "tried": tried}, Y.trunc)
    return None


EFFORTS = ("low", "medium", "high")


def weq(f: PresheafMap, effort: str = "medium") -> Verdict:
    """Certified weak equivalence of simplicial sets, cheapest certificate first."""
    if effort not in EFFORTS:
        raise ValueError(f"effort must be one of {EFFORTS}")
    _need_space(f.source)
    _need_space(f.target)
    f = _restricted(f)
    bound = f.target.trunc
    if is_iso(f):
        return holds({"certificate": "isomorphism"}, bound)
    if f.source.is_empty() or f.target.is_empty():
        return fails({"pi0": [len(pi0(f.source)), len(pi0(f.target))]}, bound)
    w = _homology_witness(f)
    if w is not None:
        return w
    v = _mapping_cylinder_collapse(f)
    if v is not None:
        return v
    v = _two_of_three(f)
    if v is not None:
        return v
    if effort != "low":
        v = _trivial_fibration(f)
        if v is not None:
            return v
    if effort == "high":
        v = _homotopy_inverse(f)
        if v is not None:
            return v
    return unknown("no certificate found; components and homology agree", bound)


def diag_contractible(X: Presheaf, effort: str = "medium") -> Verdict:
    """Is the diagonal of a simplicial space weakly contractible?"""
    from .reindex import fdiag

    if X.arity != 2:
        raise StructuralError("diagonal contractibility is for simplicial spaces")
    D = fdiag(X)
    if D.is_empty():
        return fails({"empty": True}, D.trunc)
    return weq(to_point(D), effort)


# ---------------------------------------------------------------------------
# Homotopy pullbacks


@dataclass
class Square:
    """``top: A -> Y``, ``right: Y -> X``, ``left: A -> B``, ``bottom: B -> X``."""

    top: PresheafMap
    right: PresheafMap
    left: PresheafMap
    bottom: PresheafMap


def homotopy_pullback(sq: Square, right_is_fibration: Verdict | None, effort: str = "medium") -> Verdict:
    """Weak equivalence of ``A -> B x_X Y``, given that the right leg is a Kan fibration."""
    if right_is_fibration is None or not right_is_fibration.holds:
        raise StructuralError("homotopy pullback needs a Kan fibration certificate for the right leg")
    pb = Pullback(sq.bottom, sq.right)
    comp = pb.pair(sq.left, sq.top)
    v = weq(comp, effort)
    ev = v.to_json()
    if v.unknown:
        return v
    return (holds if v.holds else fails)({"comparison": ev, "pullback_vertices": pb.obj.count((0,))}, v.bound)


def unit_square(f: PresheafMap) -> Square:
    """The square with both vertical legs identities on ``f``."""
    return Square(identity_map(f.source), f, identity_map(f.source), f)
