"""Precomposition with functors between products of the simplex category.

A reindexing is described by ``coords``: for each direction ``i`` of the
input presheaf, either an output direction ``t`` (the input degree in ``i``
is the output degree in ``t``) or ``("c", m)`` (direction ``i`` is pinned to
``[m]``).  Several input directions may share an output direction
(diagonals); output directions nobody hits are constant.
"""

from __future__ import annotations

from typing import Sequence, Union

from . import ops
from .presheaf import Presheaf, PresheafMap, TruncationError, degrees_upto, from_levels

Coord = Union[int, tuple]


class UnsupportedFunctor(ValueError):
    """The requested reindexing is not one of the supported functors."""


# named reindexings (input arity, output arity, coords)
LEMB = (2, 3, (1, 2))            # (k,n,l) -> (n,l)
VEMB = (2, 3, (0, 2))            # (k,n,l) -> (k,l)
P1, P2 = LEMB, VEMB
DIAG1 = (3, 2, (0, 1, 1))        # (n,l) -> (n,l,l)
FDIAG2 = (2, 1, (0, 0))          # n -> (n,n)
CONST_SPACE = (1, 2, (1,))       # X_{n,l} = X_l
DISCRETE = (1, 2, (0,))          # X_{n,l} = X_n


def VAL_K(k: int):
    return (3, 2, (0, ("c", k), 1))


def LFIB_N(n: int):
    return (3, 2, (("c", n), 0, 1))


VAL = VAL_K(0)
LFIB = LFIB_N(0)


def named(name: str, param: int = 0):
    table = {
        "LEmb": LEMB,
        "VEmb": VEMB,
        "p1": P1,
        "p2": P2,
        "Diag1": DIAG1,
        "fDiag": None,
        "Val": VAL,
        "Valk": VAL_K(param),
        "LFib": LFIB,
        "LFibn": LFIB_N(param),
        "const": CONST_SPACE,
        "discrete": DISCRETE,
    }
    if name not in table:
        raise UnsupportedFunctor(f"unsupported reindexing {name!r}; choose from {sorted(table)}")
    return table[name]


def _check(X: Presheaf, spec) -> tuple[int, tuple]:
    a_in, a_out, coords = spec
    if X.arity != a_in:
        raise UnsupportedFunctor(f"reindexing expects arity {a_in}, got {X.arity}")
    if len(coords) != a_in:
        raise UnsupportedFunctor("coords must name every input direction")
    for c in coords:
        if isinstance(c, tuple):
            if len(c) != 2 or c[0] != "c" or c[1] < 0:
                raise UnsupportedFunctor(f"bad constant coordinate {c}")
        elif not (0 <= c < a_out):
            raise UnsupportedFunctor(f"coordinate {c} outside output arity {a_out}")
    return a_out, tuple(coords)


def out_truncation(X: Presheaf, spec, default: Sequence[int] | None = None) -> tuple[int, ...]:
    a_out, coords = _check(X, spec)
    out = []
    for t in range(a_out):
        hit = [X.trunc[i] for i, c in enumerate(coords) if c == t]
        if hit:
            out.append(min(hit))
        elif default is not None:
            out.append(default[t])
        else:
            out.append(max(X.trunc))
    for i, c in enumerate(coords):
        if isinstance(c, tuple) and c[1] > X.trunc[i]:
            raise TruncationError(f"constant [{c[1]}] in direction {i} exceeds truncation {X.trunc[i]}")
    return tuple(out)


def _in_degree(coords, d_out) -> tuple[int, ...]:
    return tuple(c[1] if isinstance(c, tuple) else d_out[c] for c in coords)


def _out_dim_bound(X: Presheaf, a_out: int, coords):
    if X.dim_bound is None:
        return None
    b = [0] * a_out
    for i, c in enumerate(coords):
        if not isinstance(c, tuple):
            b[c] += X.dim_bound[i]
    return tuple(b)


def reindex(X: Presheaf, spec, trunc: Sequence[int] | None = None, label: str = "") -> tuple[Presheaf, dict]:
    """Precompose ``X`` with the functor ``spec``.

    Returns the normalized result and, per output degree, the map from the
    level of ``X`` (in input degree) to canonical output indices.
    """
    a_out, coords = _check(X, spec)
    T = out_truncation(X, spec, trunc)
    if trunc is not None:
        T = tuple(min(a, b) for a, b in zip(T, trunc))
    counts, face, degen = {}, {}, {}
    for d in degrees_upto(T):
        din = _in_degree(coords, d)
        counts[d] = X.count(din)
        for t in range(a_out):
            dirs = [i for i, c in enumerate(coords) if c == t]
            if d[t] > 0:
                for k in range(d[t] + 1):
                    face[(d, t, k)] = _table(X, din, dirs, ops.coface(d[t], k))
            if d[t] < T[t]:
                for k in range(d[t] + 1):
                    degen[(d, t, k)] = _table(X, din, dirs, ops.codegeneracy(d[t], k))
    Y, perm = from_levels(
        a_out, T, counts, face, degen, dim_bound=_out_dim_bound(X, a_out, coords), label=label or X.label
    )
    return Y, perm


def _table(X: Presheaf, din, dirs, theta) -> list[int]:
    if not dirs:
        return list(range(X.count(din)))
    cur = X.level(din)
    out = list(cur)
    for j in dirs:
        out = [X.act(nf, j, theta) for nf in out]
    return [X.index(nf) for nf in out]


def reindex_map(f: PresheafMap, spec, trunc: Sequence[int] | None = None) -> PresheafMap:
    """Reindex a map; both ends get the same (smallest sound) truncation."""
    T_out = out_truncation(f.source, spec, trunc)
    if trunc is not None:
        T_out = tuple(min(a, b) for a, b in zip(T_out, trunc))
    S, ps = reindex(f.source, spec, T_out)
    T, pt = reindex(f.target, spec, T_out)
    _, coords = _check(f.source, spec)
    images = []
    for c, e in enumerate(S.degs):
        raw_src = ps[e].index(S.nd_index(c))
        img = f.array(_in_degree(coords, e))[raw_src]
        images.append(T.level(e)[pt[e][img]])
    return PresheafMap(S, T, images, f.label)


def fdiag(X: Presheaf, trunc=None) -> Presheaf:
    """Diagonal: ``X_{n,n}`` for arity 2, ``X_{n,l,l}`` for arity 3."""
    if X.arity == 2:
        return reindex(X, FDIAG2, trunc)[0]
    if X.arity == 3:
        return reindex(X, DIAG1, trunc)[0]
    raise UnsupportedFunctor("diagonal needs arity 2 or 3")


def fdiag_map(f: PresheafMap, trunc=None) -> PresheafMap:
    spec = FDIAG2 if f.source.arity == 2 else DIAG1
    return reindex_map(f, spec, trunc)


def lemb(X: Presheaf, k_trunc: int | None = None) -> Presheaf:
    """``(k,n,l) -> X_{n,l}``: constant in the new categorical direction."""
    kt = k_trunc if k_trunc is not None else X.trunc[0]
    return reindex(X, LEMB, (kt, X.trunc[0], X.trunc[1]))[0]


def vemb(X: Presheaf, n_trunc: int | None = None) -> Presheaf:
    """``(k,n,l) -> X_{k,l}``: constant in the base direction."""
    nt = n_trunc if n_trunc is not None else X.trunc[0]
    return reindex(X, VEMB, (X.trunc[0], nt, X.trunc[1]))[0]


def val(X: Presheaf, k: int = 0) -> Presheaf:
    return reindex(X, VAL if k == 0 else VAL_K(k))[0]


def lfib(X: Presheaf, n: int = 0) -> Presheaf:
    return reindex(X, LFIB if n == 0 else LFIB_N(n))[0]


def const_space(X: Presheaf, n_trunc: int) -> Presheaf:
    """Arity-1 ``X`` as the simplicial space constant in ``n``: ``(n,l) -> X_l``."""
    return reindex(X, CONST_SPACE, (n_trunc, X.trunc[0]))[0]


def discrete(X: Presheaf, l_trunc: int) -> Presheaf:
    """Arity-1 ``X`` as a levelwise discrete simplicial space: ``(n,l) -> X_n``."""
    return reindex(X, DISCRETE, (X.trunc[0], l_trunc))[0]


def compose_specs(r, s):
    """The spec of reindexing along ``r`` and then along ``s`` (``s`` applied to the result of ``r``)."""
    a_in, a_mid, rc = r
    b_in, a_out, sc = s
    if a_mid != b_in:
        raise UnsupportedFunctor("reindexings do not compose")
    out = []
    for c in rc:
        if isinstance(c, tuple):
            out.append(c)
        else:
            out.append(sc[c])
    # constants that land in constant output slots are pinned: [m] in a mid direction
    return (a_in, a_out, tuple(out))


# ---------------------------------------------------------------------------
# Order reversal (duals)


def opposite(X: Presheaf, t: int, label: str = "") -> Presheaf:
    """Reverse the order of every ordinal in direction ``t``.

    Face ``d_i`` becomes ``d_{e-i}``; surjections are conjugated by the reversal.
    """
    faces = []
    for c, e in enumerate(X.degs):
        fc = []
        for j in range(X.arity):
            row = X.faces[c][j]
            if j == t and e[j] > 0:
                row = [row[e[j] - i] for i in range(e[j] + 1)]
            fc.append([(tc, _rev_sigma(X, tc, sig, t)) for tc, sig in row])
        faces.append(fc)
    return Presheaf(X.arity, X.trunc, list(X.degs), faces, dim_bound=X.dim_bound, names=X.names,
                    label=label or f"op{t}({X.label})")


def _rev_sigma(X: Presheaf, tc: int, sig, t: int):
    return tuple(ops.reverse(s, X.degs[tc][k]) if k == t else s for k, s in enumerate(sig))


def opposite_map(f: PresheafMap, t: int, source: Presheaf | None = None, target: Presheaf | None = None) -> PresheafMap:
    S = source if source is not None else opposite(f.source, t)
    T = target if target is not None else opposite(f.target, t)
    images = [(c, _rev_sigma(f.target, c, sig, t)) for c, sig in f.images]
    return PresheafMap(S, T, images, f.label)

