"""Simplicial operators as monotone maps between finite ordinals.

A monotone map ``[m] -> [n]`` is a tuple ``(a_0, ..., a_m)`` with ``a_i`` the
image of ``i``.  Cells are acted on contravariantly: ``(a o b)^* = b^* a^*``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

Op = tuple[int, ...]


def identity(n: int) -> Op:
    return tuple(range(n + 1))


def compose(a: Op, b: Op) -> Op:
    """Return ``a o b`` (apply ``b`` first)."""
    return tuple(a[i] for i in b)


def is_monotone(a: Op, n: int) -> bool:
    return all(0 <= x <= n for x in a) and all(x <= y for x, y in zip(a, a[1:]))


def is_surjective(a: Op, n: int) -> bool:
    return is_monotone(a, n) and len(a) > 0 and a[0] == 0 and a[-1] == n and all(
        y - x <= 1 for x, y in zip(a, a[1:])
    )


def coface(n: int, i: int) -> Op:
    """The injection ``[n-1] -> [n]`` that skips ``i``."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(n: int, i: int) -> Op:
    """The surjection ``[n+1] -> [n]`` hitting ``i`` twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


@lru_cache(maxsize=None)
def epi_mono(a: Op) -> tuple[Op, Op]:
    """Factor ``a = mono o epi``; returns ``(epi, mono)``."""
    image = sorted(set(a))
    pos = {v: k for k, v in enumerate(image)}
    return tuple(pos[v] for v in a), tuple(image)


def missing(mono: Op, n: int) -> list[int]:
    hit = set(mono)
    return [j for j in range(n + 1) if j not in hit]


def collapsed(epi: Op) -> list[int]:
    """Indices ``i`` with ``epi(i) == epi(i+1)``."""
    return [i for i in range(len(epi) - 1) if epi[i] == epi[i + 1]]


def word_from_surjection(epi: Op) -> list[int]:
    """Degeneracy word ``s_{i1} ... s_{ir}`` with ``i1 > ... > ir``."""
    return sorted(collapsed(epi), reverse=True)


def surjection_from_word(word: list[int], m: int) -> Op:
    """Inverse of :func:`word_from_surjection` for a cell of top degree ``m``.

    Raises ``ValueError`` if the word is not strictly decreasing or does not
    fit in degree ``m``.
    """
    if any(x <= y for x, y in zip(word, word[1:])):
        raise ValueError(f"degeneracy word {word} is not strictly decreasing")
    if any(i < 0 or i >= m for i in word):
        raise ValueError(f"degeneracy word {word} out of range for degree {m}")
    cut = set(word)
    out, v = [0], 0
    for i in range(m):
        if i not in cut:
            v += 1
        out.append(v)
    return tuple(out)


@lru_cache(maxsize=None)
def surjections(m: int, e: int) -> tuple[Op, ...]:
    """All monotone surjections ``[m] -> [e]`` in lexicographic order."""
    if e > m or e < 0:
        return ()
    out = []
    for cut in combinations(range(m), m - e):
        out.append(surjection_from_word(sorted(cut, reverse=True), m))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def monotone_maps(m: int, n: int) -> tuple[Op, ...]:
    """All monotone maps ``[m] -> [n]`` in lexicographic order."""
    out: list[Op] = []

    def rec(prefix: list[int], lo: int) -> None:
        if len(prefix) == m + 1:
            out.append(tuple(prefix))
            return
        for v in range(lo, n + 1):
            prefix.append(v)
            rec(prefix, v)
            prefix.pop()

    rec([], 0)
    return tuple(out)


def reverse(a: Op, n: int) -> Op:
    """Conjugate by the order reversal of ``[m]`` and ``[n]``."""
    m = len(a) - 1
    return tuple(n - a[m - i] for i in range(m + 1))
