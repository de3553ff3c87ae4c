"""Finite categories presented by generators and relations, and their nerves."""

from __future__ import annotations

from typing import Sequence

from . import ops
from .presheaf import Presheaf, StructuralError

Word = tuple[str, ...]


class FiniteCategory:
    """A finite category with an explicit composition table.

    Morphisms are numbered ``0..len(mor)-1``; identities come first, one per
    object.  ``comp[(g, f)]`` is ``g o f`` (``f`` first).  Words are read in
    diagrammatic order: ``("f", "g")`` means ``f`` then ``g``.
    """

    def __init__(
        self,
        objects: Sequence[str],
        arrows: dict[str, tuple[str, str]],
        relations: Sequence[tuple[Word, Word]] = (),
        *,
        max_morphisms: int = 2000,
        name: str = "",
    ) -> None:
        self.objects = list(objects)
        if len(set(self.objects)) != len(self.objects):
            raise StructuralError("duplicate object names")
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        self.arrows = dict(arrows)
        for a, (s, t) in self.arrows.items():
            if s not in self.obj_index or t not in self.obj_index:
                raise StructuralError(f"arrow {a} has unknown endpoint")
        self.relations = [(tuple(l), tuple(r)) for l, r in relations]
        self.name = name
        self._rules = self._orient(self.relations)
        self._close(max_morphisms)

    # --------------------------------------------------------------- words
    @staticmethod
    def _key(w: Word):
        return (len(w), w)

    def _orient(self, rels):
        rules = []
        for l, r in rels:
            for w in (l, r):
                self._word_ends(w)
            if l and r and self._word_ends(l) != self._word_ends(r):
                raise StructuralError(f"relation {l} = {r} relates parallel-incompatible words")
            if self._key(l) < self._key(r):
                l, r = r, l
            if l != r:
                rules.append((l, r))
        return rules

    def _word_ends(self, w: Word):
        if not w:
            return None
        for a in w:
            if a not in self.arrows:
                raise StructuralError(f"unknown arrow {a!r} in relation")
        for a, b in zip(w, w[1:]):
            if self.arrows[a][1] != self.arrows[b][0]:
                raise StructuralError(f"word {w} is not composable")
        return (self.arrows[w[0]][0], self.arrows[w[-1]][1])

    def normalize(self, w: Word) -> Word:
        """Rewrite ``w`` with the oriented relations until no rule applies."""
        w = tuple(w)
        changed = True
        while changed:
            changed = False
            for l, r in self._rules:
                n = len(l)
                for i in range(len(w) - n + 1):
                    if w[i : i + n] == l:
                        w = w[:i] + r + w[i + n :]
                        changed = True
                        break
                if changed:
                    break
        return w

    def _close(self, limit: int) -> None:
        # identities first, then normal-form words by breadth-first extension
        self.mor_src: list[int] = []
        self.mor_tgt: list[int] = []
        self.mor_word: list[Word] = []
        index: dict[tuple, int] = {}
        for i, o in enumerate(self.objects):
            self.mor_src.append(i)
            self.mor_tgt.append(i)
            self.mor_word.append(())
            index[("id", i)] = i
        frontier = []
        for a in sorted(self.arrows):
            w = self.normalize((a,))
            key = self._mkey(w, a)
            if key not in index:
                index[key] = self._add(w, key)
                frontier.append(w)
        while frontier:
            nxt = []
            for w in frontier:
                t = self.arrows[w[-1]][1]
                for a in sorted(self.arrows):
                    if self.arrows[a][0] != t:
                        continue
                    w2 = self.normalize(w + (a,))
                    key = self._mkey(w2, w[0])
                    if key not in index:
                        if len(self.mor_word) >= limit:
                            raise StructuralError("category closure exceeds the morphism limit; is it finite?")
                        index[key] = self._add(w2, key)
                        if w2:
                            nxt.append(w2)
            frontier = nxt
        self._index = index
        n = len(self.mor_word)
        self.comp: dict[tuple[int, int], int] = {}
        for f in range(n):
            for g in range(n):
                if self.mor_tgt[f] != self.mor_src[g]:
                    continue
                w = self.normalize(self.mor_word[f] + self.mor_word[g])
                key = ("id", self.mor_src[f]) if not w else ("w", w)
                if key not in index:
                    raise StructuralError("composition leaves the closure; relations are not confluent")
                self.comp[(g, f)] = index[key]
        for f in range(n):
            for g in range(n):
                if (g, f) not in self.comp:
                    continue
                for h in range(n):
                    if (h, g) in self.comp:
                        if self.comp[(h, self.comp[(g, f)])] != self.comp[(self.comp[(h, g)], f)]:
                            raise StructuralError("relations are not confluent: composition is not associative")

    def _mkey(self, w: Word, first: str):
        if not w:
            return ("id", self.obj_index[self.arrows[first][0]])
        return ("w", w)

    def _add(self, w: Word, key) -> int:
        if key[0] == "id":
            return key[1]
        self.mor_src.append(self.obj_index[self.arrows[w[0]][0]])
        self.mor_tgt.append(self.obj_index[self.arrows[w[-1]][1]])
        self.mor_word.append(w)
        return len(self.mor_word) - 1

    # ------------------------------------------------------------ queries
    def __len__(self) -> int:
        return len(self.objects)

    def __repr__(self) -> str:
        return f"<FiniteCategory {self.name or ''} objects={len(self.objects)} morphisms={len(self.mor_word)}>"

    @property
    def n_morphisms(self) -> int:
        return len(self.mor_word)

    def identity(self, obj: int) -> int:
        return obj

    def is_identity(self, f: int) -> bool:
        return f < len(self.objects)

    def morphism(self, word: Sequence[str], src: str | None = None) -> int:
        w = self.normalize(tuple(word))
        if not w:
            if src is None:
                raise StructuralError("empty word needs an object")
            return self.obj_index[src]
        return self._index[("w", w)]

    def hom(self, a: int, b: int) -> list[int]:
        return [f for f in range(self.n_morphisms) if self.mor_src[f] == a and self.mor_tgt[f] == b]

    def compose(self, g: int, f: int) -> int:
        """``g o f``."""
        return self.comp[(g, f)]

    def has_loops(self) -> bool:
        """True if non-identity morphisms form a cycle (nerve is infinite-dimensional)."""
        adj: dict[int, set[int]] = {}
        for f in range(len(self.objects), self.n_morphisms):
            adj.setdefault(self.mor_src[f], set()).add(self.mor_tgt[f])
        state: dict[int, int] = {}

        def dfs(v: int) -> bool:
            state[v] = 1
            for w in adj.get(v, ()):
                if state.get(w) == 1 or (state.get(w) is None and dfs(w)):
                    return True
            state[v] = 2
            return False

        return any(state.get(v) is None and dfs(v) for v in range(len(self.objects)))

    def longest_chain(self) -> int:
        """Length of the longest chain of composable non-identity morphisms (finite case)."""
        best = {v: 0 for v in range(len(self.objects))}
        order = self._topo()
        for v in reversed(order):
            for f in range(len(self.objects), self.n_morphisms):
                if self.mor_src[f] == v:
                    best[v] = max(best[v], 1 + best[self.mor_tgt[f]])
        return max(best.values(), default=0)

    def _topo(self) -> list[int]:
        seen: set[int] = set()
        out: list[int] = []

        def visit(v: int) -> None:
            seen.add(v)
            for f in range(len(self.objects), self.n_morphisms):
                if self.mor_src[f] == v and self.mor_tgt[f] not in seen:
                    visit(self.mor_tgt[f])
            out.append(v)

        for v in range(len(self.objects)):
            if v not in seen:
                visit(v)
        return out[::-1]

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "arrows": {a: list(st) for a, st in sorted(self.arrows.items())},
            "relations": [[list(l), list(r)] for l, r in self.relations],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteCategory":
        return cls(
            data["objects"],
            {a: tuple(st) for a, st in data["arrows"].items()},
            [(tuple(l), tuple(r)) for l, r in data.get("relations", [])],
        )


def poset(n_objects: int, covers: Sequence[tuple[int, int]], name: str = "") -> FiniteCategory:
    """Poset on ``0..n-1`` generated by covering relations ``a < b``.

    Any two parallel paths are identified.
    """
    objs = [str(i) for i in range(n_objects)]
    arrows = {f"{a}{b}" if n_objects < 10 else f"{a}_{b}": (str(a), str(b)) for a, b in covers}
    names = sorted(arrows)
    # identify parallel paths: compare all paths through the cover graph
    paths: dict[tuple[str, str], list[Word]] = {}
    frontier: list[Word] = [(a,) for a in names]
    while frontier:
        nxt = []
        for w in frontier:
            s, t = arrows[w[0]][0], arrows[w[-1]][1]
            paths.setdefault((s, t), []).append(w)
            for a in names:
                if arrows[a][0] == t:
                    nxt.append(w + (a,))
        frontier = nxt
        if sum(len(v) for v in paths.values()) > 5000:
            raise StructuralError("cover relation has a cycle")
    rels = []
    for ws in paths.values():
        ws.sort(key=lambda w: (len(w), w))
        for w in ws[1:]:
            rels.append((w, ws[0]))
    return FiniteCategory(objs, arrows, rels, name=name or f"poset{n_objects}")


def ordinal(n: int) -> FiniteCategory:
    """The linear order ``[n] = {0 < 1 < ... < n}``."""
    return poset(n + 1, [(i, i + 1) for i in range(n)], name=f"[{n}]")


def indiscrete(n_objects: int) -> FiniteCategory:
    """The contractible groupoid on ``n_objects`` objects (one arrow between any two)."""
    objs = [str(i) for i in range(n_objects)]
    arrows = {f"g{a}{b}": (str(a), str(b)) for a in range(n_objects) for b in range(n_objects) if a != b}
    rels: list[tuple[Word, Word]] = []
    for a in range(n_objects):
        for b in range(n_objects):
            if a == b:
                continue
            for c in range(n_objects):
                if c == b:
                    continue
                lhs = (f"g{a}{b}", f"g{b}{c}")
                rels.append((lhs, () if a == c else (f"g{a}{c}",)))
    return FiniteCategory(objs, arrows, rels, name=f"I[{n_objects}]")


def product_category(C: FiniteCategory, D: FiniteCategory) -> FiniteCategory:
    """Product of two posets (any parallel paths identified)."""
    if C.has_loops() or D.has_loops():
        raise StructuralError("product_category supports loop-free categories only")
    nc, nd = len(C.objects), len(D.objects)
    covers = []
    for f in range(nc, C.n_morphisms):
        if len(C.mor_word[f]) == 1:
            for y in range(nd):
                covers.append((C.mor_src[f] * nd + y, C.mor_tgt[f] * nd + y))
    for g in range(nd, D.n_morphisms):
        if len(D.mor_word[g]) == 1:
            for x in range(nc):
                covers.append((x * nd + D.mor_src[g], x * nd + D.mor_tgt[g]))
    return poset(nc * nd, covers, name=f"{C.name}x{D.name}")


# ---------------------------------------------------------------------------
# Nerves


def chains(C: FiniteCategory, m: int, nondegenerate: bool = True) -> list[tuple[int, ...]]:
    """Composable strings ``(f_1, ..., f_m)`` (``f_1`` first); vertices for ``m == 0``."""
    if m == 0:
        return [(o,) for o in range(len(C.objects))]
    lo = len(C.objects) if nondegenerate else 0
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int]) -> None:
        if len(prefix) == m:
            out.append(tuple(prefix))
            return
        t = C.mor_tgt[prefix[-1]] if prefix else None
        for f in range(lo, C.n_morphisms):
            if t is None or C.mor_src[f] == t:
                prefix.append(f)
                rec(prefix)
                prefix.pop()

    rec([])
    return out


def chain_vertices(C: FiniteCategory, ch: tuple[int, ...], m: int) -> list[int]:
    if m == 0:
        return [ch[0]]
    return [C.mor_src[ch[0]]] + [C.mor_tgt[f] for f in ch]


def chain_face(C: FiniteCategory, ch: tuple[int, ...], m: int, i: int) -> tuple[int, ...]:
    """``d_i`` of an ``m``-chain (``m >= 1``), as a possibly degenerate chain."""
    if m == 1:
        return (C.mor_src[ch[0]],) if i == 1 else (C.mor_tgt[ch[0]],)
    if i == 0:
        return ch[1:]
    if i == m:
        return ch[:-1]
    return ch[: i - 1] + (C.compose(ch[i], ch[i - 1]),) + ch[i + 1 :]


def chain_normal(C: FiniteCategory, ch: tuple[int, ...], m: int) -> tuple[tuple[int, ...], ops.Op]:
    """Split a chain into its nondegenerate part and the collapsing surjection."""
    if m == 0:
        return ch, (0,)
    keep = [f for f in ch if not C.is_identity(f)]
    sig = [0]
    v = 0
    for f in ch:
        if not C.is_identity(f):
            v += 1
        sig.append(v)
    if not keep:
        return (C.mor_src[ch[0]],), tuple(sig)
    return tuple(keep), tuple(sig)


def nerve(C: FiniteCategory, trunc: int, label: str = "") -> Presheaf:
    """Truncated nerve of ``C`` as an arity-1 presheaf.

    Nondegenerate cells are strings of non-identity composable morphisms;
    ``names`` record vertices (object names) and morphism words.
    """
    ids: dict[tuple[int, tuple[int, ...]], int] = {}
    degs: list[tuple[int]] = []
    faces: list[list[list]] = []
    names: list[str] = []
    for m in range(trunc + 1):
        for ch in chains(C, m):
            cid = len(degs)
            ids[(m, ch)] = cid
            degs.append((m,))
            row = []
            if m > 0:
                for i in range(m + 1):
                    fch = chain_face(C, ch, m, i)
                    nd, sig = chain_normal(C, fch, m - 1)
                    k = sig[-1] if m - 1 > 0 else 0
                    row.append((ids[(k, nd)], (sig,)))
            faces.append([row])
            if m == 0:
                names.append(C.objects[ch[0]])
            else:
                names.append("|".join(".".join(C.mor_word[f]) for f in ch))
    dim_bound = None if C.has_loops() else (C.longest_chain(),)
    return Presheaf(1, (trunc,), degs, faces, dim_bound=dim_bound, names=names, label=label or f"N({C.name})")


def nerve_cell_id(C: FiniteCategory, X: Presheaf, ch: tuple[int, ...], m: int) -> tuple[int, ops.Op]:
    """Normal form in ``nerve(C)`` of an arbitrary chain (identities allowed)."""
    nd, sig = chain_normal(C, ch, m)
    k = sig[-1] if m > 0 else 0
    cache = getattr(X, "_chain_ids", None)
    if cache is None:
        cache = {}
        cid = 0
        for mm in range(X.trunc[0] + 1):
            for c in chains(C, mm):
                cache[(mm, c)] = cid
                cid += 1
        X._chain_ids = cache  # type: ignore[attr-defined]
    return cache[(k, nd)], sig


def all_chains(C: FiniteCategory, m: int) -> list[tuple[int, ...]]:
    return chains(C, m, nondegenerate=False)

