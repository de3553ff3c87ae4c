"""Cross-check suites over the seeded corpus.

Each suite returns a plain dict with one row per instance and a summary;
reports carry no timing so two runs compare bytewise.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from . import fibrations as fb
from .corpus import CorpusItem, fiber_pool, generate
from .grothendieck import (
    Groth,
    constant,
    groth,
    natural_transformation_map,
    projectively_fibrant_check,
    slice_replacement_over,
)
from .lifting import _space_embed
from .mapping import pullback_exponential
from .presheaf import PresheafMap, identity_map, to_point
from .shapes import E, F, G, boundary, yoneda
from . import ops

LOCALIZERS = ("segal", "css", "kan")
SUITES = ("grothendieck", "characterization", "recognition", "equivalence", "exponentiation", "matching", "conditions")


def pmap(fn: Callable, xs: Sequence, threads: int = 1) -> list:
    """Ordered map, optionally on a thread pool."""
    if threads > 1 and len(xs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, xs))
    return [fn(x) for x in xs]


def _status(v) -> str:
    return v.status.value


def _summary(rows: list[dict], key: str = "agree") -> dict:
    return {"instances": len(rows), "disagreements": sum(1 for r in rows if r.get(key) is False)}


_GROTH_CACHE: dict = {}


def _groth(it: CorpusItem) -> Groth:
    key = (it.seed, it.name)
    G = _GROTH_CACHE.get(key)
    if G is None:
        G = _GROTH_CACHE[key] = groth(it.diagram)
    return G


# ---------------------------------------------------------------------------
# Suites


def suite_grothendieck(items: list[CorpusItem], threads: int = 1) -> dict:
    """``check_class`` of the construction versus objectwise fibrancy of the diagram."""

    def one(it: CorpusItem) -> list[dict]:
        G = _groth(it)
        rows = []
        for S in LOCALIZERS:
            a = fb.check_class(G.proj, fb.CLASS_OF[S]).verdict
            b = projectively_fibrant_check(it.diagram, fb.localizer(S, it.diagram.trunc[0]))
            decided = a.decided and b.decided
            rows.append({"item": it.name, "S": S, "class": _status(a), "diagram": _status(b),
                         "expected": it.expected[S], "agree": (a.status == b.status) if decided else None})
        return rows

    rows = [r for rs in pmap(one, items, threads) for r in rs]
    s = _summary(rows)
    s["unknown"] = sum(1 for r in rows if r["agree"] is None)
    s["unknown_rate"] = round(s["unknown"] / max(1, len(rows)), 4)
    s["expected_mismatches"] = sum(1 for r in rows if r["agree"] and (r["class"] == "Holds") != r["expected"])
    passed = s["disagreements"] == 0 and s["unknown_rate"] <= 0.2 and s["expected_mismatches"] == 0
    return {"suite": "grothendieck", "rows": rows, "summary": s, "passed": passed}


def suite_characterization(items: list[CorpusItem], threads: int = 1) -> dict:
    """The five locality readings on every corpus construction and localizer."""

    def one(it: CorpusItem) -> list[dict]:
        G = _groth(it)
        rows = []
        for S in LOCALIZERS:
            rep = fb.characterization_crosscheck(G.proj, fb.localizer(S, G.base.trunc[0]))
            rows.append({"item": it.name, "S": S, "readings": rep["decided"], "unknown": rep["unknown"],
                         "agree": rep["agree"]})
        return rows

    rows = [r for rs in pmap(one, items, threads) for r in rs]
    s = _summary(rows)
    return {"suite": "characterization", "rows": rows, "summary": s, "passed": s["disagreements"] == 0}


def _maps(items: list[CorpusItem]) -> list[tuple[str, Groth, Groth, PresheafMap]]:
    """Maps between constructions over one base: identities, maps to the terminal diagram, and
    automorphisms of constant diagrams."""
    pool = fiber_pool(items[0].diagram.trunc if items else (2, 2))
    P = pool["point"]
    out = []
    terminal: dict[str, Groth] = {}
    for it in items:
        Y = _groth(it)
        C = Y.F.C
        if C.name not in terminal:
            terminal[C.name] = groth(constant(C, P))
        Z = terminal[C.name]
        alpha = {o: PresheafMap(V, P, to_point(V).images) for o, V in zip(C.objects, Y.F.values)}
        out.append((f"{it.name}->pt", Y, Z, natural_transformation_map(Y, Z, alpha)))
        ident = {o: identity_map(V) for o, V in zip(C.objects, Y.F.values)}
        out.append((f"id({it.name})", Y, Y, natural_transformation_map(Y, Y, ident)))
    return out


def suite_recognition(items: list[CorpusItem], threads: int = 1, max_maps: int | None = None) -> dict:
    """Slice-pullback recognition versus the mapping-space definition of localized equivalence."""
    maps = _maps(items)[:max_maps]

    def one(job) -> list[dict]:
        name, Y, Z, g = job
        R = [slice_replacement_over(Y, x) for x in range(len(Y.F.C.objects))]
        rows = []
        for S in LOCALIZERS:
            loc = fb.localizer(S, Y.base.trunc[0])
            fy, fz = fb.certified_fibrant(Y.proj, loc), fb.certified_fibrant(Z.proj, loc)
            fibrant = fy.holds and fz.holds
            rec = fb.recognition_equiv(g, Y.proj, Z.proj, R, loc, fibrant=fibrant)
            ws = [p for p, v in ((Y.proj, fy), (Z.proj, fz)) if v.holds]
            direct = fb.mapping_space_criterion(g, Y.proj, Z.proj, ws) if fibrant else None
            decided = rec.decided and direct is not None and direct.decided
            rows.append({"map": name, "S": S, "recognition": _status(rec),
                         "direct": _status(direct) if direct is not None else "Unknown",
                         "agree": (rec.status == direct.status) if decided else None})
        return rows

    rows = [r for rs in pmap(one, maps, threads) for r in rs]
    s = _summary(rows)
    s["decided"] = sum(1 for r in rows if r["agree"] is not None)
    return {"suite": "recognition", "rows": rows, "summary": s, "passed": s["disagreements"] == 0 and s["decided"] > 0}


def suite_equivalence(items: list[CorpusItem], threads: int = 1, max_maps: int | None = None) -> dict:
    """Levelwise, value and fiberwise criteria on maps between certified Reedy left fibrations."""
    maps = _maps(items)[:max_maps]

    def one(job) -> dict:
        name, Y, Z, g = job
        cy, cz = fb.is_reedy_left_fib(Y.proj).verdict, fb.is_reedy_left_fib(Z.proj).verdict
        if not (cy.holds and cz.holds):
            return {"map": name, "certified": False, "agree": None}
        crit = fb.equivalence_criteria(g)
        crit["fiberwise"] = fb.fiberwise_criterion(g, Y.proj, Z.proj)
        st = {k: _status(v) for k, v in crit.items()}
        dec = {v for v in st.values() if v != "Unknown"}
        return {"map": name, "certified": True, "criteria": st, "agree": len(dec) <= 1}

    rows = pmap(one, maps, threads)
    s = _summary(rows)
    s["certified"] = sum(1 for r in rows if r["certified"])
    return {"suite": "equivalence", "rows": rows, "summary": s,
            "passed": s["disagreements"] == 0 and s["certified"] >= 10}


def _exp_members(trunc) -> list[tuple[str, PresheafMap]]:
    b = boundary(1, trunc[-1])[1]
    return [
        ("dD[1] in space", _space_embed(b, 3, trunc)),
        ("dF(1) in k", fb._space_embed_first(boundary(1, trunc[0])[1], trunc)),
    ]


def suite_exponentiation(items: list[CorpusItem], threads: int = 1, trunc_out=(2, 1, 1), limit: int = 4) -> dict:
    """``exp(g, p)`` for boundary inclusions ``g`` against certified Segal coCartesian fibrations."""
    chosen = []
    for it in items:
        if len(chosen) >= limit:
            break
        if it.expected["segal"] and not any(f == "empty" for f in it.fibers):
            G = _groth(it)
            if fb.check_class(G.proj, "segal_cocart").verdict.holds:
                chosen.append((it, G))
    jobs = [(it, G, name, g) for it, G in chosen for name, g in _exp_members(G.total.trunc)]

    def one(job) -> dict:
        it, G, name, g = job
        e = pullback_exponential(g, G.proj, (0, 1, 2), trunc_out)
        v = fb.check_class(e, "segal_cocart", require_lemb=False).verdict
        return {"item": it.name, "member": name, "trunc": list(trunc_out), "verdict": _status(v),
                "agree": None if v.unknown else v.holds}

    rows = pmap(one, jobs, threads)
    s = _summary(rows)
    return {"suite": "exponentiation", "rows": rows, "summary": s, "passed": s["disagreements"] == 0 and len(rows) > 0}


def suite_matching(items: list[CorpusItem], threads: int = 1, ks: Sequence[int] = (0, 1)) -> dict:
    """``L_k -> M_k L`` left versus ``L_k -> X`` left, and ``M_0 L = X``."""
    from .grothendieck import find_iso

    def one(it: CorpusItem) -> list[dict]:
        G = _groth(it)
        rows = []
        for k in ks:
            mo = fb.matching_object(G.proj, k)
            a = fb.is_left_fib(mo.comparison)
            b = fb.is_left_fib(compose(mo.to_base, mo.comparison))
            row = {"item": it.name, "k": k, "to_matching": _status(a), "to_base": _status(b),
                   "agree": (a.status == b.status) if (a.decided and b.decided) else None}
            if k == 0:
                row["matching_is_base"] = find_iso(mo.to_base.target, mo.obj) is not None and len(mo.obj.degs) == len(
                    mo.to_base.target.degs)
                if not row["matching_is_base"]:
                    row["agree"] = False
            rows.append(row)
        return rows

    rows = [r for rs in pmap(one, items, threads) for r in rs]
    s = _summary(rows)
    return {"suite": "matching", "rows": rows, "summary": s, "passed": s["disagreements"] == 0}


def compose(g: PresheafMap, f: PresheafMap) -> PresheafMap:
    from .presheaf import compose_maps

    return compose_maps(g, f)


def condition_maps() -> list[tuple[str, PresheafMap]]:
    out = [(f"G({n})->F({n})", G(n, (n, n))[1]) for n in (2, 3)]
    E1 = E(1, (2, 2))
    out.append(("F(0)->E(1)", yoneda(E1, (0, (ops.identity(0), ops.identity(0))), F(0, (2, 2)), label="F(0)->E(1)")))
    return out


def suite_conditions(items: list[CorpusItem] | None = None, threads: int = 1) -> dict:
    """Condition (C) on the localizing maps and the sampled condition (P)."""
    rows = []
    for name, f in condition_maps():
        v = fb.condition_check(f, "C")
        rows.append({"map": name, "condition": "C", "verdict": _status(v), "agree": v.holds})
    T = (2, 2)
    pool = fiber_pool(T)
    shapes = [F(0, T), F(1, T), boundary_F1(T)]
    for name, f in condition_maps():
        if f.target.trunc != T:
            continue
        local = [W for W in (pool["point"], pool["two"], pool["F1"]) if fb.local_wrt(to_point(W), [f]).holds]
        v = fb.condition_P_sample(f, local, shapes)
        rows.append({"map": name, "condition": "P", "samples": len(local), "verdict": _status(v), "agree": v.holds})
    s = _summary(rows)
    return {"suite": "conditions", "rows": rows, "summary": s, "passed": s["disagreements"] == 0}


def boundary_F1(T):
    from .shapes import partialF

    return partialF(1, T)[0]


RUNNERS = {
    "grothendieck": suite_grothendieck,
    "characterization": suite_characterization,
    "recognition": suite_recognition,
    "equivalence": suite_equivalence,
    "exponentiation": suite_exponentiation,
    "matching": suite_matching,
    "conditions": suite_conditions,
}


def run_suites(names: Sequence[str], seed: int = 0, size: int = 30, threads: int = 1) -> dict:
    items = generate(seed, size)
    out = {"seed": seed, "size": len(items), "suites": {}}
    for n in names:
        if n not in RUNNERS:
            raise KeyError(f"unknown suite {n!r}; choose from {SUITES}")
        out["suites"][n] = RUNNERS[n](items, threads=threads)
    out["passed"] = all(r["passed"] for r in out["suites"].values())
    return out


def timed(fn: Callable, *a, **kw) -> tuple[object, float]:
    t = time.perf_counter()
    r = fn(*a, **kw)
    return r, time.perf_counter() - t
