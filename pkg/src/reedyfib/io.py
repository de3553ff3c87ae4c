"""JSON interchange: ``presheaf/1`` and ``map/1``."""

from __future__ import annotations

import json
from typing import Any

from . import ops
from .presheaf import Presheaf, PresheafMap, StructuralError


def _deg_key(d) -> str:
    return ",".join(str(x) for x in d)


def nf_to_json(nf) -> list:
    c, sig = nf
    return [c, [ops.word_from_surjection(s) for s in sig]]


def nf_from_json(data, deg, X: Presheaf | None = None) -> tuple:
    """Decode ``[cell, words]`` for a cell of multidegree ``deg``."""
    try:
        c, words = data
        c = int(c)
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"malformed cell reference {data!r}") from exc
    if len(words) != len(deg):
        raise StructuralError(f"cell reference {data!r} needs one word per direction")
    try:
        sig = tuple(ops.surjection_from_word(list(w), m) for w, m in zip(words, deg))
    except ValueError as exc:
        raise StructuralError(str(exc)) from exc
    if X is not None:
        if not 0 <= c < len(X.degs):
            raise StructuralError(f"reference to unknown cell {c}")
        if tuple(len(s) - 1 - len(w) for s, w in zip(sig, words)) != X.degs[c]:
            raise StructuralError(f"cell reference {data!r} does not match degree of cell {c}")
    return (c, sig)


def presheaf_to_json(X: Presheaf) -> dict:
    cells: dict[str, list] = {}
    for c, d in enumerate(X.degs):
        rec: dict[str, Any] = {"id": c}
        faces = {}
        for j in range(X.arity):
            if d[j] > 0:
                faces[str(j)] = [nf_to_json(nf) for nf in X.faces[c][j]]
        rec["faces"] = faces
        cells.setdefault(_deg_key(d), []).append(rec)
    out: dict[str, Any] = {
        "format": "presheaf/1",
        "arity": X.arity,
        "truncation": list(X.trunc),
        "cells": cells,
    }
    if X.dim_bound is not None:
        out["dim_bound"] = list(X.dim_bound)
    if X.names:
        out["names"] = list(X.names)
    if X.label:
        out["label"] = X.label
    return out


def presheaf_from_json(data: dict) -> Presheaf:
    if data.get("format") != "presheaf/1":
        raise StructuralError(f"expected format presheaf/1, got {data.get('format')!r}")
    arity = int(data["arity"])
    trunc = tuple(int(x) for x in data["truncation"])
    recs = []
    for key, lst in data["cells"].items():
        d = tuple(int(x) for x in key.split(","))
        if len(d) != arity:
            raise StructuralError(f"degree key {key!r} has wrong arity")
        for rec in lst:
            recs.append((int(rec["id"]), d, rec.get("faces", {})))
    recs.sort()
    if [r[0] for r in recs] != list(range(len(recs))):
        raise StructuralError("cell ids must be 0..n-1")
    degs = [r[1] for r in recs]
    faces = []
    for cid, d, fdata in recs:
        fc = []
        for j in range(arity):
            row = []
            if d[j] > 0:
                lst = fdata.get(str(j))
                if lst is None:
                    raise StructuralError(f"cell {cid}: missing faces in direction {j}")
                fdeg = tuple(x - (k == j) for k, x in enumerate(d))
                for ref in lst:
                    t = ref[0]
                    if not isinstance(t, int) or not 0 <= t < len(degs):
                        raise StructuralError(f"cell {cid}: face references unknown cell {t!r}")
                    row.append(nf_from_json(ref, fdeg))
            fc.append(row)
        faces.append(fc)
    db = tuple(data["dim_bound"]) if "dim_bound" in data else None
    X = Presheaf(arity, trunc, degs, faces, dim_bound=db, names=data.get("names"), label=data.get("label", ""))
    X.check_structure()
    return X


def assignment_to_json(f: PresheafMap) -> dict:
    return {str(c): nf_to_json(nf) for c, nf in enumerate(f.images)}


def map_to_json(f: PresheafMap) -> dict:
    return {
        "format": "map/1",
        "source": presheaf_to_json(f.source),
        "target": presheaf_to_json(f.target),
        "assignment": assignment_to_json(f),
    }


def map_from_json(data: dict) -> PresheafMap:
    if data.get("format") != "map/1":
        raise StructuralError(f"expected format map/1, got {data.get('format')!r}")
    S = presheaf_from_json(data["source"])
    T = presheaf_from_json(data["target"])
    images = []
    for c, d in enumerate(S.degs):
        ref = data["assignment"].get(str(c))
        if ref is None:
            raise StructuralError(f"no image for source cell {c}")
        nf = nf_from_json(ref, d)
        if not 0 <= nf[0] < len(T.degs):
            raise StructuralError(f"image of cell {c} references unknown target cell")
        e = T.degs[nf[0]]
        if tuple(s[-1] for s in nf[1]) != e:
            raise StructuralError(f"image of cell {c} has inconsistent degeneracy data")
        images.append(nf)
    f = PresheafMap(S, T, images)
    bad = f.naturality_violations()
    if bad:
        raise StructuralError(f"assignment is not natural: {bad[0]}")
    return f


def dumps(obj: dict) -> str:
    """Canonical serialization (sorted keys, fixed separators)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def load(path: str) -> Any:
    with open(path) as fh:
        data = json.load(fh)
    fmt = data.get("format")
    if fmt == "presheaf/1":
        return presheaf_from_json(data)
    if fmt == "map/1":
        return map_from_json(data)
    return data


def save(obj, path: str) -> None:
    data = presheaf_to_json(obj) if isinstance(obj, Presheaf) else map_to_json(obj) if isinstance(obj, PresheafMap) else obj
    with open(path, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)
        fh.write("\n")
