"""Command line entry point: ``reedyfib <command>``.

Exit codes: 0 all Holds, 1 some Fails, 2 some Unknown (and no Fails),
3 structural error.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import time

import click

from . import __version__
from . import io as rio
from .presheaf import Presheaf, PresheafMap, StructuralError
from .verdict import Status, Verdict

EXIT = {Status.HOLDS: 0, Status.FAILS: 1, Status.UNKNOWN: 2}


class ReportContext:
    def __init__(self, command: str, as_json: bool, timing: bool) -> None:
        self.command = command
        self.as_json = as_json
        self.timing = timing
        self.inputs: dict[str, str] = {}
        self.t0 = time.perf_counter()

    def load(self, path: str, kind: type | None = None):
        with open(path, "rb") as fh:
            self.inputs[os.path.basename(path)] = hashlib.sha256(fh.read()).hexdigest()
        obj = rio.load(path)
        if kind is not None and not isinstance(obj, kind):
            raise StructuralError(f"{path}: expected a {kind.__name__}")
        return obj

    def report(self, body: dict) -> dict:
        rep = {"command": self.command, "inputs": self.inputs, "version": __version__, **body}
        if self.timing:
            rep["wall_clock_s"] = round(time.perf_counter() - self.t0, 3)
        return rep


def _trunc(s: str | None):
    if s is None:
        return None
    return tuple(int(x) for x in s.split(","))


def _emit(ctx: ReportContext, rep: dict, text: str, out: str | None = None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(rio.dumps(rep) + "\n")
    if ctx.as_json:
        click.echo(rio.dumps(rep))
    else:
        click.echo(text)


def _verdict_exit(ctx: ReportContext, v: Verdict, trunc, extra: dict | None = None, out: str | None = None) -> None:
    if v.bound is None:
        v = v.with_bound(trunc)
    body = {"verdict": v.to_json(), "bounds": list(v.bound)}
    if extra:
        body.update(extra)
    rep = ctx.report(body)
    bound = ",".join(map(str, v.bound))
    _emit(ctx, rep, f"{v!r} (through truncation {bound})", out)
    sys.exit(EXIT[v.status])


def _save(obj, out: str | None, ctx: ReportContext, what: str) -> None:
    if out:
        rio.save(obj, out)
    data = rio.presheaf_to_json(obj) if what == "presheaf" else rio.map_to_json(obj)
    rep = ctx.report({"result": data if not out else out})
    if ctx.as_json:
        click.echo(rio.dumps(rep))
    elif out:
        click.echo(f"wrote {out}")
    else:
        click.echo(json.dumps(data, sort_keys=True, indent=1))


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Print machine-readable reports.")
@click.option("--timing", is_flag=True, help="Add wall-clock time to reports (breaks bytewise reproducibility).")
@click.pass_context
def main(cctx: click.Context, as_json: bool, timing: bool) -> None:
    """Fibration checks on truncated simplicial, bisimplicial and trisimplicial sets."""
    cctx.obj = {"json": as_json, "timing": timing}


def _ctx(cctx: click.Context, name: str) -> ReportContext:
    return ReportContext(name, cctx.obj["json"], cctx.obj["timing"])


@main.command()
@click.argument("kind")
@click.argument("params", nargs=-1, type=int)
@click.option("--trunc", help="Comma separated truncation, e.g. 3,3.")
@click.option("--category", "category_path", type=click.Path(exists=True), help="Category JSON for nerves.")
@click.option("-o", "--out")
@click.pass_context
def build(cctx, kind, params, trunc, category_path, out):
    """Build a named shape (delta, boundary, horn, J, F, partialF, E, G, F2, partialF2, nerve, spine)."""
    from .category import FiniteCategory
    from .shapes import build as build_shape

    ctx = _ctx(cctx, "build")
    cat = None
    if category_path:
        with open(category_path) as fh:
            cat = FiniteCategory.from_json(json.load(fh))
    obj = build_shape(kind, *params, trunc=_trunc(trunc), category=cat)
    if isinstance(obj, tuple):
        _save(obj[1], out, ctx, "map")
    else:
        _save(obj, out, ctx, "presheaf")


@main.command("map-space")
@click.argument("x_path", type=click.Path(exists=True))
@click.argument("y_path", type=click.Path(exists=True))
@click.option("--n", "N", type=int, default=2, show_default=True, help="Truncation of the mapping space.")
@click.option("-o", "--out")
@click.pass_context
def map_space_cmd(cctx, x_path, y_path, N, out):
    """The mapping space Map(X, Y) as a simplicial set."""
    from .mapping import map_space

    ctx = _ctx(cctx, "map-space")
    X, Y = ctx.load(x_path, Presheaf), ctx.load(y_path, Presheaf)
    _save(map_space(X, Y, N), out, ctx, "presheaf")


@main.command()
@click.argument("i_path", type=click.Path(exists=True))
@click.argument("j_path", type=click.Path(exists=True))
@click.option("-o", "--out")
@click.pass_context
def pp(cctx, i_path, j_path, out):
    """Pushout-product of two monomorphisms."""
    from .algebra import pushout_product

    ctx = _ctx(cctx, "pp")
    _save(pushout_product(ctx.load(i_path, PresheafMap), ctx.load(j_path, PresheafMap)), out, ctx, "map")


@main.command()
@click.argument("i_path", type=click.Path(exists=True))
@click.argument("p_path", type=click.Path(exists=True))
@click.option("--free", help="Free directions, e.g. 0,1 (default: all).")
@click.option("--trunc-out", help="Output truncation in the free directions.")
@click.option("-o", "--out")
@click.pass_context
def pexp(cctx, i_path, p_path, free, trunc_out, out):
    """Pullback-exponential exp(i, p)."""
    from .mapping import pullback_exponential

    ctx = _ctx(cctx, "pexp")
    f = pullback_exponential(ctx.load(i_path, PresheafMap), ctx.load(p_path, PresheafMap), _trunc(free), _trunc(trunc_out))
    _save(f, out, ctx, "map")


@main.command()
@click.argument("f_path", type=click.Path(exists=True))
@click.option("--family", default="horns", show_default=True)
@click.option("--bound", type=int, default=2, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.pass_context
def rlp(cctx, f_path, family, bound, threads):
    """Right lifting property against a generating family."""
    from .lifting import family as fam, rlp as run

    ctx = _ctx(cctx, "rlp")
    f = ctx.load(f_path, PresheafMap)
    F = fam(family, bound, f.source.arity, f.target.trunc)
    _verdict_exit(ctx, run(f, F, threads), f.target.trunc, {"family": F.name})


@main.command()
@click.argument("f_path", type=click.Path(exists=True))
@click.option("--family", default="horns", show_default=True)
@click.option("--bound", type=int, default=2, show_default=True)
@click.option("--budget", type=int, default=200, show_default=True)
@click.option("-o", "--out", help="Write the right factor here.")
@click.pass_context
def factor(cctx, f_path, family, bound, budget, out):
    """Bounded small-object factorization."""
    from .lifting import factor as run, family as fam

    ctx = _ctx(cctx, "factor")
    f = ctx.load(f_path, PresheafMap)
    res = run(f, fam(family, bound, f.source.arity, f.target.trunc), budget)
    if out:
        rio.save(res.right, out)
    rep = ctx.report({"factorization": res.to_json()})
    _emit(ctx, rep, f"middle object with {len(res.middle.degs)} cells; exhausted={res.exhausted}")
    sys.exit(2 if res.exhausted else 0)


@main.command()
@click.argument("x_path", type=click.Path(exists=True))
@click.option("--maxdim", type=int)
@click.pass_context
def homology(cctx, x_path, maxdim):
    """Integral homology of a simplicial set."""
    from .oracles import homology as run

    ctx = _ctx(cctx, "homology")
    X = ctx.load(x_path, Presheaf)
    H = run(X, maxdim)
    rep = ctx.report({"homology": H.to_json(), "bounds": list(X.trunc)})
    _emit(ctx, rep, f"{H.describe()} (through truncation {X.trunc[0]})")


@main.command()
@click.argument("f_path", type=click.Path(exists=True))
@click.option("--effort", type=click.Choice(["low", "medium", "high"]), default="medium", show_default=True)
@click.pass_context
def weq(cctx, f_path, effort):
    """Weak equivalence certificate for a map of simplicial sets."""
    from .oracles import weq as run

    ctx = _ctx(cctx, "weq")
    f = ctx.load(f_path, PresheafMap)
    _verdict_exit(ctx, run(f, effort), f.target.trunc)


KINDS = ["kan", "reedy", "left", "right", "reedy-left", "segal-cocart", "cocart", "cart", "segal-cart", "left3", "right3"]


@main.command()
@click.option("--kind", type=click.Choice(KINDS), required=True)
@click.argument("p_path", type=click.Path(exists=True))
@click.option("--trunc", help="Restrict the map to this truncation first.")
@click.option("--bound", type=int)
@click.option("--report", "report_path", help="Also write the report here.")
@click.pass_context
def check(cctx, kind, p_path, trunc, bound, report_path):
    """Decide a fibration class for a map."""
    from . import fibrations as fb
    from .presheaf import restrict_map

    ctx = _ctx(cctx, "check")
    p = ctx.load(p_path, PresheafMap)
    if trunc:
        p = restrict_map(p, _trunc(trunc))
    extra = {"kind": kind}
    if kind == "kan":
        v = fb.is_kan_fib(p, bound)
    elif kind == "reedy":
        v = fb.is_reedy_fib(p, None if bound is None else (bound,))
    elif kind == "left":
        v = fb.is_left_fib(p, bound)
    elif kind == "right":
        v = fb.is_right_fib(p, bound)
    else:
        bounds = None if bound is None else (bound,) * 3
        if kind == "reedy-left":
            rep = fb.is_reedy_left_fib(p, bounds)
        else:
            cls = {"segal-cocart": "segal_cocart", "segal-cart": "segal_cart", "left3": "left",
                   "right3": "right"}.get(kind, kind)
            rep = fb.check_class(p, cls, bounds)
        v = rep.verdict
        extra["report"] = rep.to_json()
    _verdict_exit(ctx, v, p.target.trunc, extra, report_path)


@main.command("groth")
@click.argument("diagram_path", type=click.Path(exists=True))
@click.option("-o", "--out")
@click.pass_context
def groth_cmd(cctx, diagram_path, out):
    """Grothendieck construction of a diagram over a finite category."""
    from .grothendieck import diagram_from_json, groth

    ctx = _ctx(cctx, "groth")
    data = ctx.load(diagram_path)
    D = diagram_from_json(data, os.path.dirname(os.path.abspath(diagram_path)))
    _save(groth(D).proj, out, ctx, "map")


@main.group()
def corpus():
    """Seeded diagram corpus."""


@corpus.command("generate")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--size", type=int, default=30, show_default=True)
@click.option("-o", "--out", default="corpus", show_default=True)
@click.pass_context
def corpus_generate(cctx, seed, size, out):
    """Write the corpus diagrams as JSON files."""
    from .corpus import generate, write

    ctx = _ctx(cctx.parent, "corpus generate")
    items = generate(seed, size)
    paths = write(items, out)
    rep = ctx.report({"seed": seed, "size": len(items), "files": [os.path.basename(p) for p in paths],
                      "items": [{"name": it.name, "expected": it.expected} for it in items]})
    _emit(ctx, rep, f"wrote {len(paths)} diagrams to {out}")


@main.command()
@click.option("--suite", "suites", multiple=True, help="Suite name (repeatable); default all.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--size", type=int, default=30, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--report", "report_path")
@click.pass_context
def verify(cctx, suites, seed, size, threads, report_path):
    """Run the cross-check suites and print a pass/fail matrix."""
    from .verify import SUITES, run_suites

    ctx = _ctx(cctx, "verify")
    res = run_suites(list(suites) or list(SUITES), seed, size, threads)
    rep = ctx.report(res)
    lines = [f"{name:18s} {'pass' if r['passed'] else 'FAIL'}  {json.dumps(r['summary'], sort_keys=True)}"
             for name, r in res["suites"].items()]
    _emit(ctx, rep, "\n".join(lines), report_path)
    sys.exit(0 if res["passed"] else 1)


def run() -> None:
    """Entry point that maps library errors to exit code 3."""
    from .presheaf import TruncationError
    from .reindex import UnsupportedFunctor
    from .shapes import ShapeError

    try:
        main(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(3)
    except (StructuralError, TruncationError, ShapeError, UnsupportedFunctor, json.JSONDecodeError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    run()
