"""Command line entry point: ``gdpkit <command> ...``.

Exit codes: 0 ok, 1 other toolkit error, 2 parse or sort error, 3 budget
exceeded, 4 negative verdict (failed check, no fit, not uniform).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from .errors import BoxTooLarge, BudgetExceeded, FormulaSyntaxError, GdpError, InsufficientDepth, NoFit, SortError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_BUDGET, EXIT_NEGATIVE = 0, 1, 2, 3, 4


class Negative(Exception):
    """A computation finished with a negative verdict."""


# io --------------------------------------------------------------------------------------------


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(doc, out: Optional[str]) -> None:
    text = dumps(doc)
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _read_input(path: str) -> dict:
    """A JSON document, or plain text taken as the ``text`` field."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError:
        return {"text": raw.strip()}
    if not isinstance(doc, dict):
        raise FormulaSyntaxError(f"{path}: expected a JSON object")
    return doc


def _primes(text: Optional[str]) -> list:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise FormulaSyntaxError(f"bad prime list {text!r}") from None


def _pairs(text: str) -> list:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip().strip("()")
        if not chunk:
            continue
        try:
            a, b = (int(x) for x in chunk.split(","))
        except ValueError:
            raise FormulaSyntaxError(f"bad pair {chunk!r}; expected (a,b)") from None
        out.append((a, b))
    return out


# commands ------------------------------------------------------------------------------------


def cmd_count(args) -> int:
    from .igusa.report import cmd_count as run

    rep = run(args.poly, _primes(args.primes), args.depth, budget=args.budget, timing=args.timing, workers=args.workers)
    _emit(rep.to_json(), args.out)
    if args.out:
        csv_path = args.csv or str(Path(args.out).with_suffix(".csv"))
        write_atomic(csv_path, rep.to_csv())
    elif args.csv:
        write_atomic(args.csv, rep.to_csv())
    return EXIT_OK


def cmd_fit(args) -> int:
    from .igusa.fit import fit_rational
    from .igusa.report import CountReport

    rep = CountReport.from_json(json.loads(Path(args.counts).read_text(encoding="utf-8")))
    cands = [_pairs(args.pairs)] if args.pairs else None
    try:
        res = fit_rational(rep, cands, args.num_deg)
    except (NoFit, InsufficientDepth) as e:
        _emit({"schema_version": SCHEMA_VERSION, "kind": "fit", "error": type(e).__name__, "detail": str(e)}, args.out)
        raise Negative(str(e)) from None
    _emit(res.to_json(), args.out)
    return EXIT_OK if res.accepted else EXIT_NEGATIVE


def cmd_uniform(args) -> int:
    from .igusa.fit import FitResult, uniformity_report

    src = Path(args.fits)
    files = sorted(src.glob("*.json")) if src.is_dir() else [src]
    fits = []
    for f in files:
        doc = json.loads(f.read_text(encoding="utf-8"))
        if doc.get("kind") == "fit" and "fits" in doc:
            fits.append(FitResult.from_json(doc))
    if not fits:
        raise FormulaSyntaxError(f"no fit reports in {src}")
    doc = uniformity_report(fits)
    _emit(doc, args.out)
    return EXIT_OK if doc["uniform"] else EXIT_NEGATIVE


def cmd_qe(args) -> int:
    from .formula.parser import parse_formula
    from .formula.printer import to_text
    from .formula.serialize import formula_from_json, formula_to_json
    from .vgqe.check import check_equivalent
    from .vgqe.eliminate import Trace, eliminate_all

    doc = _read_input(args.inp)
    if "formula" in doc and isinstance(doc["formula"], dict):
        f = formula_from_json(doc["formula"])
    else:
        f = parse_formula(doc.get("formula", doc.get("text", "")), doc.get("context"))
    trace = Trace()
    g = eliminate_all(f, trace)
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "qe",
        "input": to_text(f),
        "output": to_text(g),
        "output_ast": formula_to_json(g),
        "trace": trace.to_json(),
    }
    ok = True
    if args.check:
        out["check"] = {}
        for p in _primes(args.check):
            rep = check_equivalent(f, g, p)
            out["check"][str(p)] = {"equivalent": rep.ok, "assignments": rep.assignments, "mismatches": rep.mismatches}
            ok = ok and rep.ok
        out["equivalent"] = ok
    _emit(out, args.out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _cfun_input(doc: dict):
    from .cfun.cterm import CFunction
    from .cfun.expr import parse_cfun

    fn = doc.get("function", doc.get("text"))
    if isinstance(fn, dict):
        return CFunction.from_json(fn)
    if not isinstance(fn, str) or not fn:
        raise FormulaSyntaxError("input needs a 'function' (text or JSON)")
    return parse_cfun(fn, doc.get("context"))


def _vg_vars(names) -> list:
    from .formula.sorts import VG
    from .formula.terms import Var

    if isinstance(names, str):
        names = [n for n in names.split(",") if n.strip()]
    return [Var(n.strip(), VG) for n in names]


def cmd_sum(args) -> int:
    from .cfun.summation import sum_over_interval, sum_over_vg
    from .formula.parser import parse_term

    doc = _read_input(args.inp)
    f = _cfun_input(doc)
    ys = _vg_vars(args.vars or doc.get("vars", ["y"]))
    mode = (args.mode or doc.get("mode", "int")).upper()
    trace = [{"step": "input", "detail": str(f)}]
    if "lower" in doc:
        if len(ys) != 1:
            raise FormulaSyntaxError("interval sums take one variable")
        ctx = doc.get("context")
        lo = parse_term(str(doc["lower"]), context=ctx)
        hi = parse_term(str(doc["upper"]), context=ctx) if doc.get("upper") is not None else None
        g, h = sum_over_interval(f, ys[0], lo, hi)
        trace.append({"step": "interval", "detail": f"{doc['lower']} <= {ys[0].name} <= {doc.get('upper', '+inf')}"})
    else:
        g, h = sum_over_vg(f, ys, mode)
        trace.append({"step": "fiber sums", "detail": ", ".join(y.name for y in ys)})
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "sum",
        "vars": [y.name for y in ys],
        "result": g.to_json(),
        "locus": None if h is None else h.to_json(),
        "trace": trace,
    }
    _emit(out, args.out)
    return EXIT_OK


def cmd_loci(args) -> int:
    from .cfun.summation import locus

    doc = _read_input(args.inp)
    f = _cfun_input(doc)
    ys = _vg_vars(args.vars or doc.get("vars", doc.get("var", ["y"])))
    mode = (args.mode or doc.get("mode", "int")).upper()
    h = locus(f, ys, mode)
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "locus",
        "mode": mode,
        "vars": [y.name for y in ys],
        "locus": h.to_json(),
    }
    _emit(out, args.out)
    return EXIT_OK


def cmd_naturality(args) -> int:
    from .igusa.naturality import verify_naturality

    cases = None if args.cases in (None, "all") else [c.strip() for c in args.cases.split(",")]
    rows = verify_naturality(args.prime, cases)
    if args.out:
        _emit({"schema_version": SCHEMA_VERSION, "kind": "naturality", "prime": args.prime, "rows": [r.to_json() for r in rows]}, args.out)
    width = max(len(r.case) for r in rows)
    for r in rows:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.group:<6} {r.case:<{width}}  {r.direct}  ==  {r.integral}")
    return EXIT_OK if all(r.ok for r in rows) else EXIT_NEGATIVE


# parser --------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gdpkit", description="Exact p-adic definable-set computations.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="root counts N_m modulo p^m")
    c.add_argument("--poly", required=True)
    c.add_argument("--primes", default="2,3,5")
    c.add_argument("--depth", type=int, default=6)
    c.add_argument("--budget", type=int, default=50_000_000, help="lifting-tree nodes per prime")
    c.add_argument("--timing", action="store_true", help="record timings (breaks byte-identical output)")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--csv")
    c.add_argument("--out")
    c.set_defaults(run=cmd_count)

    f = sub.add_parser("fit", help="fit rational zeta functions to a count report")
    f.add_argument("--counts", required=True)
    f.add_argument("--pairs", help='one candidate set, e.g. "(-1,-1);(-5,-6)"; default: grid search')
    f.add_argument("--num-deg", type=int, dest="num_deg")
    f.add_argument("--out")
    f.set_defaults(run=cmd_fit)

    u = sub.add_parser("uniform", help="one denominator set for all primes?")
    u.add_argument("--fits", required=True, help="a fit report or a directory of them")
    u.add_argument("--out")
    u.set_defaults(run=cmd_uniform)

    for name, fn, hlp in (
        ("qe", cmd_qe, "eliminate value-group quantifiers"),
        ("sum", cmd_sum, "sum a C-function over value-group variables"),
        ("loci", cmd_loci, "integrability, boundedness or vanishing locus"),
    ):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--in", dest="inp", required=True)
        p.add_argument("--out")
        p.add_argument("--check", help="primes for the model check (qe)")
        if name != "qe":
            p.add_argument("--vars", help="summation variables, comma separated")
            p.add_argument("--mode", choices=["int", "bdd", "iva", "INT", "BDD", "IVA"])
        p.set_defaults(run=fn)

    n = sub.add_parser("verify-naturality", help="integral forms of the generators")
    n.add_argument("--prime", type=int, default=3)
    n.add_argument("--cases", default="all")
    n.add_argument("--out")
    n.set_defaults(run=cmd_naturality)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (FormulaSyntaxError, SortError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExceeded, BoxTooLarge) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except Negative as e:
        print(f"negative verdict: {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (GdpError, ValueError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
