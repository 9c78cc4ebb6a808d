"""Command line front end.

Every subcommand reads JSON from --in (or stdin) and writes to --out (or
stdout), so stages compose through pipes. Exit status 1 means invalid
input; exit status 2 means an internal invariant failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor

from . import export, io
from .algebra import ComplexUV, dualize
from .cone import build_cone, collapse_to_surgery, infer_flip
from .filtered import FilteredComplex
from .staircase import genus, mirror_staircase, staircase, staircase_from_poly

OUT_DIR_ENV = "KNOTCONE_OUT_DIR"


class InputError(Exception):
    pass


# ------------------------------------------------------------------ I/O

def _read(path: str | None) -> dict:
    try:
        text = sys.stdin.read() if path in (None, "-") else open(path).read()
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"input is not JSON: {err}") from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(path) and os.path.dirname(path) == "":
        path = os.path.join(base, path)
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(args, obj: ComplexUV | FilteredComplex, doc: dict) -> None:
    fmt = args.format
    if fmt == "json":
        _write(args.out, io.dumps(doc))
    elif fmt == "tsv":
        _write(args.out, export.to_tsv(obj))
    elif fmt == "dot":
        _write(args.out, export.to_dot(obj))
    else:
        _write(args.out, export.to_svg(obj, powers=getattr(args, "powers", False)))


def _positive(name: str, value: int | None, least: int = 1) -> int:
    if value is None or value < least:
        raise InputError(f"--{name} must be an integer >= {least}")
    return value


# ------------------------------------------------------------- commands

def cmd_build_staircase(args) -> None:
    if args.poly:
        try:
            coeffs = [int(t) for t in args.poly.split(",")]
        except ValueError:
            raise InputError("--poly takes comma separated integers") from None
        knot = staircase_from_poly(coeffs)
    else:
        n = _positive("n", args.n)
        knot = mirror_staircase(n) if args.mirror else staircase(n)
    _emit(args, knot, io.filtered_to_json(knot))


def cmd_build_cone(args) -> None:
    p = _positive("p", args.p)
    n = None
    if args.knot:
        knot = io.filtered_from_json(_read(args.knot))
        sym = infer_flip(knot)
    else:
        n = _positive("n", args.n)
        knot = mirror_staircase(n)
        sym = None
    cone = build_cone(knot, p, sym)
    _emit(args, cone.complex, io.cone_to_json(cone, n))


def _cone_n(cone, n) -> int:
    if n is not None:
        return int(n)
    k = 1
    while genus(k) < cone.genus:
        k += 1
    if genus(k) != cone.genus:
        raise InputError("cannot infer n from the cone genus")
    return k


def cmd_reduce(args) -> None:
    from .reduction import reduce_filtered, scripted_reduction
    doc = _read(args.input)
    cone, n = io.cone_from_json(doc)
    red = reduce_filtered(cone) if args.order == "greedy" else scripted_reduction(cone)
    if args.log:
        _write(args.log, red.log.dumps())
    out = io.cone_to_json(cone, n)
    body = io.filtered_to_json(red.complex)
    out.update(generators=body["generators"], differential=body["differential"])
    out["reduced"] = True
    _emit(args, red.complex, out)


def cmd_truncate(args) -> None:
    from .reduction import label_generators, truncate_to
    doc = _read(args.input)
    if not doc.get("reduced"):
        raise InputError("truncate expects the output of reduce")
    cone, n = io.cone_from_json(doc)
    n = _cone_n(cone, n)
    reduced = io.filtered_from_json(doc)
    top = cone.genus + cone.p - 1
    target = 2 * n - 1 if args.to is None else args.to
    if not 2 * n - 1 <= target <= top:
        raise InputError(f"--to must lie in [{2 * n - 1}, {top}] for n = {n}")
    tr = truncate_to(reduced, cone, n, target, trim=not args.no_trim)
    cx = tr.complex()
    if args.log:
        _write(args.log, tr.log.dumps())
    out = io.filtered_to_json(cx)
    out["n"] = n
    if target == 2 * n - 1 and not args.no_trim:
        labels, unknown = label_generators(cx, n)
        if not unknown:
            out["labels"] = labels
    _emit(args, cx, out)


def _load_local(doc: dict) -> tuple[ComplexUV, FilteredComplex | None]:
    from .algebra import rename
    from .reduction import to_local_fuv
    if doc.get("ring") == io.RING_UV:
        return io.complex_from_json(doc), None
    cx = io.filtered_from_json(doc)
    uv = to_local_fuv(cx)
    labels = doc.get("labels")
    return (rename(uv, labels) if labels else uv), cx


def invariants_of(doc: dict) -> dict:
    from .invariants import d_invariant, phi, standard_params, tau
    c, filt = _load_local(doc)
    out: dict = {"tau": tau(c)}
    try:
        table = phi(standard_params(c))
        out["phi"] = [{"i": i, "j": j, "value": v} for (i, j), v in table.items()]
    except ValueError as err:
        out["phi"] = None
        out["phiError"] = str(err)
    if filt is not None:
        out["d"] = d_invariant(collapse_to_surgery(filt))
    return out


def cmd_invariants(args) -> None:
    out = invariants_of(_read(args.input))
    if args.format == "tsv":
        rows = [f"tau\t{out['tau']}"]
        if "d" in out:
            rows.append(f"d\t{out['d']}")
        for r in out.get("phi") or []:
            rows.append(f"phi\t{r['i']}\t{r['j']}\t{r['value']}")
        _write(args.out, "\n".join(rows) + "\n")
    else:
        _write(args.out, json.dumps(out, sort_keys=True) + "\n")


def _certificate(n: int) -> dict:
    from .obstruction import genus_bound
    return genus_bound(n).to_json()


def cmd_obstruct(args) -> None:
    ns = args.n
    for n in ns:
        if n <= 1:
            raise InputError("no obstruction is claimed for n <= 1")
    if args.jobs > 1 and len(ns) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            certs = list(pool.map(_certificate, ns))
    else:
        certs = [_certificate(n) for n in ns]
    body = certs[0] if len(certs) == 1 else certs
    _write(args.out, json.dumps(body, indent=2, sort_keys=True) + "\n")


def cmd_export(args) -> None:
    from .algebra import rename
    if args.builtin:
        from .invariants import dual_class, local_class_Cn
        kind, _, num = args.builtin.partition(":")
        n = int(num) if num else 3
        makers = {"Cn": local_class_Cn, "Cn*": dual_class, "mirror-staircase": mirror_staircase,
                  "staircase": staircase}
        if kind not in makers:
            raise InputError(f"--builtin must be one of {sorted(makers)} with :n")
        obj = makers[kind](n)
    else:
        doc = _read(args.input)
        obj = io.parse_any(doc)
        if isinstance(obj, FilteredComplex) and doc.get("labels") and args.plane == "uv":
            obj = rename(obj.to_uv(), doc["labels"])
    if args.dual:
        obj = dualize(obj) if isinstance(obj, ComplexUV) else obj.dual()
    fmt = args.format if args.format != "json" else "svg"
    args.format = fmt
    doc = io.complex_to_json(obj) if isinstance(obj, ComplexUV) else io.filtered_to_json(obj)
    _emit(args, obj, doc)


def cmd_verify(args) -> None:
    from .reduction import BasisChangeLog, replay
    start = io.filtered_from_json(_read(args.input))
    try:
        log = BasisChangeLog.loads(open(args.log).read())
    except OSError as err:
        raise InputError(f"cannot read {args.log}: {err}") from None
    try:
        got = replay(start, log)
    except (ValueError, KeyError) as err:
        raise InputError(f"log does not replay: {err}") from None
    report = {"steps": len(log.steps), "generators": len(got)}
    if args.expect:
        want = io.filtered_from_json(_read(args.expect))
        same = io.filtered_to_json(got)["differential"] == io.filtered_to_json(want)["differential"] \
            and set(got.gens) == set(want.gens)
        report["matches"] = same
        _write(args.out, json.dumps(report, sort_keys=True) + "\n")
        if not same:
            raise InputError("replayed complex differs from --expect")
        return
    _write(args.out, json.dumps(report, sort_keys=True) + "\n")


# --------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knotcone", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json", "tsv", "dot", "svg"), default="json"):
        p.add_argument("--in", dest="input", default=None, help="input JSON (default stdin)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=fmt, default=default)
        return p

    p = common(sub.add_parser("build-staircase", help="CFK-infinity staircase of T(2n,2n+1)"))
    p.add_argument("--n", type=int)
    p.add_argument("--mirror", action="store_true")
    p.add_argument("--poly", help="Alexander polynomial coefficients, lowest degree first")
    p.set_defaults(func=cmd_build_staircase)

    p = common(sub.add_parser("build-cone", help="filtered mapping cone X_p"))
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--knot", help="staircase JSON instead of the mirrored T(2n,2n+1)")
    p.set_defaults(func=cmd_build_cone)

    p = common(sub.add_parser("reduce", help="filtered Gaussian elimination"))
    p.add_argument("--log", help="write the basis change log (JSON lines)")
    p.add_argument("--order", choices=("scripted", "greedy"), default="scripted")
    p.set_defaults(func=cmd_reduce)

    p = common(sub.add_parser("truncate", help="split down to X<ell>"))
    p.add_argument("--to", type=int, default=None, help="target level (default 2n-1)")
    p.add_argument("--no-trim", action="store_true", help="keep the acyclic ends of X<2n-1>")
    p.add_argument("--log", help="write the basis change log (JSON lines)")
    p.set_defaults(func=cmd_truncate)

    p = common(sub.add_parser("invariants", help="tau, phi and d"), fmt=("json", "tsv"))
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("obstruct", help="genus bound certificate")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_obstruct)

    p = common(sub.add_parser("export", help="SVG or dot diagram"), default="svg")
    p.add_argument("--builtin", help="Cn:N, Cn*:N, staircase:N or mirror-staircase:N")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--powers", action="store_true", help="annotate edges with their monomials")
    p.add_argument("--plane", choices=("ij", "uv"), default="uv")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", help="replay a basis change log")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--log", required=True)
    p.add_argument("--expect")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except (InputError, ValueError, KeyError, TypeError) as err:
        kind = "input" if isinstance(err, (InputError, ValueError)) else "format"
        print(json.dumps({"error": kind, "message": str(err)}), file=sys.stderr)
        return 1
    except AssertionError as err:
        print(json.dumps({"error": "internal", "message": str(err)}), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
