"""Command-line front end.

    torsionph validate --input K.json
    torsionph groups   --input K.json --degree 1 --coeffs z
    torsionph diagram  --input K.json --degree 1 --coeffs q
    torsionph dt       --input X.json --input Y.json [--epsilon 1/2]
    torsionph match    --input X.json --input Y.json --coeffs q
    torsionph bound    --input X.json --input Y.json [--u .. --v .. --u2 .. --v2 ..]
    torsionph stability --input K.json --eta 1/4 --seed 3
    torsionph examples rp2 --output rp2.json

Exit status: 0 on success, 1 on domain errors, 2 on usage errors.
"""

import argparse
import json
import os
import sys

from .complex import (
    EXAMPLES,
    INF,
    complex_to_json,
    format_rational,
    load_complex,
    parse_rational,
    validate,
)
from .distances import (
    best_delta_bound,
    d_match,
    d_T,
    delta_lower_bound_witness,
    dt_predicate,
    stability_check,
)
from .errors import ComplexError, TorsionPHError
from .persistence import Coefficients, diagram, group_str, module_on_grid

def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", default=[], metavar="FILE")
    common.add_argument("--degree", type=int, default=1, metavar="K")
    common.add_argument("--coeffs", default=None, metavar="z|q|zp:P")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--epsilon", default=None, metavar="P/Q")
    common.add_argument("--eta", default=None, metavar="P/Q")
    common.add_argument("--seed", type=int, default=0, metavar="N")

    parser = argparse.ArgumentParser(
        prog="torsionph",
        description="Exact persistent homology with torsion and the d_T pseudo-distance.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    sub.add_parser("validate", parents=[common], help="check complex files")
    sub.add_parser("groups", parents=[common], help="persistent groups on the critical grid")
    sub.add_parser("diagram", parents=[common], help="persistence diagram (n = 1, field coefficients)")
    sub.add_parser("dt", parents=[common], help="d_T between two complexes, or one shift probe")
    sub.add_parser("match", parents=[common], help="matching distance between diagrams")
    b = sub.add_parser("bound", parents=[common], help="lower bounds for the natural pseudo-distance")
    for name in ("--u", "--v", "--u2", "--v2"):
        b.add_argument(name, default=None, metavar="P/Q[,P/Q...]")
    sub.add_parser("stability", parents=[common], help="perturb a filtration and check d_T <= eta")
    ex = sub.add_parser("examples", parents=[common], help="write a built-in complex to a file")
    ex.add_argument("name", choices=sorted(EXAMPLES))
    ex.add_argument("--output", "-o", default=None, metavar="FILE")
    return parser


_INPUTS = {"validate": (1, None), "groups": (1, 1), "diagram": (1, 1), "dt": (2, 2),
           "match": (2, 2), "bound": (2, 2), "stability": (1, 1), "examples": (0, 0)}


def _check_flags(parser, args):
    lo, hi = _INPUTS[args.command]
    n = len(args.input)
    if n < lo or (hi is not None and n > hi):
        want = f"exactly {lo}" if lo == hi else f"at least {lo}"
        parser.error(f"{args.command}: expects {want} --input file(s), got {n}")
    default = "q" if args.command in ("diagram", "match") else "z"
    try:
        args.coeffs = Coefficients.parse(args.coeffs or default)
    except ValueError as e:
        parser.error(f"--coeffs: {e}")
    if args.command in ("diagram", "match") and not args.coeffs.is_field:
        parser.error(f"{args.command}: needs field coefficients (q or zp:P)")
    for name in ("epsilon", "eta"):
        raw = getattr(args, name)
        if raw is not None:
            try:
                val = parse_rational(raw, f"--{name}")
            except ComplexError as e:
                parser.error(str(e))
            if val < 0:
                parser.error(f"--{name} must be nonnegative")
            setattr(args, name, val)
    if args.command == "stability" and args.eta is None:
        parser.error("stability: --eta is required")
    if args.command == "bound":
        given = [getattr(args, k) is not None for k in ("u", "v", "u2", "v2")]
        if any(given) and not all(given):
            parser.error("bound: give all of --u --v --u2 --v2 or none")
        if all(given):
            for k in ("u", "v", "u2", "v2"):
                try:
                    setattr(args, k, tuple(parse_rational(x, f"--{k}") for x in getattr(args, k).split(",")))
                except ComplexError as e:
                    parser.error(str(e))
    threads = os.environ.get("TP_THREADS")
    if threads is not None:
        try:
            ok = int(threads) > 0
        except ValueError:
            ok = False
        if not ok:
            parser.error(f"TP_THREADS must be a positive integer, got {threads!r}")


def _load_valid(path):
    K = load_complex(path)
    report = validate(K)
    if not report:
        raise ComplexError(f"{path}: {report.message}")
    return K


def _emit(payload, text, fmt, out):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _table(rows):
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _cmd_validate(args, out):
    results, failed = [], False
    for path in args.input:
        try:
            report = validate(load_complex(path)).to_json()
        except ComplexError as e:
            report = {"ok": False, "kind": "parse", "message": str(e), "simplices": []}
        failed |= not report["ok"]
        results.append({"file": path, **report})
    text = _table([("file", "status", "message")] + [
        (r["file"], "ok" if r["ok"] else r["kind"], r["message"] or "") for r in results
    ])
    _emit(results if len(results) > 1 else results[0], text, args.format, out)
    return 1 if failed else 0


def _cmd_groups(args, out):
    M = module_on_grid(_load_valid(args.input[0]), args.degree, args.coeffs)
    payload = M.to_json()
    rows = [("cell_u", "cell_v", "group")]
    for (I, J), g in sorted(M.values.items()):
        rows.append((",".join(map(str, I)), ",".join(map(str, J)), group_str(g)))
    grid = "; ".join(" ".join(format_rational(x) for x in axis) for axis in M.grid)
    _emit(payload, f"grid: {grid}\n" + _table(rows), args.format, out)
    return 0


def _cmd_diagram(args, out):
    D = diagram(_load_valid(args.input[0]), args.degree, args.coeffs)
    rows = [("birth", "death", "mult")] + [
        (format_rational(b), format_rational(d), m) for (b, d), m in D.points()
    ]
    _emit(D.to_json(), _table(rows), args.format, out)
    return 0


def _modules(args):
    Ks = [_load_valid(p) for p in args.input]
    return [module_on_grid(K, args.degree, args.coeffs) for K in Ks]


def _result_text(name, res):
    note = "" if res.attained or res.value == INF else " (infimum, not attained)"
    lines = [f"{name} = {format_rational(res.value)}{note}"]
    if res.witness is not None:
        lines.append(f"witness: {res.witness}")
    return "\n".join(lines)


def _cmd_dt(args, out):
    Mx, My = _modules(args)
    if args.epsilon is not None:
        rep = dt_predicate(Mx, My, args.epsilon)
        text = f"epsilon = {format_rational(rep.epsilon)}: " + ("holds" if rep.holds else f"fails, {rep.witness}")
        _emit(rep.to_json(), text, args.format, out)
        return 0
    res = d_T(Mx, My)
    _emit(res.to_json(), _result_text("d_T", res), args.format, out)
    return 0


def _cmd_match(args, out):
    D1, D2 = (diagram(_load_valid(p), args.degree, args.coeffs) for p in args.input)
    res = d_match(D1, D2)
    _emit(res.to_json(), _result_text("d_match", res), args.format, out)
    return 0


def _fmt_point(p):
    return [format_rational(x) for x in p]


def _cmd_bound(args, out):
    Mx, My = _modules(args)
    if args.u is not None:
        b = delta_lower_bound_witness(Mx, My, (args.u, args.v), (args.u2, args.v2))
        payload = {"bound": None if b is None else format_rational(b)}
        text = "no bound (subquotient exists)" if b is None else f"delta >= {format_rational(b)}"
        _emit(payload, text, args.format, out)
        return 0
    dt = d_T(Mx, My)
    payload = {"dt": format_rational(dt.value), "witness_bound": None, "witness": None}
    lines = [f"delta >= d_T = {format_rational(dt.value)}"]
    if Mx.n == 1:
        best, arg = best_delta_bound(Mx, My)
        if best is not None:
            (u, v), (u2, v2), direction = arg
            payload["witness_bound"] = format_rational(best)
            payload["witness"] = {"u": _fmt_point(u), "v": _fmt_point(v), "u2": _fmt_point(u2),
                                  "v2": _fmt_point(v2), "direction": direction}
            lines.append(f"delta >= {format_rational(best)} from a single failed subquotient test")
    _emit(payload, "\n".join(lines), args.format, out)
    return 0


def _cmd_stability(args, out):
    rep = stability_check(_load_valid(args.input[0]), args.degree, args.eta, args.seed, args.coeffs)
    text = _table([("eta", "sup_distance", "d_T", "witness_bound", "passed"), (
        format_rational(rep.eta), format_rational(rep.sup_distance), format_rational(rep.dt),
        "-" if rep.witness_bound is None else format_rational(rep.witness_bound), rep.passed)])
    _emit(rep.to_json(), text, args.format, out)
    return 0 if rep.passed else 1


def _cmd_examples(args, out):
    path = args.output or f"{args.name}.json"
    K = EXAMPLES[args.name]()
    try:
        with open(path, "w") as fh:
            json.dump(complex_to_json(K), fh, indent=2)
            fh.write("\n")
    except OSError as e:
        raise ComplexError(f"{path}: {e.strerror}") from None
    _emit({"example": args.name, "written": path, "simplices": len(K)},
          f"wrote {args.name} ({len(K)} simplices) to {path}", args.format, out)
    return 0


HANDLERS = {
    "validate": _cmd_validate, "groups": _cmd_groups, "diagram": _cmd_diagram, "dt": _cmd_dt,
    "match": _cmd_match, "bound": _cmd_bound, "stability": _cmd_stability, "examples": _cmd_examples,
}


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
        _check_flags(parser, args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return HANDLERS[args.command](args, out)
    except (TorsionPHError, ValueError) as e:
        err.write(f"torsionph {args.command}: error: {e}\n")
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
