"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 malformed input (schema or CSV),
3 domain or divergence error, 4 unsupported combination.
"""
import argparse
import csv
import io
import json
import sys

import jsonschema
import numpy as np

from . import verify
from .analysis import read_rule_csv, space_lower_bound, wce_squared
from .errors import DivergenceError, DomainError, SchemaError, UnsupportedCombination
from .spectra import SpaceSpec, complexity_report, minimal_errors, tractability_report
from .weights import Constant, Explicit, FourierWeightSpec, Geometric, PolyDecay

_POS = {"type": "number", "exclusiveMinimum": 0}
_UNIT = {"type": "number", "exclusiveMinimum": 0, "maximum": 1}

SPACE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["family", "alpha", "weights", "s"],
    "properties": {
        "family": {"enum": ["anova", "korobov", "sobolev", "exponential"]},
        "alpha": {"type": "number", "minimum": 1},
        "omega": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "s": {"type": "integer", "minimum": 1},
        "weights": {"oneOf": [
            {"type": "object", "additionalProperties": False, "required": ["kind", "a"],
             "properties": {"kind": {"const": "poly"}, "a": _POS, "scale": _UNIT}},
            {"type": "object", "additionalProperties": False, "required": ["kind", "c"],
             "properties": {"kind": {"const": "geometric"},
                            "c": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                            "scale": _UNIT}},
            {"type": "object", "additionalProperties": False, "required": ["kind", "g"],
             "properties": {"kind": {"const": "constant"}, "g": _UNIT}},
            {"type": "object", "additionalProperties": False, "required": ["kind", "prefix"],
             "properties": {"kind": {"const": "explicit"},
                            "prefix": {"type": "array", "items": _UNIT},
                            "tail": {"type": "number", "minimum": 0, "maximum": 1}}},
        ]},
    },
}

PROBLEM_NAMES = {"app": "approximation", "int": "integration",
                 "anchored": "anchored-integration", "int-nonneg": "integration-nonneg-rules"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# space documents

def parse_space_doc(doc):
    """Validate a JSON document and build a SpaceSpec; SchemaError on any violation."""
    try:
        jsonschema.validate(doc, SPACE_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{path}: {exc.message}") from None
    w = doc["weights"]
    try:
        if w["kind"] == "poly":
            seq = PolyDecay(w["a"], w.get("scale", 1.0))
        elif w["kind"] == "geometric":
            seq = Geometric(w["c"], w.get("scale", 1.0))
        elif w["kind"] == "constant":
            seq = Constant(w["g"])
        else:
            seq = Explicit(tuple(w["prefix"]), w.get("tail", 0.0))
        fw = FourierWeightSpec(doc["family"], doc["alpha"], seq, doc.get("omega"))
    except DomainError as exc:
        raise SchemaError(str(exc)) from None
    return SpaceSpec(fw, doc["s"])


def weights_to_doc(seq):
    if isinstance(seq, PolyDecay):
        d = {"kind": "poly", "a": seq.a}
    elif isinstance(seq, Geometric):
        d = {"kind": "geometric", "c": seq.c}
    elif isinstance(seq, Constant):
        return {"kind": "constant", "g": seq.g}
    else:
        return {"kind": "explicit", "prefix": list(seq.prefix), "tail": seq.tail}
    if seq.scale != 1.0:
        d["scale"] = seq.scale
    return d


def space_to_doc(space):
    doc = {"family": space.family.value, "alpha": space.alpha,
           "weights": weights_to_doc(space.fw.weights), "s": space.s}
    if space.fw.omega is not None:
        doc["omega"] = space.fw.omega
    return doc


def load_space(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from None
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return parse_space_doc(doc)


# ---------------------------------------------------------------------------
# output helpers

def fmt(x):
    """Locale-free text: exact integers, shortest round-trip floats ("1" for 1.0)."""
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return repr(float(x)).removesuffix(".0")


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, allow_nan=False, default=_json_default) + "\n"


def _json_default(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(type(v).__name__)


def _finite_or_none(v):
    return v if v is None or np.isfinite(v) else None


# ---------------------------------------------------------------------------
# commands

def _eps_list(args):
    if args.eps_grid:
        lo, hi, count = args.eps_grid
        count = int(count)
        if not (0 < lo <= hi < 1) or count < 1:
            raise DomainError("--eps-grid needs 0 < MIN <= MAX < 1 and COUNT >= 1")
        return [float(v) for v in np.geomspace(lo, hi, count)]
    if args.eps:
        try:
            return [float(v) for v in args.eps.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse --eps {args.eps!r}") from None
    raise UsageError("give --eps or --eps-grid")


def cmd_complexity(args):
    space = load_space(args.spec)
    rows = []
    for eps in _eps_list(args):
        rep = complexity_report(space, eps)
        rows.append({"epsilon": eps, "count": rep.count, "zeta_bound": _finite_or_none(rep.zeta_bound)})
    if args.format == "json":
        return _json(rows)
    return csv_text(["epsilon", "count", "zeta_bound"], [list(r.values()) for r in rows])


def cmd_error_curve(args):
    space = load_space(args.spec)
    if args.nmax is None or args.nmax < 0:
        raise UsageError("--nmax must be a non-negative integer")
    errs = minimal_errors(space, args.nmax)
    rows = [(n, float(e)) for n, e in enumerate(errs)]
    if args.format == "json":
        return _json([{"n": n, "error": e} for n, e in rows])
    return csv_text(["n", "error"], rows)


def cmd_tractability(args):
    space = load_space(args.spec)
    rep = tractability_report(space.fw.weights, space.alpha, space.family,
                              info_class=args.info_class, problem=PROBLEM_NAMES[args.problem])
    doc = {"family": rep.family.value, "alpha": rep.alpha, "weights": weights_to_doc(rep.weights),
           "class": rep.info_class, "problem": rep.problem, "supported": rep.supported,
           "note": rep.note, "entries": [e.to_dict() for e in rep.entries]}
    text = _json(doc)
    if not rep.supported:
        raise UnsupportedCombination(rep.entries[0].basis, text)
    return text


def cmd_wce(args):
    space = load_space(args.spec)
    if not args.rule:
        raise UsageError("--rule is required")
    try:
        rule = read_rule_csv(args.rule)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    raw = wce_squared(space, rule)
    doc = {"wce": float(np.sqrt(max(0.0, raw))), "wce_squared_raw": raw, "nonneg": rule.nonneg,
           "nodes": len(rule)}
    if rule.nonneg:
        doc["lower_bound"] = space_lower_bound(space, len(rule))
    return _json(doc)


def cmd_verify(args):
    summary = verify.run_suite(args.suite, seed=args.seed)
    args.failed = not summary["passed"]
    return _json(summary)


def build_parser():
    p = argparse.ArgumentParser(prog="hermite-ibc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("--spec", required=True, help="space specification JSON file")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    c = common(sub.add_parser("complexity", help="information complexity n(eps) under linear information"))
    c.add_argument("--eps", help="comma-separated eps values")
    c.add_argument("--eps-grid", nargs=3, type=float, metavar=("MIN", "MAX", "COUNT"))
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.set_defaults(func=cmd_complexity)

    e = common(sub.add_parser("error-curve", help="minimal errors e(n), n = 0..NMAX"))
    e.add_argument("--nmax", type=int, required=True)
    e.add_argument("--format", choices=("csv", "json"), default="csv")
    e.set_defaults(func=cmd_error_curve)

    t = common(sub.add_parser("tractability", help="tractability verdicts as JSON"))
    t.add_argument("--class", dest="info_class", choices=("all", "std"), default="all")
    t.add_argument("--problem", choices=tuple(PROBLEM_NAMES), default="app")
    t.add_argument("--format", choices=("json",), default="json")
    t.set_defaults(func=cmd_tractability)

    w = common(sub.add_parser("wce", help="worst-case integration error of a rule"))
    w.add_argument("--rule", required=True, help="CSV with header w,x1,...,xs")
    w.add_argument("--format", choices=("json",), default="json")
    w.set_defaults(func=cmd_wce)

    v = common(sub.add_parser("verify", help="run seeded self-checks"), spec=False)
    v.add_argument("suite", choices=("bounds", "kernels", "norms", "spectra", "all"))
    v.add_argument("--format", choices=("json",), default="json")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.failed = False
    try:
        text = args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedCombination as exc:
        msg, *rest = exc.args
        if rest:
            _emit(rest[0], args.out)
        print(f"unsupported: {msg}", file=sys.stderr)
        return 4
    except (DomainError, DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(text, args.out)
    return 1 if args.failed else 0


if __name__ == "__main__":
    sys.exit(main())
