"""``stackyaut`` command-line front end.

Exit codes: 0 ok, 1 domain violation, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import jsonschema

from .abelian import FgAbelianGroup
from .fans import Fan
from .gale import BetaMap, character_kernel, gale_dual, verify_sequences
from .lattice import imat
from .schemas import DOCUMENT, PAYLOADS
from .stacky import StackyFan, theorem_shadow, validate_stacky_fan
from .twogroups import (
    FiniteCrossedModule,
    FiniteGroup,
    crossed_module_of,
    interchange_failures,
    pi1,
    pi2,
    same_crossed_module,
    two_group,
    verify_crossed_module,
)
from .weighted import verify_prop_4_4, weighted_pgl

OK, VIOLATION, INPUT_ERROR = 0, 1, 2
ROUND_TRIP_LIMIT = 64


class InputError(Exception):
    pass


# -- input ---------------------------------------------------------------------------


def _check(node, schema, path, prefix):
    try:
        jsonschema.validate(node, schema)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in prefix + tuple(e.absolute_path)) or "document"
        raise InputError(f"{path}: schema violation at {where}: {e.message}") from None


def load_document(path: str, kinds) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON ({e.msg} at line {e.lineno})") from None
    _check(doc, DOCUMENT, path, ())
    _check(doc["payload"], PAYLOADS[doc["kind"]], path, ("payload",))
    if doc["kind"] not in kinds:
        raise InputError(f"{path}: kind {doc['kind']!r} not accepted here (expected {', '.join(kinds)})")
    return doc


def _group(spec) -> FgAbelianGroup:
    return FgAbelianGroup.standard(spec["free_rank"], spec["torsion"])


def stacky_fan_from(payload) -> StackyFan:
    f = payload["fan"]
    fan = Fan(f["dim"], f["rays"], f["cones"], tuple(f["multipliers"]) if "multipliers" in f else None)
    if len(fan.multipliers) != fan.n:
        raise InputError("fan multipliers must match the rays")
    n = payload["n"]
    return StackyFan(n["free_rank"], n["torsion"], fan, payload["beta"])


def beta_from_matrix(payload) -> BetaMap:
    N = _group(payload["n"])
    rows = payload["matrix"]
    if len(rows) != N.ngens:
        raise InputError(f"matrix has {len(rows)} rows, N has {N.ngens} generators")
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InputError("matrix rows have different lengths")
    ncols = widths.pop() if widths else 0
    m = imat(rows, rows=len(rows), cols=ncols)
    return BetaMap(N, [list(m[:, j]) for j in range(ncols)])


def finite_group_from(spec) -> FiniteGroup:
    try:
        if "table" in spec:
            return FiniteGroup(spec["table"])
        if "torsion" in spec:
            return FiniteGroup.abelian(spec["torsion"])
        return FiniteGroup.symmetric(spec["symmetric"])
    except ValueError as e:
        raise InputError(f"bad group: {e}") from None


def crossed_module_from(payload) -> FiniteCrossedModule:
    g2, g1 = finite_group_from(payload["g2"]), finite_group_from(payload["g1"])
    try:
        return FiniteCrossedModule(g2, g1, payload["phi"], payload.get("action"))
    except ValueError as e:
        raise InputError(str(e)) from None


def _weights_arg(values) -> list:
    try:
        q = [int(v) for v in values]
    except ValueError:
        raise InputError(f"weights must be integers: {' '.join(values)}") from None
    if len(q) < 2 or any(x < 1 for x in q):
        raise InputError("need at least two positive weights")
    return q


# -- commands -----------------------------------------------------------------------------


def _one_file(args) -> str:
    if len(args.inputs) != 1:
        raise InputError(f"{args.command} expects exactly one input file")
    return args.inputs[0]


def cmd_validate(args):
    doc = load_document(_one_file(args), ["stacky_fan"])
    sf = stacky_fan_from(doc["payload"])
    problems = validate_stacky_fan(sf)
    return doc, {"valid": not problems, "violations": problems}, not problems


def _gale_results(beta, gd) -> dict:
    seq = verify_sequences(beta, gd)
    return {
        "dg": gd.dg.to_json(),
        "weights": gd.weights,
        "torsion_part": gd.torsion_part,
        "mu": gd.mu.to_json(),
        "pi2_via_characters": list(character_kernel(gd)),
        "sequences": seq.to_json(),
    }


def cmd_gale_dual(args):
    doc = load_document(_one_file(args), ["stacky_fan", "matrix"])
    if doc["kind"] == "stacky_fan":
        sf = stacky_fan_from(doc["payload"])
        problems = validate_stacky_fan(sf)
        if problems:
            return doc, {"violations": problems}, False
        beta = sf.beta
    else:
        beta = beta_from_matrix(doc["payload"])
        if not beta.has_finite_cokernel:
            return doc, {"violations": ["beta has infinite cokernel"]}, False
    gd = gale_dual(beta)
    res = _gale_results(beta, gd)
    return doc, res, res["sequences"]["exact"]


def _weights_input(args, allow_positional=True):
    if args.weights:
        if args.inputs:
            raise InputError("give either --weights or an input file, not both")
        q = _weights_arg(args.weights)
        return {"weights": q}, q
    if not args.inputs:
        raise InputError("no weights given")
    if allow_positional and all(a.lstrip("-").isdigit() for a in args.inputs):
        q = _weights_arg(args.inputs)
        return {"weights": q}, q
    path = _one_file(args)
    doc = load_document(path, ["weights", "stacky_fan"] if not allow_positional else ["weights"])
    if doc["kind"] == "weights":
        return doc, doc["payload"]["weights"]
    return doc, None


def cmd_wps(args):
    echo, q = _weights_input(args)
    rep = verify_prop_4_4(q)
    return echo, rep.to_json(), rep.ok


def cmd_aut2(args):
    echo, q = _weights_input(args, allow_positional=False)
    if q is not None:
        return echo, weighted_pgl(q).to_json(), True
    sf = stacky_fan_from(echo["payload"])
    problems = validate_stacky_fan(sf)
    if problems:
        return echo, {"violations": problems}, False
    shadow = theorem_shadow(sf)
    return echo, shadow.to_json(), shadow.routes_agree


def cmd_xmod_check(args):
    doc = load_document(_one_file(args), ["crossed_module"])
    xm = crossed_module_from(doc["payload"])
    rep = verify_crossed_module(xm)
    res = rep.to_json()
    if rep.valid:
        res["pi1"] = pi1(xm).describe()
        res["pi2"] = pi2(xm).describe()
        if xm.g1.order * xm.g2.order <= ROUND_TRIP_LIMIT:
            res["interchange_failures"] = interchange_failures(xm)[0]
            back = crossed_module_of(two_group(xm), xm.g2.order)
            res["round_trip"] = same_crossed_module(back, xm)
    return doc, res, rep.valid


COMMANDS = {
    "validate": cmd_validate,
    "gale-dual": cmd_gale_dual,
    "wps": cmd_wps,
    "aut2": cmd_aut2,
    "xmod-check": cmd_xmod_check,
}


# -- output ------------------------------------------------------------------------------


def _is_matrix(v) -> bool:
    return isinstance(v, list) and v and all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in v)


def _render(value, indent: int, out: list, key=None):
    pad = "  " * indent
    head = f"{pad}{key}:" if key is not None else pad.rstrip()
    if isinstance(value, dict):
        if key is not None:
            out.append(head)
        for k, v in value.items():
            _render(v, indent + (key is not None), out, k)
    elif _is_matrix(value):
        out.append(head)
        width = max((len(str(x)) for r in value for x in r), default=1)
        for r in value:
            out.append(pad + "  [" + " ".join(str(x).rjust(width) for x in r) + "]")
    elif isinstance(value, list) and any(isinstance(x, (dict, list)) for x in value):
        out.append(head)
        for i, v in enumerate(value):
            _render(v, indent + 1, out, f"- {i}")
    else:
        if isinstance(value, list):
            text = "[" + ", ".join(str(x) for x in value) + "]"
        elif isinstance(value, bool):
            text = "yes" if value else "no"
        else:
            text = str(value)
        out.append(f"{head} {text}")


def render_text(report: dict) -> str:
    out: list = []
    _render(report, 0, out)
    return "\n".join(out) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stackyaut", description="Stacky fans, Gale duality and automorphism 2-groups.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--format", choices=["json", "text"], default="text")
        s.add_argument("--weights", nargs="+", metavar="Q")
        s.add_argument("--timing", action="store_true", help="append wall-clock timing (breaks byte-determinism)")
        s.add_argument("inputs", nargs="*", metavar="file")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    start = time.perf_counter()
    try:
        echo, results, ok = COMMANDS[args.command](args)
    except InputError as e:
        print(f"stackyaut: input error: {e}", file=sys.stderr)
        return INPUT_ERROR
    report = {"command": args.command, "input": echo, "results": results, "status": "ok" if ok else "violations"}
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    sys.stdout.write(render_json(report) if args.format == "json" else render_text(report))
    return OK if ok else VIOLATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
